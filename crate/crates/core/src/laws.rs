//! Laws of the number of occupied blocks and of the latent number of species
//! `Ξ`: generalized Waring distributions, the prior and posterior of `Ξ`, the
//! posterior number of new blocks, and the mixture and Bayes identities tying
//! the model to the Fisher extremes.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Open01, Poisson, StandardNormal};

use crate::combinatorics::{binomial, lah_number, ln_gamma, noncentral_lah, rising_factorial,
    rising_factorial_real_exponent};
use crate::error::{domain, Result};
use crate::models::{weight_fisher, weight_psi, FisherExtreme, GnedinFisherPsi};
use crate::partition::{big_to_scalar, check_nk, GibbsWeights};
use crate::scalar::{LogScalar, Scalar};

/// Generalized Waring law on `{shift, shift + 1, ...}`:
/// `P(N = i) = (ρ)_η/i! · (a)_i (η)_i / (a+ρ)_{η+i}` for the pre-shift index `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedWaring {
    a: f64,
    eta: f64,
    rho: f64,
    shift: u64,
}

/// Outcome of a moment computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    Finite(f64),
    /// `E N^r` is infinite (`ρ <= r`).
    Nonexistent,
}

/// Terms summed explicitly before the power-law remainder takes over.
const SERIES_TERMS: u64 = 1_000_000;

impl GeneralizedWaring {
    pub fn new(a: f64, eta: f64, rho: f64, shift: u64) -> Result<Self> {
        if !(a > 0.0 && eta > 0.0 && rho > 0.0) || !(a + eta + rho).is_finite() {
            return domain(format!(
                "generalized Waring parameters must be positive, got a = {a}, eta = {eta}, rho = {rho}"
            ));
        }
        Ok(GeneralizedWaring { a, eta, rho, shift })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    /// `ln P(N = i)`, pre-shift index.
    pub fn ln_pmf(&self, i: u64) -> f64 {
        let (a, eta, rho) = (self.a, self.eta, self.rho);
        let i = i as f64;
        ln_gamma(rho + eta) - ln_gamma(rho) - ln_gamma(i + 1.0) + ln_gamma(a + i) - ln_gamma(a)
            + ln_gamma(eta + i)
            - ln_gamma(eta)
            - ln_gamma(a + rho + eta + i)
            + ln_gamma(a + rho)
    }

    /// `P(N = i)`, pre-shift index.
    pub fn pmf(&self, i: u64) -> f64 {
        self.ln_pmf(i).exp()
    }

    /// Mass at a point of the shifted support; zero below the shift.
    pub fn pmf_shifted(&self, x: u64) -> f64 {
        if x < self.shift {
            0.0
        } else {
            self.pmf(x - self.shift)
        }
    }

    /// Pre-shift masses `P(N = 0), P(N = 1), ...` by the term-ratio recurrence.
    pub fn pmf_iter(&self) -> impl Iterator<Item = f64> + '_ {
        let mut i = 0u64;
        let mut p = self.pmf(0);
        std::iter::from_fn(move || {
            let out = p;
            let fi = i as f64;
            p *= (self.a + fi) * (self.eta + fi) / ((fi + 1.0) * (self.a + self.rho + self.eta + fi));
            i += 1;
            Some(out)
        })
    }

    /// `C` in `P(N = i) ~ C i^{-(1+ρ)}`.
    pub fn tail_constant(&self) -> f64 {
        (ln_gamma(self.a + self.rho) + ln_gamma(self.eta + self.rho)
            - ln_gamma(self.a)
            - ln_gamma(self.eta)
            - ln_gamma(self.rho))
        .exp()
    }

    /// Estimate of `Σ_{i > big_n} i^r P(N = i)` from the local power law at
    /// `big_n`, accurate to relative order `1/big_n`.
    pub fn tail_estimate(&self, big_n: u64, r: u32) -> f64 {
        let x = big_n as f64;
        let local_c = self.pmf(big_n) * x.powf(1.0 + self.rho);
        let e = self.rho - r as f64;
        local_c * (x + 0.5).powf(-e) / e
    }

    /// Raw moment `E N^r` of the pre-shift variable; finite iff `ρ > r`.
    pub fn moment(&self, order: u32) -> Moment {
        if self.rho <= order as f64 {
            return Moment::Nonexistent;
        }
        let head: f64 = self
            .pmf_iter()
            .take(SERIES_TERMS as usize + 1)
            .enumerate()
            .map(|(i, p)| (i as f64).powi(order as i32) * p)
            .sum();
        Moment::Finite(head + self.tail_estimate(SERIES_TERMS, order))
    }

    /// Mean of the pre-shift variable, `aη/(ρ-1)` when `ρ > 1`.
    pub fn mean(&self) -> Moment {
        if self.rho > 1.0 {
            Moment::Finite(self.a * self.eta / (self.rho - 1.0))
        } else {
            Moment::Nonexistent
        }
    }

    /// One draw of the pre-shift variable: `p ~ Beta(ρ, a)`, then a negative
    /// binomial count with `P(N = i | p) ∝ (η)_i/i! (1-p)^i`. The odds
    /// `(1-p)/p` and the Poisson rate are carried in log space so that tiny
    /// values of `p` (heavy tail) do not underflow.
    pub fn sample_unshifted<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let ln_x = ln_gamma_variate(self.rho, rng);
        let ln_y = ln_gamma_variate(self.a, rng);
        let ln_g = ln_gamma_variate(self.eta, rng);
        poisson_from_ln_rate(ln_g + ln_y - ln_x, rng)
    }
}

/// Draws land on the shifted support.
impl Distribution<u64> for GeneralizedWaring {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.shift.saturating_add(self.sample_unshifted(rng))
    }
}

/// `ln G` with `G ~ Gamma(shape, 1)`; small shapes use `G(s+1) U^{1/s}`.
fn ln_gamma_variate<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let g: f64 = Gamma::new(shape + 1.0, 1.0).expect("positive shape").sample(rng);
        let u: f64 = rng.sample(Open01);
        g.ln() + u.ln() / shape
    } else {
        let g: f64 = Gamma::new(shape, 1.0).expect("positive shape").sample(rng);
        g.ln()
    }
}

/// Poisson count for rate `exp(ln_rate)`; normal approximation above `1e12`,
/// saturating at `u64::MAX`.
fn poisson_from_ln_rate<R: Rng + ?Sized>(ln_rate: f64, rng: &mut R) -> u64 {
    let lambda = ln_rate.exp();
    if lambda <= 0.0 {
        return 0;
    }
    if lambda < 1e12 {
        let n: f64 = Poisson::new(lambda).expect("finite rate").sample(rng);
        return n as u64;
    }
    let z: f64 = rng.sample(StandardNormal);
    let v = (lambda + lambda.sqrt() * z).round();
    if v >= u64::MAX as f64 {
        u64::MAX
    } else {
        v.max(0.0) as u64
    }
}

pub fn waring_pmf(d: &GeneralizedWaring, i: u64) -> f64 {
    d.pmf(i)
}

pub fn waring_moment(d: &GeneralizedWaring, order: u32) -> Moment {
    d.moment(order)
}

/// The prior law of `Ξ`, a generalized Waring law with `a = 1-γ+ψ`,
/// `η = 1-ψ`, `ρ = γ` shifted to start at one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiPrior {
    gamma: f64,
    psi: f64,
}

impl XiPrior {
    pub fn new(model: &GnedinFisherPsi<f64>) -> Self {
        let (gamma, psi) = model.params();
        XiPrior { gamma, psi }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn waring(&self) -> GeneralizedWaring {
        GeneralizedWaring::new(1.0 - self.gamma + self.psi, 1.0 - self.psi, self.gamma, 1)
            .expect("valid model gives positive Waring parameters")
    }

    /// `(1-ψ)_{ξ-1} (1-γ+ψ)_{ξ-1} (γ)_{1-ψ} / (Γ(ξ) (1+ψ)_{ξ-ψ})` in log space.
    pub fn ln_pmf(&self, xi: u64) -> Result<f64> {
        if xi < 1 {
            return domain("the number of species is at least one");
        }
        let (g, p) = (self.gamma, self.psi);
        let t = xi as f64 - 1.0;
        let num = rising_factorial_real_exponent(1.0 - p, t)?
            * rising_factorial_real_exponent(1.0 - g + p, t)?
            * rising_factorial_real_exponent(g, 1.0 - p)?;
        let den = LogScalar::from_ln(ln_gamma(xi as f64))
            * rising_factorial_real_exponent(1.0 + p, xi as f64 - p)?;
        Ok((num / den).ln_abs())
    }

    pub fn pmf(&self, xi: u64) -> Result<f64> {
        Ok(self.ln_pmf(xi)?.exp())
    }

    /// `P(Ξ = 1) = Γ(γ+1-ψ) Γ(1+ψ) / Γ(γ)`.
    pub fn mass_at_one(&self) -> f64 {
        mass_at_one(self.gamma, self.psi)
    }

    /// Masses `P(Ξ = 1), P(Ξ = 2), ...` via
    /// `P(ξ+1)/P(ξ) = (ξ-ψ)(ξ-γ+ψ)/(ξ(ξ+1))`.
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        let mut xi = 1u64;
        let mut p = self.mass_at_one();
        std::iter::from_fn(move || {
            let out = p;
            p *= self.ratio(xi);
            xi += 1;
            Some(out)
        })
    }

    fn ratio(&self, xi: u64) -> f64 {
        let x = xi as f64;
        (x - self.psi) * (x - self.gamma + self.psi) / (x * (x + 1.0))
    }

    /// `c` in `P(Ξ = ξ) ~ c ξ^{-(1+γ)}`.
    pub fn tail_constant(&self) -> f64 {
        let (g, p) = (self.gamma, self.psi);
        (ln_gamma(1.0 + g - p) + ln_gamma(1.0 + p)
            - ln_gamma(1.0 - p)
            - ln_gamma(1.0 - g + p)
            - ln_gamma(g))
        .exp()
    }

    /// Envelope `M` with `P(Ξ = ξ) <= M c ξ^{-(1+γ)}` for all `ξ > xi_max`.
    /// The ratio `P(Ξ = ξ) ξ^{1+γ}/c` behaves like `1 + A/ξ` with `A > 0`; the
    /// envelope takes its value just past `xi_max` and doubles the excess.
    pub(crate) fn envelope(&self, xi_max: u64) -> Result<f64> {
        let x = xi_max + 1;
        let r = (self.ln_pmf(x)? + (1.0 + self.gamma) * (x as f64).ln()).exp() / self.tail_constant();
        Ok(r.max(1.0) + (r - 1.0).abs())
    }

    /// Upper bound on `Σ_{ξ > xi_max} P(Ξ = ξ) ξ^{-extra_decay}`.
    pub fn tail_bound(&self, xi_max: u64, extra_decay: f64) -> Result<f64> {
        if xi_max < 1 {
            return domain("tail bound needs xi_max >= 1");
        }
        let e = self.gamma + extra_decay;
        Ok(self.tail_constant() * self.envelope(xi_max)? * (xi_max as f64).powf(-e) / e)
    }

    /// Smallest power of two `ξmax` whose prior tail bound is below `tol`.
    pub fn truncation_point(&self, tol: f64) -> Result<u64> {
        let mut x = 1u64;
        while self.tail_bound(x, 0.0)? >= tol {
            if x >= 1 << 62 {
                return domain(format!("prior tail cannot be truncated below {tol}"));
            }
            x *= 2;
        }
        Ok(x)
    }
}

/// `γ Γ(γ+1-ψ) Γ(1+ψ) / Γ(γ+1)`, which is exactly `γ` at `ψ = 0` and its
/// mirror `ψ = γ`.
pub(crate) fn mass_at_one(gamma: f64, psi: f64) -> f64 {
    use statrs::function::gamma::gamma as g;
    if psi == 0.0 || psi == gamma {
        return gamma;
    }
    gamma * (g(gamma + 1.0 - psi) * g(1.0 + psi) / g(gamma + 1.0))
}

pub fn xi_prior_pmf(model: &GnedinFisherPsi<f64>, xi: u64) -> Result<f64> {
    XiPrior::new(model).pmf(xi)
}

pub fn xi_prior_tail_constant(model: &GnedinFisherPsi<f64>) -> f64 {
    XiPrior::new(model).tail_constant()
}

/// Posterior of `Ξ` given `K_n = k`: generalized Waring with `a = k-γ+ψ`,
/// `η = k-ψ`, `ρ = n+γ-k`, supported on `{k, k+1, ...}`.
pub fn posterior_waring(model: &GnedinFisherPsi<f64>, n: u64, k: u64) -> Result<GeneralizedWaring> {
    check_nk(n, k)?;
    let (g, p) = model.params();
    let (n, k) = (n as f64, k as f64);
    GeneralizedWaring::new(k - g + p, k - p, n + g - k, k as u64)
}

/// `P(Ξ = ξ | K_n = k)`; zero for `ξ < k`.
pub fn xi_posterior_pmf(model: &GnedinFisherPsi<f64>, n: u64, k: u64, xi: u64) -> Result<f64> {
    if xi < 1 {
        return domain("the number of species is at least one");
    }
    Ok(posterior_waring(model, n, k)?.pmf_shifted(xi))
}

/// The closed form `(k-ψ)_{x-1}(k-γ+ψ)_{x-1}(n+γ-k)_{k-ψ} / (Γ(x)(n+ψ)_{k-ψ+x-1})`
/// taken literally in `x >= 1`. It is the law of `Ξ - k + 1`, so
/// `P(Ξ = ξ | K_n = k)` is this at `x = ξ - k + 1`.
pub fn xi_posterior_printed(model: &GnedinFisherPsi<f64>, n: u64, k: u64, x: u64) -> Result<f64> {
    check_nk(n, k)?;
    if x < 1 {
        return domain("printed posterior is indexed from one");
    }
    let (g, p) = model.params();
    let (nf, kf, t) = (n as f64, k as f64, x as f64 - 1.0);
    let num = rising_factorial_real_exponent(kf - p, t)?
        * rising_factorial_real_exponent(kf - g + p, t)?
        * rising_factorial_real_exponent(nf + g - kf, kf - p)?;
    let den = LogScalar::from_ln(ln_gamma(x as f64))
        * rising_factorial_real_exponent(nf + p, kf - p + t)?;
    Ok((num / den).value())
}

/// One-parameter (`ψ = 0`) posterior in the form
/// `(n-1)!/(k-1)! Γ(γ+n)/Γ(γ+n-k) (k-γ)_j Γ(k+j) / (Γ(j+1) Γ(k+j+n))`,
/// the law of the number of unseen species `Ξ - k` at `j`.
pub fn unseen_species_pmf(gamma: f64, n: u64, k: u64, j: u64) -> Result<f64> {
    check_nk(n, k)?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return domain(format!("one-parameter model needs 0 < gamma < 1, got {gamma}"));
    }
    let (nf, kf, jf) = (n as f64, k as f64, j as f64);
    let ln = ln_gamma(nf) - ln_gamma(kf) + ln_gamma(gamma + nf) - ln_gamma(gamma + nf - kf)
        + rising_factorial_real_exponent(kf - gamma, jf)?.ln_abs()
        + ln_gamma(kf + jf)
        - ln_gamma(jf + 1.0)
        - ln_gamma(kf + jf + nf);
    Ok(ln.exp())
}

/// `P(K_n = k) = C(n-1,k-1) (n!/k!) V_{n,k}` for the `(γ, ψ)` model; index
/// `k - 1`.
pub fn blocks_pmf_two_param<T: Scalar>(model: &GnedinFisherPsi<T>, n: u64) -> Result<Vec<T>> {
    if n == 0 {
        return domain("blocks law needs n >= 1");
    }
    (1..=n)
        .map(|k| {
            let ratio: num_bigint::BigInt = (k + 1..=n).product::<num_bigint::BigInt>();
            let coeff = binomial(n - 1, k - 1) * ratio;
            Ok(big_to_scalar::<T>(&coeff) * weight_psi(model, n, k)?)
        })
        .collect()
}

/// `ln P(K_n = k)`, index `k - 1`, from log-gamma functions only; usable for
/// `n` in the thousands.
pub fn blocks_ln_pmf(model: &GnedinFisherPsi<f64>, n: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return domain("blocks law needs n >= 1");
    }
    let (g, p) = model.params();
    let nf = n as f64;
    let ln_v0 = -ln_gamma(g) - ln_gamma(1.0 - p) - ln_gamma(1.0 - g + p) + ln_gamma(1.0 + p)
        + ln_gamma(1.0 + g - p)
        - ln_gamma(nf + p)
        - ln_gamma(nf + g - p);
    Ok((1..=n)
        .map(|k| {
            let kf = k as f64;
            let ln_lah = ln_gamma(nf) - ln_gamma(kf) - ln_gamma(nf - kf + 1.0) + ln_gamma(nf + 1.0)
                - ln_gamma(kf + 1.0);
            let ln_v = ln_v0 + ln_gamma(g + nf - kf) + ln_gamma(kf - p) + ln_gamma(kf - g + p);
            ln_lah + ln_v
        })
        .collect())
}

/// Total variation between the law of `K_n` and the prior of `Ξ` restricted
/// to `{1..n}`: `½ Σ_{k<=n} |P(K_n = k) - P(Ξ = k)|`.
pub fn prior_limit_tv(model: &GnedinFisherPsi<f64>, n: u64) -> Result<f64> {
    let law = blocks_ln_pmf(model, n)?;
    let prior = XiPrior::new(model);
    Ok(0.5
        * law
            .iter()
            .zip(prior.iter())
            .map(|(ln_p, q)| (ln_p.exp() - q).abs())
            .sum::<f64>())
}

/// Probability that `m` further balls open exactly `k_star` new blocks given
/// `K_n = k`:
/// `C(m,k*) (γ+n-k)_{m-k*} (n+k+k*)_{m-k*} (k-ψ)_{k*} (k-γ+ψ)_{k*} / ((n+ψ)_m (n+γ-ψ)_m)`.
pub fn new_blocks_posterior<T: Scalar>(
    model: &GnedinFisherPsi<T>,
    n: u64,
    k: u64,
    m: u64,
    k_star: u64,
) -> Result<T> {
    check_nk(n, k)?;
    if k_star > m {
        return domain(format!("new blocks k* = {k_star} exceed new balls m = {m}"));
    }
    let g = model.gamma();
    let p = model.psi();
    let t = |v: u64| T::from_u64(v);
    let num = big_to_scalar::<T>(&binomial(m, k_star))
        * rising_factorial(&(g.clone() + t(n) - t(k)), m - k_star)
        * rising_factorial(&t(n + k + k_star), m - k_star)
        * rising_factorial(&(t(k) - p.clone()), k_star)
        * rising_factorial(&(t(k) - g.clone() + p.clone()), k_star);
    let den = rising_factorial(&(t(n) + p.clone()), m)
        * rising_factorial(&(t(n) + g.clone() - p.clone()), m);
    Ok(num / den)
}

/// Same law for any genus -1 Gibbs model:
/// `V_{n+m,k+k*}/V_{n,k} · S(m, k*; -(n+k))` with non-central Lah numbers.
/// For `k* = 0` the Lah number is the rising factorial `(n+k)_m`.
pub fn new_blocks_posterior_gibbs<T: Scalar, M: GibbsWeights<T> + ?Sized>(
    model: &M,
    n: u64,
    k: u64,
    m: u64,
    k_star: u64,
) -> Result<T> {
    check_nk(n, k)?;
    if k_star > m {
        return domain(format!("new blocks k* = {k_star} exceed new balls m = {m}"));
    }
    let v = model.weight(n, k)?;
    if v.is_zero() {
        return domain(format!("K_{n} = {k} has probability zero under this model"));
    }
    let lah: T = if k_star == 0 {
        rising_factorial(&T::from_u64(n + k), m)
    } else {
        big_to_scalar(&noncentral_lah(m, k_star, -((n + k) as i64))?)
    };
    Ok(model.weight(n + m, k + k_star)? / v * lah)
}

/// Truncated check of the mixture over Fisher extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureReport {
    pub n: u64,
    pub k: u64,
    pub xi_max: u64,
    /// `Σ_{ξ=k}^{ξmax} P(Ξ = ξ) V^ξ_{n,k}`.
    pub partial_sum: f64,
    /// `V_{n,k}` of the `(γ, ψ)` model.
    pub target: f64,
    pub tail_bound: f64,
    pub ok: bool,
}

pub fn verify_mixture(model: &GnedinFisherPsi<f64>, n: u64, k: u64, xi_max: u64) -> Result<MixtureReport> {
    check_nk(n, k)?;
    let prior = XiPrior::new(model);
    let mut partial = 0.0;
    for (i, mass) in prior.iter().take(xi_max as usize).enumerate() {
        let xi = i as u64 + 1;
        if xi < k {
            continue;
        }
        let v: f64 = weight_fisher(&FisherExtreme::new(xi)?, n, k)?;
        partial += mass * v;
    }
    let target: f64 = weight_psi(model, n, k)?;
    // V^ξ_{n,k} <= ξ^{k-n}
    let tail_bound = prior.tail_bound(xi_max.max(1), (n - k) as f64)?;
    let ok = (partial - target).abs() <= tail_bound + 1e-10;
    Ok(MixtureReport {
        n,
        k,
        xi_max,
        partial_sum: partial,
        target,
        tail_bound,
        ok,
    })
}

/// Both sides of `P(Ξ = ξ) V^ξ_{n,k} = P(Ξ = ξ | K_n = k) V_{n,k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BayesReport {
    pub n: u64,
    pub k: u64,
    pub xi: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub relative_difference: f64,
    pub ok: bool,
}

pub fn verify_bayes_identity(model: &GnedinFisherPsi<f64>, n: u64, k: u64, xi: u64) -> Result<BayesReport> {
    check_nk(n, k)?;
    let lhs = xi_prior_pmf(model, xi)? * weight_fisher::<f64>(&FisherExtreme::new(xi)?, n, k)?;
    let rhs = xi_posterior_pmf(model, n, k, xi)? * weight_psi(model, n, k)?;
    let scale = lhs.abs().max(rhs.abs());
    let relative_difference = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
    Ok(BayesReport {
        n,
        k,
        xi,
        lhs,
        rhs,
        relative_difference,
        ok: relative_difference <= 1e-9,
    })
}

/// `P(K_n = k)` for any genus -1 Gibbs model through the Lah numbers; kept
/// here so that the two blocks-law routes can be compared.
pub fn blocks_pmf_gibbs<T: Scalar, M: GibbsWeights<T> + ?Sized>(model: &M, n: u64, k: u64) -> Result<T> {
    check_nk(n, k)?;
    Ok(model.weight(n, k)? * big_to_scalar(&lah_number(n, k)?))
}
