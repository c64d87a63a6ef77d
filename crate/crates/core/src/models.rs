//! Concrete genus -1 Gibbs models: the Gnedin-Fisher family in its quadratic
//! `(γ, ζ)` form and its factorized `(γ, ψ)` form, the one-parameter `γ`
//! special case, and the Fisher extreme models with a fixed number `ξ` of
//! species.

use crate::combinatorics::{falling_factorial_step, rising_factorial};
use crate::error::{Error, Result};
use crate::partition::{check_nk, GibbsWeights, OccupancyCounts};
use crate::scalar::Scalar;

/// Classification of `q(i) = i² - γ i + ζ` over the positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZetaValidity {
    /// `q(i) > 0` for every `i >= 1`: unboundedly many species are possible.
    Infinite,
    /// `q > 0` on `1..i0` and `q(i0) = 0`: at most `i0` species.
    Finite { i0: u64 },
    /// No valid model; `first_violation` is the first offending `i`
    /// (0 when `γ` itself is out of range).
    Invalid { first_violation: u64, reason: String },
}

impl ZetaValidity {
    pub fn is_valid(&self) -> bool {
        !matches!(self, ZetaValidity::Invalid { .. })
    }
}

pub fn validate_zeta<T: Scalar>(gamma: &T, zeta: &T) -> ZetaValidity {
    if gamma.is_negative() {
        return ZetaValidity::Invalid {
            first_violation: 0,
            reason: format!("gamma must be nonnegative, got {}", gamma.render()),
        };
    }
    let vertex = gamma.to_f64() / 2.0;
    let mut i = 1u64;
    loop {
        let fi = T::from_u64(i);
        let q = fi.clone() * fi.clone() - gamma.clone() * fi + zeta.clone();
        let scale = (i * i) as f64 + gamma.to_f64().abs() * i as f64 + zeta.to_f64().abs();
        if q.is_negligible(scale) {
            if gamma.is_zero() {
                // the denominator factor l² + γl + ζ vanishes at l = i too
                return ZetaValidity::Invalid {
                    first_violation: i,
                    reason: format!("i² - γi + ζ = 0 at i = {i} with γ = 0 (zero denominator)"),
                };
            }
            return ZetaValidity::Finite { i0: i };
        }
        if q.is_negative() {
            return ZetaValidity::Invalid {
                first_violation: i,
                reason: format!("i² - γi + ζ = {} < 0 at i = {i}", q.render()),
            };
        }
        // q is increasing beyond the vertex, so positivity persists
        if i as f64 >= vertex {
            return ZetaValidity::Infinite;
        }
        i += 1;
    }
}

/// The `(γ, ζ)` model with EPPF weights
/// `(γ)_{n-k} ∏_{i<k} (i² - γi + ζ) / ∏_{l<n} (l² + γl + ζ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GnedinFisherZeta<T> {
    gamma: T,
    zeta: T,
    i0: Option<u64>,
}

impl<T: Scalar> GnedinFisherZeta<T> {
    pub fn new(gamma: T, zeta: T) -> Result<Self> {
        match validate_zeta(&gamma, &zeta) {
            ZetaValidity::Infinite => Ok(GnedinFisherZeta {
                gamma,
                zeta,
                i0: None,
            }),
            ZetaValidity::Finite { i0 } => Ok(GnedinFisherZeta {
                gamma,
                zeta,
                i0: Some(i0),
            }),
            ZetaValidity::Invalid {
                first_violation,
                reason,
            } => Err(Error::InvalidParameter(format!(
                "(gamma, zeta) = ({}, {}) violates the quadratic condition at i = {first_violation}: {reason}",
                gamma.render(),
                zeta.render()
            ))),
        }
    }

    pub fn gamma(&self) -> &T {
        &self.gamma
    }

    pub fn zeta(&self) -> &T {
        &self.zeta
    }

    /// Root `i0` of the quadratic in the finite-species case.
    pub fn i0(&self) -> Option<u64> {
        self.i0
    }

    pub fn validity(&self) -> ZetaValidity {
        match self.i0 {
            Some(i0) => ZetaValidity::Finite { i0 },
            None => ZetaValidity::Infinite,
        }
    }

    fn lower(&self, i: u64) -> T {
        let fi = T::from_u64(i);
        fi.clone() * fi.clone() - self.gamma.clone() * fi + self.zeta.clone()
    }

    fn upper(&self, l: u64) -> T {
        let fl = T::from_u64(l);
        fl.clone() * fl.clone() + self.gamma.clone() * fl + self.zeta.clone()
    }

    pub fn to_f64(&self) -> GnedinFisherZeta<f64> {
        GnedinFisherZeta {
            gamma: self.gamma.to_f64(),
            zeta: self.zeta.to_f64(),
            i0: self.i0,
        }
    }
}

pub fn weight_zeta<T: Scalar>(model: &GnedinFisherZeta<T>, n: u64, k: u64) -> Result<T> {
    check_nk(n, k)?;
    if model.i0.is_some_and(|i0| k > i0) {
        return Ok(T::zero());
    }
    let num = (1..k).fold(rising_factorial(&model.gamma, n - k), |acc, i| acc * model.lower(i));
    let den = (1..n).fold(T::one(), |acc, l| acc * model.upper(l));
    Ok(num / den)
}

impl<T: Scalar> GibbsWeights<T> for GnedinFisherZeta<T> {
    fn weight(&self, n: u64, k: u64) -> Result<T> {
        weight_zeta(self, n, k)
    }
}

/// The `(γ, ψ)` model, `ψ ∈ [0, 1)` and `0 < γ < ψ + 1`, with weights
/// `(γ)_{n-k} (1-ψ)_{k-1} (1-γ+ψ)_{k-1} / ((1+ψ)_{n-1} (1+γ-ψ)_{n-1})`.
///
/// It is the `(γ, ζ)` model with `ζ = ψ(γ - ψ)`, i.e. the quadratics factor
/// over the reals with roots `ψ` and `γ - ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GnedinFisherPsi<T> {
    gamma: T,
    psi: T,
}

impl<T: Scalar> GnedinFisherPsi<T> {
    pub fn new(gamma: T, psi: T) -> Result<Self> {
        let one = T::one();
        if psi.is_negative() || psi >= one {
            return Err(Error::InvalidParameter(format!(
                "psi must lie in [0, 1), got {}",
                psi.render()
            )));
        }
        if !gamma.is_positive() || gamma >= psi.clone() + one {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (0, psi + 1) = (0, {}), got {}",
                (psi.clone() + T::one()).render(),
                gamma.render()
            )));
        }
        Ok(GnedinFisherPsi { gamma, psi })
    }

    pub fn gamma(&self) -> &T {
        &self.gamma
    }

    pub fn psi(&self) -> &T {
        &self.psi
    }

    /// `ζ = ψ(γ - ψ)`.
    pub fn zeta(&self) -> T {
        self.psi.clone() * (self.gamma.clone() - self.psi.clone())
    }

    /// The other real root, `γ - ψ`, when it is itself an admissible `ψ`.
    pub fn swapped(&self) -> Option<Self> {
        GnedinFisherPsi::new(self.gamma.clone(), self.gamma.clone() - self.psi.clone()).ok()
    }

    /// `g0(i) = i + γ` of the multiplicative weight form.
    pub fn g0(&self, i: u64) -> T {
        T::from_u64(i) + self.gamma.clone()
    }

    /// `g1(j) = (j - ψ)(j - γ + ψ)`.
    pub fn g1(&self, j: u64) -> T {
        let fj = T::from_u64(j);
        (fj.clone() - self.psi.clone()) * (fj - self.gamma.clone() + self.psi.clone())
    }

    /// `g(l) = (l + ψ)(l + γ - ψ)`.
    pub fn g(&self, l: u64) -> T {
        let fl = T::from_u64(l);
        (fl.clone() + self.psi.clone()) * (fl + self.gamma.clone() - self.psi.clone())
    }

    pub fn to_f64(&self) -> GnedinFisherPsi<f64> {
        GnedinFisherPsi {
            gamma: self.gamma.to_f64(),
            psi: self.psi.to_f64(),
        }
    }
}

impl GnedinFisherPsi<f64> {
    /// `(γ, ψ)` as plain floats.
    pub fn params(&self) -> (f64, f64) {
        (self.gamma, self.psi)
    }
}

pub fn weight_psi<T: Scalar>(model: &GnedinFisherPsi<T>, n: u64, k: u64) -> Result<T> {
    check_nk(n, k)?;
    let one = T::one();
    let (g, p) = (&model.gamma, &model.psi);
    let num = rising_factorial(g, n - k)
        * rising_factorial(&(one.clone() - p.clone()), k - 1)
        * rising_factorial(&(one.clone() - g.clone() + p.clone()), k - 1);
    let den = rising_factorial(&(one.clone() + p.clone()), n - 1)
        * rising_factorial(&(one + g.clone() - p.clone()), n - 1);
    Ok(num / den)
}

impl<T: Scalar> GibbsWeights<T> for GnedinFisherPsi<T> {
    fn weight(&self, n: u64, k: u64) -> Result<T> {
        weight_psi(self, n, k)
    }
}

pub fn psi_to_zeta<T: Scalar>(model: &GnedinFisherPsi<T>) -> GnedinFisherZeta<T> {
    // i² - γi + ψ(γ-ψ) has the roots ψ and γ-ψ, both below 1, so it is
    // positive at every i >= 1
    GnedinFisherZeta::new(model.gamma.clone(), model.zeta())
        .expect("a valid (gamma, psi) model maps to a valid (gamma, zeta) model")
}

/// Outcome of rewriting a `(γ, ζ)` model in `(γ, ψ)` form.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiRepresentation<T> {
    /// The root is representable in the backend.
    Exact(GnedinFisherPsi<T>),
    /// Real root exists but is irrational; only a float model is available.
    Inexact(GnedinFisherPsi<f64>),
    /// Complex roots (`γ² - 4ζ < 0`) or no root in the admissible range.
    NotRepresentable { discriminant: T, reason: String },
}

/// Finds `ψ` with `ζ = ψ(γ - ψ)`, preferring the smaller root `(γ - √(γ² - 4ζ))/2`
/// and falling back to the larger one when only it is admissible.
pub fn zeta_to_psi<T: Scalar>(model: &GnedinFisherZeta<T>) -> PsiRepresentation<T> {
    let (g, z) = (&model.gamma, &model.zeta);
    let disc = g.clone() * g.clone() - T::from_u64(4) * z.clone();
    if disc.is_negative() {
        return PsiRepresentation::NotRepresentable {
            discriminant: disc,
            reason: "complex conjugate roots".to_string(),
        };
    }
    let two = T::from_u64(2);
    match disc.sqrt_exact() {
        Some(root) => {
            let small = (g.clone() - root.clone()) / two.clone();
            let large = (g.clone() + root) / two;
            match GnedinFisherPsi::new(g.clone(), small)
                .or_else(|_| GnedinFisherPsi::new(g.clone(), large))
            {
                Ok(m) => PsiRepresentation::Exact(m),
                Err(_) => PsiRepresentation::NotRepresentable {
                    discriminant: disc,
                    reason: "real roots outside the admissible range psi in [0,1), gamma < psi + 1"
                        .to_string(),
                },
            }
        }
        None => {
            let (gf, df) = (g.to_f64(), disc.to_f64().sqrt());
            match GnedinFisherPsi::new(gf, (gf - df) / 2.0)
                .or_else(|_| GnedinFisherPsi::new(gf, (gf + df) / 2.0))
            {
                Ok(m) => PsiRepresentation::Inexact(m),
                Err(_) => PsiRepresentation::NotRepresentable {
                    discriminant: disc,
                    reason: "real roots outside the admissible range psi in [0,1), gamma < psi + 1"
                        .to_string(),
                },
            }
        }
    }
}

/// The one-parameter model `γ ∈ (0, 1)` with weights
/// `(k-1)!/(n-1)! (1-γ)_{k-1} (γ)_{n-k} / (1+γ)_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParameter<T> {
    gamma: T,
}

impl<T: Scalar> OneParameter<T> {
    pub fn new(gamma: T) -> Result<Self> {
        if !gamma.is_positive() || gamma >= T::one() {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (0, 1), got {}",
                gamma.render()
            )));
        }
        Ok(OneParameter { gamma })
    }

    pub fn gamma(&self) -> &T {
        &self.gamma
    }
}

impl<T: Scalar> GibbsWeights<T> for OneParameter<T> {
    fn weight(&self, n: u64, k: u64) -> Result<T> {
        check_nk(n, k)?;
        let one = T::one();
        let g = &self.gamma;
        let ratio = (k..n).fold(T::one(), |acc, i| acc / T::from_u64(i));
        Ok(ratio * rising_factorial(&(one.clone() - g.clone()), k - 1) * rising_factorial(g, n - k)
            / rising_factorial(&(one + g.clone()), n - 1))
    }
}

/// Fisher's extreme model with exactly `ξ` equally likely species: the
/// partition induced by sampling from a symmetric Dirichlet(1, ..., 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FisherExtreme {
    xi: u64,
}

impl FisherExtreme {
    pub fn new(xi: u64) -> Result<Self> {
        if xi == 0 {
            return Err(Error::InvalidParameter("xi must be at least 1".to_string()));
        }
        Ok(FisherExtreme { xi })
    }

    pub fn xi(&self) -> u64 {
        self.xi
    }
}

/// `V_{n,k} = (ξ-1)(ξ-2)...(ξ-k+1) / ((ξ+1)...(ξ+n-1))`; zero once `k > ξ`.
pub fn weight_fisher<T: Scalar>(model: &FisherExtreme, n: u64, k: u64) -> Result<T> {
    check_nk(n, k)?;
    if k > model.xi {
        return Ok(T::zero());
    }
    let xi = T::from_u64(model.xi);
    Ok(falling_factorial_step(&(xi.clone() - T::one()), k - 1)
        / rising_factorial(&(xi + T::one()), n - 1))
}

impl<T: Scalar> GibbsWeights<T> for FisherExtreme {
    fn weight(&self, n: u64, k: u64) -> Result<T> {
        weight_fisher(self, n, k)
    }
}

/// Predictive probabilities for ball `n + 1`: `p_old[j]` joins block `j`,
/// `p_new` opens a new block.
#[derive(Debug, Clone, PartialEq)]
pub struct OneStepRules<T> {
    pub p_old: Vec<T>,
    pub p_new: T,
}

impl<T: Scalar> OneStepRules<T> {
    pub fn total(&self) -> T {
        self.p_old
            .iter()
            .cloned()
            .fold(self.p_new.clone(), |acc, p| acc + p)
    }
}

/// `p_j = (n-k+γ)(n_j+1)/D`, `p_0 = (k² - kγ + ψ(γ-ψ))/D` with
/// `D = n² + nγ + ψ(γ-ψ)`.
pub fn one_step_rules<T: Scalar>(
    model: &GnedinFisherPsi<T>,
    counts: &OccupancyCounts,
) -> OneStepRules<T> {
    quadratic_rules(&model.gamma, &model.zeta(), counts)
}

/// The same rules written with `ζ`; valid in the finite-species case too.
pub fn one_step_rules_zeta<T: Scalar>(
    model: &GnedinFisherZeta<T>,
    counts: &OccupancyCounts,
) -> OneStepRules<T> {
    quadratic_rules(&model.gamma, &model.zeta, counts)
}

fn quadratic_rules<T: Scalar>(gamma: &T, zeta: &T, counts: &OccupancyCounts) -> OneStepRules<T> {
    let n = T::from_u64(counts.n());
    let k = T::from_u64(counts.k());
    let den = n.clone() * n.clone() + n.clone() * gamma.clone() + zeta.clone();
    let old = (n - k.clone() + gamma.clone()) / den.clone();
    let p_old = counts
        .counts()
        .iter()
        .map(|&c| old.clone() * T::from_u64(c + 1))
        .collect();
    let p_new = (k.clone() * k.clone() - k * gamma.clone() + zeta.clone()) / den;
    OneStepRules { p_old, p_new }
}

/// Predictive rules of any Gibbs model as EPPF ratios:
/// `p_j = (n_j + 1) V_{n+1,k} / V_{n,k}` and `p_0 = V_{n+1,k+1} / V_{n,k}`.
pub fn predictive_rules<T: Scalar, M: GibbsWeights<T> + ?Sized>(
    model: &M,
    counts: &OccupancyCounts,
) -> Result<OneStepRules<T>> {
    let (n, k) = (counts.n(), counts.k());
    let v = model.weight(n, k)?;
    if v.is_zero() {
        return Err(Error::Domain(format!(
            "state {counts} has probability zero under the model"
        )));
    }
    let stay = model.weight(n + 1, k)? / v.clone();
    let p_old = counts
        .counts()
        .iter()
        .map(|&c| stay.clone() * T::from_u64(c + 1))
        .collect();
    let p_new = model.weight(n + 1, k + 1)? / v;
    Ok(OneStepRules { p_old, p_new })
}
