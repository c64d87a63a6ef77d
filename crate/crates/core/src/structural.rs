//! Structural distribution: the law of the limiting frequency of the box that
//! holds ball 1. It has an atom at one (the single-species component) and a
//! density on `(0, 1)` given by a Gauss hypergeometric function.

use rand::Rng;

use crate::allocation::{beta_two, TwoStageSampler};
use crate::combinatorics::{gauss_2f1_series, recip_gamma, Hyp2F1, DEFAULT_2F1_TOLERANCE};
use crate::error::{domain, Result};
use crate::laws::XiPrior;
use crate::models::GnedinFisherPsi;

/// Below this `y` the density switches to the expansion around `y = 0`.
const SMALL_Y: f64 = 0.5;
/// Half-width of the band around `γ = 1` where the expansion around `y = 0`
/// degenerates and the hypergeometric factor is interpolated in `γ`.
const GAMMA_ONE_BAND: f64 = 1e-3;

/// Atom at one and density `K y ₂F₁(2-ψ, 2-γ+ψ; 2; 1-y)` with
/// `K = atom (1-ψ)(1-γ+ψ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralLaw {
    gamma: f64,
    psi: f64,
    atom: f64,
}

impl StructuralLaw {
    pub fn new(model: &GnedinFisherPsi<f64>) -> Self {
        let (gamma, psi) = model.params();
        let atom = crate::laws::mass_at_one(gamma, psi);
        StructuralLaw { gamma, psi, atom }
    }

    /// `P(P̃₁ = 1) = Γ(γ+1-ψ) Γ(1+ψ) / Γ(γ)`.
    pub fn atom(&self) -> f64 {
        self.atom
    }

    fn prefactor(&self) -> f64 {
        self.atom * (1.0 - self.psi) * (1.0 - self.gamma + self.psi)
    }

    /// Density of the continuous part at `0 < y < 1`.
    pub fn density(&self, y: f64) -> Result<f64> {
        check_open_unit(y)?;
        Ok(self.prefactor() * y.powf(self.gamma - 1.0) * self.g(y)?)
    }

    /// `G(y) = ₂F₁(ψ, γ-ψ; 2; 1-y)`, so that the density is `K y^{γ-1} G(y)`
    /// (Euler's transformation). Defined on `[0, 1]`.
    fn g(&self, y: f64) -> Result<f64> {
        g_factor(self.gamma, self.psi, y)
    }

    /// The density as the series `Σ_z (2-ψ)_z (2-γ+ψ)_z / (z! (z+1)!) y (1-y)^z`
    /// times the prefactor, with its truncation report. Slow as `y → 0`.
    pub fn density_series(&self, y: f64) -> Result<Hyp2F1> {
        check_open_unit(y)?;
        let (g, p) = (self.gamma, self.psi);
        let h = gauss_2f1_series(2.0 - p, 2.0 - g + p, 2.0, 1.0 - y, DEFAULT_2F1_TOLERANCE)?;
        let scale = self.prefactor() * y;
        Ok(Hyp2F1 {
            value: scale * h.value,
            terms: h.terms,
            error_estimate: scale * h.error_estimate,
        })
    }

    /// `K ₂F₁(2-ψ, 2-γ+ψ; 2; 1-y)` without the factor `y`. This does not
    /// integrate to `1 - atom`; kept for comparison.
    pub fn density_without_y(&self, y: f64) -> Result<f64> {
        Ok(self.density(y)? / y)
    }

    /// Mass of the continuous part up to `y`, by quadrature in `u = t^γ`
    /// (which removes the `t^{γ-1}` singularity at the origin).
    pub fn continuous_cdf(&self, y: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&y) {
            return domain(format!("structural cdf needs 0 <= y <= 1, got {y}"));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let g = self.gamma;
        let upper = y.powf(g);
        // validate once so the integrand can unwrap
        self.g(y)?;
        let out = quadrature::double_exponential::integrate(
            |u: f64| self.g(u.max(0.0).powf(1.0 / g)).unwrap_or(f64::NAN),
            0.0,
            upper,
            1e-12,
        );
        let value = self.prefactor() / g * out.integral;
        if !value.is_finite() {
            return domain(format!("structural cdf did not evaluate at y = {y}"));
        }
        Ok(value)
    }

    /// `atom + ∫₀¹ density`.
    pub fn total_mass(&self) -> Result<f64> {
        Ok(self.atom + self.continuous_cdf(1.0)?)
    }

    /// Distribution function of the full law (atom included at `y = 1`).
    pub fn cdf(&self, y: f64) -> Result<f64> {
        if y >= 1.0 {
            return Ok(1.0);
        }
        if y <= 0.0 {
            return Ok(0.0);
        }
        self.continuous_cdf(y)
    }
}

fn check_open_unit(y: f64) -> Result<()> {
    if !(y > 0.0 && y < 1.0) {
        return domain(format!("structural density needs 0 < y < 1, got {y}"));
    }
    Ok(())
}

fn g_factor(gamma: f64, psi: f64, y: f64) -> Result<f64> {
    if y >= SMALL_Y {
        return Ok(gauss_2f1_series(psi, gamma - psi, 2.0, 1.0 - y, DEFAULT_2F1_TOLERANCE)?.value);
    }
    if (gamma - 1.0).abs() > GAMMA_ONE_BAND {
        return g_near_zero(gamma, psi, y);
    }
    // cubic interpolation in γ through 1 ± δ, 1 ± 2δ with δ = 2 * band
    let d = 2.0 * GAMMA_ONE_BAND;
    let nodes = [1.0 - 2.0 * d, 1.0 - d, 1.0 + d, 1.0 + 2.0 * d];
    let mut value = 0.0;
    for (i, &xi) in nodes.iter().enumerate() {
        let mut basis = 1.0;
        for (j, &xj) in nodes.iter().enumerate() {
            if i != j {
                basis *= (gamma - xj) / (xi - xj);
            }
        }
        value += basis * g_near_zero(xi, psi, y)?;
    }
    Ok(value)
}

/// `G` through the connection formula at `1 - z = y`, with `s = 2 - γ`:
/// `G = Γ(s)/(Γ(2-ψ)Γ(2-γ+ψ)) F(ψ, γ-ψ; 1-s; y)
///    + y^s Γ(-s)/(Γ(ψ)Γ(γ-ψ)) F(2-ψ, 2-γ+ψ; 1+s; y)`.
fn g_near_zero(gamma: f64, psi: f64, y: f64) -> Result<f64> {
    let s = 2.0 - gamma;
    let a = psi;
    let b = gamma - psi;
    let c1 = statrs::function::gamma::gamma(s) * recip_gamma(2.0 - a) * recip_gamma(2.0 - b);
    let f1 = gauss_2f1_series(a, b, 1.0 - s, y, DEFAULT_2F1_TOLERANCE)?.value;
    let c2 = statrs::function::gamma::gamma(-s) * recip_gamma(a) * recip_gamma(b);
    let second = if c2 == 0.0 || y == 0.0 {
        0.0
    } else {
        c2 * y.powf(s) * gauss_2f1_series(2.0 - a, 2.0 - b, 1.0 + s, y, DEFAULT_2F1_TOLERANCE)?.value
    };
    Ok(c1 * f1 + second)
}

pub fn structural_atom(model: &GnedinFisherPsi<f64>) -> f64 {
    StructuralLaw::new(model).atom()
}

pub fn structural_density(model: &GnedinFisherPsi<f64>, y: f64) -> Result<f64> {
    StructuralLaw::new(model).density(y)
}

/// Direct evaluation against the mixture `Σ_{ξ>=2} P(Ξ = ξ) Beta(2, ξ-1)(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralMixtureReport {
    pub y: f64,
    pub xi_max: u64,
    pub direct: f64,
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub ok: bool,
}

pub fn structural_mixture_pdf_check(
    model: &GnedinFisherPsi<f64>,
    y: f64,
    xi_max: u64,
) -> Result<StructuralMixtureReport> {
    check_open_unit(y)?;
    if xi_max < 2 {
        return domain("mixture check needs xi_max >= 2");
    }
    let direct = structural_density(model, y)?;
    let prior = XiPrior::new(model);
    let mut partial = 0.0;
    // Beta(2, ξ-1) density: ξ(ξ-1) y (1-y)^{ξ-2}
    let mut power = 1.0;
    for (i, mass) in prior.iter().take(xi_max as usize).enumerate().skip(1) {
        let xi = (i + 1) as f64;
        partial += mass * xi * (xi - 1.0) * y * power;
        power *= 1.0 - y;
    }
    // P(Ξ = ξ) <= M c ξ^{-1-γ}; the remaining terms decay geometrically
    let (gamma, _) = model.params();
    let x = xi_max as f64;
    let first_bound = prior.tail_constant() * prior.envelope(xi_max)?
        * (x + 1.0).powf(1.0 - gamma)
        * y
        * (1.0 - y).powf(x - 1.0);
    let ratio = ((x + 2.0) / (x + 1.0)).powf((1.0 - gamma).max(0.0)) * (1.0 - y);
    let tail_bound = if ratio < 1.0 { first_bound / (1.0 - ratio) } else { f64::INFINITY };
    let ok = (direct - partial).abs() <= tail_bound + 1e-9 * direct.max(1.0);
    Ok(StructuralMixtureReport {
        y,
        xi_max,
        direct,
        partial_sum: partial,
        tail_bound,
        ok,
    })
}

/// Exact draws: `Ξ` from its prior, then one for `Ξ = 1` and
/// `Beta(2, Ξ - 1)` otherwise.
#[derive(Debug, Clone)]
pub struct StructuralSampler {
    xi: TwoStageSampler,
}

impl StructuralSampler {
    pub fn new(model: &GnedinFisherPsi<f64>) -> Self {
        StructuralSampler {
            xi: TwoStageSampler::new(model),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let xi = self.xi.sample_xi(rng);
        if xi == 1 {
            1.0
        } else {
            beta_two((xi - 1) as f64, rng)
        }
    }
}
