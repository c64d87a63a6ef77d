use crate::error::{domain, Error, Result};

pub const DEFAULT_2F1_TOLERANCE: f64 = 1e-12;
pub const MAX_2F1_TERMS: usize = 1_000_000;

/// Result of a truncated `2F1` series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1 {
    pub value: f64,
    /// Number of terms summed.
    pub terms: usize,
    /// Geometric-tail estimate of the truncation error.
    pub error_estimate: f64,
}

/// Gauss hypergeometric series `Σ (a)_i (b)_i / (c)_i x^i / i!` on `0 <= x < 1`.
///
/// Summation stops once the geometric bound on the remainder,
/// `|t_i| r / (1 - r)` with `r` the current term ratio, drops below `tol`.
/// Terminating series (`a` or `b` a nonpositive integer) stop exactly.
pub fn gauss_2f1_series(a: f64, b: f64, c: f64, x: f64, tol: f64) -> Result<Hyp2F1> {
    if c <= 0.0 && c.fract() == 0.0 {
        return domain(format!("2F1 lower parameter c = {c} is a nonpositive integer"));
    }
    if !(0.0..1.0).contains(&x) {
        if x >= 1.0 {
            return Err(Error::NonConvergence {
                terms: 0,
                estimate: f64::INFINITY,
            });
        }
        return domain(format!("2F1 series evaluated only on [0, 1), got x = {x}"));
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut i = 0usize;
    loop {
        let fi = i as f64;
        let ratio = (a + fi) * (b + fi) / ((c + fi) * (fi + 1.0)) * x;
        let next = term * ratio;
        i += 1;
        if next == 0.0 {
            return Ok(Hyp2F1 {
                value: sum,
                terms: i,
                error_estimate: 0.0,
            });
        }
        sum += next;
        term = next;
        // Ratio of the following term: once it sits below one and the ratios
        // are decreasing towards x, the tail is dominated by a geometric series.
        let fi = i as f64;
        let r = ((a + fi) * (b + fi) / ((c + fi) * (fi + 1.0)) * x).abs();
        let estimate = if r < 1.0 {
            let r_bound = r.max(x);
            term.abs() * r_bound / (1.0 - r_bound)
        } else {
            f64::INFINITY
        };
        if estimate < tol {
            return Ok(Hyp2F1 {
                value: sum,
                terms: i + 1,
                error_estimate: estimate,
            });
        }
        if i >= MAX_2F1_TERMS {
            return Err(Error::NonConvergence {
                terms: i,
                estimate,
            });
        }
    }
}
