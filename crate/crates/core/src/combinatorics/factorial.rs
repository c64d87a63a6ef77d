use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::scalar::{LogScalar, Scalar};

/// Rising factorial `x (x+1) ... (x+m-1)`; the empty product is one.
pub fn rising_factorial<T: Scalar>(x: &T, m: u64) -> T {
    (0..m).fold(T::one(), |acc, i| acc * (x.clone() + T::from_u64(i)))
}

/// Falling factorial with unit step, `x (x-1) ... (x-m+1)`.
///
/// Vanishes when `x` is an integer in `0..m`; for `x = xi - 1` this is what
/// stops a model with `xi` species from showing more than `xi` blocks.
pub fn falling_factorial_step<T: Scalar>(x: &T, m: u64) -> T {
    (0..m).fold(T::one(), |acc, i| acc * (x.clone() - T::from_u64(i)))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `1/Γ(x)`, zero at the poles `x = 0, -1, -2, ...`.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        0.0
    } else {
        1.0 / statrs::function::gamma::gamma(x)
    }
}

/// `Γ(x+t)/Γ(x)` in log space: the rising factorial with a real exponent.
pub fn rising_factorial_real_exponent(x: f64, t: f64) -> Result<LogScalar> {
    if x.is_nan() || x + t <= 0.0 || x <= 0.0 {
        return domain(format!(
            "rising factorial (x)_t needs x > 0 and x + t > 0, got x = {x}, t = {t}"
        ));
    }
    if t == 0.0 {
        return Ok(LogScalar::ONE);
    }
    Ok(LogScalar::from_ln(ln_gamma(x + t) - ln_gamma(x)))
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    // each partial product is itself a binomial coefficient, so the division is exact
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Lah number `C(n-1, k-1) n!/k!`: partitions of an `n`-set into `k`
/// nonempty ordered lists.
pub fn lah_number(n: u64, k: u64) -> Result<BigInt> {
    if k < 1 || k > n {
        return domain(format!("Lah number L({n},{k}) needs 1 <= k <= n"));
    }
    Ok(binomial(n - 1, k - 1) * falling_ratio(n, k))
}

/// Non-central Lah number `(n!/k!) C(n-r-1, n-k)`; zero when the binomial's
/// upper index falls below its lower one (including negative upper index).
pub fn noncentral_lah(n: u64, k: u64, r: i64) -> Result<BigInt> {
    if k < 1 || k > n {
        return domain(format!(
            "non-central Lah number S({n},{k};{r}) needs 1 <= k <= n"
        ));
    }
    let top = n as i128 - r as i128 - 1;
    let bottom = (n - k) as i128;
    if top < bottom {
        return Ok(BigInt::zero());
    }
    Ok(binomial(top as u64, bottom as u64) * falling_ratio(n, k))
}

/// `n!/k!` for `k <= n`.
fn falling_ratio(n: u64, k: u64) -> BigInt {
    (k + 1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rising_factorial_examples() {
        assert_eq!(rising_factorial(&q(3, 1), 4), q(360, 1));
        assert_eq!(rising_factorial(&q(7, 3), 0), q(1, 1));
        // (1-γ)_{k-1} at γ = 1/2, k = 3; equals Γ(5/2)/Γ(1/2)
        let direct = rising_factorial(&(q(1, 1) - q(1, 2)), 2);
        assert_eq!(direct, q(3, 4));
        let via_gamma = rising_factorial_real_exponent(0.5, 2.0).unwrap().value();
        assert!((via_gamma - 0.75).abs() < 1e-14);
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial_step(&q(4, 1), 2), q(12, 1));
        assert_eq!(falling_factorial_step(&q(1, 1), 2), q(0, 1));
        assert_eq!(falling_factorial_step(&q(5, 1), 3), q(60, 1));
        assert_eq!(falling_factorial_step(&5.0f64, 3), 60.0);
    }

    #[test]
    fn real_exponent_examples() {
        assert!((rising_factorial_real_exponent(0.5, 1.0).unwrap().value() - 0.5).abs() < 1e-14);
        assert_eq!(rising_factorial_real_exponent(2.7, 0.0).unwrap().value(), 1.0);
        // Γ(1.5)/Γ(0.8): high-precision reference values
        // Γ(1.5) = 0.886226925452758013649..., Γ(0.8) = 1.164229713725303373636...
        let expected = 0.886_226_925_452_758 / 1.164_229_713_725_303_4;
        let got = rising_factorial_real_exponent(0.8, 0.7).unwrap().value();
        assert!((got / expected - 1.0).abs() < 1e-13, "{got} vs {expected}");
    }

    #[test]
    fn real_exponent_domain() {
        assert!(rising_factorial_real_exponent(0.0, 1.0).is_err());
        assert!(rising_factorial_real_exponent(0.5, -0.5).is_err());
        assert!(rising_factorial_real_exponent(-1.0, 3.0).is_err());
    }

    #[test]
    fn real_exponent_agrees_with_products() {
        for &x in &[0.1, 0.5, 1.5, 3.0] {
            for t in 0..=20u64 {
                let exact = rising_factorial(&x, t);
                let logged = rising_factorial_real_exponent(x, t as f64).unwrap().value();
                assert!((logged / exact - 1.0).abs() < 1e-12, "x={x}, t={t}");
            }
        }
    }

    #[test]
    fn lah_examples() {
        assert_eq!(lah_number(3, 2).unwrap(), BigInt::from(6));
        assert_eq!(lah_number(9, 9).unwrap(), BigInt::from(1));
        assert_eq!(lah_number(4, 2).unwrap(), BigInt::from(36));
        assert!(lah_number(3, 0).is_err());
        assert!(lah_number(3, 4).is_err());
    }

    #[test]
    fn lah_recurrence() {
        for n in 1..20u64 {
            for k in 1..=n + 1 {
                let lhs = lah_number(n + 1, k).unwrap();
                let left = if k >= 2 { lah_number(n, k - 1).unwrap() } else { BigInt::zero() };
                let right = if k <= n { lah_number(n, k).unwrap() } else { BigInt::zero() };
                assert_eq!(lhs, left + BigInt::from(n + k) * right, "n={n}, k={k}");
            }
        }
    }

    #[test]
    fn noncentral_lah_examples() {
        assert_eq!(noncentral_lah(3, 2, 0).unwrap(), BigInt::from(6));
        // r = -(n + k) with n = 3, k = 2
        assert_eq!(noncentral_lah(2, 1, -5).unwrap(), BigInt::from(12));
        assert!(noncentral_lah(2, 3, 0).is_err());
        // upper index below lower index
        assert_eq!(noncentral_lah(3, 1, 2).unwrap(), BigInt::zero());
        for n in 1..=15 {
            for k in 1..=n {
                assert_eq!(noncentral_lah(n, k, 0).unwrap(), lah_number(n, k).unwrap());
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn recip_gamma_poles() {
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-3.0), 0.0);
        assert!((recip_gamma(-0.5) + 0.5 / std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }
}
