use crate::error::{Error, Result};
use crate::special::{self, Alpha, EvalOptions, SpecialFunctionKind};

/// `(q0^2 + v0^2)^-1 sum_{n <= N} (-t)^n / n! (q0 q^(n)(t) + v0 p^(n)(t))` for
/// `q = q0 C + v0 S` and `p^(n)(t) = a^-n q^(n+1)(t / a)`. Equals 1 as `N` grows.
pub fn conservation_invariant(alpha: Alpha, q0: f64, v0: f64, t: f64, n_terms: usize) -> Result<f64> {
    let norm = q0 * q0 + v0 * v0;
    if !(norm > 0.0) {
        return Err(Error::InvalidInput("q0 and v0 both zero".into()));
    }
    let opts = EvalOptions::default();
    let a = alpha.value();
    let q = |n: u32, x: f64| -> Result<f64> {
        let c = special::eval_derivative(SpecialFunctionKind::CosLike, n, alpha, x, &opts)?.value;
        let s = special::eval_derivative(SpecialFunctionKind::SinLike, n, alpha, x, &opts)?.value;
        Ok(q0 * c + v0 * s)
    };
    let mut sum = 0.0;
    let mut coef = 1.0;
    let mut last = 0.0;
    for n in 0..=n_terms as u32 {
        if n > 0 {
            coef *= -t / n as f64;
        }
        let p = libm::pow(a, -(n as f64)) * q(n + 1, t / a)?;
        last = coef * (q0 * q(n, t)? + v0 * p);
        sum += last;
    }
    if !sum.is_finite() || (t != 0.0 && last.abs() > 0.1 * norm) {
        return Err(Error::TruncationFailure { x: t, terms: n_terms });
    }
    Ok(sum / norm)
}

/// Residual `|y'(x) - g A x^(g-1) y(a x)|` of `y(x) = E_{a^g}(A x^g)`.
pub fn variable_coeff_check(alpha: Alpha, gamma: f64, amp: f64, x: f64) -> Result<f64> {
    if !(gamma >= 1.0) || !(x > 0.0) {
        return Err(Error::InvalidInput("need gamma >= 1 and x > 0".into()));
    }
    let ag = Alpha::new(libm::pow(alpha.value(), gamma))?;
    let opts = EvalOptions::default();
    let inner = amp * libm::pow(x, gamma);
    let dy = special::eval_derivative(SpecialFunctionKind::ExpLike, 1, ag, inner, &opts)?.value * gamma * amp * libm::pow(x, gamma - 1.0);
    let lag = special::eval(SpecialFunctionKind::ExpLike, ag, amp * libm::pow(alpha.value() * x, gamma), &opts)?.value;
    Ok((dy - gamma * amp * libm::pow(x, gamma - 1.0) * lag).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_at_origin_and_classical() {
        let a = Alpha::new(0.5).unwrap();
        assert!((conservation_invariant(a, 1.0, 2.0, 0.0, 0).unwrap() - 1.0).abs() < 1e-15);
        let one = Alpha::new(1.0).unwrap();
        assert!((conservation_invariant(one, 1.0, 0.0, 1.2, 40).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invariant_truncated() {
        let a = Alpha::new(0.5).unwrap();
        let i = conservation_invariant(a, 1.0, 2.0, 1.5, 40).unwrap();
        assert!((i - 1.0).abs() < 1e-10, "{i}");
    }

    #[test]
    fn power_coefficient_residuals() {
        let one = Alpha::new(1.0).unwrap();
        assert!(variable_coeff_check(one, 2.0, 1.0, 0.7).unwrap() < 1e-13);
        let a = Alpha::new(0.5).unwrap();
        assert!(variable_coeff_check(a, 2.0, 0.3, 1.1).unwrap() < 1e-8);
        assert!(variable_coeff_check(a, 1.0, -2.0, 1.1).unwrap() < 1e-12);
    }
}
