use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::basis::{BasisTerm, ClosedFormSolution};
use crate::error::{Error, Result};
use crate::special::{Alpha, EvalOptions, SeriesValue};
use crate::sum::Neumaier;

/// Taylor coefficients of the solution of `y' = b y(a x) + q(x)`, `y(0) = a0`,
/// from `a_{n+1} = (b a^n a_n + q_n) / (n + 1)`. Forcing coefficients beyond
/// the supplied list are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeriesSolution {
    pub alpha: Alpha,
    pub beta: f64,
    pub a0: f64,
    pub forcing_coeffs: Vec<f64>,
    pub generated_coeffs: Vec<f64>,
}

impl PowerSeriesSolution {
    pub fn coeff(&mut self, n: usize) -> f64 {
        if self.generated_coeffs.is_empty() {
            self.generated_coeffs.push(self.a0);
        }
        let a = self.alpha.value();
        while self.generated_coeffs.len() <= n {
            let k = self.generated_coeffs.len() - 1;
            let qk = self.forcing_coeffs.get(k).copied().unwrap_or(0.0);
            let ak = self.generated_coeffs[k];
            let next = (self.beta * libm::pow(a, k as f64) * ak + qk) / (k as f64 + 1.0);
            self.generated_coeffs.push(next);
        }
        self.generated_coeffs[n]
    }

    pub fn eval(&mut self, x: f64, opts: &EvalOptions) -> Result<SeriesValue> {
        let a = self.alpha.value();
        let tail_start = self.forcing_coeffs.len();
        let mut acc = Neumaier::new();
        let mut abs_sum = 0.0;
        let mut run = 0;
        let mut xn = 1.0;
        for n in 0..opts.max_terms {
            let t = self.coeff(n) * xn;
            acc.add(t);
            abs_sum += t.abs();
            let level = (opts.rel_tol * acc.value().abs()).max(f64::EPSILON * abs_sum);
            if t.abs() <= level {
                run += 1;
            } else {
                run = 0;
            }
            if n >= tail_start {
                let r = (self.beta * libm::pow(a, n as f64) * x).abs() / (n as f64 + 1.0);
                let next = (self.coeff(n + 1) * xn * x).abs();
                if r < 1.0 && run >= 3 {
                    let tail = next / (1.0 - r);
                    if tail <= level {
                        return Ok(SeriesValue {
                            value: acc.value(),
                            abs_error_estimate: tail + 2.0 * f64::EPSILON * (n as f64 + 2.0) * abs_sum,
                            terms_used: n + 1,
                        });
                    }
                }
            }
            xn *= x;
        }
        Err(Error::TruncationFailure { x, terms: opts.max_terms })
    }

    /// Finite forcing is a polynomial; for `beta != 0` the solution is a
    /// combination of `E(beta x)` and a polynomial.
    pub fn closed_form(&self) -> Option<ClosedFormSolution> {
        if self.beta == 0.0 {
            return None;
        }
        let a = self.alpha.value();
        let b = self.beta;
        let mut terms = Vec::new();
        let mut lead = self.a0;
        let mut poly = alloc::vec![0.0; self.forcing_coeffs.len()];
        let mut fact = 1.0;
        for (k, qk) in self.forcing_coeffs.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            let kk = fact * qk / (libm::pow(b, k as f64 + 1.0) * self.alpha.tri_pow(k as u32 + 1));
            lead += kk;
            let mut c = 1.0;
            for (n, pn) in poly.iter_mut().enumerate().take(k + 1) {
                if n > 0 {
                    c *= libm::pow(a, n as f64 - 1.0) * b / n as f64;
                }
                *pn -= kk * c;
            }
        }
        terms.push(BasisTerm::exp(lead, 0, b));
        for (n, c) in poly.into_iter().enumerate() {
            if c != 0.0 {
                terms.push(BasisTerm::exp(c, n as u32, 0.0));
            }
        }
        Some(ClosedFormSolution::new(self.alpha, terms))
    }
}

pub fn solve_first_order_series(alpha: Alpha, beta: f64, a0: f64, forcing: &[f64]) -> PowerSeriesSolution {
    let mut s = PowerSeriesSolution {
        alpha,
        beta,
        a0,
        forcing_coeffs: forcing.to_vec(),
        generated_coeffs: Vec::new(),
    };
    s.coeff(forcing.len() + 1);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_exp_minus_one() {
        let mut s = solve_first_order_series(Alpha::new(1.0).unwrap(), 1.0, 0.0, &[1.0]);
        let mut f = 1.0;
        for n in 1..15 {
            f *= n as f64;
            assert!((s.coeff(n) - 1.0 / f).abs() < 1e-16);
        }
    }

    #[test]
    fn homogeneous_matches_exp_like() {
        let a = Alpha::new(0.4).unwrap();
        let mut s = solve_first_order_series(a, -1.5, 2.0, &[]);
        let v = s.eval(1.3, &EvalOptions::default()).unwrap().value;
        let e = crate::special::eval(crate::SpecialFunctionKind::ExpLike, a, -1.5 * 1.3, &EvalOptions::default()).unwrap().value;
        assert!((v - 2.0 * e).abs() < 1e-14);
    }

    #[test]
    fn polynomial_closed_form_agrees() {
        let a = Alpha::new(0.5).unwrap();
        let mut s = solve_first_order_series(a, 1.0, 1.0, &[0.3, -1.0, 0.25]);
        let cf = s.closed_form().unwrap();
        for x in [0.0, 0.4, 1.1, 2.0] {
            let v = s.eval(x, &EvalOptions::default()).unwrap().value;
            assert!((v - cf.eval(x).unwrap()).abs() < 1e-12, "{x}");
        }
    }
}
