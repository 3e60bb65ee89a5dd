use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{self, Alpha, EvalOptions, SpecialFunctionKind};

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

/// `coeff * x^power * F(rate * alpha^power * x)`.
///
/// With a nonzero `growth` (only for `CosLike`/`SinLike`) the factor is
/// `Re`/`Im` of `E((growth + i rate) alpha^power x)`; with `growth = 0` this is
/// exactly `C`/`S` of `rate * alpha^power * x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisTerm {
    pub coeff: f64,
    pub power: u32,
    pub rate: f64,
    pub kind: SpecialFunctionKind,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub growth: f64,
}

impl BasisTerm {
    pub fn exp(coeff: f64, power: u32, rate: f64) -> Self {
        BasisTerm { coeff, power, rate, kind: SpecialFunctionKind::ExpLike, growth: 0.0 }
    }

    pub fn cos(coeff: f64, power: u32, rate: f64, growth: f64) -> Self {
        BasisTerm { coeff, power, rate, kind: SpecialFunctionKind::CosLike, growth }
    }

    pub fn sin(coeff: f64, power: u32, rate: f64, growth: f64) -> Self {
        BasisTerm { coeff, power, rate, kind: SpecialFunctionKind::SinLike, growth }
    }

    /// The `m`-th derivative of `F(mu x)` at `x`, `mu = rate * alpha^power`.
    fn factor_derivative(&self, alpha: Alpha, m: u32, x: f64, opts: &EvalOptions) -> Result<f64> {
        let scale = alpha.powi(self.power as i32);
        let am = alpha.powi(m as i32);
        let tri = alpha.tri_pow(m);
        match self.kind {
            SpecialFunctionKind::ExpLike => {
                if self.growth != 0.0 {
                    return Err(Error::InvalidInput("ExpLike terms take a real rate".into()));
                }
                let mu = self.rate * scale;
                if mu == 0.0 {
                    return Ok(if m == 0 { 1.0 } else { 0.0 });
                }
                let v = special::eval(SpecialFunctionKind::ExpLike, alpha, am * mu * x, opts)?.value;
                Ok(libm::pow(mu, m as f64) * tri * v)
            }
            SpecialFunctionKind::CosLike | SpecialFunctionKind::SinLike if self.growth == 0.0 => {
                let mu = self.rate * scale;
                let (k, sign, factor, s) = special::derivative_form(self.kind, m, alpha)?;
                if mu == 0.0 && m > 0 {
                    return Ok(0.0);
                }
                let v = special::eval(k, alpha, s * mu * x, opts)?.value;
                Ok(libm::pow(mu, m as f64) * sign * factor * v)
            }
            SpecialFunctionKind::CosLike | SpecialFunctionKind::SinLike => {
                let mu = Complex64::new(self.growth, self.rate) * scale;
                let (e, _) = special::exp_like_complex(alpha, mu * (am * x), opts)?;
                let v = mu.powu(m) * tri * e;
                Ok(if self.kind == SpecialFunctionKind::CosLike { v.re } else { v.im })
            }
            SpecialFunctionKind::LogLike => Err(Error::UnsupportedKind("LogLike")),
        }
    }

    pub fn derivative(&self, alpha: Alpha, m: u32, x: f64, opts: &EvalOptions) -> Result<f64> {
        let k = self.power;
        let mut total = 0.0;
        let mut binom = 1.0;
        // D^m (x^k G) = sum_j C(m, j) D^(m-j) x^k D^j G
        for j in 0..=m {
            if j > 0 {
                binom = binom * (m - j + 1) as f64 / j as f64;
            }
            let d = m - j;
            if d > k {
                continue;
            }
            let mut falling = 1.0;
            for i in 0..d {
                falling *= (k - i) as f64;
            }
            let xp = libm::pow(x, (k - d) as f64);
            if xp == 0.0 {
                continue;
            }
            total += binom * falling * xp * self.factor_derivative(alpha, j, x, opts)?;
        }
        Ok(self.coeff * total)
    }

    pub fn eval(&self, alpha: Alpha, x: f64, opts: &EvalOptions) -> Result<f64> {
        self.derivative(alpha, 0, x, opts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSolution {
    pub alpha: Alpha,
    pub terms: Vec<BasisTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ClosedFormSolution {
    pub fn new(alpha: Alpha, terms: Vec<BasisTerm>) -> Self {
        ClosedFormSolution { alpha, terms, warnings: Vec::new() }
    }

    pub fn zero(alpha: Alpha) -> Self {
        Self::new(alpha, Vec::new())
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.derivative(0, x)
    }

    pub fn derivative(&self, m: u32, x: f64) -> Result<f64> {
        let opts = EvalOptions::default();
        let mut s = 0.0;
        for t in &self.terms {
            s += t.derivative(self.alpha, m, x, &opts)?;
        }
        Ok(s)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= c;
        }
        out
    }

    pub fn plus(&self, other: &ClosedFormSolution) -> Self {
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().copied());
        out.warnings.extend(other.warnings.iter().cloned());
        out
    }

    /// Drops terms with zero coefficient.
    pub fn pruned(mut self) -> Self {
        self.terms.retain(|t| t.coeff != 0.0);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_matches_finite_difference() {
        let a = Alpha::new(0.6).unwrap();
        let o = EvalOptions::default();
        let t = BasisTerm::exp(1.3, 2, -0.8);
        let x = 0.9;
        let h = 1e-5;
        let fd = (t.eval(a, x + h, &o).unwrap() - t.eval(a, x - h, &o).unwrap()) / (2.0 * h);
        assert!((fd - t.derivative(a, 1, x, &o).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn complex_rate_reduces_to_real_functions() {
        let a = Alpha::new(0.7).unwrap();
        let o = EvalOptions::default();
        for m in 0..4 {
            let real = BasisTerm::cos(1.0, 1, 1.4, 0.0).derivative(a, m, 0.8, &o).unwrap();
            let cplx = BasisTerm::cos(1.0, 1, 1.4, 1e-300).derivative(a, m, 0.8, &o).unwrap();
            assert!((real - cplx).abs() < 1e-13, "{m}: {real} {cplx}");
            let real = BasisTerm::sin(1.0, 0, 1.4, 0.0).derivative(a, m, 0.8, &o).unwrap();
            let cplx = BasisTerm::sin(1.0, 0, 1.4, 1e-300).derivative(a, m, 0.8, &o).unwrap();
            assert!((real - cplx).abs() < 1e-13);
        }
    }

    #[test]
    fn derivatives_at_origin() {
        // x^2 E(b a^2 x): second derivative at 0 is 2
        let a = Alpha::new(0.5).unwrap();
        let o = EvalOptions::default();
        let t = BasisTerm::exp(1.0, 2, 3.0);
        assert_eq!(t.derivative(a, 0, 0.0, &o).unwrap(), 0.0);
        assert_eq!(t.derivative(a, 1, 0.0, &o).unwrap(), 0.0);
        assert_eq!(t.derivative(a, 2, 0.0, &o).unwrap(), 2.0);
    }
}
