//! Dirichlet eigenproblem `y'' = l y(a^2 x)` and expansions in the
//! non-orthogonal sine-like eigenfunctions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::solve::{BasisTerm, ClosedFormSolution};
use crate::special::{self, Alpha, EvalOptions, SpecialFunctionKind};
use crate::zeros::ZeroTable;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair {
    pub index: usize,
    pub lambda: f64,
    pub eigenfunction: ClosedFormSolution,
    /// Sampled `max |y|` over the interval. For small alpha the higher modes
    /// reach ~1e17, so boundary values are only meaningful relative to this.
    pub amplitude: f64,
}

const AMPLITUDE_SAMPLES: usize = 4096;

fn amplitude(f: &ClosedFormSolution, lo: f64, hi: f64) -> Result<f64> {
    let mut m: f64 = 0.0;
    for i in 0..=AMPLITUDE_SAMPLES {
        m = m.max(f.eval(lo + (hi - lo) * i as f64 / AMPLITUDE_SAMPLES as f64)?.abs());
    }
    Ok(m)
}

fn need(zeros: &ZeroTable, alpha: Alpha, rho: usize, eta: usize) -> Result<()> {
    if zeros.alpha != alpha {
        return Err(Error::InvalidInput(format!("zero table is for alpha = {}", zeros.alpha.value())));
    }
    if zeros.rho.len() < rho || zeros.eta.len() < eta {
        return Err(Error::InvalidInput(format!(
            "zero table has {} rho and {} eta entries, need {rho} and {eta}",
            zeros.rho.len(),
            zeros.eta.len()
        )));
    }
    Ok(())
}

/// `y(0) = y(1) = 0`: `l_n = -a rho_n^2`, `y_n = S(rho_n x)`.
pub fn eigenpairs_unit_interval(alpha: Alpha, count: usize, zeros: &ZeroTable) -> Result<Vec<Eigenpair>> {
    need(zeros, alpha, count, 0)?;
    let a = alpha.value();
    zeros.rho[..count]
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let eigenfunction = ClosedFormSolution::new(alpha, vec![BasisTerm::sin(1.0, 0, r, 0.0)]);
            Ok(Eigenpair { index: i + 1, lambda: -a * r * r, amplitude: amplitude(&eigenfunction, 0.0, 1.0)?, eigenfunction })
        })
        .collect()
}

/// `y(-l) = y(l) = 0`: cosine-like modes `C(eta_n x / l)` at odd indices,
/// sine-like `S(rho_n x / l)` at even ones.
pub fn eigenpairs_symmetric(alpha: Alpha, l: f64, count: usize, zeros: &ZeroTable) -> Result<Vec<Eigenpair>> {
    if !(l > 0.0) {
        return Err(Error::InvalidInput("half-width must be positive".into()));
    }
    need(zeros, alpha, count / 2, count.div_ceil(2))?;
    let a = alpha.value();
    (1..=count)
        .map(|i| {
            let (z, term) = if i % 2 == 1 {
                let z = zeros.eta[i / 2] / l;
                (z, BasisTerm::cos(1.0, 0, z, 0.0))
            } else {
                let z = zeros.rho[i / 2 - 1] / l;
                (z, BasisTerm::sin(1.0, 0, z, 0.0))
            };
            let eigenfunction = ClosedFormSolution::new(alpha, vec![term]);
            Ok(Eigenpair { index: i, lambda: -a * z * z, amplitude: amplitude(&eigenfunction, -l, l)?, eigenfunction })
        })
        .collect()
}

/// `|y''(x) - l y(a^2 x)|`.
pub fn eigen_residual(pair: &Eigenpair, x: f64) -> Result<f64> {
    let f = &pair.eigenfunction;
    let a = f.alpha.value();
    Ok((f.derivative(2, x)? - pair.lambda * f.eval(a * a * x)?).abs())
}

/// `mantissa * 2^exp2`; the certificate coefficients leave the double range
/// long before 200 terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledCoeff {
    pub mantissa: f64,
    pub exp2: i32,
}

impl ScaledCoeff {
    fn new(v: f64) -> Self {
        let (m, e) = libm::frexp(v);
        ScaledCoeff { mantissa: m, exp2: e }
    }

    pub fn to_f64(self) -> f64 {
        libm::ldexp(self.mantissa, self.exp2)
    }
}

/// Taylor coefficients `b_0 .. b_{n-1}` of `E(x) - E(-x)` and `E(x) + E(-x)`
/// from `b_{n+2} = b_n a^(2n+1) / ((n+2)(n+1))`.
pub fn negativity_certificate(alpha: Alpha, n_coeffs: usize) -> (Vec<ScaledCoeff>, Vec<ScaledCoeff>) {
    let a = alpha.value();
    let run = |b0: f64, b1: f64| {
        let mut b = vec![ScaledCoeff::new(0.0); n_coeffs];
        if n_coeffs > 0 {
            b[0] = ScaledCoeff::new(b0);
        }
        if n_coeffs > 1 {
            b[1] = ScaledCoeff::new(b1);
        }
        for n in 0..n_coeffs.saturating_sub(2) {
            let f = libm::pow(a, 2.0 * n as f64 + 1.0) / ((n + 2) as f64 * (n + 1) as f64);
            let next = ScaledCoeff::new(b[n].mantissa * f);
            b[n + 2] = ScaledCoeff { mantissa: next.mantissa, exp2: next.exp2 + b[n].exp2 };
        }
        b
    };
    (run(0.0, 2.0), run(2.0, 0.0))
}

/// The odd coefficients of the first list and the even ones of the second
/// are all strictly positive.
pub fn certificate_holds(cert: &(Vec<ScaledCoeff>, Vec<ScaledCoeff>)) -> bool {
    cert.0.iter().skip(1).step_by(2).all(|b| b.mantissa > 0.0) && cert.1.iter().step_by(2).all(|b| b.mantissa > 0.0)
}

/// `e_n = sum_m H[n][m] f_m` with `f_m = S(rho_m x)` on `[0, 1]`.
///
/// For small alpha the `f_m` span many orders of magnitude, so every
/// quadrature runs on `f_m / ||f_m||` and `quad_tol` is relative to those
/// norms. `h` and `gram_diag` are reported for the unscaled `f_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalBasis {
    pub alpha: Alpha,
    pub n: usize,
    pub rho: Vec<f64>,
    pub h: Vec<Vec<f64>>,
    pub gram_diag: Vec<f64>,
    /// `||f_m||_2` on `[0, 1]`.
    pub norms: Vec<f64>,
    pub quad_tol: f64,
    /// Largest `|<e_i, e_j>| / (||f_i|| ||f_j||)`, `i != j`, by direct quadrature.
    pub max_offdiag: f64,
}

fn f_at(alpha: Alpha, r: f64, x: f64) -> Result<f64> {
    Ok(special::eval(SpecialFunctionKind::SinLike, alpha, r * x, &EvalOptions::default())?.value)
}

impl OrthogonalBasis {
    pub fn f(&self, m: usize, x: f64) -> Result<f64> {
        f_at(self.alpha, self.rho[m], x)
    }

    pub fn e(&self, n: usize, x: f64) -> Result<f64> {
        let mut s = 0.0;
        for m in 0..=n {
            if self.h[n][m] != 0.0 {
                s += self.h[n][m] * self.f(m, x)?;
            }
        }
        Ok(s)
    }

    /// `sum_m c_m f_m(x)`.
    pub fn combine(&self, c: &[f64], x: f64) -> Result<f64> {
        let mut s = 0.0;
        for (m, cm) in c.iter().enumerate() {
            s += cm * self.f(m, x)?;
        }
        Ok(s)
    }

    /// `f_m / ||f_m||`.
    pub fn f_unit(&self, m: usize, x: f64) -> Result<f64> {
        Ok(self.f(m, x)? / self.norms[m])
    }

    /// `H` for the normalized functions: `e_n / ||f_n|| = sum_m hs[n][m] f_m / ||f_m||`.
    fn h_unit(&self, n: usize, m: usize) -> f64 {
        self.h[n][m] * self.norms[m] / self.norms[n]
    }

    fn inner<F: FnMut(f64) -> Result<f64>>(&self, f: F) -> Result<f64> {
        Ok(quad::integrate(f, 0.0, 1.0, self.quad_tol)?.value)
    }
}

pub fn gram_schmidt_basis(alpha: Alpha, n: usize, zeros: &ZeroTable, quad_tol: f64) -> Result<OrthogonalBasis> {
    if n == 0 {
        return Err(Error::InvalidInput("basis size must be positive".into()));
    }
    need(zeros, alpha, n, 0)?;
    let rho = zeros.rho[..n].to_vec();
    let mut norms = Vec::with_capacity(n);
    for &r in &rho {
        let f = ClosedFormSolution::new(alpha, vec![BasisTerm::sin(1.0, 0, r, 0.0)]);
        let amp = amplitude(&f, 0.0, 1.0)?;
        let unit_sq = |x: f64| -> Result<f64> {
            let v = f_at(alpha, r, x)? / amp;
            Ok(v * v)
        };
        let sq = quad::integrate(unit_sq, 0.0, 1.0, quad_tol)?.value;
        norms.push(amp * libm::sqrt(sq));
    }
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let (ri, rj, ni, nj) = (rho[i], rho[j], norms[i], norms[j]);
            let v = quad::integrate(|x| Ok(f_at(alpha, ri, x)? / ni * f_at(alpha, rj, x)? / nj), 0.0, 1.0, quad_tol)?.value;
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    let ip = |u: &[f64], v: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += u[i] * g[i][j] * v[j];
            }
        }
        s
    };
    // modified Gram-Schmidt on coefficient vectors, unit diagonal kept
    let mut hs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut ds = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        for j in 0..k {
            let c = ip(&v, &hs[j]) / ds[j];
            for (vi, hj) in v.iter_mut().zip(&hs[j]) {
                *vi -= c * hj;
            }
        }
        let d = ip(&v, &v);
        if !(d >= 1e-12 * g[k][k]) {
            return Err(Error::NearLinearDependence(k + 1));
        }
        hs.push(v);
        ds.push(d);
    }
    let h = (0..n).map(|i| (0..n).map(|m| hs[i][m] * norms[i] / norms[m]).collect()).collect();
    let gram_diag = (0..n).map(|i| ds[i] * norms[i] * norms[i]).collect();
    let mut basis = OrthogonalBasis { alpha, n, rho, h, gram_diag, norms, quad_tol, max_offdiag: 0.0 };
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..i {
            let v = basis.inner(|x| Ok(basis.e(i, x)? / basis.norms[i] * basis.e(j, x)? / basis.norms[j]))?;
            worst = worst.max(v.abs());
        }
    }
    basis.max_offdiag = worst;
    Ok(basis)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    /// Coefficients on `f_m`.
    pub a: Vec<f64>,
    /// Coefficients on `e_n`.
    pub b: Vec<f64>,
    /// `|| phi - sum a_m f_m ||_2` on `[0, 1]`.
    pub l2_error: f64,
}

pub fn expand_in_sine_like(phi: &dyn Fn(f64) -> f64, basis: &OrthogonalBasis) -> Result<Expansion> {
    let n = basis.n;
    let mut pf = Vec::with_capacity(n);
    for m in 0..n {
        pf.push(basis.inner(|x| Ok(phi(x) * basis.f_unit(m, x)?))?);
    }
    // coefficients on the normalized functions first
    let ds: Vec<f64> = (0..n).map(|k| basis.gram_diag[k] / (basis.norms[k] * basis.norms[k])).collect();
    let bs: Vec<f64> = (0..n).map(|k| (0..=k).map(|m| basis.h_unit(k, m) * pf[m]).sum::<f64>() / ds[k]).collect();
    let a: Vec<f64> = (0..n).map(|m| (m..n).map(|k| bs[k] * basis.h_unit(k, m)).sum::<f64>() / basis.norms[m]).collect();
    let b: Vec<f64> = (0..n).map(|k| bs[k] / basis.norms[k]).collect();
    let sq = basis.inner(|x| {
        let r = phi(x) - basis.combine(&a, x)?;
        Ok(r * r)
    })?;
    Ok(Expansion { a, b, l2_error: libm::sqrt(sq.max(0.0)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::build_zero_table;

    #[test]
    fn classical_dirichlet() {
        let a = Alpha::new(1.0).unwrap();
        let z = build_zero_table(a, 4, 1e-14).unwrap();
        let e = eigenpairs_unit_interval(a, 3, &z).unwrap();
        for p in &e {
            let npi = p.index as f64 * core::f64::consts::PI;
            assert!((p.lambda + npi * npi).abs() < 1e-11 * npi * npi);
            assert!((p.eigenfunction.eval(0.3).unwrap() - libm::sin(npi * 0.3)).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_modes_vanish_at_ends() {
        let a = Alpha::new(0.5).unwrap();
        let z = build_zero_table(a, 4, 1e-14).unwrap();
        let e = eigenpairs_symmetric(a, 2.0, 4, &z).unwrap();
        for w in e.windows(2) {
            assert!(w[0].lambda > w[1].lambda);
        }
        for p in &e {
            assert!(p.eigenfunction.eval(2.0).unwrap().abs() < 1e-9);
            assert!(p.eigenfunction.eval(-2.0).unwrap().abs() < 1e-9);
            assert!(eigen_residual(p, 0.7).unwrap() < 1e-10);
        }
    }

    #[test]
    fn certificate_coefficients() {
        let a = Alpha::new(0.5).unwrap();
        let c = negativity_certificate(a, 200);
        assert_eq!((c.0[0].to_f64(), c.0[1].to_f64()), (0.0, 2.0));
        assert!((c.0[3].to_f64() - 0.125 / 3.0).abs() < 1e-17);
        assert!(certificate_holds(&c));
        assert!(c.0[199].exp2 < -9000);
    }

    #[test]
    fn gram_schmidt_identity_for_sines() {
        let a = Alpha::new(1.0).unwrap();
        let z = build_zero_table(a, 4, 1e-14).unwrap();
        let b = gram_schmidt_basis(a, 3, &z, 1e-11).unwrap();
        for i in 0..3 {
            for j in 0..i {
                assert!(b.h[i][j].abs() < 1e-9);
            }
            assert_eq!(b.h[i][i], 1.0);
        }
        let ex = expand_in_sine_like(&|x| libm::sin(core::f64::consts::PI * x), &b).unwrap();
        assert!((ex.a[0] - 1.0).abs() < 1e-9 && ex.a[1].abs() < 1e-9);
    }
}
