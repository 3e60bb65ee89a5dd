//! Truncated separated-variable series for
//! `u_t(a^2 x, t) = u_xx(x, b t)` and `u_tt(a^2 x, t) = u_xx(x, b^2 t)`
//! on `[0, 1]` with Dirichlet ends.

use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::bvp::{expand_in_sine_like, Expansion, OrthogonalBasis};
use crate::error::{Error, Result};
use crate::solve::{BasisTerm, ClosedFormSolution};
use crate::special::Alpha;
use crate::zeros::ZeroTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PdeKind {
    HeatLike,
    WaveLike,
}

/// Velocity-term scaling of the wave-like series. `Printed` uses time
/// factors `C_b(-rho t)` and `-S_b(-rho t) / rho^2`; `Corrected` uses
/// `w = rho sqrt(a / b)` with `C_b(w t)` and `S_b(w t) / w`, which makes each
/// mode solve the equation and match the initial velocity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveNormalization {
    Printed,
    Corrected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub rho: f64,
    /// `S_a(rho x)`.
    pub space: ClosedFormSolution,
    /// Time factor with its amplitude folded in.
    pub time: ClosedFormSolution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormalPDESolution {
    pub kind: PdeKind,
    pub alpha: Alpha,
    pub beta: Alpha,
    pub n: usize,
    pub coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub velocity_coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<WaveNormalization>,
    pub modes: Vec<Mode>,
}

fn space(alpha: Alpha, rho: f64) -> ClosedFormSolution {
    ClosedFormSolution::new(alpha, vec![BasisTerm::sin(1.0, 0, rho, 0.0)])
}

pub fn heat_like_solution(alpha: Alpha, beta: Alpha, phi: &dyn Fn(f64) -> f64, n: usize, basis: &OrthogonalBasis) -> Result<FormalPDESolution> {
    check(alpha, n, basis)?;
    let ex = expand_in_sine_like(phi, basis)?;
    Ok(heat_from_coeffs(alpha, beta, &ex.a[..n], &basis.rho[..n]))
}

/// `u = sum A_n E_b(-a rho_n^2 t) S_a(rho_n x)`.
pub fn heat_from_coeffs(alpha: Alpha, beta: Alpha, coeffs: &[f64], rho: &[f64]) -> FormalPDESolution {
    let a = alpha.value();
    let modes = coeffs
        .iter()
        .zip(rho)
        .map(|(c, &r)| Mode { rho: r, space: space(alpha, r), time: ClosedFormSolution::new(beta, vec![BasisTerm::exp(*c, 0, -a * r * r)]) })
        .collect();
    FormalPDESolution {
        kind: PdeKind::HeatLike,
        alpha,
        beta,
        n: coeffs.len(),
        coeffs: coeffs.to_vec(),
        velocity_coeffs: Vec::new(),
        normalization: None,
        modes,
    }
}

fn check(alpha: Alpha, n: usize, basis: &OrthogonalBasis) -> Result<()> {
    if basis.alpha != alpha || basis.n < n || n == 0 {
        return Err(Error::InvalidInput("basis does not cover the requested modes".into()));
    }
    Ok(())
}

pub fn wave_like_solution(
    alpha: Alpha,
    beta: Alpha,
    phi: &dyn Fn(f64) -> f64,
    psi: &dyn Fn(f64) -> f64,
    n: usize,
    basis: &OrthogonalBasis,
    normalization: WaveNormalization,
) -> Result<FormalPDESolution> {
    check(alpha, n, basis)?;
    let pa: Expansion = expand_in_sine_like(phi, basis)?;
    let pv: Expansion = expand_in_sine_like(psi, basis)?;
    Ok(wave_from_coeffs(alpha, beta, &pa.a[..n], &pv.a[..n], &basis.rho[..n], normalization))
}

pub fn wave_from_coeffs(alpha: Alpha, beta: Alpha, pos: &[f64], vel: &[f64], rho: &[f64], normalization: WaveNormalization) -> FormalPDESolution {
    let ratio = libm::sqrt(alpha.value() / beta.value());
    let modes = pos
        .iter()
        .zip(vel)
        .zip(rho)
        .map(|((p, v), &r)| {
            let terms = match normalization {
                WaveNormalization::Printed => vec![BasisTerm::cos(*p, 0, -r, 0.0), BasisTerm::sin(-v / (r * r), 0, -r, 0.0)],
                WaveNormalization::Corrected => {
                    let w = r * ratio;
                    vec![BasisTerm::cos(*p, 0, w, 0.0), BasisTerm::sin(v / w, 0, w, 0.0)]
                }
            };
            Mode { rho: r, space: space(alpha, r), time: ClosedFormSolution::new(beta, terms).pruned() }
        })
        .collect();
    FormalPDESolution {
        kind: PdeKind::WaveLike,
        alpha,
        beta,
        n: pos.len(),
        coeffs: pos.to_vec(),
        velocity_coeffs: vel.to_vec(),
        normalization: Some(normalization),
        modes,
    }
}

impl FormalPDESolution {
    /// `d^i/dx^i d^j/dt^j u(x, t)`, mode by mode.
    pub fn partial(&self, i: u32, j: u32, x: f64, t: f64) -> Result<f64> {
        let mut s = 0.0;
        for m in &self.modes {
            s += m.space.derivative(i, x)? * m.time.derivative(j, t)?;
        }
        Ok(s)
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        self.partial(0, 0, x, t)
    }

    /// Signed residual of one mode at `(x, t)`.
    pub fn mode_residual(&self, k: usize, x: f64, t: f64) -> Result<f64> {
        let m = &self.modes[k];
        let (a, b) = (self.alpha.value(), self.beta.value());
        Ok(match self.kind {
            PdeKind::HeatLike => m.space.eval(a * a * x)? * m.time.derivative(1, t)? - m.space.derivative(2, x)? * m.time.eval(b * t)?,
            PdeKind::WaveLike => m.space.eval(a * a * x)? * m.time.derivative(2, t)? - m.space.derivative(2, x)? * m.time.eval(b * b * t)?,
        })
    }

    fn residual_at(&self, x: f64, t: f64) -> Result<f64> {
        let (a, b) = (self.alpha.value(), self.beta.value());
        Ok(match self.kind {
            PdeKind::HeatLike => self.partial(0, 1, a * a * x, t)? - self.partial(2, 0, x, b * t)?,
            PdeKind::WaveLike => self.partial(0, 2, a * a * x, t)? - self.partial(2, 0, x, b * b * t)?,
        })
    }

    /// Indices of heat-like modes whose time argument `-a rho^2 t` lies past
    /// the first negative zero of `E_b`, where the factor oscillates.
    pub fn oscillatory_modes(&self, t: f64, beta_zeros: &ZeroTable) -> Vec<usize> {
        let Some(&z) = beta_zeros.e_neg.first() else { return Vec::new() };
        if self.kind != PdeKind::HeatLike || beta_zeros.alpha != self.beta {
            return Vec::new();
        }
        let a = self.alpha.value();
        (0..self.modes.len()).filter(|&k| -a * self.modes[k].rho * self.modes[k].rho * t < z).collect()
    }
}

/// Analytic residuals `|u_t(a^2 x, t) - u_xx(x, b t)|` (heat) or
/// `|u_tt(a^2 x, t) - u_xx(x, b^2 t)|` (wave).
pub fn residual_probe(u: &FormalPDESolution, points: &[(f64, f64)], _h: f64) -> Result<Vec<f64>> {
    points.iter().map(|&(x, t)| Ok(u.residual_at(x, t)?.abs())).collect()
}

/// The same residual with central differences of step `h` in place of the
/// analytic derivatives.
pub fn residual_probe_fd(u: &FormalPDESolution, points: &[(f64, f64)], h: f64) -> Result<Vec<f64>> {
    let (a, b) = (u.alpha.value(), u.beta.value());
    points
        .iter()
        .map(|&(x, t)| {
            let uxx = |x: f64, t: f64| -> Result<f64> { Ok((u.eval(x + h, t)? - 2.0 * u.eval(x, t)? + u.eval(x - h, t)?) / (h * h)) };
            let r = match u.kind {
                PdeKind::HeatLike => (u.eval(a * a * x, t + h)? - u.eval(a * a * x, t - h)?) / (2.0 * h) - uxx(x, b * t)?,
                PdeKind::WaveLike => {
                    (u.eval(a * a * x, t + h)? - 2.0 * u.eval(a * a * x, t)? + u.eval(a * a * x, t - h)?) / (h * h) - uxx(x, b * b * t)?
                }
            };
            Ok(r.abs())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn one() -> Alpha {
        Alpha::new(1.0).unwrap()
    }

    #[test]
    fn classical_heat_mode() {
        let u = heat_from_coeffs(one(), one(), &[1.0], &[PI]);
        for (x, t) in [(0.3, 0.0), (0.7, 0.2)] {
            let exact = libm::exp(-PI * PI * t) * libm::sin(PI * x);
            assert!((u.eval(x, t).unwrap() - exact).abs() < 1e-12);
        }
        assert!(residual_probe(&u, &[(0.4, 0.1)], 0.0).unwrap()[0] < 1e-10);
    }

    #[test]
    fn wave_normalizations() {
        let c = wave_from_coeffs(one(), one(), &[0.0], &[1.0], &[PI], WaveNormalization::Corrected);
        let p = wave_from_coeffs(one(), one(), &[0.0], &[1.0], &[PI], WaveNormalization::Printed);
        let (x, t) = (0.3, 0.4);
        let exact = libm::sin(PI * t) * libm::sin(PI * x) / PI;
        assert!((c.eval(x, t).unwrap() - exact).abs() < 1e-12);
        assert!((p.eval(x, t).unwrap() - exact / PI).abs() < 1e-12);
        assert!((c.partial(0, 1, x, 0.0).unwrap() - libm::sin(PI * x)).abs() < 1e-12);
    }

    #[test]
    fn corrected_wave_mode_is_exact_for_unequal_scales() {
        let a = Alpha::new(0.5).unwrap();
        let b = Alpha::new(0.8).unwrap();
        let u = wave_from_coeffs(a, b, &[0.7], &[0.3], &[6.0], WaveNormalization::Corrected);
        assert!(u.mode_residual(0, 0.4, 0.6).unwrap().abs() < 1e-9);
        let p = wave_from_coeffs(a, b, &[0.7], &[0.3], &[6.0], WaveNormalization::Printed);
        assert!(p.mode_residual(0, 0.4, 0.6).unwrap().abs() > 1e-3);
    }
}
