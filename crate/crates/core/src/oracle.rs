//! Brute-force integrator for `X'(t) = A X(a t) + g(t)`.
//!
//! Marching away from the origin, `a t` always lies in the already computed
//! part of the trajectory, so the delayed state is read from a piecewise cubic
//! Hermite interpolant. Because the right-hand side depends on the state only
//! through the delayed argument, the classical fourth-order stages collapse to
//! Simpson's rule on `F(s) = A X(a s) + g(s)`. While `a s` still falls inside
//! the step being taken (near the origin, or for `a = 1`) the step's own
//! interpolant is used and the step is iterated to a fixed point.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::special::Alpha;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

pub type Forcing<'a> = &'a dyn Fn(f64, &mut [f64]);

#[derive(Clone)]
pub struct PantographSystemSpec<'a> {
    pub alpha: Alpha,
    pub dim: usize,
    /// Row-major `dim x dim`.
    pub matrix: Vec<f64>,
    pub x0: Vec<f64>,
    pub forcing: Option<Forcing<'a>>,
    pub direction: Direction,
}

impl<'a> PantographSystemSpec<'a> {
    pub fn new(alpha: Alpha, matrix: Vec<f64>, dim: usize, x0: Vec<f64>) -> Result<Self> {
        if dim == 0 || matrix.len() != dim * dim || x0.len() != dim {
            return Err(Error::InvalidInput(format!("system of dimension {dim} needs a {dim}x{dim} matrix and {dim} initial values")));
        }
        Ok(PantographSystemSpec { alpha, dim, matrix, x0, forcing: None, direction: Direction::Forward })
    }

    pub fn with_forcing(mut self, g: Forcing<'a>) -> Self {
        self.forcing = Some(g);
        self
    }

    pub fn backward(mut self) -> Self {
        self.direction = Direction::Backward;
        self
    }

    fn rhs(&self, s: f64, delayed: &[f64], out: &mut [f64]) {
        let n = self.dim;
        match self.forcing {
            Some(g) => g(s, out),
            None => out.iter_mut().for_each(|v| *v = 0.0),
        }
        for i in 0..n {
            let row = &self.matrix[i * n..(i + 1) * n];
            out[i] += row.iter().zip(delayed).map(|(a, x)| a * x).sum::<f64>();
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTrajectory {
    pub dim: usize,
    /// Signed step; node `i` sits at `i * h`.
    pub h: f64,
    pub states: Vec<f64>,
    pub derivs: Vec<f64>,
}

fn hermite(theta: f64, h: f64, x0: &[f64], f0: &[f64], x1: &[f64], f1: &[f64], out: &mut [f64]) {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + theta;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    for i in 0..out.len() {
        out[i] = h00 * x0[i] + h10 * h * f0[i] + h01 * x1[i] + h11 * h * f1[i];
    }
}

impl DenseTrajectory {
    pub fn len(&self) -> usize {
        self.states.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        (self.len() - 1) as f64 * self.h
    }

    pub fn node(&self, i: usize) -> (f64, &[f64]) {
        (i as f64 * self.h, &self.states[i * self.dim..(i + 1) * self.dim])
    }

    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let r = t / self.h;
        let last = self.len() - 1;
        if !(r >= -1e-12) || r > last as f64 * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::InvalidInput(format!("t = {t} outside the integrated range")));
        }
        let i = (libm::floor(r.max(0.0)) as usize).min(last.saturating_sub(1));
        Ok((i, r - i as f64))
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) -> Result<()> {
        let d = self.dim;
        if self.len() == 1 {
            out.copy_from_slice(&self.states[..d]);
            return Ok(());
        }
        let (i, theta) = self.locate(t)?;
        hermite(
            theta,
            self.h,
            &self.states[i * d..(i + 1) * d],
            &self.derivs[i * d..(i + 1) * d],
            &self.states[(i + 1) * d..(i + 2) * d],
            &self.derivs[(i + 1) * d..(i + 2) * d],
            out,
        );
        Ok(())
    }

    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out)?;
        Ok(out)
    }

    pub fn component(&self, t: f64, i: usize) -> Result<f64> {
        Ok(self.eval(t)?[i])
    }

    /// All sign changes of component `c`, refined by bisection on the interpolant.
    pub fn sign_changes(&self, c: usize) -> Vec<f64> {
        let mut out = Vec::new();
        let d = self.dim;
        for i in 0..self.len().saturating_sub(1) {
            let a = self.states[i * d + c];
            let b = self.states[(i + 1) * d + c];
            if a == 0.0 && i > 0 {
                out.push(i as f64 * self.h);
            } else if a * b < 0.0 {
                let (mut lo, mut hi) = (0.0, 1.0);
                let mut buf = vec![0.0; d];
                for _ in 0..60 {
                    let m = 0.5 * (lo + hi);
                    hermite(
                        m,
                        self.h,
                        &self.states[i * d..(i + 1) * d],
                        &self.derivs[i * d..(i + 1) * d],
                        &self.states[(i + 1) * d..(i + 2) * d],
                        &self.derivs[(i + 1) * d..(i + 2) * d],
                        &mut buf,
                    );
                    if buf[c] * a > 0.0 {
                        lo = m;
                    } else {
                        hi = m;
                    }
                }
                out.push((i as f64 + 0.5 * (lo + hi)) * self.h);
            }
        }
        out
    }

    pub fn first_sign_change(&self, c: usize) -> Option<f64> {
        self.sign_changes(c).first().copied()
    }
}

/// Integrates from 0 to `t_end` with about `|t_end| / h` uniform steps.
pub fn integrate(spec: &PantographSystemSpec, t_end: f64, h: f64) -> Result<DenseTrajectory> {
    if !(h > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidInput("h must be positive and t_end finite".into()));
    }
    let sign = match spec.direction {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    if !(t_end * sign > 0.0) {
        return Err(Error::InvalidInput("t_end must point in the integration direction".into()));
    }
    let steps = libm::ceil(t_end.abs() / h - 1e-9).max(1.0) as usize;
    let hs = t_end / steps as f64;
    let d = spec.dim;
    let a = spec.alpha.value();
    let mut traj = DenseTrajectory {
        dim: d,
        h: hs,
        states: Vec::with_capacity((steps + 1) * d),
        derivs: Vec::with_capacity((steps + 1) * d),
    };
    traj.states.extend_from_slice(&spec.x0);
    let mut f0 = vec![0.0; d];
    spec.rhs(0.0, &spec.x0, &mut f0);
    traj.derivs.extend_from_slice(&f0);

    let mut xd = vec![0.0; d];
    let mut fm = vec![0.0; d];
    let mut fe = vec![0.0; d];
    let mut x1 = vec![0.0; d];
    let mut f1 = vec![0.0; d];
    let mut prev = vec![0.0; d];
    for n in 0..steps {
        let tn = n as f64 * hs;
        let (xn, fn_) = {
            let s = &traj.states[n * d..(n + 1) * d];
            let f = &traj.derivs[n * d..(n + 1) * d];
            (s.to_vec(), f.to_vec())
        };
        let mid = tn + 0.5 * hs;
        let end = tn + hs;
        let inside = |s: f64| (a * s / hs) > n as f64;
        let implicit = inside(mid) || inside(end);
        for i in 0..d {
            x1[i] = xn[i] + hs * fn_[i];
            f1[i] = fn_[i];
        }
        let mut converged = false;
        for _ in 0..200 {
            let delayed = |s: f64, out: &mut [f64], x1: &[f64], f1: &[f64]| -> Result<()> {
                if inside(s) {
                    hermite((a * s - tn) / hs, hs, &xn, &fn_, x1, f1, out);
                    Ok(())
                } else {
                    traj.eval_into(a * s, out)
                }
            };
            delayed(mid, &mut xd, &x1, &f1)?;
            spec.rhs(mid, &xd, &mut fm);
            delayed(end, &mut xd, &x1, &f1)?;
            spec.rhs(end, &xd, &mut fe);
            prev.copy_from_slice(&x1);
            let mut change: f64 = 0.0;
            let mut size: f64 = 0.0;
            for i in 0..d {
                x1[i] = xn[i] + hs / 6.0 * (fn_[i] + 4.0 * fm[i] + fe[i]);
                change = change.max((x1[i] - prev[i]).abs()).max((fe[i] - f1[i]).abs() * hs.abs());
                size = size.max(x1[i].abs());
                f1[i] = fe[i];
            }
            if !implicit || change <= 1e-16 * (1.0 + size) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::StepTooLarge(format!("fixed-point iteration failed at t = {tn}")));
        }
        if x1.iter().any(|v| !v.is_finite()) {
            return Err(Error::StepTooLarge(format!("non-finite state at t = {end}")));
        }
        traj.states.extend_from_slice(&x1);
        traj.derivs.extend_from_slice(&f1);
    }
    Ok(traj)
}

/// `log2(|X_h - X_{h/2}| / |X_{h/2} - X_{h/4}|)` at `t_end`.
pub fn richardson_order_check(spec: &PantographSystemSpec, t_end: f64, h: f64) -> Result<f64> {
    let end = |h: f64| -> Result<Vec<f64>> {
        let t = integrate(spec, t_end, h)?;
        Ok(t.node(t.len() - 1).1.to_vec())
    };
    let (x1, x2, x4) = (end(h)?, end(h / 2.0)?, end(h / 4.0)?);
    let diff = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let e1 = diff(&x1, &x2);
    let e2 = diff(&x2, &x4);
    if e2 == 0.0 {
        return Err(Error::StepTooLarge("differences vanished; step too small for an order estimate".into()));
    }
    Ok(libm::log2(e1 / e2))
}

/// Integrates and fails with `StepTooLarge` if the Richardson error estimate
/// at `t_end` exceeds `tol`.
pub fn integrate_checked(spec: &PantographSystemSpec, t_end: f64, h: f64, tol: f64) -> Result<DenseTrajectory> {
    let fine = integrate(spec, t_end, h)?;
    let coarse = integrate(spec, t_end, 2.0 * h)?;
    let a = fine.node(fine.len() - 1).1;
    let b = coarse.node(coarse.len() - 1).1;
    let est = a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max) / 15.0;
    if est > tol {
        return Err(Error::StepTooLarge(format!("Richardson estimate {est:e} exceeds {tol:e}")));
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(a: f64, beta: f64) -> PantographSystemSpec<'static> {
        PantographSystemSpec::new(Alpha::new(a).unwrap(), vec![beta], 1, vec![1.0]).unwrap()
    }

    #[test]
    fn exponential() {
        let t = integrate(&scalar(1.0, 1.0), 1.0, 1e-3).unwrap();
        assert!((t.component(1.0, 0).unwrap() - core::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn fourth_order() {
        let p = richardson_order_check(&scalar(1.0, 1.0), 2.0, 0.05).unwrap();
        assert!((p - 4.0).abs() < 0.5, "{p}");
        let p = richardson_order_check(&scalar(0.5, 1.0), 2.0, 0.05).unwrap();
        assert!((p - 4.0).abs() < 0.5, "{p}");
    }

    #[test]
    fn rejects_wrong_direction() {
        assert!(integrate(&scalar(0.5, 1.0), -1.0, 1e-2).is_err());
        assert!(integrate(&scalar(0.5, 1.0).backward(), -1.0, 1e-2).is_ok());
    }

    #[test]
    fn deterministic() {
        let a = integrate(&scalar(0.5, -2.0), 3.0, 1e-2).unwrap();
        let b = integrate(&scalar(0.5, -2.0), 3.0, 1e-2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn forcing_is_applied() {
        // y' = 1, y(0) = 0 with zero matrix
        let g = |_t: f64, out: &mut [f64]| out[0] = 1.0;
        let spec = PantographSystemSpec::new(Alpha::new(0.5).unwrap(), vec![0.0], 1, vec![0.0]).unwrap().with_forcing(&g);
        let t = integrate(&spec, 2.0, 0.1).unwrap();
        assert!((t.component(1.3, 0).unwrap() - 1.3).abs() < 1e-14);
    }
}
