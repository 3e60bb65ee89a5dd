use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{BasisTerm, ClosedFormSolution};
use crate::error::{Error, Result};
use crate::special::Alpha;

/// Chain `x_k' = b x_k(a t) + x_{k+1}(a t)`, `x_m' = b x_m(a t)`.
pub fn solve_triangular_chain(alpha: Alpha, beta: f64, init: &[f64]) -> Vec<ClosedFormSolution> {
    let m = init.len();
    let mut c = Vec::with_capacity(m);
    let mut fact = 1.0;
    for j in 0..m {
        if j > 0 {
            fact *= j as f64;
        }
        c.push(alpha.tri_pow(j as u32) / fact);
    }
    (0..m)
        .map(|i| {
            let terms = (0..m - i).map(|j| BasisTerm::exp(init[i + j] * c[j], j as u32, beta)).collect();
            ClosedFormSolution::new(alpha, terms).pruned()
        })
        .collect()
}

/// User-declared Jordan data: `A P = P J`, `J` block diagonal with upper
/// bidiagonal blocks `(lambda, size)` in column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanStructure {
    /// Row-major `n x n`.
    pub p: Vec<f64>,
    pub blocks: Vec<(f64, usize)>,
}

pub const JORDAN_TOL: f64 = 1e-7;

fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

/// `X'(t) = A X(a t)`, `X(0) = y0`.
pub fn solve_linear_system(alpha: Alpha, a: &[f64], y0: &[f64], structure: Option<&JordanStructure>) -> Result<Vec<ClosedFormSolution>> {
    let n = y0.len();
    if a.len() != n * n || n == 0 {
        return Err(Error::InvalidInput(format!("matrix of {} entries for dimension {n}", a.len())));
    }
    let am = DMatrix::from_row_slice(n, n, a);
    if let Some(js) = structure {
        return solve_jordan(alpha, &am, y0, js);
    }
    let eig: Vec<Complex64> = am.complex_eigenvalues().iter().copied().collect();
    let norm = am.norm().max(1e-300);
    let cam = to_complex(&am);
    // eigenvalue clusters, then a nullspace per cluster
    let mut used = vec![false; n];
    let mut vals = Vec::new();
    let mut vecs: Vec<DVector<Complex64>> = Vec::new();
    for i in 0..n {
        if used[i] {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| !used[j] && (eig[j] - eig[i]).norm() <= JORDAN_TOL * norm).collect();
        for &j in &members {
            used[j] = true;
        }
        let lam = members.iter().map(|&j| eig[j]).sum::<Complex64>() / members.len() as f64;
        let shifted = &cam - DMatrix::<Complex64>::identity(n, n) * lam;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.ok_or(Error::DefectiveWithoutStructure)?;
        let smax = svd.singular_values.max().max(norm);
        let mut null = Vec::new();
        for (k, s) in svd.singular_values.iter().enumerate() {
            if *s <= 1e-8 * smax {
                null.push(vt.row(k).adjoint().into_owned());
            }
        }
        if null.len() < members.len() {
            return Err(Error::DefectiveWithoutStructure);
        }
        for v in null.into_iter().take(members.len()) {
            vals.push(lam);
            vecs.push(v);
        }
    }
    let p = DMatrix::from_columns(&vecs);
    let x0 = DVector::from_iterator(n, y0.iter().map(|v| Complex64::new(*v, 0.0)));
    let c = p.clone().lu().solve(&x0).ok_or(Error::DefectiveWithoutStructure)?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut terms = Vec::new();
        for (k, lam) in vals.iter().enumerate() {
            let w = c[k] * p[(i, k)];
            let tiny = 1e-10 * lam.norm().max(1.0);
            if lam.im.abs() <= tiny {
                terms.push(BasisTerm::exp(w.re, 0, lam.re));
            } else {
                // conjugate partner carries the conjugate weight; fold it in here
                let (w, l) = if lam.im > 0.0 { (w, *lam) } else { (w.conj(), lam.conj()) };
                terms.push(BasisTerm::cos(w.re, 0, l.im, l.re));
                terms.push(BasisTerm::sin(-w.im, 0, l.im, l.re));
            }
        }
        out.push(merge_like(ClosedFormSolution::new(alpha, terms)));
    }
    Ok(out)
}

/// Adds coefficients of terms with identical shape, drops zeros.
fn merge_like(sol: ClosedFormSolution) -> ClosedFormSolution {
    let mut terms: Vec<BasisTerm> = Vec::new();
    for t in sol.terms {
        match terms.iter_mut().find(|u| u.kind == t.kind && u.power == t.power && u.rate == t.rate && u.growth == t.growth) {
            Some(u) => u.coeff += t.coeff,
            None => terms.push(t),
        }
    }
    ClosedFormSolution { terms, ..sol }.pruned()
}

fn solve_jordan(alpha: Alpha, am: &DMatrix<f64>, y0: &[f64], js: &JordanStructure) -> Result<Vec<ClosedFormSolution>> {
    let n = y0.len();
    if js.p.len() != n * n || js.blocks.iter().map(|b| b.1).sum::<usize>() != n || js.blocks.iter().any(|b| b.1 == 0) {
        return Err(Error::InvalidInput("Jordan structure does not match the dimension".into()));
    }
    let p = DMatrix::from_row_slice(n, n, &js.p);
    let mut j = DMatrix::<f64>::zeros(n, n);
    let mut off = 0;
    for &(lam, size) in &js.blocks {
        for k in 0..size {
            j[(off + k, off + k)] = lam;
            if k + 1 < size {
                j[(off + k, off + k + 1)] = 1.0;
            }
        }
        off += size;
    }
    let resid = (am * &p - &p * &j).norm();
    if resid > 1e-10 * am.norm().max(1.0) * p.norm().max(1.0) {
        return Err(Error::InvalidInput(format!("declared Jordan structure has residual {resid:e}")));
    }
    let z0 = p.clone().lu().solve(&DVector::from_column_slice(y0)).ok_or(Error::IllConditionedInitialSystem { cond: f64::INFINITY })?;
    let mut z: Vec<ClosedFormSolution> = Vec::with_capacity(n);
    let mut off = 0;
    for &(lam, size) in &js.blocks {
        z.extend(solve_triangular_chain(alpha, lam, &z0.as_slice()[off..off + size]));
        off += size;
    }
    Ok((0..n)
        .map(|i| {
            let mut terms = Vec::new();
            for (k, zk) in z.iter().enumerate() {
                terms.extend(zk.scaled(p[(i, k)]).terms);
            }
            merge_like(ClosedFormSolution::new(alpha, terms))
        })
        .collect())
}

/// `max_i |X_i'(t) - sum_j A_ij X_j(a t)|`.
pub fn system_residual(sol: &[ClosedFormSolution], a: &[f64], t: f64) -> Result<f64> {
    let n = sol.len();
    let al = sol.first().map(|s| s.alpha.value()).unwrap_or(1.0);
    let lagged: Vec<f64> = sol.iter().map(|s| s.eval(al * t)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let mut r = sol[i].derivative(1, t)?;
        for j in 0..n {
            r -= a[i * n + j] * lagged[j];
        }
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_of_two() {
        let a = Alpha::new(0.5).unwrap();
        let x = solve_triangular_chain(a, -1.0, &[1.0, 2.0]);
        assert_eq!(x[0].terms, vec![BasisTerm::exp(1.0, 0, -1.0), BasisTerm::exp(2.0, 1, -1.0)]);
        assert_eq!(x[1].terms, vec![BasisTerm::exp(2.0, 0, -1.0)]);
    }

    #[test]
    fn chain_residual() {
        let a = Alpha::new(0.5).unwrap();
        let x = solve_triangular_chain(a, -1.0, &[1.0, 1.0, 1.0]);
        let m = [-1.0, 1.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, -1.0];
        for t in [0.0, 0.3, 1.0, 2.5] {
            assert!(system_residual(&x, &m, t).unwrap() < 1e-12);
        }
    }

    #[test]
    fn rotation_matrix_gives_trig_like() {
        let a = Alpha::new(0.7).unwrap();
        let m = [0.0, 1.0, -1.0, 0.0];
        let x = solve_linear_system(a, &m, &[1.0, 0.5], None).unwrap();
        for t in [0.0, 0.4, 1.3] {
            assert!(system_residual(&x, &m, t).unwrap() < 1e-12);
        }
        assert!((x[0].eval(0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((x[1].eval(0.0).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn defective_refused_then_declared() {
        let a = Alpha::new(0.5).unwrap();
        let m = [2.0, 1.0, 0.0, 2.0];
        assert_eq!(solve_linear_system(a, &m, &[1.0, 1.0], None).unwrap_err(), Error::DefectiveWithoutStructure);
        let js = JordanStructure { p: vec![1.0, 0.0, 0.0, 1.0], blocks: vec![(2.0, 2)] };
        let x = solve_linear_system(a, &m, &[1.0, 1.0], Some(&js)).unwrap();
        assert_eq!(x, solve_triangular_chain(a, 2.0, &[1.0, 1.0]));
    }

    #[test]
    fn scalar_multiple_of_identity_is_diagonalizable() {
        let a = Alpha::new(0.5).unwrap();
        let x = solve_linear_system(a, &[3.0, 0.0, 0.0, 3.0], &[1.0, -2.0], None).unwrap();
        assert_eq!(x[0].terms, vec![BasisTerm::exp(1.0, 0, 3.0)]);
        assert!((x[1].terms[0].coeff + 2.0).abs() < 1e-14);
    }
}
