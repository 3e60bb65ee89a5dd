use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{BasisTerm, ClosedFormSolution};
use crate::error::{Error, Result};
use crate::special::Alpha;

pub fn solve_first_order(alpha: Alpha, beta: f64, y0: f64) -> ClosedFormSolution {
    ClosedFormSolution::new(alpha, vec![BasisTerm::exp(y0, 0, beta)]).pruned()
}

/// `y' = b y(a x) + A E(r x)`, `y(0) = y0`.
pub fn solve_first_order_forced_exp(alpha: Alpha, beta: f64, y0: f64, amp: f64, r: f64) -> ClosedFormSolution {
    let a = alpha.value();
    if r == a * beta {
        return ClosedFormSolution::new(alpha, vec![BasisTerm::exp(y0, 0, beta), BasisTerm::exp(amp, 1, beta)]).pruned();
    }
    let b = amp * a / (r - beta * a);
    let mut sol = ClosedFormSolution::new(alpha, vec![BasisTerm::exp(y0 - b, 0, beta), BasisTerm::exp(b, 0, r / a)]).pruned();
    if ((r - a * beta) / r.abs().max(a * beta.abs()).max(1e-300)).abs() < 1e-10 {
        sol.warnings.push(String::from("forcing rate is within 1e-10 of resonance"));
    }
    sol
}

/// `y' = b y(a x) + A x^k E(b a^(k+1) x)`, `y(0) = y0`.
pub fn solve_first_order_forced_power(alpha: Alpha, beta: f64, y0: f64, amp: f64, k: u32) -> ClosedFormSolution {
    ClosedFormSolution::new(
        alpha,
        vec![BasisTerm::exp(y0, 0, beta), BasisTerm::exp(amp / (k as f64 + 1.0), k + 1, beta)],
    )
    .pruned()
}

fn degenerate(p: f64, q: f64, a: f64) -> bool {
    let d = p * p - 4.0 * a * q;
    d.abs() < 1e-10 * (p * p).max(4.0 * a * q.abs())
}

/// `y'' + p y'(a x) + q y(a^2 x) = 0`, `y(0) = c1`, `y'(0) = c2`.
pub fn solve_second_order(alpha: Alpha, p: f64, q: f64, c1: f64, c2: f64) -> ClosedFormSolution {
    let a = alpha.value();
    let delta = p * p - 4.0 * a * q;
    if delta == 0.0 || degenerate(p, q, a) {
        let beta = -p / (2.0 * a);
        let mut sol = ClosedFormSolution::new(alpha, vec![BasisTerm::exp(c1, 0, beta), BasisTerm::exp(c2 - c1 * beta, 1, beta)]).pruned();
        if delta != 0.0 {
            sol.warnings.push(format!("discriminant {delta:e} treated as zero"));
        }
        return sol;
    }
    if delta > 0.0 {
        let s = libm::sqrt(delta);
        let b1 = (-p + s) / (2.0 * a);
        let b2 = (-p - s) / (2.0 * a);
        let a1 = (c1 * b2 - c2) / (b2 - b1);
        let a2 = (c1 * b1 - c2) / (b1 - b2);
        return ClosedFormSolution::new(alpha, vec![BasisTerm::exp(a1, 0, b1), BasisTerm::exp(a2, 0, b2)]).pruned();
    }
    let b1 = Complex64::new(-p / (2.0 * a), libm::sqrt(-delta) / (2.0 * a));
    let b2 = b1.conj();
    let a1 = (b2 * c1 - c2) / (b2 - b1);
    ClosedFormSolution::new(alpha, vec![BasisTerm::cos(2.0 * a1.re, 0, b1.im, b1.re), BasisTerm::sin(-2.0 * a1.im, 0, b1.im, b1.re)]).pruned()
}

/// The same problem through the factorisation `(D - l1 T)(D - l2 T)` with
/// `l1 = a b1`, `l2 = b2`; real distinct roots only.
pub fn solve_second_order_operator_form(alpha: Alpha, p: f64, q: f64, c1: f64, c2: f64) -> Result<ClosedFormSolution> {
    let a = alpha.value();
    let delta = p * p - 4.0 * a * q;
    if !(delta > 0.0) || degenerate(p, q, a) {
        return Err(Error::InvalidInput("operator form needs distinct real roots".into()));
    }
    let l2 = (-p - libm::sqrt(delta)) / (2.0 * a);
    let l1 = -p - a * l2;
    let s = l1 / a - l2;
    // y = d1/s E(l1/a x) + d2 E(l2 x)
    let m = DMatrix::from_row_slice(2, 2, &[1.0 / s, 1.0, l1 / (a * s), l2]);
    let d = m.lu().solve(&DVector::from_vec(vec![c1, c2])).ok_or(Error::IllConditionedInitialSystem { cond: f64::INFINITY })?;
    Ok(ClosedFormSolution::new(alpha, vec![BasisTerm::exp(d[0] / s, 0, l1 / a), BasisTerm::exp(d[1], 0, l2)]))
}

/// Classification of a forcing rate for the second-order equation, by
/// `Q(r) = r^2 + p r a + q a^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resonance {
    None,
    Simple,
    Double,
}

pub fn second_order_resonance(alpha: Alpha, p: f64, q: f64, r: f64) -> Resonance {
    let a = alpha.value();
    let a3 = a * a * a;
    let qr = r * r + p * r * a + q * a3;
    let scale = (r * r).max((p * r * a).abs()).max((q * a3).abs()).max(1e-300);
    if qr.abs() > 1e-10 * scale {
        return Resonance::None;
    }
    let dq = 2.0 * r + p * a;
    if dq.abs() > 1e-8 * (2.0 * r.abs()).max((p * a).abs()).max(1e-300) {
        Resonance::Simple
    } else {
        Resonance::Double
    }
}

/// Special solution of `y'' + p y'(a x) + q y(a^2 x) = sum A_k E(r_k x)`,
/// resonant terms included.
pub fn special_solution_second_order(alpha: Alpha, p: f64, q: f64, forcing: &[(f64, f64)]) -> ClosedFormSolution {
    let a = alpha.value();
    let a3 = a * a * a;
    let mut terms = Vec::new();
    for &(amp, r) in forcing {
        match second_order_resonance(alpha, p, q, r) {
            Resonance::None => {
                let b = amp * a3 / (r * r + p * r * a + q * a3);
                terms.push(BasisTerm::exp(b, 0, r / (a * a)));
            }
            // x E(r x / a) = x E((r / a^2) a x)
            Resonance::Simple => terms.push(BasisTerm::exp(amp * a / (2.0 * r + p * a), 1, r / (a * a))),
            // x^2 E(r x) = x^2 E((r / a^2) a^2 x)
            Resonance::Double => terms.push(BasisTerm::exp(0.5 * amp, 2, r / (a * a))),
        }
    }
    ClosedFormSolution::new(alpha, terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharRoot {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

/// Characteristic polynomial `sum_j p_j a^(j(j-1)/2) b^j` (`p_n = 1`) with
/// its roots. Complex roots are listed once, with `im > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharPoly {
    pub alpha: Alpha,
    pub coeffs: Vec<f64>,
    pub roots: Vec<CharRoot>,
}

pub const CLUSTER_TOL: f64 = 1e-7;

impl CharPoly {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients of the polynomial in `b`, constant first.
    pub fn poly(&self) -> Vec<f64> {
        let mut c: Vec<f64> = self.coeffs.iter().enumerate().map(|(j, p)| p * self.alpha.tri_pow(j as u32)).collect();
        c.push(self.alpha.tri_pow(self.order() as u32));
        c
    }

    /// `k`-th derivative of the polynomial at `z`, with a magnitude scale.
    pub fn derivative_at(&self, k: usize, z: Complex64) -> (Complex64, f64) {
        let c = self.poly();
        let mut v = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (j, cj) in c.iter().enumerate().skip(k) {
            let mut f = 1.0;
            for i in 0..k {
                f *= (j - i) as f64;
            }
            let zp = z.powu((j - k) as u32);
            v += zp * (cj * f);
            scale += (cj * f).abs() * zp.norm();
        }
        (v, scale)
    }

    pub fn new(alpha: Alpha, p: &[f64]) -> Result<CharPoly> {
        let n = p.len();
        if n == 0 {
            return Err(Error::InvalidInput("order must be >= 1".into()));
        }
        let mut cp = CharPoly { alpha, coeffs: p.to_vec(), roots: Vec::new() };
        let c = cp.poly();
        let lead = c[n];
        let mut raw: Vec<Complex64> = if n == 1 {
            vec![Complex64::new(-c[0] / lead, 0.0)]
        } else {
            let mut m = DMatrix::<f64>::zeros(n, n);
            for i in 1..n {
                m[(i, i - 1)] = 1.0;
            }
            for i in 0..n {
                m[(i, n - 1)] = -c[i] / lead;
            }
            m.complex_eigenvalues().iter().copied().collect()
        };
        if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::RootFindingFailure(String::from("non-finite companion eigenvalue")));
        }
        // Newton polish of each raw root
        for z in raw.iter_mut() {
            for _ in 0..3 {
                let (f, _) = cp.derivative_at(0, *z);
                let (d, _) = cp.derivative_at(1, *z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = f / d;
                if step.norm() > 1e-6 * z.norm().max(1.0) {
                    break;
                }
                *z -= step;
            }
        }
        let mut used = vec![false; n];
        let mut clusters: Vec<(Complex64, usize)> = Vec::new();
        for i in 0..n {
            if used[i] {
                continue;
            }
            let scale = raw[i].norm().max(1.0);
            let accept = |members: &[usize], raw: &[Complex64]| -> Option<Complex64> {
                let c = members.iter().map(|&j| raw[j]).sum::<Complex64>() / members.len() as f64;
                for k in 0..members.len() {
                    let (v, s) = cp.derivative_at(k, c);
                    if v.norm() > 1e-6 * s.max(1e-300) {
                        return None;
                    }
                }
                Some(c)
            };
            let mut chosen = None;
            // Multiple roots scatter like eps^(1/m); try a wide radius first and
            // keep it only if the derivative conditions confirm the multiplicity.
            for radius in [1e-3 * scale, CLUSTER_TOL * scale] {
                let members: Vec<usize> = (i..n).filter(|&j| !used[j] && (raw[j] - raw[i]).norm() <= radius).collect();
                if let Some(c) = accept(&members, &raw) {
                    chosen = Some((members, c));
                    break;
                }
            }
            let (members, c) = match chosen {
                Some(x) => x,
                None => (vec![i], raw[i]),
            };
            for &j in &members {
                used[j] = true;
            }
            clusters.push((c, members.len()));
        }
        for (c, m) in clusters {
            let tiny = 1e-10 * c.norm().max(1.0);
            if c.im.abs() <= tiny {
                cp.roots.push(CharRoot { re: c.re, im: 0.0, multiplicity: m });
            } else if c.im > 0.0 {
                cp.roots.push(CharRoot { re: c.re, im: c.im, multiplicity: m });
            }
        }
        let total: usize = cp.roots.iter().map(|r| if r.im == 0.0 { r.multiplicity } else { 2 * r.multiplicity }).sum();
        if total != n {
            return Err(Error::RootFindingFailure(format!("multiplicities sum to {total}, expected {n}")));
        }
        Ok(cp)
    }

    /// Real basis `x^j F(b a^j x)`, `j < multiplicity`, per root.
    pub fn basis(&self) -> Vec<BasisTerm> {
        let mut out = Vec::new();
        for r in &self.roots {
            for j in 0..r.multiplicity as u32 {
                if r.im == 0.0 {
                    out.push(BasisTerm::exp(1.0, j, r.re));
                } else {
                    out.push(BasisTerm::cos(1.0, j, r.im, r.re));
                    out.push(BasisTerm::sin(1.0, j, r.im, r.re));
                }
            }
        }
        out
    }
}

/// `sum_j p_j y^(j)(a^(n-j) x)` with `p_n = 1`.
pub fn apply_operator(sol: &ClosedFormSolution, p: &[f64], x: f64) -> Result<f64> {
    let n = p.len();
    let a = sol.alpha.value();
    let mut s = sol.derivative(n as u32, x)?;
    for (j, pj) in p.iter().enumerate() {
        if *pj != 0.0 {
            s += pj * sol.derivative(j as u32, libm::pow(a, (n - j) as f64) * x)?;
        }
    }
    Ok(s)
}

/// Coefficients in `basis` matching `y^(i)(0) = init[i]`.
pub fn fit_initial(alpha: Alpha, basis: &[BasisTerm], init: &[f64]) -> Result<Vec<f64>> {
    let n = basis.len();
    if init.len() != n {
        return Err(Error::InvalidInput(format!("{} initial values for a basis of size {n}", init.len())));
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (col, b) in basis.iter().enumerate() {
        let probe = ClosedFormSolution::new(alpha, vec![*b]);
        for i in 0..n {
            m[(i, col)] = probe.derivative(i as u32, 0.0)?;
        }
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > 1e12 {
        return Err(Error::IllConditionedInitialSystem { cond });
    }
    let c = m.lu().solve(&DVector::from_column_slice(init)).ok_or(Error::IllConditionedInitialSystem { cond })?;
    Ok(c.iter().copied().collect())
}

/// `sum_j p_j y^(j)(a^(n-j) x) = 0` with `y^(i)(0) = init[i]`.
pub fn solve_nth_order(alpha: Alpha, p: &[f64], init: &[f64]) -> Result<ClosedFormSolution> {
    let cp = CharPoly::new(alpha, p)?;
    let basis = cp.basis();
    let c = fit_initial(alpha, &basis, init)?;
    let terms = basis.iter().zip(c).map(|(b, ci)| BasisTerm { coeff: ci, ..*b }).collect();
    Ok(ClosedFormSolution::new(alpha, terms).pruned())
}

/// Denominator `sum_j p_j r^j a^(-j(2n-j+1)/2)` of the special-solution
/// amplitude for forcing `E(r x)`.
pub fn forcing_denominator(alpha: Alpha, p: &[f64], r: f64) -> f64 {
    let n = p.len() as f64;
    let la = libm::log(alpha.value());
    let mut s = 0.0;
    for j in 0..=p.len() {
        let pj = if j == p.len() { 1.0 } else { p[j] };
        let jf = j as f64;
        s += pj * libm::pow(r, jf) * libm::exp(-jf * (2.0 * n - jf + 1.0) / 2.0 * la);
    }
    s
}

pub fn special_solution_nth(alpha: Alpha, p: &[f64], forcing: &[(f64, f64)]) -> Result<ClosedFormSolution> {
    let n = p.len() as i32;
    let mut terms = Vec::new();
    for (k, &(amp, r)) in forcing.iter().enumerate() {
        let den = forcing_denominator(alpha, p, r);
        let mut scale = 0.0;
        for j in 0..=p.len() {
            let pj = if j == p.len() { 1.0 } else { p[j] };
            let jf = j as f64;
            scale += (pj * libm::pow(r, jf)).abs() * libm::exp(-jf * (2.0 * n as f64 - jf + 1.0) / 2.0 * libm::log(alpha.value()));
        }
        if den.abs() <= 1e-10 * scale {
            return Err(Error::ResonantFrequency(k));
        }
        terms.push(BasisTerm::exp(amp / den, 0, r / alpha.powi(n)));
    }
    Ok(ClosedFormSolution::new(alpha, terms))
}

/// First-order form of the n-th order equation:
/// `x_{k+1}(t) = a^(-k(k-1)/2) y^(k)(t / a^k)` satisfies `X'(t) = M X(a t) + g(t)`
/// with `g_n(t) = a^(-n(n-1)/2) f(t / a^(n-1))`. Returns `M` row-major.
pub fn companion_system(alpha: Alpha, p: &[f64]) -> Vec<f64> {
    let n = p.len();
    let mut m = vec![0.0; n * n];
    for k in 0..n - 1 {
        m[k * n + k + 1] = 1.0;
    }
    let cn = 1.0 / alpha.tri_pow(n as u32);
    for (j, pj) in p.iter().enumerate() {
        m[(n - 1) * n + j] = -cn * pj * alpha.tri_pow(j as u32);
    }
    m
}

/// `x_{k+1}(0)` from `y^(k)(0)`.
pub fn companion_initial(alpha: Alpha, init: &[f64]) -> Vec<f64> {
    init.iter().enumerate().map(|(k, v)| v / alpha.tri_pow(k as u32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn al(a: f64) -> Alpha {
        Alpha::new(a).unwrap()
    }

    #[test]
    fn second_order_distinct_coefficients() {
        let (c1, c2) = (0.7, -0.2);
        let s = solve_second_order(al(0.5), -1.5, 1.0, c1, c2);
        let mut rates: Vec<(f64, f64)> = s.terms.iter().map(|t| (t.rate, t.coeff)).collect();
        rates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert!((rates[0].0 - 1.0).abs() < 1e-15 && (rates[1].0 - 2.0).abs() < 1e-15);
        assert!((rates[1].1 - (c2 - c1)).abs() < 1e-15);
        assert!((rates[0].1 - (2.0 * c1 - c2)).abs() < 1e-15);
    }

    #[test]
    fn second_order_repeated_root() {
        let s = solve_second_order(al(0.5), 1.0, 0.5, 1.0, 2.0);
        assert_eq!(s.terms, vec![BasisTerm::exp(1.0, 0, -1.0), BasisTerm::exp(3.0, 1, -1.0)]);
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn cos_like_as_second_order_solution() {
        let a = al(0.6);
        let s = solve_second_order(a, 0.0, 0.6, 1.0, 0.0);
        for x in [0.3, 1.7, 4.0] {
            let c = crate::special::eval(crate::SpecialFunctionKind::CosLike, a, x, &Default::default()).unwrap().value;
            assert!((s.eval(x).unwrap() - c).abs() < 1e-14);
        }
    }

    #[test]
    fn triple_root_detected() {
        // (b - l)^3 scaled so the leading coefficient is a^3
        let a = 0.5;
        let l = -1.2;
        let lead = a * a * a;
        let c = [-lead * l * l * l, 3.0 * lead * l * l, -3.0 * lead * l];
        let p: Vec<f64> = c.iter().enumerate().map(|(j, cj)| cj / al(a).tri_pow(j as u32)).collect();
        let cp = CharPoly::new(al(a), &p).unwrap();
        assert_eq!(cp.roots.len(), 1);
        assert_eq!(cp.roots[0].multiplicity, 3);
        assert!((cp.roots[0].re - l).abs() < 1e-9);
    }

    #[test]
    fn classical_special_solutions() {
        let s = special_solution_second_order(al(1.0), 0.0, 1.0, &[(1.0, 2.0)]);
        assert!((s.terms[0].coeff - 0.2).abs() < 1e-15);
        let s = special_solution_nth(al(1.0), &[-1.0], &[(1.0, 2.0)]).unwrap();
        assert!((s.terms[0].coeff - 1.0).abs() < 1e-15);
        let p = [0.3, -0.5, 1.1];
        let s = special_solution_nth(al(0.5), &p, &[(1.0, 0.7), (-2.0, 1.3)]).unwrap();
        for x in [0.1, 0.8, 1.9] {
            let f = 0.7f64 * x;
            let g = 1.3f64 * x;
            let e = |v: f64| crate::special::eval(crate::SpecialFunctionKind::ExpLike, al(0.5), v, &Default::default()).unwrap().value;
            assert!((apply_operator(&s, &p, x).unwrap() - (e(f) - 2.0 * e(g))).abs() < 1e-10);
        }
    }

    #[test]
    fn resonance_cases() {
        let a = al(0.5);
        assert_eq!(second_order_resonance(a, 0.0, -8.0, 1.0), Resonance::Simple);
        let s = special_solution_second_order(a, 0.0, -8.0, &[(1.0, 1.0)]);
        assert_eq!(s.terms, vec![BasisTerm::exp(0.25, 1, 4.0)]);
        // Q(r) = (r + 1)^2 needs p a = 2 and q a^3 = 1
        let s = special_solution_second_order(a, 4.0, 8.0, &[(2.0, -1.0)]);
        assert_eq!(s.terms, vec![BasisTerm::exp(1.0, 2, -4.0)]);
    }
}
