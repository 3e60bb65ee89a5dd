//! Initial value problems posed away from the origin. The real zeros of `E`
//! make existence and uniqueness fail on a discrete set of points.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solve::{BasisTerm, ClosedFormSolution};
use crate::special::{self, Alpha, EvalOptions, SpecialFunctionKind};
use crate::zeros::ZeroTable;

pub const GATE_FLOOR: f64 = 1e-9;
pub const GATE_ERR_FACTOR: f64 = 50.0;
pub const ZERO_PROXIMITY: f64 = 1e-6;
pub const RANK_TOL: f64 = 1e-9;
/// Singular-value ratios between `RANK_TOL` and this are reported as ambiguous.
pub const RANK_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionFlag {
    Clear,
    NearZero,
    AtZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroProximityReport {
    pub argument: f64,
    pub tested_value: f64,
    pub threshold: f64,
    pub distance_to_nearest_tabulated_zero: f64,
    pub condition_flag: ConditionFlag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub description: String,
    /// Value forced on every solution by the vanishing gate.
    pub obstruction: f64,
    pub target: f64,
    pub error_estimate: f64,
}

/// Components are listed in order; scalar problems have one component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum Classification {
    Unique {
        solution: Vec<ClosedFormSolution>,
    },
    InfiniteFamily {
        particular: Vec<ClosedFormSolution>,
        null_basis: Vec<Vec<ClosedFormSolution>>,
        free_params: usize,
    },
    NoSolution {
        witness: Witness,
    },
}

impl Classification {
    pub fn free_params(&self) -> Option<usize> {
        match self {
            Classification::Unique { .. } => Some(0),
            Classification::InfiniteFamily { free_params, .. } => Some(*free_params),
            Classification::NoSolution { .. } => None,
        }
    }

    /// `particular + sum c_i null_i`; the unique solution when `c` is empty.
    pub fn member(&self, c: &[f64]) -> Option<Vec<ClosedFormSolution>> {
        match self {
            Classification::Unique { solution } => Some(solution.clone()),
            Classification::InfiniteFamily { particular, null_basis, .. } => {
                let mut out = particular.clone();
                for (ci, basis) in c.iter().zip(null_basis) {
                    for (o, b) in out.iter_mut().zip(basis) {
                        *o = o.plus(&b.scaled(*ci));
                    }
                }
                Some(out)
            }
            Classification::NoSolution { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classified {
    /// Label of the enumerated case, e.g. `"ii"` or `"1(iv)"`.
    pub case: String,
    pub classification: Classification,
    pub reports: Vec<ZeroProximityReport>,
}

/// Decides whether `E(v)` vanishes. Zeros exist only on the negative axis
/// for `a < 1`, so nonnegative arguments and `a = 1` are always clear.
pub fn zero_proximity(alpha: Alpha, v: f64, zeros: &ZeroTable) -> Result<(ZeroProximityReport, f64)> {
    let s = special::eval(SpecialFunctionKind::ExpLike, alpha, v, &EvalOptions::default())?;
    let threshold = GATE_FLOOR.max(GATE_ERR_FACTOR * s.abs_error_estimate);
    let distance = if zeros.alpha == alpha { zeros.nearest_e_zero(v).unwrap_or(f64::INFINITY) } else { f64::INFINITY };
    let flag = if alpha.value() == 1.0 || v >= 0.0 || s.value.abs() >= threshold {
        ConditionFlag::Clear
    } else if distance <= ZERO_PROXIMITY * v.abs().max(1.0) {
        ConditionFlag::AtZero
    } else {
        ConditionFlag::NearZero
    };
    let report = ZeroProximityReport {
        argument: v,
        tested_value: s.value,
        threshold,
        distance_to_nearest_tabulated_zero: distance,
        condition_flag: flag,
    };
    Ok((report, s.abs_error_estimate))
}

fn gate(alpha: Alpha, v: f64, zeros: &ZeroTable, reports: &mut Vec<ZeroProximityReport>) -> Result<bool> {
    let (r, _) = zero_proximity(alpha, v, zeros)?;
    reports.push(r);
    match r.condition_flag {
        ConditionFlag::Clear => Ok(false),
        ConditionFlag::AtZero => Ok(true),
        ConditionFlag::NearZero => Err(Error::AmbiguousNearZero {
            value: r.tested_value,
            threshold: r.threshold,
            distance: r.distance_to_nearest_tabulated_zero,
        }),
    }
}

fn e_at(alpha: Alpha, v: f64) -> Result<(f64, f64)> {
    let s = special::eval(SpecialFunctionKind::ExpLike, alpha, v, &EvalOptions::default())?;
    Ok((s.value, s.abs_error_estimate))
}

/// True when `target` and `forced` agree within ten error estimates.
fn consistent(forced: f64, err: f64, target: f64) -> bool {
    let d = (forced - target).abs();
    d <= 10.0 * err + 1e-12 * forced.abs().max(target.abs()).max(1.0)
}

fn scalar(alpha: Alpha, terms: Vec<BasisTerm>) -> ClosedFormSolution {
    ClosedFormSolution::new(alpha, terms).pruned()
}

/// Scalar first-order problem with general solution `c E(k x) + particular`.
fn first_order_core(
    alpha: Alpha,
    k: f64,
    x0: f64,
    y0: f64,
    particular: ClosedFormSolution,
    zeros: &ZeroTable,
) -> Result<Classified> {
    if x0 == 0.0 {
        return Err(Error::InvalidInput("x0 must be nonzero".into()));
    }
    let mut reports = Vec::new();
    let at_zero = gate(alpha, k * x0, zeros, &mut reports)?;
    let p0 = particular.eval(x0)?;
    let p_err = particular_error(&particular, x0)?;
    let (case, classification) = if !at_zero {
        let (e0, _) = e_at(alpha, k * x0)?;
        let c = (y0 - p0) / e0;
        let sol = particular.plus(&scalar(alpha, vec![BasisTerm::exp(c, 0, k)]));
        ("i", Classification::Unique { solution: vec![sol] })
    } else if consistent(p0, p_err, y0) {
        (
            "ii",
            Classification::InfiniteFamily {
                particular: vec![particular],
                null_basis: vec![vec![scalar(alpha, vec![BasisTerm::exp(1.0, 0, k)])]],
                free_params: 1,
            },
        )
    } else {
        let witness = Witness {
            description: format!("E({}) vanishes, so every solution takes the particular value at x0", k * x0),
            obstruction: p0,
            target: y0,
            error_estimate: p_err,
        };
        ("iii", Classification::NoSolution { witness })
    };
    Ok(Classified { case: case.into(), classification, reports })
}

/// Rough error of a closed form at `x`: term-wise series estimates.
fn particular_error(sol: &ClosedFormSolution, x: f64) -> Result<f64> {
    let mut e = 0.0;
    for t in &sol.terms {
        let v = t.eval(sol.alpha, x, &EvalOptions::default())?;
        e += 4.0 * f64::EPSILON * v.abs().max(f64::EPSILON * t.coeff.abs());
    }
    Ok(e)
}

/// `y' = k y(a x)`, `y(x0) = y0`.
pub fn classify_first_order(alpha: Alpha, k: f64, x0: f64, y0: f64, zeros: &ZeroTable) -> Result<Classified> {
    first_order_core(alpha, k, x0, y0, ClosedFormSolution::zero(alpha), zeros)
}

/// `y' = l y(a x) + A E(r x)`, `y(x0) = y0`. The resonant rate `r = a l`
/// has particular solution `A x E(a l x)`, otherwise `A a / (r - a l) E(r x / a)`.
pub fn classify_first_order_forced(
    alpha: Alpha,
    lambda: f64,
    forcing: (f64, f64),
    x0: f64,
    y0: f64,
    zeros: &ZeroTable,
) -> Result<Classified> {
    let a = alpha.value();
    let (amp, r) = forcing;
    let resonant = (r - a * lambda).abs() <= 1e-12 * r.abs().max(1e-300);
    let particular = if resonant {
        scalar(alpha, vec![BasisTerm::exp(amp, 1, lambda)])
    } else {
        scalar(alpha, vec![BasisTerm::exp(amp * a / (r - a * lambda), 0, r / a)])
    };
    let mut out = first_order_core(alpha, lambda, x0, y0, particular, zeros)?;
    out.case = format!("{}({})", if resonant { "resonant" } else { "nonresonant" }, out.case);
    Ok(out)
}

/// `y1' = l y1(a x) + y2(a x)`, `y2' = l y2(a x)` with data at `x0`.
pub fn classify_jordan_pair(alpha: Alpha, lambda: f64, x0: f64, y1_0: f64, y2_0: f64, zeros: &ZeroTable) -> Result<Classified> {
    if x0 == 0.0 {
        return Err(Error::InvalidInput("x0 must be nonzero".into()));
    }
    let a = alpha.value();
    let mut reports = Vec::new();
    let e_l = |c: f64| scalar(alpha, vec![BasisTerm::exp(c, 0, lambda)]);
    // x E(l a x)
    let xe = |c: f64| scalar(alpha, vec![BasisTerm::exp(c, 1, lambda)]);
    let g1 = gate(alpha, lambda * x0, zeros, &mut reports)?;
    if !g1 {
        let (e0, _) = e_at(alpha, lambda * x0)?;
        let (e1, _) = e_at(alpha, lambda * a * x0)?;
        let c2 = y2_0 / e0;
        let c1 = (y1_0 - c2 * x0 * e1) / e0;
        let sol = vec![e_l(c1).plus(&xe(c2)), e_l(c2)];
        return Ok(Classified { case: "i".into(), classification: Classification::Unique { solution: sol }, reports });
    }
    if !consistent(0.0, 0.0, y2_0) {
        let witness = Witness {
            description: String::from("E(l x0) vanishes, so the second component vanishes at x0"),
            obstruction: 0.0,
            target: y2_0,
            error_estimate: 0.0,
        };
        return Ok(Classified { case: "v".into(), classification: Classification::NoSolution { witness }, reports });
    }
    let g2 = gate(alpha, lambda * a * x0, zeros, &mut reports)?;
    let (case, classification) = if !g2 {
        let (e1, _) = e_at(alpha, lambda * a * x0)?;
        let c2 = y1_0 / (x0 * e1);
        (
            "ii",
            Classification::InfiniteFamily {
                particular: vec![xe(c2), e_l(c2)],
                null_basis: vec![vec![e_l(1.0), ClosedFormSolution::zero(alpha)]],
                free_params: 1,
            },
        )
    } else if consistent(0.0, 0.0, y1_0) {
        (
            "iii",
            Classification::InfiniteFamily {
                particular: vec![ClosedFormSolution::zero(alpha), ClosedFormSolution::zero(alpha)],
                null_basis: vec![vec![e_l(1.0), ClosedFormSolution::zero(alpha)], vec![xe(1.0), e_l(1.0)]],
                free_params: 2,
            },
        )
    } else {
        let witness = Witness {
            description: String::from("E(l x0) and E(l a x0) vanish, so the first component vanishes at x0"),
            obstruction: 0.0,
            target: y1_0,
            error_estimate: 0.0,
        };
        ("iv", Classification::NoSolution { witness })
    };
    Ok(Classified { case: case.into(), classification, reports })
}

fn roots(alpha: Alpha, p: f64, q: f64) -> (f64, bool) {
    let a = alpha.value();
    let delta = p * p - 4.0 * a * q;
    let degenerate = delta == 0.0 || delta.abs() < 1e-10 * (p * p).max(4.0 * a * q.abs());
    (delta, degenerate)
}

/// `y'' + p y'(a t) + q y(a^2 t) = 0` with `y(t0) = A`, `y'(t0 / a) = B`,
/// through `x1 = y`, `x2(t) = y'(t / a)` and the eigenbasis of the
/// companion matrix.
pub fn classify_second_order_split(alpha: Alpha, p: f64, q: f64, t0: f64, a_val: f64, b_val: f64, zeros: &ZeroTable) -> Result<Classified> {
    if t0 == 0.0 {
        return Err(Error::InvalidInput("t0 must be nonzero".into()));
    }
    let a = alpha.value();
    let (delta, degenerate) = roots(alpha, p, q);
    if degenerate {
        // P = [[1, 0], [l, 1]] takes the system to a Jordan pair with y = z1.
        let l = -p / (2.0 * a);
        let mut out = classify_jordan_pair(alpha, l, t0, a_val, b_val - l * a_val, zeros)?;
        out.case = format!("2({})", out.case);
        if let Classification::Unique { solution } | Classification::InfiniteFamily { particular: solution, .. } = &mut out.classification {
            solution.truncate(1);
        }
        if let Classification::InfiniteFamily { null_basis, .. } = &mut out.classification {
            for b in null_basis.iter_mut() {
                b.truncate(1);
            }
        }
        return Ok(out);
    }
    if delta < 0.0 {
        return split_complex(alpha, p, q, t0, a_val, b_val, zeros);
    }
    let s = libm::sqrt(delta);
    let l1 = (-p + s) / (2.0 * a);
    let l2 = (-p - s) / (2.0 * a);
    // columns (1, l_i); inverse rows
    let z1 = (a_val * l2 - b_val) / (l2 - l1);
    let z2 = (a_val * l1 - b_val) / (l1 - l2);
    let c1 = classify_first_order(alpha, l1, t0, z1, zeros)?;
    let c2 = classify_first_order(alpha, l2, t0, z2, zeros)?;
    let mut reports = c1.reports.clone();
    reports.extend(c2.reports.iter().copied());
    let (case, classification) = match (&c1.classification, &c2.classification) {
        (Classification::NoSolution { witness }, _) => ("1(v)", Classification::NoSolution { witness: witness.clone() }),
        (_, Classification::NoSolution { witness }) => ("1(vi)", Classification::NoSolution { witness: witness.clone() }),
        (Classification::Unique { solution: s1 }, Classification::Unique { solution: s2 }) => {
            ("1(i)", Classification::Unique { solution: vec![s1[0].plus(&s2[0])] })
        }
        (x, y) => {
            let case = match (x, y) {
                (Classification::Unique { .. }, _) => "1(ii)",
                (_, Classification::Unique { .. }) => "1(iii)",
                _ => "1(iv)",
            };
            let (p1, n1) = parts(x);
            let (p2, n2) = parts(y);
            let mut null_basis: Vec<Vec<ClosedFormSolution>> = n1.into_iter().map(|v| vec![v]).collect();
            null_basis.extend(n2.into_iter().map(|v| vec![v]));
            let free_params = null_basis.len();
            (case, Classification::InfiniteFamily { particular: vec![p1.plus(&p2)], null_basis, free_params })
        }
    };
    Ok(Classified { case: case.into(), classification, reports })
}

fn parts(c: &Classification) -> (ClosedFormSolution, Vec<ClosedFormSolution>) {
    match c {
        Classification::Unique { solution } => (solution[0].clone(), Vec::new()),
        Classification::InfiniteFamily { particular, null_basis, .. } => {
            (particular[0].clone(), null_basis.iter().map(|b| b[0].clone()).collect())
        }
        Classification::NoSolution { .. } => unreachable!(),
    }
}

/// Complex eigenvalues: `E(l t0)` has no tabulated zeros off the real axis,
/// so a small gate value is reported as ambiguous.
fn split_complex(alpha: Alpha, p: f64, q: f64, t0: f64, a_val: f64, b_val: f64, _zeros: &ZeroTable) -> Result<Classified> {
    let a = alpha.value();
    let delta = p * p - 4.0 * a * q;
    let l1 = Complex64::new(-p / (2.0 * a), libm::sqrt(-delta) / (2.0 * a));
    let l2 = l1.conj();
    let z1 = (l2 * a_val - b_val) / (l2 - l1);
    // a = 1 is the exponential, which never vanishes
    let (e0, err) = if a == 1.0 { ((l1 * t0).exp(), 0.0) } else { special::exp_like_complex(alpha, l1 * t0, &EvalOptions::default())? };
    let threshold = GATE_FLOOR.max(GATE_ERR_FACTOR * err);
    let report = ZeroProximityReport {
        argument: (l1 * t0).norm(),
        tested_value: e0.norm(),
        threshold,
        distance_to_nearest_tabulated_zero: f64::INFINITY,
        condition_flag: if a != 1.0 && e0.norm() < threshold { ConditionFlag::NearZero } else { ConditionFlag::Clear },
    };
    if a != 1.0 && e0.norm() < threshold {
        return Err(Error::AmbiguousNearZero { value: e0.norm(), threshold, distance: f64::INFINITY });
    }
    let c1 = z1 / e0;
    let sol = scalar(alpha, vec![BasisTerm::cos(2.0 * c1.re, 0, l1.im, l1.re), BasisTerm::sin(-2.0 * c1.im, 0, l1.im, l1.re)]);
    Ok(Classified { case: "1(i)".into(), classification: Classification::Unique { solution: vec![sol] }, reports: vec![report] })
}

/// Real basis of the second-order equation: `E(l1 t), E(l2 t)`, or
/// `E(l t), t E(l a t)` on a double root, or `Re/Im E(l t)`.
pub fn second_order_basis(alpha: Alpha, p: f64, q: f64) -> Vec<BasisTerm> {
    let a = alpha.value();
    let (delta, degenerate) = roots(alpha, p, q);
    if degenerate {
        let l = -p / (2.0 * a);
        vec![BasisTerm::exp(1.0, 0, l), BasisTerm::exp(1.0, 1, l)]
    } else if delta > 0.0 {
        let s = libm::sqrt(delta);
        vec![BasisTerm::exp(1.0, 0, (-p + s) / (2.0 * a)), BasisTerm::exp(1.0, 0, (-p - s) / (2.0 * a))]
    } else {
        let (re, im) = (-p / (2.0 * a), libm::sqrt(-delta) / (2.0 * a));
        vec![BasisTerm::cos(1.0, 0, im, re), BasisTerm::sin(1.0, 0, im, re)]
    }
}

/// The 2x2 matrix of basis values and derivatives at `t0`.
pub fn same_point_matrix(alpha: Alpha, p: f64, q: f64, t0: f64) -> Result<Matrix2<f64>> {
    let opts = EvalOptions::default();
    let b = second_order_basis(alpha, p, q);
    Ok(Matrix2::new(
        b[0].eval(alpha, t0, &opts)?,
        b[1].eval(alpha, t0, &opts)?,
        b[0].derivative(alpha, 1, t0, &opts)?,
        b[1].derivative(alpha, 1, t0, &opts)?,
    ))
}

/// `y'' + p y'(a t) + q y(a^2 t) = 0` with `y(t0) = A`, `y'(t0) = B`.
pub fn classify_second_order_same_point(alpha: Alpha, p: f64, q: f64, t0: f64, a_val: f64, b_val: f64, _zeros: &ZeroTable) -> Result<Classified> {
    if t0 == 0.0 {
        return Err(Error::InvalidInput("t0 must be nonzero".into()));
    }
    let basis = second_order_basis(alpha, p, q);
    let m = same_point_matrix(alpha, p, q, t0)?;
    let rhs = Vector2::new(a_val, b_val);
    let combine = |c: &[f64]| -> ClosedFormSolution {
        scalar(alpha, basis.iter().zip(c).map(|(t, ci)| BasisTerm { coeff: *ci, ..*t }).collect())
    };
    // equilibrate so that basis functions of very different size at t0 do
    // not read as rank loss: (R m D)(D^-1 c) = R rhs
    let inv = |n: f64| if n > 0.0 { 1.0 / n } else { 1.0 };
    let col = Vector2::new(inv(m.column(0).norm()), inv(m.column(1).norm()));
    let md = Matrix2::new(m[(0, 0)] * col[0], m[(0, 1)] * col[1], m[(1, 0)] * col[0], m[(1, 1)] * col[1]);
    let row = Vector2::new(inv(md.row(0).norm()), inv(md.row(1).norm()));
    let m = Matrix2::new(md[(0, 0)] * row[0], md[(0, 1)] * row[0], md[(1, 0)] * row[1], md[(1, 1)] * row[1]);
    let rhs = rhs.component_mul(&row);
    let (a_val, b_val) = (rhs[0], rhs[1]);
    let combine = |c: &[f64]| combine(&[c[0] * col[0], c[1] * col[1]]);
    let svd = m.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let s = svd.singular_values;
    let smax = s[0].max(s[1]);
    let (imax, imin) = if s[0] >= s[1] { (0, 1) } else { (1, 0) };
    let ratio = if smax > 0.0 { s[imin] / smax } else { 0.0 };
    if ratio > RANK_TOL && ratio < RANK_BAND {
        return Err(Error::RankAmbiguous { ratio });
    }
    if ratio >= RANK_BAND {
        let c = m.lu().solve(&rhs).ok_or(Error::RankAmbiguous { ratio })?;
        return Ok(Classified {
            case: "i".into(),
            classification: Classification::Unique { solution: vec![combine(&[c[0], c[1]])] },
            reports: Vec::new(),
        });
    }
    if smax == 0.0 {
        let zero_rhs = a_val == 0.0 && b_val == 0.0;
        let classification = if zero_rhs {
            Classification::InfiniteFamily {
                particular: vec![ClosedFormSolution::zero(alpha)],
                null_basis: vec![vec![combine(&[1.0, 0.0])], vec![combine(&[0.0, 1.0])]],
                free_params: 2,
            }
        } else {
            Classification::NoSolution {
                witness: Witness { description: "basis matrix vanishes".into(), obstruction: 0.0, target: rhs.norm(), error_estimate: 0.0 },
            }
        };
        return Ok(Classified { case: if zero_rhs { "ii" } else { "iii" }.into(), classification, reports: Vec::new() });
    }
    // left null direction: consistency needs u_min . rhs = 0
    let umin = u.column(imin);
    let proj = umin.dot(&rhs);
    let rel = if rhs.norm() > 0.0 { proj.abs() / rhs.norm() } else { 0.0 };
    if rel > 1e-8 && rel < RANK_BAND {
        return Err(Error::RankAmbiguous { ratio: rel });
    }
    if rel <= 1e-8 {
        let umax = u.column(imax);
        let vmax = vt.row(imax);
        let k = umax.dot(&rhs) / s[imax];
        let particular = combine(&[k * vmax[0], k * vmax[1]]);
        let vmin = vt.row(imin);
        Ok(Classified {
            case: "ii".into(),
            classification: Classification::InfiniteFamily {
                particular: vec![particular],
                null_basis: vec![vec![combine(&[vmin[0], vmin[1]])]],
                free_params: 1,
            },
            reports: Vec::new(),
        })
    } else {
        Ok(Classified {
            case: "iii".into(),
            classification: Classification::NoSolution {
                witness: Witness {
                    description: "data has a component outside the range of the singular basis matrix".into(),
                    obstruction: 0.0,
                    target: proj,
                    error_estimate: 1e-8 * rhs.norm(),
                },
            },
            reports: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::build_zero_table;

    fn al(a: f64) -> Alpha {
        Alpha::new(a).unwrap()
    }

    #[test]
    fn positive_argument_unique() {
        let a = al(0.5);
        let z = build_zero_table(a, 5, 1e-13).unwrap();
        let c = classify_first_order(a, 1.0, 1.0, 2.0, &z).unwrap();
        let Classification::Unique { solution } = &c.classification else { panic!() };
        assert!((solution[0].eval(1.0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trichotomy_at_tabulated_zero() {
        let a = al(0.5);
        let z = build_zero_table(a, 5, 1e-13).unwrap();
        let xs = -z.e_neg[0];
        let c = classify_first_order(a, -1.0, xs, 0.0, &z).unwrap();
        assert_eq!(c.classification.free_params(), Some(1));
        let c = classify_first_order(a, -1.0, xs, 1.0, &z).unwrap();
        assert_eq!(c.case, "iii");
        let e = classify_first_order(a, -1.0, xs * (1.0 + 1e-5), 1.0, &z);
        assert!(matches!(e, Ok(Classified { ref case, .. }) if case == "i") || matches!(e, Err(Error::AmbiguousNearZero { .. })));
    }

    #[test]
    fn untabulated_zero_is_ambiguous() {
        let a = al(0.5);
        let z = build_zero_table(a, 1, 1e-13).unwrap();
        let full = build_zero_table(a, 3, 1e-13).unwrap();
        let xs = -full.e_neg[2];
        assert!(matches!(classify_first_order(a, -1.0, xs, 1.0, &z), Err(Error::AmbiguousNearZero { .. })));
    }

    #[test]
    fn exp_never_vanishes() {
        let a = al(1.0);
        let z = build_zero_table(a, 3, 1e-13).unwrap();
        for x0 in [-30.0, -1.0, 2.0] {
            let c = classify_first_order_forced(a, -1.0, (1.0, -1.0), x0, 0.3, &z).unwrap();
            assert_eq!(c.classification.free_params(), Some(0));
        }
    }

    #[test]
    fn classical_oscillator_same_and_split_points() {
        let a = al(1.0);
        let z = build_zero_table(a, 3, 1e-13).unwrap();
        let (s, c) = (libm::sin(1.0), libm::cos(1.0));
        for f in [classify_second_order_same_point, classify_second_order_split] {
            let r = f(a, 0.0, 1.0, 1.0, c, -s, &z).unwrap();
            let Classification::Unique { solution } = &r.classification else { panic!() };
            for t in [0.0, 0.5, 2.0] {
                assert!((solution[0].eval(t).unwrap() - libm::cos(t)).abs() < 1e-13);
            }
        }
    }
}
