//! Acceptance suites. Each criterion records named measurements against
//! tolerances and passes only if all of them do.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use pantograph_core::bvp::{self, certificate_holds, eigen_residual, negativity_certificate};
use pantograph_core::general_point::{self as gp, Classification, Classified};
use pantograph_core::oracle::{self, DenseTrajectory, PantographSystemSpec};
use pantograph_core::pde::{self, WaveNormalization};
use pantograph_core::solve::identities::conservation_invariant;
use pantograph_core::solve::ode::{self, companion_initial, companion_system};
use pantograph_core::solve::system::{solve_linear_system, solve_triangular_chain};
use pantograph_core::solve::ClosedFormSolution;
use pantograph_core::special::{self, addition_rhs};
use pantograph_core::zeros::{build_family, build_zero_table, euler_sum, euler_target, Family};
use pantograph_core::{quad, Alpha, EvalOptions, Result, SpecialFunctionKind};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub measurements: Vec<Measurement>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        let worst = self.measurements.iter().find(|m| !m.passed);
        let detail = match worst {
            Some(m) => format!("{}: {:e} vs {:e}", m.name, m.value, m.tolerance),
            None => format!("{} measurements", self.measurements.len()),
        };
        format!("[{}] criterion {:>2} {} ({:.2}s; {})", if self.passed { "PASS" } else { "FAIL" }, self.id, self.title, self.seconds, detail)
    }
}

#[derive(Default)]
struct Rec {
    ms: Vec<Measurement>,
    notes: Vec<String>,
}

impl Rec {
    /// Passes when `value < tol`.
    fn lt(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.ms.push(Measurement { name: name.into(), value, tolerance: tol, passed: value < tol });
    }

    /// Passes when `value > tol`.
    fn gt(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.ms.push(Measurement { name: name.into(), value, tolerance: tol, passed: value > tol });
    }

    fn holds(&mut self, name: impl Into<String>, ok: bool) {
        self.ms.push(Measurement { name: name.into(), value: if ok { 1.0 } else { 0.0 }, tolerance: 1.0, passed: ok });
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn run(id: u32, title: &'static str, body: impl FnOnce(&mut Rec) -> Result<()>) -> CriterionReport {
    let start = Instant::now();
    let mut r = Rec::default();
    if let Err(e) = body(&mut r) {
        r.ms.push(Measurement { name: format!("aborted: {e}"), value: f64::NAN, tolerance: 0.0, passed: false });
    }
    let passed = !r.ms.is_empty() && r.ms.iter().all(|m| m.passed);
    CriterionReport { id, title, passed, seconds: start.elapsed().as_secs_f64(), measurements: r.ms, notes: r.notes }
}

fn al(a: f64) -> Alpha {
    Alpha::new(a).expect("alpha in range")
}

fn ev(kind: SpecialFunctionKind, alpha: Alpha, x: f64) -> Result<f64> {
    Ok(special::eval(kind, alpha, x, &EvalOptions::default())?.value)
}

fn e_of(alpha: Alpha, x: f64) -> f64 {
    ev(SpecialFunctionKind::ExpLike, alpha, x).unwrap_or(f64::NAN)
}

const ORACLE_H: f64 = 1e-3;
const QUAD_TOL: f64 = 1e-10;
const GRID: usize = 201;

/// `max_t |traj_c(t) - f(t)|` on a uniform grid over `[0, t_end]`.
fn sup_diff(traj: &DenseTrajectory, c: usize, t_end: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..GRID {
        let t = t_end * i as f64 / (GRID - 1) as f64;
        worst = worst.max((traj.component(t, c)? - f(t)?).abs());
    }
    Ok(worst)
}

pub const CRITERIA: [(u32, &str); 11] = [
    (1, "unit-alpha degeneration"),
    (2, "Euler-like sums"),
    (3, "interlacing of zeros"),
    (4, "addition formulae"),
    (5, "oracle equivalence"),
    (6, "conservation law"),
    (7, "general-point trichotomy"),
    (8, "boundary eigenpairs"),
    (9, "Gram-Schmidt expansion"),
    (10, "PDE mode exactness"),
    (11, "negative zeros by two methods"),
];

pub fn criterion(id: u32) -> Option<CriterionReport> {
    Some(match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        _ => return None,
    })
}

pub fn all() -> Vec<CriterionReport> {
    (1..=11).filter_map(criterion).collect()
}

/// Suites addressable from the command line.
pub fn suite(name: &str) -> Option<Vec<CriterionReport>> {
    let ids: Vec<u32> = match name {
        "all" => (1..=11).collect(),
        "degenerate" => vec![1],
        "euler" => vec![2],
        "interlace" => vec![3],
        "addition" => vec![4],
        "oracle" => vec![5, 11],
        "conservation" => vec![6],
        "general" => vec![7],
        "eigen" => vec![8],
        "expansion" => vec![9],
        "pde" => vec![10],
        _ => return None,
    };
    Some(ids.into_iter().filter_map(criterion).collect())
}

pub fn c1() -> CriterionReport {
    run(1, CRITERIA[0].1, |r| {
        let start = Instant::now();
        let one = al(1.0);
        let mut worst = [0.0f64; 3];
        for i in 0..400 {
            let x = -10.0 + 20.0 * i as f64 / 399.0;
            let cases = [
                (SpecialFunctionKind::ExpLike, x.exp()),
                (SpecialFunctionKind::CosLike, x.cos()),
                (SpecialFunctionKind::SinLike, x.sin()),
            ];
            for (k, (kind, exact)) in cases.into_iter().enumerate() {
                let v = ev(kind, one, x)?;
                worst[k] = worst[k].max((v - exact).abs() / exact.abs().max(1.0));
            }
        }
        r.lt("E_1 - exp on [-10, 10]", worst[0], 1e-12);
        r.lt("C_1 - cos on [-10, 10]", worst[1], 1e-12);
        r.lt("S_1 - sin on [-10, 10]", worst[2], 1e-12);
        let t = build_zero_table(one, 10, 1e-14)?;
        let pi = std::f64::consts::PI;
        let dr = t.rho.iter().enumerate().map(|(n, z)| (z - (n as f64 + 1.0) * pi).abs()).fold(0.0, f64::max);
        let de = t.eta.iter().enumerate().map(|(n, z)| (z - (n as f64 + 0.5) * pi).abs()).fold(0.0, f64::max);
        r.holds("ten zeros per family", t.rho.len() == 10 && t.eta.len() == 10);
        r.lt("rho_n - n pi, n <= 10", dr, 1e-9);
        r.lt("eta_n - (n - 1/2) pi, n <= 10", de, 1e-9);
        r.lt("runtime seconds", start.elapsed().as_secs_f64(), 5.0);
        Ok(())
    })
}

pub fn c2() -> CriterionReport {
    euler(&[(0.3, 20, 1e-8), (0.5, 20, 1e-8), (0.7, 20, 1e-8), (0.9, 40, 1e-6)])
}

/// The Euler-like sums at a single alpha; 40 zeros and 1e-6 from 0.8 up.
pub fn euler_at(alpha: Alpha) -> CriterionReport {
    let a = alpha.value();
    if a < 0.8 {
        euler(&[(a, 20, 1e-8)])
    } else {
        euler(&[(a, 40, 1e-6)])
    }
}

fn euler(cases: &[(f64, usize, f64)]) -> CriterionReport {
    run(2, CRITERIA[1].1, |r| {
        let start = Instant::now();
        for &(a, n, tol) in cases {
            let alpha = al(a);
            let t = build_family(alpha, Family::Rho, n, 1e-14)?;
            r.holds(format!("alpha={a}: {n} zeros found"), t.rho.len() == n);
            for p in [2, 4] {
                let s = euler_sum(&t, p)?;
                let target = euler_target(alpha, p);
                r.lt(format!("alpha={a}: |sum_(n<={n}) rho^-{p} - target|"), (s.partial - target).abs(), tol);
                r.note(format!("alpha={a} p={p}: partial {:.17e}, tail bound {:.3e}, target {:.17e}", s.partial, s.tail, target));
            }
        }
        r.lt("runtime seconds", start.elapsed().as_secs_f64(), 60.0);
        Ok(())
    })
}

pub fn c3() -> CriterionReport {
    interlace(&[0.3, 0.5, 0.7, 0.9])
}

pub fn interlace_at(alpha: Alpha) -> CriterionReport {
    interlace(&[alpha.value()])
}

fn interlace(alphas: &[f64]) -> CriterionReport {
    run(3, CRITERIA[2].1, |r| {
        for &a in alphas {
            let t = build_zero_table(al(a), 15, 1e-14)?;
            let mut chain = vec![0.0];
            for n in 0..15 {
                chain.extend([a * t.eta[n], t.eta[n], a * t.rho[n], t.rho[n]]);
            }
            let min_gap = chain.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            r.gt(format!("alpha={a}: smallest step in the 61-link chain"), min_gap, 0.0);
        }
        Ok(())
    })
}

pub fn c4() -> CriterionReport {
    run(4, CRITERIA[3].1, |r| {
        let mut rng = StdRng::seed_from_u64(4);
        let opts = EvalOptions::default();
        for a in [0.5, 0.9] {
            let alpha = al(a);
            for kind in [SpecialFunctionKind::ExpLike, SpecialFunctionKind::CosLike, SpecialFunctionKind::SinLike] {
                let mut worst: f64 = 0.0;
                for _ in 0..100 {
                    let x = rng.gen_range(-3.0..=3.0);
                    let y = rng.gen_range(-3.0..=3.0);
                    let lhs = ev(kind, alpha, x + y)?;
                    let rhs = addition_rhs(kind, alpha, x, y, 80, &opts)?.value;
                    worst = worst.max((lhs - rhs).abs());
                }
                r.lt(format!("alpha={a} {}: max residual over 100 pairs", kind.name()), worst, 1e-10);
            }
        }
        Ok(())
    })
}

fn scalar_oracle(alpha: Alpha, matrix: Vec<f64>, x0: Vec<f64>, g: Option<&dyn Fn(f64, &mut [f64])>, t_end: f64) -> Result<DenseTrajectory> {
    let n = x0.len();
    let mut spec = PantographSystemSpec::new(alpha, matrix, n, x0)?;
    if let Some(g) = g {
        spec = spec.with_forcing(g);
    }
    oracle::integrate(&spec, t_end, ORACLE_H)
}

/// Closed form of an n-th order problem against the oracle on `[0, 2]`.
fn nth_vs_oracle(alpha: Alpha, p: &[f64], init: &[f64], sol: &ClosedFormSolution) -> Result<f64> {
    let traj = scalar_oracle(alpha, companion_system(alpha, p), companion_initial(alpha, init), None, 2.0)?;
    sup_diff(&traj, 0, 2.0, |t| sol.eval(t))
}

pub fn c5() -> CriterionReport {
    run(5, CRITERIA[4].1, |r| {
        let mut rng = StdRng::seed_from_u64(5);
        let tol = 1e-6;

        // first order with exponential forcing, every fourth instance resonant
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            let a: f64 = rng.gen_range(0.3..=1.0);
            let alpha = al(a);
            let beta = rng.gen_range(-1.5..=1.5);
            let y0 = rng.gen_range(-2.0..=2.0);
            let amp = rng.gen_range(-2.0..=2.0);
            let rate = if i % 4 == 3 {
                a * beta
            } else {
                loop {
                    let v: f64 = rng.gen_range(-2.0..=2.0);
                    if (v - a * beta).abs() > 0.2 {
                        break v;
                    }
                }
            };
            let sol = ode::solve_first_order_forced_exp(alpha, beta, y0, amp, rate);
            let g = move |t: f64, out: &mut [f64]| out[0] = amp * e_of(alpha, rate * t);
            let traj = scalar_oracle(alpha, vec![beta], vec![y0], Some(&g), 2.0)?;
            worst = worst.max(sup_diff(&traj, 0, 2.0, |t| sol.eval(t))?);
        }
        r.lt("first order, exponential forcing (20)", worst, tol);

        let mut worst: f64 = 0.0;
        for i in 0..10 {
            let alpha = al(rng.gen_range(0.3..=1.0));
            let a = alpha.value();
            let beta = rng.gen_range(-1.5..=1.5);
            let y0 = rng.gen_range(-2.0..=2.0);
            let amp = rng.gen_range(-2.0..=2.0);
            let k = 1 + (i % 3) as u32;
            let sol = ode::solve_first_order_forced_power(alpha, beta, y0, amp, k);
            let g = move |t: f64, out: &mut [f64]| out[0] = amp * t.powi(k as i32) * e_of(alpha, beta * a.powi(k as i32 + 1) * t);
            let traj = scalar_oracle(alpha, vec![beta], vec![y0], Some(&g), 2.0)?;
            worst = worst.max(sup_diff(&traj, 0, 2.0, |t| sol.eval(t))?);
        }
        r.lt("first order, power-times-E forcing (10)", worst, tol);

        for (label, lo, hi) in [("second order, positive discriminant (20)", 0.2, 4.0), ("second order, negative discriminant (20)", -4.0, -0.2)] {
            let mut worst: f64 = 0.0;
            for _ in 0..20 {
                let alpha = al(rng.gen_range(0.3..=1.0));
                let a = alpha.value();
                let p: f64 = rng.gen_range(-2.0..=2.0);
                let d: f64 = rng.gen_range(lo..=hi);
                let q = (p * p - d) / (4.0 * a);
                let (c1, c2) = (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0));
                let sol = ode::solve_second_order(alpha, p, q, c1, c2);
                worst = worst.max(nth_vs_oracle(alpha, &[q, p], &[c1, c2], &sol)?);
            }
            r.lt(label, worst, tol);
        }
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let alpha = al(rng.gen_range(0.3..=1.0));
            let p: f64 = rng.gen_range(-2.0..=2.0);
            let q = p * p / (4.0 * alpha.value());
            let (c1, c2) = (rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0));
            let sol = ode::solve_second_order(alpha, p, q, c1, c2);
            worst = worst.max(nth_vs_oracle(alpha, &[q, p], &[c1, c2], &sol)?);
        }
        r.lt("second order, zero discriminant (5)", worst, tol);

        let mut worst: f64 = 0.0;
        let mut rejected = 0;
        let mut triple = 0;
        let mut done = 0;
        while done < 20 {
            let alpha = al(rng.gen_range(0.5..=1.0));
            let (p, n) = if done % 5 == 0 {
                // (b - l)^3 or (b - l)^3 (b - m), leading coefficient a^(n(n-1)/2)
                let l: f64 = rng.gen_range(-1.5..=1.5);
                let mut c = vec![-l * l * l, 3.0 * l * l, -3.0 * l, 1.0];
                if done % 10 == 5 {
                    let m: f64 = loop {
                        let m: f64 = rng.gen_range(-1.5..=1.5);
                        if (m - l).abs() > 0.3 {
                            break m;
                        }
                    };
                    let mut d = vec![0.0; 5];
                    for (j, cj) in c.iter().enumerate() {
                        d[j + 1] += cj;
                        d[j] -= m * cj;
                    }
                    c = d;
                }
                let n = c.len() - 1;
                let lead = alpha.tri_pow(n as u32);
                let p: Vec<f64> = (0..n).map(|j| lead * c[j] / alpha.tri_pow(j as u32)).collect();
                (p, n)
            } else {
                let n = 1 + done % 4;
                ((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect::<Vec<f64>>(), n)
            };
            let init: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let sol = match ode::solve_nth_order(alpha, &p, &init) {
                Ok(s) => s,
                Err(pantograph_core::Error::IllConditionedInitialSystem { .. }) => {
                    rejected += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if done % 5 == 0 {
                let cp = ode::CharPoly::new(alpha, &p)?;
                if cp.roots.iter().any(|root| root.multiplicity == 3) {
                    triple += 1;
                }
            }
            worst = worst.max(nth_vs_oracle(alpha, &p, &init, &sol)?);
            done += 1;
        }
        r.lt("n-th order, n <= 4 (20)", worst, tol);
        r.holds("triple roots recognised in all 4 constructed instances", triple == 4);
        if rejected > 0 {
            r.note(format!("{rejected} random n-th order instances rejected as ill-conditioned and redrawn"));
        }

        let mut worst: f64 = 0.0;
        for i in 0..20 {
            let alpha = al(rng.gen_range(0.3..=1.0));
            let m = 1 + i % 4;
            let beta = rng.gen_range(-1.5..=1.5);
            let init: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let sol = solve_triangular_chain(alpha, beta, &init);
            let mut mat = vec![0.0; m * m];
            for k in 0..m {
                mat[k * m + k] = beta;
                if k + 1 < m {
                    mat[k * m + k + 1] = 1.0;
                }
            }
            let traj = scalar_oracle(alpha, mat, init, None, 2.0)?;
            for (c, s) in sol.iter().enumerate() {
                worst = worst.max(sup_diff(&traj, c, 2.0, |t| s.eval(t))?);
            }
        }
        r.lt("triangular chain, m <= 4 (20)", worst, tol);

        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let alpha = al(rng.gen_range(0.3..=1.0));
            let mat: Vec<f64> = (0..9).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let y0: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let sol = solve_linear_system(alpha, &mat, &y0, None)?;
            let traj = scalar_oracle(alpha, mat, y0, None, 2.0)?;
            for (c, s) in sol.iter().enumerate() {
                worst = worst.max(sup_diff(&traj, c, 2.0, |t| s.eval(t))?);
            }
        }
        r.lt("3x3 system (20)", worst, tol);

        for (label, alpha, p) in [("y' = y", 1.0, vec![-1.0]), ("y' = y(x/2)", 0.5, vec![-1.0]), ("C_0.5 as a system", 0.5, vec![0.5, 0.0])] {
            let alpha = al(alpha);
            let x0 = companion_initial(alpha, &[1.0, 0.0][..p.len()]);
            let spec = PantographSystemSpec::new(alpha, companion_system(alpha, &p), p.len(), x0)?;
            let order = oracle::richardson_order_check(&spec, 2.0, 0.05)?;
            r.lt(format!("Richardson order, {label}: |order - 4|"), (order - 4.0).abs(), 0.5);
        }
        Ok(())
    })
}

pub fn c6() -> CriterionReport {
    run(6, CRITERIA[5].1, |r| {
        for a in [0.5, 0.9] {
            let mut worst: f64 = 0.0;
            for (q0, v0) in [(1.0, 0.0), (0.0, 1.0), (1.0, 2.0)] {
                for t in [0.5, 1.0, 1.5, 2.0] {
                    worst = worst.max((conservation_invariant(al(a), q0, v0, t, 40)? - 1.0).abs());
                }
            }
            r.lt(format!("alpha={a}: max |I(t) - 1|, 40 terms"), worst, 1e-10);
        }
        Ok(())
    })
}

fn sample_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect()
}

/// `max |y'(x) - k y(a x) - A E(r x)|`.
fn first_order_residual(y: &ClosedFormSolution, k: f64, forcing: Option<(f64, f64)>, xs: &[f64]) -> Result<f64> {
    let a = y.alpha.value();
    let mut worst: f64 = 0.0;
    for &x in xs {
        let f = match forcing {
            Some((amp, rate)) => amp * ev(SpecialFunctionKind::ExpLike, y.alpha, rate * x)?,
            None => 0.0,
        };
        worst = worst.max((y.derivative(1, x)? - k * y.eval(a * x)? - f).abs());
    }
    Ok(worst)
}

/// `max |y'' + p y'(a t) + q y(a^2 t)|`.
fn second_order_residual(y: &ClosedFormSolution, p: f64, q: f64, xs: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in xs {
        worst = worst.max(ode::apply_operator(y, &[q, p], x)?.abs());
    }
    Ok(worst)
}

fn family_members(c: &Classified) -> Vec<Vec<ClosedFormSolution>> {
    let k = c.classification.free_params().unwrap_or(0);
    let choices: [[f64; 2]; 3] = [[-1.0, 0.7], [0.5, -2.0], [2.0, 1.5]];
    choices.iter().filter_map(|ch| c.classification.member(&ch[..k])).collect()
}

fn witness_margin(c: &Classified) -> Option<f64> {
    match &c.classification {
        Classification::NoSolution { witness } => {
            Some((witness.obstruction - witness.target).abs() / (10.0 * witness.error_estimate).max(f64::MIN_POSITIVE))
        }
        _ => None,
    }
}

pub fn c7() -> CriterionReport {
    run(7, CRITERIA[6].1, |r| {
        let alpha = al(0.5);
        let a = alpha.value();
        let table = build_zero_table(alpha, 6, 1e-14)?;
        let xs = -table.e_neg[0];
        let pts = sample_points(0.0, 2.0 * xs, 20);

        // y' = -y(a x) at the first zero of E(-x)
        let fam = gp::classify_first_order(alpha, -1.0, xs, 0.0, &table)?;
        r.holds("first order, y0 = 0 at a zero: one-parameter family", fam.classification.free_params() == Some(1));
        let mut worst: f64 = 0.0;
        for m in family_members(&fam) {
            worst = worst.max(first_order_residual(&m[0], -1.0, None, &pts)?).max((m[0].eval(xs)? - 0.0).abs());
        }
        r.lt("first order family: equation and data residual, 3 members", worst, 1e-8);
        let none = gp::classify_first_order(alpha, -1.0, xs, 1.0, &table)?;
        r.gt("first order, y0 = 1 at a zero: witness gap / (10 x error)", witness_margin(&none).unwrap_or(0.0), 1.0);

        // forced, resonant and not
        for (label, rate) in [("resonant", -a), ("non-resonant", 0.8)] {
            let amp = 0.7;
            let probe = gp::classify_first_order_forced(alpha, -1.0, (amp, rate), 0.9, 0.0, &table)?;
            let Classification::Unique { solution } = &probe.classification else {
                r.holds(format!("forced {label}: generic point unique"), false);
                continue;
            };
            let forced_value = solution[0].eval(xs)? - solution[0].terms.iter().filter(|t| t.rate == -1.0 && t.power == 0).map(|t| t.coeff).sum::<f64>() * e_of(alpha, -xs);
            let fam = gp::classify_first_order_forced(alpha, -1.0, (amp, rate), xs, forced_value, &table)?;
            r.holds(format!("forced {label}: consistent data at a zero gives a family"), fam.classification.free_params() == Some(1));
            let mut worst: f64 = 0.0;
            for m in family_members(&fam) {
                worst = worst.max(first_order_residual(&m[0], -1.0, Some((amp, rate)), &pts)?).max((m[0].eval(xs)? - forced_value).abs());
            }
            r.lt(format!("forced {label} family residuals"), worst, 1e-8);
            let none = gp::classify_first_order_forced(alpha, -1.0, (amp, rate), xs, forced_value + 1.0, &table)?;
            r.gt(format!("forced {label}: witness gap / (10 x error)"), witness_margin(&none).unwrap_or(0.0), 1.0);
        }

        // Jordan pair, case (ii) and (v)
        let jp = gp::classify_jordan_pair(alpha, -1.0, xs, 1.0, 0.0, &table)?;
        r.holds("Jordan pair, y2(x0) = 0 at a zero: one-parameter family", jp.classification.free_params() == Some(1));
        let mut worst: f64 = 0.0;
        for m in family_members(&jp) {
            for &x in &pts {
                let r1 = m[0].derivative(1, x)? + m[0].eval(a * x)? - m[1].eval(a * x)?;
                let r2 = m[1].derivative(1, x)? + m[1].eval(a * x)?;
                worst = worst.max(r1.abs()).max(r2.abs());
            }
            worst = worst.max((m[0].eval(xs)? - 1.0).abs()).max(m[1].eval(xs)?.abs());
        }
        r.lt("Jordan pair family residuals", worst, 1e-8);
        let jn = gp::classify_jordan_pair(alpha, -1.0, xs, 1.0, 1.0, &table)?;
        r.holds("Jordan pair, y2(x0) != 0 at a zero: no solution", matches!(jn.classification, Classification::NoSolution { .. }));

        // second order, data split between t0 and t0 / a
        let (l1, l2) = (0.5, -1.0);
        let (p, q) = (-a * (l1 + l2), a * l1 * l2);
        let av = 0.8;
        let split = gp::classify_second_order_split(alpha, p, q, xs, av, av * l1, &table)?;
        r.holds(format!("split data, one gate at a zero, z2 = 0: family (case {})", split.case), split.classification.free_params() == Some(1));
        let mut worst: f64 = 0.0;
        for m in family_members(&split) {
            worst = worst.max(second_order_residual(&m[0], p, q, &pts)?);
            worst = worst.max((m[0].eval(xs)? - av).abs()).max((m[0].derivative(1, xs / a)? - av * l1).abs());
        }
        r.lt("split data family residuals", worst, 1e-8);
        let split_none = gp::classify_second_order_split(alpha, p, q, xs, av, av * l1 + 1.0, &table)?;
        r.holds("split data, z2 != 0 at a zero: no solution", matches!(split_none.classification, Classification::NoSolution { .. }));

        let (p2, q2) = (2.0 * a, a);
        let rep = gp::classify_second_order_split(alpha, p2, q2, xs, av, -av, &table)?;
        r.holds(format!("split data, double root at a zero: family (case {})", rep.case), rep.classification.free_params() == Some(1));
        let mut worst: f64 = 0.0;
        for m in family_members(&rep) {
            worst = worst.max(second_order_residual(&m[0], p2, q2, &pts)?);
            worst = worst.max((m[0].eval(xs)? - av).abs()).max((m[0].derivative(1, xs / a)? + av).abs());
        }
        r.lt("split data, double root family residuals", worst, 1e-8);

        // same-point data at a root of the basis determinant
        // roots 1 and -1
        let (sp, sq) = (0.0, -a);
        let det = |t: f64| -> Result<f64> { Ok(gp::same_point_matrix(alpha, sp, sq, t)?.determinant()) };
        let mut t_lo = 0.2;
        let mut found = None;
        while t_lo < 40.0 {
            let t_hi = t_lo + 0.01;
            if det(t_lo)? * det(t_hi)? < 0.0 {
                found = Some((t_lo, t_hi));
                break;
            }
            t_lo = t_hi;
        }
        r.holds("basis determinant changes sign on (0.2, 40)", found.is_some());
        if let Some((mut lo, mut hi)) = found {
            let s_lo = det(lo)?.signum();
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if det(mid)?.signum() == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t0 = 0.5 * (lo + hi);
            let mtx = gp::same_point_matrix(alpha, sp, sq, t0)?;
            let data = mtx * nalgebra::Vector2::new(1.0, 0.5);
            let fam = gp::classify_second_order_same_point(alpha, sp, sq, t0, data[0], data[1], &table)?;
            r.holds("same-point data in the range of a singular matrix: family", fam.classification.free_params() == Some(1));
            let mut worst: f64 = 0.0;
            for m in family_members(&fam) {
                worst = worst.max(second_order_residual(&m[0], sp, sq, &pts)?);
                worst = worst.max((m[0].eval(t0)? - data[0]).abs()).max((m[0].derivative(1, t0)? - data[1]).abs());
            }
            r.lt("same-point family residuals", worst, 1e-8);
            let none = gp::classify_second_order_same_point(alpha, sp, sq, t0, data[0], data[1] + 1.0, &table)?;
            r.holds("same-point data off the range: no solution", matches!(none.classification, Classification::NoSolution { .. }));
        }

        // generic points against the oracle
        let mut worst: f64 = 0.0;
        let u = gp::classify_first_order(alpha, -1.0, 0.8, 1.3, &table)?;
        if let Classification::Unique { solution } = &u.classification {
            let y = &solution[0];
            let traj = scalar_oracle(alpha, vec![-1.0], vec![y.eval(0.0)?], None, 2.0)?;
            worst = worst.max(sup_diff(&traj, 0, 2.0, |t| y.eval(t))?).max((traj.component(0.8, 0)? - 1.3).abs());
        } else {
            worst = f64::INFINITY;
        }
        let u = gp::classify_jordan_pair(alpha, -1.0, 0.8, 1.3, -0.4, &table)?;
        if let Classification::Unique { solution } = &u.classification {
            let x0 = vec![solution[0].eval(0.0)?, solution[1].eval(0.0)?];
            let traj = scalar_oracle(alpha, vec![-1.0, 1.0, 0.0, -1.0], x0, None, 2.0)?;
            for c in 0..2 {
                worst = worst.max(sup_diff(&traj, c, 2.0, |t| solution[c].eval(t))?);
            }
        } else {
            worst = f64::INFINITY;
        }
        for (pp, qq, t0) in [(p, q, 0.9), (sp, sq, 0.7), (0.3, 1.2, 1.1)] {
            for same in [false, true] {
                let u = if same {
                    gp::classify_second_order_same_point(alpha, pp, qq, t0, 0.6, -0.2, &table)?
                } else {
                    gp::classify_second_order_split(alpha, pp, qq, t0, 0.6, -0.2, &table)?
                };
                if let Classification::Unique { solution } = &u.classification {
                    let y = &solution[0];
                    worst = worst.max(nth_vs_oracle(alpha, &[qq, pp], &[y.eval(0.0)?, y.derivative(1, 0.0)?], y)?);
                    let d_at = if same { t0 } else { t0 / a };
                    worst = worst.max((y.eval(t0)? - 0.6).abs()).max((y.derivative(1, d_at)? + 0.2).abs());
                } else {
                    worst = f64::INFINITY;
                }
            }
        }
        r.lt("generic points: unique solutions vs oracle and data", worst, 1e-6);

        // a = 1
        let one = al(1.0);
        let t1 = build_zero_table(one, 3, 1e-14)?;
        let mut all_unique = true;
        for x0 in [-25.0, -3.0, 0.4, 7.0] {
            let cases = [
                gp::classify_first_order(one, -1.0, x0, 1.0, &t1)?,
                gp::classify_first_order_forced(one, -1.0, (1.0, -1.0), x0, 0.5, &t1)?,
                gp::classify_first_order_forced(one, -1.0, (1.0, 0.3), x0, 0.5, &t1)?,
                gp::classify_jordan_pair(one, -1.0, x0, 1.0, 1.0, &t1)?,
                gp::classify_second_order_split(one, 1.0, -2.0, x0, 1.0, 0.0, &t1)?,
                gp::classify_second_order_split(one, 2.0, 1.0, x0, 1.0, 0.0, &t1)?,
                gp::classify_second_order_same_point(one, 1.0, -2.0, x0, 1.0, 0.0, &t1)?,
            ];
            all_unique &= cases.iter().all(|c| c.classification.free_params() == Some(0));
        }
        r.holds("alpha = 1: every classifier returns a unique solution", all_unique);
        Ok(())
    })
}

pub fn c8() -> CriterionReport {
    run(8, CRITERIA[7].1, |r| {
        for a in [0.5, 0.9] {
            let alpha = al(a);
            let table = build_zero_table(alpha, 6, 1e-15)?;
            let mut neg = true;
            for (label, pairs, lo, hi) in [
                ("unit interval", bvp::eigenpairs_unit_interval(alpha, 5, &table)?, 0.0, 1.0),
                ("symmetric interval", bvp::eigenpairs_symmetric(alpha, 1.0, 5, &table)?, -1.0, 1.0),
            ] {
                let pts = sample_points(lo, hi, 20);
                let mut res: f64 = 0.0;
                let mut bnd: f64 = 0.0;
                let mut abs_bnd: f64 = 0.0;
                for e in &pairs {
                    for &x in &pts {
                        res = res.max(eigen_residual(e, x)? / e.amplitude);
                    }
                    let b = e.eigenfunction.eval(lo)?.abs().max(e.eigenfunction.eval(hi)?.abs());
                    abs_bnd = abs_bnd.max(b);
                    bnd = bnd.max(b / e.amplitude);
                    neg &= e.lambda < 0.0;
                }
                r.lt(format!("alpha={a}: {label} equation residual / amplitude, 5 pairs x 20 points"), res, 1e-8);
                r.lt(format!("alpha={a}: {label} boundary values / amplitude"), bnd, 1e-9);
                let amps: Vec<String> = pairs.iter().map(|e| format!("{:.2e}", e.amplitude)).collect();
                r.note(format!("alpha={a} {label}: amplitudes [{}], largest unscaled boundary value {abs_bnd:.3e}", amps.join(", ")));
            }
            r.holds(format!("alpha={a}: all eigenvalues negative"), neg);
            r.holds(format!("alpha={a}: coefficient sign certificates, 200 terms"), certificate_holds(&negativity_certificate(alpha, 200)));
        }
        Ok(())
    })
}

fn xx(x: f64) -> f64 {
    x * (1.0 - x)
}

pub fn c9() -> CriterionReport {
    run(9, CRITERIA[8].1, |r| {
        let quad_tol = QUAD_TOL;
        for a in [0.5, 0.9] {
            let alpha = al(a);
            let table = build_zero_table(alpha, 6, 1e-15)?;
            let basis = bvp::gram_schmidt_basis(alpha, 6, &table, quad_tol)?;
            r.lt(format!("alpha={a}: max |<e_i, e_j>| / (||f_i|| ||f_j||), i != j"), basis.max_offdiag, 10.0 * quad_tol);
            let rho2 = basis.rho[1];
            let f2 = move |x: f64| ev(SpecialFunctionKind::SinLike, alpha, rho2 * x).unwrap_or(f64::NAN);
            let ex = bvp::expand_in_sine_like(&f2, &basis)?;
            let dev = ex.a.iter().enumerate().map(|(m, v)| (v - if m == 1 { 1.0 } else { 0.0 }).abs()).fold(0.0, f64::max);
            r.lt(format!("alpha={a}: expansion of f_2 vs unit vector"), dev, 1e-8);
            let ex = bvp::expand_in_sine_like(&xx, &basis)?;
            let mut worst: f64 = 0.0;
            for k in 0..6 {
                let v = quad::integrate(|x| Ok((xx(x) - basis.combine(&ex.a, x)?) * basis.f_unit(k, x)?), 0.0, 1.0, quad_tol)?.value;
                worst = worst.max(v.abs());
            }
            r.lt(format!("alpha={a}: max |<x(1-x) - sum A_m f_m, f_k>| / ||f_k||"), worst, 1e-8);
            r.note(format!("alpha={a}: L2 error of the 6-term expansion of x(1-x): {:.3e}", ex.l2_error));
        }
        Ok(())
    })
}

/// Residual of each mode relative to the two terms it balances; the time
/// factors of the higher modes reach 1e60 and more at small alpha.
fn worst_mode_residual(u: &pde::FormalPDESolution, pts: &[(f64, f64)]) -> Result<f64> {
    let (a, b) = (u.alpha.value(), u.beta.value());
    let (lag, order) = match u.kind {
        pde::PdeKind::HeatLike => (b, 1),
        pde::PdeKind::WaveLike => (b * b, 2),
    };
    let mut worst: f64 = 0.0;
    for (k, m) in u.modes.iter().enumerate() {
        for &(x, t) in pts {
            let scale = (m.space.eval(a * a * x)? * m.time.derivative(order, t)?).abs() + (m.space.derivative(2, x)? * m.time.eval(lag * t)?).abs();
            if scale > 0.0 {
                worst = worst.max(u.mode_residual(k, x, t)?.abs() / scale);
            }
        }
    }
    Ok(worst)
}

pub fn c10() -> CriterionReport {
    run(10, CRITERIA[9].1, |r| {
        let mut rng = StdRng::seed_from_u64(10);
        let quad_tol = QUAD_TOL;
        let alpha = al(0.5);
        let table = build_zero_table(alpha, 6, 1e-15)?;
        let basis = bvp::gram_schmidt_basis(alpha, 6, &table, quad_tol)?;
        let pts: Vec<(f64, f64)> = (0..20).map(|_| (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0))).collect();
        let heat = pde::heat_like_solution(alpha, alpha, &xx, 6, &basis)?;
        let psi = |x: f64| x * x * (1.0 - x);
        for a in [0.5, 0.9] {
            let alpha = al(a);
            let table = build_zero_table(alpha, 6, 1e-15)?;
            let basis = bvp::gram_schmidt_basis(alpha, 6, &table, quad_tol)?;
            let h = pde::heat_like_solution(alpha, alpha, &xx, 6, &basis)?;
            r.lt(format!("heat-like, alpha = beta = {a}: relative per-mode residual"), worst_mode_residual(&h, &pts)?, 1e-8);
            for beta in [0.5, 0.8] {
                let w = pde::wave_like_solution(alpha, al(beta), &xx, &psi, 6, &basis, WaveNormalization::Corrected)?;
                r.lt(format!("wave-like, alpha = {a}, beta = {beta}: relative per-mode residual"), worst_mode_residual(&w, &pts)?, 1e-8);
            }
        }
        let printed = pde::wave_like_solution(alpha, al(0.8), &xx, &psi, 6, &basis, WaveNormalization::Printed)?;
        r.note(format!("printed velocity scaling, alpha = 0.5, beta = 0.8: relative per-mode residual {:.3e}", worst_mode_residual(&printed, &pts)?));

        // classical limits
        let one = al(1.0);
        let t1 = build_zero_table(one, 4, 1e-15)?;
        let b1 = bvp::gram_schmidt_basis(one, 3, &t1, quad_tol)?;
        let pi = std::f64::consts::PI;
        let s1 = move |x: f64| (pi * x).sin();
        let zero = |_: f64| 0.0;
        let h = pde::heat_like_solution(one, one, &s1, 3, &b1)?;
        let w1 = pde::wave_like_solution(one, one, &s1, &zero, 3, &b1, WaveNormalization::Corrected)?;
        let w2 = pde::wave_like_solution(one, one, &zero, &s1, 3, &b1, WaveNormalization::Corrected)?;
        let mut dev: f64 = 0.0;
        for i in 0..11 {
            for j in 0..6 {
                let (x, t) = (i as f64 / 10.0, j as f64 * 0.2);
                dev = dev.max((h.eval(x, t)? - (-pi * pi * t).exp() * (pi * x).sin()).abs());
                dev = dev.max((w1.eval(x, t)? - (pi * t).cos() * (pi * x).sin()).abs());
                dev = dev.max((w2.eval(x, t)? - (pi * t).sin() * (pi * x).sin() / pi).abs());
            }
        }
        r.lt("alpha = beta = 1: heat and wave vs classical solutions", dev, 1e-9);

        // initial slice vs the least-squares projection from the normal equations
        let n = 6;
        let mut g = DMatrix::<f64>::zeros(n, n);
        let mut rhs = DVector::<f64>::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v = quad::integrate(|x| Ok(basis.f_unit(i, x)? * basis.f_unit(j, x)?), 0.0, 1.0, quad_tol)?.value;
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
            rhs[i] = quad::integrate(|x| Ok(xx(x) * basis.f_unit(i, x)?), 0.0, 1.0, quad_tol)?.value;
        }
        let c = g.lu().solve(&rhs).ok_or(pantograph_core::Error::NearLinearDependence(n))?;
        let c: Vec<f64> = c.iter().zip(&basis.norms).map(|(v, nm)| v / nm).collect();
        let l2 = quad::integrate(
            |x| {
                let d = heat.eval(x, 0.0)? - basis.combine(&c, x)?;
                Ok(d * d)
            },
            0.0,
            1.0,
            quad_tol * quad_tol,
        )?
        .value
        .max(0.0)
        .sqrt();
        r.lt("heat-like u(., 0) vs normal-equation projection, L2", l2, 10.0 * quad_tol);
        Ok(())
    })
}

pub fn c11() -> CriterionReport {
    run(11, CRITERIA[10].1, |r| {
        for a in [0.5, 0.9] {
            let alpha = al(a);
            let t = build_family(alpha, Family::ENeg, 5, 1e-15)?;
            let end = 1.05 * t.e_neg[4];
            let spec = PantographSystemSpec::new(alpha, vec![1.0], 1, vec![1.0])?.backward();
            let traj = oracle::integrate(&spec, end, ORACLE_H)?;
            let sc = traj.sign_changes(0);
            r.holds(format!("alpha={a}: oracle finds at least 5 sign changes"), sc.len() >= 5);
            let dev = sc.iter().zip(&t.e_neg).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            r.lt(format!("alpha={a}: max |oracle zero - series zero|, first 5"), dev, 1e-5);
            r.note(format!("alpha={a}: series zeros {:?}", t.e_neg));
        }
        Ok(())
    })
}
