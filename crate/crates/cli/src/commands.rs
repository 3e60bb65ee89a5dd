use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pantograph_core::bvp;
use pantograph_core::general_point::{self as gp, Classified};
use pantograph_core::pde::{self, FormalPDESolution, WaveNormalization};
use pantograph_core::solve::ode;
use pantograph_core::solve::system::{solve_linear_system, solve_triangular_chain};
use pantograph_core::solve::ClosedFormSolution;
use pantograph_core::special::{self, eval_l};
use pantograph_core::zeros::{build_family, build_zero_table, Family, ZeroTable};
use pantograph_core::{Alpha, EvalOptions, SpecialFunctionKind};
use serde::Deserialize;
use serde_json::json;

use crate::checks;
use crate::envelope::{full, CliError, CliResult, OutputEnvelope};

#[derive(Debug, Parser)]
#[command(name = "pantograph", version, about = "Special functions and closed-form solvers for y'(x) = f(y(ax))")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate E, C, S or L.
    Eval(EvalArgs),
    /// Zero tables of S, C and E(-x).
    Zeros(ZerosArgs),
    /// Closed-form solution of an initial-value problem at the origin.
    Solve(SolveArgs),
    /// Existence and uniqueness for data given away from the origin.
    Classify(ClassifyArgs),
    /// Dirichlet eigenpairs of y'' = l y(a^2 x).
    Eigen(EigenArgs),
    /// Separated-variable heat-like and wave-like series.
    Pde(PdeArgs),
    /// Acceptance suites.
    Check(CheckArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Zeros(_) => "zeros",
            Command::Solve(_) => "solve",
            Command::Classify(_) => "classify",
            Command::Eigen(_) => "eigen",
            Command::Pde(_) => "pde",
            Command::Check(_) => "check",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FnName {
    #[value(name = "E")]
    E,
    #[value(name = "C")]
    C,
    #[value(name = "S")]
    S,
    #[value(name = "L")]
    L,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum, ignore_case = true)]
    pub func: FnName,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, default_value_t = 0)]
    pub deriv: u32,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Rho,
    Eta,
    Eneg,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Rho => Family::Rho,
            FamilyArg::Eta => Family::Eta,
            FamilyArg::Eneg => Family::ENeg,
        }
    }
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub count: usize,
    /// Only this family; all three otherwise.
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long, default_value_t = 1e-14)]
    pub refine_tol: f64,
    /// Also write `family,index,zero,bracket_lo,bracket_hi` rows here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Order n of `y^(n) + sum_j p_j y^(j)(a^(n-j) x) = f(x)`.
    #[arg(long)]
    pub order: Option<usize>,
    /// `p_0, ..., p_(n-1)`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Vec<f64>,
    /// `X' = A X(a t)` with `A` row-major; replaces --order and --coeffs.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub matrix: Vec<f64>,
    /// Chain `x_k' = b x_k(a t) + x_(k+1)(a t)` with this `b`.
    #[arg(long, allow_hyphen_values = true)]
    pub chain: Option<f64>,
    /// `y(0), y'(0), ...`, or `X(0)` for systems.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub init: Vec<f64>,
    /// Forcing terms `A:r` meaning `A E(r x)`.
    #[arg(long, value_delimiter = ',', value_parser = parse_forcing, allow_hyphen_values = true)]
    pub forcing: Vec<(f64, f64)>,
    /// Re-evaluate a solution previously written by `solve`.
    #[arg(long)]
    pub from_json: Option<PathBuf>,
    /// Evaluation points added to the results.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub at: Vec<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    /// Write sampled `t,y1,...` rows here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn parse_forcing(s: &str) -> Result<(f64, f64), String> {
    let (a, r) = s.split_once(':').ok_or_else(|| format!("forcing term '{s}' is not of the form A:r"))?;
    let a = a.trim().parse::<f64>().map_err(|e| format!("amplitude in '{s}': {e}"))?;
    let r = r.trim().parse::<f64>().map_err(|e| format!("rate in '{s}': {e}"))?;
    Ok((a, r))
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub alpha: f64,
    /// First order `y' = k y(a x) [+ A E(r x)]`.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["pq", "jordan"])]
    pub k: Option<f64>,
    /// Second order `y'' + p y'(a x) + q y(a^2 x) = 0`.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true, conflicts_with = "jordan")]
    pub pq: Option<Vec<f64>>,
    /// Pair `y1' = l y1(a x) + y2(a x)`, `y2' = l y2(a x)`.
    #[arg(long, allow_hyphen_values = true)]
    pub jordan: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: f64,
    /// First order: `y(x0)`. Pair: `y1(x0), y2(x0)`. Second order: `y(x0), y'(x0 / a)`
    /// or, with --same-point, `y(x0), y'(x0)`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub data: Vec<f64>,
    /// One forcing term `A:r` for the first-order case.
    #[arg(long, value_parser = parse_forcing, allow_hyphen_values = true)]
    pub forcing: Option<(f64, f64)>,
    #[arg(long)]
    pub same_point: bool,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub count: usize,
    /// Interval `[-l, l]` instead of `[0, 1]`.
    #[arg(long)]
    pub symmetric: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PdeKindArg {
    Heat,
    Wave,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NormalizationArg {
    Corrected,
    Printed,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct PdeArgs {
    #[arg(long, value_enum)]
    pub kind: PdeKindArg,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    /// `poly:c0,c1,...` (coefficients of x^0, x^1, ...) or `basis:k` for `S(rho_k x)`.
    #[arg(long, value_parser = parse_profile, allow_hyphen_values = true)]
    pub phi: Profile,
    /// Initial velocity for the wave-like case, same syntax; zero by default.
    #[arg(long, value_parser = parse_profile, allow_hyphen_values = true)]
    pub psi: Option<Profile>,
    #[arg(long)]
    pub modes: usize,
    #[arg(long, value_enum, default_value = "corrected")]
    pub normalization: NormalizationArg,
    #[arg(long, default_value_t = 21)]
    pub nx: usize,
    #[arg(long, default_value_t = 11)]
    pub nt: usize,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub quad_tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone)]
pub enum Profile {
    Poly(Vec<f64>),
    Basis(usize),
}

fn parse_profile(s: &str) -> Result<Profile, String> {
    if let Some(rest) = s.strip_prefix("poly:") {
        let c: Result<Vec<f64>, _> = rest.split(',').map(|v| v.trim().parse::<f64>()).collect();
        return c.map(Profile::Poly).map_err(|e| format!("polynomial coefficients '{rest}': {e}"));
    }
    if let Some(rest) = s.strip_prefix("basis:") {
        let k: usize = rest.trim().parse().map_err(|e| format!("basis index '{rest}': {e}"))?;
        if k == 0 {
            return Err("basis indices start at 1".into());
        }
        return Ok(Profile::Basis(k));
    }
    Err(format!("profile '{s}' is neither poly:... nor basis:k"))
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// all, degenerate, euler, interlace, addition, oracle, conservation,
    /// general, eigen, expansion or pde.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Restrict the euler or interlace suite to one alpha.
    #[arg(long)]
    pub alpha: Option<f64>,
}

/// What a command produced; `ok` is false only for failing checks.
pub struct Output {
    pub stdout: String,
    pub ok: bool,
}

fn json_out(env: OutputEnvelope) -> CliResult<Output> {
    Ok(Output { stdout: serde_json::to_string_pretty(&env)? + "\n", ok: true })
}

fn alpha(v: f64) -> CliResult<Alpha> {
    Ok(Alpha::new(v)?)
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Eval(a) => eval_cmd(a),
        Command::Zeros(a) => zeros_cmd(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Classify(a) => classify_cmd(a),
        Command::Eigen(a) => eigen_cmd(a),
        Command::Pde(a) => pde_cmd(a),
        Command::Check(a) => check_cmd(a),
    }
}

fn eval_cmd(a: &EvalArgs) -> CliResult<Output> {
    let al = alpha(a.alpha)?;
    let opts = EvalOptions::default();
    let kind = match a.func {
        FnName::E => SpecialFunctionKind::ExpLike,
        FnName::C => SpecialFunctionKind::CosLike,
        FnName::S => SpecialFunctionKind::SinLike,
        FnName::L => SpecialFunctionKind::LogLike,
    };
    let v = match a.func {
        FnName::L if a.deriv > 0 => return Err(CliError::Usage("--deriv is not available for L".into())),
        FnName::L => eval_l(al, a.x, &opts)?,
        _ => special::eval_derivative(kind, a.deriv, al, a.x, &opts)?,
    };
    let env = OutputEnvelope::new(
        "eval",
        json!({ "fn": kind.name(), "alpha": a.alpha, "x": a.x, "deriv": a.deriv }),
        json!({ "value": v.value, "abs_error_estimate": v.abs_error_estimate, "terms_used": v.terms_used }),
    )
    .estimate("value", v.abs_error_estimate);
    json_out(env)
}

fn zeros_cmd(a: &ZerosArgs) -> CliResult<Output> {
    let al = alpha(a.alpha)?;
    let table = match a.family {
        Some(f) => build_family(al, f.into(), a.count, a.refine_tol)?,
        None => build_zero_table(al, a.count, a.refine_tol)?,
    };
    if let Some(path) = &a.csv {
        write_zero_csv(&table, path)?;
    }
    let mut env = OutputEnvelope::new(
        "zeros",
        json!({ "alpha": a.alpha, "count": a.count, "family": a.family.map(|f| Family::from(f).name()), "refine_tol": a.refine_tol }),
        serde_json::to_value(&table)?,
    )
    .estimate("bracket_width", a.refine_tol);
    for m in &table.missing {
        env.diagnostics.warnings.push(format!("{}: found {} of the requested zeros ({})", m.family.name(), m.found, m.reason));
    }
    json_out(env)
}

fn write_zero_csv(t: &ZeroTable, path: &PathBuf) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["family", "index", "zero", "bracket_lo", "bracket_hi"])?;
    for (fam, zs, bs) in [("rho", &t.rho, &t.rho_brackets), ("eta", &t.eta, &t.eta_brackets), ("eneg", &t.e_neg, &t.e_neg_brackets)] {
        for (i, (z, b)) in zs.iter().zip(bs.iter()).enumerate() {
            w.write_record([fam.to_string(), (i + 1).to_string(), full(*z), full(b.lo), full(b.hi)])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct SavedSolve {
    results: SavedResults,
}

#[derive(Deserialize)]
struct SavedResults {
    solution: Vec<ClosedFormSolution>,
}

fn solve_cmd(a: &SolveArgs) -> CliResult<Output> {
    let (inputs, solution) = match &a.from_json {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let saved: SavedSolve = serde_json::from_str(&text)?;
            (json!({ "from_json": path }), saved.results.solution)
        }
        None => {
            let al = alpha(a.alpha.ok_or_else(|| CliError::Usage("--alpha is required".into()))?)?;
            let inputs = json!({
                "alpha": al.value(), "order": a.order, "coeffs": a.coeffs, "matrix": a.matrix,
                "chain": a.chain, "init": a.init, "forcing": a.forcing,
            });
            (inputs, build_solution(al, a)?)
        }
    };
    let mut samples = Vec::with_capacity(a.samples);
    let n = a.samples.max(2);
    for i in 0..a.samples {
        let t = a.t_end * i as f64 / (n - 1) as f64;
        let mut row = vec![t];
        for s in &solution {
            row.push(s.eval(t)?);
        }
        samples.push(row);
    }
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec!["t".to_string()];
        header.extend((1..=solution.len()).map(|i| format!("y{i}")));
        w.write_record(&header)?;
        for row in &samples {
            w.write_record(row.iter().map(|v| full(*v)))?;
        }
        w.flush()?;
    }
    let mut at = Vec::new();
    for &x in &a.at {
        let vals: Vec<f64> = solution.iter().map(|s| s.eval(x)).collect::<Result<_, _>>()?;
        at.push(json!({ "x": x, "values": vals }));
    }
    let warnings: Vec<String> = solution.iter().flat_map(|s| s.warnings.iter().cloned()).collect();
    let mut env = OutputEnvelope::new("solve", inputs, json!({ "solution": solution, "at": at, "samples": samples }))
        .estimate("closed_form_rounding", 1e-14);
    env.diagnostics.warnings = warnings;
    json_out(env)
}

fn build_solution(al: Alpha, a: &SolveArgs) -> CliResult<Vec<ClosedFormSolution>> {
    if let Some(beta) = a.chain {
        if a.init.is_empty() {
            return Err(CliError::Usage("--chain needs --init".into()));
        }
        return Ok(solve_triangular_chain(al, beta, &a.init));
    }
    if !a.matrix.is_empty() {
        let n = a.init.len();
        if n == 0 || a.matrix.len() != n * n {
            return Err(CliError::Usage(format!("--matrix has {} entries but --init has {n}", a.matrix.len())));
        }
        return Ok(solve_linear_system(al, &a.matrix, &a.init, None)?);
    }
    let order = a.order.ok_or_else(|| CliError::Usage("one of --order, --matrix or --chain is required".into()))?;
    if a.coeffs.len() != order || a.init.len() != order || order == 0 {
        return Err(CliError::Usage(format!("--order {order} needs {order} coefficients and {order} initial values")));
    }
    let sol = match order {
        1 => {
            // y' + p0 y(a x) = sum A E(r x)
            let beta = -a.coeffs[0];
            if a.forcing.is_empty() {
                ode::solve_first_order(al, beta, a.init[0])
            } else {
                let mut s = ClosedFormSolution::zero(al);
                for (i, &(amp, r)) in a.forcing.iter().enumerate() {
                    s = s.plus(&ode::solve_first_order_forced_exp(al, beta, if i == 0 { a.init[0] } else { 0.0 }, amp, r));
                }
                s
            }
        }
        2 => {
            let (p, q) = (a.coeffs[1], a.coeffs[0]);
            let part = ode::special_solution_second_order(al, p, q, &a.forcing);
            let (c1, c2) = (a.init[0] - part.eval(0.0)?, a.init[1] - part.derivative(1, 0.0)?);
            part.plus(&ode::solve_second_order(al, p, q, c1, c2))
        }
        _ => {
            let part = ode::special_solution_nth(al, &a.coeffs, &a.forcing)?;
            let mut init = a.init.clone();
            for (i, v) in init.iter_mut().enumerate() {
                *v -= part.derivative(i as u32, 0.0)?;
            }
            part.plus(&ode::solve_nth_order(al, &a.coeffs, &init)?)
        }
    };
    Ok(vec![sol])
}

/// Negative zeros of `E` out past every gate argument `bound` can reach.
fn gate_table(al: Alpha, bound: f64) -> CliResult<ZeroTable> {
    let mut count = 8;
    loop {
        let t = build_family(al, Family::ENeg, count, 1e-15)?;
        let far_enough = t.e_neg.last().is_some_and(|z| *z < -bound);
        if far_enough || !t.missing.is_empty() || count >= 256 {
            return Ok(t);
        }
        count *= 2;
    }
}

fn classify_cmd(a: &ClassifyArgs) -> CliResult<Output> {
    let al = alpha(a.alpha)?;
    let av = al.value();
    let need = |n: usize| -> CliResult<()> {
        if a.data.len() != n {
            return Err(CliError::Usage(format!("--data needs {n} values, got {}", a.data.len())));
        }
        Ok(())
    };
    let (case, result): (&str, Classified) = if let Some(k) = a.k {
        need(1)?;
        let rate = a.forcing.map_or(0.0, |f| f.1.abs());
        let zeros = gate_table(al, 2.0 * (k.abs() + rate) * a.x0.abs() + 1.0)?;
        match a.forcing {
            Some(f) => ("first order, forced", gp::classify_first_order_forced(al, k, f, a.x0, a.data[0], &zeros)?),
            None => ("first order", gp::classify_first_order(al, k, a.x0, a.data[0], &zeros)?),
        }
    } else if let Some(l) = a.jordan {
        need(2)?;
        let zeros = gate_table(al, 2.0 * l.abs() * a.x0.abs() + 1.0)?;
        ("Jordan pair", gp::classify_jordan_pair(al, l, a.x0, a.data[0], a.data[1], &zeros)?)
    } else if let Some(pq) = &a.pq {
        if pq.len() != 2 {
            return Err(CliError::Usage("--pq takes two values p,q".into()));
        }
        need(2)?;
        let (p, q) = (pq[0], pq[1]);
        let lmax = (p.abs() + (p * p + 4.0 * av * q.abs()).sqrt()) / (2.0 * av);
        let zeros = gate_table(al, 2.0 * lmax * a.x0.abs() / av + 1.0)?;
        if a.same_point {
            ("second order, same point", gp::classify_second_order_same_point(al, p, q, a.x0, a.data[0], a.data[1], &zeros)?)
        } else {
            ("second order, split data", gp::classify_second_order_split(al, p, q, a.x0, a.data[0], a.data[1], &zeros)?)
        }
    } else {
        return Err(CliError::Usage("one of --k, --jordan or --pq is required".into()));
    };
    let mut env = OutputEnvelope::new(
        "classify",
        json!({ "alpha": av, "problem": case, "k": a.k, "pq": a.pq, "jordan": a.jordan, "x0": a.x0, "data": a.data, "forcing": a.forcing, "same_point": a.same_point }),
        serde_json::to_value(&result)?,
    );
    for r in &result.reports {
        env.diagnostics.error_estimates.insert(format!("gate E({})", full(r.argument)), r.threshold);
        env.diagnostics.condition_flags.push(format!("{:?}", r.condition_flag));
    }
    if let gp::Classification::NoSolution { witness } = &result.classification {
        env.diagnostics.error_estimates.insert("witness".into(), witness.error_estimate);
    }
    json_out(env)
}

fn eigen_cmd(a: &EigenArgs) -> CliResult<Output> {
    let al = alpha(a.alpha)?;
    let table = build_zero_table(al, a.count + 1, 1e-15)?;
    let pairs = match a.symmetric {
        Some(l) => bvp::eigenpairs_symmetric(al, l, a.count, &table)?,
        None => bvp::eigenpairs_unit_interval(al, a.count, &table)?,
    };
    let (lo, hi) = match a.symmetric {
        Some(l) => (-l, l),
        None => (0.0, 1.0),
    };
    let mut env = OutputEnvelope::new("eigen", json!({ "alpha": a.alpha, "count": a.count, "symmetric": a.symmetric }), serde_json::to_value(&pairs)?);
    for p in &pairs {
        let b = p.eigenfunction.eval(lo)?.abs().max(p.eigenfunction.eval(hi)?.abs());
        env.diagnostics.error_estimates.insert(format!("boundary value / amplitude, pair {}", p.index), b / p.amplitude);
    }
    json_out(env)
}

fn profile_fn<'b>(p: &Profile, basis: &'b bvp::OrthogonalBasis) -> CliResult<Box<dyn Fn(f64) -> f64 + 'b>> {
    Ok(match p {
        Profile::Poly(c) => {
            let c = c.clone();
            Box::new(move |x| c.iter().rev().fold(0.0, |acc, v| acc * x + v))
        }
        Profile::Basis(k) => {
            if *k > basis.n {
                return Err(CliError::Usage(format!("basis:{k} exceeds --modes {}", basis.n)));
            }
            let k = k - 1;
            Box::new(move |x| basis.f(k, x).unwrap_or(f64::NAN))
        }
    })
}

fn pde_cmd(a: &PdeArgs) -> CliResult<Output> {
    let al = alpha(a.alpha)?;
    let be = alpha(a.beta)?;
    if a.modes == 0 {
        return Err(CliError::Usage("--modes must be positive".into()));
    }
    let table = build_zero_table(al, a.modes, 1e-15)?;
    let basis = bvp::gram_schmidt_basis(al, a.modes, &table, a.quad_tol)?;
    let phi = profile_fn(&a.phi, &basis)?;
    let u: FormalPDESolution = match a.kind {
        PdeKindArg::Heat => pde::heat_like_solution(al, be, &*phi, a.modes, &basis)?,
        PdeKindArg::Wave => {
            let psi = match &a.psi {
                Some(p) => profile_fn(p, &basis)?,
                None => Box::new(|_| 0.0),
            };
            let norm = match a.normalization {
                NormalizationArg::Corrected => WaveNormalization::Corrected,
                NormalizationArg::Printed => WaveNormalization::Printed,
            };
            pde::wave_like_solution(al, be, &*phi, &*psi, a.modes, &basis, norm)?
        }
    };
    let nx = a.nx.max(2);
    let nt = a.nt.max(2);
    let mut grid = Vec::with_capacity(nx * nt);
    for j in 0..nt {
        let t = a.t_end * j as f64 / (nt - 1) as f64;
        for i in 0..nx {
            let x = i as f64 / (nx - 1) as f64;
            grid.push((x, t, u.eval(x, t)?));
        }
    }
    if a.format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x", "t", "u"])?;
        for (x, t, v) in &grid {
            w.write_record([full(*x), full(*t), full(*v)])?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        return Ok(Output { stdout: String::from_utf8_lossy(&bytes).into_owned(), ok: true });
    }
    let mut env = OutputEnvelope::new(
        "pde",
        json!({ "kind": format!("{:?}", a.kind).to_lowercase(), "alpha": a.alpha, "beta": a.beta, "modes": a.modes, "quad_tol": a.quad_tol }),
        json!({ "solution": u, "grid": grid }),
    )
    .estimate("quadrature", a.quad_tol);
    if let Some(&z) = build_family(be, Family::ENeg, 1, 1e-15)?.e_neg.first() {
        let a0 = al.value();
        let osc: Vec<usize> = u.modes.iter().enumerate().filter(|(_, m)| -a0 * m.rho * m.rho * a.t_end < z).map(|(k, _)| k + 1).collect();
        if matches!(a.kind, PdeKindArg::Heat) && !osc.is_empty() {
            env.diagnostics.warnings.push(format!("time factors of modes {osc:?} pass the first negative zero of E_beta before t = {}", a.t_end));
        }
    }
    json_out(env)
}

fn check_cmd(a: &CheckArgs) -> CliResult<Output> {
    let reports = match a.alpha {
        Some(v) => {
            let al = alpha(v)?;
            match a.suite.as_str() {
                "euler" => vec![checks::euler_at(al)],
                "interlace" => vec![checks::interlace_at(al)],
                s => return Err(CliError::Usage(format!("--alpha is only accepted by the euler and interlace suites, not '{s}'"))),
            }
        }
        None => checks::suite(&a.suite).ok_or_else(|| CliError::Usage(format!("unknown suite '{}'", a.suite)))?,
    };
    let ok = reports.iter().all(|r| r.passed);
    let lines: Vec<String> = reports.iter().map(|r| r.line()).collect();
    let env = OutputEnvelope::new("check", json!({ "suite": a.suite, "alpha": a.alpha }), json!({ "passed": ok, "summary": lines, "criteria": reports }));
    let mut out = json_out(env)?;
    out.ok = ok;
    Ok(out)
}
