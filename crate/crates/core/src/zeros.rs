//! Real zeros of `S` (rho), `C` (eta) and of `E` on the negative axis.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{self, PantographSystemSpec};
use crate::quad;
use crate::special::{self, Alpha, EvalOptions, ScaledValue, SpecialFunctionKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Rho,
    Eta,
    #[serde(rename = "eneg")]
    ENeg,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Rho => "rho",
            Family::Eta => "eta",
            Family::ENeg => "eneg",
        }
    }

    /// The scanned function as a function of a positive magnitude.
    pub fn eval(self, alpha: Alpha, x: f64, opts: &EvalOptions) -> Result<ScaledValue> {
        match self {
            Family::Rho => special::eval_scaled(SpecialFunctionKind::SinLike, alpha, x, opts),
            Family::Eta => special::eval_scaled(SpecialFunctionKind::CosLike, alpha, x, opts),
            Family::ENeg => special::eval_scaled(SpecialFunctionKind::ExpLike, alpha, -x, opts),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingZeros {
    pub family: Family,
    pub found: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroTable {
    pub alpha: Alpha,
    pub rho: Vec<f64>,
    pub eta: Vec<f64>,
    /// Negative zeros of `E`, decreasing.
    pub e_neg: Vec<f64>,
    pub rho_brackets: Vec<Bracket>,
    pub eta_brackets: Vec<Bracket>,
    pub e_neg_brackets: Vec<Bracket>,
    pub refine_tol: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub missing: Vec<MissingZeros>,
}

impl ZeroTable {
    pub fn zeros(&self, family: Family) -> &[f64] {
        match family {
            Family::Rho => &self.rho,
            Family::Eta => &self.eta,
            Family::ENeg => &self.e_neg,
        }
    }

    /// Distance from `v` to the nearest tabulated zero of `E` (negative axis).
    pub fn nearest_e_zero(&self, v: f64) -> Option<f64> {
        self.e_neg.iter().map(|z| (z - v).abs()).fold(None, |m, d| Some(m.map_or(d, |m: f64| m.min(d))))
    }
}

/// First-order seeds for the first zeros of `C` and `S`.
pub fn first_zero_estimate(kind: SpecialFunctionKind, alpha: Alpha) -> Result<f64> {
    let a = alpha.value();
    match kind {
        SpecialFunctionKind::CosLike => {
            Ok(((1.0 - a) * core::f64::consts::SQRT_2 + a * core::f64::consts::FRAC_PI_2) / libm::sqrt(a))
        }
        SpecialFunctionKind::SinLike => {
            Ok(((1.0 - a) * libm::sqrt(6.0) + a * core::f64::consts::PI) / (a * libm::sqrt(a)))
        }
        _ => Err(Error::UnsupportedKind(kind.name())),
    }
}

const CERTAIN: f64 = 10.0;

fn common(a: &ScaledValue, b: &ScaledValue) -> (f64, f64) {
    let e = a.exponent.max(b.exponent);
    (libm::scalbn(a.mantissa, a.exponent - e), libm::scalbn(b.mantissa, b.exponent - e))
}

struct Refined {
    root: f64,
    bracket: Bracket,
}

fn refine(family: Family, alpha: Alpha, mut lo: f64, mut hi: f64, mut flo: ScaledValue, mut fhi: ScaledValue, opts: &EvalOptions) -> Result<Refined> {
    let mut cert = Bracket { lo, hi };
    let f = |x: f64| family.eval(alpha, x, opts);
    let update_cert = |c: &mut Bracket, lo: f64, hi: f64, flo: &ScaledValue, fhi: &ScaledValue| {
        if flo.certainty() > CERTAIN && fhi.certainty() > CERTAIN {
            *c = Bracket { lo, hi };
        }
    };
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm.signum() == 0.0 {
            return Ok(Refined { root: mid, bracket: cert });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
        update_cert(&mut cert, lo, hi, &flo, &fhi);
    }
    // Illinois-style safeguarded secant.
    let mut side = 0i32;
    let (mut wlo, mut whi) = (1.0, 1.0);
    for _ in 0..400 {
        let (vlo, vhi) = common(&flo, &fhi);
        let (vlo, vhi) = (vlo * wlo, vhi * whi);
        let mut c = hi - vhi * (hi - lo) / (vhi - vlo);
        if !(c > lo && c < hi) {
            c = 0.5 * (lo + hi);
        }
        if c <= lo || c >= hi {
            break;
        }
        let fc = f(c)?;
        if fc.certainty() <= 1.0 {
            return Ok(Refined { root: c, bracket: cert });
        }
        if fc.signum() == flo.signum() {
            lo = c;
            flo = fc;
            whi = if side == -1 { whi * 0.5 } else { 1.0 };
            wlo = 1.0;
            side = -1;
        } else {
            hi = c;
            fhi = fc;
            wlo = if side == 1 { wlo * 0.5 } else { 1.0 };
            whi = 1.0;
            side = 1;
        }
        update_cert(&mut cert, lo, hi, &flo, &fhi);
    }
    let root = if flo.certainty() < fhi.certainty() { lo } else { hi };
    Ok(Refined { root, bracket: cert })
}

/// Scans upward from `start` for the next sign change of `family`.
fn next_zero(family: Family, alpha: Alpha, start: f64, min_step: f64, cap: f64, index: usize, opts: &EvalOptions) -> Result<Refined> {
    let mut x = start;
    let mut fx = family.eval(alpha, x, opts)?;
    // the last point whose sign is trustworthy
    let mut anchor = (x, fx);
    for _ in 0..200_000 {
        let step = (0.05 * x).min(cap).max(min_step);
        let nx = x + step;
        let fn_ = family.eval(alpha, nx, opts)?;
        x = nx;
        fx = fn_;
        if fx.certainty() <= CERTAIN {
            continue;
        }
        if anchor.1.certainty() > CERTAIN && fx.signum() != anchor.1.signum() {
            return refine(family, alpha, anchor.0, x, anchor.1, fx, opts);
        }
        anchor = (x, fx);
    }
    Err(Error::BracketNotFound { family: family.name(), index })
}

fn scan_family(family: Family, alpha: Alpha, count: usize, opts: &EvalOptions) -> (Vec<f64>, Vec<Bracket>, Option<MissingZeros>) {
    let a = alpha.value();
    let mut zeros = Vec::new();
    let mut brackets = Vec::new();
    if family == Family::ENeg && a == 1.0 {
        let miss = MissingZeros { family, found: 0, reason: String::from("exp has no real zeros") };
        return (zeros, brackets, Some(miss));
    }
    let est = match family {
        Family::Rho => first_zero_estimate(SpecialFunctionKind::SinLike, alpha).unwrap_or(1.0),
        Family::Eta => first_zero_estimate(SpecialFunctionKind::CosLike, alpha).unwrap_or(1.0),
        Family::ENeg => 1.0,
    };
    let mut start = if family == Family::Rho { 1e-3 * est } else { 0.0 };
    let mut min_step = 0.05 * est;
    let mut cap = 0.25 * est;
    for i in 0..count {
        match next_zero(family, alpha, start, min_step, cap, i + 1, opts) {
            Ok(r) => {
                if let Some(&prev) = zeros.last() {
                    cap = 0.25 * (r.root - prev);
                } else {
                    cap = 0.25 * r.root;
                }
                min_step = 0.0;
                start = r.bracket.hi.max(r.root * (1.0 + 1e-9));
                zeros.push(r.root);
                brackets.push(r.bracket);
            }
            Err(e) => {
                let miss = MissingZeros { family, found: zeros.len(), reason: format!("{e}") };
                return (zeros, brackets, Some(miss));
            }
        }
    }
    (zeros, brackets, None)
}

/// First `count` zeros of each family. Families are scanned independently,
/// each from its own previous zero, so interlacing is an output not an input.
pub fn build_zero_table(alpha: Alpha, count: usize, refine_tol: f64) -> Result<ZeroTable> {
    if count == 0 || !(refine_tol > 0.0) {
        return Err(Error::InvalidInput("count >= 1 and refine_tol > 0 required".into()));
    }
    let opts = EvalOptions::default();
    let mut missing = Vec::new();
    let (rho, rho_brackets, m) = scan_family(Family::Rho, alpha, count, &opts);
    missing.extend(m);
    let (eta, eta_brackets, m) = scan_family(Family::Eta, alpha, count, &opts);
    missing.extend(m);
    let (eneg, e_neg_brackets, m) = scan_family(Family::ENeg, alpha, count, &opts);
    missing.extend(m);
    let table = ZeroTable {
        alpha,
        rho,
        eta,
        e_neg: eneg.iter().map(|z| -z).collect(),
        rho_brackets,
        eta_brackets,
        e_neg_brackets: e_neg_brackets.iter().map(|b| Bracket { lo: -b.hi, hi: -b.lo }).collect(),
        refine_tol,
        missing,
    };
    for (fam, zs, bs) in [
        (Family::Rho, &table.rho, &table.rho_brackets),
        (Family::Eta, &table.eta, &table.eta_brackets),
    ] {
        for (z, b) in zs.iter().zip(bs.iter()) {
            if !(b.lo <= *z && *z <= b.hi) {
                return Err(Error::InvalidInput(format!("{} zero {z} escaped its bracket", fam.name())));
            }
        }
    }
    Ok(table)
}

/// Only the requested family; the others are left empty.
pub fn build_family(alpha: Alpha, family: Family, count: usize, refine_tol: f64) -> Result<ZeroTable> {
    let opts = EvalOptions::default();
    let (zs, bs, m) = scan_family(family, alpha, count, &opts);
    let mut t = ZeroTable {
        alpha,
        rho: Vec::new(),
        eta: Vec::new(),
        e_neg: Vec::new(),
        rho_brackets: Vec::new(),
        eta_brackets: Vec::new(),
        e_neg_brackets: Vec::new(),
        refine_tol,
        missing: m.into_iter().collect(),
    };
    match family {
        Family::Rho => (t.rho, t.rho_brackets) = (zs, bs),
        Family::Eta => (t.eta, t.eta_brackets) = (zs, bs),
        Family::ENeg => {
            t.e_neg = zs.iter().map(|z| -z).collect();
            t.e_neg_brackets = bs.iter().map(|b| Bracket { lo: -b.hi, hi: -b.lo }).collect();
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerSum {
    pub partial: f64,
    /// Bound on the omitted zeros assuming nondecreasing gaps between them.
    pub tail: f64,
    pub value: f64,
    pub zeros_used: usize,
}

/// `sum rho_n^-power` over the table, plus a tail estimate.
pub fn euler_sum(table: &ZeroTable, power: u32) -> Result<EulerSum> {
    if power != 2 && power != 4 {
        return Err(Error::InvalidInput("power must be 2 or 4".into()));
    }
    let rho = &table.rho;
    if rho.is_empty() {
        return Err(Error::InvalidInput("empty rho table".into()));
    }
    let p = power as f64;
    let mut partial = 0.0;
    for r in rho.iter().rev() {
        partial += libm::pow(*r, -p);
    }
    let n = rho.len();
    let last = rho[n - 1];
    let gap = if n >= 2 { last - rho[n - 2] } else { last };
    // sum_k (last + k gap)^-p <= int_0^inf (last + s gap)^-p ds
    let tail = libm::pow(last, 1.0 - p) / ((p - 1.0) * gap);
    Ok(EulerSum { partial, tail, value: partial + tail, zeros_used: n })
}

pub fn euler_target(alpha: Alpha, power: u32) -> f64 {
    let a = alpha.value();
    if power == 2 {
        libm::pow(a, 3.0) / 6.0
    } else {
        libm::pow(a, 6.0) / 36.0 - libm::pow(a, 10.0) / 60.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralCheck {
    /// integral of C over [a rho_n, a rho_{n+1}]
    pub cos_integral: f64,
    /// integral of S over [a eta_n, a eta_{n+1}]
    pub sin_integral: f64,
}

/// `n` is 1-based.
pub fn integral_identity_check(table: &ZeroTable, n: usize, quad_tol: f64) -> Result<IntegralCheck> {
    if n == 0 || table.rho.len() <= n || table.eta.len() <= n {
        return Err(Error::InvalidInput(format!("table needs zeros through index {}", n + 1)));
    }
    let alpha = table.alpha;
    let a = alpha.value();
    let opts = EvalOptions::default();
    let f = |k: SpecialFunctionKind| move |x: f64| special::eval(k, alpha, x, &opts).map(|v| v.value);
    let c = quad::integrate(f(SpecialFunctionKind::CosLike), a * table.rho[n - 1], a * table.rho[n], quad_tol)?;
    let s = quad::integrate(f(SpecialFunctionKind::SinLike), a * table.eta[n - 1], a * table.eta[n], quad_tol)?;
    Ok(IntegralCheck { cos_integral: c.value, sin_integral: s.value })
}

/// The truncated double sum relating `rho_m` and `eta_m`; it equals `S(rho_m)`.
pub fn zero_relation_check(table: &ZeroTable, m: usize, n_terms: usize) -> Result<f64> {
    if m == 0 || table.rho.len() < m || table.eta.len() < m {
        return Err(Error::InvalidInput(format!("zero pair {m} not tabulated")));
    }
    let (r, e) = (table.rho[m - 1], table.eta[m - 1]);
    let v = special::addition_rhs(SpecialFunctionKind::SinLike, table.alpha, r - e, e, n_terms, &EvalOptions::default())?;
    Ok(v.value)
}

/// First positive zero of the solution of `y'' = -k y(a^2 x)`, `y(0) = 1`,
/// `y'(0) = 0`, located on the oracle trajectory.
pub fn oscillator_first_zero(alpha: Alpha, k: f64, h: f64) -> Result<f64> {
    let a = alpha.value();
    // x1(t) = y(t), x2(t) = y'(t / a)
    let spec = PantographSystemSpec::new(alpha, alloc::vec![0.0, 1.0, -k / a, 0.0], 2, alloc::vec![1.0, 0.0])?;
    let mut t_end = 4.0 / libm::sqrt(k);
    for _ in 0..12 {
        let traj = oracle::integrate(&spec, t_end, h)?;
        if let Some(z) = traj.first_sign_change(0) {
            return Ok(z);
        }
        t_end *= 2.0;
    }
    Err(Error::BracketNotFound { family: "oscillator", index: 1 })
}

/// `(x0, x1)`: first zeros for `k1 < k2`; theory gives `x1 = sqrt(k1/k2) x0`.
pub fn comparison_scaling_check(alpha: Alpha, k1: f64, k2: f64) -> Result<(f64, f64)> {
    if !(0.0 < k1 && k1 < k2) {
        return Err(Error::InvalidInput("need 0 < k1 < k2".into()));
    }
    let h = 2e-3 / libm::sqrt(k2);
    Ok((oscillator_first_zero(alpha, k1, h)?, oscillator_first_zero(alpha, k2, h)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn estimates_at_one() {
        let one = Alpha::new(1.0).unwrap();
        assert!((first_zero_estimate(SpecialFunctionKind::CosLike, one).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((first_zero_estimate(SpecialFunctionKind::SinLike, one).unwrap() - PI).abs() < 1e-15);
        let a = Alpha::new(0.9).unwrap();
        let direct = (0.1 * libm::sqrt(2.0) + 0.9 * PI / 2.0) / libm::sqrt(0.9);
        assert_eq!(first_zero_estimate(SpecialFunctionKind::CosLike, a).unwrap(), direct);
        assert!((direct - 1.63925).abs() < 1e-5);
    }

    #[test]
    fn classical_zeros() {
        let t = build_zero_table(Alpha::new(1.0).unwrap(), 10, 1e-12).unwrap();
        for n in 0..10 {
            assert!((t.rho[n] - (n as f64 + 1.0) * PI).abs() < 1e-12);
            assert!((t.eta[n] - (n as f64 + 0.5) * PI).abs() < 1e-12);
        }
        assert!(t.e_neg.is_empty());
        assert_eq!(t.missing.len(), 1);
    }

    #[test]
    fn euler_sum_classical_tail() {
        let t = build_zero_table(Alpha::new(1.0).unwrap(), 20, 1e-12).unwrap();
        let s = euler_sum(&t, 2).unwrap();
        assert!((s.value - 1.0 / 6.0).abs() < 2e-4);
        let s = euler_sum(&t, 4).unwrap();
        assert!((s.value - 1.0 / 90.0).abs() < 1e-6);
    }

    #[test]
    fn zeros_lie_in_brackets() {
        let t = build_zero_table(Alpha::new(0.5).unwrap(), 8, 1e-12).unwrap();
        for (z, b) in t.e_neg.iter().zip(&t.e_neg_brackets) {
            assert!(b.lo <= *z && *z <= b.hi);
        }
        assert_eq!(t.e_neg.len(), 8);
        assert!(t.e_neg.windows(2).all(|w| w[1] < w[0]));
    }
}
