//! The exponent-, cosine- and sine-like entire functions
//!
//! ```text
//! E(x) = sum a^(n(n-1)/2) x^n / n!
//! C(x) = sum (-1)^n a^(n(2n-1)) x^(2n) / (2n)!
//! S(x) = sum (-1)^n a^(n(2n+1)) x^(2n+1) / (2n+1)!
//! ```
//!
//! and the local inverse `L` of `E` around 1.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::{Dd, Neumaier, ScaledDd};

const EPS: f64 = f64::EPSILON;
const DD_EPS: f64 = 7.888609052210118e-31; // 2^-100

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Alpha(value))
        } else {
            Err(Error::AlphaOutOfRange(value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `alpha^(n(n-1)/2)`
    pub fn tri_pow(self, n: u32) -> f64 {
        let e = (n as i64) * (n as i64 - 1) / 2;
        libm::exp(e as f64 * libm::log(self.0))
    }

    pub fn powi(self, n: i32) -> f64 {
        libm::pow(self.0, n as f64)
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Alpha::new(v)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Above this `|x|` the sum is accumulated in double-double.
    pub high_precision_threshold: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            rel_tol: 1e-14,
            max_terms: 500,
            high_precision_threshold: 30.0,
        }
    }
}

impl EvalOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.max_terms < 2 {
            return Err(Error::InvalidInput("rel_tol must be > 0 and max_terms >= 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialFunctionKind {
    ExpLike,
    CosLike,
    SinLike,
    LogLike,
}

impl SpecialFunctionKind {
    pub fn name(self) -> &'static str {
        match self {
            SpecialFunctionKind::ExpLike => "E",
            SpecialFunctionKind::CosLike => "C",
            SpecialFunctionKind::SinLike => "S",
            SpecialFunctionKind::LogLike => "L",
        }
    }
}

// Term n is t_n; t_{n+1} = sign * a^(ea*n + eb) * u / d(n), u = x or x^2.
#[derive(Clone, Copy)]
struct Shape {
    even: bool,
    odd: bool,
    sign: f64,
    ea: f64,
    eb: f64,
}

impl Shape {
    fn of(kind: SpecialFunctionKind) -> Result<Shape> {
        Ok(match kind {
            SpecialFunctionKind::ExpLike => Shape { even: false, odd: false, sign: 1.0, ea: 1.0, eb: 0.0 },
            SpecialFunctionKind::CosLike => Shape { even: true, odd: false, sign: -1.0, ea: 4.0, eb: 1.0 },
            SpecialFunctionKind::SinLike => Shape { even: false, odd: true, sign: -1.0, ea: 4.0, eb: 3.0 },
            SpecialFunctionKind::LogLike => return Err(Error::UnsupportedKind("LogLike")),
        })
    }

    fn paired(self) -> bool {
        self.even || self.odd
    }

    fn denom(self, n: usize) -> f64 {
        let n = n as f64;
        if self.even {
            (2.0 * n + 1.0) * (2.0 * n + 2.0)
        } else if self.odd {
            (2.0 * n + 2.0) * (2.0 * n + 3.0)
        } else {
            n + 1.0
        }
    }

    fn power(self, n: usize) -> f64 {
        let n = n as f64;
        if self.even {
            2.0 * n
        } else if self.odd {
            2.0 * n + 1.0
        } else {
            n
        }
    }
}

struct Stop {
    small_run: usize,
}

impl Stop {
    // Three consecutive negligible terms plus a certified geometric tail.
    fn done(&mut self, term: f64, tail: f64, sum: f64, abs_sum: f64, floor_eps: f64, rel_tol: f64) -> bool {
        let level = (rel_tol * sum.abs()).max(floor_eps * abs_sum);
        if term.abs() <= level {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= 3 && tail <= level
    }
}

struct Raw {
    value: f64,
    tail: f64,
    rounding: f64,
    sensitivity: f64,
    terms: usize,
    scale: i32,
}

fn sum_f64(shape: Shape, a: f64, x: f64, opts: &EvalOptions) -> Result<Raw> {
    let u = if shape.paired() { x * x } else { x };
    let mut t = if shape.odd { x } else { 1.0 };
    let mut ap = libm::pow(a, shape.eb);
    let astep = libm::pow(a, shape.ea);
    let mut acc = Neumaier::new();
    let mut ksum = Neumaier::new();
    let mut weighted = 0.0;
    let mut abs_sum = 0.0;
    let mut stop = Stop { small_run: 0 };
    for n in 0..opts.max_terms {
        acc.add(t);
        let k = shape.power(n);
        ksum.add(k * t);
        weighted += (k + 2.0) * t.abs();
        abs_sum += t.abs();
        let r = shape.sign * ap * u / shape.denom(n);
        let next = t * r;
        let tail = if r.abs() < 1.0 { next.abs() / (1.0 - r.abs()) } else { f64::INFINITY };
        let s = acc.value();
        if !s.is_finite() || !weighted.is_finite() {
            return Err(Error::Overflow(x));
        }
        if stop.done(t, tail, s, abs_sum, EPS, opts.rel_tol) {
            return Ok(Raw {
                value: s,
                tail,
                rounding: EPS * weighted,
                sensitivity: 0.5 * EPS * ksum.value().abs(),
                terms: n + 1,
                scale: 0,
            });
        }
        t = next;
        ap *= astep;
    }
    Err(Error::TruncationFailure { x, terms: opts.max_terms })
}

fn sum_dd(shape: Shape, a: f64, x: f64, opts: &EvalOptions) -> Result<Raw> {
    if x == 0.0 {
        return sum_f64(shape, a, x, opts);
    }
    // Locate the dominant term in log space to fix a common binary scale.
    let lu = if shape.paired() { 2.0 * libm::log2(x.abs()) } else { libm::log2(x.abs()) };
    let la = libm::log2(a);
    let mut lt = if shape.odd { libm::log2(x.abs()) } else { 0.0 };
    let mut lmax = lt;
    for n in 0..opts.max_terms {
        let lr = (shape.ea * n as f64 + shape.eb) * la + lu - libm::log2(shape.denom(n));
        if lr < 0.0 {
            break;
        }
        lt += lr;
        lmax = lmax.max(lt);
    }
    let scale = libm::floor(lmax) as i32;

    let xd = Dd::from_f64(x);
    let u = if shape.paired() { xd * xd } else { xd };
    let ad = Dd::from_f64(a);
    let a2 = ad * ad;
    let astep = if shape.paired() { a2 * a2 } else { ad };
    let mut ap = if shape.eb == 0.0 {
        Dd::ONE
    } else if shape.eb == 1.0 {
        ad
    } else {
        a2 * ad
    };
    let mut t = ScaledDd::new(if shape.odd { xd } else { Dd::ONE });
    let mut acc = Dd::ZERO;
    let mut ksum = Neumaier::new();
    let mut weighted = 0.0;
    let mut abs_sum = 0.0;
    let mut stop = Stop { small_run: 0 };
    for n in 0..opts.max_terms {
        let td = t.at_scale(scale);
        acc = acc + td;
        let tf = td.to_f64();
        let k = shape.power(n);
        ksum.add(k * tf);
        weighted += (k + 2.0) * tf.abs();
        abs_sum += tf.abs();
        let mut next = t.mul_dd(ap * u).div_f64(shape.denom(n));
        if shape.sign < 0.0 {
            next.m = -next.m;
        }
        let lr = (shape.ea * n as f64 + shape.eb) * la + lu - libm::log2(shape.denom(n));
        let nf = next.at_scale(scale).to_f64().abs();
        let tail = if lr < -1e-9 { nf / (1.0 - libm::exp2(lr)) } else { f64::INFINITY };
        if stop.done(tf, tail, acc.to_f64(), abs_sum, DD_EPS, opts.rel_tol) {
            let value = acc.to_f64();
            return Ok(Raw {
                value,
                tail,
                rounding: DD_EPS * weighted + 0.5 * EPS * value.abs(),
                sensitivity: 0.5 * EPS * ksum.value().abs(),
                terms: n + 1,
                scale,
            });
        }
        t = next;
        ap = ap * astep;
    }
    Err(Error::TruncationFailure { x, terms: opts.max_terms })
}

fn finish(x: f64, r: Raw) -> Result<SeriesValue> {
    let value = libm::scalbn(r.value, r.scale);
    let err = libm::scalbn(r.tail + r.rounding + r.sensitivity, r.scale);
    if !value.is_finite() || !err.is_finite() {
        return Err(Error::Overflow(x));
    }
    Ok(SeriesValue { value, abs_error_estimate: err, terms_used: r.terms })
}

/// A value `mantissa * 2^exponent` with error `error * 2^exponent`; used where
/// the function itself leaves the f64 range (deep zeros at small alpha).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub error: f64,
    pub exponent: i32,
}

impl ScaledValue {
    pub fn signum(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    /// `|value| / error`
    pub fn certainty(&self) -> f64 {
        self.mantissa.abs() / self.error
    }

    pub fn to_f64(&self) -> f64 {
        libm::scalbn(self.mantissa, self.exponent)
    }
}

pub fn eval_scaled(kind: SpecialFunctionKind, alpha: Alpha, x: f64, opts: &EvalOptions) -> Result<ScaledValue> {
    opts.validate()?;
    let shape = Shape::of(kind)?;
    if !x.is_finite() {
        return Err(Error::InvalidInput("x must be finite".into()));
    }
    let r = raw(shape, alpha.value(), x, opts)?;
    Ok(ScaledValue { mantissa: r.value, error: r.tail + r.rounding + r.sensitivity, exponent: r.scale })
}

fn raw(shape: Shape, a: f64, x: f64, opts: &EvalOptions) -> Result<Raw> {
    if x.abs() <= opts.high_precision_threshold {
        match sum_f64(shape, a, x, opts) {
            Ok(r) if r.rounding <= opts.rel_tol * r.value.abs() => return Ok(r),
            Ok(_) | Err(Error::Overflow(_)) => {}
            Err(e) => return Err(e),
        }
    }
    sum_dd(shape, a, x, opts)
}

/// Evaluates `E`, `C` or `S` at a real argument.
pub fn eval(kind: SpecialFunctionKind, alpha: Alpha, x: f64, opts: &EvalOptions) -> Result<SeriesValue> {
    opts.validate()?;
    let shape = Shape::of(kind)?;
    if !x.is_finite() {
        return Err(Error::InvalidInput("x must be finite".into()));
    }
    finish(x, raw(shape, alpha.value(), x, opts)?)
}

/// Rotation of `C`/`S` under one derivative: C' = -S(a x), S' = C(a x).
fn rotate(kind: SpecialFunctionKind, sign: f64) -> (SpecialFunctionKind, f64) {
    match kind {
        SpecialFunctionKind::CosLike => (SpecialFunctionKind::SinLike, -sign),
        SpecialFunctionKind::SinLike => (SpecialFunctionKind::CosLike, sign),
        k => (k, sign),
    }
}

/// `(kind, sign, factor, arg_scale)` with `F^(n)(x) = sign * factor * kind(arg_scale * x)`.
pub fn derivative_form(kind: SpecialFunctionKind, order: u32, alpha: Alpha) -> Result<(SpecialFunctionKind, f64, f64, f64)> {
    Shape::of(kind)?;
    let mut k = kind;
    let mut sign = 1.0;
    for _ in 0..order {
        (k, sign) = rotate(k, sign);
    }
    Ok((k, sign, alpha.tri_pow(order), alpha.powi(order as i32)))
}

/// n-th derivative through the closed form `a^(n(n-1)/2) F~(a^n x)`.
pub fn eval_derivative(kind: SpecialFunctionKind, order: u32, alpha: Alpha, x: f64, opts: &EvalOptions) -> Result<SeriesValue> {
    let (k, sign, factor, scale) = derivative_form(kind, order, alpha)?;
    let v = eval(k, alpha, scale * x, opts)?;
    Ok(SeriesValue {
        value: sign * factor * v.value,
        abs_error_estimate: factor * v.abs_error_estimate,
        terms_used: v.terms_used,
    })
}

/// `E(z)` for complex `z`, double precision with compensated accumulation.
pub fn exp_like_complex(alpha: Alpha, z: Complex64, opts: &EvalOptions) -> Result<(Complex64, f64)> {
    opts.validate()?;
    let a = alpha.value();
    let mut t = Complex64::new(1.0, 0.0);
    let mut re = Neumaier::new();
    let mut im = Neumaier::new();
    let mut weighted = 0.0;
    let mut abs_sum = 0.0;
    let mut ap = 1.0;
    let mut stop = Stop { small_run: 0 };
    for n in 0..opts.max_terms {
        re.add(t.re);
        im.add(t.im);
        let ta = t.norm();
        weighted += (n as f64 + 2.0) * ta;
        abs_sum += ta;
        let r = ap * z.norm() / (n as f64 + 1.0);
        let next = t * z * (ap / (n as f64 + 1.0));
        let tail = if r < 1.0 { next.norm() / (1.0 - r) } else { f64::INFINITY };
        let s = Complex64::new(re.value(), im.value());
        if !abs_sum.is_finite() {
            return Err(Error::Overflow(z.norm()));
        }
        if stop.done(ta, tail, s.norm(), abs_sum, EPS, opts.rel_tol) {
            return Ok((s, tail + 2.0 * EPS * weighted));
        }
        t = next;
        ap *= a;
    }
    Err(Error::TruncationFailure { x: z.norm(), terms: opts.max_terms })
}

/// Taylor coefficients `b_1..b_n` of `L(1+x)`, obtained by reverting `E(y) - 1`.
pub fn l_coefficients(alpha: Alpha, n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n + 1];
    let mut c = 1.0;
    for (k, ak) in a.iter_mut().enumerate().skip(1) {
        c *= alpha.powi(k as i32 - 1) / k as f64;
        *ak = c;
    }
    // pw[m][k] = [x^k] y^m
    let mut pw = vec![vec![0.0; n + 1]; n + 1];
    let mut b = vec![0.0; n + 1];
    if n >= 1 {
        b[1] = 1.0;
        pw[1][1] = 1.0;
    }
    for k in 2..=n {
        for m in (2..=k).rev() {
            let mut s = 0.0;
            for j in 1..=(k + 1 - m) {
                s += b[j] * pw[m - 1][k - j];
            }
            pw[m][k] = s;
        }
        let mut bk = 0.0;
        for m in 2..=k {
            bk -= a[m] * pw[m][k];
        }
        b[k] = bk;
        pw[1][k] = bk;
    }
    b.remove(0);
    b
}

pub const L_RADIUS: f64 = 0.5;

/// `L(1+x)`, inverse of `E` near 1, restricted to `|x| < 0.5` and checked by
/// a round trip through `E`.
pub fn eval_l(alpha: Alpha, one_plus_x: f64, opts: &EvalOptions) -> Result<SeriesValue> {
    opts.validate()?;
    let x = one_plus_x - 1.0;
    if !(x.abs() < L_RADIUS) {
        return Err(Error::OutsideValidatedDomain(one_plus_x));
    }
    if x == 0.0 {
        return Ok(SeriesValue { value: 0.0, abs_error_estimate: 0.0, terms_used: 1 });
    }
    let mut n = 48.min(opts.max_terms);
    loop {
        let b = l_coefficients(alpha, n);
        let mut acc = Neumaier::new();
        let mut p = x;
        let mut run = 0;
        let mut used = None;
        for (i, bi) in b.iter().enumerate() {
            let t = bi * p;
            acc.add(t);
            if t.abs() <= opts.rel_tol * acc.value().abs() {
                run += 1;
                if run >= 3 {
                    used = Some(i + 1);
                    break;
                }
            } else {
                run = 0;
            }
            p *= x;
        }
        if let Some(terms) = used {
            let y = acc.value();
            let back = eval(SpecialFunctionKind::ExpLike, alpha, y, opts)?;
            let slope = eval(SpecialFunctionKind::ExpLike, alpha, alpha.value() * y, opts)?.value;
            let resid = (back.value - one_plus_x).abs();
            if resid > 1e-8 {
                return Err(Error::OutsideValidatedDomain(one_plus_x));
            }
            let err = (resid + back.abs_error_estimate) / slope.abs() + 4.0 * EPS * y.abs();
            return Ok(SeriesValue { value: y, abs_error_estimate: err, terms_used: terms });
        }
        if n >= opts.max_terms {
            return Err(Error::TruncationFailure { x: one_plus_x, terms: n });
        }
        n = (2 * n).min(opts.max_terms);
    }
}

/// Right-hand side of the addition formula for `F(x + y)`, truncated after
/// `n_terms` outer terms.
pub fn addition_rhs(kind: SpecialFunctionKind, alpha: Alpha, x: f64, y: f64, n_terms: usize, opts: &EvalOptions) -> Result<SeriesValue> {
    if n_terms == 0 {
        return Err(Error::InvalidInput("n_terms must be >= 1".into()));
    }
    let a = alpha.value();
    let mut acc = Neumaier::new();
    let mut err = 0.0;
    let mut abs_sum = 0.0;
    let mut last = 0.0;
    match kind {
        SpecialFunctionKind::ExpLike => {
            let mut c = 1.0;
            let mut an = 1.0;
            for n in 0..n_terms {
                let v = eval(kind, alpha, an * y, opts)?;
                let t = c * v.value;
                acc.add(t);
                abs_sum += t.abs();
                err += c.abs() * v.abs_error_estimate;
                last = t.abs();
                c *= an * x / (n as f64 + 1.0);
                an *= a;
            }
        }
        SpecialFunctionKind::CosLike | SpecialFunctionKind::SinLike => {
            let (even_fn, odd_fn, odd_sign) = if kind == SpecialFunctionKind::CosLike {
                (SpecialFunctionKind::CosLike, SpecialFunctionKind::SinLike, -1.0)
            } else {
                (SpecialFunctionKind::SinLike, SpecialFunctionKind::CosLike, 1.0)
            };
            // c: C-series term in x, s: S-series term in x
            let mut c = 1.0;
            let mut s = x;
            for n in 0..n_terms {
                let nf = n as f64;
                let p_even = libm::pow(a, 2.0 * nf);
                let p_odd = p_even * a;
                let ve = eval(even_fn, alpha, p_even * y, opts)?;
                let vo = eval(odd_fn, alpha, p_odd * y, opts)?;
                let t = c * ve.value + odd_sign * s * vo.value;
                acc.add(t);
                abs_sum += t.abs();
                err += c.abs() * ve.abs_error_estimate + s.abs() * vo.abs_error_estimate;
                last = t.abs();
                c *= -libm::pow(a, 4.0 * nf + 1.0) * x * x / ((2.0 * nf + 1.0) * (2.0 * nf + 2.0));
                s *= -libm::pow(a, 4.0 * nf + 3.0) * x * x / ((2.0 * nf + 2.0) * (2.0 * nf + 3.0));
            }
        }
        SpecialFunctionKind::LogLike => return Err(Error::UnsupportedKind("LogLike")),
    }
    Ok(SeriesValue {
        value: acc.value(),
        abs_error_estimate: err + 2.0 * EPS * abs_sum + last,
        terms_used: n_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use SpecialFunctionKind::*;

    fn ev(k: SpecialFunctionKind, a: f64, x: f64) -> SeriesValue {
        eval(k, Alpha::new(a).unwrap(), x, &EvalOptions::default()).unwrap()
    }

    #[test]
    fn alpha_range() {
        assert!(Alpha::new(0.0).is_err());
        assert!(Alpha::new(1.2).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
        assert!(Alpha::new(1.0).is_ok());
    }

    #[test]
    fn origin_values() {
        for a in [0.3, 0.5, 1.0] {
            assert_eq!(ev(ExpLike, a, 0.0).value, 1.0);
            assert_eq!(ev(CosLike, a, 0.0).value, 1.0);
            assert_eq!(ev(SinLike, a, 0.0).value, 0.0);
        }
    }

    #[test]
    fn classical_limit() {
        let e = ev(ExpLike, 1.0, 1.0);
        assert!((e.value - core::f64::consts::E).abs() < 1e-15);
        assert!(ev(CosLike, 1.0, core::f64::consts::FRAC_PI_2).value.abs() < 1e-15);
    }

    #[test]
    fn derivative_closed_forms() {
        let a = Alpha::new(0.6).unwrap();
        let o = EvalOptions::default();
        let x = 1.7;
        let d = eval_derivative(ExpLike, 1, a, x, &o).unwrap().value;
        assert_eq!(d, ev(ExpLike, 0.6, 0.6 * x).value);
        let d2 = eval_derivative(CosLike, 2, a, x, &o).unwrap().value;
        assert!((d2 + 0.6 * ev(CosLike, 0.6, 0.36 * x).value).abs() < 1e-15);
        assert_eq!(eval_derivative(SinLike, 0, a, 0.0, &o).unwrap().value, 0.0);
        // C' = -S(a x), S' = C(a x)
        assert_eq!(eval_derivative(CosLike, 1, a, x, &o).unwrap().value, -ev(SinLike, 0.6, 0.6 * x).value);
        assert_eq!(eval_derivative(SinLike, 1, a, x, &o).unwrap().value, ev(CosLike, 0.6, 0.6 * x).value);
    }

    #[test]
    fn escalates_when_cancelling() {
        // exp(-10) needs more than double precision accumulation
        let v = ev(ExpLike, 1.0, -10.0);
        assert!((v.value - libm::exp(-10.0)).abs() < 1e-12 * libm::exp(-10.0) * 10.0);
    }

    #[test]
    fn huge_terms_do_not_overflow() {
        // dominant terms near 1e430
        let a = Alpha::new(0.3).unwrap();
        let o = EvalOptions::default();
        assert_eq!(eval(SinLike, a, 2e22, &o), Err(Error::Overflow(2e22)));
        let v = eval_scaled(SinLike, a, 2e22, &o).unwrap();
        assert!(v.mantissa.is_finite() && v.exponent > 1000);
        assert!(v.certainty() > 1e3);
    }

    #[test]
    fn l_low_order_coefficients() {
        for a in [0.2, 0.5, 0.8, 1.0] {
            let b = l_coefficients(Alpha::new(a).unwrap(), 4);
            assert!((b[0] - 1.0).abs() < 1e-15);
            assert!((b[1] + a / 2.0).abs() < 1e-15);
            assert!((b[2] - a * a * (3.0 - a) / 6.0).abs() < 1e-15);
            let a3 = a * a * a;
            assert!((b[3] + a3 * (15.0 - 10.0 * a + a3) / 24.0).abs() < 1e-15);
        }
    }

    #[test]
    fn l_log_limit_and_domain() {
        let a = Alpha::new(1.0).unwrap();
        let o = EvalOptions::default();
        let v = eval_l(a, 1.25, &o).unwrap();
        assert!((v.value - libm::log(1.25)).abs() < 1e-14);
        assert_eq!(eval_l(a, 1.0, &o).unwrap().value, 0.0);
        assert_eq!(eval_l(a, 1.7, &o), Err(Error::OutsideValidatedDomain(1.7)));
    }

    #[test]
    fn log_like_rejected_by_eval() {
        let r = eval(LogLike, Alpha::new(0.5).unwrap(), 1.0, &EvalOptions::default());
        assert!(matches!(r, Err(Error::UnsupportedKind(_))));
    }

    #[test]
    fn addition_trivial_cases() {
        let o = EvalOptions::default();
        let a = Alpha::new(0.5).unwrap();
        let v = addition_rhs(ExpLike, a, 0.9, 0.0, 30, &o).unwrap();
        assert!((v.value - ev(ExpLike, 0.5, 0.9).value).abs() < 1e-15);
        let one = Alpha::new(1.0).unwrap();
        let v = addition_rhs(ExpLike, one, 1.0, 1.0, 40, &o).unwrap();
        assert!((v.value - libm::exp(2.0)).abs() < 1e-13);
        let v = addition_rhs(CosLike, a, 0.7, -0.3, 40, &o).unwrap();
        assert!((v.value - ev(CosLike, 0.5, 0.4).value).abs() < 1e-10);
    }
}
