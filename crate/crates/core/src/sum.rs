//! Compensated and double-double accumulation.

use core::ops::{Add, Mul, Neg, Sub};

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = 134217729.0 * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, about 106 bits.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, f) = two_sum(self.hi, -p);
        let f = f - e + self.lo;
        let q2 = (s + f) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    /// Exact scaling by `2^k` (barring underflow).
    pub fn scale(self, k: i32) -> Self {
        Dd {
            hi: libm::scalbn(self.hi, k),
            lo: libm::scalbn(self.lo, k),
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }
}

/// Double-double mantissa with a separate binary exponent, so that series
/// terms far outside the f64 range can still be formed and compared.
#[derive(Debug, Clone, Copy)]
pub struct ScaledDd {
    pub m: Dd,
    pub e: i32,
}

impl ScaledDd {
    pub fn new(x: Dd) -> Self {
        let mut s = ScaledDd { m: x, e: 0 };
        s.normalize();
        s
    }

    pub fn normalize(&mut self) {
        let h = self.m.hi.abs();
        if h == 0.0 || (h > 1e-120 && h < 1e120) {
            return;
        }
        let k = libm::ilogb(self.m.hi);
        self.m = self.m.scale(-k);
        self.e += k;
    }

    pub fn mul_dd(self, b: Dd) -> Self {
        let mut r = ScaledDd { m: self.m * b, e: self.e };
        r.normalize();
        r
    }

    pub fn div_f64(self, b: f64) -> Self {
        let mut r = ScaledDd { m: self.m.div_f64(b), e: self.e };
        r.normalize();
        r
    }

    /// Value times `2^-s`, as a double-double.
    pub fn at_scale(self, s: i32) -> Dd {
        let k = self.e - s;
        if k < -1100 {
            Dd::ZERO
        } else {
            self.m.scale(k)
        }
    }

    pub fn log2_abs(self) -> f64 {
        if self.m.hi == 0.0 {
            f64::NEG_INFINITY
        } else {
            libm::log2(self.m.hi.abs()) + self.e as f64
        }
    }

    pub fn is_zero(self) -> bool {
        self.m.hi == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_lost_bits() {
        let mut s = Neumaier::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn dd_product_carries_low_part() {
        let a = Dd::from_f64(1.0 + f64::EPSILON);
        let p = a * a;
        assert_eq!(p.hi, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(p.lo, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn dd_division_is_accurate() {
        let third = Dd::ONE.div_f64(3.0);
        let back = third * 3.0 - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn scaled_survives_overflow() {
        let mut t = ScaledDd::new(Dd::ONE);
        for _ in 0..40 {
            t = t.mul_dd(Dd::from_f64(1e20));
        }
        assert!((t.log2_abs() - 800.0 * libm::log2(10.0)).abs() < 1e-9);
        for _ in 0..40 {
            t = t.div_f64(1e20);
        }
        assert!((t.at_scale(0).to_f64() - 1.0).abs() < 1e-28);
    }
}
