//! Exact rational partial sums at alpha = 1/2 as an independent reference.

use num_bigint::BigInt;
use num_rational::BigRational;
use pantograph_core::zeros::build_zero_table;
use pantograph_core::{special, Alpha, EvalOptions, SpecialFunctionKind};

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn to_f64(r: &BigRational) -> f64 {
    // 2^-80 resolution is far below f64 rounding for the values used here
    let scale = BigInt::from(1u8) << 80u32;
    let n = (r * BigRational::from_integer(scale)).round().to_integer();
    n.to_string().parse::<f64>().unwrap() / 2f64.powi(80)
}

fn from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap()
}

/// `sum_{n < terms} s(n) a^(n(n-1)/2) x^n / n!` over the powers `n` that
/// `pick` accepts, with sign `s(n)`.
fn series(x: &BigRational, terms: usize, pick: impl Fn(usize) -> Option<i64>) -> BigRational {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut sum = int(0);
    let mut xn = int(1);
    let mut fact = int(1);
    let mut apow = int(1);
    for n in 0..terms {
        if n > 0 {
            xn = &xn * x;
            fact = &fact * int(n as i64);
            // a^(n(n-1)/2) grows by a^(n-1) at each step
            for _ in 0..n - 1 {
                apow = &apow * &half;
            }
        }
        if let Some(sign) = pick(n) {
            sum += int(sign) * &apow * &xn / &fact;
        }
    }
    sum
}

fn e_half(x: &BigRational) -> BigRational {
    series(x, 40, |_| Some(1))
}

fn s_half(x: &BigRational) -> BigRational {
    // Im E(i x): odd n = 2k + 1 with sign (-1)^k
    series(x, 40, |n| if n % 2 == 1 { Some(if (n / 2) % 2 == 0 { 1 } else { -1 }) } else { None })
}

fn c_half(x: &BigRational) -> BigRational {
    series(x, 40, |n| if n % 2 == 0 { Some(if (n / 2) % 2 == 0 { 1 } else { -1 }) } else { None })
}

fn bisect(f: impl Fn(&BigRational) -> BigRational, lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (from_f64(lo), from_f64(hi));
    let zero = int(0);
    let lo_sign = f(&lo) > zero;
    assert_ne!(lo_sign, f(&hi) > zero, "no sign change");
    for _ in 0..55 {
        let mid = (&lo + &hi) / int(2);
        if (f(&mid) > zero) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    to_f64(&((lo + hi) / int(2)))
}

fn half() -> Alpha {
    Alpha::new(0.5).unwrap()
}

#[test]
fn exp_like_values_match_exact_sums() {
    for x in [-3.0, -1.0, 0.25, 1.0, 2.5] {
        let exact = to_f64(&e_half(&from_f64(x)));
        let v = special::eval(SpecialFunctionKind::ExpLike, half(), x, &EvalOptions::default()).unwrap();
        assert!((v.value - exact).abs() <= 4.0 * f64::EPSILON * exact.abs().max(1.0), "x = {x}: {} vs {exact}", v.value);
        assert!((v.value - exact).abs() <= v.abs_error_estimate.max(f64::EPSILON));
    }
}

#[test]
fn trig_like_values_match_exact_sums() {
    for x in [0.5, 3.0, 6.0] {
        let xr = from_f64(x);
        let s = special::eval(SpecialFunctionKind::SinLike, half(), x, &EvalOptions::default()).unwrap().value;
        let c = special::eval(SpecialFunctionKind::CosLike, half(), x, &EvalOptions::default()).unwrap().value;
        assert!((s - to_f64(&s_half(&xr))).abs() < 1e-14);
        assert!((c - to_f64(&c_half(&xr))).abs() < 1e-14);
    }
}

#[test]
fn first_zeros_match_exact_bisection() {
    let t = build_zero_table(half(), 2, 1e-15).unwrap();
    let rho1 = bisect(s_half, 6.5, 7.5);
    let eta1 = bisect(c_half, 1.0, 3.0);
    let e1 = bisect(|x| e_half(&-x.clone()), 1.0, 2.0);
    assert!((t.rho[0] - rho1).abs() < 1e-12, "{} vs {rho1}", t.rho[0]);
    assert!((t.eta[0] - eta1).abs() < 1e-12, "{} vs {eta1}", t.eta[0]);
    assert!((t.e_neg[0] + e1).abs() < 1e-12, "{} vs {}", t.e_neg[0], -e1);
}
