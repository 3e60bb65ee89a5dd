use pantograph_core::bvp::{self, eigen_residual};
use pantograph_core::pde::{self, WaveNormalization};
use pantograph_core::zeros::build_zero_table;
use pantograph_core::Alpha;

#[test]
fn symmetric_spectrum_interlaces() {
    let a = Alpha::new(0.5).unwrap();
    let t = build_zero_table(a, 3, 1e-15).unwrap();
    let pairs = bvp::eigenpairs_symmetric(a, 2.0, 4, &t).unwrap();
    let mags: Vec<f64> = pairs.iter().map(|p| -p.lambda).collect();
    assert!(mags.windows(2).all(|w| w[0] < w[1]), "{mags:?}");
    for p in &pairs {
        assert!(eigen_residual(p, 1.3).unwrap() < 1e-9 * p.amplitude.max(1.0));
    }
}

#[test]
fn expansion_error_shrinks_with_more_modes() {
    let a = Alpha::new(0.5).unwrap();
    let t = build_zero_table(a, 7, 1e-15).unwrap();
    let phi = |x: f64| x * (1.0 - x);
    let mut last = f64::INFINITY;
    for n in 1..=6 {
        let basis = bvp::gram_schmidt_basis(a, n, &t, 1e-10).unwrap();
        let err = bvp::expand_in_sine_like(&phi, &basis).unwrap().l2_error;
        assert!(err <= last * (1.0 + 1e-9), "n = {n}: {err} after {last}");
        last = err;
    }
}

#[test]
fn wave_modes_match_initial_data() {
    let a = Alpha::new(0.9).unwrap();
    let b = Alpha::new(0.6).unwrap();
    let t = build_zero_table(a, 4, 1e-15).unwrap();
    let basis = bvp::gram_schmidt_basis(a, 3, &t, 1e-10).unwrap();
    let f1 = |x: f64| basis.f(0, x).unwrap();
    let f2 = |x: f64| basis.f(1, x).unwrap();
    let u = pde::wave_like_solution(a, b, &f1, &f2, 3, &basis, WaveNormalization::Corrected).unwrap();
    for x in [0.2, 0.5, 0.9] {
        assert!((u.eval(x, 0.0).unwrap() - f1(x)).abs() < 1e-8);
        assert!((u.partial(0, 1, x, 0.0).unwrap() - f2(x)).abs() < 1e-8);
    }
}
