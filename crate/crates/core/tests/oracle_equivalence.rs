use pantograph_core::oracle::{self, PantographSystemSpec};
use pantograph_core::solve::ode::{self, companion_initial, companion_system};
use pantograph_core::solve::system::solve_linear_system;
use pantograph_core::Alpha;

fn sup_error(alpha: Alpha, p: &[f64], init: &[f64], sol: &pantograph_core::solve::ClosedFormSolution) -> f64 {
    let spec = PantographSystemSpec::new(alpha, companion_system(alpha, p), p.len(), companion_initial(alpha, init)).unwrap();
    let traj = oracle::integrate(&spec, 2.0, 1e-3).unwrap();
    (0..=100).map(|i| 0.02 * i as f64).map(|t| (traj.component(t, 0).unwrap() - sol.eval(t).unwrap()).abs()).fold(0.0, f64::max)
}

#[test]
fn second_order_branches() {
    let a = Alpha::new(0.6).unwrap();
    // positive, zero and negative discriminant p^2 - 4 a q
    for (p, q) in [(1.0, -0.5), (1.2, 1.44 / 2.4), (0.3, 2.0)] {
        let sol = ode::solve_second_order(a, p, q, 1.0, -0.5);
        assert!(sup_error(a, &[q, p], &[1.0, -0.5], &sol) < 1e-8);
    }
}

#[test]
fn fourth_order_with_a_repeated_root() {
    let a = Alpha::new(0.8).unwrap();
    // (b - 0.5)^2 (b^2 + 1) scaled to leading a^6
    let c = [0.25, -1.0, 1.25, -1.0, 1.0];
    let p: Vec<f64> = (0..4).map(|j| a.tri_pow(4) * c[j] / a.tri_pow(j as u32)).collect();
    let init = [1.0, 0.0, -1.0, 0.5];
    let sol = ode::solve_nth_order(a, &p, &init).unwrap();
    assert!(sup_error(a, &p, &init, &sol) < 1e-7);
}

#[test]
fn rotation_system() {
    let a = Alpha::new(0.5).unwrap();
    let m = vec![0.0, 1.0, -1.0, 0.0];
    let sol = solve_linear_system(a, &m, &[1.0, 0.0], None).unwrap();
    let spec = PantographSystemSpec::new(a, m, 2, vec![1.0, 0.0]).unwrap();
    let traj = oracle::integrate(&spec, 2.0, 1e-3).unwrap();
    for t in [0.3, 1.1, 2.0] {
        for c in 0..2 {
            assert!((traj.component(t, c).unwrap() - sol[c].eval(t).unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn fourth_order_convergence() {
    let a = Alpha::new(0.7).unwrap();
    let spec = PantographSystemSpec::new(a, vec![-1.0], 1, vec![1.0]).unwrap();
    let order = oracle::richardson_order_check(&spec, 2.0, 0.05).unwrap();
    assert!((3.5..=4.5).contains(&order), "observed order {order}");
}
