use pantograph_core::solve::ode::{self, apply_operator};
use pantograph_core::{special, Alpha, EvalOptions, SpecialFunctionKind};
use proptest::prelude::*;

fn alpha() -> impl Strategy<Value = Alpha> {
    (0.3f64..=1.0).prop_map(|a| Alpha::new(a).unwrap())
}

fn e(a: Alpha, x: f64) -> f64 {
    special::eval(SpecialFunctionKind::ExpLike, a, x, &EvalOptions::default()).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn first_order_solves_its_problem(a in alpha(), beta in -2.0f64..2.0, y0 in -3.0f64..3.0, x in 0.0f64..2.0) {
        let y = ode::solve_first_order(a, beta, y0);
        prop_assert!((y.eval(0.0).unwrap() - y0).abs() < 1e-14);
        let r = y.derivative(1, x).unwrap() - beta * y.eval(a.value() * x).unwrap();
        prop_assert!(r.abs() < 1e-12 * (1.0 + y0.abs() * beta.abs() * e(a, beta.abs() * x)));
    }

    #[test]
    fn forcing_superposes(a in alpha(), beta in -1.5f64..1.5, a1 in -2.0f64..2.0, r1 in -2.0f64..2.0, a2 in -2.0f64..2.0, r2 in -2.0f64..2.0, x in 0.0f64..2.0) {
        let whole = ode::solve_first_order_forced_exp(a, beta, 1.0, a1, r1)
            .plus(&ode::solve_first_order_forced_exp(a, beta, 0.0, a2, r2));
        let r = whole.derivative(1, x).unwrap() - beta * whole.eval(a.value() * x).unwrap() - a1 * e(a, r1 * x) - a2 * e(a, r2 * x);
        prop_assert!(r.abs() < 1e-10, "residual {r}");
        prop_assert!((whole.eval(0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn operator_form_agrees(a in alpha(), b1 in -2.0f64..2.0, gap in 0.2f64..2.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, x in 0.0f64..2.0) {
        // characteristic a b^2 + p b + q = 0 with real distinct roots b1, b1 + gap
        let b2 = b1 + gap;
        let av = a.value();
        let (p, q) = (-av * (b1 + b2), av * b1 * b2);
        let direct = ode::solve_second_order(a, p, q, c1, c2);
        let factored = ode::solve_second_order_operator_form(a, p, q, c1, c2).unwrap();
        let d = (direct.eval(x).unwrap() - factored.eval(x).unwrap()).abs();
        prop_assert!(d < 1e-10 * (1.0 + direct.eval(x).unwrap().abs()), "difference {d}");
    }

    #[test]
    fn nth_order_operator_vanishes(a in (0.5f64..=1.0).prop_map(|v| Alpha::new(v).unwrap()), p in prop::collection::vec(-1.0f64..1.0, 1..=4), x in 0.0f64..1.5) {
        let init: Vec<f64> = (0..p.len()).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        let y = match ode::solve_nth_order(a, &p, &init) {
            Ok(y) => y,
            Err(pantograph_core::Error::IllConditionedInitialSystem { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        for (i, v) in init.iter().enumerate() {
            prop_assert!((y.derivative(i as u32, 0.0).unwrap() - v).abs() < 1e-8);
        }
        let scale: f64 = 1.0 + y.terms.iter().map(|t| t.coeff.abs()).sum::<f64>();
        prop_assert!(apply_operator(&y, &p, x).unwrap().abs() < 1e-9 * scale);
    }

    #[test]
    fn exp_like_addition(a in alpha(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let opts = EvalOptions::default();
        let lhs = e(a, x + y);
        let rhs = special::addition_rhs(SpecialFunctionKind::ExpLike, a, x, y, 80, &opts).unwrap().value;
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn trig_like_pythagoras_at_unit_alpha(x in -20.0f64..20.0) {
        let one = Alpha::new(1.0).unwrap();
        let opts = EvalOptions::default();
        let c = special::eval(SpecialFunctionKind::CosLike, one, x, &opts).unwrap().value;
        let s = special::eval(SpecialFunctionKind::SinLike, one, x, &opts).unwrap().value;
        prop_assert!((c * c + s * s - 1.0).abs() < 1e-13);
    }
}
