use pantograph_core::general_point::{self as gp, Classification, ConditionFlag};
use pantograph_core::zeros::build_zero_table;
use pantograph_core::{Alpha, Error};

#[test]
fn first_order_three_ways() {
    let a = Alpha::new(0.7).unwrap();
    let t = build_zero_table(a, 3, 1e-15).unwrap();
    let xs = -t.e_neg[1] / 2.0;
    // y' = -2 y(a x): gate E(-2 xs) sits on the second zero
    let fam = gp::classify_first_order(a, -2.0, xs, 0.0, &t).unwrap();
    assert_eq!(fam.classification.free_params(), Some(1));
    assert_eq!(fam.reports[0].condition_flag, ConditionFlag::AtZero);
    let member = fam.classification.member(&[3.0]).unwrap();
    assert!(member[0].eval(xs).unwrap().abs() < 1e-12);
    assert!(matches!(gp::classify_first_order(a, -2.0, xs, 0.2, &t).unwrap().classification, Classification::NoSolution { .. }));
    let u = gp::classify_first_order(a, -2.0, xs + 0.3, 0.2, &t).unwrap();
    let Classification::Unique { solution } = u.classification else { panic!("expected unique") };
    assert!((solution[0].eval(xs + 0.3).unwrap() - 0.2).abs() < 1e-10);
}

#[test]
fn tabulated_window_absorbs_rounding() {
    let a = Alpha::new(0.5).unwrap();
    let t = build_zero_table(a, 3, 1e-15).unwrap();
    let xs = -t.e_neg[0] * (1.0 + 1e-11);
    let c = gp::classify_first_order(a, -1.0, xs, 1.0, &t).unwrap();
    assert_eq!(c.reports[0].condition_flag, ConditionFlag::AtZero);
    assert!(matches!(c.classification, Classification::NoSolution { .. }));
    // without the table the same point cannot be decided
    let empty = build_zero_table(Alpha::new(0.6).unwrap(), 1, 1e-15).unwrap();
    assert!(matches!(gp::classify_first_order(a, -1.0, xs, 1.0, &empty), Err(Error::AmbiguousNearZero { .. })));
}

#[test]
fn unit_alpha_is_always_unique() {
    let one = Alpha::new(1.0).unwrap();
    let t = build_zero_table(one, 2, 1e-15).unwrap();
    for x0 in [-40.0, -1.0, 2.0, 30.0] {
        assert_eq!(gp::classify_first_order(one, -1.0, x0, 0.0, &t).unwrap().classification.free_params(), Some(0));
        let osc = gp::classify_second_order_split(one, 0.0, 1.0, x0, 1.0, 1.0, &t).unwrap();
        let Classification::Unique { solution } = osc.classification else { panic!("expected unique") };
        assert!((solution[0].eval(x0).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(gp::classify_second_order_same_point(one, 3.0, 2.0, x0, 1.0, 1.0, &t).unwrap().classification.free_params(), Some(0));
    }
}
