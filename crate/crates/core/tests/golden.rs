mod support;

use elimgen::field::PrimeField;
use elimgen::oracle::{verify_action_spectrum, verify_vanishing};

#[test]
fn worked_example_trace() {
    support::golden_trace().unwrap();
}

#[test]
fn worked_example_numeric_solve() {
    support::toy_numeric().unwrap();
}

#[test]
fn scaling_one_polynomial_keeps_the_roots() {
    support::toy_scale_invariance().unwrap();
}

#[test]
fn golden_template_rows_vanish_at_the_roots() {
    let f = PrimeField::default();
    let t = support::golden_template();
    let c = |v: i64| elimgen::field::Field::from_i64(&f, v);
    let roots = vec![vec![1, 1], vec![c(-1), 2], vec![2, c(-1)]];
    let rows = t.row_polys(&support::toy_gf(f)).unwrap();
    assert!(verify_vanishing(f, &rows, &roots));
    assert!(verify_action_spectrum(&t, &roots));
}
