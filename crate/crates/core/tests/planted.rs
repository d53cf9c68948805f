mod support;

use elimgen::field::PrimeField;
use elimgen::oracle::run_planted;

// A slice of the planted suite; the acceptance runner does all 100 seeds.
#[test]
fn planted_slice() {
    let f = PrimeField::default();
    let reports: Vec<_> = (0..16).map(|seed| run_planted(f, seed, 10)).collect();
    let found = reports.iter().filter(|r| r.found()).count();
    assert!(found >= 15, "found {found}/16");
    for r in reports.iter().filter(|r| r.found()) {
        assert!(r.passes(), "{r:?}");
    }
}

#[test]
fn round_trip_templates_exist() {
    // the format property test skips seeds without a template; most have one
    let hits = (0..40).filter(|&s| support::planted_template(s, s % 2 == 0).is_some()).count();
    assert!(hits >= 35, "{hits}/40");
}
