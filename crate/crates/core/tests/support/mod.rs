//! Checks shared by the integration tests and the acceptance runner. Each
//! returns `Err` with a short reason instead of panicking.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use elimgen::corpus::problem::{Coeff, ProblemDef};
use elimgen::field::{Field, PrimeField};
use elimgen::gf::ExactMatrix;
use elimgen::laurent::{grevlex_cmp, LaurentPoly, LaurentSystem, Monomial, MonomialSet};
use elimgen::numeric::{OnlineSolver, RootSet, SolveOptions, RESIDUAL_THRESHOLD};
use elimgen::oracle::{plant_roots, PlantSpec};
use elimgen::template::{
    action_candidates, prune_excessive_columns, template_finder, template_test, template_test_traced,
    FinderOptions, ShiftTuple, ShiftedSystem, Template,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub type Check = Result<(), String>;

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn m(e: &[i32]) -> Monomial {
    Monomial::new(e).unwrap()
}

pub const TOY_ROOTS: [[f64; 2]; 3] = [[1.0, 1.0], [-1.0, 2.0], [2.0, -1.0]];

fn toy_terms() -> [Vec<(Monomial, i64)>; 2] {
    [
        vec![(m(&[-1, 2]), 2), (m(&[1, 0]), -7), (m(&[0, 1]), -4), (m(&[0, 0]), 9)],
        vec![(m(&[2, -1]), 2), (m(&[0, 1]), -7), (m(&[1, 0]), -4), (m(&[0, 0]), 9)],
    ]
}

pub fn toy_gf(f: PrimeField) -> LaurentSystem<u32> {
    let polys = toy_terms()
        .into_iter()
        .map(|t| LaurentPoly::new(2, t.into_iter().map(|(m, c)| (m, f.from_i64(c))).collect()).unwrap())
        .collect();
    LaurentSystem::new(2, polys).unwrap()
}

pub fn toy_real(scale: [f64; 2]) -> LaurentSystem<f64> {
    let polys = toy_terms()
        .into_iter()
        .zip(scale)
        .map(|(t, s)| LaurentPoly::new(2, t.into_iter().map(|(m, c)| (m, c as f64 * s)).collect()).unwrap())
        .collect();
    LaurentSystem::new(2, polys).unwrap()
}

/// `A·F = {f_2/x, f_2, f_1}`.
pub fn golden_shifts() -> ShiftTuple {
    ShiftTuple::new(vec![
        MonomialSet::from_monomials([m(&[0, 0])]),
        MonomialSet::from_monomials([m(&[0, 0]), m(&[-1, 0])]),
    ])
}

/// The pruned 3×7 template for `a = x/y`.
pub fn golden_template() -> Template {
    let f = PrimeField::default();
    let sys = toy_gf(f);
    let shifted = ShiftedSystem::expand(f, &sys, &golden_shifts()).unwrap();
    let t = template_test(&shifted, &m(&[1, -1])).unwrap().unwrap();
    prune_excessive_columns(&sys, &t).unwrap()
}

fn ratio(f: PrimeField, (n, d): (i64, i64)) -> u32 {
    f.from_ratio(n, d).unwrap()
}

fn rows_of(a: &ExactMatrix) -> Vec<Vec<u32>> {
    (0..a.rows()).map(|i| a.row(i).to_vec()).collect()
}

fn nonzero_rows(a: &ExactMatrix) -> Vec<Vec<u32>> {
    rows_of(a).into_iter().filter(|r| r.iter().any(|&v| v != 0)).collect()
}

fn same_rows_any_order(got: &ExactMatrix, want: &[Vec<u32>]) -> bool {
    let mut g = rows_of(got);
    let mut w = want.to_vec();
    g.sort();
    w.sort();
    g == w
}

fn exact_rows(f: PrimeField, rows: &[&[(i64, i64)]]) -> Vec<Vec<u32>> {
    rows.iter().map(|r| r.iter().map(|&q| ratio(f, q)).collect()).collect()
}

fn int_rows(f: PrimeField, rows: &[&[i64]]) -> Vec<Vec<u32>> {
    rows.iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect()
}

fn set(ms: &[&[i32]]) -> MonomialSet {
    MonomialSet::from_monomials(ms.iter().map(|e| m(e)))
}

/// The worked example traced through the template test, exactly over
/// GF(65521): unshifted and shifted Macaulay matrices, their RREFs, the
/// partitions of both iterations, and the pruned size.
pub fn golden_trace() -> Check {
    let f = PrimeField::default();
    let sys = toy_gf(f);
    let a = m(&[1, -1]);
    let q = |n: i64| (n, 1);

    // unshifted: columns 1 | x^2/y | x, y, y^2/x
    let plain = ShiftedSystem::expand(f, &sys, &ShiftTuple::trivial(2, 2)).map_err(|e| e.to_string())?;
    let mut trace: Vec<Check> = Vec::new();
    let out = template_test_traced(&plain, &a, |it| {
        trace.push((|| {
            ensure(it.index == 1, || "unshifted trace runs one iteration".into())?;
            ensure(it.partition.excessive == set(&[&[0, 0]]), || "E_1 of the unshifted system".into())?;
            ensure(it.partition.reducible == set(&[&[2, -1]]), || "R_1 of the unshifted system".into())?;
            ensure(it.partition.basis == set(&[&[1, 0], &[0, 1], &[-1, 2]]), || "B_1 of the unshifted system".into())?;
            let m1 = int_rows(f, &[&[9, 0, -7, -4, 2], &[9, 2, -4, -7, 0]]);
            ensure(same_rows_any_order(it.matrix, &m1), || "unshifted M_1 entries".into())?;
            let r1 = exact_rows(
                f,
                &[&[q(1), q(0), (-7, 9), (-4, 9), (2, 9)], &[q(0), q(1), (3, 2), (-3, 2), q(-1)]],
            );
            ensure(nonzero_rows(&it.rref.matrix) == r1, || "unshifted RREF rows".into())?;
            ensure(it.reduced == &it.partition.reducible, || "R~_1 = R_1 for the unshifted system".into())
        })());
    })
    .map_err(|e| e.to_string())?;
    trace.into_iter().collect::<Check>()?;
    ensure(out.is_none(), || "unshifted system must fail C2".into())?;

    let shifted = ShiftedSystem::expand(f, &sys, &golden_shifts()).map_err(|e| e.to_string())?;
    let mut trace: Vec<Check> = Vec::new();
    let out = template_test_traced(&shifted, &a, |it| {
        trace.push((|| match it.index {
            1 => {
                ensure(it.partition.excessive == set(&[&[-1, 0]]), || "E_1".into())?;
                ensure(it.partition.reducible == set(&[&[2, -1], &[1, -1]]), || "R_1".into())?;
                ensure(
                    it.partition.basis == set(&[&[1, 0], &[0, 1], &[-1, 2], &[0, 0], &[-1, 1]]),
                    || "B_1".into(),
                )?;
                // columns 1/x | x^2/y, x/y | x, y, y^2/x, 1, y/x
                let m1 = int_rows(
                    f,
                    &[
                        &[9, 0, 2, 0, 0, 0, -4, -7],
                        &[0, 2, 0, -4, -7, 0, 9, 0],
                        &[0, 0, 0, -7, -4, 2, 9, 0],
                    ],
                );
                ensure(same_rows_any_order(it.matrix, &m1), || "M_1 entries".into())?;
                let r1 = exact_rows(
                    f,
                    &[
                        &[q(1), q(0), (2, 9), q(0), q(0), q(0), (-4, 9), (-7, 9)],
                        &[q(0), q(1), q(0), q(0), (-33, 14), (-4, 7), (27, 14), q(0)],
                        &[q(0), q(0), q(0), q(1), (4, 7), (-2, 7), (-9, 7), q(0)],
                    ],
                );
                ensure(nonzero_rows(&it.rref.matrix) == r1, || "M~_1 rows".into())?;
                ensure(it.reduced == &set(&[&[2, -1]]), || "R~_1 = {x^2/y}".into())
            }
            2 => {
                ensure(it.partition.excessive == set(&[&[1, -1], &[-1, 0]]), || "E_2".into())?;
                ensure(it.partition.reducible == set(&[&[2, -1], &[0, 0]]), || "R_2".into())?;
                ensure(it.partition.basis == set(&[&[1, 0], &[0, 1], &[-1, 2], &[-1, 1]]), || "B_2".into())?;
                let m2 = int_rows(
                    f,
                    &[
                        &[2, 9, 0, -4, 0, 0, 0, -7],
                        &[0, 0, 2, 9, -4, -7, 0, 0],
                        &[0, 0, 0, 9, -7, -4, 2, 0],
                    ],
                );
                ensure(same_rows_any_order(it.matrix, &m2), || "M_2 entries".into())?;
                let r2 = exact_rows(
                    f,
                    &[
                        &[q(1), (9, 2), q(0), q(0), (-14, 9), (-8, 9), (4, 9), (-7, 2)],
                        &[q(0), q(0), q(1), q(0), (3, 2), (-3, 2), q(-1), q(0)],
                        &[q(0), q(0), q(0), q(1), (-7, 9), (-4, 9), (2, 9), q(0)],
                    ],
                );
                ensure(nonzero_rows(&it.rref.matrix) == r2, || "M~_2 rows".into())?;
                ensure(it.reduced == &it.partition.reducible, || "R~_2 = R_2".into())
            }
            i => Err(format!("unexpected iteration {i}")),
        })());
    })
    .map_err(|e| e.to_string())?;
    trace.into_iter().collect::<Check>()?;
    let found = out.ok_or("shifted system must yield a template")?;
    let pruned = prune_excessive_columns(&sys, &found).map_err(|e| e.to_string())?;
    let (rows, cols) = pruned.size();
    ensure((rows, cols) == (3, 7), || format!("pruned size {rows}x{cols}, want 3x7"))?;
    ensure(cols - rows == 4 && pruned.basis().len() == 4, || "#cols - #rows = #B = 4".into())
}

/// Roots of a toy instance with the golden template, plus the time of the
/// solve.
pub fn toy_solve(system: &LaurentSystem<f64>) -> Result<(RootSet, Duration), String> {
    let solver = OnlineSolver::new(golden_template()).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let sol = solver
        .solve(system, SolveOptions { expected_roots: Some(3) })
        .map_err(|e| e.to_string())?;
    Ok((sol.roots, t.elapsed()))
}

/// Accepted real roots, matched to the true roots in order of `x/y`.
pub fn toy_roots(roots: &RootSet) -> Vec<Vec<f64>> {
    roots.real_roots(RESIDUAL_THRESHOLD).map(|c| c.real_point()).collect()
}

pub fn toy_numeric() -> Result<Duration, String> {
    let (roots, time) = toy_solve(&toy_real([1.0, 1.0]))?;
    ensure(roots.eigenvalues.len() == 4, || "action matrix must be 4x4".into())?;
    for want in [1.0, -0.5, -2.0] {
        ensure(
            roots.eigenvalues.iter().any(|l| (l.re - want).abs() < 1e-10 && l.im.abs() < 1e-10),
            || format!("eigenvalue {want} missing"),
        )?;
    }
    let found = toy_roots(&roots);
    ensure(found.len() == 3, || format!("{} accepted roots, want 3", found.len()))?;
    for want in TOY_ROOTS {
        ensure(
            found.iter().any(|r| (r[0] - want[0]).abs() < 1e-10 && (r[1] - want[1]).abs() < 1e-10),
            || format!("root {want:?} missing"),
        )?;
    }
    for c in roots.accepted(RESIDUAL_THRESHOLD) {
        ensure(c.residual < 1e-10, || format!("residual {:e}", c.residual))?;
    }
    let filtered = roots.candidates.len() - roots.accepted(RESIDUAL_THRESHOLD).count() + roots.non_toric;
    ensure(filtered == 1, || format!("{filtered} candidates filtered, want 1"))?;
    Ok(time)
}

/// Scaling any one polynomial by `1e3` moves no root coordinate by more
/// than `1e-8`.
pub fn toy_scale_invariance() -> Check {
    let base = toy_roots(&toy_solve(&toy_real([1.0, 1.0]))?.0);
    for scale in [[1e3, 1.0], [1.0, 1e3]] {
        let scaled = toy_roots(&toy_solve(&toy_real(scale))?.0);
        ensure(scaled.len() == base.len(), || format!("scale {scale:?}: root count changed"))?;
        for (a, b) in base.iter().zip(&scaled) {
            let d = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            ensure(d <= 1e-8, || format!("scale {scale:?}: coordinate moved by {d:e}"))?;
        }
    }
    Ok(())
}

// ---- property suite -------------------------------------------------------

fn monomial(arity: usize, bound: i32) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(-bound..=bound, arity).prop_map(|e| Monomial::new(&e).unwrap())
}

pub fn grevlex_is_a_total_order(a: &Monomial, b: &Monomial, c: &Monomial) -> Check {
    let ab = grevlex_cmp(a, b).unwrap();
    let ba = grevlex_cmp(b, a).unwrap();
    ensure(ab == ba.reverse(), || "antisymmetry".into())?;
    ensure((ab == Ordering::Equal) == (a == b), || "equal only on identical monomials".into())?;
    let bc = grevlex_cmp(b, c).unwrap();
    if ab != Ordering::Greater && bc != Ordering::Greater {
        ensure(grevlex_cmp(a, c).unwrap() != Ordering::Greater, || "transitivity".into())?;
    }
    ensure(grevlex_cmp(&(a * c), &(b * c)).unwrap() == ab, || "compatible with multiplication".into())?;
    ensure(
        a.degree() == b.degree() || ab == a.degree().cmp(&b.degree()),
        || "degree decides first".into(),
    )
}

/// Every vector `c·A` over GF(7) for a matrix with at most four rows.
fn row_space(a: &ExactMatrix) -> Vec<Vec<u32>> {
    let f = a.field();
    let p = f.modulus() as usize;
    let r = a.rows();
    let mut out = Vec::with_capacity(p.pow(r as u32));
    for code in 0..p.pow(r as u32) {
        let mut c = code;
        let mut v = vec![0u32; a.cols()];
        for i in 0..r {
            let k = (c % p) as u32;
            c /= p;
            for (j, x) in v.iter_mut().enumerate() {
                *x = f.add(*x, f.mul(k, a.get(i, j)));
            }
        }
        out.push(v);
    }
    out.sort();
    out.dedup();
    out
}

pub fn rref_matches_brute_force(a: &ExactMatrix) -> Check {
    let r = a.rref();
    let again = r.matrix.rref();
    ensure(again.matrix == r.matrix && again.pivots == r.pivots, || "RREF is not idempotent".into())?;
    ensure(row_space(a) == row_space(&r.matrix), || "row space changed".into())?;
    ensure(r.pivots.windows(2).all(|w| w[0] < w[1]), || "pivots not increasing".into())?;
    for (i, &c) in r.pivots.iter().enumerate() {
        ensure((0..c).all(|j| r.matrix.get(i, j) == 0), || "entry left of a pivot".into())?;
        ensure(
            (0..r.matrix.rows()).all(|k| r.matrix.get(k, c) == u32::from(k == i)),
            || "pivot column is not a unit vector".into(),
        )?;
    }
    ensure((r.pivots.len()..r.matrix.rows()).all(|i| r.matrix.is_zero_row(i)), || "rows below rank".into())?;
    // the rank is the dimension of the row space
    ensure(
        7usize.pow(r.pivots.len() as u32) == row_space(a).len(),
        || "rank disagrees with the row space".into(),
    )
}

fn gf7_matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..=4, 1usize..=6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(0u32..7, r * c).prop_map(move |v| {
            ExactMatrix::from_fn(PrimeField::new(7).unwrap(), r, c, |i, j| v[i * c + j])
        })
    })
}

/// A random system in two or three variables with small supports.
#[derive(Debug, Clone)]
pub struct RandomCase {
    pub system: LaurentSystem<u32>,
    pub expansions: usize,
    pub action: usize,
}

fn random_case() -> impl Strategy<Value = RandomCase> {
    (2usize..=3)
        .prop_flat_map(|k| {
            let poly = proptest::collection::btree_set(proptest::collection::vec(-2i32..=2, k), 3..=5);
            (Just(k), proptest::collection::vec(poly, k..=k + 1), any::<u64>(), 0usize..=1, 0..2 * k)
        })
        .prop_filter_map("constant polynomial", |(k, supports, seed, expansions, action)| {
            use rand::{Rng, SeedableRng};
            let f = PrimeField::default();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let polys = supports
                .into_iter()
                .map(|s| {
                    let terms = s.into_iter().map(|e| (Monomial::new(&e).unwrap(), rng.gen_range(1..f.modulus()))).collect();
                    LaurentPoly::new(k, terms).unwrap()
                })
                .collect();
            let system = LaurentSystem::new(k, polys).ok()?;
            Some(RandomCase {
                system,
                expansions,
                action,
            })
        })
}

/// Partition disjointness and coverage at every iteration, and strictly
/// shrinking bases.
pub fn partitions_are_sound(case: &RandomCase) -> Check {
    let f = PrimeField::default();
    let k = case.system.arity();
    let mut shifts = ShiftTuple::trivial(case.system.len(), k);
    for _ in 0..case.expansions {
        shifts = shifts.expand(k).unwrap();
    }
    let shifted = ShiftedSystem::expand(f, &case.system, &shifts).map_err(|e| e.to_string())?;
    let support = shifted.support();
    let action = &action_candidates(k)[case.action];
    let mut checks: Vec<Check> = Vec::new();
    let mut previous: Option<MonomialSet> = None;
    template_test_traced(&shifted, action, |it| {
        let p = it.partition;
        checks.push(ensure(p.is_disjoint(), || format!("iteration {}: overlapping sets", it.index)));
        checks.push(ensure(p.covers_exactly(&support), || format!("iteration {}: not a cover", it.index)));
        if let Some(prev) = &previous {
            checks.push(ensure(
                p.basis.is_subset(prev) && p.basis.len() < prev.len(),
                || format!("iteration {}: basis did not shrink", it.index),
            ));
        }
        previous = Some(p.basis.clone());
    })
    .map_err(|e| e.to_string())?;
    checks.into_iter().collect()
}

/// Templates from planted instances with two variables, raw and pruned.
pub fn planted_template(seed: u64, pruned: bool) -> Option<(Template, Vec<String>)> {
    let f = PrimeField::default();
    let d = 3 + (seed % 3) as usize;
    let inst = plant_roots(f, PlantSpec::overdetermined(2, d), seed).ok()?;
    let found = template_finder(f, &inst.system, &FinderOptions::default()).ok()??;
    let t = if pruned {
        prune_excessive_columns(&inst.system, &found.template).ok()?
    } else {
        found.template
    };
    Some((t, vec!["u".into(), "v".into()]))
}

pub fn template_round_trip(t: &Template, names: &[String]) -> Check {
    let text = t.render(names);
    let (back, back_names) = Template::parse(&text).map_err(|e| e.to_string())?;
    ensure(back == *t && back_names == names, || "parse(render(t)) != t".into())?;
    ensure(back.render(&back_names) == text, || "render is not byte-stable".into())
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(&S::Value) -> Check,
) -> Check
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |v| check(&v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())
}

pub fn prop_grevlex(cases: u32) -> Check {
    run_property(
        cases,
        (1usize..=4).prop_flat_map(|k| (monomial(k, 4), monomial(k, 4), monomial(k, 4))),
        |(a, b, c)| grevlex_is_a_total_order(a, b, c),
    )
}

pub fn prop_rref(cases: u32) -> Check {
    run_property(cases, gf7_matrix(), rref_matches_brute_force)
}

pub fn prop_partitions(cases: u32) -> Check {
    run_property(cases, random_case(), partitions_are_sound)
}

pub fn prop_template_format(cases: u32) -> Check {
    run_property(cases, (0u64..1_000_000, any::<bool>()), |&(seed, pruned)| match planted_template(seed, pruned) {
        Some((t, names)) => template_round_trip(&t, &names),
        None => Ok(()),
    })
}

fn problem_def() -> impl Strategy<Value = ProblemDef> {
    let coeff = prop_oneof![
        Just(Coeff::Generic),
        (-50i64..=50, 1i64..=12)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| Coeff::Exact(num_rational::Rational64::new(n, d))),
    ];
    (1usize..=3)
        .prop_flat_map(move |k| {
            let term = (proptest::collection::vec(-3i32..=3, k), coeff.clone());
            let poly = proptest::collection::vec(term, 1..=4);
            (
                Just(k),
                "[a-z][a-z0-9_]{0,6}",
                proptest::collection::vec(poly, 1..=3),
                proptest::option::of(1usize..60),
                any::<u64>(),
            )
        })
        .prop_filter_map("invalid document", |(k, name, polys, roots, seed)| {
            let polys = polys
                .into_iter()
                .map(|terms| {
                    let mut out: Vec<(Monomial, Coeff)> = Vec::new();
                    for (e, c) in terms {
                        let m = Monomial::new(&e).unwrap();
                        if !out.iter().any(|(x, _)| *x == m) {
                            out.push((m, c));
                        }
                    }
                    out.sort_by(|a, b| grevlex_cmp(&b.0, &a.0).unwrap());
                    out
                })
                .collect();
            let def = ProblemDef {
                name,
                vars: (0..k).map(|i| format!("x{}", i + 1)).collect(),
                roots,
                seed,
                builder: None,
                polys,
            };
            def.validate().ok().map(|_| def)
        })
}

pub fn problem_round_trip(def: &ProblemDef) -> Check {
    let text = def.render();
    let back = ProblemDef::parse(&text).map_err(|e| format!("{e}\n{text}"))?;
    ensure(back == *def, || "parse(render(d)) != d".into())?;
    ensure(back.render() == text, || "render is not byte-stable".into())
}

pub fn prop_problem_format(cases: u32) -> Check {
    run_property(cases, problem_def(), problem_round_trip)
}
