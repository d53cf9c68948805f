//! Ground truth for the generator: random systems over GF(p) with planted
//! toric roots, and exact checks of templates against those roots.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, PrimeField};
use crate::gf::ExactMatrix;
use crate::laurent::{eval_monomial, LaurentPoly, LaurentSystem, Monomial, MonomialSet};
use crate::template::{
    prune_excessive_columns, template_finder, template_reduction, FinderOptions, Template, TemplateError,
};

const MAX_ATTEMPTS: usize = 32;
const EXPONENT_BOX: i32 = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("no nondegenerate sample after {0} attempts")]
    Degenerate(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlantSpec {
    pub arity: usize,
    pub roots: usize,
    pub support_size: usize,
    pub polys: usize,
}

impl PlantSpec {
    /// Support of `d + k + 1` monomials and `k + 1` equations, which spans
    /// the whole nullspace of the evaluation matrix. Generically the planted
    /// points are then the only common roots.
    pub fn overdetermined(arity: usize, roots: usize) -> Self {
        Self {
            arity,
            roots,
            support_size: roots + arity + 1,
            polys: arity + 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub system: LaurentSystem<u32>,
    pub roots: Vec<Vec<u32>>,
    pub support: MonomialSet,
    pub seed: u64,
}

pub fn plant_roots(field: PrimeField, spec: PlantSpec, seed: u64) -> Result<PlantedInstance, OracleError> {
    let PlantSpec {
        arity: k,
        roots: d,
        support_size: n,
        polys: s,
    } = spec;
    if k == 0 || n < d + 2 || s < k {
        return Err(OracleError::Parameters(format!(
            "need k > 0, support_size >= d + 2, s >= k (k={k}, d={d}, support={n}, s={s})"
        )));
    }
    let p = field.modulus();
    if (p as u64 - 1).checked_pow(k as u32).is_some_and(|t| d as u64 >= t) {
        return Err(OracleError::Parameters("more roots than toric points".into()));
    }
    let box_size = (2 * EXPONENT_BOX as usize + 1).checked_pow(k as u32);
    if box_size.is_some_and(|b| n > b) {
        return Err(OracleError::Parameters("support larger than the exponent box".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut roots: Vec<Vec<u32>> = Vec::with_capacity(d);
        while roots.len() < d {
            let pt: Vec<u32> = (0..k).map(|_| rng.gen_range(1..p)).collect();
            if !roots.contains(&pt) {
                roots.push(pt);
            }
        }
        let mut monos: Vec<Monomial> = std::iter::once(Monomial::one(k))
            .chain((0..k).map(|v| Monomial::var(k, v, 1).expect("unit exponent")))
            .collect();
        while monos.len() < n {
            let e: Vec<i32> = (0..k).map(|_| rng.gen_range(-EXPONENT_BOX..=EXPONENT_BOX)).collect();
            let m = Monomial::new(&e).expect("small exponent");
            if !monos.contains(&m) {
                monos.push(m);
            }
        }
        let support = MonomialSet::from_monomials(monos);
        if let Some(system) = nullspace_system(field, &support, &roots, s, &mut rng) {
            return Ok(PlantedInstance {
                system,
                roots,
                support,
                seed,
            });
        }
    }
    Err(OracleError::Degenerate(MAX_ATTEMPTS))
}

/// `s` random combinations of a nullspace basis of the evaluation matrix
/// `[m_j(p_i)]`; `None` when the nullspace is too small or a combination is
/// constant.
pub fn nullspace_system(
    field: PrimeField,
    support: &MonomialSet,
    roots: &[Vec<u32>],
    s: usize,
    rng: &mut impl Rng,
) -> Option<LaurentSystem<u32>> {
    let k = support.get(0)?.arity();
    let basis = nullspace(field, &evaluation_matrix(field, support, roots));
    if basis.len() < s {
        return None;
    }
    let p = field.modulus();
    let polys = (0..s)
        .map(|_| {
            let mut coeffs = vec![0u32; support.len()];
            for v in &basis {
                let r = rng.gen_range(1..p);
                for (c, &x) in coeffs.iter_mut().zip(v) {
                    *c = field.add(*c, field.mul(r, x));
                }
            }
            let terms = support.iter().cloned().zip(coeffs).filter(|(_, c)| *c != 0).collect();
            LaurentPoly::new(k, terms).ok()
        })
        .collect::<Option<Vec<_>>>()?;
    let system = LaurentSystem::new(k, polys).ok()?;
    let vanishes = system
        .polys()
        .iter()
        .all(|f| roots.iter().all(|pt| f.eval(&field, pt) == Ok(0)));
    vanishes.then_some(system)
}

pub fn evaluation_matrix(field: PrimeField, support: &MonomialSet, roots: &[Vec<u32>]) -> ExactMatrix {
    ExactMatrix::from_fn(field, roots.len(), support.len(), |i, j| {
        eval_monomial(&field, &support.as_slice()[j], &roots[i]).expect("toric point")
    })
}

/// Basis of `{v : M v = 0}`, one vector per free column of the RREF.
pub fn nullspace(field: PrimeField, m: &ExactMatrix) -> Vec<Vec<u32>> {
    let rref = m.rref();
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &c in &rref.pivots {
        is_pivot[c] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u32; n];
            v[free] = 1;
            for (row, &pc) in rref.pivots.iter().enumerate() {
                v[pc] = field.neg(rref.matrix.get(row, free));
            }
            v
        })
        .collect()
}

/// Every row polynomial vanishes at every root, exactly.
///
/// # Panics
/// On a zero row, which deduplication rules out for generated templates.
pub fn verify_vanishing(field: PrimeField, rows: &[LaurentPoly<u32>], roots: &[Vec<u32>]) -> bool {
    assert!(rows.iter().all(|r| !r.is_zero()), "template contains a zero row");
    rows.iter()
        .all(|r| roots.iter().all(|pt| r.eval(&field, pt) == Ok(0)))
}

/// `det(T_0 - a(p) I) = 0 mod p` for every root `p`.
pub fn verify_action_spectrum(template: &Template, roots: &[Vec<u32>]) -> bool {
    let f = template.field;
    let t0 = template.exact_action_matrix();
    let d = t0.rows();
    roots.iter().all(|pt| {
        let Ok(lambda) = eval_monomial(&f, &template.action, pt) else {
            return false;
        };
        let shifted = ExactMatrix::from_fn(f, d, d, |i, j| {
            let v = t0.get(i, j);
            if i == j {
                f.sub(v, lambda)
            } else {
                v
            }
        });
        shifted.is_singular()
    })
}

/// `T_0·vec(B)(p) = a(p)·vec(B)(p)` for every root: the basis vector at the
/// root is an eigenvector with eigenvalue `a(p)`.
pub fn verify_eigenvectors(template: &Template, roots: &[Vec<u32>]) -> bool {
    let f = template.field;
    let t0 = template.exact_action_matrix();
    roots.iter().all(|pt| {
        let Ok(b) = template
            .basis()
            .iter()
            .map(|m| eval_monomial(&f, m, pt))
            .collect::<Result<Vec<_>, _>>()
        else {
            return false;
        };
        let Ok(lambda) = eval_monomial(&f, &template.action, pt) else {
            return false;
        };
        (0..b.len()).all(|i| {
            let lhs = (0..b.len()).fold(0, |acc, j| f.add(acc, f.mul(t0.get(i, j), b[j])));
            lhs == f.mul(lambda, b[i])
        })
    })
}

/// Planted-suite parameters for `seed`: `k` alternates between 2 and 3,
/// `d` cycles through 3..=8.
pub fn suite_spec(seed: u64) -> PlantSpec {
    let k = 2 + (seed % 2) as usize;
    let d = 3 + (seed / 2 % 6) as usize;
    PlantSpec::overdetermined(k, d)
}

/// Outcome of the full offline pipeline on one planted instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedReport {
    pub seed: u64,
    pub spec: PlantSpec,
    /// Shift expansions used by the finder; `None` when it gave up.
    pub iterations: Option<usize>,
    /// `#B` found, after reduction.
    pub basis: Option<(usize, usize)>,
    /// Pruned template size.
    pub size: Option<(usize, usize)>,
    pub vanishing: bool,
    pub spectrum: bool,
    /// `#cols - #rows = #B` after pruning.
    pub identity: bool,
    /// No accepted reduction step raised `#B`.
    pub monotone: bool,
    pub error: Option<String>,
}

impl PlantedReport {
    pub fn found(&self) -> bool {
        self.iterations.is_some()
    }

    /// Every check holds for a found template.
    pub fn passes(&self) -> bool {
        self.found() && self.error.is_none() && self.vanishing && self.spectrum && self.identity && self.monotone
    }
}

/// Plant, find (first hit), reduce, prune, and check the result against
/// the planted roots.
pub fn run_planted(field: PrimeField, seed: u64, max_iterations: usize) -> PlantedReport {
    let spec = suite_spec(seed);
    let mut report = PlantedReport {
        seed,
        spec,
        iterations: None,
        basis: None,
        size: None,
        vanishing: false,
        spectrum: false,
        identity: false,
        monotone: false,
        error: None,
    };
    let inst = match plant_roots(field, spec, seed) {
        Ok(i) => i,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let options = FinderOptions {
        max_iterations,
        ..Default::default()
    };
    let result = (|| -> Result<(), TemplateError> {
        let Some(found) = template_finder(field, &inst.system, &options)? else {
            return Ok(());
        };
        report.iterations = Some(found.iterations);
        let initial = found.template.basis().len();
        let reduced = template_reduction(&inst.system, &found.template)?;
        let mut bound = initial;
        report.monotone = reduced.audit.iter().all(|a| {
            let ok = !a.accepted || a.basis.is_some_and(|b| b <= bound);
            let kept = a.bound <= bound;
            bound = a.bound;
            ok && kept
        }) && reduced.template.basis().len() <= initial;
        let pruned = prune_excessive_columns(&inst.system, &reduced.template)?;
        report.basis = Some((initial, pruned.basis().len()));
        let (rows, cols) = pruned.size();
        report.size = Some((rows, cols));
        report.identity = cols == rows + pruned.basis().len();
        report.vanishing = verify_vanishing(field, &pruned.row_polys(&inst.system)?, &inst.roots);
        report.spectrum = verify_action_spectrum(&pruned, &inst.roots);
        Ok(())
    })();
    if let Err(e) = result {
        report.error = Some(e.to_string());
    }
    report
}
