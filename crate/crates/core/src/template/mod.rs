//! Offline template generation over GF(p).
//!
//! A template is described by an action monomial `a`, a tuple of shift sets
//! `A = (A_1, .., A_s)`, and the partition of the support of `A·F` into
//! excessive (E), reducible (R) and basis (B) monomials. The Macaulay matrix
//! with columns ordered E | R | B is an elimination template when its RREF
//! has the block form
//!
//! ```text
//!       E   R   B
//!     [ *   0   * ]
//!     [ 0   I   M ]
//!     [ 0   0   0 ]
//! ```
//!
//! which makes `B` a solving set for `a`.

mod finder;
mod format;
mod macaulay;
mod partition;
mod prune;
mod reduction;

pub use finder::{
    action_candidates, search_strategies, strategy_by_name, template_finder, Exhaustive, FinderOptions,
    FinderResult, FirstHit, SearchStrategy,
};
pub use format::{FormatError, FORMAT_HEADER};
pub use macaulay::build_macaulay;
pub use partition::{partition_for_action, permissible, Partition};
pub use prune::prune_excessive_columns;
pub use reduction::{template_reduction, AuditEntry, ReductionResult};
pub use test::{ratio_pairs, template_test, template_test_traced, Iteration};

use std::collections::HashSet;

use thiserror::Error;

use crate::field::{Field, PrimeField};
use crate::gf::ExactMatrix;
use crate::laurent::{AlgebraError, Coefficient, LaurentPoly, LaurentSystem, Monomial, MonomialSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TemplateError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("monomial {0} is missing from the column order")]
    MissingMonomial(String),
    #[error("shift tuple has {found} sets for {expected} polynomials")]
    ShiftArity { expected: usize, found: usize },
    #[error("action monomial must not be constant")]
    ConstantAction,
    #[error("optimality identity violated: {cols} columns - {rows} rows != {basis} basis monomials")]
    IdentityViolation { rows: usize, cols: usize, basis: usize },
    #[error("template does not match the system: {0}")]
    Mismatch(String),
}

/// Which input polynomial and which monomial multiplier produced a row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowSource {
    pub poly: usize,
    pub shift: Monomial,
}

/// `A = (A_1, .., A_s)`, one shift set per input polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftTuple {
    sets: Vec<MonomialSet>,
}

impl ShiftTuple {
    pub fn new(sets: Vec<MonomialSet>) -> Self {
        Self { sets }
    }

    /// `({1}, .., {1})`.
    pub fn trivial(polys: usize, arity: usize) -> Self {
        Self {
            sets: vec![MonomialSet::from_monomials([Monomial::one(arity)]); polys],
        }
    }

    pub fn sets(&self) -> &[MonomialSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Total number of shifts, i.e. rows before deduplication.
    pub fn total(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum()
    }

    /// `A_j ∪ {x^±1 · m : x ∈ X, m ∈ A_j}` for every `j`.
    pub fn expand(&self, arity: usize) -> Result<Self, AlgebraError> {
        let steps: Vec<Monomial> = (0..arity)
            .flat_map(|v| [Monomial::var(arity, v, 1), Monomial::var(arity, v, -1)])
            .collect::<Result<_, _>>()?;
        let sets = self
            .sets
            .iter()
            .map(|set| {
                let mut out: Vec<Monomial> = set.iter().cloned().collect();
                for m in set {
                    for s in &steps {
                        out.push(m.try_mul(s)?);
                    }
                }
                Ok(MonomialSet::from_monomials(out))
            })
            .collect::<Result<_, AlgebraError>>()?;
        Ok(Self { sets })
    }

    /// Copy with `m` removed from `A_j`.
    pub fn without(&self, j: usize, m: &Monomial) -> Self {
        let mut sets = self.sets.clone();
        sets[j] = sets[j].filter(|x| x != m);
        Self { sets }
    }
}

/// The rows `A·F` over GF(p), deduplicated, with their provenance.
#[derive(Debug, Clone)]
pub struct ShiftedSystem {
    field: PrimeField,
    arity: usize,
    structure: Vec<MonomialSet>,
    shifts: ShiftTuple,
    rows: Vec<LaurentPoly<u32>>,
    sources: Vec<RowSource>,
}

impl ShiftedSystem {
    /// Rows are produced polynomial by polynomial, each shift set in
    /// grevlex-descending order. Identical rows are kept once.
    pub fn expand(field: PrimeField, system: &LaurentSystem<u32>, shifts: &ShiftTuple) -> Result<Self, TemplateError> {
        if shifts.len() != system.len() {
            return Err(TemplateError::ShiftArity {
                expected: system.len(),
                found: shifts.len(),
            });
        }
        let mut rows = Vec::with_capacity(shifts.total());
        let mut sources = Vec::with_capacity(shifts.total());
        for (j, (f, set)) in system.polys().iter().zip(shifts.sets()).enumerate() {
            for m in set {
                rows.push(f.shift(m)?);
                sources.push(RowSource {
                    poly: j,
                    shift: m.clone(),
                });
            }
        }
        Ok(Self::assemble(field, system.arity(), system.structure(), shifts.clone(), rows, sources))
    }

    /// Build from explicit rows. The shift tuple is read off the sources.
    pub fn from_rows(
        field: PrimeField,
        structure: Vec<MonomialSet>,
        rows: Vec<LaurentPoly<u32>>,
        sources: Vec<RowSource>,
    ) -> Self {
        assert_eq!(rows.len(), sources.len());
        let arity = rows.first().map_or(0, |r| r.arity());
        let shifts = ShiftTuple::new(
            (0..structure.len())
                .map(|j| {
                    sources
                        .iter()
                        .filter(|s| s.poly == j)
                        .map(|s| s.shift.clone())
                        .collect()
                })
                .collect(),
        );
        Self::assemble(field, arity, structure, shifts, rows, sources)
    }

    fn assemble(
        field: PrimeField,
        arity: usize,
        structure: Vec<MonomialSet>,
        shifts: ShiftTuple,
        rows: Vec<LaurentPoly<u32>>,
        sources: Vec<RowSource>,
    ) -> Self {
        let mut seen = HashSet::new();
        let mut keep_rows = Vec::with_capacity(rows.len());
        let mut keep_sources = Vec::with_capacity(rows.len());
        for (r, s) in rows.into_iter().zip(sources) {
            if r.is_zero() || !seen.insert(r.terms().to_vec()) {
                continue;
            }
            keep_rows.push(r);
            keep_sources.push(s);
        }
        Self {
            field,
            arity,
            structure,
            shifts,
            rows: keep_rows,
            sources: keep_sources,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn structure(&self) -> &[MonomialSet] {
        &self.structure
    }

    pub fn shifts(&self) -> &ShiftTuple {
        &self.shifts
    }

    pub fn rows(&self) -> &[LaurentPoly<u32>] {
        &self.rows
    }

    pub fn sources(&self) -> &[RowSource] {
        &self.sources
    }

    pub fn support(&self) -> MonomialSet {
        crate::laurent::support(&self.rows)
    }

    /// Rows restricted to the given provenance entries, in that order.
    pub fn select(&self, sources: &[RowSource]) -> Result<Vec<&LaurentPoly<u32>>, TemplateError> {
        sources
            .iter()
            .map(|s| {
                self.sources
                    .iter()
                    .position(|t| t == s)
                    .map(|i| &self.rows[i])
                    .ok_or_else(|| TemplateError::Mismatch(format!("no row for shift {:?} of f{}", s.shift, s.poly)))
            })
            .collect()
    }
}

/// Index pair for reading a coordinate off an eigenvector:
/// `basis[numerator] = x_var * basis[denominator]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct C2Pair {
    pub numerator: usize,
    pub denominator: usize,
}

/// How row `i` of `T_0` is read off: `a·B[i]` is either another basis
/// monomial or a reducible one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionRow {
    /// `a·B[i] = B[j]`: the row is the unit vector `e_j`.
    Basis(usize),
    /// `a·B[i] = R[r]`: the row is minus row `r` of the reduced block.
    Reducible(usize),
}

/// An elimination template: everything the online solver needs to fill,
/// reduce and read out the action matrix, plus the GF(p) reduced block used
/// for verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub field: PrimeField,
    pub action: Monomial,
    /// Supports of the input polynomials at generation time.
    pub structure: Vec<MonomialSet>,
    pub shifts: ShiftTuple,
    pub partition: Partition,
    pub rows: Vec<RowSource>,
    /// One pair per variable.
    pub c2_pairs: Vec<C2Pair>,
    /// Excessive columns removed by pruning. Row polynomials may still have
    /// terms here; they are ignored when the matrix is filled.
    pub dropped: MonomialSet,
    /// `#R × #B` block of the RREF: row `i` holds the B-coefficients of the
    /// row whose pivot is `R[i]`.
    pub reduced_block: ExactMatrix,
}

impl Template {
    pub fn arity(&self) -> usize {
        self.action.arity()
    }

    pub fn basis(&self) -> &MonomialSet {
        &self.partition.basis
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.partition.len()
    }

    /// One entry per basis monomial, in basis order.
    pub fn action_rows(&self) -> Vec<ActionRow> {
        self.basis()
            .iter()
            .map(|b| {
                let ab = &self.action * b;
                match self.basis().position(&ab) {
                    Some(j) => ActionRow::Basis(j),
                    None => ActionRow::Reducible(
                        self.partition
                            .reducible
                            .position(&ab)
                            .expect("partition is closed under the action"),
                    ),
                }
            })
            .collect()
    }

    /// `T_0` over GF(p): `T_0·vec(B)(p) = a(p)·vec(B)(p)` at every root.
    pub fn exact_action_matrix(&self) -> ExactMatrix {
        let f = self.field;
        let d = self.basis().len();
        let mut t0 = ExactMatrix::zeros(f, d, d);
        for (i, row) in self.action_rows().into_iter().enumerate() {
            match row {
                ActionRow::Basis(j) => t0.set(i, j, 1),
                ActionRow::Reducible(r) => {
                    for j in 0..d {
                        t0.set(i, j, f.neg(self.reduced_block.get(r, j)));
                    }
                }
            }
        }
        t0
    }

    /// Macaulay matrix of the template rows over GF(p), columns E | R | B.
    pub fn exact_matrix(&self, system: &LaurentSystem<u32>) -> Result<ExactMatrix, TemplateError> {
        let rows = self.row_polys(system)?;
        let rows: Vec<LaurentPoly<u32>> = rows
            .into_iter()
            .map(|r| r.filter_terms(|m| !self.dropped.contains(m)))
            .collect();
        build_macaulay(self.field, &rows, &self.columns())
    }

    /// Column order E | R | B.
    pub fn columns(&self) -> Vec<Monomial> {
        self.partition.column_order()
    }

    /// `(rows, cols)`.
    pub fn size(&self) -> (usize, usize) {
        (self.num_rows(), self.num_cols())
    }

    /// Rebuilds the row polynomials `m·f_j` from provenance. The system must
    /// have the structure the template was generated for.
    pub fn row_polys<C: Coefficient>(&self, system: &LaurentSystem<C>) -> Result<Vec<LaurentPoly<C>>, TemplateError> {
        if system.arity() != self.arity() || system.structure() != self.structure {
            return Err(TemplateError::Mismatch("system structure differs from the template".into()));
        }
        self.rows
            .iter()
            .map(|s| Ok(system.polys()[s.poly].shift(&s.shift)?))
            .collect()
    }
}
