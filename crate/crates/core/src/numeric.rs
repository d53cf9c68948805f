//! Online phase: fill a template with real coefficients, reduce it, and read
//! the roots off the eigenvectors of the action matrix.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use faer::Mat;
use num_complex::Complex64;
use thiserror::Error;

use crate::laurent::{LaurentSystem, Monomial, MonomialSet};
use crate::template::{ratio_pairs, ActionRow, C2Pair, Template};

/// Pivots below this fraction of the largest entry count as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-12;
/// Eigenvectors whose C2 denominator entry is this small relative to the
/// largest entry are not toric.
pub const NON_TORIC_TOLERANCE: f64 = 1e-8;
/// Default residual bound for reporting a candidate as a root.
pub const RESIDUAL_THRESHOLD: f64 = 1e-6;
const REAL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("instance does not match the template: {0}")]
    Mismatch(String),
    #[error("non-finite coefficient in the instance")]
    NonFinite,
    #[error("degenerate instance: no pivot for column {column}")]
    Degenerate { column: usize },
    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl NumericMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Where each coefficient of each input polynomial lands in each row.
#[derive(Debug, Clone)]
struct FillLayout {
    /// Per template row: input polynomial and target column per term.
    rows: Vec<(usize, Vec<Option<usize>>)>,
}

impl FillLayout {
    fn new(template: &Template) -> Result<Self, SolveError> {
        let index: HashMap<Monomial, usize> = template
            .columns()
            .into_iter()
            .enumerate()
            .map(|(j, m)| (m, j))
            .collect();
        let rows = template
            .rows
            .iter()
            .map(|src| {
                let structure = template
                    .structure
                    .get(src.poly)
                    .ok_or_else(|| SolveError::Mismatch(format!("row refers to f{}", src.poly)))?;
                let targets = structure
                    .iter()
                    .map(|m| {
                        let shifted = m
                            .try_mul(&src.shift)
                            .map_err(|e| SolveError::Mismatch(e.to_string()))?;
                        match index.get(&shifted) {
                            Some(&j) => Ok(Some(j)),
                            None if template.dropped.contains(&shifted) => Ok(None),
                            None => Err(SolveError::Mismatch(format!("monomial {shifted:?} has no column"))),
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((src.poly, targets))
            })
            .collect::<Result<Vec<_>, SolveError>>()?;
        Ok(Self { rows })
    }
}

fn check_structure(template: &Template, system: &LaurentSystem<f64>) -> Result<(), SolveError> {
    if system.arity() != template.arity() {
        return Err(SolveError::Mismatch(format!(
            "{} variables, template has {}",
            system.arity(),
            template.arity()
        )));
    }
    let structure = system.structure();
    if structure.len() != template.structure.len() {
        return Err(SolveError::Mismatch(format!(
            "{} polynomials, template has {}",
            structure.len(),
            template.structure.len()
        )));
    }
    for (j, (got, want)) in structure.iter().zip(&template.structure).enumerate() {
        if got != want {
            return Err(SolveError::Mismatch(format!("support of f{j} differs from the template")));
        }
    }
    if system
        .polys()
        .iter()
        .any(|f| f.terms().iter().any(|(_, c)| !c.is_finite()))
    {
        return Err(SolveError::NonFinite);
    }
    Ok(())
}

fn fill(layout: &FillLayout, cols: usize, system: &LaurentSystem<f64>) -> NumericMatrix {
    let mut m = NumericMatrix::zeros(layout.rows.len(), cols);
    for (i, (poly, targets)) in layout.rows.iter().enumerate() {
        for ((_, c), target) in system.polys()[*poly].terms().iter().zip(targets) {
            if let Some(j) = target {
                m.set(i, *j, *c);
            }
        }
    }
    m
}

/// Row `(j, m)` holds the coefficients of `m·f_j` under the template's
/// column order. The supports must equal the generation-time structure.
pub fn instantiate(template: &Template, system: &LaurentSystem<f64>) -> Result<NumericMatrix, SolveError> {
    check_structure(template, system)?;
    let layout = FillLayout::new(template)?;
    Ok(fill(&layout, template.num_cols(), system))
}

/// `T_0` of the eigenproblem `T_0 u = λ u` (monomial action, `T_1 = I`).
#[derive(Debug, Clone)]
pub struct ActionPencil {
    /// Row-major `d × d`.
    pub t0: Vec<f64>,
    pub dim: usize,
    pub basis: MonomialSet,
    /// Per variable, every pair `(q, r)` with `B[q] = x_i·B[r]`.
    pub ratio_pairs: Vec<Vec<C2Pair>>,
    pub action: Monomial,
}

impl ActionPencil {
    pub fn t0_entry(&self, i: usize, j: usize) -> f64 {
        self.t0[i * self.dim + j]
    }
}

/// Gauss–Jordan with partial pivoting over the E and R columns, then reads
/// `T_0` off the reduced rows. Rows are scaled to unit max norm first.
pub fn reduce_and_assemble(mut m: NumericMatrix, template: &Template) -> Result<ActionPencil, SolveError> {
    let e = template.partition.excessive.len();
    let r = template.partition.reducible.len();
    let d = template.basis().len();
    if m.cols != e + r + d {
        return Err(SolveError::Mismatch(format!("{} columns, template has {}", m.cols, e + r + d)));
    }
    let cols = m.cols;
    for i in 0..m.rows {
        let row = &mut m.data[i * cols..(i + 1) * cols];
        let s = row.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if s > 0.0 {
            row.iter_mut().for_each(|v| *v /= s);
        }
    }
    let tol = PIVOT_TOLERANCE * m.max_abs().max(f64::MIN_POSITIVE);

    let mut r_rows = vec![usize::MAX; r];
    let mut prow = 0;
    for col in 0..e + r {
        let best = (prow..m.rows).max_by(|&a, &b| m.get(a, col).abs().total_cmp(&m.get(b, col).abs()));
        let pivot = match best {
            Some(i) if m.get(i, col).abs() > tol => i,
            _ if col < e => continue,
            _ => return Err(SolveError::Degenerate { column: col }),
        };
        if pivot != prow {
            for j in col..cols {
                m.data.swap(pivot * cols + j, prow * cols + j);
            }
        }
        let inv = 1.0 / m.get(prow, col);
        for v in &mut m.data[prow * cols + col..(prow + 1) * cols] {
            *v *= inv;
        }
        m.set(prow, col, 1.0);
        let pivot_row: Vec<f64> = m.row(prow)[col..].to_vec();
        for i in 0..m.rows {
            if i == prow {
                continue;
            }
            let factor = m.get(i, col);
            if factor == 0.0 {
                continue;
            }
            let row = &mut m.data[i * cols + col..(i + 1) * cols];
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
            row[0] = 0.0;
        }
        if col >= e {
            r_rows[col - e] = prow;
        }
        prow += 1;
    }

    let mut t0 = vec![0.0; d * d];
    for (i, row) in template.action_rows().into_iter().enumerate() {
        match row {
            ActionRow::Basis(j) => t0[i * d + j] = 1.0,
            ActionRow::Reducible(k) => {
                let src = m.row(r_rows[k]);
                for j in 0..d {
                    t0[i * d + j] = -src[e + r + j];
                }
            }
        }
    }
    Ok(ActionPencil {
        t0,
        dim: d,
        basis: template.basis().clone(),
        ratio_pairs: ratio_pairs(template.basis()),
        action: template.action.clone(),
    })
}

/// One eigenpair turned into a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub eigenvalue: Complex64,
    pub point: Vec<Complex64>,
    /// `ε`; infinite until scored.
    pub residual: f64,
}

impl Candidate {
    pub fn is_real(&self) -> bool {
        self.point
            .iter()
            .all(|z| z.im.abs() < REAL_TOLERANCE * (1.0 + z.re.abs()))
    }

    pub fn real_point(&self) -> Vec<f64> {
        self.point.iter().map(|z| z.re).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpairs {
    /// All `d` eigenvalues.
    pub eigenvalues: Vec<Complex64>,
    /// Toric candidates, sorted by eigenvalue (real part, then imaginary).
    pub candidates: Vec<Candidate>,
    /// Eigenvectors discarded because a C2 denominator entry vanished.
    pub non_toric: usize,
}

/// Diagonal similarity `D^-1 A D` with power-of-two entries that brings row
/// and column norms close (Parlett and Reinsch). Returns the diagonal of `D`;
/// an eigenvector `v` of the balanced matrix gives `D v` for the original.
pub fn balance(a: &mut [f64], n: usize) -> Vec<f64> {
    const RADIX: f64 = 2.0;
    let mut scaling = vec![1.0; n];
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                c += a[j * n + i].abs();
                r += a[i * n + j].abs();
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let total = c + r;
            let mut f = 1.0;
            let (mut c2, mut r2) = (c, r);
            while c2 < r2 / RADIX {
                f *= RADIX;
                c2 *= RADIX;
                r2 /= RADIX;
            }
            while c2 >= r2 * RADIX {
                f /= RADIX;
                c2 /= RADIX;
                r2 *= RADIX;
            }
            if (c2 + r2) < 0.95 * total {
                converged = false;
                scaling[i] *= f;
                for j in 0..n {
                    a[i * n + j] /= f;
                    a[j * n + i] *= f;
                }
            }
        }
    }
    scaling
}

pub fn eigen_roots(pencil: &ActionPencil) -> Result<Eigenpairs, SolveError> {
    let d = pencil.dim;
    if pencil.t0.iter().any(|v| !v.is_finite()) {
        return Err(SolveError::NonFinite);
    }
    let mut balanced = pencil.t0.clone();
    let scaling = balance(&mut balanced, d);
    let t0 = Mat::<f64>::from_fn(d, d, |i, j| balanced[i * d + j]);
    let evd = t0.eigen().map_err(|e| SolveError::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut eigenvalues = Vec::with_capacity(d);
    let mut candidates = Vec::with_capacity(d);
    let mut non_toric = 0;
    for k in 0..d {
        let lambda = s[k];
        eigenvalues.push(lambda);
        let vec: Vec<Complex64> = (0..d).map(|i| u[(i, k)] * scaling[i]).collect();
        let scale = vec.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        // the pair with the largest denominator entry is the most accurate
        let point: Option<Vec<Complex64>> = pencil
            .ratio_pairs
            .iter()
            .map(|pairs| {
                let c = pairs
                    .iter()
                    .max_by(|a, b| vec[a.denominator].norm().total_cmp(&vec[b.denominator].norm()))?;
                let den = vec[c.denominator];
                (den.norm() >= NON_TORIC_TOLERANCE * scale).then(|| vec[c.numerator] / den)
            })
            .collect();
        match point {
            Some(point) => candidates.push(Candidate {
                eigenvalue: lambda,
                point,
                residual: f64::INFINITY,
            }),
            None => non_toric += 1,
        }
    }
    candidates.sort_by(|a, b| {
        a.eigenvalue
            .re
            .total_cmp(&b.eigenvalue.re)
            .then(a.eigenvalue.im.total_cmp(&b.eigenvalue.im))
    });
    Ok(Eigenpairs {
        eigenvalues,
        candidates,
        non_toric,
    })
}

fn eval_complex(m: &Monomial, point: &[Complex64]) -> Complex64 {
    m.exponents()
        .iter()
        .zip(point)
        .fold(Complex64::new(1.0, 0.0), |acc, (&e, &z)| acc * z.powi(e as i32))
}

/// Residual scorer: the instance Macaulay matrix with unit-length rows.
#[derive(Debug, Clone)]
pub struct ResidualScorer {
    support: Vec<Monomial>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl ResidualScorer {
    pub fn new(system: &LaurentSystem<f64>) -> Self {
        let support = system.support();
        let rows = system
            .polys()
            .iter()
            .map(|f| {
                let norm = f.terms().iter().map(|(_, c)| c * c).sum::<f64>().sqrt();
                f.terms()
                    .iter()
                    .map(|(m, c)| (support.position(m).expect("own support"), c / norm))
                    .collect()
            })
            .collect();
        Self {
            support: support.into_vec(),
            rows,
        }
    }

    /// `ε = ‖M Z‖ / ‖Z‖` with `Z` the support evaluated at `point`;
    /// infinite when some monomial does not evaluate to a finite number.
    pub fn residual(&self, point: &[Complex64]) -> f64 {
        let z: Vec<Complex64> = self.support.iter().map(|m| eval_complex(m, point)).collect();
        if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return f64::INFINITY;
        }
        let zn = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if zn == 0.0 || !zn.is_finite() {
            return f64::INFINITY;
        }
        let sq: f64 = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(j, c)| z[j] * c).sum::<Complex64>().norm_sqr())
            .sum();
        sq.sqrt() / zn
    }
}

/// `½ log10 Σ ε²` over the `d0` smallest residuals; `None` if `d0 = 0` or
/// there are fewer than `d0` values.
pub fn aggregate_error(residuals: &[f64], d0: usize) -> Option<f64> {
    if d0 == 0 || residuals.len() < d0 {
        return None;
    }
    let mut r = residuals.to_vec();
    r.sort_by(f64::total_cmp);
    Some(0.5 * r[..d0].iter().map(|e| e * e).sum::<f64>().log10())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub eigenvalues: Vec<Complex64>,
    /// Scored candidates in eigenvalue order.
    pub candidates: Vec<Candidate>,
    pub non_toric: usize,
    pub aggregate: Option<f64>,
}

impl RootSet {
    /// Candidates with `ε <= threshold`.
    pub fn accepted(&self, threshold: f64) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(move |c| c.residual <= threshold)
    }

    pub fn real_roots(&self, threshold: f64) -> impl Iterator<Item = &Candidate> {
        self.accepted(threshold).filter(|c| c.is_real())
    }
}

/// Scores every candidate against the instance and computes the aggregate
/// over the `d0` smallest residuals.
pub fn residual_error(system: &LaurentSystem<f64>, pairs: Eigenpairs, d0: usize) -> RootSet {
    let scorer = ResidualScorer::new(system);
    let mut candidates = pairs.candidates;
    for c in &mut candidates {
        c.residual = scorer.residual(&c.point);
    }
    let residuals: Vec<f64> = candidates.iter().map(|c| c.residual).collect();
    RootSet {
        eigenvalues: pairs.eigenvalues,
        aggregate: aggregate_error(&residuals, d0),
        candidates,
        non_toric: pairs.non_toric,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Number of true roots for the aggregate error; defaults to `#B`.
    pub expected_roots: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { expected_roots: None }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub roots: RootSet,
    /// Filling the template matrix.
    pub fill_time: Duration,
    /// Reduction, eigendecomposition and read-out.
    pub online_time: Duration,
}

/// A template prepared for repeated solving.
#[derive(Debug, Clone)]
pub struct OnlineSolver {
    template: Template,
    layout: FillLayout,
}

impl OnlineSolver {
    pub fn new(template: Template) -> Result<Self, SolveError> {
        let layout = FillLayout::new(&template)?;
        Ok(Self { template, layout })
    }

    pub fn template(&self) -> &Template {
        &self.template
    }

    pub fn fill(&self, system: &LaurentSystem<f64>) -> Result<NumericMatrix, SolveError> {
        check_structure(&self.template, system)?;
        Ok(fill(&self.layout, self.template.num_cols(), system))
    }

    pub fn solve(&self, system: &LaurentSystem<f64>, options: SolveOptions) -> Result<Solution, SolveError> {
        let t = Instant::now();
        let m = self.fill(system)?;
        let fill_time = t.elapsed();
        let t = Instant::now();
        let pencil = reduce_and_assemble(m, &self.template)?;
        let pairs = eigen_roots(&pencil)?;
        let online_time = t.elapsed();
        let d0 = options.expected_roots.unwrap_or(pencil.dim);
        Ok(Solution {
            roots: residual_error(system, pairs, d0),
            fill_time,
            online_time,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::laurent::LaurentPoly;
    use crate::template::{prune_excessive_columns, template_test, ShiftTuple, ShiftedSystem};

    fn m(e: &[i32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    fn toy_real(scale: [f64; 2]) -> LaurentSystem<f64> {
        let f1 = LaurentPoly::new(
            2,
            vec![(m(&[-1, 2]), 2.0), (m(&[1, 0]), -7.0), (m(&[0, 1]), -4.0), (m(&[0, 0]), 9.0)],
        )
        .unwrap();
        let f2 = LaurentPoly::new(
            2,
            vec![(m(&[2, -1]), 2.0), (m(&[0, 1]), -7.0), (m(&[1, 0]), -4.0), (m(&[0, 0]), 9.0)],
        )
        .unwrap();
        let f1 = f1.map_coeffs(|c| c * scale[0]);
        let f2 = f2.map_coeffs(|c| c * scale[1]);
        LaurentSystem::new(2, vec![f1, f2]).unwrap()
    }

    fn toy_template() -> Template {
        let f = PrimeField::default();
        let sys = toy_real([1.0, 1.0]).map_coeffs(|c| {
            let v = c as i64;
            crate::field::Field::from_i64(&f, v)
        });
        let shifts = ShiftTuple::new(vec![
            [m(&[0, 0])].into_iter().collect(),
            [m(&[0, 0]), m(&[-1, 0])].into_iter().collect(),
        ]);
        let shifted = ShiftedSystem::expand(f, &sys, &shifts).unwrap();
        let t = template_test(&shifted, &m(&[1, -1])).unwrap().unwrap();
        prune_excessive_columns(&sys, &t).unwrap()
    }

    #[test]
    fn toy_action_matrix() {
        let t = toy_template();
        let mat = instantiate(&t, &toy_real([1.0, 1.0])).unwrap();
        assert_eq!((mat.rows(), mat.cols()), (3, 7));
        let p = reduce_and_assemble(mat, &t).unwrap();
        let want = [
            [-1.5, 1.5, 1.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [7.0 / 9.0, 4.0 / 9.0, -2.0 / 9.0, 0.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((p.t0_entry(i, j) - want[i][j]).abs() < 1e-12, "T0[{i}][{j}]");
            }
        }
    }

    #[test]
    fn toy_roots() {
        let t = toy_template();
        let solver = OnlineSolver::new(t).unwrap();
        let sol = solver
            .solve(&toy_real([1.0, 1.0]), SolveOptions { expected_roots: Some(3) })
            .unwrap();
        let rs = &sol.roots;
        assert_eq!(rs.eigenvalues.len(), 4);
        let roots: Vec<Vec<f64>> = rs.real_roots(RESIDUAL_THRESHOLD).map(|c| c.real_point()).collect();
        assert_eq!(roots.len(), 3);
        // sorted by a(p) = x/y: -2, -1/2, 1
        let want = [[2.0, -1.0], [-1.0, 2.0], [1.0, 1.0]];
        for (r, w) in roots.iter().zip(want) {
            assert!((r[0] - w[0]).abs() < 1e-10 && (r[1] - w[1]).abs() < 1e-10, "{r:?}");
        }
        assert_eq!(rs.candidates.len() - rs.accepted(RESIDUAL_THRESHOLD).count() + rs.non_toric, 1);
        assert!(rs.aggregate.unwrap() <= -10.0);
    }

    #[test]
    fn all_zero_matrix_is_degenerate() {
        let t = toy_template();
        let z = NumericMatrix::zeros(3, 7);
        assert!(matches!(reduce_and_assemble(z, &t), Err(SolveError::Degenerate { .. })));
    }

    #[test]
    fn structure_mismatch() {
        let t = toy_template();
        let f1 = LaurentPoly::new(2, vec![(m(&[1, 0]), 1.0), (m(&[0, 0]), -1.0)]).unwrap();
        let sys = LaurentSystem::new(2, vec![f1.clone(), f1]).unwrap();
        assert!(matches!(instantiate(&t, &sys), Err(SolveError::Mismatch(_))));
    }

    #[test]
    fn perturbed_root_has_larger_residual() {
        let sys = toy_real([1.0, 1.0]);
        let scorer = ResidualScorer::new(&sys);
        let c = |x: f64, y: f64| vec![Complex64::new(x, 0.0), Complex64::new(y, 0.0)];
        let good = [c(1.0, 1.0), c(-1.0, 2.0), c(2.0, -1.0)].map(|p| scorer.residual(&p));
        let bad = scorer.residual(&c(1.1, 1.0));
        assert!(good.iter().all(|&e| e < 1e-14 && e < bad));
    }

    #[test]
    fn aggregate_edge_cases() {
        assert_eq!(aggregate_error(&[1e-3], 0), None);
        assert_eq!(aggregate_error(&[1e-3], 2), None);
        let a = aggregate_error(&[1.0, 1e-3, 1e-4], 1).unwrap();
        assert!((a + 4.0).abs() < 1e-12);
    }
}
