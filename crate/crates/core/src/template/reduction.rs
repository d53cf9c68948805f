use super::test::template_test;
use super::{ShiftedSystem, Template, TemplateError};
use crate::laurent::{LaurentSystem, Monomial};

/// One tentative deletion in the reduction pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    pub poly: usize,
    pub shift: Monomial,
    pub accepted: bool,
    /// `#B` of the tentative template, `None` when the test failed.
    pub basis: Option<usize>,
    /// Row count of the template in force after this step.
    pub rows: usize,
    /// Best `#B` so far, after this step.
    pub bound: usize,
}

#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub template: Template,
    pub audit: Vec<AuditEntry>,
}

/// Single greedy pass over all shifts: drop `m` from `A_j` whenever the
/// template test still succeeds with a basis no larger than the best so far.
/// A shift set is never emptied.
pub fn template_reduction(system: &LaurentSystem<u32>, template: &Template) -> Result<ReductionResult, TemplateError> {
    let field = template.field;
    let action = &template.action;
    let mut current = template.clone();
    let mut bound = current.basis().len();
    let mut audit = Vec::new();

    let order: Vec<(usize, Monomial)> = template
        .shifts
        .sets()
        .iter()
        .enumerate()
        .flat_map(|(j, set)| set.iter().map(move |m| (j, m.clone())))
        .collect();

    for (j, m) in order {
        if current.shifts.sets()[j].len() <= 1 {
            audit.push(AuditEntry {
                poly: j,
                shift: m,
                accepted: false,
                basis: None,
                rows: current.num_rows(),
                bound,
            });
            continue;
        }
        let shifts = current.shifts.without(j, &m);
        let shifted = ShiftedSystem::expand(field, system, &shifts)?;
        let outcome = template_test(&shifted, action)?;
        let basis = outcome.as_ref().map(|t| t.basis().len());
        let accepted = matches!(basis, Some(b) if b <= bound);
        if accepted {
            let t = outcome.expect("accepted outcome");
            bound = t.basis().len();
            current = t;
        }
        audit.push(AuditEntry {
            poly: j,
            shift: m,
            accepted,
            basis,
            rows: current.num_rows(),
            bound,
        });
    }

    let shifted = ShiftedSystem::expand(field, system, &current.shifts)?;
    let template = template_test(&shifted, action)?
        .ok_or_else(|| TemplateError::Mismatch("reduced shift tuple no longer yields a template".into()))?;
    Ok(ReductionResult { template, audit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, PrimeField};
    use crate::laurent::LaurentPoly;
    use crate::template::{template_finder, FinderOptions, ShiftTuple};

    fn m(e: &[i32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    fn toy(f: &PrimeField) -> LaurentSystem<u32> {
        let c = |v: i64| f.from_i64(v);
        let f1 = LaurentPoly::new(
            2,
            vec![(m(&[-1, 2]), c(2)), (m(&[1, 0]), c(-7)), (m(&[0, 1]), c(-4)), (m(&[0, 0]), c(9))],
        )
        .unwrap();
        let f2 = LaurentPoly::new(
            2,
            vec![(m(&[2, -1]), c(2)), (m(&[0, 1]), c(-7)), (m(&[1, 0]), c(-4)), (m(&[0, 0]), c(9))],
        )
        .unwrap();
        LaurentSystem::new(2, vec![f1, f2]).unwrap()
    }

    #[test]
    fn toy_reduction_keeps_basis_bound() {
        let f = PrimeField::default();
        let sys = toy(&f);
        let found = template_finder(f, &sys, &FinderOptions::default()).unwrap().unwrap();
        let before = found.template.basis().len();
        let red = template_reduction(&sys, &found.template).unwrap();
        assert!(red.template.basis().len() <= before);
        assert!(red.template.num_rows() <= found.template.num_rows());
        let mut rows = found.template.num_rows();
        for e in &red.audit {
            assert!(e.rows <= rows);
            rows = e.rows;
            if e.accepted {
                assert!(e.basis.unwrap() <= before);
            }
        }
    }

    #[test]
    fn minimal_tuple_is_left_alone() {
        let f = PrimeField::default();
        let sys = toy(&f);
        let shifts = ShiftTuple::new(vec![
            [m(&[0, 0])].into_iter().collect(),
            [m(&[0, 0]), m(&[-1, 0])].into_iter().collect(),
        ]);
        let shifted = ShiftedSystem::expand(f, &sys, &shifts).unwrap();
        let t = template_test(&shifted, &m(&[1, -1])).unwrap().unwrap();
        let red = template_reduction(&sys, &t).unwrap();
        assert_eq!(red.template.shifts, shifts);
        assert!(red.audit.iter().all(|e| !e.accepted));
    }
}
