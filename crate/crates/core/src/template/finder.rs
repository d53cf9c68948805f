use std::sync::Arc;

use rayon::prelude::*;

use super::prune::prune_unchecked;
use super::test::template_test;
use super::{ShiftTuple, ShiftedSystem, Template, TemplateError};
use crate::field::PrimeField;
use crate::laurent::{LaurentSystem, Monomial};

/// Picks a template for one shifted system among the candidate actions.
pub trait SearchStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn select(
        &self,
        system: &LaurentSystem<u32>,
        shifted: &ShiftedSystem,
        candidates: &[Monomial],
    ) -> Result<Option<Template>, TemplateError>;
}

/// Earliest candidate (in the fixed order) that passes the template test.
/// Candidates are tested in parallel; the result does not depend on timing.
#[derive(Debug, Default, Clone, Copy)]
pub struct FirstHit;

impl SearchStrategy for FirstHit {
    fn name(&self) -> &'static str {
        "first"
    }

    fn select(
        &self,
        _system: &LaurentSystem<u32>,
        shifted: &ShiftedSystem,
        candidates: &[Monomial],
    ) -> Result<Option<Template>, TemplateError> {
        candidates
            .par_iter()
            .map(|a| template_test(shifted, a))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            })
            .unwrap_or(Ok(None))
    }
}

/// Tests every candidate and keeps the smallest pruned template, ordered by
/// rows·cols, then #B, then candidate position.
#[derive(Debug, Default, Clone, Copy)]
pub struct Exhaustive;

impl SearchStrategy for Exhaustive {
    fn name(&self) -> &'static str {
        "best"
    }

    fn select(
        &self,
        system: &LaurentSystem<u32>,
        shifted: &ShiftedSystem,
        candidates: &[Monomial],
    ) -> Result<Option<Template>, TemplateError> {
        let found: Vec<Option<(usize, usize, Template)>> = candidates
            .par_iter()
            .map(|a| {
                let Some(t) = template_test(shifted, a)? else {
                    return Ok(None);
                };
                let pruned = prune_unchecked(system, &t)?;
                let (r, c) = pruned.size();
                Ok(Some((r * c, pruned.basis().len(), t)))
            })
            .collect::<Result<_, TemplateError>>()?;
        Ok(found
            .into_iter()
            .flatten()
            .enumerate()
            .min_by_key(|(i, (size, b, _))| (*size, *b, *i))
            .map(|(_, (_, _, t))| t))
    }
}

pub fn search_strategies() -> Vec<Arc<dyn SearchStrategy>> {
    vec![Arc::new(FirstHit), Arc::new(Exhaustive)]
}

pub fn strategy_by_name(name: &str) -> Option<Arc<dyn SearchStrategy>> {
    search_strategies().into_iter().find(|s| s.name() == name)
}

/// `x_1^-1, .., x_k^-1, x_1, .., x_k`.
pub fn action_candidates(arity: usize) -> Vec<Monomial> {
    [-1, 1]
        .into_iter()
        .flat_map(|p| (0..arity).map(move |v| Monomial::var(arity, v, p).expect("unit exponent")))
        .collect()
}

#[derive(Clone)]
pub struct FinderOptions {
    pub max_iterations: usize,
    pub strategy: Arc<dyn SearchStrategy>,
}

impl Default for FinderOptions {
    fn default() -> Self {
        Self {
            max_iterations: 10,
            strategy: Arc::new(FirstHit),
        }
    }
}

impl std::fmt::Debug for FinderOptions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinderOptions")
            .field("max_iterations", &self.max_iterations)
            .field("strategy", &self.strategy.name())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub struct FinderResult {
    pub template: Template,
    /// 1-based iteration of the shift expansion that succeeded.
    pub iterations: usize,
}

/// Grows the shift tuple from `({1}, .., {1})` by single-variable ±1 steps
/// until some action monomial yields a template, for at most
/// `max_iterations` shift tuples.
pub fn template_finder(
    field: PrimeField,
    system: &LaurentSystem<u32>,
    options: &FinderOptions,
) -> Result<Option<FinderResult>, TemplateError> {
    let arity = system.arity();
    let candidates = action_candidates(arity);
    let mut shifts = ShiftTuple::trivial(system.len(), arity);
    for iteration in 1..=options.max_iterations {
        let shifted = ShiftedSystem::expand(field, system, &shifts)?;
        if let Some(template) = options.strategy.select(system, &shifted, &candidates)? {
            return Ok(Some(FinderResult {
                template,
                iterations: iteration,
            }));
        }
        if iteration < options.max_iterations {
            shifts = shifts.expand(arity)?;
        }
    }
    Ok(None)
}
