//! The generate → reduce → prune pipeline and repeated trials over a
//! corpus problem.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use super::problem::ProblemError;
use super::registry::{Problem, Thresholds};
use crate::field::PrimeField;
use crate::laurent::LaurentSystem;
use crate::numeric::{OnlineSolver, SolveError, SolveOptions};
use crate::template::{
    prune_excessive_columns, template_finder, template_reduction, AuditEntry, FinderOptions, SearchStrategy,
    Template, TemplateError,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("no template within {0} shift expansions")]
    NotFound(usize),
}

/// Finder followed by pruning.
pub fn generate(
    field: PrimeField,
    system: &LaurentSystem<u32>,
    max_iterations: usize,
    strategy: Arc<dyn SearchStrategy>,
) -> Result<Template, PipelineError> {
    let options = FinderOptions {
        max_iterations,
        strategy,
    };
    let found = template_finder(field, system, &options)?.ok_or(PipelineError::NotFound(max_iterations))?;
    Ok(prune_excessive_columns(system, &found.template)?)
}

/// Reduction followed by pruning.
pub fn reduce(system: &LaurentSystem<u32>, template: &Template) -> Result<(Template, Vec<AuditEntry>), PipelineError> {
    let reduced = template_reduction(system, template)?;
    Ok((prune_excessive_columns(system, &reduced.template)?, reduced.audit))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub aggregate: Option<f64>,
    pub placement: Option<f64>,
    pub online_ms: f64,
    pub fill_ms: f64,
    pub error: Option<String>,
}

impl TrialRecord {
    pub const CSV_HEADER: &'static str = "trial,aggregate,placement,online_ms,fill_ms";

    pub fn csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| format!("{v:.6e}")).unwrap_or_default();
        format!(
            "{},{},{},{:.4},{:.4}",
            self.trial,
            opt(self.aggregate),
            opt(self.placement),
            self.online_ms,
            self.fill_ms
        )
    }
}

/// Solves trials `seeds` in parallel.
pub fn run_trials(solver: &OnlineSolver, problem: &Problem, seeds: std::ops::Range<u64>) -> Vec<TrialRecord> {
    let options = SolveOptions {
        expected_roots: problem.expected_roots(),
    };
    seeds
        .into_par_iter()
        .map(|seed| {
            let failed = |e: String| TrialRecord {
                trial: seed,
                aggregate: None,
                placement: None,
                online_ms: 0.0,
                fill_ms: 0.0,
                error: Some(e),
            };
            let trial = match problem.trial(seed) {
                Ok(t) => t,
                Err(e) => return failed(e.to_string()),
            };
            match solver.solve(&trial.system, options) {
                Ok(sol) => {
                    let reals: Vec<Vec<f64>> = sol
                        .roots
                        .candidates
                        .iter()
                        .filter(|c| c.is_real())
                        .map(|c| c.real_point())
                        .collect();
                    TrialRecord {
                        trial: seed,
                        aggregate: sol.roots.aggregate,
                        placement: trial.truth.and_then(|t| t.placement_error(&reals)),
                        online_ms: sol.online_time.as_secs_f64() * 1e3,
                        fill_ms: sol.fill_time.as_secs_f64() * 1e3,
                        error: None,
                    }
                }
                Err(e) => failed(e.to_string()),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub trials: usize,
    pub failures: usize,
    pub median_aggregate: Option<f64>,
    /// Fraction of all trials with placement error below the threshold;
    /// `None` without ground truth.
    pub placement_rate: Option<f64>,
    pub median_online_ms: f64,
    pub median_fill_ms: f64,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    Some(v[v.len() / 2])
}

/// Failed trials count as infinitely bad.
pub fn summarize(records: &[TrialRecord], placement_bound: f64) -> Summary {
    let aggregates = records.iter().map(|r| r.aggregate.unwrap_or(f64::INFINITY)).collect();
    let has_truth = records.iter().any(|r| r.placement.is_some());
    let placed = records.iter().filter(|r| r.placement.is_some_and(|e| e < placement_bound)).count();
    let ok: Vec<&TrialRecord> = records.iter().filter(|r| r.error.is_none()).collect();
    Summary {
        trials: records.len(),
        failures: records.len() - ok.len(),
        median_aggregate: median(aggregates),
        placement_rate: has_truth.then(|| placed as f64 / records.len().max(1) as f64),
        median_online_ms: median(ok.iter().map(|r| r.online_ms).collect()).unwrap_or(0.0),
        median_fill_ms: median(ok.iter().map(|r| r.fill_ms).collect()).unwrap_or(0.0),
    }
}

impl Summary {
    pub fn passes(&self, t: &Thresholds) -> bool {
        self.median_aggregate.is_some_and(|m| m <= t.median_aggregate)
            && self.placement_rate.map_or(true, |r| r >= t.placement_rate)
    }
}
