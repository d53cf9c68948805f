//! Named problem builders: each knows its generic structure over GF(p) and
//! how to draw real trial instances with ground truth.

use std::sync::Arc;

use super::h13f::{self, h13f_system};
use super::problem::{ProblemDef, ProblemError};
use super::triangulation::{self, synth_triangulation_scene, triangulation_system, Scene};
use crate::field::PrimeField;
use crate::laurent::LaurentSystem;

pub const TOY_PROBLEM: &str = include_str!("../../corpus/toy.problem");
pub const TOY_INSTANCE: &str = include_str!("../../corpus/toy.instance");
pub const TRIANGULATION_PROBLEM: &str = include_str!("../../corpus/triangulation.problem");
pub const H13F_PROBLEM: &str = include_str!("../../corpus/h13f.problem");

pub const TOY_ROOTS: [[f64; 2]; 3] = [[1.0, 1.0], [-1.0, 2.0], [2.0, -1.0]];

/// What a trial is checked against.
#[derive(Debug, Clone)]
pub enum GroundTruth {
    /// Every listed root must be recovered; the error is the worst distance
    /// from a true root to its nearest real candidate.
    Roots(Vec<Vec<f64>>),
    /// Triangulation: the minimum-cost real candidate against the true point.
    Scene(Box<Scene>),
}

impl GroundTruth {
    pub fn placement_error(&self, reals: &[Vec<f64>]) -> Option<f64> {
        match self {
            GroundTruth::Roots(roots) => roots
                .iter()
                .map(|r| {
                    reals
                        .iter()
                        .map(|c| c.iter().zip(r).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
                        .min_by(f64::total_cmp)
                })
                .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e))),
            GroundTruth::Scene(scene) => scene.placement_error(reals.iter().map(|v| v.as_slice())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trial {
    pub system: LaurentSystem<f64>,
    pub truth: Option<GroundTruth>,
}

/// Pass criteria for `bench`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub median_aggregate: f64,
    pub placement: f64,
    pub placement_rate: f64,
}

pub trait ProblemBuilder: Send + Sync {
    fn name(&self) -> &'static str;
    fn document(&self) -> &'static str;
    fn variables(&self) -> Vec<String>;
    fn expected_roots(&self) -> Option<usize>;
    /// Search strategy used by `bench` unless overridden.
    fn strategy(&self) -> &'static str {
        "first"
    }
    fn thresholds(&self) -> Thresholds;
    fn gf_system(&self, field: PrimeField, seed: u64) -> Result<LaurentSystem<u32>, ProblemError>;
    fn trial(&self, seed: u64) -> Result<Trial, ProblemError>;
}

struct Toy;

impl ProblemBuilder for Toy {
    fn name(&self) -> &'static str {
        "toy"
    }
    fn document(&self) -> &'static str {
        TOY_PROBLEM
    }
    fn variables(&self) -> Vec<String> {
        vec!["x".into(), "y".into()]
    }
    fn expected_roots(&self) -> Option<usize> {
        Some(3)
    }
    fn thresholds(&self) -> Thresholds {
        Thresholds {
            median_aggregate: -10.0,
            placement: 1e-8,
            placement_rate: 1.0,
        }
    }
    fn gf_system(&self, field: PrimeField, _seed: u64) -> Result<LaurentSystem<u32>, ProblemError> {
        ProblemDef::parse(TOY_PROBLEM)?.gf_system(field)
    }
    /// The fixed instance, each polynomial scaled by a seeded factor in
    /// `[1e-3, 1e3]`.
    fn trial(&self, seed: u64) -> Result<Trial, ProblemError> {
        use rand::{Rng, SeedableRng};
        let (_, system) = super::instance::parse_instance(TOY_INSTANCE)?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let polys = system
            .polys()
            .iter()
            .map(|p| {
                let s = 10f64.powf(rng.gen_range(-3.0..3.0));
                p.map_coeffs(|c| c * s)
            })
            .collect();
        Ok(Trial {
            system: LaurentSystem::new(system.arity(), polys)?,
            truth: Some(GroundTruth::Roots(TOY_ROOTS.iter().map(|r| r.to_vec()).collect())),
        })
    }
}

struct Triangulation;

impl ProblemBuilder for Triangulation {
    fn name(&self) -> &'static str {
        "triangulation"
    }
    fn document(&self) -> &'static str {
        TRIANGULATION_PROBLEM
    }
    fn variables(&self) -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }
    fn expected_roots(&self) -> Option<usize> {
        Some(47)
    }
    fn strategy(&self) -> &'static str {
        "best"
    }
    fn thresholds(&self) -> Thresholds {
        Thresholds {
            median_aggregate: -6.0,
            placement: 1e-4,
            placement_rate: 0.95,
        }
    }
    fn gf_system(&self, field: PrimeField, seed: u64) -> Result<LaurentSystem<u32>, ProblemError> {
        Ok(triangulation_system(&field, &triangulation::random_data_gf(field, seed)))
    }
    fn trial(&self, seed: u64) -> Result<Trial, ProblemError> {
        let scene = synth_triangulation_scene(seed);
        let system = scene.system().map_err(|e| ProblemError::Invalid(e.to_string()))?;
        Ok(Trial {
            system,
            truth: Some(GroundTruth::Scene(Box::new(scene))),
        })
    }
}

struct H13f {
    polys: usize,
}

impl ProblemBuilder for H13f {
    fn name(&self) -> &'static str {
        if self.polys == 21 {
            "h13f"
        } else {
            "h13f-20"
        }
    }
    fn document(&self) -> &'static str {
        H13F_PROBLEM
    }
    fn variables(&self) -> Vec<String> {
        h13f::VARIABLES.iter().map(|s| s.to_string()).collect()
    }
    fn expected_roots(&self) -> Option<usize> {
        None
    }
    fn thresholds(&self) -> Thresholds {
        Thresholds {
            median_aggregate: -6.0,
            placement: 1e-4,
            placement_rate: 0.95,
        }
    }
    fn gf_system(&self, field: PrimeField, seed: u64) -> Result<LaurentSystem<u32>, ProblemError> {
        Ok(h13f_system(&field, &h13f::random_data_gf(field, seed), self.polys))
    }
    fn trial(&self, seed: u64) -> Result<Trial, ProblemError> {
        let scene = h13f::synth_h13f_scene(seed);
        Ok(Trial {
            system: scene.system(self.polys),
            truth: Some(GroundTruth::Roots(vec![scene.truth.to_vec()])),
        })
    }
}

pub fn builders() -> Vec<Arc<dyn ProblemBuilder>> {
    vec![Arc::new(Toy), Arc::new(Triangulation), Arc::new(H13f { polys: 21 }), Arc::new(H13f { polys: 20 })]
}

pub fn builder_by_name(name: &str) -> Option<Arc<dyn ProblemBuilder>> {
    builders().into_iter().find(|b| b.name() == name)
}

/// A problem document bound to its coefficient source.
#[derive(Clone)]
pub struct Problem {
    pub def: ProblemDef,
    pub builder: Option<Arc<dyn ProblemBuilder>>,
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("def", &self.def)
            .field("builder", &self.builder.as_ref().map(|b| b.name()))
            .finish()
    }
}

impl Problem {
    pub fn resolve(def: ProblemDef) -> Result<Self, ProblemError> {
        let builder = match &def.builder {
            None => None,
            Some(tag) => {
                let b = builder_by_name(tag).ok_or_else(|| ProblemError::Invalid(format!("unknown builder `{tag}`")))?;
                if b.variables() != def.vars {
                    return Err(ProblemError::Invalid(format!(
                        "builder `{tag}` uses variables {}",
                        b.variables().join(" ")
                    )));
                }
                Some(b)
            }
        };
        Ok(Self { def, builder })
    }

    pub fn parse(text: &str) -> Result<Self, ProblemError> {
        Self::resolve(ProblemDef::parse(text)?)
    }

    /// A bundled entry name or the text of a problem document.
    pub fn from_entry(name: &str) -> Option<Self> {
        builder_by_name(name).map(|b| {
            let mut def = ProblemDef::parse(b.document()).expect("bundled documents parse");
            if def.builder.is_some() {
                def.builder = Some(name.to_string());
            }
            Problem { def, builder: Some(b) }
        })
    }

    pub fn gf_system(&self, field: PrimeField) -> Result<LaurentSystem<u32>, ProblemError> {
        match &self.builder {
            Some(b) => b.gf_system(field, self.def.seed),
            None => self.def.gf_system(field),
        }
    }

    pub fn expected_roots(&self) -> Option<usize> {
        self.def.roots.or_else(|| self.builder.as_ref().and_then(|b| b.expected_roots()))
    }

    /// A real instance for trial `seed`; without a builder only the
    /// document's own exact coefficients are available.
    pub fn trial(&self, seed: u64) -> Result<Trial, ProblemError> {
        match &self.builder {
            Some(b) => b.trial(seed),
            None => match self.def.real_system() {
                Some(system) => Ok(Trial { system: system?, truth: None }),
                None => Err(ProblemError::Invalid("generic coefficients have no real instance".into())),
            },
        }
    }
}
