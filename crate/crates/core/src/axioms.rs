//! Sampled property suites for the accessibility axioms.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::oracle::AccessibilityOracle;
use crate::sampler::{instance_rng, StateSampler};
use crate::state::{compose, scale, CompoundState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Reflexivity,
    Transitivity,
    Composition,
    Scaling,
    SplitRecombine,
    Stability,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Reflexivity,
        Axiom::Transitivity,
        Axiom::Composition,
        Axiom::Scaling,
        Axiom::SplitRecombine,
        Axiom::Stability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Reflexivity => "reflexivity",
            Axiom::Transitivity => "transitivity",
            Axiom::Composition => "composition",
            Axiom::Scaling => "scaling",
            Axiom::SplitRecombine => "split-recombine",
            Axiom::Stability => "stability",
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

#[derive(Debug, Clone)]
pub struct AxiomConfig {
    pub seed: u64,
    pub samples: usize,
    /// Scale factors tried by the scaling axiom.
    pub lambdas: Vec<f64>,
    /// Decreasing ε ladder standing in for "arbitrarily small ε".
    pub epsilons: Vec<f64>,
    pub parallel: bool,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 1000,
            lambdas: vec![0.25, 0.5, 2.0, 3.0],
            epsilons: (1..=6).map(|k| 10f64.powi(-k)).collect(),
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub instance: u64,
    pub states: Vec<CompoundState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub instance: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub instances_tested: usize,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<Skipped>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceOutcome {
    Held,
    Violated(Vec<CompoundState>),
    Skipped(String),
}

/// Evaluates one sampled instance; replayable from `(cfg.seed, index)`.
pub fn check_instance(
    axiom: Axiom,
    oracle: &dyn AccessibilityOracle,
    sampler: &dyn StateSampler,
    cfg: &AxiomConfig,
    index: u64,
) -> InstanceOutcome {
    match evaluate(axiom, oracle, sampler, cfg, index) {
        Ok(None) => InstanceOutcome::Held,
        Ok(Some(states)) => InstanceOutcome::Violated(states),
        Err(e) => InstanceOutcome::Skipped(e.to_string()),
    }
}

fn evaluate(
    axiom: Axiom,
    oracle: &dyn AccessibilityOracle,
    sampler: &dyn StateSampler,
    cfg: &AxiomConfig,
    index: u64,
) -> Result<Option<Vec<CompoundState>>> {
    let mut rng = instance_rng(cfg.seed, axiom.stream(), index);
    let rng = &mut rng;
    let violated = |bad: bool, states: Vec<CompoundState>| Ok(bad.then_some(states));
    match axiom {
        Axiom::Reflexivity => {
            let x = sampler.sample(rng);
            violated(!oracle.precedes(&x, &x)?, vec![x])
        }
        Axiom::Transitivity => {
            let x = sampler.sample(rng);
            let y = sampler.sample_near(rng, &x);
            let z = sampler.sample_near(rng, &y);
            let premise = oracle.precedes(&x, &y)? && oracle.precedes(&y, &z)?;
            violated(premise && !oracle.precedes(&x, &z)?, vec![x, y, z])
        }
        Axiom::Composition => {
            let x = sampler.sample(rng);
            let y = sampler.sample_near(rng, &x);
            let z = sampler.sample(rng);
            let w = sampler.sample_near(rng, &z);
            let premise = oracle.precedes(&x, &y)? && oracle.precedes(&z, &w)?;
            let bad = premise && !oracle.precedes(&compose(&x, &z), &compose(&y, &w))?;
            violated(bad, vec![x, y, z, w])
        }
        Axiom::Scaling => {
            let x = sampler.sample(rng);
            let y = sampler.sample_near(rng, &x);
            let lambda = cfg.lambdas[rng.gen_range(0..cfg.lambdas.len())];
            let (lx, ly) = (scale(&x, lambda)?, scale(&y, lambda)?);
            let bad = oracle.precedes(&x, &y)? && !oracle.precedes(&lx, &ly)?;
            violated(bad, vec![x, y, lx, ly])
        }
        Axiom::SplitRecombine => {
            let x = sampler.sample(rng);
            let lambda: f64 = rng.gen_range(0.01..0.99);
            let split = compose(&scale(&x, 1.0 - lambda)?, &scale(&x, lambda)?);
            let bad = !oracle.precedes(&x, &split)? || !oracle.precedes(&split, &x)?;
            violated(bad, vec![x, split])
        }
        Axiom::Stability => {
            let x = sampler.sample(rng);
            let y = sampler.sample_near(rng, &x);
            let z = sampler.sample(rng);
            let w = sampler.sample_in_class(rng, &z);
            let mut premise = true;
            for &eps in &cfg.epsilons {
                let lhs = compose(&x, &scale(&z, eps)?);
                let rhs = compose(&y, &scale(&w, eps)?);
                if !oracle.precedes(&lhs, &rhs)? {
                    premise = false;
                    break;
                }
            }
            violated(premise && !oracle.precedes(&x, &y)?, vec![x, y, z, w])
        }
    }
}

pub fn run_axiom(
    axiom: Axiom,
    oracle: &dyn AccessibilityOracle,
    sampler: &dyn StateSampler,
    cfg: &AxiomConfig,
) -> AxiomReport {
    let run = |i: usize| check_instance(axiom, oracle, sampler, cfg, i as u64);
    let outcomes: Vec<InstanceOutcome> = if cfg.parallel {
        (0..cfg.samples).into_par_iter().map(run).collect()
    } else {
        (0..cfg.samples).map(run).collect()
    };

    let mut witnesses = Vec::new();
    let mut skipped = Vec::new();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            InstanceOutcome::Held => {}
            InstanceOutcome::Violated(states) => witnesses.push(Witness {
                instance: i as u64,
                states,
            }),
            InstanceOutcome::Skipped(reason) => skipped.push(Skipped {
                instance: i as u64,
                reason,
            }),
        }
    }
    AxiomReport {
        axiom: axiom.name().to_string(),
        instances_tested: cfg.samples - skipped.len(),
        passed: witnesses.is_empty(),
        witnesses,
        skipped,
    }
}

/// All six axioms, in a fixed order.
pub fn run_axiom_suite(
    oracle: &dyn AccessibilityOracle,
    sampler: &dyn StateSampler,
    cfg: &AxiomConfig,
) -> Vec<AxiomReport> {
    Axiom::ALL
        .iter()
        .map(|&a| run_axiom(a, oracle, sampler, cfg))
        .collect()
}
