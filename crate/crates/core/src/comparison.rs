//! Comparison hypothesis: within a class, every pair is related one way or
//! the other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::AccessibilityOracle;
use crate::sampler::{instance_rng, StateSampler};
use crate::state::CompoundState;

const COMPARISON_STREAM: u64 = 0xC0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub class: String,
    pub pairs_tested: usize,
    pub comparable_fraction: f64,
    pub incomparable_witnesses: Vec<(CompoundState, CompoundState)>,
}

/// Checks explicit pairs; all must lie in one comparability class.
pub fn check_comparison_pairs(
    oracle: &dyn AccessibilityOracle,
    pairs: &[(CompoundState, CompoundState)],
) -> Result<ComparisonReport> {
    let Some((first, _)) = pairs.first() else {
        return Err(Error::Domain("no pairs to compare".into()));
    };
    let class = oracle.class_of(first)?;
    let mut witnesses = Vec::new();
    for (x, y) in pairs {
        for s in [x, y] {
            let c = oracle.class_of(s)?;
            if c != class {
                return Err(Error::Class(format!("{c} sampled into class {class}")));
            }
        }
        if !(oracle.precedes(x, y)? || oracle.precedes(y, x)?) {
            witnesses.push((x.clone(), y.clone()));
        }
    }
    let comparable = pairs.len() - witnesses.len();
    Ok(ComparisonReport {
        class,
        pairs_tested: pairs.len(),
        comparable_fraction: comparable as f64 / pairs.len() as f64,
        incomparable_witnesses: witnesses,
    })
}

/// Samples `n` pairs `(x, y)` with `y` drawn from the class of `x`.
pub fn sample_class_pairs(
    sampler: &dyn StateSampler,
    seed: u64,
    n: usize,
) -> Vec<(CompoundState, CompoundState)> {
    (0..n as u64)
        .map(|i| {
            let mut rng = instance_rng(seed, COMPARISON_STREAM, i);
            let x = sampler.sample(&mut rng);
            let y = sampler.sample_in_class(&mut rng, &x);
            (x, y)
        })
        .collect()
}

pub fn check_comparison(
    oracle: &dyn AccessibilityOracle,
    class_sampler: &dyn StateSampler,
    seed: u64,
    n: usize,
) -> Result<ComparisonReport> {
    check_comparison_pairs(oracle, &sample_class_pairs(class_sampler, seed, n))
}
