use serde::Serialize;

use super::meter::EntropyMeter;
use crate::error::Result;
use crate::sampler::{instance_rng, StateSampler};
use crate::state::{compose, scale, CompoundState};

const ADDITIVITY_STREAM: u64 = 0xADD;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditivityReport {
    pub pairs: usize,
    /// max |S(X,X') - S(X) - S(X')|
    pub max_additivity_deviation: f64,
    /// max |S(λX) - λS(X)| over the sampled λ
    pub max_extensivity_deviation: f64,
    /// 3 · lambda_tol
    pub bound: f64,
    pub passed: bool,
}

/// Samples `n` pairs `(X, X')` and checks additivity over compounds and
/// extensivity for each `λ` in `lambdas`.
pub fn additivity_check(
    meter: &EntropyMeter,
    sampler: &dyn StateSampler,
    seed: u64,
    n: usize,
    lambdas: &[f64],
) -> Result<AdditivityReport> {
    let mut add_dev: f64 = 0.0;
    let mut ext_dev: f64 = 0.0;
    for i in 0..n as u64 {
        let mut rng = instance_rng(seed, ADDITIVITY_STREAM, i);
        let x = sampler.sample(&mut rng);
        let xp = sampler.sample(&mut rng);
        let sx = meter.entropy(&x)?;
        let sxp = meter.entropy(&xp)?;
        let sxx = meter.entropy(&compose(&x, &xp))?;
        add_dev = add_dev.max((sxx - sx - sxp).abs());
        for &l in lambdas {
            let sl = meter.entropy(&scale(&x, l)?)?;
            ext_dev = ext_dev.max((sl - l * sx).abs());
        }
    }
    let bound = 3.0 * meter.lambda_tol();
    Ok(AdditivityReport {
        pairs: n,
        max_additivity_deviation: add_dev,
        max_extensivity_deviation: ext_dev,
        bound,
        passed: add_dev <= bound && ext_dev <= bound,
    })
}

/// The two directions of the interpolation identity at the ends of the final
/// bracket, and the residual of `S(X) = (1-λ)S(X0) + λS(X1)` with the
/// reference entropies measured by the meter itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpolationCheck {
    pub lambda_hat: f64,
    /// `((1-λ)X0, λX1) ≺ X` at the lower end.
    pub forward_at_lower: bool,
    /// `X ≺ ((1-λ)X0, λX1)` at the upper end.
    pub backward_at_upper: bool,
    pub bracket_width: f64,
    pub residual: f64,
}

pub fn interpolation_check(meter: &EntropyMeter, x: &CompoundState) -> Result<InterpolationCheck> {
    let found = meter.search(x)?;
    let s0 = meter.entropy(meter.x0())?;
    let s1 = meter.entropy(meter.x1())?;
    let forward_at_lower = meter.predicate(x, found.lower)?;
    let (lhs, rhs) = meter.sides(x, found.upper)?;
    let backward_at_upper = meter.oracle().precedes(&rhs, &lhs)?;
    let l = found.value;
    Ok(InterpolationCheck {
        lambda_hat: l,
        forward_at_lower,
        backward_at_upper,
        bracket_width: found.upper - found.lower,
        residual: (found.value - ((1.0 - l) * s0 + l * s1)).abs(),
    })
}
