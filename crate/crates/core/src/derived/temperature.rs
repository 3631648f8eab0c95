use std::io::Write;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampler::{instance_rng, StateSampler};
use crate::state::SimpleState;

const CONCAVITY_STREAM: u64 = 0xC0C;

/// Default central-difference step, relative to `U`.
pub const DEFAULT_RELATIVE_DU: f64 = 1e-4;

fn with_energy(x: &SimpleState, u: f64) -> SimpleState {
    let mut y = x.clone();
    y.coords[0] = u;
    y
}

/// `T = unit_scale · 2dU / (S(U+dU) - S(U-dU))` at fixed work coordinates.
///
/// `unit_scale` is the number of entropy units per J/K: 1 for an analytic
/// entropy in J/K, the fitted slope for a meter in reference units.
pub fn temperature<F>(entropy: F, x: &SimpleState, du: f64, unit_scale: f64) -> Result<f64>
where
    F: Fn(&SimpleState) -> Result<f64>,
{
    let u = x.energy();
    if !(du > 0.0 && du < u.abs()) {
        return Err(Error::Domain(format!(
            "need 0 < dU < |U|, got dU = {du} at U = {u}"
        )));
    }
    let ds = entropy(&with_energy(x, u + du))? - entropy(&with_energy(x, u - du))?;
    if !(ds > 0.0) {
        return Err(Error::NonMonotoneEntropy(ds));
    }
    Ok(unit_scale * 2.0 * du / ds)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcavityReport {
    pub triples: usize,
    pub violations: usize,
    /// Largest `λS(X) + (1-λ)S(Z) - S(Y)` seen; negative when strictly concave.
    pub worst_excess: f64,
    pub tol: f64,
}

/// Convex combination of two single-part states of one system and amount.
pub fn convex_combination(x: &SimpleState, z: &SimpleState, lambda: f64) -> Result<SimpleState> {
    if x.system != z.system || x.amount != z.amount || x.coords.len() != z.coords.len() {
        return Err(Error::Class(
            "convex combination needs one system and amount".into(),
        ));
    }
    let coords = x
        .coords
        .iter()
        .zip(&z.coords)
        .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
        .collect();
    SimpleState::new(x.system.as_str(), x.amount, coords)
}

/// Counts violations of `S(Y) ≥ λS(X) + (1-λ)S(Z) - tol` with `Y` the convex
/// combination of sampled `X`, `Z` and `λ` uniform in `(0, 1)`.
pub fn concavity_check<F>(
    entropy: F,
    sampler: &dyn StateSampler,
    seed: u64,
    n: usize,
    tol: f64,
) -> Result<ConcavityReport>
where
    F: Fn(&SimpleState) -> Result<f64>,
{
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n as u64 {
        let mut rng = instance_rng(seed, CONCAVITY_STREAM, i);
        let x = sampler.sample(&mut rng);
        let z = sampler.sample_in_class(&mut rng, &x);
        let lambda: f64 = rng.gen_range(0.0..1.0);
        let (x, z) = match (x.parts(), z.parts()) {
            ([x], [z]) => (x, z),
            _ => return Err(Error::Domain("concavity needs single-part states".into())),
        };
        let y = convex_combination(x, z, lambda)?;
        let excess = lambda * entropy(x)? + (1.0 - lambda) * entropy(z)? - entropy(&y)?;
        worst = worst.max(excess);
        if excess > tol {
            violations += 1;
        }
    }
    Ok(ConcavityReport {
        triples: n,
        violations,
        worst_excess: worst,
        tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemperatureRow {
    pub state_id: String,
    pub state: SimpleState,
    pub temperature_k: f64,
}

/// CSV `state_id,amount,<coordinate names>,T_K`.
pub fn write_temperature_csv<W: Write>(
    rows: &[TemperatureRow],
    coordinate_names: &[String],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["state_id".to_string(), "amount".to_string()];
    header.extend(coordinate_names.iter().cloned());
    header.push("T_K".into());
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.state_id.clone(), r.state.amount.to_string()];
        rec.extend(r.state.coords.iter().map(f64::to_string));
        rec.push(r.temperature_k.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
