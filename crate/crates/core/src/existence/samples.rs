//! Finite relations generated from model oracles.

use super::relation::{Atom, FiniteRelation, RelState};
use crate::error::Result;
use crate::models::TwoBodyState;
use crate::oracle::AccessibilityOracle;
use crate::sampler::{instance_rng, StateSampler};
use crate::state::SimpleState;

const SAMPLED_RELATION_STREAM: u64 = 0x5E1;

/// One atom and one state per simple state. Every same-class ordered pair is
/// decided by the oracle and recorded as asserted or absent.
pub fn relation_from_oracle(
    oracle: &dyn AccessibilityOracle,
    states: &[(String, SimpleState)],
) -> Result<FiniteRelation> {
    let compounds: Vec<_> = states.iter().map(|(_, s)| s.clone().into()).collect();
    let keys = compounds
        .iter()
        .map(|c| oracle.class_of(c))
        .collect::<Result<Vec<_>>>()?;

    let mut precedes = Vec::new();
    let mut absent = Vec::new();
    for (i, (xi, _)) in states.iter().enumerate() {
        for (j, (yj, _)) in states.iter().enumerate() {
            if keys[i] != keys[j] {
                continue;
            }
            let edge = (xi.clone(), yj.clone());
            if oracle.decide(&compounds[i], &compounds[j])?.holds() {
                precedes.push(edge);
            } else {
                absent.push(edge);
            }
        }
    }

    let mut class_keys: Vec<&String> = keys.iter().collect();
    class_keys.sort();
    class_keys.dedup();
    let classes = class_keys
        .into_iter()
        .map(|k| {
            states
                .iter()
                .zip(&keys)
                .filter(|(_, key)| *key == k)
                .map(|((id, _), _)| id.clone())
                .collect()
        })
        .collect();

    Ok(FiniteRelation {
        atoms: states
            .iter()
            .map(|(id, s)| Atom {
                id: id.clone(),
                amount: Some(s.amount),
            })
            .collect(),
        states: states
            .iter()
            .map(|(id, _)| RelState::atom(id.clone(), id.clone()))
            .collect(),
        precedes,
        absent,
        classes,
    })
}

/// The 20 two-body states `U1 ∈ {0.5, 1, 1.5, 2}`, `U2 ∈ {3, 4, 4.5, 5, 5.5}`.
/// Contains the incomparable pair `(1, 4)`, `(0.5, 5.5)`.
pub fn rubbing_sample_states() -> Vec<(String, SimpleState)> {
    let mut out = Vec::new();
    for u1 in [0.5, 1.0, 1.5, 2.0] {
        for u2 in [3.0, 4.0, 4.5, 5.0, 5.5] {
            out.push((
                format!("r{u1}_{u2}"),
                TwoBodyState::new(u1, u2).to_simple(1.0),
            ));
        }
    }
    out
}

/// `n` single-part states, ids `s00`, `s01`, ...; parts beyond the first are
/// dropped.
pub fn sampled_states(
    sampler: &dyn StateSampler,
    seed: u64,
    n: usize,
) -> Vec<(String, SimpleState)> {
    (0..n)
        .map(|i| {
            let mut rng = instance_rng(seed, SAMPLED_RELATION_STREAM, i as u64);
            let s = sampler.sample(&mut rng).into_parts().remove(0);
            (format!("s{i:02}"), s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::existence::{
        entropy_feasible, rank_correlation, transitive_closure, verify_assignment,
    };
    use crate::models::gas::gas_entropy;
    use crate::models::{GasOracle, GasSampler, GasSpec, RubbingOracle};

    #[test]
    fn rubbing_relation_is_closed_and_infeasible() {
        let rel =
            relation_from_oracle(&RubbingOracle::default(), &rubbing_sample_states()).unwrap();
        assert_eq!(rel.states.len(), 20);
        let closed = transitive_closure(&rel).unwrap();
        // rubbing edges are already transitive
        let mut a = closed.precedes.clone();
        let mut b = rel.precedes.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);

        let r = entropy_feasible(&closed, 1.0).unwrap();
        assert!(!r.feasible);
        let json = serde_json::to_string(&r.certificate).unwrap();
        assert!(json.contains("contradiction"));
    }

    #[test]
    fn gas_relation_is_feasible_and_rank_faithful() {
        let spec = GasSpec::monatomic();
        let states = sampled_states(&GasSampler::new(spec).with_amount(1.0), 0, 12);
        let rel = relation_from_oracle(&GasOracle::default(), &states).unwrap();
        let rel = transitive_closure(&rel).unwrap();
        let r = entropy_feasible(&rel, 1.0).unwrap();
        assert!(r.feasible);
        assert!(verify_assignment(&rel, &r.assignment, 1.0).unwrap());

        let analytic: Vec<f64> = states
            .iter()
            .map(|(_, s)| gas_entropy(&spec, s).unwrap())
            .collect();
        let recovered: Vec<f64> = states.iter().map(|(id, _)| r.assignment[id]).collect();
        assert_eq!(rank_correlation(&analytic, &recovered), 1.0);

        // the analytic entropy itself encodes the relation, up to scale
        let min_gap = {
            let mut v = analytic.clone();
            v.sort_by(f64::total_cmp);
            v.windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min)
        };
        let scaled = states
            .iter()
            .zip(&analytic)
            .map(|((id, _), s)| (id.clone(), s / min_gap))
            .collect();
        assert!(verify_assignment(&rel, &scaled, 1.0).unwrap());
    }
}
