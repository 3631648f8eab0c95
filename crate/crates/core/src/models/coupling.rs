//! Lifts a relation on per-unit simple states to compound states.
//!
//! `X ≺ Y` holds when the parts of `X` can be cut and re-matched onto the
//! parts of `Y` so that every matched piece is related per unit amount. With
//! equal totals, such a transport plan exists iff Hall's condition holds:
//! every subset `T` of `Y`'s parts needs at least `amount(T)` of supply from
//! the parts of `X` that precede some member of `T`.
//!
//! The lifted relation is reflexive, transitive, compatible with composition
//! and scaling, satisfies split/recombine, and is stable, whenever the base
//! relation is a preorder.

use crate::error::{Error, Result};
use crate::oracle::{amount_class_key, require_same_amounts, Decision, RELATIVE_TOL};
use crate::state::{CompoundState, SimpleState, SystemId};

pub const MAX_COUPLING_PARTS: usize = 16;

/// Preorder on per-unit states of one system.
pub trait SpecificRelation: Send + Sync {
    fn system(&self) -> &SystemId;

    /// Reject states outside the model's domain.
    fn check(&self, x: &SimpleState) -> Result<()>;

    fn precedes_specific(&self, x: &[f64], y: &[f64]) -> bool;
}

pub fn coupling_decide<R: SpecificRelation + ?Sized>(
    relation: &R,
    x: &CompoundState,
    y: &CompoundState,
) -> Result<Decision> {
    for p in x.parts().iter().chain(y.parts()) {
        if &p.system != relation.system() {
            return Err(Error::UnknownSystem(p.system.to_string()));
        }
        relation.check(p)?;
    }
    require_same_amounts(x, y)?;
    if x.len() > MAX_COUPLING_PARTS || y.len() > MAX_COUPLING_PARTS {
        return Err(Error::Domain(format!(
            "coupling decision supports at most {MAX_COUPLING_PARTS} parts per side"
        )));
    }

    let xs: Vec<Vec<f64>> = x.parts().iter().map(SimpleState::specific_coords).collect();
    let ys: Vec<Vec<f64>> = y.parts().iter().map(SimpleState::specific_coords).collect();
    // preceded_by[j]: bitmask of x-parts that precede y-part j
    let preceded_by: Vec<u32> = ys
        .iter()
        .map(|yj| {
            xs.iter()
                .enumerate()
                .filter(|(_, xi)| relation.precedes_specific(xi, yj))
                .fold(0u32, |m, (i, _)| m | (1 << i))
        })
        .collect();

    let total = x.total_amount();
    let slack = RELATIVE_TOL * total;
    for subset in 1u32..(1 << ys.len()) {
        let mut demand = 0.0;
        let mut sources = 0u32;
        for (j, part) in y.parts().iter().enumerate() {
            if subset & (1 << j) != 0 {
                demand += part.amount;
                sources |= preceded_by[j];
            }
        }
        let supply: f64 = x
            .parts()
            .iter()
            .enumerate()
            .filter(|(i, _)| sources & (1 << i) != 0)
            .map(|(_, p)| p.amount)
            .sum();
        if demand > supply + slack {
            return Ok(Decision::NotPrecedes);
        }
    }
    Ok(Decision::Precedes)
}

pub fn coupling_class_of<R: SpecificRelation + ?Sized>(
    relation: &R,
    x: &CompoundState,
) -> Result<String> {
    for p in x.parts() {
        if &p.system != relation.system() {
            return Err(Error::UnknownSystem(p.system.to_string()));
        }
        relation.check(p)?;
    }
    Ok(amount_class_key(x))
}
