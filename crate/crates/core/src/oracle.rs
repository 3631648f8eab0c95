//! The accessibility relation `X ≺ Y` as a pluggable decision procedure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::CompoundState;

/// Relative tolerance for floating-point comparisons inside oracles.
/// Ties resolve to `Precedes`.
pub const RELATIVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    Precedes,
    NotPrecedes,
}

impl Decision {
    pub fn holds(self) -> bool {
        matches!(self, Decision::Precedes)
    }
}

impl From<bool> for Decision {
    fn from(b: bool) -> Self {
        if b {
            Decision::Precedes
        } else {
            Decision::NotPrecedes
        }
    }
}

/// Deterministic decision procedure for adiabatic accessibility.
///
/// Implementations must be pure: the same pair always gets the same answer,
/// `decide(x, x)` is `Precedes`, and within one comparability class the
/// oracle never abstains. States from different classes are a
/// [`Error::Class`] error rather than a `NotPrecedes`.
pub trait AccessibilityOracle: Send + Sync {
    fn name(&self) -> &str;

    fn decide(&self, x: &CompoundState, y: &CompoundState) -> Result<Decision>;

    fn class_of(&self, x: &CompoundState) -> Result<String>;

    fn precedes(&self, x: &CompoundState, y: &CompoundState) -> Result<bool> {
        Ok(self.decide(x, y)?.holds())
    }
}

/// `a ≤ b` up to `RELATIVE_TOL · scale`.
pub fn le_with_tol(a: f64, b: f64, scale: f64) -> bool {
    a <= b + RELATIVE_TOL * scale.abs()
}

pub fn amounts_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= RELATIVE_TOL * a.abs().max(b.abs())
}

/// Class key for mass-conserving worlds: the total amount per system.
pub fn amount_class_key(x: &CompoundState) -> String {
    x.systems()
        .iter()
        .map(|id| format!("{id}={:.9}", x.amount_of(id)))
        .collect::<Vec<_>>()
        .join(",")
}

/// Errors with [`Error::Class`] unless both compounds carry the same amount
/// of every system.
pub fn require_same_amounts(x: &CompoundState, y: &CompoundState) -> Result<()> {
    let xs = x.systems();
    let ys = y.systems();
    let mismatch = xs != ys
        || xs
            .iter()
            .any(|id| !amounts_match(x.amount_of(id), y.amount_of(id)));
    if mismatch {
        return Err(Error::Class(format!(
            "{} vs {}",
            amount_class_key(x),
            amount_class_key(y)
        )));
    }
    Ok(())
}
