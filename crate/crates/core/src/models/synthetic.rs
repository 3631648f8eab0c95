//! Degenerate oracles for exercising failure paths.

use crate::error::Result;
use crate::oracle::{amount_class_key, require_same_amounts, AccessibilityOracle, Decision};
use crate::state::CompoundState;

/// Answers `NotPrecedes` to everything, including `x ≺ x`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeverPrecedes;

impl AccessibilityOracle for NeverPrecedes {
    fn name(&self) -> &str {
        "never-precedes"
    }

    fn decide(&self, _: &CompoundState, _: &CompoundState) -> Result<Decision> {
        Ok(Decision::NotPrecedes)
    }

    fn class_of(&self, x: &CompoundState) -> Result<String> {
        Ok(amount_class_key(x))
    }
}

/// Every state of a class is accessible from every other: no irreversibility.
#[derive(Debug, Clone, Copy, Default)]
pub struct MutuallyAccessible;

impl AccessibilityOracle for MutuallyAccessible {
    fn name(&self) -> &str {
        "mutually-accessible"
    }

    fn decide(&self, x: &CompoundState, y: &CompoundState) -> Result<Decision> {
        require_same_amounts(x, y)?;
        Ok(Decision::Precedes)
    }

    fn class_of(&self, x: &CompoundState) -> Result<String> {
        Ok(amount_class_key(x))
    }
}
