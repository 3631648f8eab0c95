//! State algebra: simple states, compounds `(X, X')` and scaling `λX`.
//!
//! Coordinates are stored extensively, so scaling is a pure data transform:
//! it multiplies the amount and every coordinate by the same factor. No
//! physics lives here; in particular identical parts of a compound are never
//! merged, and the equivalence of `((1-λ)X, λX)` with `X` is left to oracles.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SystemId(pub String);

impl SystemId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Description of one kind of simple system.
///
/// The first coordinate is always the energy `U` in joules; the rest are work
/// coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub id: SystemId,
    pub substance: String,
    pub coordinate_names: Vec<String>,
    pub amount_unit: String,
    pub comparability_class: String,
}

impl SystemSpec {
    pub fn validate(&self) -> Result<()> {
        match self.coordinate_names.first() {
            None => {
                return Err(Error::Domain(format!(
                    "system {} has no coordinates",
                    self.id
                )))
            }
            Some(first) if !first.starts_with('U') => {
                return Err(Error::Domain(format!(
                    "system {}: first coordinate must be the energy, got `{first}`",
                    self.id
                )))
            }
            _ => {}
        }
        if self.comparability_class.is_empty() {
            return Err(Error::Domain(format!(
                "system {} has an empty class key",
                self.id
            )));
        }
        Ok(())
    }
}

/// A scaled point of one system's state space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleState {
    pub system: SystemId,
    pub amount: f64,
    pub coords: Vec<f64>,
}

impl SimpleState {
    pub fn new(system: impl Into<String>, amount: f64, coords: Vec<f64>) -> Result<Self> {
        let state = Self {
            system: SystemId::new(system),
            amount,
            coords,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amount > 0.0 && self.amount.is_finite()) {
            return Err(Error::Domain(format!(
                "amount must be positive and finite, got {}",
                self.amount
            )));
        }
        if self.coords.is_empty() {
            return Err(Error::Domain("state has no coordinates".into()));
        }
        if let Some(c) = self.coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite coordinate {c}")));
        }
        Ok(())
    }

    /// Energy coordinate (extensive).
    pub fn energy(&self) -> f64 {
        self.coords[0]
    }

    /// Coordinates per unit amount.
    pub fn specific_coords(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c / self.amount).collect()
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            system: self.system.clone(),
            amount: self.amount * lambda,
            coords: self.coords.iter().map(|c| c * lambda).collect(),
        }
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.system
            .cmp(&other.system)
            .then_with(|| self.amount.total_cmp(&other.amount))
            .then_with(|| self.coords.len().cmp(&other.coords.len()))
            .then_with(|| {
                self.coords
                    .iter()
                    .zip(&other.coords)
                    .map(|(a, b)| a.total_cmp(b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

/// A nonempty multiset of simple states standing side by side.
///
/// Equality ignores part order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CompoundState {
    parts: Vec<SimpleState>,
}

impl CompoundState {
    pub fn new(parts: Vec<SimpleState>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Domain(
                "compound state needs at least one part".into(),
            ));
        }
        for p in &parts {
            p.validate()?;
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[SimpleState] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<SimpleState> {
        self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of part amounts belonging to `system`.
    pub fn amount_of(&self, system: &SystemId) -> f64 {
        self.parts
            .iter()
            .filter(|p| &p.system == system)
            .map(|p| p.amount)
            .sum()
    }

    pub fn total_amount(&self) -> f64 {
        self.parts.iter().map(|p| p.amount).sum()
    }

    /// Distinct systems present, sorted.
    pub fn systems(&self) -> Vec<SystemId> {
        let mut ids: Vec<SystemId> = self.parts.iter().map(|p| p.system.clone()).collect();
        ids.sort();
        ids.dedup();
        ids
    }

    fn sorted_parts(&self) -> Vec<&SimpleState> {
        let mut v: Vec<&SimpleState> = self.parts.iter().collect();
        v.sort_by(|a, b| a.canonical_cmp(b));
        v
    }
}

impl From<SimpleState> for CompoundState {
    fn from(s: SimpleState) -> Self {
        Self { parts: vec![s] }
    }
}

impl PartialEq for CompoundState {
    fn eq(&self, other: &Self) -> bool {
        self.parts.len() == other.parts.len()
            && self
                .sorted_parts()
                .iter()
                .zip(other.sorted_parts())
                .all(|(a, b)| *a == b)
    }
}

/// `(a, b)`: multiset union of parts.
pub fn compose(a: &CompoundState, b: &CompoundState) -> CompoundState {
    let mut parts = Vec::with_capacity(a.len() + b.len());
    parts.extend_from_slice(&a.parts);
    parts.extend_from_slice(&b.parts);
    CompoundState { parts }
}

/// `λx` for `λ > 0`.
pub fn scale(x: &CompoundState, lambda: f64) -> Result<CompoundState> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "scale factor must be positive, got {lambda}"
        )));
    }
    Ok(CompoundState {
        parts: x.parts.iter().map(|p| p.scaled(lambda)).collect(),
    })
}
