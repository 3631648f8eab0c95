//! Order-theoretic second law.
//!
//! An [`AccessibilityOracle`] decides adiabatic accessibility `X ≺ Y` between
//! compound states. On top of it this crate provides:
//!
//! * sampled property suites for the accessibility axioms and the comparison
//!   hypothesis ([`axioms`], [`comparison`]);
//! * model worlds with analytic ground truth ([`models`]);
//! * entropy reconstruction from the relation alone via `λ_max`
//!   ([`entropy`]);
//! * a decision procedure for whether a finite relation admits an additive
//!   entropy ([`existence`]);
//! * temperature, concavity, path integrals and irreversibility witnesses
//!   derived from entropy ([`derived`]).

pub mod axioms;
pub mod comparison;
pub mod derived;
pub mod entropy;
pub mod error;
pub mod existence;
pub mod models;
pub mod oracle;
pub mod sampler;
pub mod state;

pub use error::{Error, Result};
pub use oracle::{AccessibilityOracle, Decision};
pub use state::{compose, scale, CompoundState, SimpleState, SystemId, SystemSpec};
