//! Does a finite accessibility relation admit an additive entropy?
//!
//! The relation is closed under transitivity, then the encoding conditions
//! become a linear feasibility problem in one unknown per atom.

mod closure;
mod feasibility;
mod relation;
mod samples;
pub mod simplex;

pub use closure::transitive_closure;
pub use feasibility::{
    entropy_feasible, incomparable_pairs, rank_correlation, verify_assignment, Certificate,
    FeasibilityResult, BOUND_PER_MARGIN,
};
pub use relation::{Atom, FiniteRelation, Part, RelState};
pub use samples::{relation_from_oracle, rubbing_sample_states, sampled_states};
