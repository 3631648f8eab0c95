use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{AccessibilityOracle, Decision};
use crate::state::{CompoundState, SimpleState};

/// Energy increments `k · step` for `k = 1..=max_steps`, applied to the
/// energy coordinate of each part in turn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub step: f64,
    pub max_steps: usize,
}

impl Default for SearchBox {
    fn default() -> Self {
        Self {
            step: 0.5,
            max_steps: 20,
        }
    }
}

/// A `y` with `x ≺ y` and `y ⊀ x`.
pub fn irreversibility_witness(
    oracle: &dyn AccessibilityOracle,
    x: &CompoundState,
    search: SearchBox,
) -> Result<CompoundState> {
    if !(search.step > 0.0 && search.step.is_finite()) {
        return Err(Error::Domain(format!(
            "step must be positive, got {}",
            search.step
        )));
    }
    oracle.class_of(x)?;
    let mut probes = 0;
    for k in 1..=search.max_steps {
        for part in 0..x.len() {
            let parts: Vec<SimpleState> = x
                .parts()
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let mut p = p.clone();
                    if i == part {
                        p.coords[0] += k as f64 * search.step;
                    }
                    p
                })
                .collect();
            let y = CompoundState::new(parts)?;
            probes += 1;
            // probes can leave the model's domain; those are not witnesses
            let forward = oracle.decide(x, &y);
            let backward = oracle.decide(&y, x);
            if let (Ok(Decision::Precedes), Ok(Decision::NotPrecedes)) = (forward, backward) {
                return Ok(y);
            }
        }
    }
    Err(Error::ExhaustedSearch { probes })
}
