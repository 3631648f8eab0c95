use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{AccessibilityOracle, Decision};
use crate::state::{compose, scale, CompoundState};

pub const DEFAULT_LAMBDA_TOL: f64 = 1e-9;
pub const DEFAULT_BRACKET_LIMIT: f64 = 1_048_576.0;

/// A strict reference pair `X0 ≺≺ X1` with `S(X0) = 0`, `S(X1) = 1` unit.
///
/// For a state `X` holding `t` times the reference amount, the entropy is the
/// largest `λ` with `((t-λ)X0, λX1) ≺ X`. Outside `[0, t]` the negatively
/// scaled reference moves to the other side of the relation:
///
/// * `λ < 0`: `(t-λ)X0 ≺ (X, -λ·X1)`
/// * `λ > t`: `λX1 ≺ (X, (λ-t)X0)`
///
/// A factor of exactly zero drops the corresponding part.
#[derive(Clone)]
pub struct EntropyMeter {
    oracle: Arc<dyn AccessibilityOracle>,
    x0: CompoundState,
    x1: CompoundState,
    lambda_tol: f64,
    bracket_limit: f64,
}

impl std::fmt::Debug for EntropyMeter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EntropyMeter")
            .field("oracle", &self.oracle.name())
            .field("x0", &self.x0)
            .field("x1", &self.x1)
            .field("lambda_tol", &self.lambda_tol)
            .field("bracket_limit", &self.bracket_limit)
            .finish()
    }
}

/// Validates the reference pair and returns a meter.
pub fn build_meter(
    oracle: Arc<dyn AccessibilityOracle>,
    x0: CompoundState,
    x1: CompoundState,
    lambda_tol: f64,
) -> Result<EntropyMeter> {
    if !(lambda_tol > 0.0 && lambda_tol.is_finite()) {
        return Err(Error::Domain(format!(
            "lambda_tol must be positive, got {lambda_tol}"
        )));
    }
    let c0 = oracle.class_of(&x0)?;
    let c1 = oracle.class_of(&x1)?;
    if c0 != c1 {
        return Err(Error::Class(format!("reference states in {c0} and {c1}")));
    }
    match (oracle.decide(&x0, &x1)?, oracle.decide(&x1, &x0)?) {
        (Decision::Precedes, Decision::NotPrecedes) => {}
        (Decision::Precedes, Decision::Precedes) => return Err(Error::DegenerateReferences),
        (Decision::NotPrecedes, Decision::Precedes) => return Err(Error::ReversedReferences),
        (Decision::NotPrecedes, Decision::NotPrecedes) => {
            return Err(Error::IncomparableReferences)
        }
    }
    Ok(EntropyMeter {
        oracle,
        x0,
        x1,
        lambda_tol,
        bracket_limit: DEFAULT_BRACKET_LIMIT,
    })
}

/// Outcome of one `λ_max` search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaSearch {
    /// Midpoint of the final bracket.
    pub value: f64,
    /// Largest `λ` seen to satisfy the predicate.
    pub lower: f64,
    /// Smallest `λ` seen to fail it.
    pub upper: f64,
    pub expansions: u32,
    pub bisection_steps: u32,
    /// Width of the bracket when bisection started.
    pub initial_width: f64,
}

fn weighted(terms: &[(f64, &CompoundState)]) -> Result<CompoundState> {
    let mut parts = Vec::new();
    for &(w, x) in terms {
        if w != 0.0 {
            parts.extend(scale(x, w)?.into_parts());
        }
    }
    CompoundState::new(parts)
}

struct Probe<'a> {
    meter: &'a EntropyMeter,
    x: &'a CompoundState,
    t: f64,
    max_true: f64,
    min_false: f64,
}

impl Probe<'_> {
    fn eval(&mut self, lambda: f64) -> Result<bool> {
        let holds = self.meter.predicate_with_amount(self.x, self.t, lambda)?;
        if holds {
            self.max_true = self.max_true.max(lambda);
        } else {
            self.min_false = self.min_false.min(lambda);
        }
        if self.max_true > self.min_false {
            return Err(Error::OracleViolation {
                oracle: self.meter.oracle.name().to_string(),
                holds_at: self.max_true,
                fails_at: self.min_false,
            });
        }
        Ok(holds)
    }
}

impl EntropyMeter {
    pub fn with_bracket_limit(mut self, limit: f64) -> Self {
        self.bracket_limit = limit;
        self
    }

    pub fn oracle(&self) -> &Arc<dyn AccessibilityOracle> {
        &self.oracle
    }

    pub fn x0(&self) -> &CompoundState {
        &self.x0
    }

    pub fn x1(&self) -> &CompoundState {
        &self.x1
    }

    pub fn lambda_tol(&self) -> f64 {
        self.lambda_tol
    }

    pub fn bracket_limit(&self) -> f64 {
        self.bracket_limit
    }

    /// Amount of `x` in units of the reference amount.
    pub fn amount_ratio(&self, x: &CompoundState) -> f64 {
        x.total_amount() / self.x0.total_amount()
    }

    /// The `λ_max` predicate at `λ`, with role interchange outside `[0, t]`.
    pub fn predicate(&self, x: &CompoundState, lambda: f64) -> Result<bool> {
        self.predicate_with_amount(x, self.amount_ratio(x), lambda)
    }

    /// `(R(λ), X)` so that the predicate is `R(λ) ≺ X`, with the negatively
    /// scaled reference moved to the right-hand side outside `[0, t]`.
    pub fn sides(&self, x: &CompoundState, lambda: f64) -> Result<(CompoundState, CompoundState)> {
        self.sides_with_amount(x, self.amount_ratio(x), lambda)
    }

    fn sides_with_amount(
        &self,
        x: &CompoundState,
        t: f64,
        lambda: f64,
    ) -> Result<(CompoundState, CompoundState)> {
        Ok(if lambda < 0.0 {
            (
                weighted(&[(t - lambda, &self.x0)])?,
                compose(x, &scale(&self.x1, -lambda)?),
            )
        } else if lambda > t {
            (
                weighted(&[(lambda, &self.x1)])?,
                compose(x, &scale(&self.x0, lambda - t)?),
            )
        } else {
            (
                weighted(&[(t - lambda, &self.x0), (lambda, &self.x1)])?,
                x.clone(),
            )
        })
    }

    fn predicate_with_amount(&self, x: &CompoundState, t: f64, lambda: f64) -> Result<bool> {
        let (lhs, rhs) = self.sides_with_amount(x, t, lambda)?;
        self.oracle.precedes(&lhs, &rhs)
    }

    /// Locates `λ_max` by geometric bracket expansion from `[0, 1]` followed
    /// by bisection down to `lambda_tol`.
    pub fn search(&self, x: &CompoundState) -> Result<LambdaSearch> {
        self.oracle.class_of(x)?;
        let t = self.amount_ratio(x);
        let mut probe = Probe {
            meter: self,
            x,
            t,
            max_true: f64::NEG_INFINITY,
            min_false: f64::INFINITY,
        };

        let (mut lo, mut hi) = (0.0, 1.0);
        let p_lo = probe.eval(lo)?;
        let p_hi = probe.eval(hi)?;
        let mut width = hi - lo;
        let mut expansions = 0;
        if !p_lo {
            loop {
                hi = lo;
                lo -= width;
                width *= 2.0;
                expansions += 1;
                if -lo > self.bracket_limit {
                    return Err(Error::UnboundedEntropy {
                        limit: self.bracket_limit,
                    });
                }
                if probe.eval(lo)? {
                    break;
                }
            }
        } else if p_hi {
            loop {
                lo = hi;
                hi += width;
                width *= 2.0;
                expansions += 1;
                if hi > self.bracket_limit {
                    return Err(Error::UnboundedEntropy {
                        limit: self.bracket_limit,
                    });
                }
                if !probe.eval(hi)? {
                    break;
                }
            }
        }

        let initial_width = hi - lo;
        let mut steps = 0;
        while hi - lo > self.lambda_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if probe.eval(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
            steps += 1;
        }

        // spot-check monotonicity outside the final bracket
        probe.eval(lo - 1.0)?;
        probe.eval(hi + 1.0)?;

        Ok(LambdaSearch {
            value: 0.5 * (lo + hi),
            lower: lo,
            upper: hi,
            expansions,
            bisection_steps: steps,
            initial_width,
        })
    }

    pub fn lambda_max(&self, x: &CompoundState) -> Result<f64> {
        Ok(self.search(x)?.value)
    }

    /// `S(X)` in meter units.
    pub fn entropy(&self, x: &CompoundState) -> Result<f64> {
        self.lambda_max(x)
    }
}
