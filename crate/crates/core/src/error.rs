use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("states are not in one comparability class: {0}")]
    Class(String),
    #[error("unknown system `{0}`")]
    UnknownSystem(String),

    #[error("degenerate reference pair: X1 also precedes X0 (equal entropy)")]
    DegenerateReferences,
    #[error("reversed reference pair: X0 does not precede X1 but X1 precedes X0")]
    ReversedReferences,
    #[error("incomparable reference pair: neither X0 precedes X1 nor X1 precedes X0")]
    IncomparableReferences,
    #[error(
        "no bracket for lambda_max within |lambda| <= {limit}: entropy unbounded on this class"
    )]
    UnboundedEntropy { limit: f64 },
    #[error("oracle `{oracle}` violates monotonicity of the lambda predicate: true at {holds_at}, false at {fails_at}")]
    OracleViolation {
        oracle: String,
        holds_at: f64,
        fails_at: f64,
    },

    #[error("affine fit is degenerate: {0}")]
    DegenerateFit(String),

    #[error("inconsistent relation: closure forces asserted-absent edge {from} -> {to} via chain {chain:?}")]
    InconsistentRelation {
        from: String,
        to: String,
        chain: Vec<String>,
    },
    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("entropy is not increasing in energy at this state (difference {0})")]
    NonMonotoneEntropy(f64),
    #[error("no irreversible change found within the search box ({probes} probes)")]
    ExhaustedSearch { probes: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
