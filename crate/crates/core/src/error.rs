use thiserror::Error;

/// Hypotheses of the constant-curvature deduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// `Tr(cR_X^2) = H |X|^4` for all `X`.
    TwoStein,
    /// `cR(W1, W1)W2 = cR(W2, W2)W1 = 0`.
    BlockCondition,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Hypothesis::TwoStein => f.write_str("2-stein condition"),
            Hypothesis::BlockCondition => f.write_str("block condition"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: String },

    #[error("index {index:?} out of range for dimension {dim}")]
    IndexOutOfRange { index: Vec<usize>, dim: usize },

    #[error("symmetry conflict at {index:?}: orbit forces {forced}, entry gives {given}")]
    SymmetryConflict {
        index: [usize; 4],
        forced: String,
        given: String,
    },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis failed: {hypothesis} (residual {residual:e})")]
    HypothesisFailed { hypothesis: Hypothesis, residual: f64 },

    #[error("combinatorial guard exceeded: {count} permutations (limit {limit})")]
    CombinatorialGuard { count: u128, limit: u128 },

    #[error("singular linear system")]
    SingularSystem,

    #[error("unreachable target: {0}")]
    UnreachableTarget(String),

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
