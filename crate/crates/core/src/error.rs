use num_bigint::BigUint;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid parameters (bad type set, malformed flag, mismatched ground
    /// sets, family spec violations, ...).
    #[error("invalid parameter: {0}")]
    Param(String),

    /// A graph would exceed the configured vertex cap.
    #[error("graph on {count} vertices exceeds vertex cap {cap}")]
    VertexCap { count: BigUint, cap: usize },

    /// Ground set too large for graph construction.
    #[error("ground set size {n} exceeds graph ground cap {cap}")]
    GroundCap { n: u32, cap: u32 },

    /// A node or wall-clock budget ran out before the computation finished.
    #[error("budget exhausted in {context} after {nodes} nodes")]
    Budget {
        context: String,
        nodes: u64,
        /// For enumeration: how many sets were collected before the cutoff.
        partial_count: Option<u64>,
    },

    /// Dense eigensolver did not converge.
    #[error("eigensolver failed: {0}")]
    Eigen(String),

    /// An internal cross-check failed; indicates a bug, not a user error.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }
}
