use thiserror::Error;

/// Library-wide error taxonomy.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input data fails a structural precondition (duplicate letters,
    /// non-bijective one-line notation, empty half-shuffle argument,
    /// inhomogeneous degree, degree-zero mismatch for exp/log, ...).
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// The requested operation is not available for the given
    /// Rota-Baxter instance (wrong weight, missing unit, non-idempotent
    /// operator, non-commutative carrier where commutativity is required).
    #[error("unsupported instance: {0}")]
    UnsupportedInstance(String),

    /// An element claimed to be a Lie element fails the reconstruction
    /// check in the right-nested bracket basis.
    #[error("not a Lie element: {0}")]
    NotLie(String),

    /// A degree or size cap was exceeded.
    #[error("cutoff exceeded: {0}")]
    CutoffExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
