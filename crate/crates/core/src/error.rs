use thiserror::Error;

/// Errors raised by validation and by operations with dimension preconditions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("entry count {found} does not match {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid dimension signature: {0}")]
    InvalidSignature(String),

    #[error("subsystem index {index} out of range for {len} subsystems")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("subsystem sets overlap")]
    OverlappingSubsystems,

    #[error("not Hermitian: max |m - m^dagger| = {deviation:e}")]
    NonHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("state vector norm is {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("not unitary: max |U^dagger U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("not trace preserving: max |sum K^dagger K - I| = {deviation:e}")]
    NotTracePreserving { deviation: f64 },

    #[error("empty operator list")]
    Empty,

    #[error("infeasible dilation dimensions: {0}")]
    InfeasibleDims(String),

    #[error("expected {expected}, found {found}")]
    WrongLength { expected: String, found: usize },

    #[error("chain indices must satisfy 1 <= r < s <= {states}, got r={r}, s={s}")]
    InvalidChainIndex { r: usize, s: usize, states: usize },

    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("simulation needs {amplitudes} amplitudes, budget is {budget}")]
    BudgetExceeded { amplitudes: usize, budget: usize },

    #[error("port mismatch: {0}")]
    PortMismatch(String),

    #[error("invalid probability distribution: {0}")]
    InvalidPmf(String),
}

pub type Result<T> = std::result::Result<T, Error>;
