use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("amplitude count {got} does not match 2^{n} = {expected}")]
    LengthMismatch {
        n: usize,
        got: usize,
        expected: usize,
    },

    #[error("state is not normalized: |norm^2 - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("qubit count {n} exceeds the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("qubit index {k} out of range 1..={n}")]
    IndexOutOfRange { k: usize, n: usize },

    #[error("subset is invalid: {reason}")]
    BadSubset { reason: String },

    #[error("{0:?} is not a permutation of 1..=n")]
    NotAPermutation(Vec<usize>),

    #[error("matrix is not unitary: max |U^dag U - I| entry = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("invalid density matrix: {reason}")]
    InvalidDensity { reason: String },

    #[error("single-qubit state has no first-vs-rest split")]
    SingleQubit,

    #[error("eigenvalue {value} at position {index} outside [0, 1/2]")]
    OutOfRange { index: usize, value: f64 },

    #[error("spectrum is infeasible: {reason}")]
    Infeasible { reason: String },

    #[error("internal invariant violated: {reason}")]
    InternalInvariant { reason: String },

    #[error("certificate chain violated on qubit {qubit}: {reason}")]
    TheoremViolation { qubit: usize, reason: String },

    #[error("expected a {expected}-qubit state, got {got}")]
    WrongSize { expected: usize, got: usize },

    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
