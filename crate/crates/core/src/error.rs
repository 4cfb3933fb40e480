use thiserror::Error;

/// Errors raised across the simulation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("duplicate subsystem index {0}")]
    DuplicateIndex(usize),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("Kraus operators are not complete (deviation {0:.3e})")]
    IncompleteKraus(f64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("register of {0} qubits exceeds the supported maximum of {max}", max = crate::qcore::MAX_QUBITS)]
    RegisterTooLarge(usize),

    #[error("state leaks out of the codespace (weight {0:.3e})")]
    CodespaceLeakage(f64),

    #[error("parameter is unidentifiable: Fisher information is zero")]
    Unidentifiable,

    #[error("observable has vanishing sensitivity ({0:.3e})")]
    VanishingSensitivity(f64),

    #[error("post-selection has zero acceptance probability")]
    ZeroAcceptance,

    #[error("bound is vacuous: p = {p} is not below d/(2n) = {threshold}")]
    VacuousBound { p: f64, threshold: f64 },

    #[error("integrator step size underflow at t = {0}")]
    StepUnderflow(f64),

    #[error("insufficient transfer fidelity: {0}")]
    InsufficientTransfer(String),

    #[error("malformed protocol state: {0}")]
    MalformedProtocol(String),
}

pub type Result<T> = std::result::Result<T, Error>;
