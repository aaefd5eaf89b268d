use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {0} outside the supported range 1..={max}", max = crate::sim::MAX_QUBITS)]
    QubitCount(usize),
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitIndex { index: usize, n_qubits: usize },
    #[error("CNOT control and target must differ (both are {0})")]
    CnotSameQubit(usize),
    #[error("matrix is not unitary (max deviation of U^dagger U from identity: {0:e})")]
    NonUnitary(f64),
    #[error("gate angle must be finite, got {0}")]
    NonFiniteAngle(f64),
    #[error("dimension mismatch: {left} qubits vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cannot lower {0} to the hardware basis")]
    Transpile(String),
    #[error("operation {0} is not a hardware basis gate")]
    NotBasis(String),
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("invalid ensemble: {0}")]
    Ensemble(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid noise model: {0}")]
    Noise(String),
    #[error("QASM parse error on line {line}: {msg}")]
    Qasm { line: usize, msg: String },
    #[error("speed varies along the trajectory (g_tt spread {0:e})")]
    NonStationarySpeed(f64),
}
