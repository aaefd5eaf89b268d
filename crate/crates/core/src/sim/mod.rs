//! Dense state-vector simulation: gates, circuits, transpilation to the
//! hardware basis, shot sampling and OpenQASM export.

mod circuit;
mod gate;
mod qasm;
mod sample;
mod state;
mod transpile;

pub use circuit::{phase_insensitive_trace, Circuit};
pub use gate::{gate_matrix, Gate, GateOp, Mat2, Unitary2};
pub use qasm::{export_qasm, parse_qasm, QASM_HEADER};
pub use sample::{derive_seed, rng_from_seed, sample_counts, MeasurementCounts, ShotRng};
pub(crate) use sample::OutcomeSampler;
pub use state::{bitstring, inner_product, parse_bitstring, zero_state, StateVector};
pub use transpile::{basis_op_count, transpile_to_basis};

/// Largest supported register.
pub const MAX_QUBITS: usize = 20;
