//! Measurement protocols built on the simulator: overlaps, Pauli-string
//! expectations, energy moments, and the distances derived from them.

mod distance;
mod measure;
mod pauli;

pub use distance::{
    fubini_study_distance, hilbert_schmidt_circuits, hilbert_schmidt_distance, hilbert_schmidt_estimate,
    minimal_distance, wootters_distance, HsEstimate, HsTerm, MetricConfig, PureDistance, PureStateEnsemble,
};
pub use measure::{
    dense_overlap, energy_moments, evolution_speed, evolution_speed_estimate, expectation, metric_gtt_of_state,
    overlap, overlap_circuit, path_length, rotation_circuit_for, EnergyMoments, OverlapEstimate, Sampling,
    SpeedEstimate,
};
pub use pauli::{Hamiltonian, Pauli, PauliString, Phase};
