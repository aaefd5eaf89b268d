//! Hardware-infidelity emulation applied at sampling time.
//!
//! Gate errors are folded into a single global depolarizing event per shot:
//! with probability `1 - (1-p1)^n1 (1-p2)^n2` the outcome is replaced by a
//! uniformly random bitstring. Readout errors then flip each bit
//! independently. This reproduces qualitative device scatter; it is not a
//! calibrated device model.

use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::{
    derive_seed, rng_from_seed, sample_counts, transpile_to_basis, Circuit, Gate, GateOp,
    MeasurementCounts, OutcomeSampler, StateVector,
};

/// Default readout flip probability (readout fidelity 98%).
pub const DEFAULT_READOUT_FLIP: f64 = 0.02;
/// Default single-qubit gate error (sqrt(X) fidelity 99.6%).
pub const DEFAULT_GATE_ERROR_1Q: f64 = 0.004;
/// Default two-qubit gate error (CNOT fidelity 93%).
pub const DEFAULT_GATE_ERROR_2Q: f64 = 0.07;

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    /// Per-qubit flip probabilities; a single entry applies to every qubit.
    readout_flip_prob: Vec<f64>,
    gate_error_prob_1q: f64,
    gate_error_prob_2q: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            readout_flip_prob: vec![DEFAULT_READOUT_FLIP],
            gate_error_prob_1q: DEFAULT_GATE_ERROR_1Q,
            gate_error_prob_2q: DEFAULT_GATE_ERROR_2Q,
        }
    }
}

impl NoiseModel {
    pub fn new(readout_flip_prob: Vec<f64>, gate_error_prob_1q: f64, gate_error_prob_2q: f64) -> Result<Self> {
        if readout_flip_prob.is_empty() {
            return Err(Error::Noise("readout_flip_prob needs at least one entry".into()));
        }
        if let Some(p) = readout_flip_prob.iter().find(|p| !(0.0..0.5).contains(*p)) {
            return Err(Error::Noise(format!("readout flip probability {p} not in [0, 0.5)")));
        }
        for (name, p) in [("1q", gate_error_prob_1q), ("2q", gate_error_prob_2q)] {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::Noise(format!("{name} gate error {p} not in [0, 1)")));
            }
        }
        Ok(Self {
            readout_flip_prob,
            gate_error_prob_1q,
            gate_error_prob_2q,
        })
    }

    pub fn noiseless() -> Self {
        Self {
            readout_flip_prob: vec![0.0],
            gate_error_prob_1q: 0.0,
            gate_error_prob_2q: 0.0,
        }
    }

    pub fn readout_flip_prob(&self) -> &[f64] {
        &self.readout_flip_prob
    }

    pub fn gate_error_prob_1q(&self) -> f64 {
        self.gate_error_prob_1q
    }

    pub fn gate_error_prob_2q(&self) -> f64 {
        self.gate_error_prob_2q
    }

    fn flip_probs(&self, n_qubits: usize) -> Result<Vec<f64>> {
        match self.readout_flip_prob.len() {
            1 => Ok(vec![self.readout_flip_prob[0]; n_qubits]),
            len if len == n_qubits => Ok(self.readout_flip_prob.clone()),
            len => Err(Error::Noise(format!(
                "{len} readout probabilities for a {n_qubits}-qubit register"
            ))),
        }
    }

    /// Probability that a shot of a circuit with `counts` gates is depolarized.
    pub fn depolarizing_prob(&self, counts: GateCounts) -> f64 {
        1.0 - (1.0 - self.gate_error_prob_1q).powi(counts.n_1q as i32)
            * (1.0 - self.gate_error_prob_2q).powi(counts.n_2q as i32)
    }
}

/// Error-bearing gate counts of a circuit as it would run on hardware.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub n_1q: usize,
    pub n_2q: usize,
}

impl GateCounts {
    /// Counts `x`/`sx` pulses and CNOTs after lowering to the basis. `rz` is a
    /// frame change and `id` a no-op, so neither contributes. Circuits that
    /// cannot be lowered count one pulse per non-identity single-qubit gate.
    pub fn of(circuit: &Circuit) -> Self {
        let lowered = transpile_to_basis(circuit);
        let ops = match &lowered {
            Ok(c) => c.ops(),
            Err(_) => circuit.ops(),
        };
        let mut counts = GateCounts::default();
        for op in ops {
            match op {
                GateOp::Cnot { .. } => counts.n_2q += 1,
                GateOp::Single { gate, .. } => match gate {
                    Gate::Identity => {}
                    Gate::Rz(_) if lowered.is_ok() => {}
                    _ => counts.n_1q += 1,
                },
            }
        }
        counts
    }
}

/// Flips each bit of each shot independently with its qubit's probability.
pub fn apply_readout_noise(
    counts: &MeasurementCounts,
    model: &NoiseModel,
    seed: u64,
) -> Result<MeasurementCounts> {
    let n = counts.n_qubits();
    let probs = model.flip_probs(n)?;
    if probs.iter().all(|&p| p == 0.0) {
        return Ok(counts.clone());
    }
    let masks: Vec<usize> = (0..n).map(|q| 1 << (n - 1 - q)).collect();
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::new();
    for (index, c) in counts.iter() {
        for _ in 0..c {
            let mut flipped = index;
            for (mask, &p) in masks.iter().zip(&probs) {
                if rng.random::<f64>() < p {
                    flipped ^= mask;
                }
            }
            out.push((flipped, 1));
        }
    }
    MeasurementCounts::from_indices(n, counts.seed(), out)
}

/// Samples `state` as if produced by a circuit with `gate_counts` gates on
/// noisy hardware: global depolarizing per shot, then readout flips.
pub fn noisy_sample(
    state: &StateVector,
    gate_counts: GateCounts,
    model: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<MeasurementCounts> {
    let n = state.n_qubits();
    let p_dep = model.depolarizing_prob(gate_counts);
    let ideal = if p_dep == 0.0 {
        sample_counts(state, shots, seed)?
    } else {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let sampler = OutcomeSampler::new(&state.probabilities());
        let mut rng = rng_from_seed(seed);
        let dim = state.dim();
        let draws = (0..shots).map(|_| {
            let index = if rng.random::<f64>() < p_dep {
                rng.random_range(0..dim)
            } else {
                sampler.draw(&mut rng)
            };
            (index, 1)
        });
        let draws: Vec<_> = draws.collect();
        MeasurementCounts::from_indices(n, seed, draws)?
    };
    apply_readout_noise(&ideal, model, derive_seed(seed, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{zero_state, Circuit};

    #[test]
    fn defaults_follow_quoted_fidelities() {
        let m = NoiseModel::default();
        assert_eq!(m.readout_flip_prob(), &[0.02]);
        assert_eq!(m.gate_error_prob_1q(), 0.004);
        assert_eq!(m.gate_error_prob_2q(), 0.07);
    }

    #[test]
    fn range_checks() {
        assert!(NoiseModel::new(vec![0.5], 0.0, 0.0).is_err());
        assert!(NoiseModel::new(vec![-0.1], 0.0, 0.0).is_err());
        assert!(NoiseModel::new(vec![], 0.0, 0.0).is_err());
        assert!(NoiseModel::new(vec![0.1], 1.0, 0.0).is_err());
        assert!(NoiseModel::new(vec![0.1, 0.2], 0.0, 0.99).is_ok());
    }

    #[test]
    fn zero_flip_is_identity() {
        let counts = MeasurementCounts::from_bitstrings(4, [("01", 30), ("10", 70)]).unwrap();
        let out = apply_readout_noise(&counts, &NoiseModel::noiseless(), 9).unwrap();
        assert_eq!(out, counts);
    }

    #[test]
    fn single_qubit_flip_rate() {
        let counts = MeasurementCounts::from_bitstrings(0, [("0", 100_000)]).unwrap();
        let model = NoiseModel::new(vec![0.02], 0.0, 0.0).unwrap();
        let out = apply_readout_noise(&counts, &model, 1).unwrap();
        assert_eq!(out.shots(), 100_000);
        // 3 sigma = 3 sqrt(0.02 * 0.98 / 1e5) ~ 0.0013
        let f = out.frequency(1);
        assert!((f - 0.02).abs() < 0.0014, "{f}");
    }

    #[test]
    fn per_qubit_length_must_match() {
        let counts = MeasurementCounts::from_bitstrings(0, [("000", 10)]).unwrap();
        let model = NoiseModel::new(vec![0.1, 0.1], 0.0, 0.0).unwrap();
        assert!(apply_readout_noise(&counts, &model, 0).is_err());
        let model = NoiseModel::new(vec![0.0, 0.0, 0.4], 0.0, 0.0).unwrap();
        let out = apply_readout_noise(&counts, &model, 0).unwrap();
        // only the last qubit can flip
        assert_eq!(out.get("000") + out.get("001"), 10);
    }

    #[test]
    fn zero_error_model_matches_ideal_sampler() {
        let state = zero_state(2).unwrap().apply(&GateOp::h(0)).unwrap();
        let counts = GateCounts { n_1q: 3, n_2q: 2 };
        let noisy = noisy_sample(&state, counts, &NoiseModel::noiseless(), 2048, 17).unwrap();
        assert_eq!(noisy, sample_counts(&state, 2048, 17).unwrap());
    }

    #[test]
    fn gate_counts_skip_virtual_rz() {
        let c = Circuit::from_ops(2, [GateOp::h(0), GateOp::cnot(0, 1), GateOp::rz(1, 0.2), GateOp::id(0)]).unwrap();
        assert_eq!(GateCounts::of(&c), GateCounts { n_1q: 1, n_2q: 1 });
        let u = Circuit::from_ops(1, [GateOp::u(0, 1.0, 0.0, 0.0)]).unwrap();
        assert_eq!(GateCounts::of(&u).n_1q, 2);
    }

    #[test]
    fn depolarizing_probability() {
        let m = NoiseModel::default();
        let p = m.depolarizing_prob(GateCounts { n_1q: 1, n_2q: 4 });
        assert!((p - (1.0 - 0.996 * 0.93f64.powi(4))).abs() < 1e-15);
        assert_eq!(m.depolarizing_prob(GateCounts::default()), 0.0);
    }
}
