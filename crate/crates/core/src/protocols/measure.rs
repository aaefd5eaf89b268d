use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::distance::MetricConfig;
use super::pauli::{Hamiltonian, Pauli, PauliString};
use crate::error::{Error, Result};
use crate::noise::{noisy_sample, GateCounts, NoiseModel};
use crate::sim::{derive_seed, inner_product, sample_counts, Circuit, GateOp, StateVector};

/// How a protocol turns a prepared state into numbers.
///
/// `shots == 0` selects exact mode: outcome probabilities are read straight
/// from the simulated amplitudes (the infinite-shot limit). Otherwise the
/// state is sampled `shots` times with a generator seeded by `seed`,
/// optionally through a [`NoiseModel`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sampling {
    pub shots: u64,
    pub seed: u64,
    pub noise: Option<NoiseModel>,
}

impl Sampling {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn shots(shots: u64, seed: u64) -> Self {
        Self {
            shots,
            seed,
            noise: None,
        }
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = Some(noise);
        self
    }

    pub fn is_exact(&self) -> bool {
        self.shots == 0
    }

    /// Same settings with the seed of sub-measurement `index`.
    pub fn child(&self, index: u64) -> Self {
        Self {
            shots: self.shots,
            seed: derive_seed(self.seed, index),
            noise: self.noise.clone(),
        }
    }
}

/// Outcome distribution of measuring `circuit|0...0>` in the computational
/// basis: exact probabilities or sampled frequencies.
fn measure(circuit: &Circuit, sampling: &Sampling) -> Result<Vec<(usize, f64)>> {
    let state = circuit.prepare()?;
    if sampling.is_exact() {
        return Ok(state.probabilities().into_iter().enumerate().collect());
    }
    let counts = match &sampling.noise {
        Some(model) => noisy_sample(&state, GateCounts::of(circuit), model, sampling.shots, sampling.seed)?,
        None => sample_counts(&state, sampling.shots, sampling.seed)?,
    };
    let shots = counts.shots() as f64;
    Ok(counts.iter().map(|(i, c)| (i, c as f64 / shots)).collect())
}

/// Estimate of `|<psi1|psi2>|^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapEstimate {
    pub value: f64,
    /// 0 in exact mode.
    pub shots: u64,
    /// `sqrt(p (1-p) / shots)`, 0 in exact mode.
    pub std_error: f64,
    pub seed: u64,
}

impl OverlapEstimate {
    /// An exactly known overlap.
    pub fn exact(value: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            shots: 0,
            std_error: 0.0,
            seed: 0,
        }
    }
}

/// The inversion circuit `U2` followed by `U1^dagger`; its all-zeros
/// probability is `|<0|U1^dagger U2|0>|^2`.
pub fn overlap_circuit(u1: &Circuit, u2: &Circuit) -> Result<Circuit> {
    u2.then(&u1.adjoint())
}

/// Estimates `|<psi1|psi2>|^2` for `psi_i = U_i|0...0>` from the all-zeros
/// outcome of the inversion circuit.
pub fn overlap(u1: &Circuit, u2: &Circuit, sampling: &Sampling) -> Result<OverlapEstimate> {
    let circuit = overlap_circuit(u1, u2)?;
    let dist = measure(&circuit, sampling)?;
    let p = dist
        .iter()
        .find(|(i, _)| *i == 0)
        .map_or(0.0, |&(_, p)| p)
        .clamp(0.0, 1.0);
    let std_error = if sampling.is_exact() {
        0.0
    } else {
        (p * (1.0 - p) / sampling.shots as f64).sqrt()
    };
    Ok(OverlapEstimate {
        value: p,
        shots: sampling.shots,
        std_error,
        seed: sampling.seed,
    })
}

/// Single-qubit rotations `R` with `R^dagger Z_S R = P`, where `Z_S` is `Z`
/// on the support of `string`.
///
/// `X` letters get `exp(+i pi/4 Y)` and `Y` letters get `exp(-i pi/4 X)`;
/// `Z` and `I` letters get nothing. Both rotations are written as exact `U`
/// gates so the circuit stays transpilable.
pub fn rotation_circuit_for(string: &PauliString) -> Result<Circuit> {
    let mut circuit = Circuit::new(string.n_qubits())?;
    for (q, letter) in string.letters().iter().enumerate() {
        match letter {
            // exp(i pi/4 Y) = [[1, 1], [-1, 1]] / sqrt(2)
            Pauli::X => circuit.push(GateOp::u(q, FRAC_PI_2, PI, PI))?,
            // exp(-i pi/4 X) = [[1, -i], [-i, 1]] / sqrt(2)
            Pauli::Y => circuit.push(GateOp::u(q, FRAC_PI_2, -FRAC_PI_2, FRAC_PI_2))?,
            Pauli::Z | Pauli::I => continue,
        };
    }
    Ok(circuit)
}

fn parity_sign(index: usize, mask: usize) -> f64 {
    if (index & mask).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `<psi|P|psi>` for `psi = prep|0...0>`: rotate `P` to a Z-string, measure,
/// and average the `+-1` parity over the string's support.
pub fn expectation(prep: &Circuit, string: &PauliString, sampling: &Sampling) -> Result<f64> {
    if prep.n_qubits() != string.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: prep.n_qubits(),
            right: string.n_qubits(),
        });
    }
    if string.is_identity() {
        return Ok(1.0);
    }
    let circuit = prep.then(&rotation_circuit_for(string)?)?;
    let mask = string.support_mask();
    let value: f64 = measure(&circuit, sampling)?
        .into_iter()
        .map(|(i, p)| p * parity_sign(i, mask))
        .sum();
    Ok(value.clamp(-1.0, 1.0))
}

/// First and second moments of `H` in the prepared state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyMoments {
    pub mean: f64,
    pub mean_square: f64,
    /// Delta-method standard error of `mean_square - mean^2`; 0 in exact mode.
    pub variance_std_error: f64,
}

impl EnergyMoments {
    /// `<H^2> - <H>^2`, clamped at 0.
    pub fn variance(&self) -> f64 {
        (self.mean_square - self.mean * self.mean).max(0.0)
    }
}

#[derive(Default)]
struct StringTerm {
    mean_coef: f64,
    square_coef: Complex64,
}

/// Measures `<H>` and `<H^2>`.
///
/// `<H^2> = sum_ab h_a h_b <P_a P_b>`; every product `P_a P_b` is reduced
/// symbolically to `phase * P_c` and `P_c` is measured with the rotation
/// protocol. Each distinct string is measured once (seed derived from its
/// rank), so the imaginary parts of anticommuting pairs cancel exactly.
pub fn energy_moments(ham: &Hamiltonian, prep: &Circuit, sampling: &Sampling) -> Result<EnergyMoments> {
    if ham.n_qubits() != prep.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: ham.n_qubits(),
            right: prep.n_qubits(),
        });
    }
    let mut strings: BTreeMap<PauliString, StringTerm> = BTreeMap::new();
    for (h, s) in ham.terms() {
        strings.entry(s.clone()).or_default().mean_coef += h;
    }
    for (ha, sa) in ham.terms() {
        for (hb, sb) in ham.terms() {
            let (phase, reduced) = sa.mul(sb)?;
            strings.entry(reduced).or_default().square_coef += phase.to_complex() * (ha * hb);
        }
    }

    let mut mean = 0.0;
    let mut square = Complex64::new(0.0, 0.0);
    let mut measured = Vec::with_capacity(strings.len());
    for (rank, (s, term)) in strings.iter().enumerate() {
        let e = expectation(prep, s, &sampling.child(rank as u64))?;
        mean += term.mean_coef * e;
        square += term.square_coef * e;
        if !s.is_identity() {
            measured.push((term, e));
        }
    }
    debug_assert!(square.im.abs() <= 1e-9 * (1.0 + ham.norm_bound().powi(2)));

    let variance_std_error = if sampling.is_exact() {
        0.0
    } else {
        let shots = sampling.shots as f64;
        measured
            .iter()
            .map(|(term, e)| {
                let slope = term.square_coef.re - 2.0 * mean * term.mean_coef;
                slope * slope * (1.0 - e * e).max(0.0) / shots
            })
            .sum::<f64>()
            .sqrt()
    };
    Ok(EnergyMoments {
        mean,
        mean_square: square.re,
        variance_std_error,
    })
}

/// Evolution speed with a propagated standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpeedEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// `v = gamma sqrt(<H^2> - <H>^2)` with the error of the variance pushed
/// through the square root.
pub fn evolution_speed_estimate(
    ham: &Hamiltonian,
    prep: &Circuit,
    cfg: &MetricConfig,
    sampling: &Sampling,
) -> Result<SpeedEstimate> {
    let moments = energy_moments(ham, prep, sampling)?;
    let var = moments.variance();
    let value = cfg.gamma() * var.sqrt();
    let sv = moments.variance_std_error;
    let std_error = if sv == 0.0 {
        0.0
    } else if var > 0.0 {
        cfg.gamma() * sv / (2.0 * var.sqrt())
    } else {
        // derivative diverges at zero variance; fall back to the scale of the noise
        cfg.gamma() * sv.sqrt()
    };
    Ok(SpeedEstimate { value, std_error })
}

/// Anandan–Aharonov speed `v = sqrt(g_tt) = gamma sqrt(<H^2> - <H>^2)`.
pub fn evolution_speed(
    ham: &Hamiltonian,
    prep: &Circuit,
    cfg: &MetricConfig,
    sampling: &Sampling,
) -> Result<f64> {
    Ok(evolution_speed_estimate(ham, prep, cfg, sampling)?.value)
}

/// `g_tt = gamma^2 (<H^2> - <H>^2)` evaluated directly on a state vector.
pub fn metric_gtt_of_state(ham: &Hamiltonian, state: &StateVector, cfg: &MetricConfig) -> Result<f64> {
    let h_psi = ham.apply(state)?;
    let mean: f64 = state
        .amplitudes()
        .iter()
        .zip(&h_psi)
        .map(|(a, b)| (a.conj() * b).re)
        .sum();
    let mean_square: f64 = h_psi.iter().map(|a| a.norm_sqr()).sum();
    Ok(cfg.gamma().powi(2) * (mean_square - mean * mean).max(0.0))
}

/// Tolerance on the spread of `g_tt` along a trajectory.
const STATIONARY_TOL: f64 = 1e-9;

/// Path length `s = integral_0^tau sqrt(g_tt) dt` for a time-independent `H`
/// (exact mode), which is `v * tau`.
///
/// Also evolves the prepared state to `tau/2` and `tau` and checks that
/// `g_tt` does not change along the way.
pub fn path_length(ham: &Hamiltonian, prep: &Circuit, tau: f64, cfg: &MetricConfig) -> Result<f64> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::Parameter(format!("tau must be finite and >= 0, got {tau}")));
    }
    let v = evolution_speed(ham, prep, cfg, &Sampling::exact())?;
    let psi0 = prep.prepare()?;
    let g0 = v * v;
    let mut spread: f64 = 0.0;
    for t in [0.0, tau / 2.0, tau] {
        let g = metric_gtt_of_state(ham, &ham.evolve(&psi0, t)?, cfg)?;
        spread = spread.max((g - g0).abs());
    }
    if spread > STATIONARY_TOL * g0.max(1.0) {
        return Err(Error::NonStationarySpeed(spread));
    }
    Ok(v * tau)
}

/// `|<psi1|psi2>|^2` straight from the amplitudes of both prepared states.
pub fn dense_overlap(u1: &Circuit, u2: &Circuit) -> Result<f64> {
    Ok(inner_product(&u1.prepare()?, &u2.prepare()?)?.norm_sqr())
}
