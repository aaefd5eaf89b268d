//! Circuit builders for the benchmark systems and their closed-form oracles.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::protocols::{Hamiltonian, PauliString, PureStateEnsemble};
use crate::sim::{Circuit, GateOp};

const UNIT_TOL: f64 = 1e-12;

fn check_finite(values: &[(&str, f64)]) -> Result<()> {
    match values.iter().find(|(_, v)| !v.is_finite()) {
        Some((name, v)) => Err(Error::Parameter(format!("{name} must be finite, got {v}"))),
        None => Ok(()),
    }
}

/// Spin-1/2 in a static field, `H = (omega/2) n.sigma`, started from the
/// Bloch state `(theta, phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinFieldParams {
    pub omega: f64,
    pub n_vec: [f64; 3],
    pub theta: f64,
    pub phi: f64,
}

impl SpinFieldParams {
    pub fn new(omega: f64, n_vec: [f64; 3], theta: f64, phi: f64) -> Result<Self> {
        let p = Self {
            omega,
            n_vec,
            theta,
            phi,
        };
        p.validate()?;
        Ok(p)
    }

    /// Field along `z`.
    pub fn along_z(omega: f64, theta: f64, phi: f64) -> Result<Self> {
        Self::new(omega, [0.0, 0.0, 1.0], theta, phi)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite(&[("omega", self.omega), ("theta", self.theta), ("phi", self.phi)])?;
        let norm = self.n_vec.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::Parameter(format!("field direction has norm {norm}, expected 1")));
        }
        Ok(())
    }
}

/// `U(theta, phi, 0)|0> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
pub fn one_qubit_state_circuit(theta: f64, phi: f64) -> Result<Circuit> {
    Circuit::from_ops(1, [GateOp::u(0, theta, phi, 0.0)])
}

/// `(omega/2)(n_x X + n_y Y + n_z Z)`, zero components dropped.
pub fn spin_field_hamiltonian(params: &SpinFieldParams) -> Result<Hamiltonian> {
    params.validate()?;
    let terms = ["X", "Y", "Z"]
        .into_iter()
        .zip(params.n_vec)
        .filter(|&(_, c)| c != 0.0)
        .map(|(s, c)| Ok((params.omega * c / 2.0, s.parse()?)))
        .collect::<Result<Vec<_>>>()?;
    Hamiltonian::new(1, terms)
}

/// `exp(-i H t) = cos(omega t/2) I - i sin(omega t/2) n.sigma` applied after
/// the state preparation, as one generic gate.
pub fn spin_evolution_circuit(params: &SpinFieldParams, t: f64) -> Result<Circuit> {
    params.validate()?;
    let (s, c) = (params.omega * t / 2.0).sin_cos();
    let [nx, ny, nz] = params.n_vec;
    let m = [
        [Complex64::new(c, -s * nz), Complex64::new(-s * ny, -s * nx)],
        [Complex64::new(s * ny, -s * nx), Complex64::new(c, s * nz)],
    ];
    let mut circuit = one_qubit_state_circuit(params.theta, params.phi)?;
    circuit.push(GateOp::unitary(0, m)?)?;
    Ok(circuit)
}

/// `|<0|psi(theta, phi)>|^2 = cos^2(theta/2)`.
pub fn spin_overlap_oracle(theta: f64) -> f64 {
    (theta / 2.0).cos().powi(2)
}

/// `v = gamma omega |sin theta| / 2` for a state at polar angle `theta` from
/// the field.
pub fn spin_speed_oracle(theta: f64, omega: f64, gamma: f64) -> f64 {
    gamma * omega * theta.sin().abs() / 2.0
}

/// Hadamard on qubit 0 then the CNOT chain `0->1, 1->2, ...`.
pub fn cat_state_circuit(n_qubits: usize) -> Result<Circuit> {
    if n_qubits < 2 {
        return Err(Error::Parameter(format!("cat state needs at least 2 qubits, got {n_qubits}")));
    }
    Circuit::from_ops(
        n_qubits,
        std::iter::once(GateOp::h(0)).chain((1..n_qubits).map(|q| GateOp::cnot(q - 1, q))),
    )
}

/// `U(theta, phi, 0)` on every qubit.
pub fn factorized_state_circuit(n_qubits: usize, theta: f64, phi: f64) -> Result<Circuit> {
    Circuit::from_ops(n_qubits, (0..n_qubits).map(|q| GateOp::u(q, theta, phi, 0.0)))
}

/// Five-qubit cat state against the factorized state:
/// `(c^10 + s^10 + 2 c^5 s^5 cos 5phi) / 2` with `c, s = cos, sin(theta/2)`.
pub fn cat_fact_overlap_oracle(theta: f64, phi: f64) -> f64 {
    let (s, c) = (theta / 2.0).sin_cos();
    0.5 * (c.powi(10) + s.powi(10) + 2.0 * c.powi(5) * s.powi(5) * (5.0 * phi).cos())
}

/// Open Ising chain evolved from a factorized state. `chi = J t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsingParams {
    pub j: f64,
    pub chi: f64,
    pub theta: f64,
    pub phi: f64,
    pub n_spins: usize,
}

impl IsingParams {
    pub fn new(j: f64, chi: f64, theta: f64, phi: f64, n_spins: usize) -> Result<Self> {
        let p = Self {
            j,
            chi,
            theta,
            phi,
            n_spins,
        };
        p.validate()?;
        Ok(p)
    }

    /// Five spins, `J = 1`.
    pub fn five(chi: f64, theta: f64, phi: f64) -> Result<Self> {
        Self::new(1.0, chi, theta, phi, 5)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite(&[("J", self.j), ("chi", self.chi), ("theta", self.theta), ("phi", self.phi)])?;
        if self.n_spins < 2 {
            return Err(Error::Parameter(format!("Ising chain needs at least 2 spins, got {}", self.n_spins)));
        }
        Ok(())
    }

    /// Evolution time `t = chi / J`.
    pub fn time(&self) -> f64 {
        self.chi / self.j
    }
}

/// `(J/4) sum_i Z_i Z_{i+1}` on an open chain.
pub fn ising_hamiltonian(j: f64, n_spins: usize) -> Result<Hamiltonian> {
    if n_spins < 2 {
        return Err(Error::Parameter(format!("Ising chain needs at least 2 spins, got {n_spins}")));
    }
    let terms = (0..n_spins - 1)
        .map(|i| {
            let s = PauliString::z_on(n_spins, &[i, i + 1])?;
            Ok((j / 4.0, s))
        })
        .collect::<Result<Vec<_>>>()?;
    Hamiltonian::new(n_spins, terms)
}

/// Factorized preparation followed by `exp(-i (chi/4) Z_i Z_{i+1})` on every
/// bond, each built as `CNOT(i, i+1) Rz(chi/2)_{i+1} CNOT(i, i+1)`.
///
/// The bond terms commute, so the product is exact.
pub fn ising_evolution_circuit(params: &IsingParams) -> Result<Circuit> {
    params.validate()?;
    let n = params.n_spins;
    let mut circuit = factorized_state_circuit(n, params.theta, params.phi)?;
    for i in 0..n - 1 {
        circuit.push(GateOp::cnot(i, i + 1))?;
        circuit.push(GateOp::rz(i + 1, params.chi / 2.0))?;
        circuit.push(GateOp::cnot(i, i + 1))?;
    }
    Ok(circuit)
}

/// Return probability of the five-spin chain, independent of `phi`.
pub fn ising_overlap_oracle(chi: f64, theta: f64) -> f64 {
    let (s, c) = (chi / 4.0).sin_cos();
    let k = theta.cos();
    let k2 = k * k;
    let k4 = k2 * k2;
    let k6 = k4 * k2;
    let k8 = k4 * k4;
    c.powi(8)
        + s.powi(8) * k4
        + c.powi(4) * s.powi(4) * (9.0 * k8 + 2.0 * k6 - 7.0 * k4 + 2.0 * k2)
        + c.powi(6) * s.powi(2) * (10.0 * k4 - 6.0 * k2)
        + c.powi(2) * s.powi(6) * (4.0 * k8 + 2.0 * k6 - 2.0 * k4)
}

/// `g_tt = (gamma^2 J^2 / 16)(4 + 6 cos^2 theta - 10 cos^4 theta)` for the
/// five-spin chain.
pub fn ising_gtt_oracle(theta: f64, j: f64, gamma: f64) -> f64 {
    let k2 = theta.cos().powi(2);
    gamma * gamma * j * j / 16.0 * (4.0 + 6.0 * k2 - 10.0 * k2 * k2)
}

const HS_QUBITS: usize = 5;

/// `rho1 = |psi><psi|` with `psi = cos(theta/2)|00000> + sin(theta/2)|11111>`
/// and `rho2 = |00000><00000|/4 + 3|11111><11111|/4`.
pub fn hs_example_ensembles(theta: f64) -> Result<(PureStateEnsemble, PureStateEnsemble)> {
    check_finite(&[("theta", theta)])?;
    let psi = Circuit::from_ops(
        HS_QUBITS,
        std::iter::once(GateOp::u(0, theta, 0.0, 0.0)).chain((1..HS_QUBITS).map(|q| GateOp::cnot(q - 1, q))),
    )?;
    let zeros = Circuit::new(HS_QUBITS)?;
    let ones = Circuit::from_ops(HS_QUBITS, (0..HS_QUBITS).map(GateOp::x))?;
    Ok((
        PureStateEnsemble::pure(psi),
        PureStateEnsemble::new(vec![(0.25, zeros), (0.75, ones)])?,
    ))
}

/// `gamma' sqrt(5/8 + cos(theta)/2)`.
pub fn hs_example_oracle(theta: f64, gamma_prime: f64) -> f64 {
    gamma_prime * (0.625 + theta.cos() / 2.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{evolution_speed, overlap, MetricConfig, Sampling};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn amps(c: &Circuit) -> Vec<Complex64> {
        c.prepare().unwrap().amplitudes().to_vec()
    }

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a - Complex64::new(re, im)).norm() < 1e-12
    }

    #[test]
    fn one_qubit_states() {
        let a = amps(&one_qubit_state_circuit(0.0, 0.0).unwrap());
        assert!(close(a[0], 1.0, 0.0) && close(a[1], 0.0, 0.0));
        let a = amps(&one_qubit_state_circuit(PI, 0.0).unwrap());
        assert!(a[0].norm() < 1e-12 && (a[1].norm() - 1.0).abs() < 1e-12);
        let a = amps(&one_qubit_state_circuit(FRAC_PI_2, FRAC_PI_2).unwrap());
        assert!(close(a[0], FRAC_1_SQRT_2, 0.0) && close(a[1], 0.0, FRAC_1_SQRT_2));
    }

    #[test]
    fn spin_hamiltonian_terms() {
        let h = spin_field_hamiltonian(&SpinFieldParams::along_z(2.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(h.terms(), &[(1.0, "Z".parse().unwrap())]);
        let h = spin_field_hamiltonian(&SpinFieldParams::new(1.0, [1.0, 0.0, 0.0], 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(h.terms(), &[(0.5, "X".parse().unwrap())]);
        let r = FRAC_1_SQRT_2;
        let h = spin_field_hamiltonian(&SpinFieldParams::new(1.0, [r, 0.0, r], 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(h.terms().len(), 2);
        assert!(h.terms().iter().all(|(c, _)| (c - 0.353_553_390_593_273_8).abs() < 1e-12));
    }

    #[test]
    fn non_unit_field_rejected() {
        assert!(SpinFieldParams::new(1.0, [1.0, 1.0, 0.0], 0.0, 0.0).is_err());
    }

    #[test]
    fn spin_evolution_matches_hamiltonian_evolve() {
        let p = SpinFieldParams::new(1.3, [0.48, -0.6, 0.64], 1.1, 0.3).unwrap();
        let h = spin_field_hamiltonian(&p).unwrap();
        let t = 0.77;
        let via_gate = spin_evolution_circuit(&p, t).unwrap().prepare().unwrap();
        let psi0 = one_qubit_state_circuit(p.theta, p.phi).unwrap().prepare().unwrap();
        let via_series = h.evolve(&psi0, t).unwrap();
        let amp = crate::sim::inner_product(&via_gate, &via_series).unwrap();
        assert!((amp.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spin_oracles() {
        assert_eq!(spin_overlap_oracle(0.0), 1.0);
        assert!(spin_overlap_oracle(PI) < 1e-30);
        assert!((spin_overlap_oracle(FRAC_PI_2) - 0.5).abs() < 1e-15);
        assert_eq!(spin_speed_oracle(0.0, 1.0, 1.0), 0.0);
        assert!((spin_speed_oracle(FRAC_PI_2, 1.0, 1.0) - 0.5).abs() < 1e-15);
        assert!((spin_speed_oracle(FRAC_PI_4, 1.0, 1.0) - 0.353_553_390_593_273_8).abs() < 1e-12);
    }

    #[test]
    fn spin_speed_oracle_matches_protocol() {
        let cfg = MetricConfig::new(1.4, 1.0).unwrap();
        for k in 0..=40 {
            let theta = k as f64 * PI / 20.0;
            let p = SpinFieldParams::along_z(0.9, theta, 0.4).unwrap();
            let h = spin_field_hamiltonian(&p).unwrap();
            let prep = one_qubit_state_circuit(theta, p.phi).unwrap();
            let v = evolution_speed(&h, &prep, &cfg, &Sampling::exact()).unwrap();
            assert!((v - spin_speed_oracle(theta, 0.9, 1.4)).abs() < 1e-10, "theta={theta}");
        }
    }

    #[test]
    fn cat_states() {
        assert!(cat_state_circuit(1).is_err());
        let a = amps(&cat_state_circuit(2).unwrap());
        assert!(close(a[0], FRAC_1_SQRT_2, 0.0) && close(a[3], FRAC_1_SQRT_2, 0.0));
        let a = amps(&cat_state_circuit(5).unwrap());
        for (i, x) in a.iter().enumerate() {
            let want = if i == 0 || i == 31 { FRAC_1_SQRT_2 } else { 0.0 };
            assert!(close(*x, want, 0.0), "index {i}");
        }
        let cat = cat_state_circuit(5).unwrap();
        assert!((overlap(&cat, &cat, &Sampling::exact()).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn factorized_states() {
        let a = amps(&factorized_state_circuit(5, 0.0, 0.0).unwrap());
        assert!(close(a[0], 1.0, 0.0));
        let a = amps(&factorized_state_circuit(5, PI, 0.0).unwrap());
        assert!((a[31].norm() - 1.0).abs() < 1e-12);
        let a = amps(&factorized_state_circuit(2, FRAC_PI_2, 0.0).unwrap());
        assert!(a.iter().all(|x| close(*x, 0.5, 0.0)));
    }

    #[test]
    fn cat_fact_oracle_values() {
        assert!((cat_fact_overlap_oracle(0.0, 0.0) - 0.5).abs() < 1e-15);
        assert!((cat_fact_overlap_oracle(PI, 1.234) - 0.5).abs() < 1e-15);
        assert!((cat_fact_overlap_oracle(FRAC_PI_2, 0.0) - 0.0625).abs() < 1e-15);
        let cat = cat_state_circuit(5).unwrap();
        let fact = factorized_state_circuit(5, FRAC_PI_2, 0.0).unwrap();
        assert!((overlap(&cat, &fact, &Sampling::exact()).unwrap().value - 0.0625).abs() < 1e-12);
    }

    #[test]
    fn ising_hamiltonian_terms() {
        assert!(ising_hamiltonian(1.0, 1).is_err());
        let h = ising_hamiltonian(2.0, 2).unwrap();
        assert_eq!(h.terms(), &[(0.5, "ZZ".parse().unwrap())]);
        let h = ising_hamiltonian(1.0, 5).unwrap();
        assert_eq!(h.terms().len(), 4);
        for (i, (c, s)) in h.terms().iter().enumerate() {
            assert_eq!(*c, 0.25);
            assert_eq!(*s, PauliString::z_on(5, &[i, i + 1]).unwrap());
        }
    }

    #[test]
    fn ising_circuit_limits() {
        let prep = factorized_state_circuit(5, 0.7, 0.2).unwrap();
        let zero_chi = ising_evolution_circuit(&IsingParams::five(0.0, 0.7, 0.2).unwrap()).unwrap();
        assert!((overlap(&prep, &zero_chi, &Sampling::exact()).unwrap().value - 1.0).abs() < 1e-12);
        let eigen = ising_evolution_circuit(&IsingParams::five(2.3, 0.0, 0.0).unwrap()).unwrap();
        assert!((amps(&eigen)[0].norm() - 1.0).abs() < 1e-12);
        let bonds = ising_evolution_circuit(&IsingParams::five(1.0, 0.3, 0.0).unwrap()).unwrap();
        let cx = bonds.ops().iter().filter(|op| matches!(op, GateOp::Cnot { .. })).count();
        assert_eq!(cx, 8);
    }

    #[test]
    fn ising_oracle_values() {
        assert_eq!(ising_overlap_oracle(0.0, 1.1), 1.0);
        for k in 0..=20 {
            let chi = k as f64 * PI / 5.0;
            assert!((ising_overlap_oracle(chi, 0.0) - 1.0).abs() < 1e-12);
        }
        let circ = ising_evolution_circuit(&IsingParams::five(PI, FRAC_PI_2, 0.0).unwrap()).unwrap();
        let prep = factorized_state_circuit(5, FRAC_PI_2, 0.0).unwrap();
        let p = overlap(&prep, &circ, &Sampling::exact()).unwrap().value;
        assert!((p - ising_overlap_oracle(PI, FRAC_PI_2)).abs() < 1e-10);
    }

    #[test]
    fn ising_gtt_values() {
        assert!((ising_gtt_oracle(FRAC_PI_2, 1.0, 1.0) - 0.25).abs() < 1e-15);
        assert!(ising_gtt_oracle(0.0, 1.0, 1.0).abs() < 1e-15);
        assert!((ising_gtt_oracle(FRAC_PI_4, 1.0, 1.0) - 0.28125).abs() < 1e-15);
    }

    #[test]
    fn hs_example() {
        let (rho1, rho2) = hs_example_ensembles(0.0).unwrap();
        assert!((amps(&rho1.components()[0].1)[0].norm() - 1.0).abs() < 1e-12);
        let total: f64 = rho2.components().iter().map(|(w, _)| w).sum();
        assert_eq!(total, 1.0);
        let a = amps(&hs_example_ensembles(1.0).unwrap().0.components()[0].1);
        assert!(close(a[0], 0.5f64.cos(), 0.0) && close(a[31], 0.5f64.sin(), 0.0));
    }

    #[test]
    fn hs_oracle_values() {
        assert!((hs_example_oracle(0.0, 1.0) - 1.125f64.sqrt()).abs() < 1e-15);
        assert!((hs_example_oracle(PI, 1.0) - 0.125f64.sqrt()).abs() < 1e-15);
        assert!((hs_example_oracle(FRAC_PI_2, 2.0) - 2.0 * 0.625f64.sqrt()).abs() < 1e-15);
    }
}
