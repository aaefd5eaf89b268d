use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gate::GateOp;
use super::state::{check_qubit_count, zero_state, StateVector};
use crate::error::{Error, Result};

/// Ordered gate program on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        Ok(Self {
            n_qubits,
            ops: Vec::new(),
        })
    }

    pub fn from_ops(n_qubits: usize, ops: impl IntoIterator<Item = GateOp>) -> Result<Self> {
        let mut circuit = Self::new(n_qubits)?;
        for op in ops {
            circuit.push(op)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    fn check_same_width(&self, other: &Circuit) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    /// `self` followed by `next`, i.e. the operator `next * self`.
    pub fn then(&self, next: &Circuit) -> Result<Circuit> {
        self.check_same_width(next)?;
        let mut ops = self.ops.clone();
        ops.extend_from_slice(&next.ops);
        Ok(Circuit {
            n_qubits: self.n_qubits,
            ops,
        })
    }

    /// Hermitian conjugate: ops reversed, each replaced by its inverse.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().rev().flat_map(GateOp::adjoint).collect(),
        }
    }

    pub fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: state.n_qubits(),
                right: self.n_qubits,
            });
        }
        for op in &self.ops {
            state.apply_in_place(op)?;
        }
        Ok(())
    }

    /// Runs the circuit on `|0...0>`.
    pub fn prepare(&self) -> Result<StateVector> {
        let mut state = zero_state(self.n_qubits)?;
        self.apply_to(&mut state)?;
        Ok(state)
    }

    /// Full `2^n x 2^n` unitary, built column by column from basis states.
    pub fn unitary(&self) -> Result<DMatrix<Complex64>> {
        let dim = 1usize << self.n_qubits;
        let mut out = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            amps[col] = Complex64::new(1.0, 0.0);
            let mut state = StateVector::from_amplitudes(amps)?;
            self.apply_to(&mut state)?;
            for (row, a) in state.amplitudes().iter().enumerate() {
                out[(row, col)] = *a;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "circuit[{}]", self.n_qubits)?;
        for op in &self.ops {
            write!(f, "; {op}")?;
        }
        Ok(())
    }
}

/// `|Tr(A^dagger B)|`; equals the dimension iff `A` and `B` agree up to a global phase.
pub fn phase_insensitive_trace(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a.adjoint() * b).trace().norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::gate::Gate;

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2).unwrap();
        assert!(c.push(GateOp::cnot(0, 1)).is_ok());
        assert!(c.push(GateOp::x(5)).is_err());
        assert_eq!(c.len(), 1);
        assert!(Circuit::new(0).is_err());
    }

    #[test]
    fn adjoint_of_hadamard_and_rz() {
        let h = Circuit::from_ops(1, [GateOp::h(0)]).unwrap();
        assert_eq!(h.adjoint().ops(), &[GateOp::h(0)]);
        let rz = Circuit::from_ops(1, [GateOp::rz(0, 0.8)]).unwrap();
        assert_eq!(rz.adjoint().ops(), &[GateOp::rz(0, -0.8)]);
    }

    #[test]
    fn adjoint_reverses_order() {
        let c = Circuit::from_ops(2, [GateOp::h(0), GateOp::cnot(0, 1), GateOp::rz(1, 0.3)]).unwrap();
        assert_eq!(
            c.adjoint().ops(),
            &[GateOp::rz(1, -0.3), GateOp::cnot(0, 1), GateOp::h(0)]
        );
    }

    #[test]
    fn adjoint_u_matches_u_theta_pi_pi_up_to_phase() {
        let theta = 2.2;
        let adj = Circuit::from_ops(1, [GateOp::u(0, theta, 0.0, 0.0)])
            .unwrap()
            .adjoint();
        let target = Circuit::from_ops(
            1,
            [GateOp::Single {
                gate: Gate::U {
                    theta,
                    phi: std::f64::consts::PI,
                    lambda: std::f64::consts::PI,
                },
                target: 0,
            }],
        )
        .unwrap();
        let t = phase_insensitive_trace(&adj.unitary().unwrap(), &target.unitary().unwrap());
        assert!((t - 2.0).abs() < 1e-12);
    }

    #[test]
    fn then_checks_width() {
        let a = Circuit::new(1).unwrap();
        let b = Circuit::new(2).unwrap();
        assert!(a.then(&b).is_err());
    }

    #[test]
    fn unitary_of_cnot_matches_truth_table() {
        let u = Circuit::from_ops(2, [GateOp::cnot(0, 1)]).unwrap().unitary().unwrap();
        let local = crate::sim::gate_matrix(&GateOp::cnot(0, 1));
        assert_eq!(u, local);
    }
}
