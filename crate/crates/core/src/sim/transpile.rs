//! Lowering to the hardware basis `{id, x, sx, rz, cx}`.
//!
//! `U(theta, phi, lambda)` becomes `Rz(phi+pi) SX Rz(theta-pi) SX Rz(lambda)`
//! (matrix order, so `Rz(lambda)` runs first). When `theta` is `+-pi/2`
//! modulo `2pi` the two middle factors collapse and only
//! `Rz(phi +- pi/2) SX Rz(lambda -+ pi/2)` is emitted. Both forms agree with
//! the `U` matrix up to a global phase.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::circuit::Circuit;
use super::gate::{Gate, GateOp};
use crate::error::{Error, Result};

/// How close `theta` must be to `+-pi/2 (mod 2pi)` for the short form.
const QUARTER_TURN_TOL: f64 = 1e-10;

fn wrapped_distance(angle: f64, target: f64) -> f64 {
    let d = (angle - target).rem_euclid(TAU);
    d.min(TAU - d)
}

fn lower_u(theta: f64, phi: f64, lambda: f64, q: usize) -> Vec<GateOp> {
    if wrapped_distance(theta, FRAC_PI_2) < QUARTER_TURN_TOL {
        vec![
            GateOp::rz(q, lambda - FRAC_PI_2),
            GateOp::sx(q),
            GateOp::rz(q, phi + FRAC_PI_2),
        ]
    } else if wrapped_distance(theta, -FRAC_PI_2) < QUARTER_TURN_TOL {
        vec![
            GateOp::rz(q, lambda + FRAC_PI_2),
            GateOp::sx(q),
            GateOp::rz(q, phi - FRAC_PI_2),
        ]
    } else {
        vec![
            GateOp::rz(q, lambda),
            GateOp::sx(q),
            GateOp::rz(q, theta - PI),
            GateOp::sx(q),
            GateOp::rz(q, phi + PI),
        ]
    }
}

/// Rewrites `circuit` using only basis gates.
///
/// Hadamard lowers to `Rz(pi/2) SX Rz(pi/2)`. Arbitrary-matrix gates are
/// rejected.
pub fn transpile_to_basis(circuit: &Circuit) -> Result<Circuit> {
    let mut ops = Vec::with_capacity(circuit.len() * 3);
    for op in circuit.ops() {
        match *op {
            GateOp::Single { gate, target } => match gate {
                Gate::U { theta, phi, lambda } => ops.extend(lower_u(theta, phi, lambda, target)),
                Gate::Hadamard => ops.extend([
                    GateOp::rz(target, FRAC_PI_2),
                    GateOp::sx(target),
                    GateOp::rz(target, FRAC_PI_2),
                ]),
                Gate::Matrix(_) => return Err(Error::Transpile(op.to_string())),
                _ => ops.push(*op),
            },
            GateOp::Cnot { .. } => ops.push(*op),
        }
    }
    Circuit::from_ops(circuit.n_qubits(), ops)
}

/// Number of non-identity operations in a basis-form circuit.
pub fn basis_op_count(circuit: &Circuit) -> Result<usize> {
    let mut count = 0;
    for op in circuit.ops() {
        if !op.is_basis() {
            return Err(Error::NotBasis(op.to_string()));
        }
        if !op.is_identity() {
            count += 1;
        }
    }
    Ok(count)
}
