#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qdist::sim::{gate_matrix, Circuit, GateOp, StateVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn angle(rng: &mut impl Rng) -> f64 {
    rng.random_range(-7.0..7.0)
}

/// Random op from the circuit-level gate set (no generic matrices).
pub fn random_op(rng: &mut impl Rng, n: usize, allow_cnot: bool) -> GateOp {
    let q = rng.random_range(0..n);
    let kinds = if allow_cnot && n > 1 { 7 } else { 6 };
    match rng.random_range(0..kinds) {
        0 => GateOp::id(q),
        1 => GateOp::x(q),
        2 => GateOp::sx(q),
        3 => GateOp::rz(q, angle(rng)),
        4 => GateOp::u(q, angle(rng), angle(rng), angle(rng)),
        5 => GateOp::h(q),
        _ => {
            let t = (q + rng.random_range(1..n)) % n;
            GateOp::cnot(q, t)
        }
    }
}

pub fn random_circuit(rng: &mut impl Rng, n: usize, max_ops: usize, allow_cnot: bool) -> Circuit {
    let len = rng.random_range(0..=max_ops);
    Circuit::from_ops(n, (0..len).map(|_| random_op(rng, n, allow_cnot))).unwrap()
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> StateVector {
    let amps = (0..1 << n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StateVector::from_amplitudes(amps).unwrap()
}

/// Full register matrix of one op, built from Kronecker products and an
/// explicit CNOT permutation, independently of the simulator kernels.
pub fn embed(op: &GateOp, n: usize) -> DMatrix<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    match *op {
        GateOp::Single { target, .. } => {
            let g = gate_matrix(op);
            let mut m = DMatrix::from_element(1, 1, one);
            for q in 0..n {
                let f = if q == target { g.clone() } else { DMatrix::identity(2, 2) };
                m = m.kronecker(&f);
            }
            m
        }
        GateOp::Cnot { control, target } => {
            let dim = 1 << n;
            let cbit = 1 << (n - 1 - control);
            let tbit = 1 << (n - 1 - target);
            DMatrix::from_fn(dim, dim, |row, col| {
                let image = if col & cbit != 0 { col ^ tbit } else { col };
                if row == image {
                    one
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        }
    }
}

pub fn dense_unitary(c: &Circuit) -> DMatrix<Complex64> {
    let n = c.n_qubits();
    c.ops()
        .iter()
        .fold(DMatrix::identity(1 << n, 1 << n), |acc, op| embed(op, n) * acc)
}

pub fn dense_state(c: &Circuit) -> DVector<Complex64> {
    dense_unitary(c).column(0).into_owned()
}

/// `|<a|b>|^2` of two dense columns.
pub fn dense_overlap(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    a.dotc(b).norm_sqr()
}
