use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-major 2x2 complex matrix.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

const UNITARY_TOL: f64 = 1e-10;

/// A 2x2 matrix checked to be unitary at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2(Mat2);

impl Unitary2 {
    pub fn new(m: Mat2) -> Result<Self> {
        let dev = unitarity_deviation(&m);
        if dev.is_nan() || dev > UNITARY_TOL {
            return Err(Error::NonUnitary(dev));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(mat2_adjoint(&self.0))
    }
}

fn unitarity_deviation(m: &Mat2) -> f64 {
    let p = mat2_mul(&mat2_adjoint(m), m);
    let mut dev: f64 = 0.0;
    for (i, row) in p.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { ONE } else { ZERO };
            dev = dev.max((v - target).norm());
        }
    }
    dev
}

pub(crate) fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub(crate) fn mat2_adjoint(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

/// Single-qubit gate kinds.
///
/// `Identity`, `X`, `SqrtX` and `Rz` form the hardware basis together with
/// CNOT. `U` and `Hadamard` are lowered by the transpiler; `Matrix` is
/// simulated directly but cannot be transpiled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Identity,
    X,
    SqrtX,
    /// `Rz(phi) = diag(e^{-i phi/2}, e^{i phi/2})`.
    Rz(f64),
    U {
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    Hadamard,
    Matrix(Unitary2),
}

impl Gate {
    pub fn matrix(&self) -> Mat2 {
        match *self {
            Gate::Identity => [[ONE, ZERO], [ZERO, ONE]],
            Gate::X => [[ZERO, ONE], [ONE, ZERO]],
            Gate::SqrtX => {
                let a = Complex64::new(0.5, 0.5);
                let b = Complex64::new(0.5, -0.5);
                [[a, b], [b, a]]
            }
            Gate::Rz(phi) => [
                [Complex64::from_polar(1.0, -phi / 2.0), ZERO],
                [ZERO, Complex64::from_polar(1.0, phi / 2.0)],
            ],
            Gate::U { theta, phi, lambda } => {
                let (s, c) = (theta / 2.0).sin_cos();
                [
                    [Complex64::new(c, 0.0), -Complex64::from_polar(s, lambda)],
                    [
                        Complex64::from_polar(s, phi),
                        Complex64::from_polar(c, lambda + phi),
                    ],
                ]
            }
            Gate::Hadamard => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            Gate::Matrix(u) => *u.matrix(),
        }
    }

    /// Hermitian conjugate as a sequence of gates (applied in order).
    ///
    /// Every kind maps to a single gate except `SqrtX`, whose inverse is
    /// `X * SqrtX` exactly.
    pub fn adjoint(&self) -> Vec<Gate> {
        match *self {
            Gate::Identity | Gate::X | Gate::Hadamard => vec![*self],
            Gate::SqrtX => vec![Gate::SqrtX, Gate::X],
            Gate::Rz(phi) => vec![Gate::Rz(-phi)],
            Gate::U { theta, phi, lambda } => vec![Gate::U {
                theta,
                phi: PI - lambda,
                lambda: PI - phi,
            }],
            Gate::Matrix(u) => vec![Gate::Matrix(u.adjoint())],
        }
    }

    pub fn is_basis(&self) -> bool {
        matches!(self, Gate::Identity | Gate::X | Gate::SqrtX | Gate::Rz(_))
    }

    fn check_angles(&self) -> Result<()> {
        let values: &[f64] = match self {
            Gate::Rz(phi) => &[*phi],
            Gate::U { theta, phi, lambda } => &[*theta, *phi, *lambda],
            _ => &[],
        };
        match values.iter().find(|v| !v.is_finite()) {
            Some(&bad) => Err(Error::NonFiniteAngle(bad)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Identity => write!(f, "id"),
            Gate::X => write!(f, "x"),
            Gate::SqrtX => write!(f, "sx"),
            Gate::Rz(phi) => write!(f, "rz({phi})"),
            Gate::U { theta, phi, lambda } => write!(f, "u({theta},{phi},{lambda})"),
            Gate::Hadamard => write!(f, "h"),
            Gate::Matrix(_) => write!(f, "unitary"),
        }
    }
}

/// A gate placed on specific qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateOp {
    Single { gate: Gate, target: usize },
    Cnot { control: usize, target: usize },
}

impl GateOp {
    pub fn id(target: usize) -> Self {
        GateOp::Single {
            gate: Gate::Identity,
            target,
        }
    }

    pub fn x(target: usize) -> Self {
        GateOp::Single {
            gate: Gate::X,
            target,
        }
    }

    pub fn sx(target: usize) -> Self {
        GateOp::Single {
            gate: Gate::SqrtX,
            target,
        }
    }

    pub fn rz(target: usize, phi: f64) -> Self {
        GateOp::Single {
            gate: Gate::Rz(phi),
            target,
        }
    }

    pub fn u(target: usize, theta: f64, phi: f64, lambda: f64) -> Self {
        GateOp::Single {
            gate: Gate::U { theta, phi, lambda },
            target,
        }
    }

    pub fn h(target: usize) -> Self {
        GateOp::Single {
            gate: Gate::Hadamard,
            target,
        }
    }

    pub fn unitary(target: usize, matrix: Mat2) -> Result<Self> {
        Ok(GateOp::Single {
            gate: Gate::Matrix(Unitary2::new(matrix)?),
            target,
        })
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::Cnot { control, target }
    }

    /// Checks qubit indices and angles against an `n_qubits` register.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |index: usize| {
            if index < n_qubits {
                Ok(())
            } else {
                Err(Error::QubitIndex { index, n_qubits })
            }
        };
        match *self {
            GateOp::Single { gate, target } => {
                check(target)?;
                gate.check_angles()
            }
            GateOp::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::CnotSameQubit(control));
                }
                Ok(())
            }
        }
    }

    pub fn adjoint(&self) -> Vec<GateOp> {
        match *self {
            GateOp::Single { gate, target } => gate
                .adjoint()
                .into_iter()
                .map(|gate| GateOp::Single { gate, target })
                .collect(),
            GateOp::Cnot { .. } => vec![*self],
        }
    }

    pub fn is_basis(&self) -> bool {
        match self {
            GateOp::Single { gate, .. } => gate.is_basis(),
            GateOp::Cnot { .. } => true,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(
            self,
            GateOp::Single {
                gate: Gate::Identity,
                ..
            }
        )
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateOp::Single { gate, target } => write!(f, "{gate} q[{target}]"),
            GateOp::Cnot { control, target } => write!(f, "cx q[{control}],q[{target}]"),
        }
    }
}

/// Local matrix of an operation: 2x2 for single-qubit kinds, 4x4 for CNOT
/// with the control as the high-order (left) qubit.
pub fn gate_matrix(op: &GateOp) -> DMatrix<Complex64> {
    match op {
        GateOp::Single { gate, .. } => {
            let m = gate.matrix();
            DMatrix::from_fn(2, 2, |i, j| m[i][j])
        }
        GateOp::Cnot { .. } => {
            let mut m = DMatrix::zeros(4, 4);
            m[(0, 0)] = ONE;
            m[(1, 1)] = ONE;
            m[(2, 3)] = ONE;
            m[(3, 2)] = ONE;
            m
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() < tol))
    }

    /// |Tr(A^dagger B)| == 2 iff A and B agree up to a global phase.
    fn equal_up_to_phase(a: &Mat2, b: &Mat2) -> bool {
        let p = mat2_mul(&mat2_adjoint(a), b);
        ((p[0][0] + p[1][1]).norm() - 2.0).abs() < 1e-12
    }

    #[test]
    fn u_at_zero_is_identity() {
        let m = Gate::U {
            theta: 0.0,
            phi: 0.0,
            lambda: 0.0,
        }
        .matrix();
        assert!(close(&m, &Gate::Identity.matrix(), 1e-15));
    }

    #[test]
    fn u_at_pi_matches_closed_form() {
        let m = Gate::U {
            theta: PI,
            phi: 0.0,
            lambda: 0.0,
        }
        .matrix();
        let expected = [[ZERO, -ONE], [ONE, ZERO]];
        assert!(close(&m, &expected, 1e-15));
    }

    #[test]
    fn sqrt_x_squares_to_x() {
        let sx = Gate::SqrtX.matrix();
        let sq = mat2_mul(&sx, &sx);
        assert!(equal_up_to_phase(&sq, &Gate::X.matrix()));
        // this particular SqrtX squares to X exactly
        assert!(close(&sq, &Gate::X.matrix(), 1e-15));
    }

    #[test]
    fn adjoints_invert() {
        let gates = [
            Gate::Identity,
            Gate::X,
            Gate::SqrtX,
            Gate::Rz(0.37),
            Gate::U {
                theta: 1.1,
                phi: -0.4,
                lambda: 2.9,
            },
            Gate::Hadamard,
        ];
        for g in gates {
            let mut prod = g.matrix();
            for a in g.adjoint() {
                prod = mat2_mul(&a.matrix(), &prod);
            }
            assert!(close(&prod, &Gate::Identity.matrix(), 1e-14), "{g}");
        }
    }

    #[test]
    fn u_adjoint_form_is_u_theta_pi_pi() {
        let theta = 0.9;
        let adj = Gate::U {
            theta,
            phi: 0.0,
            lambda: 0.0,
        }
        .adjoint();
        assert_eq!(
            adj,
            vec![Gate::U {
                theta,
                phi: PI,
                lambda: PI
            }]
        );
        let m = Gate::U {
            theta,
            phi: 0.0,
            lambda: 0.0,
        }
        .matrix();
        assert!(equal_up_to_phase(&adj[0].matrix(), &mat2_adjoint(&m)));
    }

    #[test]
    fn rejects_non_unitary() {
        let m = [[ONE, ONE], [ZERO, ONE]];
        assert!(matches!(Unitary2::new(m), Err(Error::NonUnitary(_))));
        assert!(GateOp::unitary(0, m).is_err());
    }

    #[test]
    fn validate_indices() {
        assert!(GateOp::x(2).validate(3).is_ok());
        assert_eq!(
            GateOp::x(3).validate(3),
            Err(Error::QubitIndex {
                index: 3,
                n_qubits: 3
            })
        );
        assert_eq!(GateOp::cnot(1, 1).validate(3), Err(Error::CnotSameQubit(1)));
        assert!(matches!(
            GateOp::rz(0, f64::NAN).validate(1),
            Err(Error::NonFiniteAngle(_))
        ));
    }

    #[test]
    fn cnot_matrix_truth_table() {
        let m = gate_matrix(&GateOp::cnot(0, 1));
        // |10> -> |11>
        assert_eq!(m[(3, 2)], ONE);
        assert_eq!(m[(2, 2)], ZERO);
    }
}
