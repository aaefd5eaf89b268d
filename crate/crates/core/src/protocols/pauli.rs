use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sim::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// A power of `i`: `Phase(k)` is `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);

    pub fn i_pow(k: u8) -> Self {
        Phase(k % 4)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase::i_pow(self.0 + rhs.0)
    }
}

impl Pauli {
    /// `self * rhs = phase * result`.
    pub fn mul(self, rhs: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            (X, Y) => (Phase::i_pow(1), Z),
            (Y, Z) => (Phase::i_pow(1), X),
            (Z, X) => (Phase::i_pow(1), Y),
            (Y, X) => (Phase::i_pow(3), Z),
            (Z, Y) => (Phase::i_pow(3), X),
            (X, Z) => (Phase::i_pow(3), Y),
            _ => unreachable!(),
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, letter `k` acting on qubit `k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        crate::sim::Circuit::new(letters.len())?;
        Ok(Self { letters })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::new(vec![Pauli::I; n_qubits])
    }

    /// `Z` on each listed qubit, identity elsewhere.
    pub fn z_on(n_qubits: usize, qubits: &[usize]) -> Result<Self> {
        Self::with_letter(n_qubits, Pauli::Z, qubits)
    }

    pub fn with_letter(n_qubits: usize, letter: Pauli, qubits: &[usize]) -> Result<Self> {
        let mut letters = vec![Pauli::I; n_qubits];
        for &q in qubits {
            *letters
                .get_mut(q)
                .ok_or(Error::QubitIndex { index: q, n_qubits })? = letter;
        }
        Self::new(letters)
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Basis-index mask of the non-identity positions.
    pub fn support_mask(&self) -> usize {
        let n = self.n_qubits();
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .fold(0, |m, (q, _)| m | 1 << (n - 1 - q))
    }

    /// Letter-by-letter product with phase tracking: `self * rhs = phase * string`.
    pub fn mul(&self, rhs: &PauliString) -> Result<(Phase, PauliString)> {
        if self.n_qubits() != rhs.n_qubits() {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits(),
                right: rhs.n_qubits(),
            });
        }
        let mut phase = Phase::ONE;
        let letters = self
            .letters
            .iter()
            .zip(&rhs.letters)
            .map(|(&a, &b)| {
                let (ph, p) = a.mul(b);
                phase = phase * ph;
                p
            })
            .collect();
        Ok((phase, PauliString { letters }))
    }

    /// `P|psi>`, computed bitwise without forming the matrix.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.n_qubits() != self.n_qubits() {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits(),
                right: state.n_qubits(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); state.dim()];
        self.accumulate(state.amplitudes(), Complex64::new(1.0, 0.0), &mut out);
        Ok(StateVector::from_unit_amplitudes(state.n_qubits(), out))
    }

    /// `out += scale * P * input` on raw amplitude slices of matching length.
    pub(crate) fn accumulate(&self, input: &[Complex64], scale: Complex64, out: &mut [Complex64]) {
        let n = self.n_qubits();
        let mut flip = 0usize;
        let mut y_mask = 0usize;
        let mut z_mask = 0usize;
        for (q, p) in self.letters.iter().enumerate() {
            let bit = 1 << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    y_mask |= bit;
                }
                Pauli::Z => z_mask |= bit,
            }
        }
        let n_y = y_mask.count_ones();
        for (k, a) in input.iter().enumerate() {
            // Y|0> = i|1>, Y|1> = -i|0>: i^{n_y} * (-1)^{#Y on set bits}
            let sign_bits = ((k & z_mask).count_ones() + (k & y_mask).count_ones()) * 2;
            let phase = Phase::i_pow(((n_y + sign_bits) % 4) as u8).to_complex();
            out[k ^ flip] += phase * scale * a;
        }
    }

    /// Dense `2^n x 2^n` matrix (Kronecker product, qubit 0 leftmost).
    pub fn matrix(&self) -> DMatrix<Complex64> {
        self.letters.iter().fold(DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)), |acc, p| {
            let m = p.matrix();
            acc.kronecker(&DMatrix::from_fn(2, 2, |i, j| m[i][j]))
        })
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::Parameter(format!("bad Pauli letter {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|p| write!(f, "{}", p.symbol()))
    }
}

/// `H = sum_alpha h_alpha P_alpha` with real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl Hamiltonian {
    pub fn new(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        crate::sim::Circuit::new(n_qubits)?;
        for (h, s) in &terms {
            if !h.is_finite() {
                return Err(Error::Parameter(format!("non-finite coefficient {h}")));
            }
            if s.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    left: n_qubits,
                    right: s.n_qubits(),
                });
            }
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// Upper bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().map(|(h, _)| h.abs()).sum()
    }

    /// Unnormalized `H|psi>` amplitudes.
    pub fn apply(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); state.dim()];
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: state.n_qubits(),
            });
        }
        for (h, s) in &self.terms {
            s.accumulate(state.amplitudes(), Complex64::new(*h, 0.0), &mut out);
        }
        Ok(out)
    }

    /// `exp(-iHt)|psi>` by Taylor series over steps with `||H|| dt <= 1/2`.
    pub fn evolve(&self, state: &StateVector, t: f64) -> Result<StateVector> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: state.n_qubits(),
            });
        }
        let norm = self.norm_bound();
        if t == 0.0 || norm == 0.0 {
            return Ok(state.clone());
        }
        let steps = ((t.abs() * norm) / 0.5).ceil().max(1.0) as usize;
        let dt = t / steps as f64;
        let mut psi = state.amplitudes().to_vec();
        for _ in 0..steps {
            let mut term = psi.clone();
            for k in 1..64 {
                let mut next = vec![Complex64::new(0.0, 0.0); term.len()];
                for (h, s) in &self.terms {
                    s.accumulate(&term, Complex64::new(*h, 0.0), &mut next);
                }
                let scale = Complex64::new(0.0, -dt / k as f64);
                let mut size = 0.0;
                for (p, v) in psi.iter_mut().zip(next.iter_mut()) {
                    *v *= scale;
                    *p += *v;
                    size += v.norm_sqr();
                }
                term = next;
                if size < 1e-36 {
                    break;
                }
            }
        }
        StateVector::from_amplitudes(psi)
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let dim = 1 << self.n_qubits;
        self.terms
            .iter()
            .fold(DMatrix::zeros(dim, dim), |acc, (h, s)| acc + s.matrix() * Complex64::new(*h, 0.0))
    }
}
