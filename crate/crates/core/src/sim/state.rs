use num_complex::Complex64;

use super::gate::{Gate, GateOp, Mat2};
use super::MAX_QUBITS;
use crate::error::{Error, Result};

/// Dense state vector over `n_qubits` qubits.
///
/// Qubit 0 is the leftmost symbol of a ket string: basis state
/// `|b0 b1 ... b(n-1)>` sits at index `sum_i b_i * 2^(n-1-i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

pub(crate) fn check_qubit_count(n_qubits: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n_qubits) {
        Ok(())
    } else {
        Err(Error::QubitCount(n_qubits))
    }
}

/// `|0...0>` on `n_qubits` qubits.
pub fn zero_state(n_qubits: usize) -> Result<StateVector> {
    check_qubit_count(n_qubits)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    amplitudes[0] = Complex64::new(1.0, 0.0);
    Ok(StateVector {
        n_qubits,
        amplitudes,
    })
}

/// `<a|b> = sum_k conj(a_k) b_k`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::DimensionMismatch {
            left: a.n_qubits,
            right: b.n_qubits,
        });
    }
    Ok(a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

impl StateVector {
    /// Builds a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubit_count(n_qubits)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Parameter("amplitudes have zero norm".into()));
        }
        Ok(Self {
            n_qubits,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Wraps amplitudes already known to be normalized.
    pub(crate) fn from_unit_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Bit mask of `qubit` within a basis index.
    pub fn qubit_mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Consumes the state and returns `U * state`.
    pub fn apply(mut self, op: &GateOp) -> Result<Self> {
        self.apply_in_place(op)?;
        Ok(self)
    }

    pub fn apply_in_place(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        match *op {
            GateOp::Single { gate, target } => self.apply_single(&gate, target),
            GateOp::Cnot { control, target } => self.apply_cnot(control, target),
        }
        Ok(())
    }

    fn apply_single(&mut self, gate: &Gate, target: usize) {
        let mask = self.qubit_mask(target);
        match *gate {
            Gate::Identity => {}
            Gate::X => {
                for i in (0..self.dim()).filter(|i| i & mask == 0) {
                    self.amplitudes.swap(i, i | mask);
                }
            }
            Gate::Rz(phi) => {
                let lo = Complex64::from_polar(1.0, -phi / 2.0);
                let hi = Complex64::from_polar(1.0, phi / 2.0);
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    *a *= if i & mask == 0 { lo } else { hi };
                }
            }
            _ => self.apply_mat2(&gate.matrix(), mask),
        }
    }

    fn apply_mat2(&mut self, m: &Mat2, mask: usize) {
        // pairs (i, i|mask) with the target bit clear in i
        let block = mask << 1;
        for base in (0..self.dim()).step_by(block) {
            for i in base..base + mask {
                let j = i | mask;
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[j];
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cmask = self.qubit_mask(control);
        let tmask = self.qubit_mask(target);
        for i in 0..self.dim() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amplitudes.swap(i, i | tmask);
            }
        }
    }
}

/// Formats basis index `index` as an `n_qubits`-symbol ket string, qubit 0 first.
pub fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| {
            if index >> (n_qubits - 1 - q) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Inverse of [`bitstring`].
pub fn parse_bitstring(bits: &str) -> Option<usize> {
    if bits.is_empty() || bits.len() > MAX_QUBITS {
        return None;
    }
    bits.chars().try_fold(0usize, |acc, c| match c {
        '0' => Some(acc << 1),
        '1' => Some(acc << 1 | 1),
        _ => None,
    })
}
