use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::{bitstring, parse_bitstring, StateVector};
use crate::error::{Error, Result};

/// The generator behind every sampled result. Seeded, portable, reproducible.
pub type ShotRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ShotRng {
    ShotRng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for sub-task `index` of a computation seeded with `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base) ^ splitmix64(index.wrapping_add(0x632B_E59B_D9B4_E019)))
}

/// Histogram of measured basis states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementCounts {
    n_qubits: usize,
    shots: u64,
    seed: u64,
    counts: BTreeMap<usize, u64>,
}

impl MeasurementCounts {
    /// Builds counts from `(basis index, count)` pairs; `shots` is their sum.
    pub fn from_indices(
        n_qubits: usize,
        seed: u64,
        counts: impl IntoIterator<Item = (usize, u64)>,
    ) -> Result<Self> {
        super::state::check_qubit_count(n_qubits)?;
        let mut map = BTreeMap::new();
        for (index, c) in counts {
            if index >= 1 << n_qubits {
                return Err(Error::QubitIndex { index, n_qubits });
            }
            if c > 0 {
                *map.entry(index).or_insert(0) += c;
            }
        }
        let shots = map.values().sum();
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self {
            n_qubits,
            shots,
            seed,
            counts: map,
        })
    }

    /// Builds counts keyed by ket strings such as `"0110"`.
    pub fn from_bitstrings<'a>(
        seed: u64,
        counts: impl IntoIterator<Item = (&'a str, u64)>,
    ) -> Result<Self> {
        let mut n_qubits = None;
        let mut pairs = Vec::new();
        for (bits, c) in counts {
            let index = parse_bitstring(bits)
                .ok_or_else(|| Error::Parameter(format!("bad bitstring {bits:?}")))?;
            match n_qubits {
                None => n_qubits = Some(bits.len()),
                Some(n) if n != bits.len() => {
                    return Err(Error::DimensionMismatch {
                        left: n,
                        right: bits.len(),
                    })
                }
                _ => {}
            }
            pairs.push((index, c));
        }
        Self::from_indices(n_qubits.ok_or(Error::ZeroShots)?, seed, pairs)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Seed of the draw that produced these counts.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn count_index(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn get(&self, bits: &str) -> u64 {
        if bits.len() != self.n_qubits {
            return 0;
        }
        parse_bitstring(bits).map_or(0, |i| self.count_index(i))
    }

    pub fn frequency(&self, index: usize) -> f64 {
        self.count_index(index) as f64 / self.shots as f64
    }

    /// Non-zero entries in ascending basis-index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&i, &c)| (i, c))
    }

    pub fn to_bitstring_map(&self) -> BTreeMap<String, u64> {
        self.iter()
            .map(|(i, c)| (bitstring(i, self.n_qubits), c))
            .collect()
    }
}

/// Inverse-CDF sampler over a fixed probability vector.
pub(crate) struct OutcomeSampler {
    cumulative: Vec<f64>,
    last_nonzero: usize,
}

impl OutcomeSampler {
    pub(crate) fn new(probabilities: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumulative = probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        let last_nonzero = probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        Self {
            cumulative,
            last_nonzero,
        }
    }

    pub(crate) fn draw<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random::<f64>() * self.cumulative[self.cumulative.len() - 1];
        // first index whose cumulative mass exceeds u; never lands on a zero-probability outcome
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.last_nonzero)
    }
}

/// Draws `shots` i.i.d. computational-basis measurements of `state`.
pub fn sample_counts(state: &StateVector, shots: u64, seed: u64) -> Result<MeasurementCounts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let sampler = OutcomeSampler::new(&state.probabilities());
    let mut rng = rng_from_seed(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(sampler.draw(&mut rng)).or_insert(0u64) += 1;
    }
    Ok(MeasurementCounts {
        n_qubits: state.n_qubits(),
        shots,
        seed,
        counts,
    })
}
