use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use super::measure::{overlap, OverlapEstimate, Sampling};
use crate::error::{Error, Result};
use crate::sim::Circuit;

/// Scale factors of the distance measures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricConfig {
    gamma: f64,
    gamma_prime: f64,
}

impl Default for MetricConfig {
    /// `gamma = 1`, `gamma' = 1/sqrt(2)`: pure-state Hilbert–Schmidt and
    /// Fubini–Study distances then coincide.
    fn default() -> Self {
        Self {
            gamma: 1.0,
            gamma_prime: FRAC_1_SQRT_2,
        }
    }
}

impl MetricConfig {
    pub fn new(gamma: f64, gamma_prime: f64) -> Result<Self> {
        for (name, v) in [("gamma", gamma), ("gamma_prime", gamma_prime)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { gamma, gamma_prime })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn gamma_prime(&self) -> f64 {
        self.gamma_prime
    }
}

/// `gamma sqrt(1 - p)`.
pub fn fubini_study_distance(p: &OverlapEstimate, cfg: &MetricConfig) -> f64 {
    PureDistance::FubiniStudy.eval(p.value, cfg)
}

/// `gamma arccos(sqrt(p))`.
pub fn wootters_distance(p: &OverlapEstimate, cfg: &MetricConfig) -> f64 {
    PureDistance::Wootters.eval(p.value, cfg)
}

/// `gamma sqrt(2 (1 - sqrt(p)))`.
pub fn minimal_distance(p: &OverlapEstimate, cfg: &MetricConfig) -> f64 {
    PureDistance::Minimal.eval(p.value, cfg)
}

/// The pure-state distances, all functions of the overlap `p = |<psi1|psi2>|^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PureDistance {
    FubiniStudy,
    Wootters,
    Minimal,
}

impl PureDistance {
    pub const ALL: [PureDistance; 3] = [Self::FubiniStudy, Self::Wootters, Self::Minimal];

    pub fn eval(self, p: f64, cfg: &MetricConfig) -> f64 {
        let p = p.clamp(0.0, 1.0);
        let d = match self {
            Self::FubiniStudy => (1.0 - p).max(0.0).sqrt(),
            Self::Wootters => p.sqrt().min(1.0).acos(),
            Self::Minimal => (2.0 * (1.0 - p.sqrt())).max(0.0).sqrt(),
        };
        cfg.gamma * d
    }

    /// Distance of an overlap estimate and its error, the latter taken as
    /// half the width of the image of `[p - se, p + se]`. This stays finite
    /// near `p = 0` and `p = 1` where the derivatives blow up.
    pub fn estimate(self, p: &OverlapEstimate, cfg: &MetricConfig) -> (f64, f64) {
        let value = self.eval(p.value, cfg);
        if p.std_error == 0.0 {
            return (value, 0.0);
        }
        let lo = self.eval(p.value - p.std_error, cfg);
        let hi = self.eval(p.value + p.std_error, cfg);
        (value, (lo - hi).abs() / 2.0)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::FubiniStudy => "fs",
            Self::Wootters => "wootters",
            Self::Minimal => "minimal",
        }
    }
}

impl fmt::Display for PureDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PureDistance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fs" | "fubini-study" | "fubini_study" => Ok(Self::FubiniStudy),
            "wootters" => Ok(Self::Wootters),
            "minimal" | "min" => Ok(Self::Minimal),
            _ => Err(Error::Parameter(format!("unknown distance {s:?}"))),
        }
    }
}

/// Mixed state `rho = sum_a w_a |psi_a><psi_a|` given as weighted
/// preparation circuits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureStateEnsemble {
    components: Vec<(f64, Circuit)>,
}

const WEIGHT_SUM_TOL: f64 = 1e-12;

impl PureStateEnsemble {
    pub fn new(components: Vec<(f64, Circuit)>) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::Ensemble("no components".into()));
        };
        let n = first.n_qubits();
        if let Some((_, c)) = components.iter().find(|(_, c)| c.n_qubits() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: c.n_qubits(),
            });
        }
        if let Some((w, _)) = components.iter().find(|(w, _)| !(*w > 0.0 && *w <= 1.0)) {
            return Err(Error::Ensemble(format!("weight {w} not in (0, 1]")));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Ensemble(format!("weights sum to {total}")));
        }
        Ok(Self { components })
    }

    /// A pure state as a one-component ensemble.
    pub fn pure(prep: Circuit) -> Self {
        Self {
            components: vec![(1.0, prep)],
        }
    }

    pub fn components(&self) -> &[(f64, Circuit)] {
        &self.components
    }

    pub fn n_qubits(&self) -> usize {
        self.components[0].1.n_qubits()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// One measured overlap entering the Hilbert–Schmidt radicand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HsTerm {
    /// Weight of the overlap in `Tr rho1^2 + Tr rho2^2 - 2 Tr rho1 rho2`.
    pub coefficient: f64,
    pub overlap: OverlapEstimate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HsEstimate {
    pub value: f64,
    /// Unclamped `Tr rho1^2 + Tr rho2^2 - 2 Tr rho1 rho2`.
    pub radicand: f64,
    /// Binomial errors of all overlaps pooled through the radicand and the
    /// square root; 0 in exact mode.
    pub std_error: f64,
    pub terms: Vec<HsTerm>,
}

/// Every overlap the radicand needs: unordered pairs (diagonal included)
/// inside each ensemble, and all cross pairs.
fn hs_pairs<'a>(rho1: &'a PureStateEnsemble, rho2: &'a PureStateEnsemble) -> Vec<(f64, &'a Circuit, &'a Circuit)> {
    let mut pairs = Vec::new();
    for rho in [rho1, rho2] {
        let c = rho.components();
        for a in 0..c.len() {
            for b in a..c.len() {
                let mult = if a == b { 1.0 } else { 2.0 };
                pairs.push((mult * c[a].0 * c[b].0, &c[a].1, &c[b].1));
            }
        }
    }
    for (wa, ca) in rho1.components() {
        for (wb, cb) in rho2.components() {
            pairs.push((-2.0 * wa * wb, ca, cb));
        }
    }
    pairs
}

/// The overlap circuits behind a Hilbert–Schmidt measurement, in the order
/// their seeds are derived.
pub fn hilbert_schmidt_circuits(rho1: &PureStateEnsemble, rho2: &PureStateEnsemble) -> Result<Vec<Circuit>> {
    check_widths(rho1, rho2)?;
    hs_pairs(rho1, rho2)
        .into_iter()
        .map(|(_, a, b)| super::measure::overlap_circuit(a, b))
        .collect()
}

fn check_widths(rho1: &PureStateEnsemble, rho2: &PureStateEnsemble) -> Result<()> {
    if rho1.n_qubits() != rho2.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: rho1.n_qubits(),
            right: rho2.n_qubits(),
        });
    }
    Ok(())
}

/// `gamma' sqrt(Tr rho1^2 + Tr rho2^2 - 2 Tr rho1 rho2)` with every trace
/// expanded into pairwise overlaps. Overlap `k` is measured with
/// `sampling.child(k)` and a full shot budget of its own.
pub fn hilbert_schmidt_estimate(
    rho1: &PureStateEnsemble,
    rho2: &PureStateEnsemble,
    cfg: &MetricConfig,
    sampling: &Sampling,
) -> Result<HsEstimate> {
    check_widths(rho1, rho2)?;
    let terms = hs_pairs(rho1, rho2)
        .into_iter()
        .enumerate()
        .map(|(k, (coefficient, a, b))| {
            Ok(HsTerm {
                coefficient,
                overlap: overlap(a, b, &sampling.child(k as u64))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let radicand: f64 = terms.iter().map(|t| t.coefficient * t.overlap.value).sum();
    let value = cfg.gamma_prime * radicand.max(0.0).sqrt();
    let radicand_se = terms
        .iter()
        .map(|t| (t.coefficient * t.overlap.std_error).powi(2))
        .sum::<f64>()
        .sqrt();
    let std_error = if radicand_se == 0.0 {
        0.0
    } else if radicand > 0.0 {
        cfg.gamma_prime * radicand_se / (2.0 * radicand.sqrt())
    } else {
        cfg.gamma_prime * radicand_se.sqrt()
    };
    Ok(HsEstimate {
        value,
        radicand,
        std_error,
        terms,
    })
}

pub fn hilbert_schmidt_distance(
    rho1: &PureStateEnsemble,
    rho2: &PureStateEnsemble,
    cfg: &MetricConfig,
    sampling: &Sampling,
) -> Result<f64> {
    Ok(hilbert_schmidt_estimate(rho1, rho2, cfg, sampling)?.value)
}
