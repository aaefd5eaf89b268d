use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::fmt;
use std::str::FromStr;

use qdist::models::{
    cat_fact_overlap_oracle, cat_state_circuit, factorized_state_circuit, hs_example_ensembles, hs_example_oracle,
    ising_evolution_circuit, ising_gtt_oracle, ising_hamiltonian, ising_overlap_oracle, one_qubit_state_circuit,
    spin_field_hamiltonian, spin_overlap_oracle, spin_speed_oracle, IsingParams, SpinFieldParams,
};
use qdist::noise::NoiseModel;
use qdist::protocols::{
    evolution_speed_estimate, hilbert_schmidt_circuits, hilbert_schmidt_estimate, overlap, overlap_circuit,
    rotation_circuit_for, Hamiltonian, MetricConfig, PauliString, PureDistance, Sampling,
};
use qdist::sim::{derive_seed, Circuit};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::output::fmt_sig;

const CHAIN: usize = 5;
const CAT_QUBITS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    SpinDistance,
    SpinSpeed,
    CatFactTheta,
    CatFactPhi,
    IsingDistance,
    IsingSpeed,
    HsMixed,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Self::SpinDistance,
        Self::SpinSpeed,
        Self::CatFactTheta,
        Self::CatFactPhi,
        Self::IsingDistance,
        Self::IsingSpeed,
        Self::HsMixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SpinDistance => "spin-distance",
            Self::SpinSpeed => "spin-speed",
            Self::CatFactTheta => "cat-fact-theta",
            Self::CatFactPhi => "cat-fact-phi",
            Self::IsingDistance => "ising-distance",
            Self::IsingSpeed => "ising-speed",
            Self::HsMixed => "hs-mixed",
        }
    }

    /// Name of the swept parameter.
    pub fn param(self) -> &'static str {
        match self {
            Self::CatFactPhi => "phi",
            Self::IsingDistance => "chi",
            _ => "theta",
        }
    }

    pub fn default_sweep(self) -> Sweep {
        match self {
            Self::IsingDistance => Sweep::new(0.0, 4.0 * PI, PI / 10.0),
            _ => Sweep::new(0.0, 2.0 * PI, PI / 20.0),
        }
    }

    /// Experiments reported as one of the pure-state distances.
    pub fn is_distance(self) -> bool {
        matches!(
            self,
            Self::SpinDistance | Self::CatFactTheta | Self::CatFactPhi | Self::IsingDistance
        )
    }

    /// Experiments that run one sub-sweep per entry of the `theta` list.
    pub fn has_theta_series(self) -> bool {
        matches!(self, Self::CatFactPhi | Self::IsingDistance)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| CliError::UnknownExperiment(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

const MAX_POINTS: usize = 1_000_000;

impl Sweep {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        Self { start, stop, step }
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.start, self.stop, self.step].iter().all(|v| v.is_finite()) {
            return Err(CliError::Sweep("bounds and step must be finite".into()));
        }
        if self.step <= 0.0 {
            return Err(CliError::Sweep(format!("step must be positive, got {}", self.step)));
        }
        if self.stop < self.start {
            return Err(CliError::Sweep(format!("stop {} is below start {}", self.stop, self.start)));
        }
        if (self.stop - self.start) / self.step >= MAX_POINTS as f64 {
            return Err(CliError::Sweep("too many points".into()));
        }
        Ok(())
    }

    /// `start + k step` for every `k` that stays within `stop` (up to rounding).
    pub fn points(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|k| self.start + k as f64 * self.step).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sampled,
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Self::Exact),
            "sampled" => Ok(Self::Sampled),
            _ => Err(CliError::Invalid(format!("mode must be exact or sampled, got {s:?}"))),
        }
    }
}

pub const DEFAULT_SHOTS: u64 = 1024;
pub const DEFAULT_THETAS: [f64; 4] = [FRAC_PI_2, 3.0 * FRAC_PI_8, FRAC_PI_4, FRAC_PI_8];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub sweep: Sweep,
    /// Fixed `phi` of the prepared states (ignored when `phi` is swept).
    pub phi: f64,
    /// One sub-sweep per value for `cat-fact-phi` and `ising-distance`.
    pub thetas: Vec<f64>,
    pub omega: f64,
    pub j: f64,
    pub shots: u64,
    pub seed: u64,
    pub noise: Option<NoiseModel>,
    pub mode: Mode,
    pub metric: MetricConfig,
    pub distances: Vec<PureDistance>,
}

impl ExperimentSpec {
    /// Defaults: figure sweep, 1024 sampled shots, seed 0, no noise,
    /// `gamma = 1`, Fubini–Study distance. `gamma'` is 1 for `hs-mixed` and
    /// `1/sqrt(2)` otherwise.
    pub fn new(experiment: Experiment) -> Self {
        let gamma_prime = if experiment == Experiment::HsMixed { 1.0 } else { FRAC_1_SQRT_2 };
        Self {
            experiment,
            sweep: experiment.default_sweep(),
            phi: 0.0,
            thetas: DEFAULT_THETAS.to_vec(),
            omega: 1.0,
            j: 1.0,
            shots: DEFAULT_SHOTS,
            seed: 0,
            noise: None,
            mode: Mode::Sampled,
            metric: MetricConfig::new(1.0, gamma_prime).expect("positive defaults"),
            distances: vec![PureDistance::FubiniStudy],
        }
    }

    pub fn exact(mut self) -> Self {
        self.mode = Mode::Exact;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.sweep.validate()?;
        if self.mode == Mode::Sampled && self.shots == 0 {
            return Err(CliError::Invalid("sampled mode needs shots >= 1".into()));
        }
        if self.experiment.has_theta_series() && self.thetas.is_empty() {
            return Err(CliError::Invalid("theta list is empty".into()));
        }
        if self.experiment.is_distance() && self.distances.is_empty() {
            return Err(CliError::Invalid("no distance selected".into()));
        }
        for (name, v) in [("phi", self.phi), ("omega", self.omega), ("J", self.j)] {
            if !v.is_finite() {
                return Err(CliError::Invalid(format!("{name} must be finite")));
            }
        }
        if self.j == 0.0 {
            return Err(CliError::Invalid("J must be non-zero".into()));
        }
        Ok(())
    }

    /// Seed of point `point` in sub-sweep `series`.
    pub fn point_seed(&self, series: usize, point: usize) -> u64 {
        derive_seed(derive_seed(self.seed, series as u64), point as u64)
    }

    pub fn sampling(&self, series: usize, point: usize) -> Sampling {
        match self.mode {
            Mode::Exact => Sampling::exact(),
            Mode::Sampled => Sampling {
                shots: self.shots,
                seed: self.point_seed(series, point),
                noise: self.noise.clone(),
            },
        }
    }

    fn series(&self) -> Vec<Option<f64>> {
        if self.experiment.has_theta_series() {
            self.thetas.iter().copied().map(Some).collect()
        } else {
            vec![None]
        }
    }

    fn quantities(&self) -> Vec<String> {
        match self.experiment {
            e if e.is_distance() => self.distances.iter().map(|d| format!("{d} distance")).collect(),
            Experiment::SpinSpeed | Experiment::IsingSpeed => vec!["speed".into()],
            _ => vec!["hs distance".into()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Row {
    pub param: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub oracle: f64,
}

/// One curve: a sweep at fixed auxiliary parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    /// Distinguishes curves of a multi-curve run, e.g. `theta_0.3926990817`.
    pub label: Option<String>,
    pub param: String,
    pub quantity: String,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn new(param: impl Into<String>, quantity: impl Into<String>) -> Self {
        Self {
            label: None,
            param: param.into(),
            quantity: quantity.into(),
            rows: Vec::new(),
        }
    }

    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| (r.estimate - r.oracle).abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub experiment: Experiment,
    pub tables: Vec<Table>,
}

fn spin_params(spec: &ExperimentSpec, theta: f64) -> Result<SpinFieldParams> {
    Ok(SpinFieldParams::along_z(spec.omega, theta, spec.phi)?)
}

fn ising_params(spec: &ExperimentSpec, chi: f64, theta: f64) -> Result<IsingParams> {
    Ok(IsingParams::new(spec.j, chi, theta, spec.phi, CHAIN)?)
}

/// Circuit pair whose overlap a distance experiment measures, and the
/// closed-form overlap.
fn overlap_setup(spec: &ExperimentSpec, theta: Option<f64>, x: f64) -> Result<(Circuit, Circuit, f64)> {
    let phi = spec.phi;
    Ok(match spec.experiment {
        Experiment::SpinDistance => (
            Circuit::new(1)?,
            one_qubit_state_circuit(x, phi)?,
            spin_overlap_oracle(x),
        ),
        Experiment::CatFactTheta => (
            cat_state_circuit(CAT_QUBITS)?,
            factorized_state_circuit(CAT_QUBITS, x, phi)?,
            cat_fact_overlap_oracle(x, phi),
        ),
        Experiment::CatFactPhi => {
            let theta = theta.expect("series experiment");
            (
                cat_state_circuit(CAT_QUBITS)?,
                factorized_state_circuit(CAT_QUBITS, theta, x)?,
                cat_fact_overlap_oracle(theta, x),
            )
        }
        Experiment::IsingDistance => {
            let theta = theta.expect("series experiment");
            (
                factorized_state_circuit(CHAIN, theta, phi)?,
                ising_evolution_circuit(&ising_params(spec, x, theta)?)?,
                ising_overlap_oracle(x, theta),
            )
        }
        other => unreachable!("{other} is not an overlap experiment"),
    })
}

fn speed_setup(spec: &ExperimentSpec, x: f64) -> Result<(Hamiltonian, Circuit, f64)> {
    let gamma = spec.metric.gamma();
    Ok(match spec.experiment {
        Experiment::SpinSpeed => (
            spin_field_hamiltonian(&spin_params(spec, x)?)?,
            one_qubit_state_circuit(x, spec.phi)?,
            spin_speed_oracle(x, spec.omega, gamma),
        ),
        Experiment::IsingSpeed => (
            ising_hamiltonian(spec.j, CHAIN)?,
            factorized_state_circuit(CHAIN, x, spec.phi)?,
            ising_gtt_oracle(x, spec.j, gamma).max(0.0).sqrt(),
        ),
        other => unreachable!("{other} is not a speed experiment"),
    })
}

/// One row per reported quantity at sweep value `x`.
fn evaluate(spec: &ExperimentSpec, theta: Option<f64>, x: f64, sampling: &Sampling) -> Result<Vec<Row>> {
    let row = |estimate: f64, std_error: f64, oracle: f64| Row {
        param: x,
        estimate,
        std_error,
        oracle,
    };
    match spec.experiment {
        e if e.is_distance() => {
            let (u1, u2, p_oracle) = overlap_setup(spec, theta, x)?;
            let p = overlap(&u1, &u2, sampling)?;
            Ok(spec
                .distances
                .iter()
                .map(|d| {
                    let (value, se) = d.estimate(&p, &spec.metric);
                    row(value, se, d.eval(p_oracle, &spec.metric))
                })
                .collect())
        }
        Experiment::SpinSpeed | Experiment::IsingSpeed => {
            let (h, prep, oracle) = speed_setup(spec, x)?;
            let v = evolution_speed_estimate(&h, &prep, &spec.metric, sampling)?;
            Ok(vec![row(v.value, v.std_error, oracle)])
        }
        _ => {
            let (rho1, rho2) = hs_example_ensembles(x)?;
            let d = hilbert_schmidt_estimate(&rho1, &rho2, &spec.metric, sampling)?;
            Ok(vec![row(d.value, d.std_error, hs_example_oracle(x, spec.metric.gamma_prime()))])
        }
    }
}

fn series_label(theta: Option<f64>, quantity: Option<&str>) -> Option<String> {
    let mut parts = Vec::new();
    if let Some(t) = theta {
        parts.push(format!("theta_{}", fmt_sig(t)));
    }
    if let Some(q) = quantity {
        parts.push(q.to_string());
    }
    (!parts.is_empty()).then(|| parts.join("_"))
}

/// Runs every sweep point (in parallel, each with its own derived seed) and
/// assembles the tables in sweep order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let points = spec.sweep.points()?;
    let quantities = spec.quantities();
    let multi_quantity = quantities.len() > 1;
    let mut tables = Vec::new();
    for (si, theta) in spec.series().into_iter().enumerate() {
        let rows: Vec<Vec<Row>> = points
            .par_iter()
            .enumerate()
            .map(|(k, &x)| evaluate(spec, theta, x, &spec.sampling(si, k)))
            .collect::<Result<_>>()?;
        for (qi, quantity) in quantities.iter().enumerate() {
            let tag = multi_quantity.then(|| spec.distances[qi].name());
            tables.push(Table {
                label: series_label(theta, tag),
                param: spec.experiment.param().to_string(),
                quantity: quantity.clone(),
                rows: rows.iter().map(|r| r[qi]).collect(),
            });
        }
    }
    Ok(ExperimentResult {
        experiment: spec.experiment,
        tables,
    })
}

/// Every distinct non-identity string measured for `<H>` and `<H^2>`.
fn measured_strings(h: &Hamiltonian) -> Result<BTreeSet<PauliString>> {
    let mut out = BTreeSet::new();
    for (_, a) in h.terms() {
        out.insert(a.clone());
        for (_, b) in h.terms() {
            out.insert(a.mul(b)?.1);
        }
    }
    out.retain(|s| !s.is_identity());
    Ok(out)
}

/// A circuit run on the device for one sweep point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCircuit {
    pub series: Option<f64>,
    pub param: f64,
    /// Distinguishes several circuits at one point (`pair2`, `ZZIII`, ...).
    pub tag: Option<String>,
    pub circuit: Circuit,
}

/// The measurement circuits of every sweep point, before transpilation.
pub fn point_circuits(spec: &ExperimentSpec) -> Result<Vec<PointCircuit>> {
    spec.validate()?;
    let points = spec.sweep.points()?;
    let mut out = Vec::new();
    for theta in spec.series() {
        for &x in &points {
            let push = |out: &mut Vec<PointCircuit>, tag: Option<String>, circuit: Circuit| {
                out.push(PointCircuit {
                    series: theta,
                    param: x,
                    tag,
                    circuit,
                })
            };
            match spec.experiment {
                e if e.is_distance() => {
                    let (u1, u2, _) = overlap_setup(spec, theta, x)?;
                    push(&mut out, None, overlap_circuit(&u1, &u2)?);
                }
                Experiment::SpinSpeed | Experiment::IsingSpeed => {
                    let (h, prep, _) = speed_setup(spec, x)?;
                    for s in measured_strings(&h)? {
                        push(&mut out, Some(s.to_string()), prep.then(&rotation_circuit_for(&s)?)?);
                    }
                }
                _ => {
                    let (rho1, rho2) = hs_example_ensembles(x)?;
                    for (k, c) in hilbert_schmidt_circuits(&rho1, &rho2)?.into_iter().enumerate() {
                        push(&mut out, Some(format!("pair{k}")), c);
                    }
                }
            }
        }
    }
    Ok(out)
}
