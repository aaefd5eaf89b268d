use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use qdist::noise::NoiseModel;
use qdist::protocols::{MetricConfig, PureDistance};

use crate::angle::parse_angle;
use crate::error::{CliError, Result};
use crate::experiment::{Experiment, ExperimentSpec, Mode, Sweep, DEFAULT_SHOTS};

fn angle_arg(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn experiment_arg(s: &str) -> std::result::Result<Experiment, String> {
    s.parse().map_err(|e: CliError| {
        let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

fn mode_arg(s: &str) -> std::result::Result<Mode, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

/// Parameter sweeps of the distance and speed experiments.
#[derive(Clone, Debug, Parser, PartialEq)]
#[command(name = "qdist", version, args_override_self = true)]
pub struct Args {
    /// spin-distance, spin-speed, cat-fact-theta, cat-fact-phi,
    /// ising-distance, ising-speed or hs-mixed
    #[arg(long, value_parser = experiment_arg)]
    pub experiment: Experiment,

    /// Flat key=value file with the same keys as the long flags.
    /// Flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    pub shots: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// exact or sampled
    #[arg(long, default_value = "sampled", value_parser = mode_arg)]
    pub mode: Mode,

    /// off, default, or a key=value noise file
    #[arg(long, default_value = "off")]
    pub noise: String,

    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,

    /// Defaults to 1 for hs-mixed and 1/sqrt(2) otherwise.
    #[arg(long)]
    pub gamma_prime: Option<f64>,

    /// fs, wootters, minimal or all
    #[arg(long, default_value = "fs")]
    pub distance: String,

    #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
    pub start: Option<f64>,
    #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
    pub stop: Option<f64>,
    #[arg(long, value_parser = angle_arg)]
    pub step: Option<f64>,

    /// Fixed phi of the prepared states.
    #[arg(long, value_parser = angle_arg, default_value = "0", allow_hyphen_values = true)]
    pub phi: f64,

    /// Comma-separated theta values of the sub-sweeps of cat-fact-phi and
    /// ising-distance.
    #[arg(long, value_parser = angle_arg, value_delimiter = ',', allow_hyphen_values = true)]
    pub thetas: Option<Vec<f64>>,

    /// Field strength of the spin experiments.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,

    /// Coupling of the Ising experiments.
    #[arg(long = "j", default_value_t = 1.0, allow_hyphen_values = true)]
    pub j: f64,

    /// CSV output path; multi-curve runs write `<stem>_<label>.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write an SVG chart next to each CSV file.
    #[arg(long)]
    pub svg: bool,

    /// Directory for one OpenQASM file per measured circuit.
    #[arg(long)]
    pub qasm_dir: Option<PathBuf>,
}

fn config_error(path: &Path, line: usize, msg: impl Into<String>) -> CliError {
    CliError::Config {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Non-empty, non-comment `key = value` lines of a flat config file.
fn key_values(path: &Path) -> Result<Vec<(usize, String, String)>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_error(path, i + 1, format!("expected key=value, found {line:?}")))?;
        out.push((i + 1, k.trim().replace('_', "-"), v.trim().to_string()));
    }
    Ok(out)
}

/// Turns a config file into the equivalent flags.
pub fn config_flags(path: &Path) -> Result<Vec<OsString>> {
    let mut flags = Vec::new();
    for (line, key, value) in key_values(path)? {
        match (key.as_str(), value.as_str()) {
            ("config", _) => return Err(config_error(path, line, "config files cannot include other config files")),
            ("svg", "true") => flags.push("--svg".into()),
            ("svg", "false") => {}
            ("svg", other) => return Err(config_error(path, line, format!("svg must be true or false, got {other:?}"))),
            _ => flags.push(format!("--{key}={value}").into()),
        }
    }
    Ok(flags)
}

/// Parses the command line, splicing in `--config` entries ahead of the
/// real flags so that the latter win.
pub fn parse_args<I, T>(argv: I) -> std::result::Result<Args, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    // a missing --experiment may come from the config file, so look for the
    // path without requiring a complete command line
    let config = argv.iter().enumerate().find_map(|(i, a)| {
        let s = a.to_str()?;
        if let Some(p) = s.strip_prefix("--config=") {
            Some(PathBuf::from(p))
        } else if s == "--config" {
            argv.get(i + 1).map(PathBuf::from)
        } else {
            None
        }
    });
    let Some(path) = config else {
        return Args::try_parse_from(argv);
    };
    let file_flags = config_flags(&path).map_err(|e| clap::Error::raw(clap::error::ErrorKind::Io, format!("{e}\n")))?;
    let mut merged = Vec::with_capacity(argv.len() + file_flags.len());
    merged.extend(argv.first().cloned());
    merged.extend(file_flags);
    merged.extend(argv.into_iter().skip(1));
    Args::try_parse_from(merged)
}

/// Reads a key=value noise file: `readout_flip_prob` (one value for every
/// qubit, or a comma-separated list), `gate_error_prob_1q`,
/// `gate_error_prob_2q`. Missing keys keep their defaults.
pub fn parse_noise_file(path: &Path) -> Result<NoiseModel> {
    let defaults = NoiseModel::default();
    let mut readout = defaults.readout_flip_prob().to_vec();
    let mut p1 = defaults.gate_error_prob_1q();
    let mut p2 = defaults.gate_error_prob_2q();
    for (line, key, value) in key_values(path)? {
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| config_error(path, line, format!("bad number {s:?}")))
        };
        match key.as_str() {
            "readout-flip-prob" => readout = value.split(',').map(number).collect::<Result<_>>()?,
            "gate-error-prob-1q" => p1 = number(&value)?,
            "gate-error-prob-2q" => p2 = number(&value)?,
            other => return Err(config_error(path, line, format!("unknown noise key {other:?}"))),
        }
    }
    Ok(NoiseModel::new(readout, p1, p2)?)
}

pub fn parse_noise(arg: &str) -> Result<Option<NoiseModel>> {
    match arg.trim() {
        "off" | "none" => Ok(None),
        "default" => Ok(Some(NoiseModel::default())),
        path => parse_noise_file(Path::new(path)).map(Some),
    }
}

pub fn parse_distances(arg: &str) -> Result<Vec<PureDistance>> {
    if arg.trim() == "all" {
        return Ok(PureDistance::ALL.to_vec());
    }
    Ok(vec![arg.parse()?])
}

impl Args {
    pub fn to_spec(&self) -> Result<ExperimentSpec> {
        let mut spec = ExperimentSpec::new(self.experiment);
        let d = spec.sweep;
        spec.sweep = Sweep::new(
            self.start.unwrap_or(d.start),
            self.stop.unwrap_or(d.stop),
            self.step.unwrap_or(d.step),
        );
        spec.phi = self.phi;
        if let Some(thetas) = &self.thetas {
            spec.thetas = thetas.clone();
        }
        spec.omega = self.omega;
        spec.j = self.j;
        spec.shots = self.shots;
        spec.seed = self.seed;
        spec.mode = self.mode;
        spec.noise = parse_noise(&self.noise)?;
        spec.metric = MetricConfig::new(self.gamma, self.gamma_prime.unwrap_or(spec.metric.gamma_prime()))?;
        spec.distances = parse_distances(&self.distance)?;
        spec.validate()?;
        Ok(spec)
    }
}
