//! Parameter sweeps over the qdist protocols: result tables, CSV and SVG
//! output, and OpenQASM emission of every measured circuit.

pub mod angle;
pub mod config;
pub mod error;
pub mod experiment;
pub mod output;

pub use error::{CliError, Result};
pub use experiment::{run_experiment, Experiment, ExperimentResult, ExperimentSpec, Mode, Row, Sweep, Table};
pub use output::{emit_qasm, read_csv, render_svg, write_csv, write_svg};
