use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error("bad sweep: {0}")]
    Sweep(String),
    #[error("cannot parse angle {0:?}")]
    Angle(String),
    #[error("{path}:{line}: {msg}")]
    Config { path: String, line: usize, msg: String },
    #[error("table has no rows")]
    EmptyTable,
    #[error("malformed CSV: {0}")]
    CsvFormat(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] qdist::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
