use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("path diverged at t = {t} (|x| = {value:e})")]
    Divergence { t: f64, value: f64 },
    #[error("drift must be strictly positive along the null solution (S*({x}) = {value} at t = {t})")]
    NonPositiveDrift { t: f64, x: f64, value: f64 },
    #[error("unnormalizable invariant density: {0}")]
    NonIntegrable(String),
    #[error("negative intensity {value} at t = {t}")]
    NegativeIntensity { t: f64, value: f64 },
    #[error("branching ratio {0} is not below 1; the process is not stationary")]
    Explosive(f64),
    #[error("record has no period metadata")]
    MissingPeriod,
    #[error("no calibrated threshold for {kind} at alpha = {alpha} ({horizon})")]
    MissingThreshold { kind: String, alpha: f64, horizon: String },
    #[error("{aborted} of {total} replicates diverged, above the 0.01% budget")]
    TooManyAborts { aborted: usize, total: usize },
    #[error("drift parameter is not defined for the {0} context")]
    UnsupportedContext(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
