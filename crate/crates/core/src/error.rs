//! Error type shared by every module.

use thiserror::Error;

/// Failures surfaced by the library. Reporting operations never fail; these
/// are reserved for violated preconditions and numerical breakdown.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A coordinate value lies outside its chart.
    #[error("{chart} coordinate {value} is outside the chart domain {domain}")]
    Domain { chart: &'static str, value: f64, domain: &'static str },
    /// An s-chart blend that is not strictly increasing or otherwise invalid.
    #[error("invalid s-chart blend: {0}")]
    Chart(String),
    /// A caller-supplied parameter is out of range.
    #[error("invalid parameter {name}: {reason}")]
    Parameter { name: &'static str, reason: String },
    /// Input samples are unusable (non-finite, wrong length, not decaying).
    #[error("invalid data: {0}")]
    Data(String),
    /// A point lies outside the sampled grid.
    #[error("point p = {p} is outside the grid hull [{lo}, {hi}]")]
    Extrapolation { p: f64, lo: f64, hi: f64 },
    /// Assembled matrices are unusable.
    #[error("assembly failed: {0}")]
    Assembly(String),
    /// An iterative solver did not converge; the last Rayleigh quotient is kept.
    #[error("solver did not converge after {iterations} iterations (last Rayleigh quotient {last_value})")]
    NoConvergence { iterations: usize, last_value: f64 },
    /// A banded factorization hit a non-positive pivot.
    #[error("factorization failed at row {row}: pivot {pivot}")]
    Factorization { row: usize, pivot: f64 },
    /// The flow left the region where the metric is controlled.
    #[error("flow failed at t = {t}: {reason}")]
    Flow { t: f64, reason: String },
    /// Characteristics of the de Turck transport equation crossed.
    #[error("characteristics cross near x = {x} at delta = {delta}")]
    CharacteristicCrossing { x: f64, delta: f64 },
    /// Configuration file problems.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
