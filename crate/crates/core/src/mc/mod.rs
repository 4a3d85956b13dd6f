//! Reproducible Monte Carlo: threshold calibration, limit power curves and
//! finite-sample power under contiguous alternatives.
//!
//! Replicate `i` of an experiment always draws from stream `i` of a master
//! seed derived from the user seed and the experiment's name, and samples
//! are reduced only after all of them are collected. Results therefore do
//! not depend on the number of worker threads.

mod calibrate;
mod power;
mod table;

pub use calibrate::{
    calibrate_finite_poisson, calibrate_kl_series, calibrate_limit, calibrate_model_null, limit_samples, LimitSamples,
    ModelNull,
};
pub use power::{
    finite_sample_power, laump_power, limit_power, limit_power_curves, limit_power_signal, normal_cdf, z_alpha,
    FiniteModel, PowerCurve, PowerEstimate, PowerPoint, Provenance, TestKind,
};
pub use table::{CalibrationEntry, CalibrationTable, Horizon, TableKind};

use crate::error::{Error, Result};

/// Smallest replicate count accepted by the calibration routines.
pub const MIN_REPLICATES: usize = 1000;

/// Largest tolerated fraction of diverged replicates.
pub const ABORT_BUDGET: f64 = 1e-4;

/// `f(i)` for `i = 0..m`, in index order.
#[cfg(feature = "parallel")]
pub fn par_map<T: Send>(m: usize, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..m as u64).into_par_iter().map(f).collect()
}

/// `f(i)` for `i = 0..m`, in index order.
#[cfg(not(feature = "parallel"))]
pub fn par_map<T: Send>(m: usize, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    (0..m as u64).map(f).collect()
}

/// An empirical quantile with its asymptotic standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Upper `alpha` quantile of `sorted` (ascending): the order statistic of
/// rank `ceil((1 - alpha) M)`. The standard error is
/// `sqrt(alpha (1 - alpha) / M) / f`, with the density `f` at the quantile
/// estimated by a finite difference of the empirical cdf over
/// `+- ceil(2 sqrt(M))` ranks.
pub fn upper_quantile(sorted: &[f64], alpha: f64) -> Result<QuantileEstimate> {
    let m = sorted.len();
    if m < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} outside (0, 1)")));
    }
    let rank = (((1.0 - alpha) * m as f64).ceil() as usize).clamp(1, m);
    let value = sorted[rank - 1];
    let k = (2.0 * (m as f64).sqrt()).ceil() as usize;
    let lo = rank.saturating_sub(k).max(1);
    let hi = (rank + k).min(m);
    let spread = sorted[hi - 1] - sorted[lo - 1];
    let p = (alpha * (1.0 - alpha) / m as f64).sqrt();
    let std_error = if spread > 0.0 {
        p * spread / ((hi - lo) as f64 / m as f64)
    } else {
        // a flat stretch: report the resolution of the value itself
        f64::EPSILON * value.abs().max(1.0)
    };
    Ok(QuantileEstimate { value, std_error })
}

pub(crate) fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Rejection frequency and its binomial standard error.
pub fn rejection_rate(rejections: usize, m: usize) -> (f64, f64) {
    let p = rejections as f64 / m as f64;
    (p, (p * (1.0 - p) / m as f64).sqrt())
}

pub(crate) fn check_replicates(m: usize) -> Result<()> {
    if m < MIN_REPLICATES {
        return Err(Error::InvalidArgument(format!(
            "M = {m} is below the minimum of {MIN_REPLICATES} replicates"
        )));
    }
    Ok(())
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("alpha = {alpha} outside (0, 1)")))
    }
}

/// Fails when more than [`ABORT_BUDGET`] of the replicates aborted.
pub(crate) fn check_aborts(aborted: usize, total: usize) -> Result<()> {
    if aborted as f64 > ABORT_BUDGET * total as f64 {
        Err(Error::TooManyAborts { aborted, total })
    } else {
        Ok(())
    }
}

/// Splits replicate outcomes into successes and the count of divergences;
/// any other error is returned as is.
pub(crate) fn partition_aborts<T>(results: Vec<Result<T>>) -> Result<(Vec<T>, usize)> {
    let mut ok = Vec::with_capacity(results.len());
    let mut aborted = 0;
    for r in results {
        match r {
            Ok(v) => ok.push(v),
            Err(Error::Divergence { .. }) => aborted += 1,
            Err(e) => return Err(e),
        }
    }
    check_aborts(aborted, ok.len() + aborted)?;
    Ok((ok, aborted))
}
