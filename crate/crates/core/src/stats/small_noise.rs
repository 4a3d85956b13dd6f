//! Statistics for diffusions with small noise, built on the deviation of
//! the observed path from the deterministic null solution `x*`.

use super::{StatKind, StatResult};
use crate::error::{Error, Result};
use crate::model::ScalarModel;
use crate::path::SampledPath;

fn trapezoid(y: &[f64], h: f64) -> f64 {
    let n = y.len() - 1;
    h * (y.iter().sum::<f64>() - 0.5 * (y[0] + y[n]))
}

fn drift_along(xstar: &SampledPath, drift: &ScalarModel) -> Result<Vec<f64>> {
    let grid = xstar.grid();
    xstar
        .values()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let s = drift.eval(x);
            if s > 0.0 && s.is_finite() {
                Ok(s)
            } else {
                Err(Error::NonPositiveDrift {
                    t: grid.time(i),
                    x,
                    value: s,
                })
            }
        })
        .collect()
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon = {eps}")))
    }
}

/// Cramér–von Mises and Kolmogorov–Smirnov statistics for
/// `dX = S*(X) dt + eps dW`. The second result is `eps^-1 D_eps`.
pub fn stat_small_noise(
    x: &SampledPath,
    xstar: &SampledPath,
    drift: &ScalarModel,
    eps: f64,
) -> Result<(StatResult, StatResult)> {
    x.check_same_grid(xstar)?;
    check_epsilon(eps)?;
    let s = drift_along(xstar, drift)?;
    let h = x.grid().step();
    let clock = trapezoid(&s.iter().map(|v| 1.0 / (v * v)).collect::<Vec<_>>(), h);

    let integrand: Vec<f64> = x
        .values()
        .iter()
        .zip(xstar.values())
        .zip(&s)
        .map(|((a, b), v)| ((a - b) / (eps * v * v)).powi(2))
        .collect();
    let cvm = trapezoid(&integrand, h) / (clock * clock);

    let sup = x
        .values()
        .iter()
        .zip(xstar.values())
        .zip(&s)
        .map(|((a, b), v)| ((a - b) / v).abs())
        .fold(0.0, f64::max);
    let ks = sup / clock.sqrt() / eps;

    Ok((
        StatResult::new(StatKind::CVM_SMALL_NOISE, cvm, "W_eps^2, trapezoid in t"),
        StatResult::new(StatKind::KS_SMALL_NOISE, ks, "eps^-1 * D_eps (rejection scale)"),
    ))
}

/// Cramér–von Mises statistic for `dX = S*(X) dt + eps sigma(X) dW`:
/// `v_T^-2 int ((X - x*) sigma(x*) / (eps S*(x*)^2))^2 dt` with
/// `v_T = int (sigma(x*)/S*(x*))^2 dt`.
///
/// This is the time-changed form whose null limit is `int_0^1 W(s)^2 ds`
/// for every `sigma`; see [`stat_small_noise_sigma_as_printed`] for the
/// variant without `sigma` in the integrand.
pub fn stat_small_noise_sigma(
    x: &SampledPath,
    xstar: &SampledPath,
    drift: &ScalarModel,
    sigma: &ScalarModel,
    eps: f64,
) -> Result<StatResult> {
    sigma_statistic(x, xstar, drift, sigma, eps, true)
}

/// Same normalizer `v_T^-2` but with the integrand
/// `((X - x*) / (eps S*(x*)^2))^2`. It coincides with
/// [`stat_small_noise_sigma`] when `sigma = 1` and is `sigma^-2` times it
/// for constant `sigma`.
pub fn stat_small_noise_sigma_as_printed(
    x: &SampledPath,
    xstar: &SampledPath,
    drift: &ScalarModel,
    sigma: &ScalarModel,
    eps: f64,
) -> Result<StatResult> {
    sigma_statistic(x, xstar, drift, sigma, eps, false)
}

fn sigma_statistic(
    x: &SampledPath,
    xstar: &SampledPath,
    drift: &ScalarModel,
    sigma: &ScalarModel,
    eps: f64,
    weight_by_sigma: bool,
) -> Result<StatResult> {
    x.check_same_grid(xstar)?;
    check_epsilon(eps)?;
    let s = drift_along(xstar, drift)?;
    let sig: Vec<f64> = xstar.values().iter().map(|&v| sigma.eval(v)).collect();
    if sig.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("sigma is not finite along x*".into()));
    }
    let h = x.grid().step();
    let clock = trapezoid(&sig.iter().zip(&s).map(|(g, v)| (g / v).powi(2)).collect::<Vec<_>>(), h);
    if !(clock > 0.0) {
        return Err(Error::InvalidArgument("sigma vanishes along x*".into()));
    }
    let integrand: Vec<f64> = x
        .values()
        .iter()
        .zip(xstar.values())
        .zip(s.iter().zip(&sig))
        .map(|((a, b), (v, g))| {
            let w = if weight_by_sigma { *g } else { 1.0 };
            ((a - b) * w / (eps * v * v)).powi(2)
        })
        .collect();
    let note = if weight_by_sigma {
        "W_eps^2 with sigma(x*) in the integrand"
    } else {
        "W_eps^2, integrand without sigma(x*)"
    };
    Ok(StatResult::new(
        StatKind::CVM_SMALL_NOISE,
        trapezoid(&integrand, h) / (clock * clock),
        note,
    ))
}
