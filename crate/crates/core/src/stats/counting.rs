//! Statistics for periodic Poisson observations: the folded cumulative
//! intensity estimate, the integrated-square and supremum statistics, the
//! count-based LAUMP test and the LAN central statistic for self-exciting
//! alternatives.

use super::{StatKind, StatResult};
use crate::error::{Error, Result};
use crate::model::{trapezoid_fn, ScalarModel, KERNEL_QUADRATURE_POINTS};
use crate::point_proc::EventRecord;

/// `Lambda_n(t) = n^-1 sum_j X_j(t)`: a step function on `[0, tau]` that
/// jumps by `1/n` at every folded event phase.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaHat {
    period: f64,
    n_periods: usize,
    jumps: Vec<f64>,
}

impl LambdaHat {
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn n_periods(&self) -> usize {
        self.n_periods
    }

    /// Sorted event phases in `(0, tau]`, with multiplicity.
    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.n_periods as f64
    }

    /// Right-continuous value at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.jumps.partition_point(|&p| p <= t) as f64 * self.weight()
    }

    /// `Lambda_n(tau)`, the mean count per period.
    pub fn total(&self) -> f64 {
        self.jumps.len() as f64 * self.weight()
    }
}

pub fn lambda_hat(record: &EventRecord) -> Result<LambdaHat> {
    let (period, n_periods) = record.periodic_meta()?;
    let mut jumps: Vec<f64> = record
        .events()
        .iter()
        .map(|&t| {
            // periods are (k tau, (k+1) tau], so phases lie in (0, tau]
            let p = t - (t / period).floor() * period;
            if p <= 0.0 {
                period
            } else {
                p.min(period)
            }
        })
        .collect();
    jumps.sort_by(f64::total_cmp);
    Ok(LambdaHat {
        period,
        n_periods,
        jumps,
    })
}

/// `W_n^2 = Lambda*(tau)^-2 n int (Lambda_n - Lambda*)^2 dLambda*` and
/// `sqrt(n) D_n`, with `D_n = Lambda*(tau)^-1/2 sup |Lambda_n - Lambda*|`.
///
/// `cumulative` is the null mean function `Lambda*` on `[0, tau]`, assumed
/// continuous and nondecreasing with `Lambda*(0) = 0`. Between two jumps of
/// the estimate the integral is evaluated in closed form in the variable
/// `Lambda*`, so no time grid is involved.
pub fn stat_poisson(record: &EventRecord, cumulative: &ScalarModel) -> Result<(StatResult, StatResult)> {
    let lh = lambda_hat(record)?;
    let tau = lh.period;
    let total = cumulative.eval(tau);
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Lambda*(tau) = {total} must be positive"
        )));
    }
    let w = lh.weight();
    let mut level = 0.0;
    let mut a = 0.0;
    let mut la = cumulative.eval(0.0);
    let mut integral = 0.0;
    let mut sup = 0.0_f64;
    let segment = |b: f64, level: f64, a: f64, la: f64, integral: &mut f64, sup: &mut f64| {
        let lb = cumulative.eval(b);
        if lb < la - 1e-12 * total.max(1.0) {
            return Err(Error::InvalidArgument(format!("Lambda* decreases on [{a}, {b}]")));
        }
        *integral += ((lb - level).powi(3) - (la - level).powi(3)) / 3.0;
        *sup = sup.max((level - la).abs()).max((level - lb).abs());
        Ok(lb)
    };
    let jumps = lh.jumps();
    let mut i = 0;
    while i < jumps.len() {
        let b = jumps[i];
        let mut k = 0;
        while i < jumps.len() && jumps[i] == b {
            i += 1;
            k += 1;
        }
        la = segment(b, level, a, la, &mut integral, &mut sup)?;
        level += k as f64 * w;
        a = b;
    }
    segment(tau, level, a, la, &mut integral, &mut sup)?;

    let n = lh.n_periods as f64;
    let cvm = n * integral / (total * total);
    let ks = n.sqrt() * sup / total.sqrt();
    Ok((
        StatResult::new(StatKind::CVM_POISSON, cvm, "W_n^2, exact between jumps"),
        StatResult::new(StatKind::KS_POISSON, ks, "sqrt(n) * D_n (rejection scale)"),
    ))
}

/// `delta_T = (N - S* T) / sqrt(S* T)` for the total count `N` on the
/// record horizon `T = n tau`.
pub fn stat_laump(record: &EventRecord, s_star: f64) -> Result<StatResult> {
    if !(s_star > 0.0 && s_star.is_finite()) {
        return Err(Error::InvalidArgument(format!("S* = {s_star} must be positive")));
    }
    let mean = s_star * record.horizon();
    Ok(StatResult::new(
        StatKind::LAUMP,
        (record.len() as f64 - mean) / mean.sqrt(),
        "standardized count",
    ))
}

/// The LAN central statistic for the self-exciting alternative with kernel
/// `h` (compact support `[0, L]`) against the constant rate `S*`:
/// `(S* sqrt(T))^-1 [sum_i H(t_i-) - S* int_0^T H(t) dt]` with
/// `H(t) = sum_{t_j < t} h(t - t_j)` and `T = tau n`.
pub fn stat_lan_delta(record: &EventRecord, h: &ScalarModel, s_star: f64, tau: f64, n: usize) -> Result<StatResult> {
    if !(s_star > 0.0 && s_star.is_finite()) {
        return Err(Error::InvalidArgument(format!("S* = {s_star} must be positive")));
    }
    let horizon = tau * n as f64;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("tau * n = {horizon}")));
    }
    let support = h.require_support()?;
    let events = record.events();

    let mut excitation = 0.0;
    let mut lo = 0;
    for (i, &t) in events.iter().enumerate() {
        while lo < i && t - events[lo] > support {
            lo += 1;
        }
        excitation += events[lo..i]
            .iter()
            .filter(|&&s| s < t)
            .map(|&s| h.kernel(t - s))
            .sum::<f64>();
    }
    let mut compensator = 0.0;
    for &s in events {
        compensator += h.kernel_integral((horizon - s).min(support))?;
    }
    let value = (excitation - s_star * compensator) / (s_star * horizon.sqrt());
    Ok(StatResult::new(StatKind::LAN_DELTA, value, "Delta_n"))
}

/// `I(h) = int h^2 + S* (int h)^2` over the kernel support.
pub fn fisher_info(h: &ScalarModel, s_star: f64) -> Result<f64> {
    let l = h.require_support()?;
    let square = trapezoid_fn(|t| h.eval(t).powi(2), 0.0, l, KERNEL_QUADRATURE_POINTS);
    let mass = h.kernel_mass()?;
    Ok(square + s_star * mass * mass)
}
