//! Periodic Poisson processes and stationary self-exciting (Hawkes)
//! processes, with the contiguous alternatives used for power studies.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{ScalarModel, KERNEL_QUADRATURE_POINTS};
use crate::rng::RngStream;

/// Ordered event times on `(0, horizon]`, optionally split into
/// `n_periods` periods of length `period`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    events: Vec<f64>,
    horizon: f64,
    period: Option<f64>,
    n_periods: Option<usize>,
}

impl EventRecord {
    pub fn new(events: Vec<f64>, horizon: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidArgument(format!("horizon = {horizon}")));
        }
        if events.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("event times must be strictly increasing".into()));
        }
        if let (Some(first), Some(last)) = (events.first(), events.last()) {
            if !(*first > 0.0) || !(*last <= horizon) {
                return Err(Error::InvalidArgument(format!(
                    "event times must lie in (0, {horizon}]"
                )));
            }
        }
        Ok(Self {
            events,
            horizon,
            period: None,
            n_periods: None,
        })
    }

    /// Record over `n_periods` periods of length `period`; the horizon is
    /// `n_periods * period`.
    pub fn periodic(events: Vec<f64>, period: f64, n_periods: usize) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) || n_periods == 0 {
            return Err(Error::InvalidArgument(format!(
                "period = {period}, n_periods = {n_periods}"
            )));
        }
        let mut r = Self::new(events, n_periods as f64 * period)?;
        r.period = Some(period);
        r.n_periods = Some(n_periods);
        Ok(r)
    }

    /// Attaches period metadata; the horizon must equal `n_periods * period`.
    pub fn with_period(self, period: f64, n_periods: usize) -> Result<Self> {
        let expected = n_periods as f64 * period;
        if (expected - self.horizon).abs() > 1e-9 * self.horizon {
            return Err(Error::InvalidArgument(format!(
                "horizon {} is not {n_periods} periods of {period}",
                self.horizon
            )));
        }
        Self::periodic(self.events, period, n_periods)
    }

    pub fn events(&self) -> &[f64] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn n_periods(&self) -> Option<usize> {
        self.n_periods
    }

    pub(crate) fn periodic_meta(&self) -> Result<(f64, usize)> {
        match (self.period, self.n_periods) {
            (Some(p), Some(n)) => Ok((p, n)),
            _ => Err(Error::MissingPeriod),
        }
    }
}

/// Intensity models for Poisson simulation.
#[derive(Debug, Clone)]
pub enum IntensitySpec {
    Constant(f64),
    /// `S*(t)` with period `period`.
    Periodic {
        intensity: ScalarModel,
        period: f64,
    },
    /// Cumulative intensity
    /// `Lambda*(t) + (n Lambda*(tau))^-1/2 int_0^t h(u(v)) dLambda*(v)`,
    /// `u(v) = Lambda*(v) / Lambda*(tau)`.
    ContiguousPoisson {
        base: ScalarModel,
        period: f64,
        h: ScalarModel,
        n_periods: usize,
    },
    /// `S* + T^-1/2 int_0^{t-} h(t - s) dX_s`, `T = n_periods * period`;
    /// simulated by [`simulate_hawkes_alternative`].
    ContiguousHawkes {
        s_star: f64,
        h: ScalarModel,
        period: f64,
        n_periods: usize,
    },
}

/// Points per period in the cumulative-intensity inversion table.
pub const INVERSION_TABLE_POINTS: usize = 10_000;

struct CumulativeTable {
    period: f64,
    lambda: Vec<f64>,
}

impl CumulativeTable {
    fn build(rate: impl Fn(f64) -> f64, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidArgument(format!("period = {period}")));
        }
        let n = INVERSION_TABLE_POINTS;
        let h = period / n as f64;
        let mut prev = rate(0.0);
        if !(prev >= 0.0) {
            return Err(Error::NegativeIntensity { t: 0.0, value: prev });
        }
        let mut lambda = Vec::with_capacity(n + 1);
        lambda.push(0.0);
        let mut acc = 0.0;
        for i in 1..=n {
            let t = h * i as f64;
            let s = rate(t);
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::NegativeIntensity { t, value: s });
            }
            acc += 0.5 * h * (prev + s);
            lambda.push(acc);
            prev = s;
        }
        Ok(Self { period, lambda })
    }

    fn per_period(&self) -> f64 {
        self.lambda[self.lambda.len() - 1]
    }

    /// Inverse of the periodic cumulative intensity at level `y`.
    fn invert(&self, y: f64) -> f64 {
        let per = self.per_period();
        let k = (y / per).floor();
        let r = y - k * per;
        let n = self.lambda.len() - 1;
        let j = self.lambda.partition_point(|&l| l <= r).clamp(1, n);
        let (l0, l1) = (self.lambda[j - 1], self.lambda[j]);
        let w = if l1 > l0 { (r - l0) / (l1 - l0) } else { 0.0 };
        let h = self.period / n as f64;
        k * self.period + h * ((j - 1) as f64 + w)
    }
}

fn contiguous_rate<'a>(
    base: &'a ScalarModel,
    period: f64,
    h: &'a ScalarModel,
    n: usize,
) -> Result<impl Fn(f64) -> f64 + 'a> {
    let base_table = CumulativeTable::build(|t| base.eval(t), period)?;
    let total = base_table.per_period();
    if !(total > 0.0) {
        return Err(Error::InvalidArgument("base intensity has zero mass per period".into()));
    }
    let scale = 1.0 / (n as f64 * total).sqrt();
    let step = period / INVERSION_TABLE_POINTS as f64;
    Ok(move |t: f64| {
        let phase = t.rem_euclid(period);
        let u = crate::model::interpolate_uniform(&base_table.lambda, step, phase) / total;
        base.eval(t) * (1.0 + scale * h.eval(u))
    })
}

/// Inhomogeneous Poisson simulation by inversion of the cumulative
/// intensity: unit-rate exponential spacings mapped through `Lambda^-1`.
pub fn simulate_poisson(intensity: &IntensitySpec, horizon: f64, rng: RngStream) -> Result<EventRecord> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidArgument(format!("horizon = {horizon}")));
    }
    let mut noise = rng.sampler();
    let mut events = Vec::new();
    let (table, period) = match intensity {
        IntensitySpec::Constant(s) => {
            if !(*s >= 0.0 && s.is_finite()) {
                return Err(Error::NegativeIntensity { t: 0.0, value: *s });
            }
            if *s > 0.0 {
                let mut t = noise.exp1() / s;
                while t <= horizon {
                    events.push(t);
                    t += noise.exp1() / s;
                }
            }
            return EventRecord::new(events, horizon);
        }
        IntensitySpec::Periodic { intensity, period } => {
            (CumulativeTable::build(|t| intensity.eval(t), *period)?, *period)
        }
        IntensitySpec::ContiguousPoisson {
            base,
            period,
            h,
            n_periods,
        } => {
            let rate = contiguous_rate(base, *period, h, *n_periods)?;
            (CumulativeTable::build(rate, *period)?, *period)
        }
        IntensitySpec::ContiguousHawkes { .. } => {
            return Err(Error::InvalidArgument(
                "self-exciting alternatives are simulated with simulate_hawkes_alternative".into(),
            ))
        }
    };
    if table.per_period() > 0.0 {
        let mut level = noise.exp1();
        loop {
            let t = table.invert(level);
            if t > horizon {
                break;
            }
            // inversion of flat stretches can repeat a time; keep strict order
            if events.last().is_none_or(|&last| t > last) && t > 0.0 {
                events.push(t);
            }
            level += noise.exp1();
        }
    }
    let record = EventRecord::new(events, horizon)?;
    let n = (horizon / period).round();
    if n >= 1.0 && (n * period - horizon).abs() <= 1e-9 * horizon {
        record.with_period(period, n as usize)
    } else {
        Ok(record)
    }
}

/// Self-exciting process with intensity `S + sum_{t_i < t} g(t - t_i)`.
#[derive(Debug, Clone)]
pub struct HawkesSpec {
    base_rate: f64,
    kernel: ScalarModel,
    support: f64,
    branching_ratio: f64,
    kernel_sup: f64,
}

impl HawkesSpec {
    pub fn new(base_rate: f64, kernel: ScalarModel) -> Result<Self> {
        if !(base_rate > 0.0 && base_rate.is_finite()) {
            return Err(Error::InvalidArgument(format!("base rate = {base_rate}")));
        }
        let support = kernel.require_support()?;
        let n = KERNEL_QUADRATURE_POINTS;
        if let Some(i) = (0..=n).position(|i| kernel.eval(support * i as f64 / n as f64) < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "kernel is negative at t = {}",
                support * i as f64 / n as f64
            )));
        }
        let branching_ratio = kernel.kernel_mass()?;
        if !(branching_ratio < 1.0) {
            return Err(Error::Explosive(branching_ratio));
        }
        let kernel_sup = kernel.kernel_sup()?;
        Ok(Self {
            base_rate,
            kernel,
            support,
            branching_ratio,
            kernel_sup,
        })
    }

    pub fn base_rate(&self) -> f64 {
        self.base_rate
    }

    pub fn kernel(&self) -> &ScalarModel {
        &self.kernel
    }

    pub fn branching_ratio(&self) -> f64 {
        self.branching_ratio
    }

    /// Stationary rate `S / (1 - rho)`.
    pub fn stationary_rate(&self) -> f64 {
        self.base_rate / (1.0 - self.branching_ratio)
    }

    /// `G(lambda) = int_0^L e^{i lambda t} g(t) dt` as `(re, im)`.
    pub fn transfer(&self, lambda: f64) -> (f64, f64) {
        let n = KERNEL_QUADRATURE_POINTS;
        let h = self.support / n as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for i in 0..=n {
            let t = h * i as f64;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            let g = w * self.kernel.kernel(t);
            let (s, c) = (lambda * t).sin_cos();
            re += g * c;
            im += g * s;
        }
        (re * h, im * h)
    }
}

/// Ogata thinning with the piecewise-constant bound
/// `S + (number of events within the last L) * sup g`.
pub fn simulate_hawkes(spec: &HawkesSpec, horizon: f64, rng: RngStream) -> Result<EventRecord> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidArgument(format!("horizon = {horizon}")));
    }
    let mut noise = rng.sampler();
    let (s, l, gmax) = (spec.base_rate, spec.support, spec.kernel_sup);
    let mut events: Vec<f64> = Vec::new();
    let mut start = 0;
    let mut t = 0.0;
    loop {
        while start < events.len() && t - events[start] > l {
            start += 1;
        }
        let bound = s + (events.len() - start) as f64 * gmax;
        t += noise.exp1() / bound;
        if t > horizon {
            break;
        }
        while start < events.len() && t - events[start] > l {
            start += 1;
        }
        let lambda = s + events[start..].iter().map(|ti| spec.kernel.kernel(t - ti)).sum::<f64>();
        if lambda > bound * (1.0 + 1e-9) {
            return Err(Error::InvalidArgument(format!(
                "kernel exceeds its declared bound {gmax}"
            )));
        }
        if noise.uniform() * bound < lambda {
            events.push(t);
        }
    }
    EventRecord::new(events, horizon)
}

/// The contiguous self-exciting alternative: kernel `T^-1/2 h`,
/// `T = n_periods * period`. The returned record carries period metadata.
pub fn simulate_hawkes_alternative(
    h: &ScalarModel,
    s_star: f64,
    n_periods: usize,
    period: f64,
    rng: RngStream,
) -> Result<EventRecord> {
    let spec = hawkes_alternative_spec(h, s_star, n_periods, period)?;
    simulate_hawkes(&spec, n_periods as f64 * period, rng)?.with_period(period, n_periods)
}

pub fn hawkes_alternative_spec(h: &ScalarModel, s_star: f64, n_periods: usize, period: f64) -> Result<HawkesSpec> {
    let horizon = n_periods as f64 * period;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon = {horizon}")));
    }
    HawkesSpec::new(s_star, h.scaled(1.0 / horizon.sqrt()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HawkesSummary {
    pub branching_ratio: f64,
    pub rate: f64,
    /// `f(lambda) = mu / (2 pi |1 - G(lambda)|^2)` on the requested grid.
    pub spectral_density: Vec<f64>,
}

pub fn hawkes_summaries(spec: &HawkesSpec, lambdas: &[f64]) -> HawkesSummary {
    let rate = spec.stationary_rate();
    let spectral_density = lambdas
        .iter()
        .map(|&l| {
            let (re, im) = spec.transfer(l);
            rate / (2.0 * PI * ((1.0 - re).powi(2) + im * im))
        })
        .collect();
    HawkesSummary {
        branching_ratio: spec.branching_ratio,
        rate,
        spectral_density,
    }
}

/// Event phases per period: `X_j(t)` counts the phases of period `j` that
/// are `<= t`. Periods are half-open, `[j tau, (j+1) tau)`, except that an
/// event exactly at the horizon belongs to the last period.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodFold {
    pub period: f64,
    pub phases: Vec<Vec<f64>>,
}

impl PeriodFold {
    pub fn n_periods(&self) -> usize {
        self.phases.len()
    }

    /// `X_j(t)` for the zero-based period index `j`.
    pub fn count(&self, j: usize, t: f64) -> usize {
        self.phases[j].partition_point(|&p| p <= t)
    }

    pub fn total(&self) -> usize {
        self.phases.iter().map(Vec::len).sum()
    }
}

pub fn fold_periods(record: &EventRecord) -> Result<PeriodFold> {
    let (period, n) = record.periodic_meta()?;
    let mut phases = vec![Vec::new(); n];
    for &t in record.events() {
        let j = ((t / period).floor() as usize).min(n - 1);
        phases[j].push((t - j as f64 * period).clamp(0.0, period));
    }
    Ok(PeriodFold { period, phases })
}
