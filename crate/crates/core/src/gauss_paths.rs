//! Wiener-process paths and the two path functionals behind every limit
//! distribution: the integrated square and the supremum norm.
//!
//! Paths are built by midpoint refinement. For `n_steps = m * 2^k` with `m`
//! odd, the `m` coarse increments are drawn first and every dyadic level is
//! then filled in with conditional (bridge) midpoints, left to right. Draws
//! are consumed in that order, so doubling `n_steps` leaves the values at the
//! shared grid points bit-identical.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::path::{Grid, SampledPath};
use crate::rng::{Noise, RngStream};

/// `-zeta(1/2) / sqrt(2 pi)`: expected overshoot, in units of
/// `sqrt(step)`, of a Brownian maximum over its value on a monitoring grid.
pub const DISCRETE_MONITORING_SHIFT: f64 = 0.582_597_157_939_010_7;

pub fn simulate_wiener(grid: &Grid, rng: RngStream) -> SampledPath {
    let mut noise = rng.sampler();
    wiener_with(grid, &mut noise)
}

pub(crate) fn wiener_with(grid: &Grid, noise: &mut Noise) -> SampledPath {
    let mut values = vec![0.0; grid.n_points()];
    fill_wiener(grid, noise, &mut values);
    SampledPath::from_parts_unchecked(*grid, values)
}

/// Writes a Wiener path into `values` (length `n_steps + 1`).
pub(crate) fn fill_wiener(grid: &Grid, noise: &mut Noise, values: &mut [f64]) {
    let n = grid.n_steps();
    debug_assert_eq!(values.len(), n + 1);
    let levels = n.trailing_zeros();
    let coarse = n >> levels;
    let mut stride = 1usize << levels;

    values[0] = 0.0;
    let sd = (grid.horizon() / coarse as f64).sqrt();
    for j in 0..coarse {
        values[(j + 1) * stride] = values[j * stride] + sd * noise.gauss();
    }

    let mut intervals = coarse;
    while stride > 1 {
        let half = stride / 2;
        // conditional variance of a bridge midpoint is a quarter of the span
        let sd = 0.5 * (grid.horizon() / intervals as f64).sqrt();
        let mut i = 0;
        while i < n {
            values[i + half] = 0.5 * (values[i] + values[i + stride]) + sd * noise.gauss();
            i += stride;
        }
        stride = half;
        intervals *= 2;
    }
}

/// The path `rho * t + W(t)`; shares its noise with [`simulate_wiener`] on
/// the same stream.
pub fn simulate_drifted_wiener(grid: &Grid, rho: f64, rng: RngStream) -> Result<SampledPath> {
    if !rho.is_finite() {
        return Err(Error::InvalidArgument(format!("rho = {rho}")));
    }
    let mut path = simulate_wiener(grid, rng).into_values();
    for (i, v) in path.iter_mut().enumerate() {
        *v += rho * grid.time(i);
    }
    Ok(SampledPath::from_parts_unchecked(*grid, path))
}

/// `W(s) - s W(1)` on `[0, 1]`.
pub fn simulate_brownian_bridge(grid: &Grid, rng: RngStream) -> Result<SampledPath> {
    if grid.horizon() != 1.0 {
        return Err(Error::InvalidGrid(format!(
            "Brownian bridge needs horizon 1, got {}",
            grid.horizon()
        )));
    }
    let mut values = simulate_wiener(grid, rng).into_values();
    let end = values[grid.n_steps()];
    for (i, v) in values.iter_mut().enumerate() {
        *v -= grid.time(i) * end;
    }
    Ok(SampledPath::from_parts_unchecked(*grid, values))
}

/// Trapezoid estimate of `(1/H) * int_0^H Y(t)^2 dt`.
pub fn cvm_functional(path: &SampledPath) -> f64 {
    cvm_of(path.values(), path.grid())
}

pub(crate) fn cvm_of(values: &[f64], grid: &Grid) -> f64 {
    let n = values.len() - 1;
    let inner: f64 = values.iter().map(|v| v * v).sum();
    let ends = 0.5 * (values[0] * values[0] + values[n] * values[n]);
    (inner - ends) * grid.step() / grid.horizon()
}

/// `max_i |Y(t_i)|` over the grid points.
pub fn ks_functional(path: &SampledPath) -> f64 {
    ks_of(path.values())
}

pub(crate) fn ks_of(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Grid maximum shifted by [`DISCRETE_MONITORING_SHIFT`]` * sqrt(step)`,
/// an estimate of the continuous-time supremum of a unit-diffusion path.
pub fn ks_functional_corrected(path: &SampledPath) -> f64 {
    ks_functional(path) + monitoring_shift(path.grid())
}

pub fn monitoring_shift(grid: &Grid) -> f64 {
    DISCRETE_MONITORING_SHIFT * grid.step().sqrt()
}

/// Truncated Karhunen–Loève representation of `int_0^1 W(s)^2 ds`:
/// `sum_k zeta_k^2 / ((k - 1/2) pi)^2`.
#[derive(Debug, Clone)]
pub struct KlSeries {
    weights: Vec<f64>,
}

impl KlSeries {
    pub fn new(n_terms: usize) -> Result<Self> {
        if n_terms == 0 {
            return Err(Error::InvalidArgument("n_terms must be >= 1".into()));
        }
        let weights = (1..=n_terms)
            .map(|k| {
                let l = (k as f64 - 0.5) * PI;
                1.0 / (l * l)
            })
            .collect();
        Ok(Self { weights })
    }

    pub fn n_terms(&self) -> usize {
        self.weights.len()
    }

    pub fn sample(&self, noise: &mut Noise) -> f64 {
        self.weights
            .iter()
            .map(|w| {
                let z = noise.gauss();
                w * z * z
            })
            .sum()
    }
}

pub fn kl_series_sample(n_terms: usize, rng: RngStream) -> Result<f64> {
    let series = KlSeries::new(n_terms)?;
    Ok(series.sample(&mut rng.sampler()))
}

/// `P(sup_{0<=s<=1} |W(s)| <= x)` from the alternating theta series.
pub fn sup_abs_wiener_cdf(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("x = {x} must be positive")));
    }
    let c = PI * PI / (8.0 * x * x);
    let mut sum = 0.0;
    let mut k = 0u64;
    loop {
        let odd = (2 * k + 1) as f64;
        let term = (-c * odd * odd).exp() / odd;
        if term < 1e-12 {
            break;
        }
        if k & 1 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        k += 1;
    }
    Ok((4.0 / PI * sum).clamp(0.0, 1.0))
}

/// Root of `sup_abs_wiener_cdf(x) = p` by bisection.
pub fn sup_abs_wiener_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("p = {p} outside (0, 1)")));
    }
    let (mut lo, mut hi) = (1e-3, 20.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sup_abs_wiener_cdf(mid)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
