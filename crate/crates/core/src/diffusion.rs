//! Limit ODE, Euler–Maruyama simulation of small-noise and ergodic
//! diffusions, and invariant laws of ergodic diffusions.

use crate::error::{Error, Result};
use crate::gauss_paths::fill_wiener;
use crate::model::ScalarModel;
use crate::path::{Grid, SampledPath};
use crate::rng::RngStream;

/// Paths are abandoned once `|x|` exceeds this bound.
pub const DIVERGENCE_GUARD: f64 = 1e8;

fn guard(t: f64, x: f64) -> Result<f64> {
    if x.is_finite() && x.abs() <= DIVERGENCE_GUARD {
        Ok(x)
    } else {
        Err(Error::Divergence { t, value: x.abs() })
    }
}

/// Deterministic solution of `dx/dt = S(x)` together with the clock
/// `u(t) = int_0^t S(x_v)^-2 dv` when `S` stays positive along it.
#[derive(Debug, Clone)]
pub struct LimitSolution {
    pub path: SampledPath,
    pub clock: Option<Vec<f64>>,
}

/// Classical fourth-order Runge–Kutta on the grid.
pub fn solve_limit_ode(drift: &ScalarModel, x0: f64, grid: &Grid) -> Result<LimitSolution> {
    let h = grid.step();
    let mut xs = Vec::with_capacity(grid.n_points());
    let mut x = guard(0.0, x0)?;
    xs.push(x);
    for i in 0..grid.n_steps() {
        let k1 = drift.eval(x);
        let k2 = drift.eval(x + 0.5 * h * k1);
        let k3 = drift.eval(x + 0.5 * h * k2);
        let k4 = drift.eval(x + h * k3);
        x = guard(grid.time(i + 1), x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))?;
        xs.push(x);
    }
    let path = SampledPath::new(*grid, xs)?;
    let clock = inverse_square_clock(&path, drift).ok();
    Ok(LimitSolution { path, clock })
}

/// Cumulative trapezoid of `S(x_t)^-2` along `path`.
pub fn inverse_square_clock(path: &SampledPath, drift: &ScalarModel) -> Result<Vec<f64>> {
    let grid = path.grid();
    let mut w = Vec::with_capacity(grid.n_points());
    for (i, &x) in path.values().iter().enumerate() {
        let s = drift.eval(x);
        if !(s > 0.0) {
            return Err(Error::NonPositiveDrift {
                t: grid.time(i),
                x,
                value: s,
            });
        }
        w.push(1.0 / (s * s));
    }
    Ok(cumulative_trapezoid(&w, grid.step()))
}

pub(crate) fn cumulative_trapezoid(y: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(y.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in y.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

/// `dX = S*(X) dt + eps h(X)/S*(X) dt + eps dW`, `X_0 = x0`; the alternative
/// term is present only when `alt` is set.
#[derive(Debug, Clone)]
pub struct SmallNoiseSpec {
    pub drift: ScalarModel,
    pub alt: Option<ScalarModel>,
    pub epsilon: f64,
    pub x0: f64,
}

impl SmallNoiseSpec {
    pub fn null(drift: ScalarModel, epsilon: f64, x0: f64) -> Self {
        Self {
            drift,
            alt: None,
            epsilon,
            x0,
        }
    }

    pub fn with_alternative(mut self, h: ScalarModel) -> Self {
        self.alt = Some(h);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!("epsilon = {}", self.epsilon)));
        }
        if !self.x0.is_finite() {
            return Err(Error::InvalidArgument("x0 must be finite".into()));
        }
        Ok(())
    }
}

pub fn simulate_small_noise(spec: &SmallNoiseSpec, grid: &Grid, rng: RngStream) -> Result<SampledPath> {
    spec.validate()?;
    let mut noise = rng.sampler();
    let mut w = vec![0.0; grid.n_points()];
    fill_wiener(grid, &mut noise, &mut w);

    let h = grid.step();
    let eps = spec.epsilon;
    let mut xs = Vec::with_capacity(grid.n_points());
    let mut x = spec.x0;
    xs.push(x);
    for i in 0..grid.n_steps() {
        let s = spec.drift.eval(x);
        let mut drift = s;
        if let Some(alt) = &spec.alt {
            if !(s > 0.0) {
                return Err(Error::NonPositiveDrift {
                    t: grid.time(i),
                    x,
                    value: s,
                });
            }
            drift += eps * alt.eval(x) / s;
        }
        x = guard(grid.time(i + 1), x + drift * h + eps * (w[i + 1] - w[i]))?;
        xs.push(x);
    }
    Ok(SampledPath::from_parts_unchecked(*grid, xs))
}

/// `dX = S(X) dt + sigma(X) dW` observed on `[0, horizon]` with step `dt`.
/// Ergodicity of `(S, sigma)` is the caller's assertion.
#[derive(Debug, Clone)]
pub struct ErgodicSpec {
    pub drift: ScalarModel,
    pub diffusion: Option<ScalarModel>,
    pub x0: f64,
    pub horizon: f64,
    pub dt: f64,
}

impl ErgodicSpec {
    pub fn new(drift: ScalarModel, x0: f64, horizon: f64, dt: f64) -> Self {
        Self {
            drift,
            diffusion: None,
            x0,
            horizon,
            dt,
        }
    }

    pub fn with_diffusion(mut self, sigma: ScalarModel) -> Self {
        self.diffusion = Some(sigma);
        self
    }

    pub fn grid(&self) -> Result<Grid> {
        if !(self.dt > 0.0 && self.dt <= self.horizon) {
            return Err(Error::InvalidArgument(format!(
                "dt = {} must lie in (0, T = {}]",
                self.dt, self.horizon
            )));
        }
        Grid::with_step(self.horizon, self.dt)
    }
}

pub fn simulate_ergodic(spec: &ErgodicSpec, rng: RngStream) -> Result<SampledPath> {
    let grid = spec.grid()?;
    if !spec.x0.is_finite() {
        return Err(Error::InvalidArgument("x0 must be finite".into()));
    }
    let mut noise = rng.sampler();
    let mut w = vec![0.0; grid.n_points()];
    fill_wiener(&grid, &mut noise, &mut w);

    let h = grid.step();
    let mut xs = Vec::with_capacity(grid.n_points());
    let mut x = spec.x0;
    xs.push(x);
    for i in 0..grid.n_steps() {
        let dw = w[i + 1] - w[i];
        let vol = spec.diffusion.as_ref().map_or(1.0, |s| s.eval(x));
        x = guard(grid.time(i + 1), x + spec.drift.eval(x) * h + vol * dw)?;
        xs.push(x);
    }
    Ok(SampledPath::from_parts_unchecked(grid, xs))
}

/// Tabulated invariant law of an ergodic diffusion.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTable {
    x_grid: Vec<f64>,
    density: Vec<f64>,
    cdf: Vec<f64>,
    log_normalizer: f64,
}

/// Unnormalized density at the grid edges must be below this fraction of
/// its mode.
pub const EDGE_TOLERANCE: f64 = 1e-12;

impl DensityTable {
    /// Builds a table from density values, normalizing by the trapezoid rule.
    pub fn from_density(x_grid: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        validate_x_grid(&x_grid)?;
        if density.len() != x_grid.len() || density.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::InvalidArgument(
                "density must be finite, nonnegative and match the grid".into(),
            ));
        }
        let mass = trapezoid(&x_grid, &density);
        if !(mass > 0.0) {
            return Err(Error::NonIntegrable("zero total mass".into()));
        }
        let density: Vec<f64> = density.iter().map(|d| d / mass).collect();
        let cdf = normalized_cdf(&x_grid, &density);
        Ok(Self {
            x_grid,
            density,
            cdf,
            log_normalizer: mass.ln(),
        })
    }

    pub fn x_grid(&self) -> &[f64] {
        &self.x_grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    /// `ln G`, the log of the normalizing constant.
    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    pub fn density_at(&self, x: f64) -> f64 {
        if x < self.x_grid[0] || x > *self.x_grid.last().unwrap() {
            return 0.0;
        }
        crate::model::interpolate(&self.x_grid, &self.density, x)
    }

    pub fn cdf_at(&self, x: f64) -> f64 {
        crate::model::interpolate(&self.x_grid, &self.cdf, x)
    }
}

fn validate_x_grid(x: &[f64]) -> Result<()> {
    if x.len() < 3 || x.windows(2).any(|w| !(w[1] > w[0])) || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "x grid must be finite, strictly increasing, with >= 3 points".into(),
        ));
    }
    Ok(())
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

fn normalized_cdf(x: &[f64], f: &[f64]) -> Vec<f64> {
    let mut cdf = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    cdf.push(0.0);
    for (xw, fw) in x.windows(2).zip(f.windows(2)) {
        acc += 0.5 * (xw[1] - xw[0]) * (fw[0] + fw[1]);
        cdf.push(acc);
    }
    let total = acc;
    cdf.iter().map(|c| (c / total).min(1.0)).collect()
}

/// `f(x) = exp{2 int_0^x S/sigma^2} / (G sigma(x)^2)` tabulated on `x_grid`.
pub fn invariant_density(
    drift: &ScalarModel,
    diffusion: Option<&ScalarModel>,
    x_grid: Vec<f64>,
) -> Result<DensityTable> {
    validate_x_grid(&x_grid)?;
    let var: Vec<f64> = x_grid
        .iter()
        .map(|&x| diffusion.map_or(1.0, |s| s.eval(x).powi(2)))
        .collect();
    if let Some(i) = var.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "diffusion coefficient vanishes at x = {}",
            x_grid[i]
        )));
    }
    let ratio: Vec<f64> = x_grid.iter().zip(&var).map(|(&x, v)| 2.0 * drift.eval(x) / v).collect();

    // log of the unnormalized density, integral taken from the first knot
    let mut log_u = Vec::with_capacity(x_grid.len());
    let mut acc = 0.0;
    log_u.push(-var[0].ln());
    for i in 1..x_grid.len() {
        acc += 0.5 * (x_grid[i] - x_grid[i - 1]) * (ratio[i - 1] + ratio[i]);
        log_u.push(acc - var[i].ln());
    }
    if log_u.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonIntegrable("non-finite log density".into()));
    }
    let top = log_u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let edge = (log_u[0] - top).exp().max((log_u[log_u.len() - 1] - top).exp());
    if edge > EDGE_TOLERANCE {
        return Err(Error::NonIntegrable(format!(
            "density at the grid edge is {edge:e} of its mode; widen the grid or check the drift"
        )));
    }
    let u: Vec<f64> = log_u.iter().map(|l| (l - top).exp()).collect();
    let mut table = DensityTable::from_density(x_grid, u)?;

    // re-reference the exponent to x = 0 so that ln G matches its definition
    let c0 = crate::model::interpolate(
        &table.x_grid,
        &log_u.iter().zip(&var).map(|(l, v)| l + v.ln()).collect::<Vec<_>>(),
        0.0,
    );
    table.log_normalizer += top - c0;
    Ok(table)
}

/// Default support for the density grid: `mean +- 8 sd` of a pilot path.
pub fn default_density_grid(pilot: &SampledPath, n_points: usize) -> Vec<f64> {
    let v = pilot.values();
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let s = (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt().max(1e-6);
    linspace(m - 8.0 * s, m + 8.0 * s, n_points)
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// `int g(x) f(x) dx` against the tabulated density.
pub fn expect_under_invariant(g: &ScalarModel, table: &DensityTable) -> f64 {
    let y: Vec<f64> = table
        .x_grid
        .iter()
        .zip(&table.density)
        .map(|(&x, f)| g.eval(x) * f)
        .collect();
    trapezoid(&table.x_grid, &y)
}
