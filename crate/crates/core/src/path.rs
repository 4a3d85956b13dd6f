//! Uniform time grids and trajectories sampled on them.

use crate::error::{Error, Result};

/// Uniform grid `t_i = i * horizon / n_steps`, `i = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n_steps: usize,
    horizon: f64,
}

impl Grid {
    pub fn new(n_steps: usize, horizon: f64) -> Result<Self> {
        if n_steps < 2 {
            return Err(Error::InvalidGrid(format!("n_steps = {n_steps} < 2")));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidGrid(format!("horizon = {horizon}")));
        }
        Ok(Self { n_steps, horizon })
    }

    /// Grid on `[0, 1]`, the home of every limit functional.
    pub fn unit(n_steps: usize) -> Result<Self> {
        Self::new(n_steps, 1.0)
    }

    /// Grid of the given step size covering `[0, horizon]`; the step is
    /// adjusted so that it divides the horizon.
    pub fn with_step(horizon: f64, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0 && step <= horizon) {
            return Err(Error::InvalidGrid(format!(
                "step {step} incompatible with horizon {horizon}"
            )));
        }
        Self::new((horizon / step).round().max(2.0) as usize, horizon)
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn n_points(&self) -> usize {
        self.n_steps + 1
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn step(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }

    #[inline]
    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.horizon / self.n_steps as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |i| self.time(i))
    }
}

/// A trajectory sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    grid: Grid,
    values: Vec<f64>,
}

impl SampledPath {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidArgument(format!(
                "path has {} values, grid needs {}",
                values.len(),
                grid.n_points()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite path value at index {i}")));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.times().map(f).collect())
    }

    pub(crate) fn from_parts_unchecked(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_points());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.grid.n_steps()]
    }

    /// Linear interpolation between grid points, clamped to the horizon.
    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.grid.n_steps();
        let pos = (t / self.grid.step()).clamp(0.0, n as f64);
        let i = (pos.floor() as usize).min(n - 1);
        let w = pos - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }

    pub(crate) fn check_same_grid(&self, other: &SampledPath) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument("paths are sampled on different grids".into()));
        }
        Ok(())
    }
}
