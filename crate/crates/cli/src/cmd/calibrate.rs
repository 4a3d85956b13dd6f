use std::path::PathBuf;

use clap::Args;
use gofsim::diffusion::{invariant_density, ErgodicSpec};
use gofsim::mc::{calibrate_finite_poisson, calibrate_limit, calibrate_model_null, ModelNull};
use gofsim::stats::StatKind;
use gofsim::Grid;

use super::{create_dir, write_file};
use crate::models::{parse_list, parse_model, parse_x_grid};
use crate::{CliError, Common};

pub const LIMIT_FILE: &str = "calibration_limit.csv";
pub const FINITE_FILE: &str = "calibration_finite_poisson.csv";
pub const MODEL_FILE: &str = "calibration_model_null.csv";

/// Null model of an ergodic diffusion, shared by `calibrate --model-null`
/// and `test`.
#[derive(Args, Debug, Clone)]
pub struct ErgodicModelArgs {
    /// Null drift S*.
    #[arg(long, default_value = "ou:theta=1")]
    pub drift: String,
    /// Diffusion coefficient (default 1).
    #[arg(long)]
    pub sigma: Option<String>,
    /// Grid `min:max:points` on which distributions and densities are compared.
    #[arg(long = "x-grid", default_value = "-8:8:321")]
    pub x_grid: String,
}

impl ErgodicModelArgs {
    pub fn null_table(&self) -> Result<gofsim::diffusion::DensityTable, CliError> {
        let drift = parse_model(&self.drift)?;
        let sigma = self.sigma.as_deref().map(parse_model).transpose()?;
        Ok(invariant_density(&drift, sigma.as_ref(), parse_x_grid(&self.x_grid)?)?)
    }

    pub fn spec(&self, x0: f64, horizon: f64, dt: f64) -> Result<ErgodicSpec, CliError> {
        let mut spec = ErgodicSpec::new(parse_model(&self.drift)?, x0, horizon, dt);
        if let Some(s) = &self.sigma {
            spec = spec.with_diffusion(parse_model(s)?);
        }
        Ok(spec)
    }
}

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Significance levels.
    #[arg(long, default_value = "0.01,0.05,0.10")]
    pub alphas: String,
    /// Monte Carlo replicates.
    #[arg(long = "M", default_value_t = 100_000)]
    pub m: usize,
    /// Steps of the Wiener grid on [0, 1].
    #[arg(long = "n-steps", default_value_t = 4096)]
    pub n_steps: usize,
    /// Also calibrate the Poisson statistics at finite horizons.
    #[arg(long = "finite-poisson")]
    pub finite_poisson: bool,
    /// Horizons (unit periods, S* = 1) for --finite-poisson.
    #[arg(long = "T", default_value = "10,100")]
    pub t: String,
    /// Calibrate non-distribution-free ergodic statistics under a model null
    /// instead of the limit thresholds.
    #[arg(long = "model-null")]
    pub model_null: bool,
    /// Statistics for --model-null.
    #[arg(
        long,
        default_value = "CVM_ERGODIC_EDF,KS_ERGODIC_EDF,CVM_ERGODIC_DENSITY,KS_ERGODIC_DENSITY"
    )]
    pub kinds: String,
    #[command(flatten)]
    pub model: ErgodicModelArgs,
    /// Observation horizon for --model-null.
    #[arg(long, default_value_t = 500.0)]
    pub horizon: f64,
    /// Euler step for --model-null.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Initial value for --model-null.
    #[arg(long, default_value_t = 0.0)]
    pub x0: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

pub fn run(a: &CalibrateArgs) -> Result<(), CliError> {
    let alphas: Vec<f64> = parse_list(&a.alphas, "significance level")?;
    create_dir(&a.out)?;
    let seed = a.common.seed;
    if a.model_null {
        let kinds: Vec<StatKind> = parse_list(&a.kinds, "statistic kind")?;
        let null = ModelNull::new(a.model.spec(a.x0, a.horizon, a.dt)?, a.model.null_table()?);
        let table = calibrate_model_null(&kinds, &null, &alphas, a.m, seed)?;
        return write_file(&a.out.join(MODEL_FILE), |w| gofsim::io::write_calibration(&table, w));
    }
    let grid = Grid::unit(a.n_steps)?;
    let table = calibrate_limit(&alphas, a.m, &grid, seed)?;
    write_file(&a.out.join(LIMIT_FILE), |w| gofsim::io::write_calibration(&table, w))?;
    if a.finite_poisson {
        let periods: Vec<usize> = parse_list(&a.t, "period count")?;
        let table = calibrate_finite_poisson(&alphas, &periods, a.m, seed)?;
        write_file(&a.out.join(FINITE_FILE), |w| gofsim::io::write_calibration(&table, w))?;
    }
    Ok(())
}
