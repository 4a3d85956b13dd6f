use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gofsim::diffusion::expect_under_invariant;
use gofsim::mc::{
    finite_sample_power, limit_power, limit_power_curves, CalibrationTable, FiniteModel, Horizon, PowerCurve,
    PowerPoint, Provenance, TestKind,
};
use gofsim::{Grid, ScalarModel};

use super::calibrate::ErgodicModelArgs;
use super::{create_dir, load_table, write_file};
use crate::models::{parse_grid, parse_model};
use crate::{CliError, Common};

pub const POWER_FILE: &str = "power.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FiniteChoice {
    PoissonVsHawkes,
    ErgodicFree,
}

#[derive(Args, Debug)]
pub struct PowerArgs {
    #[command(flatten)]
    pub common: Common,
    /// Drift values, `start:stop:step` or a list.
    #[arg(long, default_value = "0:4:0.25")]
    pub rho: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long = "M", default_value_t = 100_000)]
    pub m: usize,
    #[arg(long = "n-steps", default_value_t = 4096)]
    pub n_steps: usize,
    /// Limit calibration table (CVM and KS thresholds).
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Add the closed-form LAUMP curve Phi(rho - z_alpha).
    #[arg(long = "analytic-laump")]
    pub analytic_laump: bool,
    /// Add a finite-sample point for a contiguous alternative.
    #[arg(long, value_enum)]
    pub finite: Option<FiniteChoice>,
    /// Test used for the finite-sample point.
    #[arg(long = "finite-test", default_value = "CVM")]
    pub finite_test: TestKind,
    /// Replicates for the finite-sample point.
    #[arg(long = "finite-M", default_value_t = 10_000)]
    pub finite_m: usize,
    /// Null rate S* of the Poisson-vs-Hawkes point.
    #[arg(long = "s-star", default_value_t = 1.0)]
    pub s_star: f64,
    /// Alternative direction h (kernel for Hawkes, function of x for ergodic).
    #[arg(long, default_value = "box-h:height=1,width=1")]
    pub h: String,
    /// Period length and number of periods of the Poisson-vs-Hawkes point.
    #[arg(long, default_value_t = 100.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[command(flatten)]
    pub model: ErgodicModelArgs,
    /// Horizon, Euler step and initial value of the ergodic-free point.
    #[arg(long, default_value_t = 1000.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 0.0)]
    pub x0: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

fn finite_point(a: &PowerArgs, choice: FiniteChoice, table: &CalibrationTable) -> Result<PowerCurve, CliError> {
    let h = parse_model(&a.h)?;
    let model = match choice {
        FiniteChoice::PoissonVsHawkes => FiniteModel::PoissonVsHawkes {
            s_star: a.s_star,
            h,
            period: a.tau,
            n_periods: a.n,
        },
        FiniteChoice::ErgodicFree => {
            let null = a.model.null_table()?;
            let sigma = a.model.sigma.as_deref().map(parse_model).transpose()?;
            let e_sigma2 = match &sigma {
                Some(s) => {
                    let s = s.clone();
                    expect_under_invariant(&ScalarModel::new("sigma^2", move |x| s.eval(x).powi(2)), &null)
                }
                None => 1.0,
            };
            FiniteModel::ErgodicFree {
                drift: parse_model(&a.model.drift)?,
                h,
                sigma,
                e_sigma2,
                x0: a.x0,
                horizon: a.horizon,
                dt: a.dt,
                table: Some(null),
            }
        }
    };
    let est = finite_sample_power(
        &model,
        a.finite_test,
        a.alpha,
        a.finite_m,
        a.common.seed,
        table,
        Horizon::Limit,
    )?;
    Ok(PowerCurve {
        test: a.finite_test,
        alpha: a.alpha,
        provenance: Provenance::FiniteSample,
        points: vec![PowerPoint {
            rho: est.rho.unwrap_or(f64::NAN),
            power: est.power,
            std_error: est.std_error,
        }],
    })
}

pub fn power_meta(a_seed: u64, m: usize, n_steps: usize, alpha: f64) -> Vec<(String, String)> {
    vec![
        ("master_seed".into(), a_seed.to_string()),
        ("M".into(), m.to_string()),
        ("n_steps".into(), n_steps.to_string()),
        ("alpha".into(), alpha.to_string()),
    ]
}

pub fn run(a: &PowerArgs) -> Result<(), CliError> {
    let rhos = parse_grid(&a.rho)?;
    let table = load_table(a.table.as_deref(), "limit power of the CVM and KS tests")?;
    let grid = Grid::unit(a.n_steps)?;
    let mut curves = limit_power_curves(&TestKind::ALL, &rhos, a.alpha, a.m, &grid, a.common.seed, &table)?;
    if a.analytic_laump {
        curves.push(limit_power(
            TestKind::Laump,
            &rhos,
            a.alpha,
            a.m,
            &grid,
            a.common.seed,
            &table,
        )?);
    }
    if let Some(choice) = a.finite {
        curves.push(finite_point(a, choice, &table)?);
    }
    create_dir(&a.out)?;
    let meta = power_meta(a.common.seed, a.m, a.n_steps, a.alpha);
    write_file(&a.out.join(POWER_FILE), |w| {
        gofsim::io::write_power_curves(&curves, &meta, w)
    })
}
