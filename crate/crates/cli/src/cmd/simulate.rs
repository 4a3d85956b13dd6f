use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gofsim::diffusion::{simulate_ergodic, simulate_small_noise, ErgodicSpec, SmallNoiseSpec};
use gofsim::gauss_paths::simulate_wiener;
use gofsim::point_proc::{simulate_hawkes, simulate_poisson, HawkesSpec, IntensitySpec};
use gofsim::rng::derive_seed;
use gofsim::{Grid, RngStream, ScalarModel};

use crate::models::{constant_value, parse_model};
use crate::{CliError, Common};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Process {
    Wiener,
    Ergodic,
    SmallNoise,
    Poisson,
    Hawkes,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub process: Process,
    /// Replicate (stream) index; different indices give independent draws.
    #[arg(long, default_value_t = 0)]
    pub index: u64,
    /// Horizon of a path.
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    /// Steps of a Wiener or small-noise path.
    #[arg(long = "n-steps", default_value_t = 1000)]
    pub n_steps: usize,
    /// Euler step of an ergodic path.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value = "ou:theta=1")]
    pub drift: String,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Alternative direction: adds `h/sqrt(T)` (ergodic) or `eps h/S*`
    /// (small noise) to the drift.
    #[arg(long)]
    pub h: Option<String>,
    /// Poisson intensity on one period.
    #[arg(long, default_value = "constant:c=1")]
    pub intensity: String,
    /// Hawkes base rate and kernel.
    #[arg(long = "s-star", default_value_t = 1.0)]
    pub s_star: f64,
    #[arg(long, default_value = "exp-kernel:a=0.5,b=1,L=20")]
    pub kernel: String,
    /// Period length and number of periods of an event record.
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(a: &SimulateArgs) -> Result<(), CliError> {
    let rng = RngStream::new(derive_seed(a.common.seed, "simulate"), a.index);
    let h = a.h.as_deref().map(parse_model).transpose()?;
    let mut buf = Vec::new();
    match a.process {
        Process::Wiener => {
            let path = simulate_wiener(&Grid::new(a.n_steps, a.horizon)?, rng);
            gofsim::io::write_path_csv(&path, &mut buf)?;
        }
        Process::Ergodic => {
            let drift = parse_model(&a.drift)?;
            let drift = match h {
                Some(h) => {
                    let scale = 1.0 / a.horizon.sqrt();
                    ScalarModel::new("S* + h/sqrt(T)", move |x| drift.eval(x) + scale * h.eval(x))
                }
                None => drift,
            };
            let mut spec = ErgodicSpec::new(drift, a.x0, a.horizon, a.dt);
            if let Some(s) = &a.sigma {
                spec = spec.with_diffusion(parse_model(s)?);
            }
            gofsim::io::write_path_csv(&simulate_ergodic(&spec, rng)?, &mut buf)?;
        }
        Process::SmallNoise => {
            let mut spec = SmallNoiseSpec::null(parse_model(&a.drift)?, a.epsilon, a.x0);
            if let Some(h) = h {
                spec = spec.with_alternative(h);
            }
            let path = simulate_small_noise(&spec, &Grid::new(a.n_steps, a.horizon)?, rng)?;
            gofsim::io::write_path_csv(&path, &mut buf)?;
        }
        Process::Poisson => {
            let intensity = match constant_value(&a.intensity)? {
                Some(c) => IntensitySpec::Constant(c),
                None => IntensitySpec::Periodic {
                    intensity: parse_model(&a.intensity)?,
                    period: a.tau,
                },
            };
            let rec = simulate_poisson(&intensity, a.tau * a.n as f64, rng)?.with_period(a.tau, a.n)?;
            gofsim::io::write_events_csv(&rec, &mut buf)?;
        }
        Process::Hawkes => {
            let spec = HawkesSpec::new(a.s_star, parse_model(&a.kernel)?)?;
            let rec = simulate_hawkes(&spec, a.tau * a.n as f64, rng)?.with_period(a.tau, a.n)?;
            gofsim::io::write_events_csv(&rec, &mut buf)?;
        }
    }
    match &a.out {
        Some(p) => std::fs::write(p, &buf).map_err(|e| CliError::config(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(&buf)
            .map_err(|e| CliError::config(e.to_string())),
    }
}
