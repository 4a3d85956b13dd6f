use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use gofsim::mc::{calibrate_finite_poisson, calibrate_limit, limit_power, limit_power_curves, TestKind};
use gofsim::Grid;

use super::power::power_meta;
use super::{create_dir, write_file};
use crate::models::{parse_grid, parse_list};
use crate::{CliError, Common};

pub const FIG1_FILE: &str = "fig1_thresholds.csv";
pub const FIG2_FILE: &str = "fig2_power.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";
pub const TIMING_FILE: &str = "timing.txt";

#[derive(Args, Debug)]
pub struct FiguresArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "M", default_value_t = 100_000)]
    pub m: usize,
    #[arg(long = "n-steps", default_value_t = 4096)]
    pub n_steps: usize,
    /// Significance levels for the threshold figure.
    #[arg(long, default_value = "0.01:0.2:0.01")]
    pub alphas: String,
    /// Finite horizons (unit periods) for the threshold figure.
    #[arg(long = "T", default_value = "10,100")]
    pub t: String,
    /// Drift grid and level of the power figure.
    #[arg(long, default_value = "0:4:0.25")]
    pub rho: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

pub fn run(a: &FiguresArgs) -> Result<(), CliError> {
    let start = Instant::now();
    // the range syntax accumulates rounding; keep the levels as printed
    let alphas: Vec<f64> = parse_grid(&a.alphas)?
        .into_iter()
        .map(|x| (x * 1e10).round() / 1e10)
        .collect();
    let periods: Vec<usize> = parse_list(&a.t, "period count")?;
    let rhos = parse_grid(&a.rho)?;
    let grid = Grid::unit(a.n_steps)?;
    let seed = a.common.seed;
    create_dir(&a.out)?;

    let mut thresholds = calibrate_limit(&alphas, a.m, &grid, seed)?;
    if !alphas.iter().any(|x| (x - a.alpha).abs() < 1e-12) {
        thresholds.merge(calibrate_limit(&[a.alpha], a.m, &grid, seed)?);
    }
    let mut fig1 = thresholds.clone();
    fig1.merge(calibrate_finite_poisson(&alphas, &periods, a.m, seed)?);
    write_file(&a.out.join(FIG1_FILE), |w| gofsim::io::write_calibration(&fig1, w))?;

    let mut curves = limit_power_curves(&TestKind::ALL, &rhos, a.alpha, a.m, &grid, seed, &thresholds)?;
    curves.push(limit_power(
        TestKind::Laump,
        &rhos,
        a.alpha,
        a.m,
        &grid,
        seed,
        &thresholds,
    )?);
    let meta = power_meta(seed, a.m, a.n_steps, a.alpha);
    write_file(&a.out.join(FIG2_FILE), |w| {
        gofsim::io::write_power_curves(&curves, &meta, w)
    })?;

    write_file(&a.out.join(MANIFEST_FILE), |w| {
        let lines = [
            "command=figures".to_string(),
            format!("master_seed={seed}"),
            format!("M={}", a.m),
            format!("n_steps={}", a.n_steps),
            format!(
                "alphas={}",
                alphas.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
            ),
            format!("T={}", a.t),
            format!("rho={}", a.rho),
            format!("alpha={}", a.alpha),
            "seed_derivation=derive_seed(master_seed, experiment tag); replicate i uses stream i".to_string(),
            format!("files={FIG1_FILE},{FIG2_FILE}"),
            format!("runtime_file={TIMING_FILE}"),
            format!("version={}", env!("CARGO_PKG_VERSION")),
        ];
        for l in lines {
            writeln!(w, "{l}")?;
        }
        Ok(())
    })?;
    // wall time varies between runs, so it is kept out of the manifest
    let secs = start.elapsed().as_secs_f64();
    write_file(&a.out.join(TIMING_FILE), |w| {
        writeln!(w, "runtime_seconds={secs:.3}")?;
        writeln!(w, "threads={}", rayon::current_num_threads())?;
        Ok(())
    })
}
