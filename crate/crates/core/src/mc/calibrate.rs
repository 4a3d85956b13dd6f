use super::table::{CalibrationEntry, CalibrationTable, Horizon, TableKind};
use super::{check_alpha, check_replicates, par_map, partition_aborts, sorted, upper_quantile};
use crate::diffusion::{expect_under_invariant, simulate_ergodic, DensityTable, ErgodicSpec};
use crate::error::{Error, Result};
use crate::gauss_paths::{cvm_of, fill_wiener, ks_of, monitoring_shift, KlSeries};
use crate::model::ScalarModel;
use crate::path::Grid;
use crate::point_proc::{simulate_poisson, IntensitySpec};
use crate::rng::{derive_seed, RngStream};
use crate::stats::{
    density_statistics, edf_statistics, empirical_df, local_time_density, stat_ergodic_free, stat_ergodic_free_sigma,
    stat_poisson, StatKind,
};

/// Samples of the two limit functionals over `M` Wiener paths on `[0, 1]`.
/// The supremum carries the discrete-monitoring correction.
#[derive(Debug, Clone)]
pub struct LimitSamples {
    pub cvm: Vec<f64>,
    pub ks: Vec<f64>,
}

pub(crate) fn require_unit(grid: &Grid) -> Result<()> {
    if grid.horizon() != 1.0 {
        return Err(Error::InvalidGrid(format!(
            "limit functionals live on [0, 1], got horizon {}",
            grid.horizon()
        )));
    }
    Ok(())
}

pub fn limit_samples(m: usize, grid: &Grid, master_seed: u64) -> Result<LimitSamples> {
    require_unit(grid)?;
    let seed = derive_seed(master_seed, "calibrate-limit");
    let shift = monitoring_shift(grid);
    let pairs = par_map(m, |i| {
        let mut noise = RngStream::new(seed, i).sampler();
        let mut w = vec![0.0; grid.n_points()];
        fill_wiener(grid, &mut noise, &mut w);
        (cvm_of(&w, grid), ks_of(&w) + shift)
    });
    let (cvm, ks) = pairs.into_iter().unzip();
    Ok(LimitSamples { cvm, ks })
}

fn push_quantiles(
    table: &mut CalibrationTable,
    kind: TableKind,
    horizon: Horizon,
    samples: Vec<f64>,
    alphas: &[f64],
    resolution: &str,
) -> Result<()> {
    let n = samples.len();
    let s = sorted(samples);
    for &alpha in alphas {
        let q = upper_quantile(&s, alpha)?;
        table.insert(CalibrationEntry {
            kind,
            alpha,
            horizon,
            threshold: q.value,
            std_error: q.std_error,
            n_replicates: n,
            resolution: resolution.to_string(),
        });
    }
    Ok(())
}

fn check_alphas(alphas: &[f64]) -> Result<()> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("empty alpha list".into()));
    }
    alphas.iter().try_for_each(|&a| check_alpha(a))
}

fn meta(master_seed: u64, m: usize, extra: &[(&str, String)]) -> Vec<(String, String)> {
    let mut v = vec![
        ("master_seed".to_string(), master_seed.to_string()),
        ("M".to_string(), m.to_string()),
    ];
    v.extend(extra.iter().map(|(k, val)| (k.to_string(), val.clone())));
    v
}

/// Upper quantiles of `int_0^1 W^2` and `sup |W|` from `M` sampled paths.
pub fn calibrate_limit(alphas: &[f64], m: usize, grid: &Grid, master_seed: u64) -> Result<CalibrationTable> {
    check_replicates(m)?;
    check_alphas(alphas)?;
    let samples = limit_samples(m, grid, master_seed)?;
    let n = grid.n_steps();
    let mut table = CalibrationTable::new(meta(master_seed, m, &[("n_steps", n.to_string())]));
    let res = format!("n_steps={n}");
    push_quantiles(&mut table, TableKind::Cvm, Horizon::Limit, samples.cvm, alphas, &res)?;
    push_quantiles(&mut table, TableKind::Ks, Horizon::Limit, samples.ks, alphas, &res)?;
    Ok(table)
}

/// Upper quantiles of `int_0^1 W^2` from its truncated Karhunen–Loève
/// series, an oracle independent of path discretization.
pub fn calibrate_kl_series(alphas: &[f64], m: usize, n_terms: usize, master_seed: u64) -> Result<CalibrationTable> {
    check_replicates(m)?;
    check_alphas(alphas)?;
    let series = KlSeries::new(n_terms)?;
    let seed = derive_seed(master_seed, "kl-series");
    let samples = par_map(m, |i| series.sample(&mut RngStream::new(seed, i).sampler()));
    let mut table = CalibrationTable::new(meta(master_seed, m, &[("kl_terms", n_terms.to_string())]));
    push_quantiles(
        &mut table,
        TableKind::Cvm,
        Horizon::Limit,
        samples,
        alphas,
        &format!("kl_terms={n_terms}"),
    )?;
    Ok(table)
}

/// Exact-size thresholds of `W_n^2` and `sqrt(n) D_n` for a unit-rate
/// Poisson process observed over `T` unit periods, for each `T` listed.
pub fn calibrate_finite_poisson(
    alphas: &[f64],
    periods: &[usize],
    m: usize,
    master_seed: u64,
) -> Result<CalibrationTable> {
    check_replicates(m)?;
    check_alphas(alphas)?;
    if periods.is_empty() || periods.contains(&0) {
        return Err(Error::InvalidArgument("T values must be positive period counts".into()));
    }
    let list = periods.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut table = CalibrationTable::new(meta(master_seed, m, &[("T", list)]));
    let cumulative = ScalarModel::new("t", |t| t);
    for &n in periods {
        let seed = derive_seed(master_seed, &format!("finite-poisson-T={n}"));
        let results = par_map(m, |i| -> Result<(f64, f64)> {
            let rec = simulate_poisson(&IntensitySpec::Constant(1.0), n as f64, RngStream::new(seed, i))?
                .with_period(1.0, n)?;
            let (w, d) = stat_poisson(&rec, &cumulative)?;
            Ok((w.value, d.value))
        });
        let (cvm, ks): (Vec<f64>, Vec<f64>) = results.into_iter().collect::<Result<Vec<_>>>()?.into_iter().unzip();
        let horizon = Horizon::Finite(n as f64);
        let res = "poisson S*=1 tau=1";
        push_quantiles(&mut table, TableKind::Cvm, horizon, cvm, alphas, res)?;
        push_quantiles(&mut table, TableKind::Ks, horizon, ks, alphas, res)?;
    }
    Ok(table)
}

/// An ergodic null model `dX = S*(X) dt + sigma(X) dW` observed on
/// `[0, T]` with Euler step `dt`, together with its invariant law.
#[derive(Debug, Clone)]
pub struct ModelNull {
    pub spec: ErgodicSpec,
    pub table: DensityTable,
}

impl ModelNull {
    pub fn new(spec: ErgodicSpec, table: DensityTable) -> Self {
        Self { spec, table }
    }

    pub fn description(&self) -> String {
        let s = &self.spec;
        format!(
            "drift={};sigma={};x0={};dt={};x_points={}",
            s.drift.label(),
            s.diffusion.as_ref().map_or("1", |m| m.label()),
            s.x0,
            s.dt,
            self.table.x_grid().len()
        )
    }

    /// `E sigma(xi)^2` under the tabulated invariant law.
    pub fn sigma_second_moment(&self) -> f64 {
        match &self.spec.diffusion {
            Some(s) => {
                let s = s.clone();
                expect_under_invariant(&ScalarModel::new("sigma^2", move |x| s.eval(x).powi(2)), &self.table)
            }
            None => 1.0,
        }
    }
}

const ERGODIC_KINDS: [StatKind; 6] = [
    StatKind::CVM_ERGODIC_EDF,
    StatKind::KS_ERGODIC_EDF,
    StatKind::CVM_ERGODIC_DENSITY,
    StatKind::KS_ERGODIC_DENSITY,
    StatKind::CVM_ERGODIC_FREE,
    StatKind::CVM_ERGODIC_FREE_SIGMA,
];

/// Per-model null quantiles of ergodic-diffusion statistics, needed for
/// the statistics that are not distribution-free. Replicates whose path
/// diverges are dropped; more than 0.01% of them fails the calibration.
pub fn calibrate_model_null(
    kinds: &[StatKind],
    model: &ModelNull,
    alphas: &[f64],
    m: usize,
    master_seed: u64,
) -> Result<CalibrationTable> {
    check_replicates(m)?;
    check_alphas(alphas)?;
    if kinds.is_empty() {
        return Err(Error::InvalidArgument("no statistic requested".into()));
    }
    if let Some(k) = kinds.iter().find(|k| !ERGODIC_KINDS.contains(k)) {
        return Err(Error::InvalidArgument(format!(
            "{k} is not an ergodic-diffusion statistic"
        )));
    }
    let e_sigma2 = model.sigma_second_moment();
    let seed = derive_seed(master_seed, "model-null");
    let needs_edf = kinds
        .iter()
        .any(|k| matches!(k, StatKind::CVM_ERGODIC_EDF | StatKind::KS_ERGODIC_EDF));
    let needs_density = kinds
        .iter()
        .any(|k| matches!(k, StatKind::CVM_ERGODIC_DENSITY | StatKind::KS_ERGODIC_DENSITY));
    let t = model.spec.horizon;
    let results = par_map(m, |i| -> Result<Vec<f64>> {
        let path = simulate_ergodic(&model.spec, RngStream::new(seed, i))?;
        let x = model.table.x_grid();
        let edf = if needs_edf {
            Some(edf_statistics(&empirical_df(&path, x), &model.table, t)?)
        } else {
            None
        };
        let dens = if needs_density {
            Some(density_statistics(&local_time_density(&path, x), &model.table, t)?)
        } else {
            None
        };
        kinds
            .iter()
            .map(|k| {
                Ok(match k {
                    StatKind::CVM_ERGODIC_EDF => edf.as_ref().expect("computed").0.value,
                    StatKind::KS_ERGODIC_EDF => edf.as_ref().expect("computed").1.value,
                    StatKind::CVM_ERGODIC_DENSITY => dens.as_ref().expect("computed").0.value,
                    StatKind::KS_ERGODIC_DENSITY => dens.as_ref().expect("computed").1.value,
                    StatKind::CVM_ERGODIC_FREE => stat_ergodic_free(&path, &model.spec.drift).value,
                    _ => stat_ergodic_free_sigma(&path, &model.spec.drift, e_sigma2)?.value,
                })
            })
            .collect()
    });
    let (rows, aborted) = partition_aborts(results)?;
    let desc = model.description();
    let mut table = CalibrationTable::new(meta(
        master_seed,
        m,
        &[("model", desc.clone()), ("aborted", aborted.to_string())],
    ));
    for (j, &k) in kinds.iter().enumerate() {
        let samples: Vec<f64> = rows.iter().map(|r| r[j]).collect();
        push_quantiles(
            &mut table,
            TableKind::Stat(k),
            Horizon::Finite(t),
            samples,
            alphas,
            &desc,
        )?;
    }
    Ok(table)
}
