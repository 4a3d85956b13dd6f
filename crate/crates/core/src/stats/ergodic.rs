//! Statistics for ergodic diffusions: empirical distribution and
//! local-time density tests (model-specific null laws) and the
//! distribution-free residual statistic.

use super::{StatKind, StatResult};
use crate::diffusion::DensityTable;
use crate::error::{Error, Result};
use crate::model::ScalarModel;
use crate::path::SampledPath;

/// `F_T(x) = T^-1 int_0^T 1{X_t < x} dt` by left-point step summation.
pub fn empirical_df(path: &SampledPath, x_grid: &[f64]) -> Vec<f64> {
    let v = path.values();
    let n = v.len() - 1;
    let mut left = v[..n].to_vec();
    left.sort_by(f64::total_cmp);
    x_grid
        .iter()
        .map(|&x| left.partition_point(|&y| y < x) as f64 / n as f64)
        .collect()
}

/// `f_T(x) = (2/T) int_0^T 1{X_t < x} dX_t` with left-point (Itô) sums.
/// Values may be negative at finite `T`.
pub fn local_time_density(path: &SampledPath, x_grid: &[f64]) -> Vec<f64> {
    let v = path.values();
    let mut pairs: Vec<(f64, f64)> = v.windows(2).map(|w| (w[0], w[1] - w[0])).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut prefix = Vec::with_capacity(pairs.len() + 1);
    let mut acc = 0.0;
    prefix.push(0.0);
    for (_, dx) in &pairs {
        acc += dx;
        prefix.push(acc);
    }
    let scale = 2.0 / path.grid().horizon();
    x_grid
        .iter()
        .map(|&x| scale * prefix[pairs.partition_point(|p| p.0 < x)])
        .collect()
}

fn weighted_square(table: &DensityTable, diff: &[f64]) -> f64 {
    let x = table.x_grid();
    let f = table.density();
    (1..x.len())
        .map(|i| 0.5 * (x[i] - x[i - 1]) * (diff[i - 1].powi(2) * f[i - 1] + diff[i].powi(2) * f[i]))
        .sum()
}

fn check_len(table: &DensityTable, est: &[f64]) -> Result<()> {
    if est.len() != table.x_grid().len() {
        return Err(Error::InvalidArgument(
            "estimate and null table use different x grids".into(),
        ));
    }
    Ok(())
}

/// `T int (F_T - F*)^2 dF*` and `T^1/2 sup |F_T - F*|` on the table grid.
pub fn edf_statistics(fhat: &[f64], table: &DensityTable, horizon: f64) -> Result<(StatResult, StatResult)> {
    check_len(table, fhat)?;
    let diff: Vec<f64> = fhat.iter().zip(table.cdf()).map(|(a, b)| a - b).collect();
    let cvm = horizon * weighted_square(table, &diff);
    let sup = diff.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    Ok((
        StatResult::new(StatKind::CVM_ERGODIC_EDF, cvm, "W_T^2; not distribution-free"),
        StatResult::new(
            StatKind::KS_ERGODIC_EDF,
            horizon.sqrt() * sup,
            "T^1/2 * D_T (rejection scale); not distribution-free",
        ),
    ))
}

/// `T int (f_T - f*)^2 dF*` and `T^1/2 sup |f_T - f*|` on the table grid.
pub fn density_statistics(fhat: &[f64], table: &DensityTable, horizon: f64) -> Result<(StatResult, StatResult)> {
    check_len(table, fhat)?;
    let diff: Vec<f64> = fhat.iter().zip(table.density()).map(|(a, b)| a - b).collect();
    let cvm = horizon * weighted_square(table, &diff);
    let sup = diff.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    let negative = fhat.iter().any(|v| *v < 0.0);
    let note = |base: &str| {
        if negative {
            format!("{base}; local-time estimate negative somewhere")
        } else {
            base.to_string()
        }
    };
    Ok((
        StatResult::new(StatKind::CVM_ERGODIC_DENSITY, cvm, note("V_T^2; not distribution-free")),
        StatResult::new(
            StatKind::KS_ERGODIC_DENSITY,
            horizon.sqrt() * sup,
            note("T^1/2 * d_T (rejection scale); not distribution-free"),
        ),
    ))
}

pub fn stat_ergodic_edf(path: &SampledPath, table: &DensityTable) -> Result<(StatResult, StatResult)> {
    let fhat = empirical_df(path, table.x_grid());
    edf_statistics(&fhat, table, path.grid().horizon())
}

pub fn stat_ergodic_density(path: &SampledPath, table: &DensityTable) -> Result<(StatResult, StatResult)> {
    let fhat = local_time_density(path, table.x_grid());
    density_statistics(&fhat, table, path.grid().horizon())
}

/// `T^-2 int_0^T [X_t - X_0 - int_0^t S*(X_v) dv]^2 dt`; the inner integral
/// is a left-point sum, the outer one a trapezoid.
fn residual_square(path: &SampledPath, drift: &ScalarModel) -> f64 {
    let v = path.values();
    let h = path.grid().step();
    let x0 = v[0];
    let mut drift_sum = 0.0;
    let mut acc = 0.0;
    let last = v.len() - 1;
    for (i, &x) in v.iter().enumerate() {
        let r = x - x0 - drift_sum;
        let w = if i == 0 || i == last { 0.5 } else { 1.0 };
        acc += w * r * r;
        drift_sum += drift.eval(x) * h;
    }
    let t = path.grid().horizon();
    acc * h / (t * t)
}

pub fn stat_ergodic_free(path: &SampledPath, drift: &ScalarModel) -> StatResult {
    StatResult::new(
        StatKind::CVM_ERGODIC_FREE,
        residual_square(path, drift),
        "W~_T^2 (unit diffusion)",
    )
}

/// Residual statistic normalized by `E_{S*}[sigma(xi)^2]`.
pub fn stat_ergodic_free_sigma(path: &SampledPath, drift: &ScalarModel, e_sigma2: f64) -> Result<StatResult> {
    if !(e_sigma2 > 0.0 && e_sigma2.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "E[sigma^2] = {e_sigma2} must be positive"
        )));
    }
    Ok(StatResult::new(
        StatKind::CVM_ERGODIC_FREE_SIGMA,
        residual_square(path, drift) / e_sigma2,
        format!("W^_T^2 normalized by E sigma^2 = {e_sigma2}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffusion::{invariant_density, linspace, simulate_ergodic, ErgodicSpec};
    use crate::path::Grid;
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;

    fn ou_table() -> DensityTable {
        invariant_density(&ScalarModel::ou(1.0), None, linspace(-6.0, 6.0, 601)).unwrap()
    }

    #[test]
    fn edf_extremes_and_constant_path() {
        let grid = Grid::unit(10).unwrap();
        let p = SampledPath::from_fn(grid, |t| t).unwrap();
        let f = empirical_df(&p, &[-1.0, 2.0]);
        assert_eq!(f, vec![0.0, 1.0]);
        let c = SampledPath::from_fn(grid, |_| 0.3).unwrap();
        assert_eq!(empirical_df(&c, &[0.29, 0.3, 0.31]), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn local_time_linear_path_matches_direct_sum() {
        let grid = Grid::unit(100).unwrap();
        let p = SampledPath::from_fn(grid, |t| t).unwrap();
        let xs = [0.0, 0.105, 0.5, 0.999, 1.5];
        let est = local_time_density(&p, &xs);
        for (x, e) in xs.iter().zip(&est) {
            let v = p.values();
            let direct: f64 = (0..100).filter(|&i| v[i] < *x).map(|i| v[i + 1] - v[i]).sum::<f64>() * 2.0;
            assert_abs_diff_eq!(*e, direct, epsilon = 1e-12);
        }
        // for an increasing unit-slope path the estimate is ~ 2x
        assert_abs_diff_eq!(est[2], 1.0, epsilon = 1e-9);
        let flat = SampledPath::from_fn(grid, |_| 1.0).unwrap();
        assert!(local_time_density(&flat, &xs).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn synthetic_statistics() {
        let t = ou_table();
        let (w, d) = edf_statistics(t.cdf(), &t, 100.0).unwrap();
        assert_eq!((w.value, d.value), (0.0, 0.0));
        let (v, dd) = density_statistics(t.density(), &t, 100.0).unwrap();
        assert_eq!((v.value, dd.value), (0.0, 0.0));

        let n = t.x_grid().len();
        let shifted: Vec<f64> = t
            .cdf()
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 || i == n - 1 { *c } else { c + 0.1 })
            .collect();
        let (w, d) = edf_statistics(&shifted, &t, 100.0).unwrap();
        // oracle: midpoint rule on 0.01 * f over the interior cells
        let x = t.x_grid();
        let f = t.density();
        let oracle: f64 = (1..n)
            .map(|i| {
                let a = if i == 1 { 0.0 } else { 0.01 * f[i - 1] };
                let b = if i == n - 1 { 0.0 } else { 0.01 * f[i] };
                0.5 * (x[i] - x[i - 1]) * (a + b)
            })
            .sum::<f64>()
            * 100.0;
        assert_abs_diff_eq!(w.value, oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(w.value, 1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(d.value, 1.0, epsilon = 1e-12);
        assert!(edf_statistics(&shifted[1..], &t, 1.0).is_err());
    }

    #[test]
    fn ou_estimators_are_consistent() {
        let spec = ErgodicSpec::new(ScalarModel::ou(1.0), 0.0, 1000.0, 0.01);
        let p = simulate_ergodic(&spec, RngStream::new(12, 0)).unwrap();
        let t = ou_table();
        let f = empirical_df(&p, t.x_grid());
        let dev = f.iter().zip(t.cdf()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dev < 0.05, "{dev}");
        let ld = local_time_density(&p, t.x_grid());
        let mad = ld.iter().zip(t.density()).map(|(a, b)| (a - b).abs()).sum::<f64>() / ld.len() as f64;
        assert!(mad < 0.05, "{mad}");
    }

    #[test]
    fn free_statistic_on_ode_path_is_zero() {
        // Euler path with zero noise satisfies the left-point residual exactly
        let spec = ErgodicSpec::new(ScalarModel::ou(0.5), 2.0, 10.0, 0.01);
        let p = simulate_ergodic(&spec, RngStream::new(1, 1).zero_noise()).unwrap();
        assert!(stat_ergodic_free(&p, &ScalarModel::ou(0.5)).value < 1e-20);
    }

    #[test]
    fn free_statistic_reductions() {
        let grid = Grid::new(1000, 50.0).unwrap();
        let w = crate::gauss_paths::simulate_wiener(&grid, RngStream::new(4, 4));
        let zero = ScalarModel::zero();
        let free = stat_ergodic_free(&w, &zero).value;
        let unit = SampledPath::new(
            Grid::unit(1000).unwrap(),
            w.values().iter().map(|v| v / 50f64.sqrt()).collect(),
        )
        .unwrap();
        assert_abs_diff_eq!(free, crate::gauss_paths::cvm_functional(&unit), epsilon = 1e-12);
        assert_eq!(stat_ergodic_free_sigma(&w, &zero, 1.0).unwrap().value, free);
        // sigma = 2 scales the residual by 2, E sigma^2 = 4 cancels it
        let doubled = SampledPath::new(grid, w.values().iter().map(|v| 2.0 * v).collect()).unwrap();
        assert_abs_diff_eq!(
            stat_ergodic_free_sigma(&doubled, &zero, 4.0).unwrap().value,
            free,
            epsilon = 1e-12
        );
        assert!(stat_ergodic_free_sigma(&w, &zero, 0.0).is_err());
    }
}
