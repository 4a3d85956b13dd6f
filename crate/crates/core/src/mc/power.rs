use std::fmt;
use std::str::FromStr;

use statrs::distribution::{ContinuousCDF, Normal};

use super::calibrate::require_unit;
use super::table::{CalibrationTable, Horizon, TableKind};
use super::{check_alpha, par_map, partition_aborts, rejection_rate};
use crate::diffusion::{cumulative_trapezoid, simulate_ergodic, simulate_small_noise, solve_limit_ode};
use crate::diffusion::{DensityTable, ErgodicSpec, SmallNoiseSpec};
use crate::error::{Error, Result};
use crate::gauss_paths::{fill_wiener, ks_of, monitoring_shift};
use crate::model::ScalarModel;
use crate::path::{Grid, SampledPath};
use crate::point_proc::simulate_hawkes_alternative;
use crate::rng::{derive_seed, RngStream};
use crate::stats::{
    rho_h, stat_ergodic_free, stat_ergodic_free_sigma, stat_laump, stat_poisson, stat_small_noise, AltContext,
    AltDescriptor,
};

/// The three tests compared in the power study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestKind {
    Cvm,
    Ks,
    Laump,
}

impl TestKind {
    pub const ALL: [TestKind; 3] = [TestKind::Cvm, TestKind::Ks, TestKind::Laump];

    fn table_kind(self) -> Option<TableKind> {
        match self {
            TestKind::Cvm => Some(TableKind::Cvm),
            TestKind::Ks => Some(TableKind::Ks),
            TestKind::Laump => None,
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestKind::Cvm => "CVM",
            TestKind::Ks => "KS",
            TestKind::Laump => "LAUMP",
        })
    }
}

impl FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "CVM" => Ok(TestKind::Cvm),
            "KS" => Ok(TestKind::Ks),
            "LAUMP" => Ok(TestKind::Laump),
            _ => Err(Error::Parse(format!("unknown test '{s}' (expected CVM, KS or LAUMP)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    LimitSimulation,
    FiniteSample,
    Analytic,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::LimitSimulation => "limit-simulation",
            Provenance::FiniteSample => "finite-sample",
            Provenance::Analytic => "analytic",
        })
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "limit-simulation" => Ok(Provenance::LimitSimulation),
            "finite-sample" => Ok(Provenance::FiniteSample),
            "analytic" => Ok(Provenance::Analytic),
            _ => Err(Error::Parse(format!("unknown provenance '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPoint {
    pub rho: f64,
    pub power: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerCurve {
    pub test: TestKind,
    pub alpha: f64,
    pub provenance: Provenance,
    pub points: Vec<PowerPoint>,
}

/// A single rejection-rate estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerEstimate {
    /// Limit drift of the alternative, when it has one.
    pub rho: Option<f64>,
    pub power: f64,
    pub std_error: f64,
    /// Replicates entering the estimate (diverged ones excluded).
    pub n_replicates: usize,
}

/// Standard normal cdf through libm's `erfc`, which is accurate to about
/// one ulp; statrs' normal cdf is off by up to ~1e-11 in the body of the law.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Upper `alpha` point of the standard normal law.
pub fn z_alpha(alpha: f64) -> f64 {
    let mut z = Normal::new(0.0, 1.0).expect("unit normal").inverse_cdf(1.0 - alpha);
    // polish the series inverse with Newton steps on the upper tail
    for _ in 0..2 {
        z += (normal_cdf(-z) - alpha) / normal_pdf(z);
    }
    z
}

/// `P(rho + zeta > z_alpha) = Phi(rho - z_alpha)`.
pub fn laump_power(rho: f64, alpha: f64) -> f64 {
    normal_cdf(rho - z_alpha(alpha))
}

/// Simulated power of the CVM, KS and LAUMP tests in the limit experiment
/// `Y(s) = rho s + W(s)`. Every path is drawn once and reused for all
/// `rho` values, so the curves share their noise. The LAUMP test rejects
/// when `Y(1) > z_alpha`.
pub fn limit_power_curves(
    tests: &[TestKind],
    rhos: &[f64],
    alpha: f64,
    m: usize,
    grid: &Grid,
    master_seed: u64,
    table: &CalibrationTable,
) -> Result<Vec<PowerCurve>> {
    check_alpha(alpha)?;
    require_unit(grid)?;
    if m == 0 || rhos.iter().any(|r| !r.is_finite()) {
        return Err(Error::InvalidArgument("need M >= 1 and finite rho values".into()));
    }
    let thresholds: Vec<f64> = tests
        .iter()
        .map(|t| match t.table_kind() {
            Some(k) => table.threshold(k, alpha, Horizon::Limit),
            None => Ok(z_alpha(alpha)),
        })
        .collect::<Result<_>>()?;
    let seed = derive_seed(master_seed, "limit-power");
    let shift = monitoring_shift(grid);
    let n = grid.n_steps();
    let h = grid.step();
    let times: Vec<f64> = grid.times().collect();
    let n_rho = rhos.len();

    let hits = par_map(m, |i| {
        let mut noise = RngStream::new(seed, i).sampler();
        let mut w = vec![0.0; n + 1];
        fill_wiener(grid, &mut noise, &mut w);
        // trapezoid int (W + rho s)^2 = a + 2 rho b + rho^2 c
        let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
        for (j, (&x, &t)) in w.iter().zip(&times).enumerate() {
            let wt = if j == 0 || j == n { 0.5 * h } else { h };
            a += wt * x * x;
            b += wt * x * t;
            c += wt * t * t;
        }
        let mut out = vec![false; tests.len() * n_rho];
        for (ti, test) in tests.iter().enumerate() {
            for (ri, &rho) in rhos.iter().enumerate() {
                let value = match test {
                    TestKind::Cvm => a + 2.0 * rho * b + rho * rho * c,
                    TestKind::Ks => {
                        w.iter()
                            .zip(&times)
                            .fold(0.0_f64, |m, (x, t)| m.max((x + rho * t).abs()))
                            + shift
                    }
                    TestKind::Laump => w[n] + rho,
                };
                out[ti * n_rho + ri] = value > thresholds[ti];
            }
        }
        out
    });

    Ok(tests
        .iter()
        .enumerate()
        .map(|(ti, &test)| PowerCurve {
            test,
            alpha,
            provenance: Provenance::LimitSimulation,
            points: rhos
                .iter()
                .enumerate()
                .map(|(ri, &rho)| {
                    let k = hits.iter().filter(|row| row[ti * n_rho + ri]).count();
                    let (power, std_error) = rejection_rate(k, m);
                    PowerPoint { rho, power, std_error }
                })
                .collect(),
        })
        .collect())
}

/// Limit power of one test. CVM and KS are simulated; LAUMP uses the
/// closed form `Phi(rho - z_alpha)` with zero standard error.
pub fn limit_power(
    test: TestKind,
    rhos: &[f64],
    alpha: f64,
    m: usize,
    grid: &Grid,
    master_seed: u64,
    table: &CalibrationTable,
) -> Result<PowerCurve> {
    if test == TestKind::Laump {
        check_alpha(alpha)?;
        return Ok(PowerCurve {
            test,
            alpha,
            provenance: Provenance::Analytic,
            points: rhos
                .iter()
                .map(|&rho| PowerPoint {
                    rho,
                    power: laump_power(rho, alpha),
                    std_error: 0.0,
                })
                .collect(),
        });
    }
    let mut curves = limit_power_curves(&[test], rhos, alpha, m, grid, master_seed, table)?;
    Ok(curves.remove(0))
}

/// Rejection probability in the limit experiment with a general signal:
/// `Y(s) = int_0^s h*(v) dv + W(s)`, `h*` sampled on a grid of `[0, 1]`.
/// Uses the same noise as [`limit_power`] on that grid.
pub fn limit_power_signal(
    signal: &SampledPath,
    test: TestKind,
    alpha: f64,
    m: usize,
    master_seed: u64,
    table: &CalibrationTable,
) -> Result<PowerEstimate> {
    check_alpha(alpha)?;
    let grid = *signal.grid();
    require_unit(&grid)?;
    let kind = test
        .table_kind()
        .ok_or_else(|| Error::InvalidArgument("signal power is defined for CVM and KS".into()))?;
    let threshold = table.threshold(kind, alpha, Horizon::Limit)?;
    let drift = cumulative_trapezoid(signal.values(), grid.step());
    let seed = derive_seed(master_seed, "limit-power");
    let shift = monitoring_shift(&grid);
    let hits = par_map(m, |i| {
        let mut noise = RngStream::new(seed, i).sampler();
        let mut y = vec![0.0; grid.n_points()];
        fill_wiener(&grid, &mut noise, &mut y);
        for (v, d) in y.iter_mut().zip(&drift) {
            *v += d;
        }
        let value = match test {
            TestKind::Cvm => crate::gauss_paths::cvm_of(&y, &grid),
            _ => ks_of(&y) + shift,
        };
        value > threshold
    });
    let (power, std_error) = rejection_rate(hits.iter().filter(|h| **h).count(), m);
    Ok(PowerEstimate {
        rho: None,
        power,
        std_error,
        n_replicates: m,
    })
}

/// Finite-sample models with a contiguous alternative `h`.
#[derive(Debug, Clone)]
pub enum FiniteModel {
    /// Constant rate `S*` observed over `n_periods` periods of length
    /// `period`; the alternative adds the self-exciting kernel `T^-1/2 h`.
    PoissonVsHawkes {
        s_star: f64,
        h: ScalarModel,
        period: f64,
        n_periods: usize,
    },
    /// `dX = [S*(X) + T^-1/2 h(X)] dt + sigma(X) dW` tested with the
    /// distribution-free residual statistic. `table` (the invariant law of
    /// the null) is used only to report `rho_h`.
    ErgodicFree {
        drift: ScalarModel,
        h: ScalarModel,
        sigma: Option<ScalarModel>,
        e_sigma2: f64,
        x0: f64,
        horizon: f64,
        dt: f64,
        table: Option<DensityTable>,
    },
    /// `dX = [S*(X) + eps h(X)/S*(X)] dt + eps dW` on `grid`.
    SmallNoise {
        drift: ScalarModel,
        h: ScalarModel,
        epsilon: f64,
        x0: f64,
        grid: Grid,
    },
}

impl FiniteModel {
    pub fn name(&self) -> &'static str {
        match self {
            FiniteModel::PoissonVsHawkes { .. } => "poisson-vs-hawkes",
            FiniteModel::ErgodicFree { .. } => "ergodic-free",
            FiniteModel::SmallNoise { .. } => "small-noise",
        }
    }

    /// Limit drift `rho_h` of the alternative, where one exists.
    pub fn rho(&self) -> Result<Option<f64>> {
        match self {
            FiniteModel::PoissonVsHawkes { s_star, h, .. } => {
                rho_h(&AltDescriptor::new(h.clone(), AltContext::Hawkes { s_star: *s_star })).map(Some)
            }
            FiniteModel::ErgodicFree {
                h,
                sigma,
                table: Some(table),
                ..
            } => rho_h(&AltDescriptor::new(
                h.clone(),
                AltContext::Ergodic {
                    table: table.clone(),
                    sigma: sigma.clone(),
                },
            ))
            .map(Some),
            _ => Ok(None),
        }
    }
}

/// Empirical rejection rate of the model's statistic under its contiguous
/// alternative, against the threshold for `horizon` in `table` (LAUMP uses
/// `z_alpha`). Diverged diffusion replicates are dropped within the 0.01%
/// budget.
pub fn finite_sample_power(
    model: &FiniteModel,
    test: TestKind,
    alpha: f64,
    m: usize,
    master_seed: u64,
    table: &CalibrationTable,
    horizon: Horizon,
) -> Result<PowerEstimate> {
    check_alpha(alpha)?;
    if m == 0 {
        return Err(Error::InvalidArgument("M must be positive".into()));
    }
    let threshold = match test.table_kind() {
        Some(k) => table.threshold(k, alpha, horizon)?,
        None => z_alpha(alpha),
    };
    let unsupported = || {
        Err(Error::InvalidArgument(format!(
            "{test} is not available for the {} model",
            model.name()
        )))
    };
    let seed = derive_seed(master_seed, &format!("finite-power-{}", model.name()));

    let results: Vec<Result<f64>> = match model {
        FiniteModel::PoissonVsHawkes {
            s_star,
            h,
            period,
            n_periods,
        } => {
            let s = *s_star;
            let cumulative = ScalarModel::new("S* t", move |t| s * t);
            par_map(m, |i| {
                let rec = simulate_hawkes_alternative(h, s, *n_periods, *period, RngStream::new(seed, i))?;
                Ok(match test {
                    TestKind::Laump => stat_laump(&rec, s)?.value,
                    TestKind::Cvm => stat_poisson(&rec, &cumulative)?.0.value,
                    TestKind::Ks => stat_poisson(&rec, &cumulative)?.1.value,
                })
            })
        }
        FiniteModel::ErgodicFree {
            drift,
            h,
            sigma,
            e_sigma2,
            x0,
            horizon: t,
            dt,
            ..
        } => {
            if test != TestKind::Cvm {
                return unsupported();
            }
            let scale = 1.0 / t.sqrt();
            let (d, hh) = (drift.clone(), h.clone());
            let alt = ScalarModel::new("S* + h/sqrt(T)", move |x| d.eval(x) + scale * hh.eval(x));
            let mut spec = ErgodicSpec::new(alt, *x0, *t, *dt);
            if let Some(s) = sigma {
                spec = spec.with_diffusion(s.clone());
            }
            par_map(m, |i| {
                let path = simulate_ergodic(&spec, RngStream::new(seed, i))?;
                Ok(match sigma {
                    Some(_) => stat_ergodic_free_sigma(&path, drift, *e_sigma2)?.value,
                    None => stat_ergodic_free(&path, drift).value,
                })
            })
        }
        FiniteModel::SmallNoise {
            drift,
            h,
            epsilon,
            x0,
            grid,
        } => {
            if test == TestKind::Laump {
                return unsupported();
            }
            let xstar = solve_limit_ode(drift, *x0, grid)?.path;
            let spec = SmallNoiseSpec::null(drift.clone(), *epsilon, *x0).with_alternative(h.clone());
            par_map(m, |i| {
                let x = simulate_small_noise(&spec, grid, RngStream::new(seed, i))?;
                let (w, d) = stat_small_noise(&x, &xstar, drift, *epsilon)?;
                Ok(if test == TestKind::Cvm { w.value } else { d.value })
            })
        }
    };
    let (values, _) = partition_aborts(results)?;
    let used = values.len();
    let (power, std_error) = rejection_rate(values.iter().filter(|v| **v > threshold).count(), used);
    Ok(PowerEstimate {
        rho: model.rho()?,
        power,
        std_error,
        n_replicates: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::calibrate_limit;
    use approx::assert_abs_diff_eq;

    fn table() -> CalibrationTable {
        calibrate_limit(&[0.05], 20_000, &Grid::unit(256).unwrap(), 77).unwrap()
    }

    #[test]
    fn laump_closed_form() {
        assert_abs_diff_eq!(laump_power(z_alpha(0.05), 0.05), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(laump_power(0.0, 0.05), 0.05, epsilon = 1e-15);
        let t = CalibrationTable::default();
        let c = limit_power(TestKind::Laump, &[0.0, 1.0], 0.05, 10, &Grid::unit(4).unwrap(), 0, &t).unwrap();
        assert_eq!(c.provenance, Provenance::Analytic);
        assert_eq!(c.points[1].std_error, 0.0);
    }

    #[test]
    fn size_and_ordering() {
        let t = table();
        let grid = Grid::unit(256).unwrap();
        let curves = limit_power_curves(&TestKind::ALL, &[0.0, 2.0], 0.05, 10_000, &grid, 5, &t).unwrap();
        for c in &curves {
            let p = c.points[0];
            assert!((p.power - 0.05).abs() < 3.0 * p.std_error + 0.005, "{c:?}");
        }
        let at2: Vec<f64> = curves.iter().map(|c| c.points[1].power).collect();
        assert!(at2[2] > at2[1] && at2[1] > at2[0], "{at2:?}");
        let missing = CalibrationTable::default();
        assert!(matches!(
            limit_power(TestKind::Cvm, &[0.0], 0.05, 10, &grid, 0, &missing),
            Err(Error::MissingThreshold { .. })
        ));
    }

    #[test]
    fn constant_signal_reduces_to_drift() {
        let t = table();
        let grid = Grid::unit(256).unwrap();
        let curve = limit_power(TestKind::Cvm, &[1.5], 0.05, 4000, &grid, 8, &t).unwrap();
        let sig = SampledPath::from_fn(grid, |_| 1.5).unwrap();
        let est = limit_power_signal(&sig, TestKind::Cvm, 0.05, 4000, 8, &t).unwrap();
        assert_abs_diff_eq!(est.power, curve.points[0].power, epsilon = 0.01);
        let zero = SampledPath::from_fn(grid, |_| 0.0).unwrap();
        let est = limit_power_signal(&zero, TestKind::Ks, 0.05, 4000, 8, &t).unwrap();
        assert!((est.power - 0.05).abs() < 3.0 * est.std_error + 0.005, "{est:?}");
        assert!(limit_power_signal(&zero, TestKind::Laump, 0.05, 10, 8, &t).is_err());
    }

    #[test]
    fn finite_models_at_null() {
        let mut t = table();
        t.merge(calibrate_limit(&[0.05], 20_000, &Grid::unit(256).unwrap(), 78).unwrap());
        let hawkes = FiniteModel::PoissonVsHawkes {
            s_star: 1.0,
            h: ScalarModel::box_kernel(0.0, 1.0),
            period: 10.0,
            n_periods: 10,
        };
        let e = finite_sample_power(&hawkes, TestKind::Laump, 0.05, 2000, 1, &t, Horizon::Limit).unwrap();
        assert!((e.power - 0.05).abs() < 3.0 * e.std_error + 0.01, "{e:?}");
        assert_eq!(e.rho, Some(0.0));
        let small = FiniteModel::SmallNoise {
            drift: ScalarModel::constant(1.0),
            h: ScalarModel::zero(),
            epsilon: 0.01,
            x0: 0.0,
            grid: Grid::unit(256).unwrap(),
        };
        let e = finite_sample_power(&small, TestKind::Cvm, 0.05, 2000, 1, &t, Horizon::Limit).unwrap();
        assert!((e.power - 0.05).abs() < 3.0 * e.std_error + 0.01, "{e:?}");
        assert!(finite_sample_power(&small, TestKind::Laump, 0.05, 10, 1, &t, Horizon::Limit).is_err());
    }
}
