//! wasm-bindgen bindings behind `www/index.html`. Each operation returns a
//! small object whose getters hand `Float64Array`s to JavaScript; errors
//! surface as thrown strings.

use gofsim::diffusion::{invariant_density, linspace, simulate_ergodic, ErgodicSpec};
use gofsim::mc::{calibrate_limit, laump_power, limit_power_curves, TestKind};
use gofsim::point_proc::{simulate_hawkes, HawkesSpec};
use gofsim::rng::derive_seed;
use gofsim::stats::{empirical_df, local_time_density, stat_ergodic_density, stat_ergodic_edf};
use gofsim::{Grid, RngStream, ScalarModel};
use wasm_bindgen::prelude::*;

type JsResult<T> = Result<T, JsError>;

fn js(e: gofsim::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Limit power of the CVM, KS and LAUMP tests at level `alpha`.
#[wasm_bindgen]
pub struct PowerCurves {
    rho: Vec<f64>,
    cvm: Vec<f64>,
    ks: Vec<f64>,
    laump: Vec<f64>,
    laump_analytic: Vec<f64>,
    thresholds: Vec<f64>,
}

#[wasm_bindgen]
impl PowerCurves {
    #[wasm_bindgen(getter)]
    pub fn rho(&self) -> Vec<f64> {
        self.rho.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn cvm(&self) -> Vec<f64> {
        self.cvm.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn ks(&self) -> Vec<f64> {
        self.ks.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn laump(&self) -> Vec<f64> {
        self.laump.clone()
    }
    #[wasm_bindgen(getter, js_name = laumpAnalytic)]
    pub fn laump_analytic(&self) -> Vec<f64> {
        self.laump_analytic.clone()
    }
    /// CVM and KS thresholds used for the curves.
    #[wasm_bindgen(getter)]
    pub fn thresholds(&self) -> Vec<f64> {
        self.thresholds.clone()
    }
}

/// Calibrates the thresholds with `m` replicates, then simulates the power
/// on `rho = 0, rho_step, ..., rho_max` with a fresh set of `m` paths.
#[wasm_bindgen(js_name = powerCurves)]
pub fn power_curves(
    alpha: f64,
    m: usize,
    n_steps: usize,
    rho_max: f64,
    rho_step: f64,
    seed: u32,
) -> JsResult<PowerCurves> {
    if !(rho_step > 0.0 && rho_max >= 0.0) {
        return Err(JsError::new("need rho_step > 0 and rho_max >= 0"));
    }
    let grid = Grid::new(n_steps, 1.0).map_err(js)?;
    let seed = u64::from(seed);
    let table = calibrate_limit(&[alpha], m, &grid, seed).map_err(js)?;
    let n_rho = (rho_max / rho_step + 1e-9).floor() as usize + 1;
    let rho: Vec<f64> = (0..n_rho).map(|i| i as f64 * rho_step).collect();
    let curves = limit_power_curves(&TestKind::ALL, &rho, alpha, m, &grid, seed, &table).map_err(js)?;
    let column = |t: TestKind| -> Vec<f64> {
        curves
            .iter()
            .find(|c| c.test == t)
            .map(|c| c.points.iter().map(|p| p.power).collect())
            .unwrap_or_default()
    };
    let threshold = |k| table.threshold(k, alpha, gofsim::mc::Horizon::Limit).map_err(js);
    Ok(PowerCurves {
        cvm: column(TestKind::Cvm),
        ks: column(TestKind::Ks),
        laump: column(TestKind::Laump),
        laump_analytic: rho.iter().map(|&r| laump_power(r, alpha)).collect(),
        thresholds: vec![
            threshold(gofsim::mc::TableKind::Cvm)?,
            threshold(gofsim::mc::TableKind::Ks)?,
        ],
        rho,
    })
}

/// One self-exciting record with its conditional intensity on a grid.
#[wasm_bindgen]
pub struct HawkesRun {
    events: Vec<f64>,
    times: Vec<f64>,
    intensity: Vec<f64>,
    branching_ratio: f64,
    stationary_rate: f64,
}

#[wasm_bindgen]
impl HawkesRun {
    #[wasm_bindgen(getter)]
    pub fn events(&self) -> Vec<f64> {
        self.events.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn intensity(&self) -> Vec<f64> {
        self.intensity.clone()
    }
    #[wasm_bindgen(getter, js_name = branchingRatio)]
    pub fn branching_ratio(&self) -> f64 {
        self.branching_ratio
    }
    #[wasm_bindgen(getter, js_name = stationaryRate)]
    pub fn stationary_rate(&self) -> f64 {
        self.stationary_rate
    }
}

/// Hawkes process with base rate `s` and kernel `a exp(-b t)` on `[0, L]`,
/// observed on `[0, horizon]`. The intensity is evaluated at `n_grid + 1`
/// equally spaced times.
#[wasm_bindgen]
pub fn hawkes(s: f64, a: f64, b: f64, support: f64, horizon: f64, n_grid: usize, seed: u32) -> JsResult<HawkesRun> {
    let kernel = ScalarModel::exp_kernel(a, b, support);
    let spec = HawkesSpec::new(s, kernel.clone()).map_err(js)?;
    let rng = RngStream::new(derive_seed(u64::from(seed), "wasm-hawkes"), 0);
    let record = simulate_hawkes(&spec, horizon, rng).map_err(js)?;
    let events = record.events().to_vec();
    let times = linspace(0.0, horizon, n_grid.max(1) + 1);
    let mut first = 0;
    let intensity = times
        .iter()
        .map(|&t| {
            while first < events.len() && t - events[first] > support {
                first += 1;
            }
            s + events[first..]
                .iter()
                .take_while(|&&e| e < t)
                .map(|&e| kernel.kernel(t - e))
                .sum::<f64>()
        })
        .collect();
    Ok(HawkesRun {
        events,
        times,
        intensity,
        branching_ratio: spec.branching_ratio(),
        stationary_rate: spec.stationary_rate(),
    })
}

/// An Ornstein–Uhlenbeck path compared with its invariant law.
#[wasm_bindgen]
pub struct OuFit {
    path: Vec<f64>,
    x: Vec<f64>,
    edf: Vec<f64>,
    cdf: Vec<f64>,
    density_hat: Vec<f64>,
    density: Vec<f64>,
    stats: Vec<f64>,
}

#[wasm_bindgen]
impl OuFit {
    /// Path values at the Euler steps.
    #[wasm_bindgen(getter)]
    pub fn path(&self) -> Vec<f64> {
        self.path.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn edf(&self) -> Vec<f64> {
        self.edf.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn cdf(&self) -> Vec<f64> {
        self.cdf.clone()
    }
    #[wasm_bindgen(getter, js_name = densityHat)]
    pub fn density_hat(&self) -> Vec<f64> {
        self.density_hat.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }
    /// EDF CVM, EDF KS, density CVM, density KS.
    #[wasm_bindgen(getter)]
    pub fn stats(&self) -> Vec<f64> {
        self.stats.clone()
    }
}

/// Simulates `dX = -theta_true X dt + dW` and compares its empirical and
/// local-time estimates with the invariant law of the null `-theta X`.
#[wasm_bindgen(js_name = ouFit)]
pub fn ou_fit(theta_null: f64, theta_true: f64, horizon: f64, dt: f64, seed: u32) -> JsResult<OuFit> {
    if !(theta_null > 0.0 && theta_true > 0.0) {
        return Err(JsError::new("both theta values must be positive"));
    }
    let half_width = 8.0 / theta_null.min(theta_true).sqrt();
    let x = linspace(-half_width, half_width, 321);
    let table = invariant_density(&ScalarModel::ou(theta_null), None, x.clone()).map_err(js)?;
    let spec = ErgodicSpec::new(ScalarModel::ou(theta_true), 0.0, horizon, dt);
    let rng = RngStream::new(derive_seed(u64::from(seed), "wasm-ou"), 0);
    let path = simulate_ergodic(&spec, rng).map_err(js)?;
    let (edf_cvm, edf_ks) = stat_ergodic_edf(&path, &table).map_err(js)?;
    let (den_cvm, den_ks) = stat_ergodic_density(&path, &table).map_err(js)?;
    Ok(OuFit {
        edf: empirical_df(&path, &x),
        density_hat: local_time_density(&path, &x),
        cdf: table.cdf().to_vec(),
        density: table.density().to_vec(),
        stats: vec![edf_cvm.value, edf_ks.value, den_cvm.value, den_ks.value],
        path: path.values().to_vec(),
        x,
    })
}
