//! Acceptance suite: one PASS/FAIL line per criterion, at the scale the
//! criteria are stated for. Run with `cargo test -p gofsim-cli --test
//! acceptance`; select criteria with `ACCEPTANCE=1,3,9`.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use gofsim::diffusion::{
    expect_under_invariant, invariant_density, linspace, simulate_ergodic, simulate_small_noise, solve_limit_ode,
    ErgodicSpec, SmallNoiseSpec,
};
use gofsim::gauss_paths::sup_abs_wiener_quantile;
use gofsim::mc::{
    calibrate_finite_poisson, calibrate_kl_series, calibrate_limit, finite_sample_power, laump_power,
    limit_power_curves, limit_samples, par_map, upper_quantile, CalibrationEntry, CalibrationTable, FiniteModel,
    Horizon, PowerCurve, TableKind, TestKind,
};
use gofsim::point_proc::{simulate_hawkes, simulate_hawkes_alternative, simulate_poisson, HawkesSpec, IntensitySpec};
use gofsim::rng::derive_seed;
use gofsim::stats::{
    fisher_info, ks_critical_value, stat_ergodic_free, stat_ergodic_free_sigma, stat_lan_delta, stat_laump,
    stat_small_noise, two_sample_ks,
};
use gofsim::{Grid, RngStream, ScalarModel};

const SEED: u64 = 20_240_917;
const ALPHA: f64 = 0.05;
/// Path resolution of every limit-experiment simulation.
const N_STEPS: usize = 4096;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn mean_and_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn sorted(mut x: Vec<f64>) -> Vec<f64> {
    x.sort_by(f64::total_cmp);
    x
}

fn variance(x: &[f64]) -> f64 {
    let (mean, _) = mean_and_se(x);
    x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0)
}

fn grid() -> Grid {
    Grid::new(N_STEPS, 1.0).expect("unit grid")
}

fn point(curve: &[PowerCurve], test: TestKind, i: usize) -> (f64, f64) {
    let p = curve.iter().find(|c| c.test == test).expect("curve").points[i];
    (p.power, p.std_error)
}

/// Limit thresholds shared by the power criteria, built from the large
/// calibration run of criterion 1.
struct Shared {
    table: Option<CalibrationTable>,
}

impl Shared {
    fn table(&mut self) -> &CalibrationTable {
        self.table
            .get_or_insert_with(|| calibrate_limit(&[ALPHA], 1_000_000, &grid(), SEED).expect("limit calibration"))
    }
}

fn table_from(cvm: Vec<f64>, ks: Vec<f64>, m: usize) -> CalibrationTable {
    let mut table = CalibrationTable::new(vec![("M".into(), m.to_string())]);
    for (kind, samples) in [(TableKind::Cvm, cvm), (TableKind::Ks, ks)] {
        let q = upper_quantile(&samples, ALPHA).expect("quantile");
        table.insert(CalibrationEntry {
            kind,
            alpha: ALPHA,
            horizon: Horizon::Limit,
            threshold: q.value,
            std_error: q.std_error,
            n_replicates: m,
            resolution: format!("n_steps={N_STEPS}"),
        });
    }
    table
}

fn threshold_oracles(shared: &mut Shared) -> Outcome {
    let m = 1_000_000;
    let samples = limit_samples(m, &grid(), SEED).expect("limit samples");
    let (mean, mean_se) = mean_and_se(&samples.cvm);
    let cvm = sorted(samples.cvm);
    let ks = sorted(samples.ks);
    let c = upper_quantile(&cvm, ALPHA).unwrap();
    let d = upper_quantile(&ks, ALPHA).unwrap();
    let kl = calibrate_kl_series(&[ALPHA], m, 10_000, SEED).unwrap();
    let c_kl = kl.lookup(TableKind::Cvm, ALPHA, Horizon::Limit).unwrap().clone();
    let d_exact = sup_abs_wiener_quantile(1.0 - ALPHA).unwrap();

    let c_ok = (c.value - c_kl.threshold).abs() < 2.0 * c.std_error.hypot(c_kl.std_error);
    let d_ok = (d.value - d_exact).abs() < 2.0 * d.std_error;
    let mean_ok = (mean - 0.5).abs() < 3.0 * mean_se;
    shared.table = Some(table_from(cvm, ks, m));
    outcome(
        c_ok && d_ok && mean_ok,
        format!(
            "c_0.05 paths {:.5} (SE {:.5}) vs KL {:.5} (SE {:.5}); d_0.05 paths {:.5} (SE {:.5}) vs series root {:.5}; \
             mean int W^2 {:.5} (SE {:.5}) vs 0.5",
            c.value, c.std_error, c_kl.threshold, c_kl.std_error, d.value, d.std_error, d_exact, mean, mean_se
        ),
    )
}

fn finite_poisson_thresholds() -> Outcome {
    let m = 100_000;
    let finite = calibrate_finite_poisson(&[ALPHA], &[10, 100], m, SEED).unwrap();
    let limit = calibrate_limit(&[ALPHA], m, &grid(), derive_seed(SEED, "criterion-2")).unwrap();
    let get = |t: &CalibrationTable, k, h| t.lookup(k, ALPHA, h).unwrap().clone();
    let mut lines = Vec::new();
    let mut pass = true;
    for kind in [TableKind::Cvm, TableKind::Ks] {
        let lim = get(&limit, kind, Horizon::Limit);
        let t10 = get(&finite, kind, Horizon::Finite(10.0));
        let t100 = get(&finite, kind, Horizon::Finite(100.0));
        let closer = (t100.threshold - lim.threshold).abs() < (t10.threshold - lim.threshold).abs();
        let indistinguishable = (t100.threshold - lim.threshold).abs() < 2.0 * t100.std_error.hypot(lim.std_error);
        if kind == TableKind::Cvm {
            pass = closer && indistinguishable;
        }
        lines.push(format!(
            "{kind}: T=10 {:.4}, T=100 {:.4} (SE {:.4}), limit {:.4} (SE {:.4}){}",
            t10.threshold,
            t100.threshold,
            t100.std_error,
            lim.threshold,
            lim.std_error,
            if kind == TableKind::Ks {
                format!(" [reported; closer={closer}, within 2 SE={indistinguishable}]")
            } else {
                String::new()
            }
        ));
    }
    outcome(pass, lines.join("; "))
}

fn power_ordering(shared: &mut Shared, curves: &mut Option<Vec<PowerCurve>>) -> Outcome {
    let rhos = [0.0, 1.0, 2.0, 3.0];
    let m = 100_000;
    let table = shared.table().clone();
    let c = limit_power_curves(&TestKind::ALL, &rhos, ALPHA, m, &grid(), SEED, &table).unwrap();
    let mut pass = true;
    let mut lines = Vec::new();
    for (i, rho) in rhos.iter().enumerate().skip(1) {
        let (cvm, se_c) = point(&c, TestKind::Cvm, i);
        let (ks, se_k) = point(&c, TestKind::Ks, i);
        let (laump, se_l) = point(&c, TestKind::Laump, i);
        pass &= laump - 3.0 * se_l > ks + 3.0 * se_k && ks - 3.0 * se_k > cvm + 3.0 * se_c;
        lines.push(format!("rho={rho}: LAUMP {laump:.4} > KS {ks:.4} > CVM {cvm:.4}"));
    }
    for t in TestKind::ALL {
        let (p, se) = point(&c, t, 0);
        pass &= (p - ALPHA).abs() <= 3.0 * se;
        lines.push(format!("beta_{t}(0) = {p:.5} (SE {se:.5})"));
    }
    // Phi(rho - z_0.05) computed with 40-digit arithmetic (mpmath)
    let exact = [
        0.05,
        0.259_511_022_841_444_06,
        0.638_760_031_312_335,
        0.912_314_536_750_296_4,
    ];
    let worst = rhos
        .iter()
        .zip(exact)
        .map(|(&r, e)| (laump_power(r, ALPHA) - e).abs())
        .fold(0.0, f64::max);
    pass &= worst <= 4.0 * f64::EPSILON;
    lines.push(format!("analytic LAUMP max error {worst:.1e}"));
    *curves = Some(c);
    outcome(pass, lines.join("; "))
}

fn two_sample_line(name: &str, a: &[f64], b: &[f64]) -> (bool, String) {
    let d = two_sample_ks(a, b);
    let crit = ks_critical_value(0.01, a.len(), b.len());
    (d < crit, format!("{name}: KS distance {d:.4} < {crit:.4}"))
}

fn ergodic_distribution_free() -> Outcome {
    let m = 10_000;
    let (horizon, dt) = (1000.0, 0.01);
    let drift = ScalarModel::ou(1.0);
    let reference = limit_samples(m, &grid(), derive_seed(SEED, "criterion-4")).unwrap().cvm;

    let seed = derive_seed(SEED, "criterion-4-ou");
    let spec = ErgodicSpec::new(drift.clone(), 0.0, horizon, dt);
    let unit: Vec<f64> = par_map(m, |i| {
        let path = simulate_ergodic(&spec, RngStream::new(seed, i)).expect("OU path");
        stat_ergodic_free(&path, &drift).value
    });

    let sigma = ScalarModel::new("1 + sin(x)/2", |x: f64| 1.0 + 0.5 * x.sin());
    let law = invariant_density(&drift, Some(&sigma), linspace(-10.0, 10.0, 4001)).unwrap();
    let s2 = sigma.clone();
    let e_sigma2 = expect_under_invariant(&ScalarModel::new("sigma^2", move |x| s2.eval(x).powi(2)), &law);
    let seed = derive_seed(SEED, "criterion-4-sigma");
    let spec = ErgodicSpec::new(drift.clone(), 0.0, horizon, dt).with_diffusion(sigma);
    let scaled: Vec<f64> = par_map(m, |i| {
        let path = simulate_ergodic(&spec, RngStream::new(seed, i)).expect("path");
        stat_ergodic_free_sigma(&path, &drift, e_sigma2)
            .expect("statistic")
            .value
    });
    let (a, la) = two_sample_line("unit diffusion", &unit, &reference);
    let (b, lb) = two_sample_line(
        &format!("sigma = 1 + sin(x)/2, E sigma^2 = {e_sigma2:.4}"),
        &scaled,
        &reference,
    );
    outcome(a && b, format!("{la}; {lb}"))
}

fn small_noise(shared: &mut Shared) -> Outcome {
    let m = 10_000;
    let eps = 0.01;
    let g = grid();
    let drift = ScalarModel::constant(1.0);
    let xstar = solve_limit_ode(&drift, 0.0, &g).unwrap().path;
    let spec = SmallNoiseSpec::null(drift.clone(), eps, 0.0);
    let seed = derive_seed(SEED, "criterion-5");
    let null: Vec<f64> = par_map(m, |i| {
        let x = simulate_small_noise(&spec, &g, RngStream::new(seed, i)).expect("path");
        stat_small_noise(&x, &xstar, &drift, eps).expect("statistic").0.value
    });
    let reference = limit_samples(m, &g, derive_seed(SEED, "criterion-5-reference"))
        .unwrap()
        .cvm;
    let (mut pass, line) = two_sample_line("null W_eps^2", &null, &reference);

    let table = shared.table().clone();
    let norm = 8.0;
    let mut betas = Vec::new();
    for n in [5.0_f64, 20.0, 80.0] {
        let scale = norm / (0.5 + (2.0 * n).sin() / (4.0 * n)).sqrt();
        let h = ScalarModel::new(format!("cos({n}x)"), move |x| scale * (n * x).cos());
        let model = FiniteModel::SmallNoise {
            drift: drift.clone(),
            h,
            epsilon: eps,
            x0: 0.0,
            grid: g,
        };
        let p = finite_sample_power(&model, TestKind::Cvm, ALPHA, m, SEED, &table, Horizon::Limit).unwrap();
        betas.push((n, p.power, p.std_error));
    }
    for w in betas.windows(2) {
        let ((_, b0, s0), (_, b1, s1)) = (w[0], w[1]);
        pass &= b0 - b1 > 3.0 * s0.hypot(s1) || (b1 - ALPHA).abs() <= 3.0 * s1;
        pass &= b1 < b0 && (b1 - ALPHA).abs() < (b0 - ALPHA).abs();
    }
    pass &= betas.iter().all(|&(_, b, s)| b >= ALPHA - 3.0 * s);
    let powers = betas
        .iter()
        .map(|(n, b, s)| format!("n={n}: {b:.4} ({s:.4})"))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, format!("{line}; cosine alternatives at L2 norm {norm}: {powers}"))
}

fn le_cam_shift(shared: &mut Shared, curves: &Option<Vec<PowerCurve>>) -> Outcome {
    let m = 10_000;
    let (tau, n) = (100.0, 100);
    let h = ScalarModel::box_kernel(1.0, 1.0);
    let info = fisher_info(&h, 1.0).unwrap();

    let seed = derive_seed(SEED, "criterion-6-null");
    let deltas: Vec<f64> = par_map(m, |i| {
        let rec = simulate_poisson(&IntensitySpec::Constant(1.0), tau * n as f64, RngStream::new(seed, i))
            .and_then(|r| r.with_period(tau, n))
            .expect("record");
        stat_lan_delta(&rec, &h, 1.0, tau, n).expect("Delta_n").value
    });
    let (mean, se) = mean_and_se(&deltas);
    let var = variance(&deltas);
    let mut pass = mean.abs() <= 3.0 * se && (var / 2.0 - 1.0).abs() < 0.05 && (info - 2.0).abs() < 1e-9;

    let seed = derive_seed(SEED, "criterion-6-alternative");
    let laump: Vec<f64> = par_map(m, |i| {
        let rec = simulate_hawkes_alternative(&h, 1.0, n, tau, RngStream::new(seed, i)).expect("record");
        stat_laump(&rec, 1.0).expect("delta_T").value
    });
    let (laump_mean, laump_se) = mean_and_se(&laump);
    pass &= (laump_mean - 1.0).abs() <= 3.0 * laump_se;

    let model = FiniteModel::PoissonVsHawkes {
        s_star: 1.0,
        h: h.clone(),
        period: tau,
        n_periods: n,
    };
    let table = shared.table().clone();
    let finite = finite_sample_power(&model, TestKind::Cvm, ALPHA, m, SEED, &table, Horizon::Limit).unwrap();
    let rho = finite.rho.unwrap_or(f64::NAN);
    let (limit, limit_se) = match curves {
        Some(c) if (rho - 1.0).abs() < 1e-9 => point(c, TestKind::Cvm, 1),
        _ => (f64::NAN, f64::NAN),
    };
    pass &= (finite.power - limit).abs() <= 3.0 * finite.std_error.hypot(limit_se);
    outcome(
        pass,
        format!(
            "Delta_n under H0: mean {mean:.4} (SE {se:.4}), variance {var:.4} vs I(h) = {info:.6}; \
             CVM power at rho_h = {rho}: finite {:.4} (SE {:.4}) vs limit {limit:.4} (SE {limit_se:.4}); \
             delta_T mean under the alternative {laump_mean:.4} (SE {laump_se:.4})",
            finite.power, finite.std_error
        ),
    )
}

fn simulator_fidelity() -> Outcome {
    let mut lines = Vec::new();

    let spec = HawkesSpec::new(1.0, ScalarModel::exp_kernel(0.5, 1.0, 30.0)).unwrap();
    let reps = 20;
    let seed = derive_seed(SEED, "criterion-7-hawkes");
    let rates: Vec<f64> = par_map(reps, |i| {
        simulate_hawkes(&spec, 1e4, RngStream::new(seed, i))
            .expect("record")
            .len() as f64
            / 1e4
    });
    let (rate, _) = mean_and_se(&rates);
    let target = spec.stationary_rate();
    let hawkes_ok = (rate / target - 1.0).abs() < 0.02;
    lines.push(format!(
        "Hawkes rate {rate:.4} vs S/(1-rho) = {target:.4} (rho = {:.4}, {reps} runs of T = 1e4)",
        spec.branching_ratio()
    ));

    let path = simulate_ergodic(
        &ErgodicSpec::new(ScalarModel::ou(1.0), 0.0, 1e5, 0.01),
        RngStream::new(derive_seed(SEED, "criterion-7-ou"), 0),
    )
    .unwrap();
    let v = path.values();
    let k = v.len() as f64;
    let m1 = v.iter().sum::<f64>() / k;
    let m2 = v.iter().map(|x| x * x).sum::<f64>() / k;
    let m4 = v.iter().map(|x| x.powi(4)).sum::<f64>() / k;
    let ou_ok = m1.abs() < 0.05 * 0.5f64.sqrt() && (m2 / 0.5 - 1.0).abs() < 0.05 && (m4 / 0.75 - 1.0).abs() < 0.05;
    lines.push(format!(
        "OU time averages (T = 1e5): mean {m1:.4}, E x^2 {m2:.4} vs 0.5, E x^4 {m4:.4} vs 0.75"
    ));

    let growth = ScalarModel::new("x", |x| x);
    let errors: Vec<f64> = [8, 16, 32, 64]
        .iter()
        .map(|&n| {
            let sol = solve_limit_ode(&growth, 1.0, &Grid::new(n, 1.0).unwrap()).unwrap();
            (sol.path.values()[n] - std::f64::consts::E).abs()
        })
        .collect();
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let rk_ok = orders.iter().all(|p| (p - 4.0).abs() < 0.2);
    lines.push(format!("RK4 observed orders on x' = x: {orders:.3?}"));
    outcome(hawkes_ok && ou_ok && rk_ok, lines.join("; "))
}

fn blind_spot(shared: &mut Shared) -> Outcome {
    let m = 10_000;
    let drift = ScalarModel::ou(1.0);
    let law = invariant_density(&drift, None, linspace(-8.0, 8.0, 1601)).unwrap();
    let model = FiniteModel::ErgodicFree {
        drift,
        h: ScalarModel::new("x", |x| x),
        sigma: None,
        e_sigma2: 1.0,
        x0: 0.0,
        horizon: 1e4,
        dt: 0.1,
        table: Some(law),
    };
    let table = shared.table().clone();
    let p = finite_sample_power(&model, TestKind::Cvm, ALPHA, m, SEED, &table, Horizon::Limit).unwrap();
    let rho = p.rho.unwrap_or(f64::NAN);
    outcome(
        (p.power - ALPHA).abs() <= 3.0 * p.std_error && rho.abs() < 1e-6,
        format!(
            "h(x) = x, rho_h = {rho:.1e}: power {:.4} (SE {:.4}) at alpha = {ALPHA} (T = 1e4, dt = 0.1, M = {m})",
            p.power, p.std_error
        ),
    )
}

/// Every subcommand, run into `dir`; returns the concatenated stdout.
fn cli_session(dir: &Path, threads: &str) -> Result<String, String> {
    let steps: &[&[&str]] = &[
        &[
            "calibrate",
            "--M",
            "2000",
            "--n-steps",
            "256",
            "--finite-poisson",
            "--T",
            "10,30",
            "--out",
            "cal",
        ],
        &[
            "calibrate",
            "--model-null",
            "--M",
            "1000",
            "--horizon",
            "20",
            "--dt",
            "0.05",
            "--out",
            "null",
        ],
        &["simulate", "--process", "wiener", "--n-steps", "500", "--out", "w.csv"],
        &[
            "simulate",
            "--process",
            "ergodic",
            "--horizon",
            "20",
            "--dt",
            "0.05",
            "--out",
            "e.csv",
        ],
        &[
            "simulate",
            "--process",
            "small-noise",
            "--drift",
            "constant:c=1",
            "--out",
            "s.csv",
        ],
        &[
            "simulate",
            "--process",
            "poisson",
            "--intensity",
            "sinusoidal:a=2,b=1,period=1",
            "--out",
            "p.csv",
        ],
        &[
            "simulate",
            "--process",
            "hawkes",
            "--tau",
            "10",
            "--n",
            "50",
            "--out",
            "h.csv",
        ],
        &[
            "test",
            "--data",
            "e.csv",
            "--stat",
            "CVM_ERGODIC_FREE",
            "--table",
            "cal/calibration_limit.csv",
        ],
        &[
            "test",
            "--data",
            "e.csv",
            "--stat",
            "KS_ERGODIC_EDF",
            "--table",
            "null/calibration_model_null.csv",
        ],
        &[
            "test",
            "--data",
            "s.csv",
            "--stat",
            "CVM_SMALL_NOISE",
            "--drift",
            "constant:c=1",
            "--table",
            "cal/calibration_limit.csv",
            "--out",
            "report.csv",
        ],
        &[
            "test",
            "--data",
            "p.csv",
            "--stat",
            "KS_POISSON",
            "--intensity",
            "sinusoidal:a=2,b=1,period=1",
            "--table",
            "cal/calibration_limit.csv",
        ],
        &["test", "--data", "h.csv", "--stat", "LAN_DELTA", "--s-star", "1"],
        &[
            "power",
            "--M",
            "2000",
            "--n-steps",
            "256",
            "--rho",
            "0:2:0.5",
            "--table",
            "cal/calibration_limit.csv",
            "--analytic-laump",
            "--finite",
            "poisson-vs-hawkes",
            "--finite-M",
            "1000",
            "--tau",
            "10",
            "--n",
            "20",
            "--out",
            "pw",
        ],
        &[
            "figures",
            "--M",
            "1000",
            "--n-steps",
            "128",
            "--alphas",
            "0.05,0.1",
            "--rho",
            "0,1",
            "--out",
            "figs",
        ],
    ];
    let mut stdout = String::new();
    for args in steps {
        let out = Command::new(env!("CARGO_BIN_EXE_gofsim"))
            .args(*args)
            .args(["--seed", "11", "--threads", threads])
            .current_dir(dir)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{:?} failed: {}", args, String::from_utf8_lossy(&out.stderr)));
        }
        stdout.push_str(&String::from_utf8_lossy(&out.stdout));
    }
    Ok(stdout)
}

/// Relative path and bytes of every file under `dir`, except the runtime
/// record `timing.txt`.
fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(String, Vec<u8>)>) {
        for entry in std::fs::read_dir(dir).expect("readable dir") {
            let path = entry.expect("entry").path();
            if path.is_dir() {
                walk(root, &path, out);
            } else if path.file_name().is_some_and(|n| n != "timing.txt") {
                let rel = path.strip_prefix(root).unwrap().display().to_string();
                out.push((rel, std::fs::read(&path).expect("readable file")));
            }
        }
    }
    let mut files = Vec::new();
    walk(dir, dir, &mut files);
    files.sort();
    files
}

fn determinism() -> Outcome {
    let runs = [("1", "first"), ("1", "rerun"), ("2", "2 threads"), ("4", "4 threads")];
    let mut results = Vec::new();
    for (threads, label) in runs {
        let dir = tempfile::tempdir().expect("temp dir");
        match cli_session(dir.path(), threads) {
            Ok(stdout) => results.push((label, stdout, snapshot(dir.path()))),
            Err(e) => return outcome(false, e),
        }
    }
    let (_, stdout0, files0) = &results[0];
    let mismatches: Vec<&str> = results[1..]
        .iter()
        .filter(|(_, s, f)| s != stdout0 || f != files0)
        .map(|(l, _, _)| *l)
        .collect();
    outcome(
        mismatches.is_empty(),
        format!(
            "14 commands, {} output files; runs compared: rerun, 2 and 4 threads; mismatching: {:?}",
            files0.len(),
            mismatches
        ),
    )
}

fn main() -> ExitCode {
    let selected: Option<Vec<usize>> = std::env::var("ACCEPTANCE")
        .ok()
        .map(|s| s.split(',').filter_map(|v| v.trim().parse().ok()).collect());
    let wanted = |k: usize| selected.as_ref().is_none_or(|s| s.contains(&k));
    // libtest arguments (filters, --nocapture) are accepted and ignored
    let mut shared = Shared { table: None };
    let mut curves = None;
    let mut failed = 0;
    let names = [
        "threshold oracle agreement",
        "finite-Poisson thresholds approach the limit",
        "limit power ordering and analytic LAUMP curve",
        "distribution-free ergodic statistics",
        "small-noise reduction and fading cosine alternatives",
        "Le Cam shift under the self-exciting alternative",
        "simulator fidelity",
        "blind spot of the ergodic test",
        "CLI determinism",
    ];
    for (k, name) in names.iter().enumerate().map(|(i, n)| (i + 1, n)) {
        // criterion 6 compares with the criterion 3 curve
        if !wanted(k) && !(k == 3 && wanted(6)) {
            continue;
        }
        let start = Instant::now();
        let result = match k {
            1 => threshold_oracles(&mut shared),
            2 => finite_poisson_thresholds(),
            3 => power_ordering(&mut shared, &mut curves),
            4 => ergodic_distribution_free(),
            5 => small_noise(&mut shared),
            6 => le_cam_shift(&mut shared, &curves),
            7 => simulator_fidelity(),
            8 => blind_spot(&mut shared),
            _ => determinism(),
        };
        if !wanted(k) {
            continue;
        }
        failed += usize::from(!result.pass);
        println!(
            "criterion {k} ({name}): {} [{:.1}s] {}",
            if result.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            result.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
