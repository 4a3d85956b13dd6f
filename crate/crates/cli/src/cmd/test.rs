use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use gofsim::diffusion::{expect_under_invariant, solve_limit_ode};
use gofsim::mc::{z_alpha, CalibrationTable, Horizon, ModelNull, TableKind};
use gofsim::stats::{self, StatKind, StatResult};
use gofsim::{SampledPath, ScalarModel};

use super::calibrate::ErgodicModelArgs;
use super::open;
use crate::models::{constant_value, cumulative_intensity, parse_list, parse_model};
use crate::{CliError, Common};

#[derive(Args, Debug)]
pub struct TestArgs {
    #[command(flatten)]
    pub common: Common,
    /// Path CSV (`t,x`) or event CSV (`# T=..,tau=..,n=..` + `event_time`).
    #[arg(long)]
    pub data: PathBuf,
    /// Statistic, e.g. CVM_POISSON, KS_SMALL_NOISE, CVM_ERGODIC_EDF, LAUMP.
    #[arg(long)]
    pub stat: StatKind,
    /// Calibration table from `gofsim calibrate`.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, default_value = "0.05")]
    pub alphas: String,
    #[command(flatten)]
    pub model: ErgodicModelArgs,
    /// Noise level of a small-noise diffusion.
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Null intensity S*(t) of the periodic Poisson process.
    #[arg(long, default_value = "constant:c=1")]
    pub intensity: String,
    /// Constant null rate for LAUMP and LAN_DELTA (default: the constant intensity).
    #[arg(long = "s-star")]
    pub s_star: Option<f64>,
    /// Self-exciting direction for LAN_DELTA.
    #[arg(long, default_value = "box-h:height=1,width=1")]
    pub h: String,
    /// Also write the report to this CSV file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

struct Row {
    stat: StatResult,
    alpha: f64,
    threshold: f64,
    horizon: String,
}

fn missing_model_null(kind: StatKind, alpha: f64, horizon: f64) -> CliError {
    CliError::calibration(format!(
        "{kind} is not distribution-free: no model-null threshold at alpha = {alpha} for T = {horizon}. \
         Run calibrate_model_null via `gofsim calibrate --model-null --kinds {kind} --horizon {horizon}` \
         with the same --drift/--sigma/--x-grid and pass the result with --table"
    ))
}

/// `key=value;...` fields of a model-null resolution string.
fn fields(s: &str) -> Vec<(&str, &str)> {
    s.split(';').filter_map(|kv| kv.split_once('=')).collect()
}

fn same_model(calibrated: &str, wanted: &str) -> bool {
    let (a, b) = (fields(calibrated), fields(wanted));
    ["drift", "sigma", "dt", "x_points"]
        .iter()
        .all(|k| a.iter().find(|(x, _)| x == k) == b.iter().find(|(x, _)| x == k))
}

fn read_path(a: &TestArgs) -> Result<SampledPath, CliError> {
    Ok(gofsim::io::read_path_csv(open(&a.data)?)?)
}

fn s_star(a: &TestArgs) -> Result<f64, CliError> {
    match a.s_star.or(constant_value(&a.intensity)?) {
        Some(s) => Ok(s),
        None => Err(CliError::config(format!(
            "{} needs --s-star for a non-constant intensity",
            a.stat
        ))),
    }
}

/// Universal thresholds; the Poisson statistics use exact-size finite
/// thresholds when the table has them for this number of periods.
fn universal(
    table: &CalibrationTable,
    stat: StatResult,
    alphas: &[f64],
    finite: Option<f64>,
) -> Result<Vec<Row>, CliError> {
    let kind = TableKind::for_stat(stat.kind);
    alphas
        .iter()
        .map(|&alpha| {
            let horizon = finite
                .map(Horizon::Finite)
                .filter(|h| table.lookup(kind, alpha, *h).is_ok())
                .unwrap_or(Horizon::Limit);
            Ok(Row {
                threshold: table.threshold(kind, alpha, horizon)?,
                stat: stat.clone(),
                alpha,
                horizon: horizon.to_string(),
            })
        })
        .collect()
}

pub fn run(a: &TestArgs) -> Result<(), CliError> {
    let alphas: Vec<f64> = parse_list(&a.alphas, "significance level")?;
    if alphas.iter().any(|x| !(*x > 0.0 && *x < 1.0)) {
        return Err(CliError::config("significance levels must lie in (0, 1)"));
    }
    let table = || super::load_table(a.table.as_deref(), a.stat.as_str());
    use StatKind::*;
    let rows: Vec<Row> = match a.stat {
        CVM_SMALL_NOISE | KS_SMALL_NOISE => {
            let x = read_path(a)?;
            let drift = parse_model(&a.model.drift)?;
            let xstar = solve_limit_ode(&drift, x.first(), x.grid())?.path;
            let stat = match (&a.model.sigma, a.stat) {
                (Some(s), CVM_SMALL_NOISE) => {
                    stats::stat_small_noise_sigma(&x, &xstar, &drift, &parse_model(s)?, a.epsilon)?
                }
                (_, kind) => {
                    let (w, d) = stats::stat_small_noise(&x, &xstar, &drift, a.epsilon)?;
                    if kind == CVM_SMALL_NOISE {
                        w
                    } else {
                        d
                    }
                }
            };
            universal(&table()?, stat, &alphas, None)?
        }
        CVM_ERGODIC_FREE | CVM_ERGODIC_FREE_SIGMA => {
            let x = read_path(a)?;
            let drift = parse_model(&a.model.drift)?;
            let stat = if a.stat == CVM_ERGODIC_FREE {
                stats::stat_ergodic_free(&x, &drift)
            } else {
                let sigma = a
                    .model
                    .sigma
                    .as_deref()
                    .ok_or_else(|| CliError::config("CVM_ERGODIC_FREE_SIGMA needs --sigma"))?;
                let s = parse_model(sigma)?;
                let e = expect_under_invariant(
                    &ScalarModel::new("sigma^2", move |v| s.eval(v).powi(2)),
                    &a.model.null_table()?,
                );
                stats::stat_ergodic_free_sigma(&x, &drift, e)?
            };
            universal(&table()?, stat, &alphas, None)?
        }
        CVM_ERGODIC_EDF | KS_ERGODIC_EDF | CVM_ERGODIC_DENSITY | KS_ERGODIC_DENSITY => {
            let x = read_path(a)?;
            let horizon = x.grid().horizon();
            let null = ModelNull::new(
                a.model.spec(x.first(), horizon, x.grid().step())?,
                a.model.null_table()?,
            );
            let Some(path) = a.table.as_deref() else {
                return Err(missing_model_null(a.stat, alphas[0], horizon));
            };
            let table = gofsim::io::read_calibration(open(path)?)?;
            let (w, d) = if matches!(a.stat, CVM_ERGODIC_EDF | KS_ERGODIC_EDF) {
                stats::stat_ergodic_edf(&x, &null.table)?
            } else {
                stats::stat_ergodic_density(&x, &null.table)?
            };
            let stat = if a.stat.is_cvm() { w } else { d };
            let wanted = null.description();
            alphas
                .iter()
                .map(|&alpha| {
                    let entry = table
                        .lookup(TableKind::Stat(a.stat), alpha, Horizon::Finite(horizon))
                        .ok()
                        .filter(|e| same_model(&e.resolution, &wanted))
                        .ok_or_else(|| missing_model_null(a.stat, alpha, horizon))?;
                    Ok(Row {
                        stat: stat.clone(),
                        alpha,
                        threshold: entry.threshold,
                        horizon: entry.horizon.to_string(),
                    })
                })
                .collect::<Result<_, CliError>>()?
        }
        CVM_POISSON | KS_POISSON => {
            let rec = gofsim::io::read_events_csv(open(&a.data)?)?;
            let (tau, n) = match (rec.period(), rec.n_periods()) {
                (Some(t), Some(n)) => (t, n),
                _ => return Err(CliError::config("event file needs tau and n in its header")),
            };
            let intensity = parse_model(&a.intensity)?;
            let cumulative = cumulative_intensity(&intensity, constant_value(&a.intensity)?, tau)?;
            let (w, d) = stats::stat_poisson(&rec, &cumulative)?;
            let stat = if a.stat == CVM_POISSON { w } else { d };
            universal(&table()?, stat, &alphas, Some(n as f64))?
        }
        LAUMP => {
            let rec = gofsim::io::read_events_csv(open(&a.data)?)?;
            let stat = stats::stat_laump(&rec, s_star(a)?)?;
            alphas
                .iter()
                .map(|&alpha| Row {
                    stat: stat.clone(),
                    alpha,
                    threshold: z_alpha(alpha),
                    horizon: "analytic".into(),
                })
                .collect()
        }
        LAN_DELTA => {
            let rec = gofsim::io::read_events_csv(open(&a.data)?)?;
            let s = s_star(a)?;
            let h = parse_model(&a.h)?;
            let (tau, n) = match (rec.period(), rec.n_periods()) {
                (Some(t), Some(n)) => (t, n),
                _ => (rec.horizon(), 1),
            };
            let stat = stats::stat_lan_delta(&rec, &h, s, tau, n)?;
            let sd = stats::fisher_info(&h, s)?.sqrt();
            alphas
                .iter()
                .map(|&alpha| Row {
                    stat: stat.clone(),
                    alpha,
                    threshold: z_alpha(alpha) * sd,
                    horizon: "analytic".into(),
                })
                .collect()
        }
    };

    let mut report = Vec::new();
    write_report(&rows, &a.data.display().to_string(), &mut report).map_err(|e| CliError::config(e.to_string()))?;
    std::io::stdout()
        .write_all(&report)
        .map_err(|e| CliError::config(e.to_string()))?;
    if let Some(out) = &a.out {
        std::fs::write(out, &report).map_err(|e| CliError::config(format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(())
}

fn write_report(rows: &[Row], input: &str, out: &mut Vec<u8>) -> std::io::Result<()> {
    writeln!(
        out,
        "kind,value,alpha,threshold,horizon,decision,scale_note,input_label"
    )?;
    for r in rows {
        let decision = if r.stat.value > r.threshold { "reject" } else { "accept" };
        writeln!(
            out,
            "{},{},{},{},{},{},\"{}\",\"{}\"",
            r.stat.kind,
            r.stat.value,
            r.alpha,
            r.threshold,
            r.horizon,
            decision,
            r.stat.scale_note.replace('"', "'"),
            input.replace('"', "'")
        )?;
    }
    Ok(())
}
