//! CSV formats for paths, event records, statistic reports, calibration
//! tables, power curves and tabulated functions.
//!
//! Files may start with `# key=value,key=value` metadata lines; numbers are
//! written in Rust's shortest round-trip form, so output is byte-stable.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::mc::{CalibrationEntry, CalibrationTable, PowerCurve};
use crate::model::ScalarModel;
use crate::path::{Grid, SampledPath};
use crate::point_proc::EventRecord;
use crate::stats::StatResult;

/// Relative tolerance on the spacing of path time stamps.
pub const GRID_TOLERANCE: f64 = 1e-9;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(e.to_string()),
            _ => Error::Parse(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Leading `#` lines parsed as `key=value` pairs, and the remaining text.
fn split_meta(text: &str) -> Result<(Vec<(String, String)>, &str)> {
    let mut meta = Vec::new();
    let mut rest = text;
    while let Some(line_end) = rest.strip_prefix('#').map(|r| r.find('\n').unwrap_or(r.len())) {
        let line = &rest[1..=line_end];
        for item in line.trim().split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("metadata item '{item}' is not key=value")))?;
            meta.push((k.trim().to_string(), v.trim().to_string()));
        }
        rest = rest.get(line_end + 2..).unwrap_or("");
    }
    Ok((meta, rest))
}

fn write_meta(out: &mut impl Write, meta: &[(String, String)]) -> Result<()> {
    if !meta.is_empty() {
        let line: Vec<String> = meta.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "# {}", line.join(","))?;
    }
    Ok(())
}

fn read_all(mut r: impl Read) -> Result<String> {
    let mut s = String::new();
    r.read_to_string(&mut s)?;
    Ok(s)
}

fn parse_f64(field: &str, what: &str, line: usize) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: {what} '{field}' is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse(format!("line {line}: {what} is not finite")))
    }
}

fn reader(body: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes())
}

fn expect_header(rdr: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<()> {
    let h = rdr.headers()?;
    let got: Vec<&str> = h.iter().collect();
    if got != expected {
        return Err(Error::Parse(format!(
            "expected header '{}', found '{}'",
            expected.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

/// Two columns `t,x`; the time stamps must start at 0 and be uniform.
pub fn read_path_csv(r: impl Read) -> Result<SampledPath> {
    let text = read_all(r)?;
    let (_, body) = split_meta(&text)?;
    let mut rdr = reader(body);
    expect_header(&mut rdr, &["t", "x"])?;
    let mut ts = Vec::new();
    let mut xs = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != 2 {
            return Err(Error::Parse(format!("line {line}: expected 2 fields")));
        }
        ts.push(parse_f64(&rec[0], "t", line)?);
        xs.push(parse_f64(&rec[1], "x", line)?);
    }
    if ts.len() < 3 {
        return Err(Error::Parse("a path needs at least 3 points".into()));
    }
    let n = ts.len() - 1;
    let horizon = ts[n] - ts[0];
    if ts[0].abs() > GRID_TOLERANCE * horizon.abs().max(1.0) {
        return Err(Error::Parse(format!("path must start at t = 0, found {}", ts[0])));
    }
    let grid = Grid::new(n, horizon)?;
    for (i, t) in ts.iter().enumerate() {
        if (t - grid.time(i)).abs() > GRID_TOLERANCE * horizon.max(1.0) {
            return Err(Error::Parse(format!("time stamps are not uniform (row {})", i + 2)));
        }
    }
    SampledPath::new(grid, xs)
}

pub fn write_path_csv(path: &SampledPath, mut out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(["t", "x"])?;
    for (t, x) in path.grid().times().zip(path.values()) {
        w.write_record([t.to_string(), x.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `# T=..,tau=..,n=..` (tau and n optional), then an `event_time` column.
pub fn read_events_csv(r: impl Read) -> Result<EventRecord> {
    let text = read_all(r)?;
    let (meta, body) = split_meta(&text)?;
    let get = |k: &str| meta.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());
    let mut rdr = reader(body);
    expect_header(&mut rdr, &["event_time"])?;
    let mut events = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        events.push(parse_f64(&rec?[0], "event_time", i + 2)?);
    }
    let tau = get("tau").map(|v| parse_f64(v, "tau", 1)).transpose()?;
    let n = get("n")
        .map(|v| {
            v.parse::<usize>()
                .map_err(|_| Error::Parse(format!("n = '{v}' is not a count")))
        })
        .transpose()?;
    let horizon = match get("T") {
        Some(v) => parse_f64(v, "T", 1)?,
        None => match (tau, n) {
            (Some(t), Some(n)) => t * n as f64,
            _ => {
                return Err(Error::Parse(
                    "event file needs T or both tau and n in its header".into(),
                ))
            }
        },
    };
    let record = EventRecord::new(events, horizon)?;
    match (tau, n) {
        (Some(t), Some(n)) => record.with_period(t, n),
        (None, None) => Ok(record),
        _ => Err(Error::Parse("tau and n must be given together".into())),
    }
}

pub fn write_events_csv(record: &EventRecord, mut out: impl Write) -> Result<()> {
    let mut meta = vec![("T".to_string(), record.horizon().to_string())];
    if let (Some(t), Some(n)) = (record.period(), record.n_periods()) {
        meta.push(("tau".into(), t.to_string()));
        meta.push(("n".into(), n.to_string()));
    }
    write_meta(&mut out, &meta)?;
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(["event_time"])?;
    for t in record.events() {
        w.write_record([t.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_stat_results(results: &[StatResult], input_label: &str, mut out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(["kind", "value", "scale_note", "input_label"])?;
    for r in results {
        w.write_record([r.kind.as_str(), &r.value.to_string(), &r.scale_note, input_label])?;
    }
    w.flush()?;
    Ok(())
}

const CALIBRATION_HEADER: [&str; 7] = [
    "kind",
    "alpha",
    "horizon",
    "threshold",
    "std_error",
    "n_replicates",
    "resolution",
];

pub fn write_calibration(table: &CalibrationTable, mut out: impl Write) -> Result<()> {
    write_meta(&mut out, &table.meta)?;
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(CALIBRATION_HEADER)?;
    for e in table.entries() {
        w.write_record([
            e.kind.to_string(),
            e.alpha.to_string(),
            e.horizon.to_string(),
            e.threshold.to_string(),
            e.std_error.to_string(),
            e.n_replicates.to_string(),
            e.resolution.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_calibration(r: impl Read) -> Result<CalibrationTable> {
    let text = read_all(r)?;
    let (meta, body) = split_meta(&text)?;
    let mut rdr = reader(body);
    expect_header(&mut rdr, &CALIBRATION_HEADER)?;
    let mut table = CalibrationTable::new(meta);
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != CALIBRATION_HEADER.len() {
            return Err(Error::Parse(format!("line {line}: expected 7 fields")));
        }
        table.insert(CalibrationEntry {
            kind: rec[0].parse()?,
            alpha: parse_f64(&rec[1], "alpha", line)?,
            horizon: rec[2].parse()?,
            threshold: parse_f64(&rec[3], "threshold", line)?,
            std_error: parse_f64(&rec[4], "std_error", line)?,
            n_replicates: rec[5]
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}: n_replicates '{}'", &rec[5])))?,
            resolution: rec[6].to_string(),
        });
    }
    Ok(table)
}

/// Curves as rows `test,rho,power,std_error,provenance`, preceded by the
/// given metadata line.
pub fn write_power_curves(curves: &[PowerCurve], meta: &[(String, String)], mut out: impl Write) -> Result<()> {
    write_meta(&mut out, meta)?;
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(["test", "alpha", "rho", "power", "std_error", "provenance"])?;
    for c in curves {
        for p in &c.points {
            w.write_record([
                c.test.to_string(),
                c.alpha.to_string(),
                p.rho.to_string(),
                p.power.to_string(),
                p.std_error.to_string(),
                c.provenance.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// A two-column `x,y` table (any header names) as a piecewise-linear
/// function.
pub fn read_tabulated(r: impl Read, label: &str) -> Result<ScalarModel> {
    let text = read_all(r)?;
    let (_, body) = split_meta(&text)?;
    let mut rdr = reader(body);
    if rdr.headers()?.len() != 2 {
        return Err(Error::Parse("tabulated function needs two columns".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        xs.push(parse_f64(&rec[0], "x", i + 2)?);
        ys.push(parse_f64(&rec[1], "y", i + 2)?);
    }
    ScalarModel::tabulated(label, xs, ys)
}
