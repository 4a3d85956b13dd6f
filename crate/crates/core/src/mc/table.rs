use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::stats::StatKind;

/// What a threshold applies to: the universal limit functionals (and the
/// finite-horizon versions of the statistics that converge to them) or a
/// specific statistic calibrated under a model null.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableKind {
    /// `int_0^1 W(s)^2 ds` and every statistic converging to it.
    Cvm,
    /// `sup |W(s)|` and every statistic converging to it.
    Ks,
    Stat(StatKind),
}

impl TableKind {
    /// The universal kind a statistic is compared against, if any.
    pub fn for_stat(kind: StatKind) -> TableKind {
        if kind.is_distribution_free() {
            if kind.is_ks() {
                TableKind::Ks
            } else {
                TableKind::Cvm
            }
        } else {
            TableKind::Stat(kind)
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableKind::Cvm => f.write_str("CVM"),
            TableKind::Ks => f.write_str("KS"),
            TableKind::Stat(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "CVM" => Ok(TableKind::Cvm),
            "KS" => Ok(TableKind::Ks),
            other => other.parse().map(TableKind::Stat),
        }
    }
}

/// `limit` or `T=<value>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    Limit,
    Finite(f64),
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Limit => f.write_str("limit"),
            Horizon::Finite(t) => write!(f, "T={t}"),
        }
    }
}

impl FromStr for Horizon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "limit" {
            return Ok(Horizon::Limit);
        }
        s.strip_prefix("T=")
            .and_then(|v| v.parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
            .map(Horizon::Finite)
            .ok_or_else(|| Error::Parse(format!("horizon label '{s}' is neither 'limit' nor 'T=<value>'")))
    }
}

fn same_horizon(a: Horizon, b: Horizon) -> bool {
    match (a, b) {
        (Horizon::Limit, Horizon::Limit) => true,
        (Horizon::Finite(x), Horizon::Finite(y)) => (x - y).abs() <= 1e-9 * x.abs().max(1.0),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationEntry {
    pub kind: TableKind,
    pub alpha: f64,
    pub horizon: Horizon,
    pub threshold: f64,
    pub std_error: f64,
    pub n_replicates: usize,
    /// Grid or model description the threshold was computed at.
    pub resolution: String,
}

/// Thresholds keyed by (kind, alpha, horizon), with free-form metadata
/// (seed, replicate count, grid) recorded in the file header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CalibrationTable {
    pub meta: Vec<(String, String)>,
    entries: Vec<CalibrationEntry>,
}

impl CalibrationTable {
    pub fn new(meta: Vec<(String, String)>) -> Self {
        Self {
            meta,
            entries: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[CalibrationEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds an entry, replacing any previous one with the same key.
    pub fn insert(&mut self, entry: CalibrationEntry) {
        self.entries
            .retain(|e| !(e.kind == entry.kind && e.alpha == entry.alpha && same_horizon(e.horizon, entry.horizon)));
        self.entries.push(entry);
    }

    /// Entries of `other` are added; its metadata is appended.
    pub fn merge(&mut self, other: CalibrationTable) {
        for kv in other.meta {
            if !self.meta.contains(&kv) {
                self.meta.push(kv);
            }
        }
        for e in other.entries {
            self.insert(e);
        }
    }

    pub fn lookup(&self, kind: TableKind, alpha: f64, horizon: Horizon) -> Result<&CalibrationEntry> {
        self.entries
            .iter()
            .find(|e| e.kind == kind && (e.alpha - alpha).abs() <= 1e-12 && same_horizon(e.horizon, horizon))
            .ok_or_else(|| Error::MissingThreshold {
                kind: kind.to_string(),
                alpha,
                horizon: horizon.to_string(),
            })
    }

    pub fn threshold(&self, kind: TableKind, alpha: f64, horizon: Horizon) -> Result<f64> {
        self.lookup(kind, alpha, horizon).map(|e| e.threshold)
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}
