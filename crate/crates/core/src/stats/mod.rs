//! Goodness-of-fit statistics for every observation model, plus the LAN
//! quantities and limit-experiment drifts used to describe their power.

mod counting;
mod drift;
mod ergodic;
mod small_noise;
mod two_sample;

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

pub use counting::{fisher_info, lambda_hat, stat_lan_delta, stat_laump, stat_poisson, LambdaHat};
pub use drift::{hstar_transform, rho_h, AltContext, AltDescriptor, HStar};
pub use ergodic::{
    density_statistics, edf_statistics, empirical_df, local_time_density, stat_ergodic_density, stat_ergodic_edf,
    stat_ergodic_free, stat_ergodic_free_sigma,
};
pub use small_noise::{stat_small_noise, stat_small_noise_sigma, stat_small_noise_sigma_as_printed};
pub use two_sample::{ks_critical_value, two_sample_ks};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[allow(non_camel_case_types)]
pub enum StatKind {
    CVM_SMALL_NOISE,
    KS_SMALL_NOISE,
    CVM_ERGODIC_EDF,
    KS_ERGODIC_EDF,
    CVM_ERGODIC_DENSITY,
    KS_ERGODIC_DENSITY,
    CVM_ERGODIC_FREE,
    CVM_ERGODIC_FREE_SIGMA,
    CVM_POISSON,
    KS_POISSON,
    LAUMP,
    LAN_DELTA,
}

impl StatKind {
    pub const ALL: [StatKind; 12] = [
        StatKind::CVM_SMALL_NOISE,
        StatKind::KS_SMALL_NOISE,
        StatKind::CVM_ERGODIC_EDF,
        StatKind::KS_ERGODIC_EDF,
        StatKind::CVM_ERGODIC_DENSITY,
        StatKind::KS_ERGODIC_DENSITY,
        StatKind::CVM_ERGODIC_FREE,
        StatKind::CVM_ERGODIC_FREE_SIGMA,
        StatKind::CVM_POISSON,
        StatKind::KS_POISSON,
        StatKind::LAUMP,
        StatKind::LAN_DELTA,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StatKind::CVM_SMALL_NOISE => "CVM_SMALL_NOISE",
            StatKind::KS_SMALL_NOISE => "KS_SMALL_NOISE",
            StatKind::CVM_ERGODIC_EDF => "CVM_ERGODIC_EDF",
            StatKind::KS_ERGODIC_EDF => "KS_ERGODIC_EDF",
            StatKind::CVM_ERGODIC_DENSITY => "CVM_ERGODIC_DENSITY",
            StatKind::KS_ERGODIC_DENSITY => "KS_ERGODIC_DENSITY",
            StatKind::CVM_ERGODIC_FREE => "CVM_ERGODIC_FREE",
            StatKind::CVM_ERGODIC_FREE_SIGMA => "CVM_ERGODIC_FREE_SIGMA",
            StatKind::CVM_POISSON => "CVM_POISSON",
            StatKind::KS_POISSON => "KS_POISSON",
            StatKind::LAUMP => "LAUMP",
            StatKind::LAN_DELTA => "LAN_DELTA",
        }
    }

    /// Integrated-square statistics.
    pub fn is_cvm(&self) -> bool {
        self.as_str().starts_with("CVM")
    }

    /// Supremum statistics.
    pub fn is_ks(&self) -> bool {
        self.as_str().starts_with("KS")
    }

    /// Statistics whose null limit is the universal `int W^2` or `sup |W|`.
    pub fn is_distribution_free(&self) -> bool {
        matches!(
            self,
            StatKind::CVM_SMALL_NOISE
                | StatKind::KS_SMALL_NOISE
                | StatKind::CVM_ERGODIC_FREE
                | StatKind::CVM_ERGODIC_FREE_SIGMA
                | StatKind::CVM_POISSON
                | StatKind::KS_POISSON
        )
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StatKind::ALL
            .iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown statistic kind '{s}'")))
    }
}

/// A computed statistic with a note on the normalization it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct StatResult {
    pub kind: StatKind,
    pub value: f64,
    pub scale_note: String,
}

impl StatResult {
    pub(crate) fn new(kind: StatKind, value: f64, scale_note: impl Into<String>) -> Self {
        Self {
            kind,
            value,
            scale_note: scale_note.into(),
        }
    }
}
