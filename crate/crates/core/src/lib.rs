//! Simulation and goodness-of-fit testing for continuous-time processes.
//!
//! The crate covers four observation models (small-noise diffusions,
//! ergodic diffusions, periodic Poisson processes and self-exciting point
//! processes), the Cramér–von Mises and Kolmogorov–Smirnov type statistics
//! built on them, and the Monte Carlo machinery that turns those statistics
//! into calibrated tests with power curves.
//!
//! * [`gauss_paths`]: Wiener paths, the limit functionals and their oracles.
//! * [`diffusion`]: limit ODE, Euler–Maruyama simulation, invariant laws.
//! * [`point_proc`]: Poisson and Hawkes simulation, Hawkes summaries.
//! * [`stats`]: every test statistic, LAN quantities and drift parameters.
//! * [`mc`]: threshold calibration and power curves.
//! * [`io`]: CSV formats for paths, events, tables and curves.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffusion;
pub mod error;
pub mod gauss_paths;
pub mod io;
pub mod mc;
pub mod model;
pub mod path;
pub mod point_proc;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use model::ScalarModel;
pub use path::{Grid, SampledPath};
pub use rng::RngStream;
