//! Drift of the limit experiment `dY_s = rho_h ds + dW(s)` for the
//! alternatives of each observation model, and the time change that maps
//! a small-noise alternative to its signal `h*` on `[0, 1]`.

use crate::diffusion::{expect_under_invariant, inverse_square_clock, DensityTable};
use crate::error::{Error, Result};
use crate::model::{interpolate, ScalarModel};
use crate::path::{Grid, SampledPath};

/// Observation model in which an alternative `h` is embedded.
#[derive(Debug, Clone)]
pub enum AltContext {
    /// `dX = [S*(X) + eps h(X)/S*(X)] dt + eps dW`.
    SmallNoise,
    /// `dX = [S*(X) + h(X)/sqrt(T)] dt + sigma(X) dW`; `sigma` defaults to 1.
    Ergodic {
        table: DensityTable,
        sigma: Option<ScalarModel>,
    },
    /// Intensity `S*(t) + h(t)/sqrt(n)` on each period.
    PoissonPeriodic,
    /// Self-exciting kernel `h/sqrt(n)` on top of the constant rate `S*`.
    Hawkes { s_star: f64 },
}

impl AltContext {
    pub fn name(&self) -> &'static str {
        match self {
            AltContext::SmallNoise => "small-noise",
            AltContext::Ergodic { .. } => "ergodic",
            AltContext::PoissonPeriodic => "poisson-periodic",
            AltContext::Hawkes { .. } => "hawkes",
        }
    }
}

/// An alternative direction `h` together with its model context.
#[derive(Debug, Clone)]
pub struct AltDescriptor {
    pub h: ScalarModel,
    pub context: AltContext,
}

impl AltDescriptor {
    pub fn new(h: ScalarModel, context: AltContext) -> Self {
        Self { h, context }
    }

    pub fn rho(&self) -> Result<f64> {
        rho_h(self)
    }
}

/// `rho_h = sqrt(S*) int h` for self-exciting alternatives and
/// `E h(xi) / sqrt(E sigma(xi)^2)` for ergodic ones. The small-noise and
/// periodic Poisson alternatives enter their limits through a curve rather
/// than a constant drift and are rejected here.
pub fn rho_h(alt: &AltDescriptor) -> Result<f64> {
    let rho = match &alt.context {
        AltContext::Hawkes { s_star } => {
            if !(*s_star > 0.0) {
                return Err(Error::InvalidArgument(format!("S* = {s_star} must be positive")));
            }
            s_star.sqrt() * alt.h.kernel_mass()?
        }
        AltContext::Ergodic { table, sigma } => {
            let mean = expect_under_invariant(&alt.h, table);
            let var = match sigma {
                Some(s) => {
                    let s = s.clone();
                    let s2 = ScalarModel::new("sigma^2", move |x| s.eval(x).powi(2));
                    expect_under_invariant(&s2, table)
                }
                None => 1.0,
            };
            if !(var > 0.0) {
                return Err(Error::InvalidArgument(format!("E sigma^2 = {var}")));
            }
            mean / var.sqrt()
        }
        other => {
            return Err(Error::UnsupportedContext(format!(
                "no constant limit drift in the {} context; use the signal curve instead",
                other.name()
            )))
        }
    };
    if !rho.is_finite() {
        return Err(Error::InvalidArgument(format!("rho_h = {rho} is not finite")));
    }
    Ok(rho)
}

/// The small-noise signal `h*(s) = u_T^1/2 h(x*(t(s)))` on a uniform grid
/// of `[0, 1]`, where `t(s)` solves `int_0^t S*(x*_v)^-2 dv = u_T s`.
#[derive(Debug, Clone)]
pub struct HStar {
    pub signal: SampledPath,
    pub u_t: f64,
}

impl HStar {
    /// `s -> int_0^s h*(v) dv` by the trapezoid rule, the drift curve of
    /// the limit process.
    pub fn integrated(&self) -> SampledPath {
        let grid = *self.signal.grid();
        let v = crate::diffusion::cumulative_trapezoid(self.signal.values(), grid.step());
        SampledPath::from_parts_unchecked(grid, v)
    }
}

pub fn hstar_transform(h: &ScalarModel, xstar: &SampledPath, drift: &ScalarModel) -> Result<HStar> {
    let clock = inverse_square_clock(xstar, drift)?;
    let grid = xstar.grid();
    let u_t = *clock.last().expect("grid has points");
    let times: Vec<f64> = grid.times().collect();
    let out_grid = Grid::unit(grid.n_steps())?;
    let root = u_t.sqrt();
    let values = out_grid
        .times()
        .map(|s| {
            let t = interpolate(&clock, &times, u_t * s);
            root * h.eval(xstar.value_at(t))
        })
        .collect();
    Ok(HStar {
        signal: SampledPath::new(out_grid, values)?,
        u_t,
    })
}
