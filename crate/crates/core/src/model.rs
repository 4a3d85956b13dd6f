//! User-supplied scalar functions: drifts, diffusion coefficients,
//! intensities, alternatives and kernels.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function of one real argument with a display label.
///
/// Kernels additionally declare a compact support `[0, L]` (the function
/// is treated as zero outside it), an upper bound used for thinning, and
/// optionally a closed-form antiderivative `x -> int_0^x f`.
#[derive(Clone)]
pub struct ScalarModel {
    label: String,
    f: Func,
    support: Option<f64>,
    sup: Option<f64>,
    integral: Option<Func>,
}

impl fmt::Debug for ScalarModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarModel")
            .field("label", &self.label)
            .field("support", &self.support)
            .finish()
    }
}

/// Resolution of the trapezoid rule on kernel supports.
pub const KERNEL_QUADRATURE_POINTS: usize = 10_000;

impl ScalarModel {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            f: Arc::new(f),
            support: None,
            sup: None,
            integral: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("constant({c})"), move |_| c)
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// Ornstein–Uhlenbeck drift `-theta * x`.
    pub fn ou(theta: f64) -> Self {
        Self::new(format!("ou(theta={theta})"), move |x| -theta * x)
    }

    /// Intensity `a + b sin(2 pi t / period)`.
    pub fn sinusoidal(a: f64, b: f64, period: f64) -> Self {
        Self::new(format!("sinusoidal(a={a},b={b},period={period})"), move |t| {
            a + b * (2.0 * std::f64::consts::PI * t / period).sin()
        })
    }

    /// Kernel `a exp(-b t)` truncated to `[0, support]`.
    pub fn exp_kernel(a: f64, b: f64, support: f64) -> Self {
        let mut m = Self::new(format!("exp-kernel(a={a},b={b},L={support})"), move |t| {
            a * (-b * t).exp()
        });
        m.support = Some(support);
        m.sup = Some(a.max(0.0));
        m.integral = Some(Arc::new(move |x: f64| {
            let x = x.clamp(0.0, support);
            a / b * (1.0 - (-b * x).exp())
        }));
        m
    }

    /// Kernel `height` on `[0, width]`, zero elsewhere.
    pub fn box_kernel(height: f64, width: f64) -> Self {
        let mut m = Self::new(format!("box(height={height},width={width})"), move |t| {
            if (0.0..=width).contains(&t) {
                height
            } else {
                0.0
            }
        });
        m.support = Some(width);
        m.sup = Some(height.max(0.0));
        m.integral = Some(Arc::new(move |x: f64| height * x.clamp(0.0, width)));
        m
    }

    /// `c cos(freq * (x - shift))`.
    pub fn cosine(c: f64, freq: f64, shift: f64) -> Self {
        Self::new(format!("cosine(c={c},freq={freq},shift={shift})"), move |x| {
            c * (freq * (x - shift)).cos()
        })
    }

    /// Piecewise-linear interpolation through `(x, y)` knots, held constant
    /// beyond the end knots.
    pub fn tabulated(label: impl Into<String>, xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::InvalidArgument(
                "tabulated function needs >= 2 matching (x, y) knots".into(),
            ));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(
                "tabulated x values must be strictly increasing".into(),
            ));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("tabulated values must be finite".into()));
        }
        Ok(Self::new(label, move |x| interpolate(&xs, &ys, x)))
    }

    /// Declares `[0, support]` as the kernel support; the function is treated
    /// as zero outside it.
    pub fn with_support(mut self, support: f64) -> Self {
        self.support = Some(support);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Multiplies the function (and its cached bound and antiderivative).
    pub fn scaled(&self, factor: f64) -> Self {
        let f = self.f.clone();
        let mut m = Self::new(format!("{factor}*{}", self.label), move |x| factor * f(x));
        m.support = self.support;
        m.sup = self.sup.map(|s| (s * factor).max(0.0));
        m.integral = self
            .integral
            .clone()
            .map(|g| -> Func { Arc::new(move |x| factor * g(x)) });
        m
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support(&self) -> Option<f64> {
        self.support
    }

    pub(crate) fn require_support(&self) -> Result<f64> {
        match self.support {
            Some(l) if l.is_finite() && l > 0.0 => Ok(l),
            _ => Err(Error::InvalidArgument(format!(
                "kernel '{}' needs a declared compact support [0, L]",
                self.label
            ))),
        }
    }

    /// Kernel value with the support convention applied.
    #[inline]
    pub fn kernel(&self, t: f64) -> f64 {
        match self.support {
            Some(l) if t < 0.0 || t > l => 0.0,
            _ => self.eval(t),
        }
    }

    /// Upper bound of the kernel on its support: the declared bound, or the
    /// grid maximum inflated by 1% when none was declared.
    pub fn kernel_sup(&self) -> Result<f64> {
        if let Some(s) = self.sup {
            return Ok(s);
        }
        let l = self.require_support()?;
        let n = KERNEL_QUADRATURE_POINTS;
        let max = (0..=n)
            .map(|i| self.eval(l * i as f64 / n as f64))
            .fold(0.0_f64, f64::max);
        Ok(1.01 * max)
    }

    /// `int_0^x kernel(t) dt` for `x` in `[0, L]` (clamped outside).
    pub fn kernel_integral(&self, x: f64) -> Result<f64> {
        if let Some(g) = &self.integral {
            return Ok(g(x));
        }
        let l = self.require_support()?;
        let x = x.clamp(0.0, l);
        Ok(trapezoid_fn(|t| self.eval(t), 0.0, x, KERNEL_QUADRATURE_POINTS))
    }

    /// `int_0^L kernel(t) dt`.
    pub fn kernel_mass(&self) -> Result<f64> {
        let l = self.require_support()?;
        self.kernel_integral(l)
    }
}

pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let j = xs.partition_point(|&v| v <= x);
    let (x0, x1) = (xs[j - 1], xs[j]);
    let w = (x - x0) / (x1 - x0);
    ys[j - 1] * (1.0 - w) + ys[j] * w
}

/// Interpolation on a uniform table `ys[i] = y(i * step)`.
pub(crate) fn interpolate_uniform(ys: &[f64], step: f64, x: f64) -> f64 {
    let n = ys.len() - 1;
    let pos = (x / step).clamp(0.0, n as f64);
    let i = (pos.floor() as usize).min(n - 1);
    let w = pos - i as f64;
    ys[i] * (1.0 - w) + ys[i + 1] * w
}

/// Composite trapezoid rule with `n` intervals.
pub fn trapezoid_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + h * i as f64)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}
