//! The built-in model vocabulary: `name:key=value,...` or `table:FILE`.

use std::collections::BTreeMap;
use std::fs::File;

use gofsim::diffusion::linspace;
use gofsim::model::trapezoid_fn;
use gofsim::ScalarModel;

use crate::CliError;

/// A parameter name and its default (`None`: required).
type Param = (&'static str, Option<f64>);

/// Names and parameters of the built-in functions.
const VOCABULARY: &[(&str, &[Param])] = &[
    ("zero", &[]),
    ("constant", &[("c", Some(1.0))]),
    ("ou", &[("theta", Some(1.0))]),
    ("linear", &[("a", Some(0.0)), ("b", Some(1.0))]),
    (
        "sinusoidal",
        &[("a", Some(1.0)), ("b", Some(0.5)), ("period", Some(1.0))],
    ),
    ("exp-kernel", &[("a", None), ("b", None), ("L", None)]),
    ("box-kernel", &[("height", None), ("width", None)]),
    ("box-h", &[("height", Some(1.0)), ("width", Some(1.0))]),
    (
        "cosine-h",
        &[("c", Some(1.0)), ("freq", Some(1.0)), ("shift", Some(0.0))],
    ),
];

pub fn vocabulary_help() -> String {
    let names: Vec<&str> = VOCABULARY.iter().map(|(n, _)| *n).collect();
    format!("{}, table:FILE", names.join(", "))
}

pub fn parse_model(spec: &str) -> Result<ScalarModel, CliError> {
    let spec = spec.trim();
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    if name == "table" {
        let file =
            File::open(rest).map_err(|e| CliError::config(format!("cannot open tabulated function '{rest}': {e}")))?;
        return Ok(gofsim::io::read_tabulated(file, &format!("table:{rest}"))?);
    }
    let params = VOCABULARY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| *p)
        .ok_or_else(|| CliError::config(format!("unknown model '{name}' (known: {})", vocabulary_help())))?;

    let mut given = BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("model parameter '{item}' is not key=value")))?;
        let k = k.trim();
        if !params.iter().any(|(p, _)| *p == k) {
            return Err(CliError::config(format!("model '{name}' has no parameter '{k}'")));
        }
        let v: f64 = v
            .trim()
            .parse()
            .ok()
            .filter(|x: &f64| x.is_finite())
            .ok_or_else(|| CliError::config(format!("parameter {k} = '{v}' is not a finite number")))?;
        given.insert(k.to_string(), v);
    }
    let get = |k: &str| -> Result<f64, CliError> {
        given
            .get(k)
            .copied()
            .or_else(|| params.iter().find(|(p, _)| *p == k).and_then(|(_, d)| *d))
            .ok_or_else(|| CliError::config(format!("model '{name}' needs parameter '{k}'")))
    };
    let positive = |k: &str| -> Result<f64, CliError> {
        let v = get(k)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(CliError::config(format!("model '{name}': {k} must be positive")))
        }
    };
    let model = match name {
        "zero" => ScalarModel::zero(),
        "constant" => ScalarModel::constant(get("c")?),
        "ou" => ScalarModel::ou(get("theta")?),
        "linear" => {
            let (a, b) = (get("a")?, get("b")?);
            ScalarModel::new(format!("linear(a={a},b={b})"), move |x| a + b * x)
        }
        "sinusoidal" => ScalarModel::sinusoidal(get("a")?, get("b")?, positive("period")?),
        "exp-kernel" => ScalarModel::exp_kernel(get("a")?, positive("b")?, positive("L")?),
        "box-kernel" | "box-h" => ScalarModel::box_kernel(get("height")?, positive("width")?),
        "cosine-h" => ScalarModel::cosine(get("c")?, get("freq")?, get("shift")?),
        _ => unreachable!("vocabulary checked above"),
    };
    Ok(model)
}

/// `a:b:step` (inclusive) or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| -> Result<f64, CliError> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::config(format!("'{s}' is not a finite number")))
    };
    if parts.len() == 3 {
        let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || b < a {
            return Err(CliError::config(format!("bad range '{spec}'")));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        if n > 100_000 {
            return Err(CliError::config(format!("range '{spec}' has too many points")));
        }
        return Ok((0..=n).map(|i| a + step * i as f64).collect());
    }
    spec.split(',').map(num).collect()
}

pub fn parse_list<T: std::str::FromStr>(spec: &str, what: &str) -> Result<Vec<T>, CliError> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::config(format!("'{s}' is not a valid {what}")))
        })
        .collect()
}

/// `min:max:points` for the density grid.
pub fn parse_x_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::config(format!("x-grid '{spec}' must be min:max:points")));
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::config("bad x-grid min"))?;
    let b: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::config("bad x-grid max"))?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| CliError::config("bad x-grid point count"))?;
    if !(b > a) || n < 3 {
        return Err(CliError::config(format!(
            "x-grid '{spec}' needs min < max and >= 3 points"
        )));
    }
    Ok(linspace(a, b, n))
}

/// `Lambda*(t) = int_0^t S*` on `[0, tau]`: exact for constants, otherwise
/// a fine piecewise-linear table.
pub fn cumulative_intensity(intensity: &ScalarModel, constant: Option<f64>, tau: f64) -> Result<ScalarModel, CliError> {
    if let Some(c) = constant {
        return Ok(ScalarModel::new(format!("{c} t"), move |t| c * t));
    }
    let n = 10_000;
    let ts = linspace(0.0, tau, n + 1);
    let mut ys = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    ys.push(0.0);
    for w in ts.windows(2) {
        acc += trapezoid_fn(|t| intensity.eval(t), w[0], w[1], 4);
        ys.push(acc);
    }
    Ok(ScalarModel::tabulated("Lambda*", ts, ys)?)
}

/// The constant value of a `constant:c=..` spec, if that is what it is.
pub fn constant_value(spec: &str) -> Result<Option<f64>, CliError> {
    let spec = spec.trim();
    if spec == "constant" || spec.starts_with("constant:") {
        let m = parse_model(spec)?;
        return Ok(Some(m.eval(0.0)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vocabulary() {
        assert_eq!(parse_model("ou:theta=2").unwrap().eval(1.0), -2.0);
        assert_eq!(parse_model("constant").unwrap().eval(3.0), 1.0);
        assert_eq!(parse_model("box-h:height=2,width=1").unwrap().kernel(1.5), 0.0);
        assert!(parse_model("ou:beta=2").is_err());
        assert!(parse_model("spline").is_err());
        assert!(parse_model("exp-kernel:a=1").is_err());
        assert_eq!(constant_value("constant:c=2").unwrap(), Some(2.0));
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("1,2.5").unwrap(), vec![1.0, 2.5]);
        assert!(parse_grid("0:1:0").is_err());
        assert_eq!(parse_x_grid("-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
    }
}
