//! Parameter sweeps from a flat `key=value` spec file.
//!
//! ```text
//! # comment
//! space = sphere-intrinsic
//! dim = 3
//! start = 0.5
//! stop = 10
//! points = 20
//! scale = geometric
//! method = quadrature
//! ```
//!
//! Keys: `space` (finite-file, interval, cantor, circle, sphere-intrinsic,
//! sphere-subspace), `param` (optional, must name the swept parameter),
//! `start`, `stop`, `points`, `scale` (linear or geometric, default linear),
//! `method` (closed, quadrature or finite-N), `dim` (spheres), `file`
//! (finite-file, relative to the spec), `tol`.
//!
//! For `cantor`, `closed` is the series value and `finite-N` the endpoint
//! set of construction stage N. For `finite-file` the parameter is the scale
//! factor applied to the distances.

use super::{
    cantor_finite, circle_finite, circle_value, default_tol, finite_row, interval_closed,
    interval_finite, quadrature_config, sphere_value, CliError, Method, Metric, Row,
};
use crate::io::read_distance_matrix;
use crate::line::{cantor_magnitude_series, MAX_CANTOR_STAGE};
use crate::metric::FiniteMetricSpace;
use crate::par::{self, Execution};
use std::collections::HashMap;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    FiniteFile,
    Interval,
    Cantor,
    Circle,
    SphereIntrinsic,
    SphereSubspace,
}

impl SpaceKind {
    fn parse(text: &str) -> Option<Self> {
        Some(match text {
            "finite-file" => SpaceKind::FiniteFile,
            "interval" => SpaceKind::Interval,
            "cantor" => SpaceKind::Cantor,
            "circle" => SpaceKind::Circle,
            "sphere-intrinsic" => SpaceKind::SphereIntrinsic,
            "sphere-subspace" => SpaceKind::SphereSubspace,
            _ => return None,
        })
    }

    /// The parameter swept for this space.
    pub fn param_name(self) -> &'static str {
        match self {
            SpaceKind::FiniteFile => "scale",
            SpaceKind::Interval | SpaceKind::Cantor => "length",
            SpaceKind::Circle => "circumference",
            SpaceKind::SphereIntrinsic | SpaceKind::SphereSubspace => "radius",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMethod {
    Closed,
    Quadrature,
    Finite(usize),
}

impl SweepMethod {
    fn parse(text: &str) -> Option<Self> {
        match text {
            "closed" => Some(SweepMethod::Closed),
            "quadrature" => Some(SweepMethod::Quadrature),
            _ => text
                .strip_prefix("finite-")?
                .parse()
                .ok()
                .map(SweepMethod::Finite),
        }
    }

    fn name(self) -> String {
        match self {
            SweepMethod::Closed => "closed".into(),
            SweepMethod::Quadrature => "quadrature".into(),
            SweepMethod::Finite(n) => format!("finite-{n}"),
        }
    }
}

/// A validated sweep description.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub space: SpaceKind,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: GridScale,
    pub method: SweepMethod,
    pub dim: Option<u32>,
    pub tol: Option<f64>,
    /// Loaded distance matrix for `finite-file`.
    pub finite: Option<FiniteMetricSpace>,
}

impl SweepSpec {
    /// Grid values in order; the last point is exactly `stop`.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == last {
                    return self.stop;
                }
                let s = i as f64 / last as f64;
                match self.scale {
                    GridScale::Linear => self.start + s * (self.stop - self.start),
                    GridScale::Geometric => self.start * (self.stop / self.start).powf(s),
                }
            })
            .collect()
    }
}

fn bad(message: impl Into<String>) -> CliError {
    CliError::Input(message.into())
}

fn number<T: std::str::FromStr>(
    map: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    map.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| bad(format!("sweep key {key}: cannot parse {v:?}")))
        })
        .transpose()
}

/// Parses and validates a spec. `base` resolves a relative `file`.
pub fn parse_sweep_spec(text: &str, base: &Path) -> Result<SweepSpec, CliError> {
    const KEYS: [&str; 10] = [
        "space", "param", "start", "stop", "points", "scale", "method", "dim", "file", "tol",
    ];
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("sweep line {}: expected key=value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(bad(format!(
                "sweep line {}: unknown key {key:?}",
                lineno + 1
            )));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(bad(format!(
                "sweep line {}: duplicate key {key:?}",
                lineno + 1
            )));
        }
    }
    let required = |key: &str| {
        map.get(key)
            .ok_or_else(|| bad(format!("sweep spec is missing {key}")))
    };
    let space_text = required("space")?;
    let space =
        SpaceKind::parse(space_text).ok_or_else(|| bad(format!("unknown space {space_text:?}")))?;
    if let Some(p) = map.get("param") {
        if p != space.param_name() {
            return Err(bad(format!(
                "space {space_text} sweeps {}, not {p}",
                space.param_name()
            )));
        }
    }
    let start: f64 = number(&map, "start")?.ok_or_else(|| bad("sweep spec is missing start"))?;
    let stop: f64 = number(&map, "stop")?.ok_or_else(|| bad("sweep spec is missing stop"))?;
    let points: usize =
        number(&map, "points")?.ok_or_else(|| bad("sweep spec is missing points"))?;
    if !(start.is_finite() && stop.is_finite() && start < stop) || points < 2 {
        return Err(bad("sweep grid needs finite start < stop and points >= 2"));
    }
    if start <= 0.0 {
        return Err(bad(format!(
            "{} must stay positive, start = {start}",
            space.param_name()
        )));
    }
    let scale = match map.get("scale").map(String::as_str) {
        None | Some("linear") => GridScale::Linear,
        Some("geometric") => GridScale::Geometric,
        Some(other) => return Err(bad(format!("unknown scale {other:?}"))),
    };
    let method_text = required("method")?;
    let method = SweepMethod::parse(method_text)
        .ok_or_else(|| bad(format!("unknown method {method_text:?}")))?;
    let dim: Option<u32> = number(&map, "dim")?;
    let tol: Option<f64> = number(&map, "tol")?;
    if tol.is_some_and(|t| !(t > 0.0)) {
        return Err(bad("tol must be positive"));
    }
    let is_sphere = matches!(
        space,
        SpaceKind::SphereIntrinsic | SpaceKind::SphereSubspace
    );
    if is_sphere != dim.is_some() {
        return Err(bad(if is_sphere {
            "sphere sweeps need dim"
        } else {
            "dim applies to sphere sweeps only"
        }));
    }
    let ok = match (space, method) {
        (SpaceKind::FiniteFile, SweepMethod::Closed) => true,
        (SpaceKind::Interval, SweepMethod::Closed) => true,
        (SpaceKind::Interval, SweepMethod::Finite(n)) => n >= 2,
        (SpaceKind::Cantor, SweepMethod::Closed) => true,
        (SpaceKind::Cantor, SweepMethod::Finite(level)) => level <= MAX_CANTOR_STAGE as usize,
        (SpaceKind::Circle, SweepMethod::Finite(n)) => n >= 1,
        (SpaceKind::Circle, _) => true,
        (SpaceKind::SphereIntrinsic, SweepMethod::Closed) => true,
        (SpaceKind::SphereSubspace, SweepMethod::Closed) => dim == Some(2),
        (SpaceKind::SphereIntrinsic | SpaceKind::SphereSubspace, SweepMethod::Quadrature) => {
            dim != Some(0)
        }
        _ => false,
    };
    if !ok {
        return Err(bad(format!(
            "method {method_text} is not available for space {space_text}"
        )));
    }
    let finite = match (space, map.get("file")) {
        (SpaceKind::FiniteFile, Some(file)) => Some(read_distance_matrix(&base.join(file), true)?),
        (SpaceKind::FiniteFile, None) => return Err(bad("finite-file sweeps need file")),
        (_, Some(_)) => return Err(bad("file applies to finite-file sweeps only")),
        (_, None) => None,
    };
    Ok(SweepSpec {
        space,
        start,
        stop,
        points,
        scale,
        method,
        dim,
        tol,
        finite,
    })
}

/// Evaluates every grid point, dispatching them through `exec`; rows come
/// back in grid order and the first failure in grid order is reported.
pub fn run_sweep(spec: &SweepSpec, exec: Execution) -> Result<Vec<Row>, CliError> {
    let solver_tol = match spec.tol {
        Some(t) => t,
        None => default_tol()?,
    };
    let cfg = quadrature_config(spec.tol.filter(|_| spec.method == SweepMethod::Quadrature))?;
    let space_name = match (spec.space, spec.dim) {
        (SpaceKind::FiniteFile, _) => "finite".to_string(),
        (SpaceKind::Interval, _) => "interval".into(),
        (SpaceKind::Cantor, _) => "cantor".into(),
        (SpaceKind::Circle, _) => "circle".into(),
        (SpaceKind::SphereIntrinsic, d) => format!("sphere{}-intrinsic", d.unwrap_or(0)),
        (SpaceKind::SphereSubspace, d) => format!("sphere{}-subspace", d.unwrap_or(0)),
    };
    let method = match spec.method {
        SweepMethod::Quadrature => Method::Quadrature,
        _ => Method::Closed,
    };
    let grid = spec.grid();
    par::try_map(exec, &grid, |&x| {
        let (magnitude, error_estimate) = match (spec.space, spec.method) {
            (SpaceKind::FiniteFile, _) => {
                let space = spec.finite.as_ref().expect("validated");
                let (row, _) = finite_row(space, x, solver_tol)?;
                (row.magnitude, row.error_estimate)
            }
            (SpaceKind::Interval, SweepMethod::Finite(n)) => {
                let m = interval_finite(x, n, solver_tol)?;
                (m, (m - interval_closed(x)?).abs())
            }
            (SpaceKind::Interval, _) => (interval_closed(x)?, 0.0),
            (SpaceKind::Cantor, SweepMethod::Finite(level)) => {
                let series = cantor_magnitude_series(x, solver_tol)?.value;
                let m = cantor_finite(x, level as u32, solver_tol)?;
                (m, (m - series).abs())
            }
            (SpaceKind::Cantor, _) => {
                let s = cantor_magnitude_series(x, solver_tol)?;
                (s.value, s.tail_bound)
            }
            (SpaceKind::Circle, SweepMethod::Finite(n)) => {
                let m = circle_finite(x, n, solver_tol)?;
                (m, (m - circle_value(x, Method::Closed, &cfg)?.0).abs())
            }
            (SpaceKind::Circle, _) => circle_value(x, method, &cfg)?,
            (SpaceKind::SphereIntrinsic, _) => {
                sphere_value(spec.dim.unwrap_or(0), x, Metric::Intrinsic, method, &cfg)?
            }
            (SpaceKind::SphereSubspace, _) => {
                sphere_value(spec.dim.unwrap_or(0), x, Metric::Subspace, method, &cfg)?
            }
        };
        Ok(Row {
            space: space_name.clone(),
            param_name: spec.space.param_name(),
            param_value: x,
            method: spec.method.name(),
            magnitude,
            error_estimate,
        })
    })
}
