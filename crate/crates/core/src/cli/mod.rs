//! Command-line front end. Every computation prints CSV with the header
//! `space,param_name,param_value,method,magnitude,error_estimate`, except
//! `asymptotics` and `tube-check`, which have their own columns.
//!
//! Exit codes: 0 on success, 2 on usage or input errors, 3 on numerical
//! failure (the failure kind is named on stderr).

mod sweep;

use crate::asymptotics::{
    extract_from_values, extract_subspace_relative, geometric_grid,
    predicted_expansion_intrinsic_sphere, predicted_relative_correction_subspace, AsymptoticsError,
};
use crate::homogeneous::{
    circle_magnitude_closed, circle_magnitude_quadrature, sphere_magnitude_quadrature,
    subspace_sphere2_closed, subspace_sphere_magnitude_quadrature,
};
use crate::io::{read_distance_matrix, read_point_cloud, InputError};
use crate::line::{
    cantor_endpoints, cantor_iterative_tail_bound, cantor_magnitude_iterative,
    cantor_magnitude_series, finite_approx_line, interval_weight_measure, measure_total_mass,
    LineError, LineSubset,
};
use crate::metric::{magnitude_homogeneous_finite, weighting, FiniteMetricSpace, MetricError};
use crate::par::{self, Execution};
use crate::quadrature::{QuadratureConfig, QuadratureError};
use crate::special::format_sig17;
use crate::sphere::{sphere_magnitude_closed, tube_volume_check, SphereError};
use crate::DEFAULT_TOL;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub use sweep::{parse_sweep_spec, run_sweep, GridScale, SpaceKind, SweepMethod, SweepSpec};

/// Environment variable overriding the default solver / series tolerance.
pub const TOL_ENV: &str = "MAGNITUDE_DEFAULT_TOL";

pub const HEADER: [&str; 6] = [
    "space",
    "param_name",
    "param_value",
    "method",
    "magnitude",
    "error_estimate",
];

#[derive(Debug, Parser)]
#[command(
    name = "magnitude",
    version,
    about = "Magnitude of metric spaces",
    propagate_version = true
)]
#[command(subcommand_required = true, arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Finite metric space from a distance-matrix or point-cloud CSV
    Finite(FiniteArgs),
    /// Segment [0, L], exactly and optionally by a finite grid
    Interval(IntervalArgs),
    /// Middle-thirds Cantor set on [0, L]
    Cantor(CantorArgs),
    /// Circle with the arc-length metric
    Circle(CircleArgs),
    /// Round n-sphere of radius R
    Sphere(SphereArgs),
    /// Extract large-scale expansion coefficients of sphere magnitude
    Asymptotics(AsymptoticsArgs),
    /// Compare the tube formula with the shell volume around a sphere
    TubeCheck(TubeArgs),
    /// Evaluate a parameter sweep described by a key=value spec file
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["matrix", "points"])))]
#[command(allow_negative_numbers = true)]
struct FiniteArgs {
    /// Square distance matrix, one comma-separated row per line
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Point cloud, one comma-separated point per line (Euclidean metric)
    #[arg(long, value_name = "FILE")]
    points: Option<PathBuf>,
    /// Singularity tolerance for the weight equation [default: 1e-10 or $MAGNITUDE_DEFAULT_TOL]
    #[arg(long, value_name = "T")]
    tol: Option<f64>,
    /// Skip the triangle-inequality check on --matrix input
    #[arg(long)]
    no_triangle_check: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct IntervalArgs {
    /// Length L > 0
    #[arg(long, value_name = "L")]
    length: f64,
    /// Also solve a grid of N points across the segment
    #[arg(long, value_name = "N")]
    approx: Option<usize>,
    /// Solver tolerance for --approx [default: 1e-10 or $MAGNITUDE_DEFAULT_TOL]
    #[arg(long, value_name = "T")]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("method").required(true).args(["series", "iterative"])))]
#[command(allow_negative_numbers = true)]
struct CantorArgs {
    /// Length L > 0 of the initial segment
    #[arg(long, value_name = "L")]
    length: f64,
    /// Sum the tanh series until the tail bound drops below --tol
    #[arg(long)]
    series: bool,
    /// Mass of the weight measure of construction stage --depth
    #[arg(long)]
    iterative: bool,
    /// Series truncation / solver tolerance [default: 1e-10 or $MAGNITUDE_DEFAULT_TOL]
    #[arg(long, value_name = "T")]
    tol: Option<f64>,
    /// Stage for --iterative
    #[arg(long, value_name = "D", default_value_t = 60)]
    depth: u32,
    /// Also solve the endpoint set of construction stage K (K <= 14)
    #[arg(long, value_name = "K")]
    level: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Intrinsic,
    Subspace,
}

impl Metric {
    fn name(self) -> &'static str {
        match self {
            Metric::Intrinsic => "intrinsic",
            Metric::Subspace => "subspace",
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct CircleArgs {
    /// Circumference L > 0
    #[arg(long, value_name = "L")]
    circumference: f64,
    /// Also evaluate N equally spaced points on the circle
    #[arg(long, value_name = "N")]
    points: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    /// Relative quadrature tolerance [default: 1e-12]
    #[arg(long, value_name = "T")]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SphereArgs {
    /// Dimension n of the sphere
    #[arg(long, value_name = "N")]
    dim: u32,
    /// Radius R > 0
    #[arg(long, value_name = "R")]
    radius: f64,
    /// Geodesic (intrinsic) or chordal (subspace) distance
    #[arg(long, value_enum, default_value_t = Metric::Intrinsic)]
    metric: Metric,
    /// Closed form (subspace: n = 2 only) or quadrature
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    /// Relative quadrature tolerance [default: 1e-12]
    #[arg(long, value_name = "T")]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct AsymptoticsArgs {
    /// Dimension n >= 2
    #[arg(long, value_name = "N")]
    dim: u32,
    /// Intrinsic: coefficients of t^n, t^(n-2), ... plus t^(n-1).
    /// Subspace: relative coefficients of R^-2, R^-4, ...
    #[arg(long, value_enum, default_value_t = Metric::Intrinsic)]
    metric: Metric,
    /// How magnitudes on the grid are computed (subspace closed: n = 2 only)
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    /// Number of coefficients in the parity-aware fit; the grid has K + 2 points [default: 2 intrinsic, 1 subspace]
    #[arg(long, value_name = "K")]
    orders: Option<usize>,
    /// Smallest scale on the geometric grid [default: 10 intrinsic, 20 subspace]
    #[arg(long, value_name = "A")]
    tmin: Option<f64>,
    /// Largest scale on the geometric grid
    #[arg(long, value_name = "B", default_value_t = 80.0)]
    tmax: f64,
    /// Largest accepted extrapolation spread
    #[arg(long, value_name = "T", default_value_t = 1e-3)]
    tol: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct TubeArgs {
    /// Dimension n of the sphere (the tube lives in R^(n+1))
    #[arg(long, value_name = "N")]
    dim: u32,
    /// Radius R > 0
    #[arg(long, value_name = "R")]
    radius: f64,
    /// Tube radius, 0 < E < R
    #[arg(long, value_name = "E")]
    epsilon: f64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// key=value spec: space, param, start, stop, points, scale, method, dim, file, tol
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    /// Output CSV
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

/// A failure classified by exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Input(String),
    Numerical { kind: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical { .. } => 3,
        }
    }

    fn input(message: impl Into<String>) -> Self {
        CliError::Input(message.into())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical { kind, message } => {
                write!(f, "numerical failure: {kind}: {message}")
            }
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::SingularSystem { .. } => CliError::Numerical {
                kind: "SingularSystem",
                message: e.to_string(),
            },
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<LineError> for CliError {
    fn from(e: LineError) -> Self {
        match e {
            LineError::Metric(m) => m.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<QuadratureError> for CliError {
    fn from(e: QuadratureError) -> Self {
        match e {
            QuadratureError::NoConvergence { .. } => CliError::Numerical {
                kind: "NoConvergence",
                message: e.to_string(),
            },
            QuadratureError::NonFinite(_) => CliError::Numerical {
                kind: "NonFinite",
                message: e.to_string(),
            },
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<AsymptoticsError> for CliError {
    fn from(e: AsymptoticsError) -> Self {
        match e {
            AsymptoticsError::Quadrature(q) => q.into(),
            AsymptoticsError::IllConditionedFit { .. } => CliError::Numerical {
                kind: "IllConditionedFit",
                message: e.to_string(),
            },
            AsymptoticsError::NonFinite(_) => CliError::Numerical {
                kind: "NonFinite",
                message: e.to_string(),
            },
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SphereError> for CliError {
    fn from(e: SphereError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Metric(m) => m.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// One output line of the standard schema.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub space: String,
    pub param_name: &'static str,
    pub param_value: f64,
    pub method: String,
    pub magnitude: f64,
    pub error_estimate: f64,
}

impl Row {
    fn record(&self) -> [String; 6] {
        [
            self.space.clone(),
            self.param_name.to_string(),
            format_sig17(self.param_value),
            self.method.clone(),
            format_sig17(self.magnitude),
            format_sig17(self.error_estimate),
        ]
    }
}

/// Writes the standard header followed by `rows`.
pub fn write_rows<W: Write>(out: W, rows: &[Row]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

/// Default solver / series tolerance, honouring [`TOL_ENV`].
pub fn default_tol() -> Result<f64, CliError> {
    match std::env::var(TOL_ENV) {
        Ok(text) => match text.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(CliError::input(format!(
                "{TOL_ENV}={text:?} is not a positive number"
            ))),
        },
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_TOL),
        Err(e) => Err(CliError::input(format!("{TOL_ENV}: {e}"))),
    }
}

fn solver_tol(flag: Option<f64>) -> Result<f64, CliError> {
    match flag {
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(CliError::input(format!(
            "tolerance must be positive, got {t}"
        ))),
        None => default_tol(),
    }
}

fn quadrature_config(flag: Option<f64>) -> Result<QuadratureConfig, CliError> {
    let cfg = match flag {
        Some(t) => QuadratureConfig::with_rel_tol(t),
        None => QuadratureConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::input(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Finite(a) => finite(a, out),
        Command::Interval(a) => write_rows(out, &interval(a)?),
        Command::Cantor(a) => write_rows(out, &cantor(a)?),
        Command::Circle(a) => write_rows(out, &circle(a)?),
        Command::Sphere(a) => {
            let cfg = quadrature_config(a.tol)?;
            write_rows(
                out,
                &[sphere_row(a.dim, a.radius, a.metric, a.method, &cfg)?],
            )
        }
        Command::Asymptotics(a) => asymptotics(a, out),
        Command::TubeCheck(a) => tube_check(a, out),
        Command::Sweep(a) => {
            let text = std::fs::read_to_string(&a.spec)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", a.spec.display())))?;
            let base = a.spec.parent().map(PathBuf::from).unwrap_or_default();
            let spec = parse_sweep_spec(&text, &base)?;
            let rows = run_sweep(&spec, Execution::default())?;
            let file = std::fs::File::create(&a.out)
                .map_err(|e| CliError::input(format!("cannot create {}: {e}", a.out.display())))?;
            write_rows(std::io::BufWriter::new(file), &rows)
        }
    }
}

fn finite(a: FiniteArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let tol = solver_tol(a.tol)?;
    let space = match (&a.matrix, &a.points) {
        (Some(path), _) => read_distance_matrix(path, !a.no_triangle_check)?,
        (None, Some(path)) => read_point_cloud(path)?,
        (None, None) => return Err(CliError::input("one of --matrix or --points is required")),
    };
    let (row, rcond) = finite_row(&space, 1.0, tol)?;
    write_rows(&mut *out, &[row])?;
    writeln!(out, "# rcond={}", format_sig17(rcond))?;
    Ok(())
}

/// Magnitude of `t·space` by the weight equation, with the bound
/// `n · residual / rcond` on the error of the weight sum.
pub(crate) fn finite_row(
    space: &FiniteMetricSpace,
    t: f64,
    tol: f64,
) -> Result<(Row, f64), CliError> {
    let scaled = space.scale(t)?;
    let w = weighting(&scaled, tol)?;
    let bound = space.len() as f64 * w.residual_norm / w.rcond;
    let row = Row {
        space: "finite".into(),
        param_name: "scale",
        param_value: t,
        method: "closed".into(),
        magnitude: w.total(),
        error_estimate: bound,
    };
    Ok((row, w.rcond))
}

pub(crate) fn interval_closed(length: f64) -> Result<f64, CliError> {
    let (_, measure) = interval_weight_measure(length)?;
    Ok(measure_total_mass(&measure))
}

pub(crate) fn interval_finite(length: f64, n: usize, tol: f64) -> Result<f64, CliError> {
    let space = finite_approx_line(&LineSubset::segment(length)?, n)?;
    Ok(weighting(&space, tol)?.total())
}

fn interval(a: IntervalArgs) -> Result<Vec<Row>, CliError> {
    let exact = interval_closed(a.length)?;
    let row = |method: String, magnitude: f64, error_estimate: f64| Row {
        space: "interval".into(),
        param_name: "length",
        param_value: a.length,
        method,
        magnitude,
        error_estimate,
    };
    let mut rows = vec![row("closed".into(), exact, 0.0)];
    if let Some(n) = a.approx {
        let m = interval_finite(a.length, n, solver_tol(a.tol)?)?;
        rows.push(row(format!("finite-{n}"), m, (m - exact).abs()));
    }
    Ok(rows)
}

pub(crate) fn cantor_finite(length: f64, level: u32, tol: f64) -> Result<f64, CliError> {
    let xs = cantor_endpoints(length, level)?;
    Ok(weighting(&FiniteMetricSpace::from_line_points(&xs)?, tol)?.total())
}

fn cantor(a: CantorArgs) -> Result<Vec<Row>, CliError> {
    positive("length", a.length)?;
    let tol = solver_tol(a.tol)?;
    let row = |method: String, magnitude: f64, error_estimate: f64| Row {
        space: "cantor".into(),
        param_name: "length",
        param_value: a.length,
        method,
        magnitude,
        error_estimate,
    };
    let (method, value, bound) = if a.series {
        let s = cantor_magnitude_series(a.length, tol)?;
        ("series".to_string(), s.value, s.tail_bound)
    } else {
        let v = cantor_magnitude_iterative(a.length, a.depth);
        (
            format!("iterative-{}", a.depth),
            v,
            cantor_iterative_tail_bound(a.length, a.depth),
        )
    };
    let mut rows = vec![row(method, value, bound)];
    if let Some(level) = a.level {
        let m = cantor_finite(a.length, level, tol)?;
        rows.push(row(format!("finite-{level}"), m, (m - value).abs()));
    }
    Ok(rows)
}

pub(crate) fn circle_value(
    circumference: f64,
    method: Method,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64), CliError> {
    positive("circumference", circumference)?;
    match method {
        Method::Closed => Ok((circle_magnitude_closed(circumference), 0.0)),
        Method::Quadrature => {
            let e = circle_magnitude_quadrature(circumference, cfg)?;
            Ok((e.value, e.error_estimate))
        }
    }
}

pub(crate) fn circle_finite(circumference: f64, n: usize, tol: f64) -> Result<f64, CliError> {
    positive("circumference", circumference)?;
    if n == 0 {
        return Err(CliError::input("--points must be at least 1"));
    }
    Ok(magnitude_homogeneous_finite(
        &FiniteMetricSpace::circle_points(circumference, n)?,
        tol,
    )?)
}

fn circle(a: CircleArgs) -> Result<Vec<Row>, CliError> {
    let cfg = quadrature_config(a.tol)?;
    let (value, err) = circle_value(a.circumference, a.method, &cfg)?;
    let row = |method: String, magnitude: f64, error_estimate: f64| Row {
        space: "circle".into(),
        param_name: "circumference",
        param_value: a.circumference,
        method,
        magnitude,
        error_estimate,
    };
    let mut rows = vec![row(method_name(a.method).into(), value, err)];
    if let Some(n) = a.points {
        let m = circle_finite(a.circumference, n, default_tol()?)?;
        rows.push(row(
            format!("finite-{n}"),
            m,
            (m - circle_magnitude_closed(a.circumference)).abs(),
        ));
    }
    Ok(rows)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Closed => "closed",
        Method::Quadrature => "quadrature",
    }
}

/// Sphere magnitude and error estimate for the given metric and method.
pub(crate) fn sphere_value(
    dim: u32,
    radius: f64,
    metric: Metric,
    method: Method,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64), CliError> {
    positive("radius", radius)?;
    if method == Method::Quadrature && dim == 0 {
        return Err(CliError::input("quadrature needs dim >= 1"));
    }
    match (metric, method) {
        (Metric::Intrinsic, Method::Closed) => Ok((sphere_magnitude_closed(dim, radius), 0.0)),
        (Metric::Intrinsic, Method::Quadrature) => {
            let e = sphere_magnitude_quadrature(dim, radius, cfg)?;
            Ok((e.value, e.error_estimate))
        }
        (Metric::Subspace, Method::Closed) if dim == 2 => {
            Ok((subspace_sphere2_closed(radius), 0.0))
        }
        (Metric::Subspace, Method::Closed) => Err(CliError::input(
            "the subspace closed form exists for dim 2 only; use --method quadrature",
        )),
        (Metric::Subspace, Method::Quadrature) => {
            let e = subspace_sphere_magnitude_quadrature(dim, radius, cfg)?;
            Ok((e.value, e.error_estimate))
        }
    }
}

fn sphere_row(
    dim: u32,
    radius: f64,
    metric: Metric,
    method: Method,
    cfg: &QuadratureConfig,
) -> Result<Row, CliError> {
    let (magnitude, error_estimate) = sphere_value(dim, radius, metric, method, cfg)?;
    Ok(Row {
        space: format!("sphere{dim}-{}", metric.name()),
        param_name: "radius",
        param_value: radius,
        method: method_name(method).into(),
        magnitude,
        error_estimate,
    })
}

fn asymptotics(a: AsymptoticsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.dim < 2 {
        return Err(CliError::input("asymptotics needs --dim >= 2"));
    }
    let (default_orders, default_tmin) = match a.metric {
        Metric::Intrinsic => (2, 10.0),
        Metric::Subspace => (1, 20.0),
    };
    let orders = a.orders.unwrap_or(default_orders);
    if orders == 0 {
        return Err(CliError::input("--orders must be at least 1"));
    }
    let tmin = positive("--tmin", a.tmin.unwrap_or(default_tmin))?;
    let tmax = positive("--tmax", a.tmax)?;
    if tmax <= tmin {
        return Err(CliError::input("--tmax must exceed --tmin"));
    }
    if !(a.tol > 0.0) {
        return Err(CliError::input("--tol must be positive"));
    }
    let grid = geometric_grid(tmin, tmax, orders + 2);
    let cfg = QuadratureConfig::default();
    // (power, extracted, error_estimate, predicted)
    let mut table: Vec<(i32, f64, f64, Option<f64>)> = Vec::new();
    match a.metric {
        Metric::Intrinsic => {
            let n = a.dim as i32;
            let values = par::try_map(Execution::default(), &grid, |&t| {
                sphere_value(a.dim, t, Metric::Intrinsic, a.method, &cfg).map(|v| v.0)
            })?;
            let even = extract_from_values(&grid, &values, n, 2, orders, a.tol)?;
            let c_n = even.coefficient(n);
            let stripped: Vec<f64> = grid
                .iter()
                .zip(&values)
                .map(|(&t, &v)| v - c_n * t.powi(n))
                .collect();
            let gap = extract_from_values(&grid, &stripped, n - 1, 1, 1, a.tol)?.terms()[0];
            let predicted = predicted_expansion_intrinsic_sphere(a.dim);
            let mut terms = even.terms().to_vec();
            terms.push(gap);
            terms.sort_by_key(|t| std::cmp::Reverse(t.power));
            for t in terms {
                table.push((
                    t.power,
                    t.coefficient,
                    t.error_estimate,
                    predicted.term(t.power).map(|p| p.coefficient),
                ));
            }
        }
        Metric::Subspace => {
            let e = if a.method == Method::Closed {
                if a.dim != 2 {
                    return Err(CliError::input(
                        "the subspace closed form exists for dim 2 only",
                    ));
                }
                let values: Vec<f64> = grid
                    .iter()
                    .map(|&r| subspace_sphere2_closed(r) / (2.0 * r * r) - 1.0)
                    .collect();
                extract_from_values(&grid, &values, -2, 2, orders, a.tol)?
            } else {
                extract_subspace_relative(a.dim, orders, &grid, &cfg, a.tol)?
            };
            for t in e.terms() {
                let predicted =
                    (t.power == -2).then(|| predicted_relative_correction_subspace(a.dim));
                table.push((t.power, t.coefficient, t.error_estimate, predicted));
            }
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["power", "extracted", "error_estimate", "predicted"])?;
    for (power, x, e, p) in table {
        w.write_record([
            power.to_string(),
            format_sig17(x),
            format_sig17(e),
            p.map(format_sig17).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn tube_check(a: TubeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    positive("radius", a.radius)?;
    let (direct, formula) = tube_volume_check(a.dim, a.radius, a.epsilon)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "dim",
        "radius",
        "epsilon",
        "direct",
        "formula",
        "relative_difference",
    ])?;
    w.write_record([
        a.dim.to_string(),
        format_sig17(a.radius),
        format_sig17(a.epsilon),
        format_sig17(direct),
        format_sig17(formula),
        format_sig17(((direct - formula) / direct).abs()),
    ])?;
    w.flush()?;
    Ok(())
}
