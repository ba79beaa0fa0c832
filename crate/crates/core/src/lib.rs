//! Magnitude of metric spaces.
//!
//! The crate computes the magnitude of
//!
//! * finite metric spaces, by solving the weight equation `Z w = 1` with
//!   `Z[i][j] = exp(-d(i, j))` ([`metric`]);
//! * closed subsets of the real line, by exact arithmetic on weight measures
//!   made of point masses and piecewise-constant densities ([`line`]);
//! * homogeneous spaces (circles and round spheres with the geodesic or the
//!   chordal metric), by the homogeneous quotient `vol / ∫ exp(-d(x0, x)) dvol`
//!   evaluated either in closed form ([`sphere`]) or by adaptive quadrature
//!   ([`homogeneous`], [`quadrature`]).
//!
//! [`asymptotics`] extracts large-scale expansion coefficients numerically and
//! compares them with the predicted volume / scalar-curvature / Euler
//! characteristic terms. [`cli`] is the command-line front end.
//!
//! Data-parallel loops (similarity matrices, LU trailing updates, parameter
//! sweeps) run on rayon when the `parallel` feature is enabled (default) and
//! fall back to plain iterators otherwise. Both paths produce bit-identical
//! results.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod homogeneous;
pub mod io;
pub mod linalg;
pub mod line;
pub mod metric;
pub mod par;
pub mod quadrature;
pub mod special;
pub mod sphere;

pub use metric::{FiniteMetricSpace, Weighting};
pub use par::Execution;
pub use quadrature::{IntegralResult, QuadratureConfig};

/// Default relative tolerance for linear solves and series truncation.
pub const DEFAULT_TOL: f64 = 1e-10;
