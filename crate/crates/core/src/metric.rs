//! Finite metric spaces and their magnitude via the weight equation.

use crate::linalg::{mat_vec, LinalgError, Lu};
use crate::par::{self, Execution};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("entry ({row}, {col}) is not a finite number")]
    NonFinite { row: usize, col: usize },
    #[error("diagonal entry ({index}, {index}) is {value}, expected 0")]
    NonzeroDiagonal { index: usize, value: f64 },
    #[error("d({row}, {col}) = {forward} but d({col}, {row}) = {backward}")]
    Asymmetric {
        row: usize,
        col: usize,
        forward: f64,
        backward: f64,
    },
    #[error("d({row}, {col}) = {value}; distinct points need positive distance")]
    NonpositiveDistance { row: usize, col: usize, value: f64 },
    #[error("triangle inequality fails: d({i}, {k}) > d({i}, {j}) + d({j}, {k})")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("labels: {labels} given for {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("points have inconsistent dimension at point {index}")]
    RaggedPoints { index: usize },
    #[error("scale factor must be positive, got {0}")]
    NonpositiveScale(f64),
    #[error("similarity row sums differ by {spread} (> {tol}); space is not homogeneous")]
    NotHomogeneous { spread: f64, tol: f64 },
    #[error("singular weight equation: reciprocal condition {rcond:e}, residual {residual:e}, tolerance {tol:e}")]
    SingularSystem { rcond: f64, residual: f64, tol: f64 },
}

/// A finite metric space held as a dense distance matrix.
///
/// Distances are stored as `factor * base[i][j]`; [`FiniteMetricSpace::scale`]
/// only touches the factor so repeated scaling composes without re-rounding
/// the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    base: Vec<f64>,
    factor: f64,
    labels: Option<Vec<String>>,
}

/// Relative slack in the triangle-inequality check, for distances computed
/// from coordinates.
const TRIANGLE_SLACK: f64 = 1e-12;

impl FiniteMetricSpace {
    /// Builds a space from rows of a distance matrix, checking every axiom
    /// including the triangle inequality.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        Self::with_options(rows, None, true)
    }

    /// Like [`new`](Self::new); `check_triangle = false` skips the cubic
    /// triangle-inequality pass.
    pub fn with_options(
        rows: Vec<Vec<f64>>,
        labels: Option<Vec<String>>,
        check_triangle: bool,
    ) -> Result<Self, MetricError> {
        let n = rows.len();
        let mut base = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            base.extend_from_slice(r);
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(MetricError::LabelCount {
                    labels: l.len(),
                    points: n,
                });
            }
        }
        validate(&base, n)?;
        if check_triangle {
            check_triangle_inequality(&base, n)?;
        }
        Ok(FiniteMetricSpace {
            n,
            base,
            factor: 1.0,
            labels,
        })
    }

    /// Euclidean distances between points given by coordinates.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self, MetricError> {
        let n = points.len();
        let dim = points.first().map_or(0, Vec::len);
        if let Some(index) = points.iter().position(|p| p.len() != dim) {
            return Err(MetricError::RaggedPoints { index });
        }
        let mut base = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                base[i * n + j] = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
            }
        }
        validate(&base, n)?;
        Ok(FiniteMetricSpace {
            n,
            base,
            factor: 1.0,
            labels: None,
        })
    }

    /// Points on the real line with `d(x, y) = |x - y|`.
    pub fn from_line_points(xs: &[f64]) -> Result<Self, MetricError> {
        let n = xs.len();
        let mut base = vec![0.0; n * n];
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in xs.iter().enumerate() {
                base[i * n + j] = (x - y).abs();
            }
        }
        validate(&base, n)?;
        Ok(FiniteMetricSpace {
            n,
            base,
            factor: 1.0,
            labels: None,
        })
    }

    /// `n` equally spaced points on a circle of circumference `circumference`
    /// with the arc-length metric.
    pub fn circle_points(circumference: f64, n: usize) -> Result<Self, MetricError> {
        let step = circumference / n as f64;
        let mut base = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let k = i.abs_diff(j);
                base[i * n + j] = k.min(n - k) as f64 * step;
            }
        }
        validate(&base, n)?;
        Ok(FiniteMetricSpace {
            n,
            base,
            factor: 1.0,
            labels: None,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.factor * self.base[i * self.n + j]
    }

    /// The scaled distance matrix, row-major.
    pub fn distances(&self) -> Vec<f64> {
        self.base.iter().map(|d| self.factor * d).collect()
    }

    /// Every distance multiplied by `t`.
    pub fn scale(&self, t: f64) -> Result<Self, MetricError> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(MetricError::NonpositiveScale(t));
        }
        Ok(FiniteMetricSpace {
            factor: self.factor * t,
            ..self.clone()
        })
    }

    /// The same space with points reordered: point `i` of the result is point
    /// `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let n = self.n;
        assert_eq!(order.len(), n, "permutation length");
        let mut base = vec![0.0; n * n];
        for (i, &oi) in order.iter().enumerate() {
            for (j, &oj) in order.iter().enumerate() {
                base[i * n + j] = self.base[oi * n + oj];
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| order.iter().map(|&o| l[o].clone()).collect());
        FiniteMetricSpace {
            n,
            base,
            factor: self.factor,
            labels,
        }
    }

    /// Smallest distance between distinct points, `+inf` for fewer than two.
    pub fn min_separation(&self) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    m = m.min(self.distance(i, j));
                }
            }
        }
        m
    }
}

fn validate(base: &[f64], n: usize) -> Result<(), MetricError> {
    for i in 0..n {
        for j in 0..n {
            let v = base[i * n + j];
            if !v.is_finite() {
                return Err(MetricError::NonFinite { row: i, col: j });
            }
            if i == j {
                if v != 0.0 {
                    return Err(MetricError::NonzeroDiagonal { index: i, value: v });
                }
            } else {
                let w = base[j * n + i];
                if v != w {
                    return Err(MetricError::Asymmetric {
                        row: i,
                        col: j,
                        forward: v,
                        backward: w,
                    });
                }
                if v <= 0.0 {
                    return Err(MetricError::NonpositiveDistance {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
    }
    Ok(())
}

fn check_triangle_inequality(base: &[f64], n: usize) -> Result<(), MetricError> {
    for i in 0..n {
        for j in 0..n {
            let dij = base[i * n + j];
            for k in 0..n {
                let through = dij + base[j * n + k];
                if base[i * n + k] > through * (1.0 + TRIANGLE_SLACK) {
                    return Err(MetricError::TriangleViolation { i, j, k });
                }
            }
        }
    }
    Ok(())
}

/// A solution of `Z w = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weighting {
    pub weights: Vec<f64>,
    /// `max_i |(Z w)_i - 1|`.
    pub residual_norm: f64,
    /// Reciprocal 1-norm condition estimate of `Z`.
    pub rcond: f64,
}

impl Weighting {
    /// Sum of the weights, i.e. the magnitude.
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `Z[i][j] = exp(-d(i, j))`, row-major.
pub fn similarity_matrix(space: &FiniteMetricSpace) -> Vec<f64> {
    similarity_matrix_with(space, Execution::default())
}

pub fn similarity_matrix_with(space: &FiniteMetricSpace, exec: Execution) -> Vec<f64> {
    let n = space.n;
    let mut z = vec![0.0; n * n];
    par::for_each_row(exec, &mut z, n, |i, row| {
        for (j, zij) in row.iter_mut().enumerate() {
            *zij = (-space.distance(i, j)).exp();
        }
    });
    z
}

/// Solves the weight equation. Fails with `SingularSystem` when the
/// reciprocal condition estimate falls below `tol` or the residual exceeds it.
pub fn weighting(space: &FiniteMetricSpace, tol: f64) -> Result<Weighting, MetricError> {
    weighting_with(space, tol, Execution::default())
}

pub fn weighting_with(
    space: &FiniteMetricSpace,
    tol: f64,
    exec: Execution,
) -> Result<Weighting, MetricError> {
    let n = space.n;
    let z = similarity_matrix_with(space, exec);
    let singular = |rcond: f64, residual: f64| MetricError::SingularSystem {
        rcond,
        residual,
        tol,
    };
    let lu = match Lu::factor(&z, n, exec) {
        Ok(lu) => lu,
        Err(LinalgError::ZeroPivot { .. }) | Err(LinalgError::Shape { .. }) => {
            return Err(singular(0.0, f64::INFINITY))
        }
    };
    let rcond = lu.reciprocal_condition();
    if rcond < tol {
        return Err(singular(rcond, f64::NAN));
    }
    let ones = vec![1.0; n];
    let mut w = lu.solve(&ones);
    let mut residual = residual_vector(&z, n, &w);
    // one step of iterative refinement
    let correction = lu.solve(&residual);
    for (wi, ci) in w.iter_mut().zip(&correction) {
        *wi += ci;
    }
    residual = residual_vector(&z, n, &w);
    let residual_norm = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    if !(residual_norm <= tol) {
        return Err(singular(rcond, residual_norm));
    }
    Ok(Weighting {
        weights: w,
        residual_norm,
        rcond,
    })
}

fn residual_vector(z: &[f64], n: usize, w: &[f64]) -> Vec<f64> {
    mat_vec(z, n, w).into_iter().map(|v| 1.0 - v).collect()
}

/// Magnitude as the sum of a weighting.
pub fn magnitude_finite(space: &FiniteMetricSpace, tol: f64) -> Result<f64, MetricError> {
    weighting(space, tol).map(|w| w.total())
}

/// Row sums of the similarity matrix.
pub fn similarity_row_sums(space: &FiniteMetricSpace) -> Vec<f64> {
    (0..space.n)
        .map(|i| (0..space.n).map(|j| (-space.distance(i, j)).exp()).sum())
        .collect()
}

fn row_sum_spread(space: &FiniteMetricSpace) -> f64 {
    let sums = similarity_row_sums(space);
    let max = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = sums.iter().copied().fold(f64::INFINITY, f64::min);
    if sums.is_empty() {
        0.0
    } else {
        max - min
    }
}

/// Whether all similarity row sums agree within `tol`, a necessary
/// condition for homogeneity.
pub fn is_homogeneous_rows(space: &FiniteMetricSpace, tol: f64) -> bool {
    row_sum_spread(space) <= tol
}

/// `n / sum_j exp(-d(0, j))`, valid when every row sum is the same.
pub fn magnitude_homogeneous_finite(
    space: &FiniteMetricSpace,
    tol: f64,
) -> Result<f64, MetricError> {
    let spread = row_sum_spread(space);
    if spread > tol {
        return Err(MetricError::NotHomogeneous { spread, tol });
    }
    if space.n == 0 {
        return Ok(0.0);
    }
    let row0: f64 = (0..space.n).map(|j| (-space.distance(0, j)).exp()).sum();
    Ok(space.n as f64 / row0)
}
