//! Dense LU factorization with partial pivoting and a 1-norm condition
//! estimate.
//!
//! Similarity matrices of arbitrary finite metric spaces are symmetric but
//! may be indefinite, so Cholesky is not an option.

use crate::par::{self, Execution};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square: {len} entries for dimension {n}")]
    Shape { n: usize, len: usize },
    #[error("zero pivot at column {column}")]
    ZeroPivot { column: usize },
}

/// `P A = L U`, stored packed in one row-major buffer.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    /// `perm[i]` is the original row placed at position `i`.
    perm: Vec<usize>,
    norm1: f64,
}

impl Lu {
    /// Factors the row-major `n x n` matrix `a`.
    pub fn factor(a: &[f64], n: usize, exec: Execution) -> Result<Self, LinalgError> {
        if a.len() != n * n {
            return Err(LinalgError::Shape { n, len: a.len() });
        }
        let norm1 = one_norm(a, n);
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (pivot_row, pivot_abs) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot_abs == 0.0 || !pivot_abs.is_finite() {
                return Err(LinalgError::ZeroPivot { column: k });
            }
            if pivot_row != k {
                for j in 0..n {
                    lu.swap(k * n + j, pivot_row * n + j);
                }
                perm.swap(k, pivot_row);
            }

            let (head, tail) = lu.split_at_mut((k + 1) * n);
            let pivot = &head[k * n..];
            let pivot_value = pivot[k];
            par::for_each_row(exec, tail, n, |_, row| {
                let factor = row[k] / pivot_value;
                row[k] = factor;
                if factor != 0.0 {
                    for (x, &p) in row[k + 1..].iter_mut().zip(&pivot[k + 1..n]) {
                        *x -= factor * p;
                    }
                }
            });
        }
        Ok(Lu { n, lu, perm, norm1 })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: f64 = row.iter().zip(&x[..i]).map(|(l, y)| l * y).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let s: f64 = row[i + 1..]
                .iter()
                .zip(&x[i + 1..])
                .map(|(u, y)| u * y)
                .sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        // U^T z = b
        let mut z = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[j * n + i] * z[j]).sum();
            z[i] = (z[i] - s) / self.lu[i * n + i];
        }
        // L^T y = z
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[j * n + i] * z[j]).sum();
            z[i] -= s;
        }
        // x = P^T y
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        x
    }

    /// Estimate of `1 / (||A||_1 ||A^{-1}||_1)` by Hager's method with
    /// Higham's alternating-sign safeguard.
    pub fn reciprocal_condition(&self) -> f64 {
        let n = self.n;
        if n == 0 {
            return 1.0;
        }
        let inv_norm = self.inverse_norm1_estimate();
        if self.norm1 == 0.0 || inv_norm == 0.0 {
            return 0.0;
        }
        if !inv_norm.is_finite() {
            return 0.0;
        }
        1.0 / (self.norm1 * inv_norm)
    }

    fn inverse_norm1_estimate(&self) -> f64 {
        let n = self.n;
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0;
        for iter in 0..5 {
            let y = self.solve(&x);
            let y_norm: f64 = y.iter().map(|v| v.abs()).sum();
            if iter > 0 && y_norm <= est {
                break;
            }
            est = y_norm;
            let xi: Vec<f64> = y
                .iter()
                .map(|&v| if v >= 0.0 { 1.0 } else { -1.0 })
                .collect();
            let z = self.solve_transpose(&xi);
            let (j, zj) =
                z.iter().enumerate().fold(
                    (0, -1.0),
                    |b, (i, &v)| if v.abs() > b.1 { (i, v.abs()) } else { b },
                );
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if iter > 0 && zj <= ztx {
                break;
            }
            x.iter_mut().for_each(|v| *v = 0.0);
            x[j] = 1.0;
        }
        let alt: Vec<f64> = (0..n)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                sign * (1.0 + i as f64 / (n.max(2) - 1) as f64)
            })
            .collect();
        let y = self.solve(&alt);
        let alt_est = 2.0 * y.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
        est.max(alt_est)
    }
}

/// Maximum absolute column sum of a row-major square matrix.
pub fn one_norm(a: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `A x` for a row-major square matrix.
pub fn mat_vec(a: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    a.chunks(n)
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}
