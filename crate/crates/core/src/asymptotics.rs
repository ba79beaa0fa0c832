//! Large-scale asymptotics of magnitude: Watson's lemma partial sums,
//! predicted expansions for spheres and numerical coefficient extraction.

use crate::homogeneous::subspace_sphere_magnitude_quadrature;
use crate::par::{self, Execution};
use crate::quadrature::{integrate_adaptive, IntegralResult, QuadratureConfig, QuadratureError};
use crate::special::factorial;
use crate::sphere::{ball_volume, intrinsic_volume_sphere, sphere_magnitude_closed, sphere_volume};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("germ needs at least one coefficient and a positive cutoff")]
    InvalidGerm,
    #[error("expansion powers must strictly decrease and stay above the error order")]
    InvalidExpansion,
    #[error("t grid must be positive, strictly increasing and hold at least {needed} points (got {got})")]
    InvalidGrid { needed: usize, got: usize },
    #[error("function is not finite at t = {0}")]
    NonFinite(f64),
    #[error("ill-conditioned fit for t^{power}: extrapolation spread {spread:e} exceeds {tol:e}")]
    IllConditionedFit { power: i32, spread: f64, tol: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Taylor coefficients `α_0..α_N` of `g` at 0 and the cutoff `c` of
/// `∫_0^c e^{-tr} g(r) dr`.
#[derive(Debug, Clone, PartialEq)]
pub struct GermExpansion {
    coefficients: Vec<f64>,
    cutoff: f64,
}

impl GermExpansion {
    pub fn new(coefficients: Vec<f64>, cutoff: f64) -> Result<Self, AsymptoticsError> {
        if coefficients.is_empty() || !(cutoff > 0.0) || coefficients.iter().any(|c| !c.is_finite())
        {
            return Err(AsymptoticsError::InvalidGerm);
        }
        Ok(GermExpansion {
            coefficients,
            cutoff,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// The truncated germ `Σ α_i r^i` as a polynomial.
    pub fn eval(&self, r: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c)
    }
}

/// `Σ_{i=0}^{N} i! α_i / t^{i+1}`.
pub fn watson_partial_sum(germ: &GermExpansion, t: f64) -> f64 {
    assert!(t > 0.0, "Watson sums need t > 0");
    germ.coefficients
        .iter()
        .enumerate()
        .map(|(i, a)| factorial(i as u32) * a / t.powi(i as i32 + 1))
        .sum()
}

/// `∫_0^c e^{-tr} g(r) dr` for the polynomial germ, by quadrature.
pub fn watson_quadrature(
    germ: &GermExpansion,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError> {
    integrate_adaptive(|r| (-t * r).exp() * germ.eval(r), 0.0, germ.cutoff, cfg)
}

/// One `coefficient · t^power` term with an error bar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    pub power: i32,
    pub coefficient: f64,
    pub error_estimate: f64,
}

/// `Σ c_k t^{p_k} + O(t^{error_order})` with strictly decreasing powers.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticExpansion {
    terms: Vec<ExpansionTerm>,
    error_order: i32,
}

impl AsymptoticExpansion {
    pub fn new(terms: Vec<ExpansionTerm>, error_order: i32) -> Result<Self, AsymptoticsError> {
        let decreasing = terms.windows(2).all(|w| w[0].power > w[1].power);
        let above = terms.last().is_none_or(|t| t.power > error_order);
        if !decreasing || !above {
            return Err(AsymptoticsError::InvalidExpansion);
        }
        Ok(AsymptoticExpansion { terms, error_order })
    }

    pub fn terms(&self) -> &[ExpansionTerm] {
        &self.terms
    }

    pub fn error_order(&self) -> i32 {
        self.error_order
    }

    /// Coefficient of `t^power`, zero if the power is not listed.
    pub fn coefficient(&self, power: i32) -> f64 {
        self.terms
            .iter()
            .find(|t| t.power == power)
            .map_or(0.0, |t| t.coefficient)
    }

    pub fn term(&self, power: i32) -> Option<&ExpansionTerm> {
        self.terms.iter().find(|t| t.power == power)
    }
}

fn exact(power: i32, coefficient: f64) -> ExpansionTerm {
    ExpansionTerm {
        power,
        coefficient,
        error_estimate: 0.0,
    }
}

/// Predicted `t^n`, `t^{n-1}`, `t^{n-2}` coefficients of `|t S^n_1|`:
/// `μ_n/(n! ω_n)`, 0 and `(n+1) μ_{n-2}/(3 (n-1)! ω_{n-2})`.
pub fn predicted_expansion_intrinsic_sphere(n: u32) -> AsymptoticExpansion {
    assert!(n >= 2, "predicted expansion needs n >= 2");
    let p = n as i32;
    let lead = sphere_volume(n) / (factorial(n) * ball_volume(n));
    let mu = intrinsic_volume_sphere(n - 2, n, 1.0).expect("n - 2 <= n");
    let sub = (n + 1) as f64 * mu / (3.0 * factorial(n - 1) * ball_volume(n - 2));
    AsymptoticExpansion::new(
        vec![exact(p, lead), exact(p - 1, 0.0), exact(p - 2, sub)],
        p - 4,
    )
    .expect("powers decrease")
}

/// Predicted `R^{-2}` coefficient of `|S^n_{sub,R}| / (Vol(S^n_R)/(n! ω_n))`:
/// `(n+1) n (n-2) / 8`.
pub fn predicted_relative_correction_subspace(n: u32) -> f64 {
    assert!(n >= 2, "relative correction needs n >= 2");
    let m = n as f64;
    (m + 1.0) * m * (m - 2.0) / 8.0
}

/// The geodesic-metric analogue `(n+1) n (n-1) / 6`.
pub fn predicted_relative_correction_intrinsic(n: u32) -> f64 {
    assert!(n >= 2, "relative correction needs n >= 2");
    let m = n as f64;
    (m + 1.0) * m * (m - 1.0) / 6.0
}

/// Neville tableau for the value at `x = 0` of the interpolant through
/// `(xs[i], ys[i])`. Returns the full-order extrapolant and the spread
/// between it and the next-highest-order one.
fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len();
    // row i holds T[i][j] for j <= i, the interpolant through points i-j..=i
    let mut prev: Vec<f64> = ys.to_vec();
    let mut best_lower = ys[m - 1];
    for j in 1..m {
        let mut next = vec![0.0; m];
        for i in j..m {
            let (xa, xb) = (xs[i - j], xs[i]);
            next[i] = (xa * prev[i] - xb * prev[i - 1]) / (xa - xb);
        }
        if j == m - 1 {
            return (next[m - 1], (next[m - 1] - best_lower).abs());
        }
        best_lower = next[m - 1];
        prev = next;
    }
    (ys[0], f64::INFINITY)
}

/// Sequential stripping of `f(t) ~ Σ_k c_k t^{p - k·step}`.
///
/// For each power `q` in turn, `(f(t) - known terms) / t^q` is extrapolated
/// to `t = ∞` in the variable `(1/t)^step` over the whole grid. Each
/// coefficient carries the spread between the two highest-order
/// extrapolants; a spread above `tol` is an [`AsymptoticsError::IllConditionedFit`].
pub fn extract_coefficients<F>(
    f: F,
    leading_power: i32,
    step: u32,
    count: usize,
    t_grid: &[f64],
    tol: f64,
) -> Result<AsymptoticExpansion, AsymptoticsError>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let values = par::map(Execution::default(), t_grid, |&t| f(t));
    extract_from_values(t_grid, &values, leading_power, step, count, tol)
}

/// [`extract_coefficients`] on precomputed samples `values[i] = f(t_grid[i])`.
pub fn extract_from_values(
    t_grid: &[f64],
    values: &[f64],
    leading_power: i32,
    step: u32,
    count: usize,
    tol: f64,
) -> Result<AsymptoticExpansion, AsymptoticsError> {
    let needed = count + 2;
    let valid = t_grid.len() >= needed
        && values.len() == t_grid.len()
        && step >= 1
        && count >= 1
        && t_grid[0] > 0.0
        && t_grid.windows(2).all(|w| w[0] < w[1]);
    if !valid {
        return Err(AsymptoticsError::InvalidGrid {
            needed,
            got: t_grid.len(),
        });
    }
    if let Some((&t, _)) = t_grid.iter().zip(values).find(|(_, v)| !v.is_finite()) {
        return Err(AsymptoticsError::NonFinite(t));
    }
    let xs: Vec<f64> = t_grid.iter().map(|t| t.recip().powi(step as i32)).collect();
    let mut terms: Vec<ExpansionTerm> = Vec::with_capacity(count);
    for k in 0..count {
        let power = leading_power - (k as i32) * step as i32;
        let ys: Vec<f64> = t_grid
            .iter()
            .zip(values)
            .map(|(&t, &v)| {
                let known: f64 = terms
                    .iter()
                    .map(|term| term.coefficient * t.powi(term.power))
                    .sum();
                (v - known) / t.powi(power)
            })
            .collect();
        let (coefficient, spread) = extrapolate_to_zero(&xs, &ys);
        if !(spread <= tol) {
            return Err(AsymptoticsError::IllConditionedFit { power, spread, tol });
        }
        terms.push(ExpansionTerm {
            power,
            coefficient,
            error_estimate: spread,
        });
    }
    let error_order = leading_power - (count as i32) * step as i32;
    AsymptoticExpansion::new(terms, error_order)
}

/// Extracted `t^n`, `t^{n-1}`, `t^{n-2}` terms of a sphere magnitude function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntrinsicExtraction {
    pub leading: ExpansionTerm,
    pub gap: ExpansionTerm,
    pub subleading: ExpansionTerm,
}

/// Extracts the three predicted terms of `f(t) = |t S^n_1|`.
///
/// The `t^n` and `t^{n-2}` terms come from a parity-aware fit in `1/t^2`.
/// The `t^{n-1}` term is then fitted in `1/t` from `f - c_n t^n`, so a
/// nonzero value would show up rather than being assumed away.
pub fn extract_intrinsic_expansion<F>(
    n: u32,
    f: F,
    t_grid: &[f64],
    tol: f64,
) -> Result<IntrinsicExtraction, AsymptoticsError>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    assert!(n >= 2, "extraction needs n >= 2");
    let p = n as i32;
    let values = par::map(Execution::default(), t_grid, |&t| f(t));
    let even = extract_from_values(t_grid, &values, p, 2, 2, tol)?;
    let leading = even.terms()[0];
    let subleading = even.terms()[1];
    let stripped: Vec<f64> = t_grid
        .iter()
        .zip(&values)
        .map(|(&t, &v)| v - leading.coefficient * t.powi(p))
        .collect();
    let odd = extract_from_values(t_grid, &stripped, p - 1, 1, 1, tol)?;
    Ok(IntrinsicExtraction {
        leading,
        gap: odd.terms()[0],
        subleading,
    })
}

/// [`extract_intrinsic_expansion`] applied to the closed-form sphere magnitude.
pub fn extract_intrinsic_sphere(
    n: u32,
    t_grid: &[f64],
    tol: f64,
) -> Result<IntrinsicExtraction, AsymptoticsError> {
    extract_intrinsic_expansion(n, |t| sphere_magnitude_closed(n, t), t_grid, tol)
}

/// `|S^n_{sub,R}| / (σ_n R^n / (n! ω_n))`, the subspace magnitude relative to
/// its leading volume term.
pub fn subspace_relative_magnitude(
    n: u32,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, QuadratureError> {
    let m = subspace_sphere_magnitude_quadrature(n, radius, cfg)?.value;
    let leading = sphere_volume(n) * radius.powi(n as i32) / (factorial(n) * ball_volume(n));
    Ok(m / leading)
}

/// Extracts `count` coefficients of `R^{-2}, R^{-4}, …` in the relative
/// subspace magnitude minus one. Quadrature runs over the grid in parallel.
pub fn extract_subspace_relative(
    n: u32,
    count: usize,
    r_grid: &[f64],
    cfg: &QuadratureConfig,
    tol: f64,
) -> Result<AsymptoticExpansion, AsymptoticsError> {
    let values = par::try_map(Execution::default(), r_grid, |&r| {
        subspace_relative_magnitude(n, r, cfg).map(|v| v - 1.0)
    })?;
    extract_from_values(r_grid, &values, -2, 2, count, tol)
}

/// `|S^2_R| - (2R^2 + 2)`: area over `2π` plus Euler characteristic leaves
/// an exponentially small remainder on the round sphere.
pub fn surface_asymptotics_residual(radius: f64) -> f64 {
    sphere_magnitude_closed(2, radius) - (2.0 * radius * radius + 2.0)
}

/// `points` values from `start` to `stop` with constant ratio.
pub fn geometric_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    assert!(
        points >= 2 && start > 0.0 && stop > start,
        "invalid geometric grid"
    );
    let ratio = (stop / start).ln() / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i + 1 == points {
                stop
            } else {
                start * (ratio * i as f64).exp()
            }
        })
        .collect()
}
