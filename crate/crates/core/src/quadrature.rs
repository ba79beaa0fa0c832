//! Composite Gauss-Legendre quadrature with uniform panel bisection.
//!
//! Level `k` integrates with `2^k` equal panels; the error estimate is the
//! difference between consecutive levels, which bounds the error of the
//! coarser level once the rule is in its asymptotic regime.

use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
    #[error("no convergence after {refinements} refinements: value {value}, error estimate {estimate:e}")]
    NoConvergence {
        value: f64,
        estimate: f64,
        refinements: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Gauss-Legendre nodes per panel.
    pub panel_order: usize,
    pub max_refinements: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            panel_order: 15,
            max_refinements: 20,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureConfig {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(QuadratureError::InvalidConfig(
                "tolerances must be positive".into(),
            ));
        }
        if self.panel_order < 4 {
            return Err(QuadratureError::InvalidConfig(
                "panel_order must be at least 4".into(),
            ));
        }
        if self.max_refinements < 1 {
            return Err(QuadratureError::InvalidConfig(
                "max_refinements must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub refinements_used: u32,
}

impl IntegralResult {
    fn zero() -> Self {
        IntegralResult {
            value: 0.0,
            error_estimate: 0.0,
            refinements_used: 0,
        }
    }

    /// Sum of two results over adjacent ranges.
    pub fn combine(self, other: IntegralResult) -> IntegralResult {
        IntegralResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            refinements_used: self.refinements_used.max(other.refinements_used),
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(order, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    fn composite<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        panels: usize,
    ) -> Result<f64, QuadratureError> {
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let left = a + p as f64 * h;
            let mid = left + 0.5 * h;
            let mut s = 0.0;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let t = mid + 0.5 * h * x;
                let v = f(t);
                if !v.is_finite() {
                    return Err(QuadratureError::NonFinite(t));
                }
                s += w * v;
            }
            total += 0.5 * h * s;
        }
        Ok(total)
    }
}

/// `∫_a^b f`, refining until consecutive levels agree within
/// `max(rel_tol·|value|, abs_tol)`. At least two bisections are compared.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(QuadratureError::InvalidInterval { a, b });
    }
    if a == b {
        return Ok(IntegralResult::zero());
    }
    let (nodes, weights) = gauss_legendre(cfg.panel_order);
    let rule = Rule { nodes, weights };
    let mut previous = rule.composite(&f, a, b, 1)?;
    let mut estimate = f64::INFINITY;
    let mut current = previous;
    for level in 1..=cfg.max_refinements {
        current = rule.composite(&f, a, b, 1usize << level)?;
        estimate = (current - previous).abs();
        if level >= 2.min(cfg.max_refinements)
            && estimate <= (cfg.rel_tol * current.abs()).max(cfg.abs_tol)
        {
            return Ok(IntegralResult {
                value: current,
                error_estimate: estimate,
                refinements_used: level,
            });
        }
        previous = current;
    }
    Err(QuadratureError::NoConvergence {
        value: current,
        estimate,
        refinements: cfg.max_refinements,
    })
}

/// Integral over `[a, b]` split at `split` (clamped into the interval).
pub fn integrate_split<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    split: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError> {
    let split = split.clamp(a, b);
    let left = integrate_adaptive(&f, a, split, cfg)?;
    let right = integrate_adaptive(&f, split, b, cfg)?;
    Ok(left.combine(right))
}
