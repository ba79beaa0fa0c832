//! Closed forms for round spheres: ball/sphere volumes, the magnitude of the
//! geodesic sphere, its numerator polynomial, intrinsic volumes, scalar
//! curvature, and the tube / geodesic-sphere volume identities.

use crate::special::{binomial, factorial, sinc_minus_one, x_over_one_minus_exp_neg};
use std::f64::consts::PI;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("intrinsic volume index {index} exceeds dimension {dim}")]
    IndexOutOfRange { index: u32, dim: u32 },
    #[error("tube radius {epsilon} must lie in (0, {radius})")]
    EpsilonTooLarge { epsilon: f64, radius: f64 },
}

const TABLE_LEN: usize = 172;

/// Volumes of unit balls `ω_k` and unit spheres `σ_k`, built once from
/// `ω_k = (2π/k) ω_{k-2}` and `σ_k = (2π/(k-1)) σ_{k-2}`.
#[derive(Debug)]
pub struct BallSphereVolumes {
    balls: Vec<f64>,
    spheres: Vec<f64>,
}

impl BallSphereVolumes {
    fn build(len: usize) -> Self {
        let mut balls = vec![1.0, 2.0];
        let mut spheres = vec![2.0, 2.0 * PI];
        for k in 2..len {
            balls.push(2.0 * PI / k as f64 * balls[k - 2]);
            spheres.push(2.0 * PI / (k - 1) as f64 * spheres[k - 2]);
        }
        BallSphereVolumes { balls, spheres }
    }

    pub fn shared() -> &'static BallSphereVolumes {
        static TABLE: OnceLock<BallSphereVolumes> = OnceLock::new();
        TABLE.get_or_init(|| BallSphereVolumes::build(TABLE_LEN))
    }

    pub fn ball(&self, k: u32) -> f64 {
        self.balls.get(k as usize).copied().unwrap_or(0.0)
    }

    pub fn sphere(&self, k: u32) -> f64 {
        self.spheres.get(k as usize).copied().unwrap_or(0.0)
    }
}

/// `ω_k`, volume of the unit `k`-ball.
pub fn ball_volume(k: u32) -> f64 {
    BallSphereVolumes::shared().ball(k)
}

/// `σ_k`, volume of the unit `k`-sphere.
pub fn sphere_volume(k: u32) -> f64 {
    BallSphereVolumes::shared().sphere(k)
}

/// Product `∏ ((R/j)^2 + 1)` over `j = n-1, n-3, …` down to 1 or 2.
fn numerator_factors(n: u32, radius: f64) -> f64 {
    (1..n)
        .rev()
        .step_by(2)
        .map(|j| {
            let q = radius / j as f64;
            q * q + 1.0
        })
        .product()
}

/// Magnitude of the `n`-sphere of radius `R` with its geodesic metric.
///
/// For `n = 0` this is the two-point space at distance `πR`.
pub fn sphere_magnitude_closed(n: u32, radius: f64) -> f64 {
    let x = PI * radius;
    if n.is_multiple_of(2) {
        2.0 * numerator_factors(n, radius) / (1.0 + (-x).exp())
    } else {
        // πR / (1 - e^{-πR})
        x_over_one_minus_exp_neg(x) * numerator_factors(n, radius)
    }
}

/// `|S^{n+2}_R| - ((R/(n+1))^2 + 1) |S^n_R|`.
pub fn recurrence_step_check(n: u32, radius: f64) -> f64 {
    let q = radius / (n + 1) as f64;
    sphere_magnitude_closed(n + 2, radius) - (q * q + 1.0) * sphere_magnitude_closed(n, radius)
}

/// Numerator polynomial of [`sphere_magnitude_closed`] in the radius.
///
/// Only powers with the parity of `n` are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePolynomial {
    n: u32,
    /// `coeffs[k]` multiplies `R^{(n mod 2) + 2k}`.
    coeffs: Vec<f64>,
}

impl SpherePolynomial {
    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Coefficient of `R^power`; zero for the wrong parity or out of range.
    pub fn coefficient(&self, power: u32) -> f64 {
        if power > self.n || power % 2 != self.n % 2 {
            return 0.0;
        }
        self.coeffs[((power - self.n % 2) / 2) as usize]
    }

    pub fn leading(&self) -> f64 {
        self.coefficient(self.n)
    }

    pub fn constant(&self) -> f64 {
        self.coefficient(0)
    }

    /// `(power, coefficient)` from the top down.
    pub fn terms(&self) -> Vec<(u32, f64)> {
        (0..=self.n)
            .rev()
            .filter(|p| p % 2 == self.n % 2)
            .map(|p| (p, self.coefficient(p)))
            .collect()
    }

    pub fn eval(&self, radius: f64) -> f64 {
        let r2 = radius * radius;
        let even = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r2 + c);
        if self.n % 2 == 1 {
            even * radius
        } else {
            even
        }
    }
}

/// Expands `2 ∏((R/j)^2+1)` (even `n`) or `πR ∏((R/j)^2+1)` (odd `n`).
pub fn numerator_polynomial(n: u32) -> SpherePolynomial {
    // coefficients in R^2, multiplied by R for odd n at evaluation
    let mut coeffs = vec![if n.is_multiple_of(2) { 2.0 } else { PI }];
    for j in (1..n).rev().step_by(2) {
        let a = 1.0 / (j as f64 * j as f64);
        let mut next = vec![0.0; coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k] += c;
            next[k + 1] += a * c;
        }
        coeffs = next;
    }
    SpherePolynomial { n, coeffs }
}

/// `μ_i` of the radius-`R` round `n`-sphere:
/// `(2σ_n/σ_{n-i}) C(n,i) R^i` when `n - i` is even, else 0.
pub fn intrinsic_volume_sphere(i: u32, n: u32, radius: f64) -> Result<f64, SphereError> {
    if i > n {
        return Err(SphereError::IndexOutOfRange { index: i, dim: n });
    }
    if (n - i) % 2 == 1 {
        return Ok(0.0);
    }
    Ok(2.0 * sphere_volume(n) / sphere_volume(n - i) * binomial(n, i) * radius.powi(i as i32))
}

fn mu(i: u32, n: u32, radius: f64) -> f64 {
    intrinsic_volume_sphere(i, n, radius).unwrap_or(0.0)
}

/// Residuals of the leading and first subleading coefficients of
/// [`numerator_polynomial`] against `σ_n/(n! ω_n)` and
/// `(n+1)/(3(n-1)) · μ_{n-2}(S^n_1)/((n-2)! ω_{n-2})`.
pub fn leading_and_subleading_check(n: u32) -> (f64, f64) {
    assert!(n >= 2, "subleading coefficient needs n >= 2");
    let p = numerator_polynomial(n);
    let lead = sphere_volume(n) / (factorial(n) * ball_volume(n));
    let sub = (n + 1) as f64 / (3.0 * (n - 1) as f64) * mu(n - 2, n, 1.0)
        / (factorial(n - 2) * ball_volume(n - 2));
    (p.coefficient(n) - lead, p.coefficient(n - 2) - sub)
}

/// Scalar curvature `n(n-1)/R^2` of the round sphere.
pub fn scalar_curvature_sphere(n: u32, radius: f64) -> f64 {
    n as f64 * (n as f64 - 1.0) / (radius * radius)
}

/// Total scalar curvature: curvature times volume `σ_n R^n`.
pub fn tsc_sphere(n: u32, radius: f64) -> f64 {
    scalar_curvature_sphere(n, radius) * sphere_volume(n) * radius.powi(n as i32)
}

/// `Σ_i μ_i / (i! ω_i)` for the round `n`-sphere.
pub fn penguin_valuation_sphere(n: u32, radius: f64) -> f64 {
    (0..=n)
        .map(|i| mu(i, n, radius) / (factorial(i) * ball_volume(i)))
        .sum()
}

/// Volume of the `ε`-neighbourhood of the radius-`R` sphere in `R^{n+1}`,
/// computed directly as a spherical shell and as `Σ μ_{n+1-i} ω_i ε^i`.
/// Returns `(direct, tube_formula)`.
pub fn tube_volume_check(n: u32, radius: f64, epsilon: f64) -> Result<(f64, f64), SphereError> {
    if !(epsilon > 0.0 && epsilon < radius) {
        return Err(SphereError::EpsilonTooLarge { epsilon, radius });
    }
    let big = n + 1;
    let direct = ball_volume(big)
        * ((radius + epsilon).powi(big as i32) - (radius - epsilon).powi(big as i32));
    let formula = (0..=big)
        .map(|i| {
            // an n-manifold has no (n+1)-volume
            let m = if i == 0 { 0.0 } else { mu(big - i, n, radius) };
            m * ball_volume(i) * epsilon.powi(i as i32)
        })
        .sum();
    Ok((direct, formula))
}

/// `σ_{n-1}(R sin(r/R))^{n-1} - σ_{n-1} r^{n-1}(1 - τ r^2/(6n))`, which is
/// `O(r^{n+3})` as `r → 0`.
///
/// The difference is formed as `r^{n-1}((sin x / x)^{n-1} - 1 + τr²/(6n))`
/// with `x = r/R` so that it stays accurate for small `r`.
pub fn geodesic_sphere_expansion_check(n: u32, radius: f64, r: f64) -> f64 {
    assert!(n >= 1, "geodesic spheres need n >= 1");
    let x = r / radius;
    let tau = scalar_curvature_sphere(n, radius);
    let m = (n - 1) as f64;
    let power_minus_one = (m * sinc_minus_one(x).ln_1p()).exp_m1();
    sphere_volume(n - 1) * r.powi(n as i32 - 1) * (power_minus_one + tau * r * r / (6.0 * n as f64))
}
