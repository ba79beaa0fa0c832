//! Homogeneous magnitude `vol(X) / ∫ exp(-d(x0, x)) dvol(x)` evaluated by
//! quadrature for circles and spheres, plus the integral recurrences behind
//! the sphere closed form.

use crate::quadrature::{
    integrate_adaptive, integrate_split, IntegralResult, QuadratureConfig, QuadratureError,
};
use crate::special::x_over_one_minus_exp_neg;
use crate::sphere::sphere_volume;
use std::f64::consts::PI;

/// Decay rates at or above this split the domain near the origin.
pub const CONCENTRATION_RATE: f64 = 50.0;
/// The split point is `min(π, CONCENTRATION_WIDTH / rate)`.
pub const CONCENTRATION_WIDTH: f64 = 30.0;

/// A derived quantity with a propagated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error_estimate: f64,
}

impl Estimate {
    fn quotient(num: IntegralResult, den: IntegralResult) -> Estimate {
        let value = num.value / den.value;
        let rel = num.error_estimate / num.value.abs() + den.error_estimate / den.value.abs();
        Estimate {
            value,
            error_estimate: value.abs() * rel,
        }
    }
}

/// Integral over `[0, π]` of an integrand decaying like `exp(-rate·r)`.
fn integrate_on_half_turn<F: Fn(f64) -> f64>(
    f: F,
    rate: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError> {
    if rate >= CONCENTRATION_RATE {
        integrate_split(f, 0.0, PI.min(CONCENTRATION_WIDTH / rate), PI, cfg)
    } else {
        integrate_adaptive(f, 0.0, PI, cfg)
    }
}

fn sin_power(r: f64, power: u32) -> f64 {
    r.sin().powi(power as i32)
}

/// `K_n = ∫_0^π sin^{n-1} r dr`.
pub fn sine_power_integral(
    n: u32,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError> {
    assert!(n >= 1, "K_n needs n >= 1");
    integrate_adaptive(|r| sin_power(r, n - 1), 0.0, PI, cfg)
}

/// `I_n(R) = ∫_0^π exp(-rR) sin^{n-1} r dr`.
pub fn damped_sine_power_integral(
    n: u32,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError> {
    assert!(n >= 1, "I_n needs n >= 1");
    integrate_on_half_turn(|r| (-r * radius).exp() * sin_power(r, n - 1), radius, cfg)
}

/// `|S^n_R| = K_n / I_n(R)` for the geodesic metric.
pub fn sphere_magnitude_quadrature(
    n: u32,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadratureError> {
    let k = sine_power_integral(n, cfg)?;
    let i = damped_sine_power_integral(n, radius, cfg)?;
    Ok(Estimate::quotient(k, i))
}

/// `((n+1) K_{n+2} - n K_n, (n+1)((R/(n+1))^2 + 1) I_{n+2} - n I_n)`, all
/// integrals by quadrature. Both vanish exactly.
pub fn recurrence_residuals(
    n: u32,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64), QuadratureError> {
    let m = n as f64;
    let k_n = sine_power_integral(n, cfg)?.value;
    let k_n2 = sine_power_integral(n + 2, cfg)?.value;
    let i_n = damped_sine_power_integral(n, radius, cfg)?.value;
    let i_n2 = damped_sine_power_integral(n + 2, radius, cfg)?.value;
    let q = radius / (m + 1.0);
    Ok((
        (m + 1.0) * k_n2 - m * k_n,
        (m + 1.0) * (q * q + 1.0) * i_n2 - m * i_n,
    ))
}

/// Circle of circumference `l` with the arc-length metric:
/// `l / (2 (1 - e^{-l/2}))`.
pub fn circle_magnitude_closed(circumference: f64) -> f64 {
    x_over_one_minus_exp_neg(circumference / 2.0)
}

/// Circle magnitude with the similarity integral `2∫_0^{l/2} e^{-s} ds`
/// done by quadrature.
pub fn circle_magnitude_quadrature(
    circumference: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadratureError> {
    let half = integrate_adaptive(|s| (-s).exp(), 0.0, circumference / 2.0, cfg)?;
    let den = IntegralResult {
        value: 2.0 * half.value,
        error_estimate: 2.0 * half.error_estimate,
        ..half
    };
    let num = IntegralResult {
        value: circumference,
        error_estimate: 0.0,
        refinements_used: 0,
    };
    Ok(Estimate::quotient(num, den))
}

/// Round 2-sphere with the chordal metric: `2R^2 / (1 - e^{-2R}(1 + 2R))`.
pub fn subspace_sphere2_closed(radius: f64) -> f64 {
    let x = 2.0 * radius;
    // 1 - e^{-x}(1 + x) cancels for small x
    let den = if x < 0.1 {
        series_one_minus_exp_poly(x)
    } else {
        -(-x).exp_m1() - x * (-x).exp()
    };
    2.0 * radius * radius / den
}

/// `1 - e^{-x}(1 + x) = Σ_{k≥2} (-1)^k (k-1) x^k / k!`.
fn series_one_minus_exp_poly(x: f64) -> f64 {
    let mut power_over_fact = x; // x^k / k!
    let mut sum = 0.0;
    for k in 2..20u32 {
        power_over_fact *= x / k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (k - 1) as f64 * power_over_fact;
    }
    sum
}

/// `∫_0^π exp(-2R sin(θ/2)) sin^{n-1} θ dθ`.
pub fn chord_similarity_integral(
    n: u32,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError> {
    assert!(n >= 1, "chord integral needs n >= 1");
    integrate_on_half_turn(
        |t| (-2.0 * radius * (0.5 * t).sin()).exp() * sin_power(t, n - 1),
        radius,
        cfg,
    )
}

/// `n`-sphere of radius `R` with the chordal (subspace) metric:
/// `σ_n / (σ_{n-1} ∫_0^π exp(-2R sin(θ/2)) sin^{n-1}θ dθ)`.
pub fn subspace_sphere_magnitude_quadrature(
    n: u32,
    radius: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadratureError> {
    let den = chord_similarity_integral(n, radius, cfg)?;
    let scale = sphere_volume(n) / sphere_volume(n - 1);
    let value = scale / den.value;
    Ok(Estimate {
        value,
        error_estimate: value * den.error_estimate / den.value.abs(),
    })
}
