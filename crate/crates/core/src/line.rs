//! Exact weight measures on closed subsets of the real line.
//!
//! A measure is a finite list of point masses plus constant densities on
//! closed segments. Integrals of `exp(-|x - y|)` against such a measure have
//! elementary closed forms, so nothing here uses quadrature.

use crate::metric::{FiniteMetricSpace, MetricError};
use thiserror::Error;

/// Points closer than this are merged when building finite approximations.
pub const DEDUP_THRESHOLD: f64 = 1e-12;

/// Deepest Cantor stage [`cantor_stage`] will build (`2^14` intervals).
pub const MAX_CANTOR_STAGE: u32 = 14;

/// Tolerance on the `1/2` density required by [`remove_open_interval`].
const HALF_DENSITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LineError {
    #[error("length must be positive and finite, got {0}")]
    NonpositiveLength(f64),
    #[error("tolerance must be positive, got {0}")]
    NonpositiveTolerance(f64),
    #[error("invalid interval [{start}, {end}]")]
    InvalidInterval { start: f64, end: f64 },
    #[error("intervals {0} and {1} are out of order or overlap")]
    Unordered(usize, usize),
    #[error("[{a}, {b}] is not contained in a single carrier interval")]
    NotContained { a: f64, b: f64 },
    #[error("hole ({a}, {b}): {reason}")]
    HypothesisViolated { a: f64, b: f64, reason: String },
    #[error("point {0} is outside the carrier")]
    PointOutsideCarrier(f64),
    #[error("measure is not supported on the carrier: {0}")]
    OutsideCarrier(String),
    #[error("density segments {0} and {1} overlap")]
    OverlappingDensities(usize, usize),
    #[error("need at least 2 grid points, got {0}")]
    TooFewPoints(usize),
    #[error("Cantor stage {depth} exceeds the maximum of {max}")]
    DepthTooLarge { depth: u32, max: u32 },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Result<Self, LineError> {
        if !(start.is_finite() && end.is_finite() && start <= end) {
            return Err(LineError::InvalidInterval { start, end });
        }
        Ok(Interval { start, end })
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, y: f64) -> bool {
        self.start <= y && y <= self.end
    }
}

/// Sorted, pairwise disjoint closed intervals. Point intervals are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSubset {
    intervals: Vec<Interval>,
}

impl LineSubset {
    pub fn new(intervals: Vec<Interval>) -> Result<Self, LineError> {
        for iv in &intervals {
            Interval::new(iv.start, iv.end)?;
        }
        for (i, w) in intervals.windows(2).enumerate() {
            if !(w[0].end < w[1].start) {
                return Err(LineError::Unordered(i, i + 1));
            }
        }
        Ok(LineSubset { intervals })
    }

    /// `[0, length]`.
    pub fn segment(length: f64) -> Result<Self, LineError> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(LineError::NonpositiveLength(length));
        }
        Ok(LineSubset {
            intervals: vec![Interval {
                start: 0.0,
                end: length,
            }],
        })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn contains(&self, y: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(y))
    }

    fn index_containing(&self, a: f64, b: f64) -> Option<usize> {
        self.intervals
            .iter()
            .position(|iv| iv.start <= a && b <= iv.end)
    }

    /// Lebesgue measure of the subset.
    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(Interval::length).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySegment {
    pub interval: Interval,
    /// Mass per unit length.
    pub density: f64,
}

/// Signed measure: point masses plus piecewise-constant density.
///
/// Atoms are kept sorted by location with no two at the same point; density
/// segments are sorted and have positive length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LineWeightMeasure {
    atoms: Vec<Atom>,
    densities: Vec<DensitySegment>,
}

impl LineWeightMeasure {
    /// Validates that every atom and density segment lies in `carrier` and
    /// that density segments do not overlap. Coincident atoms are merged and
    /// zero-length density segments dropped.
    pub fn new(
        carrier: &LineSubset,
        atoms: Vec<Atom>,
        densities: Vec<DensitySegment>,
    ) -> Result<Self, LineError> {
        for a in &atoms {
            if !a.mass.is_finite() || !carrier.contains(a.location) {
                return Err(LineError::OutsideCarrier(format!("atom at {}", a.location)));
            }
        }
        let mut densities: Vec<DensitySegment> = densities
            .into_iter()
            .filter(|d| d.interval.length() > 0.0)
            .collect();
        for d in &densities {
            Interval::new(d.interval.start, d.interval.end)?;
            if !d.density.is_finite()
                || carrier
                    .index_containing(d.interval.start, d.interval.end)
                    .is_none()
            {
                return Err(LineError::OutsideCarrier(format!(
                    "density on [{}, {}]",
                    d.interval.start, d.interval.end
                )));
            }
        }
        densities.sort_by(|a, b| a.interval.start.total_cmp(&b.interval.start));
        for (i, w) in densities.windows(2).enumerate() {
            if w[0].interval.end > w[1].interval.start {
                return Err(LineError::OverlappingDensities(i, i + 1));
            }
        }
        let mut measure = LineWeightMeasure {
            atoms: Vec::new(),
            densities,
        };
        for a in atoms {
            measure.add_atom(a.location, a.mass);
        }
        Ok(measure)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn densities(&self) -> &[DensitySegment] {
        &self.densities
    }

    fn add_atom(&mut self, location: f64, mass: f64) {
        match self
            .atoms
            .binary_search_by(|a| a.location.total_cmp(&location))
        {
            Ok(i) => self.atoms[i].mass += mass,
            Err(i) => self.atoms.insert(i, Atom { location, mass }),
        }
    }
}

/// `[0, l]` with `(δ_0 + δ_l + Lebesgue) / 2`, total mass `1 + l/2`.
pub fn interval_weight_measure(length: f64) -> Result<(LineSubset, LineWeightMeasure), LineError> {
    let space = LineSubset::segment(length)?;
    let measure = LineWeightMeasure {
        atoms: vec![
            Atom {
                location: 0.0,
                mass: 0.5,
            },
            Atom {
                location: length,
                mass: 0.5,
            },
        ],
        densities: vec![DensitySegment {
            interval: Interval {
                start: 0.0,
                end: length,
            },
            density: 0.5,
        }],
    };
    Ok((space, measure))
}

/// Removes the open interval `(a, b)` from the carrier.
///
/// The measure must be exactly half Lebesgue measure on `(a, b)`: no atoms
/// strictly inside and density `1/2` throughout. The result keeps the
/// restriction of the measure and gains mass `tanh((b - a)/2) / 2` at each of
/// `a` and `b`. A degenerate hole `a == b` changes nothing.
pub fn remove_open_interval(
    space: &LineSubset,
    measure: &LineWeightMeasure,
    a: f64,
    b: f64,
) -> Result<(LineSubset, LineWeightMeasure), LineError> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(LineError::InvalidInterval { start: a, end: b });
    }
    let idx = space
        .index_containing(a, b)
        .ok_or(LineError::NotContained { a, b })?;
    if a == b {
        return Ok((space.clone(), measure.clone()));
    }
    let violated = |reason: String| LineError::HypothesisViolated { a, b, reason };

    if let Some(atom) = measure
        .atoms
        .iter()
        .find(|at| a < at.location && at.location < b)
    {
        return Err(violated(format!(
            "atom of mass {} at {}",
            atom.mass, atom.location
        )));
    }
    // density segments meeting (a, b) must be 1/2 and cover it without gaps
    let mut cursor = a;
    for d in measure
        .densities
        .iter()
        .filter(|d| d.interval.end > a && d.interval.start < b)
    {
        if (d.density - 0.5).abs() > HALF_DENSITY_TOL {
            return Err(violated(format!(
                "density {} on [{}, {}]",
                d.density, d.interval.start, d.interval.end
            )));
        }
        if d.interval.start > cursor {
            break;
        }
        cursor = cursor.max(d.interval.end);
    }
    if cursor < b {
        return Err(violated(format!("no density 1/2 on ({cursor}, {b})")));
    }

    let mut intervals = space.intervals.clone();
    let carrier = intervals[idx];
    intervals.splice(
        idx..=idx,
        [
            Interval {
                start: carrier.start,
                end: a,
            },
            Interval {
                start: b,
                end: carrier.end,
            },
        ],
    );

    let mut densities = Vec::with_capacity(measure.densities.len() + 1);
    for d in &measure.densities {
        if d.interval.end <= a || d.interval.start >= b {
            densities.push(*d);
            continue;
        }
        if d.interval.start < a {
            densities.push(DensitySegment {
                interval: Interval {
                    start: d.interval.start,
                    end: a,
                },
                ..*d
            });
        }
        if d.interval.end > b {
            densities.push(DensitySegment {
                interval: Interval {
                    start: b,
                    end: d.interval.end,
                },
                ..*d
            });
        }
    }

    let mut out = LineWeightMeasure {
        atoms: measure.atoms.clone(),
        densities,
    };
    let endpoint_mass = 0.5 * (0.5 * (b - a)).tanh();
    out.add_atom(a, endpoint_mass);
    out.add_atom(b, endpoint_mass);
    Ok((LineSubset { intervals }, out))
}

/// Total mass: atoms plus density times length.
pub fn measure_total_mass(measure: &LineWeightMeasure) -> f64 {
    let atoms: f64 = measure.atoms.iter().map(|a| a.mass).sum();
    let continuous: f64 = measure
        .densities
        .iter()
        .map(|d| d.density * d.interval.length())
        .sum();
    atoms + continuous
}

/// `∫_p^q exp(-|x - y|) dx` in closed form.
fn kernel_integral(p: f64, q: f64, y: f64) -> f64 {
    if y <= p {
        -(y - p).exp() * (p - q).exp_m1()
    } else if y >= q {
        -(q - y).exp() * (p - q).exp_m1()
    } else {
        -(p - y).exp_m1() - (y - q).exp_m1()
    }
}

/// `∫ exp(-|x - y|) dν(x) - 1`; zero everywhere on the carrier exactly when
/// `ν` is a weight measure.
pub fn weight_equation_residual(
    space: &LineSubset,
    measure: &LineWeightMeasure,
    y: f64,
) -> Result<f64, LineError> {
    if !space.contains(y) {
        return Err(LineError::PointOutsideCarrier(y));
    }
    let atoms: f64 = measure
        .atoms
        .iter()
        .map(|a| a.mass * (-(a.location - y).abs()).exp())
        .sum();
    let continuous: f64 = measure
        .densities
        .iter()
        .map(|d| d.density * kernel_integral(d.interval.start, d.interval.end, y))
        .sum();
    Ok(atoms + continuous - 1.0)
}

/// Stage `depth` of the middle-thirds construction on `[0, length]`, with
/// its weight measure obtained by removing every middle third in turn.
pub fn cantor_stage(length: f64, depth: u32) -> Result<(LineSubset, LineWeightMeasure), LineError> {
    if depth > MAX_CANTOR_STAGE {
        return Err(LineError::DepthTooLarge {
            depth,
            max: MAX_CANTOR_STAGE,
        });
    }
    let (mut space, mut measure) = interval_weight_measure(length)?;
    for _ in 0..depth {
        let holes: Vec<(f64, f64)> = space
            .intervals
            .iter()
            .map(|iv| {
                let third = iv.length() / 3.0;
                (iv.start + third, iv.start + 2.0 * third)
            })
            .collect();
        for (a, b) in holes {
            (space, measure) = remove_open_interval(&space, &measure, a, b)?;
        }
    }
    Ok((space, measure))
}

/// Sorted endpoints of the stage-`level` intervals of the middle-thirds
/// construction on `[0, length]`: `2^{level+1}` points.
pub fn cantor_endpoints(length: f64, level: u32) -> Result<Vec<f64>, LineError> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(LineError::NonpositiveLength(length));
    }
    if level > MAX_CANTOR_STAGE {
        return Err(LineError::DepthTooLarge {
            depth: level,
            max: MAX_CANTOR_STAGE,
        });
    }
    let mut starts = vec![0.0];
    let mut width = length;
    for _ in 0..level {
        width /= 3.0;
        starts = starts.iter().flat_map(|&s| [s, s + 2.0 * width]).collect();
    }
    Ok(starts.into_iter().flat_map(|s| [s, s + width]).collect())
}

/// A truncated series together with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u32,
}

/// `1 + Σ_{i≥1} 2^{i-1} tanh(l / (2·3^i))`, truncated once the geometric tail
/// bound `3 (l/4) (2/3)^{m+1}` drops below `tol`.
pub fn cantor_magnitude_series(length: f64, tol: f64) -> Result<SeriesValue, LineError> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(LineError::NonpositiveLength(length));
    }
    if !(tol > 0.0) {
        return Err(LineError::NonpositiveTolerance(tol));
    }
    let tail = |m: i32| 3.0 * (length / 4.0) * (2.0f64 / 3.0).powi(m + 1);
    let mut value = 1.0;
    let mut m = 0;
    while tail(m) >= tol {
        m += 1;
        value += 2f64.powi(m - 1) * (length / (2.0 * 3f64.powi(m))).tanh();
    }
    Ok(SeriesValue {
        value,
        tail_bound: tail(m),
        terms: m as u32,
    })
}

/// Mass of the stage-`depth` weight measure:
/// `1 + l/2 + Σ_{i=1}^{depth} 2^{i-1} (tanh(x_i) - x_i)`, `x_i = l / (2·3^i)`.
pub fn cantor_magnitude_iterative(length: f64, depth: u32) -> f64 {
    let mut value = 1.0 + length / 2.0;
    for i in 1..=depth as i32 {
        let x = length / (2.0 * 3f64.powi(i));
        value += 2f64.powi(i - 1) * (x.tanh() - x);
    }
    value
}

/// Bound on `|cantor_magnitude_iterative(l, depth) - |Cantor set||`, from
/// `|tanh x - x| ≤ x³/3`.
pub fn cantor_iterative_tail_bound(length: f64, depth: u32) -> f64 {
    let ratio: f64 = 2.0 / 27.0;
    length.powi(3) / 48.0 * ratio.powi(depth as i32 + 1) / (1.0 - ratio)
}

/// Carrier endpoints plus `n` evenly spaced points across the hull, keeping
/// only points in the carrier and merging points closer than
/// [`DEDUP_THRESHOLD`].
pub fn finite_approx_points(space: &LineSubset, n: usize) -> Result<Vec<f64>, LineError> {
    if n < 2 {
        return Err(LineError::TooFewPoints(n));
    }
    let (Some(first), Some(last)) = (space.intervals.first(), space.intervals.last()) else {
        return Ok(Vec::new());
    };
    let (lo, hi) = (first.start, last.end);
    let mut xs: Vec<f64> = space
        .intervals
        .iter()
        .flat_map(|iv| [iv.start, iv.end])
        .collect();
    let step = (hi - lo) / (n - 1) as f64;
    xs.extend(
        (0..n)
            .map(|k| if k == n - 1 { hi } else { lo + k as f64 * step })
            .filter(|&x| space.contains(x)),
    );
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|next, kept| (*next - *kept).abs() < DEDUP_THRESHOLD);
    Ok(xs)
}

/// Finite approximation of a line subset as a metric space; see
/// [`finite_approx_points`].
pub fn finite_approx_line(space: &LineSubset, n: usize) -> Result<FiniteMetricSpace, LineError> {
    let xs = finite_approx_points(space, n)?;
    Ok(FiniteMetricSpace::from_line_points(&xs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::magnitude_finite;

    #[test]
    fn cantor_endpoints_match_stage() {
        let xs = cantor_endpoints(9.0, 3).unwrap();
        assert_eq!(xs.len(), 16);
        let (stage, _) = cantor_stage(9.0, 3).unwrap();
        let ends: Vec<f64> = stage
            .intervals()
            .iter()
            .flat_map(|iv| [iv.start, iv.end])
            .collect();
        for (a, b) in xs.iter().zip(&ends) {
            assert!((a - b).abs() < 1e-13);
        }
        assert_eq!(cantor_endpoints(1.0, 0).unwrap(), vec![0.0, 1.0]);
        assert!(cantor_endpoints(1.0, MAX_CANTOR_STAGE + 1).is_err());
    }

    fn probes(space: &LineSubset, per_interval: usize) -> Vec<f64> {
        space
            .intervals()
            .iter()
            .flat_map(|iv| {
                (0..per_interval).map(move |k| {
                    if k + 1 == per_interval {
                        iv.end
                    } else {
                        iv.start + iv.length() * k as f64 / (per_interval - 1) as f64
                    }
                })
            })
            .collect()
    }

    fn max_residual(space: &LineSubset, m: &LineWeightMeasure) -> f64 {
        probes(space, 100)
            .into_iter()
            .map(|y| weight_equation_residual(space, m, y).unwrap().abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn interval_measure_examples() {
        let (_, m) = interval_weight_measure(2.0).unwrap();
        assert_eq!(measure_total_mass(&m), 2.0);
        let (_, m) = interval_weight_measure(1.0).unwrap();
        assert_eq!(measure_total_mass(&m), 1.5);
        let (_, m) = interval_weight_measure(1e-12).unwrap();
        assert!((measure_total_mass(&m) - 1.0).abs() < 1e-12);
        assert_eq!(
            interval_weight_measure(0.0),
            Err(LineError::NonpositiveLength(0.0))
        );
        assert!(interval_weight_measure(-1.0).is_err());
        assert_eq!(measure_total_mass(&LineWeightMeasure::default()), 0.0);
    }

    #[test]
    fn interval_measure_solves_weight_equation() {
        for &l in &[0.5, 1.0, 2.0, 10.0] {
            let (s, m) = interval_weight_measure(l).unwrap();
            assert!(max_residual(&s, &m) < 1e-12);
        }
    }

    #[test]
    fn removing_middle_third_of_l3() {
        let (s, m) = interval_weight_measure(3.0).unwrap();
        let (s2, m2) = remove_open_interval(&s, &m, 1.0, 2.0).unwrap();
        let expect = 1.0 + 1.5 - 0.5 + 0.5f64.tanh();
        assert!((measure_total_mass(&m2) - expect).abs() < 1e-15);
        assert!((expect - 2.462).abs() < 1e-3);
        assert_eq!(s2.intervals().len(), 2);
        assert!(max_residual(&s2, &m2) < 1e-12);
        // y outside the remaining carrier
        assert_eq!(
            weight_equation_residual(&s2, &m2, 1.5),
            Err(LineError::PointOutsideCarrier(1.5))
        );
    }

    #[test]
    fn degenerate_hole_is_identity() {
        let (s, m) = interval_weight_measure(3.0).unwrap();
        let (s2, m2) = remove_open_interval(&s, &m, 1.2, 1.2).unwrap();
        assert_eq!((s2, m2), (s, m));
    }

    #[test]
    fn two_holes_add_increments() {
        let (s, m) = interval_weight_measure(3.0).unwrap();
        let (s1, m1) = remove_open_interval(&s, &m, 0.5, 1.0).unwrap();
        let (s2, m2) = remove_open_interval(&s1, &m1, 1.5, 2.0).unwrap();
        let inc = -0.25 + 0.25f64.tanh();
        assert!((measure_total_mass(&m2) - (2.5 + 2.0 * inc)).abs() < 1e-14);
        // 50 probes across the remaining carrier
        let hull = probes(&s2, 17);
        assert!(hull.len() >= 50);
        for y in hull {
            assert!(weight_equation_residual(&s2, &m2, y).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn hole_at_carrier_endpoint_merges_atoms() {
        let (s, m) = interval_weight_measure(3.0).unwrap();
        let (s2, m2) = remove_open_interval(&s, &m, 0.0, 1.0).unwrap();
        assert_eq!(
            s2.intervals()[0],
            Interval {
                start: 0.0,
                end: 0.0
            }
        );
        assert_eq!(m2.atoms()[0].mass, 0.5 + 0.5 * 0.5f64.tanh());
        assert!(max_residual(&s2, &m2) < 1e-12);
    }

    #[test]
    fn hole_hypothesis_violations() {
        let (s, m) = interval_weight_measure(3.0).unwrap();
        let (s1, m1) = remove_open_interval(&s, &m, 1.0, 2.0).unwrap();
        // spans the removed gap
        assert!(matches!(
            remove_open_interval(&s1, &m1, 0.5, 2.5),
            Err(LineError::NotContained { .. })
        ));
        // atom inside the hole
        let with_atom = LineWeightMeasure::new(
            &s,
            vec![Atom {
                location: 1.5,
                mass: 0.1,
            }],
            m.densities().to_vec(),
        )
        .unwrap();
        assert!(matches!(
            remove_open_interval(&s, &with_atom, 1.0, 2.0),
            Err(LineError::HypothesisViolated { .. })
        ));
        // wrong density
        let wrong = LineWeightMeasure::new(
            &s,
            vec![],
            vec![DensitySegment {
                interval: Interval {
                    start: 0.0,
                    end: 3.0,
                },
                density: 0.4,
            }],
        )
        .unwrap();
        assert!(matches!(
            remove_open_interval(&s, &wrong, 1.0, 2.0),
            Err(LineError::HypothesisViolated { .. })
        ));
        // density missing on part of the hole
        let partial = LineWeightMeasure::new(
            &s,
            vec![],
            vec![DensitySegment {
                interval: Interval {
                    start: 0.0,
                    end: 1.5,
                },
                density: 0.5,
            }],
        )
        .unwrap();
        assert!(matches!(
            remove_open_interval(&s, &partial, 1.0, 2.0),
            Err(LineError::HypothesisViolated { .. })
        ));
        // outside
        assert!(matches!(
            remove_open_interval(&s, &m, 2.0, 4.0),
            Err(LineError::NotContained { .. })
        ));
    }

    #[test]
    fn residual_without_endpoint_atoms_is_negative() {
        let s = LineSubset::segment(2.0).unwrap();
        let m = LineWeightMeasure::new(
            &s,
            vec![],
            vec![DensitySegment {
                interval: Interval {
                    start: 0.0,
                    end: 2.0,
                },
                density: 0.5,
            }],
        )
        .unwrap();
        // (1/2)(1 - e^{-1}) * 2 - 1 = -e^{-1}
        let r = weight_equation_residual(&s, &m, 1.0).unwrap();
        assert!((r + (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn measure_validation() {
        let s = LineSubset::segment(1.0).unwrap();
        assert!(matches!(
            LineWeightMeasure::new(
                &s,
                vec![Atom {
                    location: 2.0,
                    mass: 1.0
                }],
                vec![]
            ),
            Err(LineError::OutsideCarrier(_))
        ));
        let d = |a, b| DensitySegment {
            interval: Interval { start: a, end: b },
            density: 1.0,
        };
        assert!(matches!(
            LineWeightMeasure::new(&s, vec![], vec![d(0.0, 0.6), d(0.5, 1.0)]),
            Err(LineError::OverlappingDensities(0, 1))
        ));
        assert!(LineWeightMeasure::new(&s, vec![], vec![d(0.0, 0.5), d(0.5, 1.0)]).is_ok());
        assert!(matches!(
            LineSubset::new(vec![
                Interval {
                    start: 0.0,
                    end: 1.0
                },
                Interval {
                    start: 1.0,
                    end: 2.0
                }
            ]),
            Err(LineError::Unordered(0, 1))
        ));
    }

    #[test]
    fn cantor_stages_are_weight_measures() {
        for depth in 0..=5 {
            let (s, m) = cantor_stage(3.0, depth).unwrap();
            assert_eq!(s.intervals().len(), 1 << depth);
            assert!(max_residual(&s, &m) < 1e-12, "depth {depth}");
            let iterative = cantor_magnitude_iterative(3.0, depth);
            assert!((measure_total_mass(&m) - iterative).abs() < 1e-13);
        }
        assert_eq!(
            cantor_stage(1.0, MAX_CANTOR_STAGE + 1),
            Err(LineError::DepthTooLarge {
                depth: MAX_CANTOR_STAGE + 1,
                max: MAX_CANTOR_STAGE
            })
        );
    }

    #[test]
    fn cantor_iterative_examples() {
        assert_eq!(cantor_magnitude_iterative(3.0, 0), 2.5);
        let one = cantor_magnitude_iterative(3.0, 1);
        assert!((one - (2.0 + 0.5f64.tanh())).abs() < 1e-15);
        // Σ 2^{i-1} l/(2·3^i) = l/2
        let l = 2.0;
        let s: f64 = (1..=80)
            .map(|i| 2f64.powi(i - 1) * l / (2.0 * 3f64.powi(i)))
            .sum();
        assert!((s - l / 2.0).abs() < 1e-14);
    }

    #[test]
    fn cantor_series_examples() {
        let tiny = cantor_magnitude_series(1e-9, 1e-15).unwrap();
        assert!((tiny.value - 1.0).abs() < 1e-9);
        let three = cantor_magnitude_series(3.0, 1e-14).unwrap();
        let direct: f64 = 1.0
            + (1..=200)
                .map(|i| 2f64.powi(i - 1) * (3.0 / (2.0 * 3f64.powi(i))).tanh())
                .sum::<f64>();
        assert!((three.value - direct).abs() < 1e-13);
        assert!(three.tail_bound < 1e-14);
        let one = cantor_magnitude_series(1.0, 1e-15).unwrap().value;
        assert!((one - cantor_magnitude_iterative(1.0, 60)).abs() < 1e-12);
        assert!(cantor_magnitude_series(0.0, 1e-3).is_err());
        assert!(cantor_magnitude_series(1.0, 0.0).is_err());
    }

    #[test]
    fn finite_approximations() {
        let s = LineSubset::segment(1.3).unwrap();
        let two = finite_approx_line(&s, 2).unwrap();
        assert_eq!(two.len(), 2);
        let m = magnitude_finite(&two, 1e-10).unwrap();
        assert!((m - 2.0 / (1.0 + (-1.3f64).exp())).abs() < 1e-14);
        assert!(matches!(
            finite_approx_line(&s, 1),
            Err(LineError::TooFewPoints(1))
        ));

        for k in 0..5 {
            let (stage, _) = cantor_stage(1.0, k).unwrap();
            assert_eq!(finite_approx_points(&stage, 2).unwrap().len(), 1 << (k + 1));
        }
    }
}
