//! The minimum-energy quadratic through three points.
//!
//! For a triple `(p1, p2, p3)` we look for `r(t) = a1 t² + a2 t + a3` with
//! `r(0) = p1`, `r(T) = p2`, `r(1) = p3`, choosing the free parameter
//! `T ∈ (0, 1)` so that the whole-line elastic energy of `r` is smallest.
//! In the canonical frame (`q1 = 0`, `q3 = (1, 0)`) the optimal `T` is the
//! unique root in `(0, 1)` of
//!
//! ```text
//! T³ − 3/2 T² + (q2x − |q2|²) T + |q2|²/2 = 0
//! ```
//!
//! which always has one root below 0, one in `(0, 1)` and one above 1.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fairness::{CurveEvaluator, Derivatives};
use crate::geometry::{normalize_triple, NormalizedTriple, Point2, Vec2, Vector2};
use crate::quadrature::{integrate, QuadratureConfig};

/// `r(t) = a1 t² + a2 t + a3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticCurve {
    pub a1: Vector2,
    pub a2: Vector2,
    pub a3: Point2,
}

impl QuadraticCurve {
    pub fn new(a1: Vector2, a2: Vector2, a3: Point2) -> Self {
        QuadraticCurve { a1, a2, a3 }
    }

    /// The quadratic with `r(0) = p1`, `r(t_mid) = p2`, `r(1) = p3`.
    pub fn through(p1: Point2, p2: Point2, p3: Point2, t_mid: f64) -> Self {
        let a1 = (p2 - p1 - (p3 - p1) * t_mid) / (t_mid * t_mid - t_mid);
        QuadraticCurve {
            a1,
            a2: p3 - p1 - a1,
            a3: p1,
        }
    }

    pub fn eval(&self, t: f64) -> Point2 {
        (self.a1 * t + self.a2) * t + self.a3
    }

    pub fn velocity(&self, t: f64) -> Vector2 {
        self.a1 * (2.0 * t) + self.a2
    }

    /// Parameter of the vertex (point of extremal curvature).
    pub fn vertex_parameter(&self) -> f64 {
        -self.a1.dot(self.a2) / (2.0 * self.a1.norm_squared())
    }

    /// Parameter half-width of the bend around the vertex: the speed there is
    /// `2 |a1| * width`.
    pub fn bend_width(&self) -> f64 {
        self.a1.cross(self.a2).abs() / (2.0 * self.a1.norm_squared())
    }
}

impl CurveEvaluator for QuadraticCurve {
    fn derivatives(&self, t: f64) -> Derivatives {
        Derivatives {
            position: self.eval(t),
            first: self.velocity(t),
            second: self.a1 * 2.0,
            third: Vec2::ZERO,
        }
    }
}

/// Value of the minimizing cubic at `t` for the canonical middle point `q2`.
///
/// Evaluated as `t³ − 3/2 t² + q2x t + |q2|² (1/2 − t)`, which is the same
/// polynomial with the two large `|q2|²` terms folded together.
pub fn cubic_residual(t: f64, q2: Point2) -> f64 {
    let n2 = q2.norm_squared();
    ((t - 1.5) * t + q2.x) * t + n2 * (0.5 - t)
}

fn cubic_slope(t: f64, q2: Point2) -> f64 {
    (3.0 * t - 3.0) * t + q2.x - q2.norm_squared()
}

fn polish(mut t: f64, q2: Point2) -> f64 {
    for _ in 0..2 {
        let slope = cubic_slope(t, q2);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = t - cubic_residual(t, q2) / slope;
        if !next.is_finite() {
            break;
        }
        t = next;
    }
    t
}

/// The three real roots of the minimizing cubic and the Cardano parameters
/// `beta = 1 − 2 q2x` and `gamma = (4 (q2x − |q2|²) − 3)³ / 27`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicRoots {
    pub beta: f64,
    pub gamma: f64,
    /// Ascending.
    pub roots: [f64; 3],
}

impl CubicRoots {
    /// The root lying strictly between 0 and 1, if any.
    pub fn middle(&self) -> f64 {
        self.roots[1]
    }
}

/// Solve the minimizing cubic with the trigonometric three-real-root formula.
///
/// Substituting `T = x + 1/2` gives the depressed cubic `x³ + p x + q` with
/// `p = q2x − |q2|² − 3/4` and `q = (2 q2x − 1) / 4`. For valid `q2` the
/// discriminant is always negative; a non-negative one (numerical breakdown)
/// returns `None`.
pub fn cubic_roots(q2: Point2) -> Option<CubicRoots> {
    let n2 = q2.norm_squared();
    let linear = q2.x - n2;
    let p = linear - 0.75;
    let q = 0.25 * (2.0 * q2.x - 1.0);
    let beta = 1.0 - 2.0 * q2.x;
    let gamma = (4.0 * linear - 3.0).powi(3) / 27.0;
    if !(p < 0.0) || 4.0 * p * p * p + 27.0 * q * q >= 0.0 {
        return None;
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (1.5 * q / p * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    let mut roots = [0.0; 3];
    for (k, r) in roots.iter_mut().enumerate() {
        let x = m * (theta - 2.0 * PI * k as f64 / 3.0).cos();
        *r = polish(x + 0.5, q2);
    }
    roots.sort_by(f64::total_cmp);
    Some(CubicRoots { beta, gamma, roots })
}

/// The energy objective `|q2 − q3 T|⁴ / (T − T²)` with `q3 = (1, 0)`.
///
/// Proportional to the whole-line energy of the quadratic through the
/// canonical triple that passes `q2` at parameter `T`.
pub fn energy_objective(t: f64, q2: Point2) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::DomainError { value: t });
    }
    let dx = q2.x - t;
    let n = dx * dx + q2.y * q2.y;
    Ok(n * n / (t - t * t))
}

fn bisect_unit_interval(q2: Point2) -> Option<f64> {
    // residual(0) > 0 > residual(1) for every valid q2.
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    if !(cubic_residual(lo, q2) > 0.0 && cubic_residual(hi, q2) < 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cubic_residual(mid, q2) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// The root of the minimizing cubic in `(0, 1)`.
pub fn solve_min_t(q2: Point2) -> Result<f64> {
    if !q2.is_finite() {
        return Err(Error::NonFinite);
    }
    let candidates: Vec<f64> = cubic_roots(q2)
        .map(|r| {
            r.roots
                .into_iter()
                .filter(|&t| t > 0.0 && t < 1.0)
                .collect()
        })
        .unwrap_or_default();
    let best = candidates
        .into_iter()
        .filter_map(|t| energy_objective(t, q2).ok().map(|e| (t, e)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(t, _)| t);
    match best.or_else(|| bisect_unit_interval(q2).map(|t| polish(t, q2))) {
        Some(t) if t > 0.0 && t < 1.0 => Ok(t),
        _ => Err(Error::NoRootInUnitInterval),
    }
}

/// A solved triple: the optimal `T`, its quadratic in original coordinates,
/// and the canonical frame used to find it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinQuadSolution {
    pub t: f64,
    pub curve: QuadraticCurve,
    pub frame: NormalizedTriple,
    /// `energy_objective(t, frame.q2)`.
    pub objective: f64,
    pub points: [Point2; 3],
}

/// Find the minimum-energy quadratic through `p1`, `p2`, `p3`.
///
/// `T` is found in the canonical frame; the coefficients are then recovered
/// directly in the original coordinates, since `T` does not depend on the frame.
pub fn build_solution(p1: Point2, p2: Point2, p3: Point2) -> Result<MinQuadSolution> {
    let frame = normalize_triple(p1, p2, p3)?;
    let t = solve_min_t(frame.q2)?;
    Ok(MinQuadSolution {
        t,
        curve: QuadraticCurve::through(p1, p2, p3, t),
        frame,
        objective: energy_objective(t, frame.q2)?,
        points: [p1, p2, p3],
    })
}

/// Tangent `ṙ(T)` of the solved quadratic at its middle point.
pub fn tangent_at_p2(sol: &MinQuadSolution) -> Vector2 {
    let [p1, p2, p3] = sol.points;
    let t = sol.t;
    let chord = p3 - p1;
    (p2 - p1 - chord * t) / (t * t - t) * (2.0 * t - 1.0) + chord
}

/// How an arc length was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcLengthMethod {
    ClosedForm,
    /// The closed form's logarithm was indeterminate (`r1 ∥ r2`).
    NumericFallback,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcLength {
    pub value: f64,
    pub method: ArcLengthMethod,
}

/// Guard on `|sin θ|` between `r1` and `r2`.
pub const ARC_SIN_GUARD: f64 = 1e-7;
/// Guard on `1 − cos θ`.
pub const ARC_COS_GUARD: f64 = 1e-12;

/// Length of the solved quadratic between `p1` and `p3` by adaptive quadrature.
pub fn arc_length_numeric(sol: &MinQuadSolution, cfg: &QuadratureConfig) -> Result<f64> {
    let c = sol.curve;
    integrate(|t| c.velocity(t).norm(), 0.0, 1.0, cfg).map(|e| e.value)
}

/// Closed-form length of the solved quadratic between `p1` and `p3`.
///
/// With `s2 = p2 − p1`, `s3 = p3 − p1`, `r1 = T s3 − s2`, `r2 = T² s3 − s2`
/// and `θ` the angle between `r1` and `r2`, the speed is
/// `|2t r1 − r2| / (T − T²)` and its integral over `[0, 1]` has an
/// elementary antiderivative. Near `r1 ∥ r2` the logarithm is indeterminate
/// and the value is computed numerically instead.
pub fn arc_length_closed(sol: &MinQuadSolution) -> Result<ArcLength> {
    let [p1, p2, p3] = sol.points;
    let t = sol.t;
    let s2 = p2 - p1;
    let s3 = p3 - p1;
    let r1 = s3 * t - s2;
    let r2 = s3 * (t * t) - s2;
    let len1 = r1.norm();
    let len2 = r2.norm();
    let denom = len1 * len2;
    let cos = if denom > 0.0 {
        (r1.dot(r2) / denom).clamp(-1.0, 1.0)
    } else {
        1.0
    };
    let sin = if denom > 0.0 {
        r1.cross(r2) / denom
    } else {
        0.0
    };
    let sin2 = sin * sin;
    // 1 − cos θ without cancellation when θ is small.
    let one_minus_cos = if cos > 0.0 {
        sin2 / (1.0 + cos)
    } else {
        1.0 - cos
    };

    if denom == 0.0 || sin.abs() < ARC_SIN_GUARD || one_minus_cos < ARC_COS_GUARD {
        return Ok(ArcLength {
            value: arc_length_numeric(sol, &QuadratureConfig::default())?,
            method: ArcLengthMethod::NumericFallback,
        });
    }

    let lead = 2.0 * len1 - len2 * cos;
    let rho = (4.0 * len1 * len1 - 4.0 * len1 * len2 * cos + len2 * len2).sqrt();
    // lead + rho, rationalized when lead < 0 to avoid cancellation.
    let log_numerator = if lead >= 0.0 {
        lead + rho
    } else {
        len2 * len2 * sin2 / (rho - lead)
    };
    let log_term = (log_numerator / (len2 * one_minus_cos)).ln();
    let value = (len2 * len2 * cos + lead * rho + len2 * len2 * sin2 * log_term)
        / (4.0 * len1 * (t - t * t));
    Ok(ArcLength {
        value,
        method: ArcLengthMethod::ClosedForm,
    })
}

/// Whole-line elastic energy `(3π/4) |a1|⁴ / |a1 × a2|³`.
pub fn total_energy_closed(curve: &QuadraticCurve) -> Result<f64> {
    let cross = checked_cross(curve)?;
    Ok(0.75 * PI * curve.a1.norm_squared().powi(2) / cross.abs().powi(3))
}

/// Whole-line curvature variation `(45π/16) |a1|⁸ / |a1 × a2|⁵`.
///
/// For a graph parabola `y = a t² + b t + c` this is `(45π/16) |a|³`.
pub fn total_variation_closed(curve: &QuadraticCurve) -> Result<f64> {
    let cross = checked_cross(curve)?;
    Ok(45.0 * PI / 16.0 * curve.a1.norm_squared().powi(4) / cross.abs().powi(5))
}

fn checked_cross(curve: &QuadraticCurve) -> Result<f64> {
    let cross = curve.a1.cross(curve.a2);
    if !(cross.abs() > 1e-12 * curve.a1.norm_squared() * curve.a2.norm()) {
        return Err(Error::DegenerateCurve { cross });
    }
    Ok(cross)
}
