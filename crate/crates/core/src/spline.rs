//! Cubic Hermite splines with interchangeable tangent rules.
//!
//! Interior tangents follow one of four rules (minimum-energy quadratic,
//! Catmull-Rom, Cardinal, Kochanek-Bartels). Endpoint tangents use the end
//! derivative of the first/last minimum-energy quadratic for
//! [`TangentMethod::MinEnergyQuad`] and one-sided differences otherwise.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fairness::{CurveEvaluator, Derivatives};
use crate::geometry::{Point2, Vector2};
use crate::minquad::{build_solution, tangent_at_p2};

/// Rule for choosing the tangent vector at each control point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TangentMethod {
    MinEnergyQuad,
    CatmullRom,
    Cardinal {
        tension: f64,
    },
    KochanekBartels {
        tension: f64,
        bias: f64,
        continuity: f64,
    },
}

impl TangentMethod {
    /// The six method columns of the standard comparison table.
    pub fn comparison_set() -> [TangentMethod; 6] {
        [
            TangentMethod::MinEnergyQuad,
            TangentMethod::CatmullRom,
            TangentMethod::Cardinal { tension: 0.1 },
            TangentMethod::Cardinal { tension: 0.5 },
            TangentMethod::KochanekBartels {
                tension: 0.0,
                bias: 0.5,
                continuity: 0.0,
            },
            TangentMethod::KochanekBartels {
                tension: 0.0,
                bias: -0.5,
                continuity: 0.0,
            },
        ]
    }

    /// Side-by-side illustration set: Cardinal at tension 0.5 and
    /// Kochanek-Bartels at bias 0.5.
    pub fn gallery_presets() -> [TangentMethod; 4] {
        [
            TangentMethod::CatmullRom,
            TangentMethod::Cardinal { tension: 0.5 },
            TangentMethod::KochanekBartels {
                tension: 0.0,
                bias: 0.5,
                continuity: 0.0,
            },
            TangentMethod::MinEnergyQuad,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            TangentMethod::MinEnergyQuad => "min-energy",
            TangentMethod::CatmullRom => "catmull-rom",
            TangentMethod::Cardinal { .. } => "cardinal",
            TangentMethod::KochanekBartels { .. } => "kochanek-bartels",
        }
    }

    /// Parameter string, e.g. `tau=0.5` or `tau=0;beta=0.5;gamma=0`.
    pub fn params(&self) -> String {
        match *self {
            TangentMethod::MinEnergyQuad | TangentMethod::CatmullRom => String::new(),
            TangentMethod::Cardinal { tension } => format!("tau={tension}"),
            TangentMethod::KochanekBartels {
                tension,
                bias,
                continuity,
            } => {
                format!("tau={tension};beta={bias};gamma={continuity}")
            }
        }
    }

    /// Inverse of [`name`](Self::name) + [`params`](Self::params).
    pub fn from_parts(name: &str, params: &str) -> Result<Self, ParseMethodError> {
        let mut tau = 0.0;
        let mut beta = 0.0;
        let mut gamma = 0.0;
        for pair in params.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| ParseMethodError(format!("malformed parameter `{pair}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| ParseMethodError(format!("bad number in `{pair}`")))?;
            match key.trim() {
                "tau" => tau = value,
                "beta" => beta = value,
                "gamma" => gamma = value,
                other => return Err(ParseMethodError(format!("unknown parameter `{other}`"))),
            }
        }
        let method = match name {
            "min-energy" => TangentMethod::MinEnergyQuad,
            "catmull-rom" => TangentMethod::CatmullRom,
            "cardinal" => TangentMethod::Cardinal { tension: tau },
            "kochanek-bartels" => TangentMethod::KochanekBartels {
                tension: tau,
                bias: beta,
                continuity: gamma,
            },
            other => return Err(ParseMethodError(format!("unknown method `{other}`"))),
        };
        method.validate()?;
        Ok(method)
    }

    fn validate(&self) -> Result<(), ParseMethodError> {
        let finite = match *self {
            TangentMethod::MinEnergyQuad | TangentMethod::CatmullRom => true,
            TangentMethod::Cardinal { tension } => tension.is_finite(),
            TangentMethod::KochanekBartels {
                tension,
                bias,
                continuity,
            } => tension.is_finite() && bias.is_finite() && continuity.is_finite(),
        };
        if finite {
            Ok(())
        } else {
            Err(ParseMethodError("method parameters must be finite".into()))
        }
    }
}

impl fmt::Display for TangentMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            f.write_str(self.name())
        } else {
            write!(f, "{}({})", self.name(), params.replace(';', ","))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ParseMethodError(String);

/// Accepts `min-energy`, `catmull-rom`, `cardinal[:TAU]` and
/// `kb[:TAU,BETA,GAMMA]` (short and long spellings).
impl FromStr for TangentMethod {
    type Err = ParseMethodError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (s.trim(), None),
        };
        let numbers: Vec<f64> = match args {
            Some(a) => a
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| ParseMethodError(format!("bad parameters in `{s}`")))?,
            None => Vec::new(),
        };
        let arg = |i: usize| numbers.get(i).copied().unwrap_or(0.0);
        let (method, max_args) = match name.to_ascii_lowercase().as_str() {
            "min-energy" | "minenergy" | "ours" => (TangentMethod::MinEnergyQuad, 0),
            "catmull-rom" | "catmullrom" | "cr" => (TangentMethod::CatmullRom, 0),
            "cardinal" => (TangentMethod::Cardinal { tension: arg(0) }, 1),
            "kb" | "kochanek-bartels" => (
                TangentMethod::KochanekBartels {
                    tension: arg(0),
                    bias: arg(1),
                    continuity: arg(2),
                },
                3,
            ),
            _ => return Err(ParseMethodError(format!("unknown tangent method `{name}`"))),
        };
        if numbers.len() > max_args {
            return Err(ParseMethodError(format!("too many parameters in `{s}`")));
        }
        method.validate()?;
        Ok(method)
    }
}

/// Strictly increasing parameter values, one per control point.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotVector(Vec<f64>);

impl KnotVector {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if let Some(bad) = knots.iter().find(|k| !k.is_finite()) {
            return Err(Error::InvalidKnots(format!("non-finite knot {bad}")));
        }
        if let Some(i) = knots.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidKnots(format!(
                "knots must be strictly increasing (t[{}] = {} >= t[{}] = {})",
                i,
                knots[i],
                i + 1,
                knots[i + 1]
            )));
        }
        Ok(KnotVector(knots))
    }

    /// `t_i = i` for `i = 0..n`.
    pub fn uniform(n: usize) -> Self {
        KnotVector((0..n).map(|i| i as f64).collect())
    }

    /// Cumulative chord lengths starting at 0.
    pub fn chord_length(points: &[Point2]) -> Result<Self> {
        let mut knots = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        for (i, p) in points.iter().enumerate() {
            if i > 0 {
                acc += (*p - points[i - 1]).norm();
            }
            knots.push(acc);
        }
        KnotVector::new(knots)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// How knots are assigned when a point set does not carry its own.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KnotConvention {
    #[default]
    Uniform,
    Chord,
}

impl KnotConvention {
    pub fn knots_for(&self, points: &[Point2]) -> Result<KnotVector> {
        match self {
            KnotConvention::Uniform => Ok(KnotVector::uniform(points.len())),
            KnotConvention::Chord => KnotVector::chord_length(points),
        }
    }
}

impl fmt::Display for KnotConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KnotConvention::Uniform => "uniform",
            KnotConvention::Chord => "chord",
        })
    }
}

impl FromStr for KnotConvention {
    type Err = ParseMethodError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(KnotConvention::Uniform),
            "chord" | "chord-length" => Ok(KnotConvention::Chord),
            other => Err(ParseMethodError(format!(
                "unknown knot convention `{other}`"
            ))),
        }
    }
}

/// `(p_next − p_prev) / (t_next − t_prev)`.
pub fn tangent_catmull_rom(p_prev: Point2, p_next: Point2, t_prev: f64, t_next: f64) -> Vector2 {
    (p_next - p_prev) / (t_next - t_prev)
}

/// Catmull-Rom scaled by `1 − τ`.
pub fn tangent_cardinal(
    p_prev: Point2,
    p_next: Point2,
    t_prev: f64,
    t_next: f64,
    tension: f64,
) -> Vector2 {
    tangent_catmull_rom(p_prev, p_next, t_prev, t_next) * (1.0 - tension)
}

/// Kochanek-Bartels tangent without a knot-span divisor:
///
/// ```text
/// (1−τ)(1+β)(1+γ)/2 · (p_i − p_prev) + (1−τ)(1−β)(1−γ)/2 · (p_next − p_i)
/// ```
pub fn tangent_kochanek_bartels(
    p_prev: Point2,
    p_i: Point2,
    p_next: Point2,
    tension: f64,
    bias: f64,
    continuity: f64,
) -> Vector2 {
    let incoming = (1.0 - tension) * (1.0 + bias) * (1.0 + continuity) / 2.0;
    let outgoing = (1.0 - tension) * (1.0 - bias) * (1.0 - continuity) / 2.0;
    // Same sum regrouped; equal weights reduce it to outgoing · (p_next − p_prev).
    (p_next - p_prev) * outgoing + (p_i - p_prev) * (incoming - outgoing)
}

/// Tangent of the minimum-energy quadratic through the triple at `p_i`,
/// rescaled from the quadratic's unit parameter span to `t_next − t_prev`.
pub fn tangent_min_energy(
    p_prev: Point2,
    p_i: Point2,
    p_next: Point2,
    t_prev: f64,
    t_next: f64,
) -> Result<Vector2> {
    let sol = build_solution(p_prev, p_i, p_next)?;
    Ok(tangent_at_p2(&sol) / (t_next - t_prev))
}

/// Hermite basis blend on the local parameter `t ∈ [0, 1]`.
pub fn hermite_eval(p_a: Point2, p_b: Point2, v_a: Vector2, v_b: Vector2, t: f64) -> Point2 {
    let t2 = t * t;
    let t3 = t2 * t;
    p_a * (2.0 * t3 - 3.0 * t2 + 1.0)
        + p_b * (-2.0 * t3 + 3.0 * t2)
        + v_a * (t3 - 2.0 * t2 + t)
        + v_b * (t3 - t2)
}

/// Derivative of [`hermite_eval`] with respect to the local parameter.
pub fn hermite_derivative(p_a: Point2, p_b: Point2, v_a: Vector2, v_b: Vector2, t: f64) -> Vector2 {
    let t2 = t * t;
    (p_a - p_b) * (6.0 * t2 - 6.0 * t)
        + v_a * (3.0 * t2 - 4.0 * t + 1.0)
        + v_b * (3.0 * t2 - 2.0 * t)
}

/// An interpolating cubic Hermite spline.
#[derive(Clone, Debug, PartialEq)]
pub struct HermiteSpline {
    points: Vec<Point2>,
    knots: KnotVector,
    tangents: Vec<Vector2>,
    method: TangentMethod,
}

fn is_degenerate_triple(e: &Error) -> bool {
    matches!(
        e,
        Error::CollinearPoints { .. } | Error::CoincidentEndpoints { .. }
    )
}

fn interior_tangent(
    points: &[Point2],
    knots: &[f64],
    i: usize,
    method: TangentMethod,
) -> Result<Vector2> {
    let (pp, pi, pn) = (points[i - 1], points[i], points[i + 1]);
    let (tp, tn) = (knots[i - 1], knots[i + 1]);
    Ok(match method {
        TangentMethod::CatmullRom => tangent_catmull_rom(pp, pn, tp, tn),
        TangentMethod::Cardinal { tension } => tangent_cardinal(pp, pn, tp, tn, tension),
        TangentMethod::KochanekBartels {
            tension,
            bias,
            continuity,
        } => tangent_kochanek_bartels(pp, pi, pn, tension, bias, continuity),
        TangentMethod::MinEnergyQuad => match tangent_min_energy(pp, pi, pn, tp, tn) {
            Err(e) if is_degenerate_triple(&e) => tangent_catmull_rom(pp, pn, tp, tn),
            other => other?,
        },
    })
}

fn end_tangents(
    points: &[Point2],
    knots: &[f64],
    method: TangentMethod,
) -> Result<(Vector2, Vector2)> {
    let n = points.len();
    let first = (points[1] - points[0]) / (knots[1] - knots[0]);
    let last = (points[n - 1] - points[n - 2]) / (knots[n - 1] - knots[n - 2]);
    if method != TangentMethod::MinEnergyQuad || n < 3 {
        return Ok((first, last));
    }
    let start = match build_solution(points[0], points[1], points[2]) {
        Ok(sol) => sol.curve.velocity(0.0) / (knots[2] - knots[0]),
        Err(e) if is_degenerate_triple(&e) => first,
        Err(e) => return Err(e),
    };
    let end = match build_solution(points[n - 3], points[n - 2], points[n - 1]) {
        Ok(sol) => sol.curve.velocity(1.0) / (knots[n - 1] - knots[n - 3]),
        Err(e) if is_degenerate_triple(&e) => last,
        Err(e) => return Err(e),
    };
    Ok((start, end))
}

/// Build the spline through `points` at `knots` with tangents from `method`.
pub fn build_spline(
    points: &[Point2],
    knots: &KnotVector,
    method: TangentMethod,
) -> Result<HermiteSpline> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            got: n,
        });
    }
    if knots.len() != n {
        return Err(Error::InvalidKnots(format!(
            "{} knots for {} points",
            knots.len(),
            n
        )));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    let t = knots.as_slice();
    let (start, end) = end_tangents(points, t, method)?;
    let mut tangents = Vec::with_capacity(n);
    tangents.push(start);
    for i in 1..n - 1 {
        tangents.push(interior_tangent(points, t, i, method)?);
    }
    tangents.push(end);
    Ok(HermiteSpline {
        points: points.to_vec(),
        knots: knots.clone(),
        tangents,
        method,
    })
}

impl HermiteSpline {
    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn tangents(&self) -> &[Vector2] {
        &self.tangents
    }

    pub fn method(&self) -> TangentMethod {
        self.method
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    /// Segment `i` spans `[t_i, t_{i+1}]` (zero-based).
    pub fn segment(&self, i: usize) -> Result<HermiteSegment> {
        if i >= self.segment_count() {
            return Err(Error::IndexOutOfRange {
                index: i,
                count: self.segment_count(),
            });
        }
        let t = self.knots.as_slice();
        Ok(HermiteSegment {
            start: self.points[i],
            end: self.points[i + 1],
            start_tangent: self.tangents[i],
            end_tangent: self.tangents[i + 1],
            t0: t[i],
            t1: t[i + 1],
        })
    }

    /// Index of the segment containing `t`; values outside the knot range map
    /// to the first or last segment.
    pub fn segment_index(&self, t: f64) -> usize {
        let k = self.knots.as_slice();
        k.partition_point(|&x| x <= t)
            .saturating_sub(1)
            .min(self.segment_count() - 1)
    }

    /// Position at global parameter `t`. Outside the knot range the end
    /// segments are extrapolated.
    pub fn eval(&self, t: f64) -> Point2 {
        let seg = self
            .segment(self.segment_index(t))
            .expect("index is clamped");
        seg.position(t)
    }

    /// `samples_per_segment + 1` points along each segment, shared ends included once.
    pub fn sample(&self, samples_per_segment: usize) -> Vec<Point2> {
        let m = samples_per_segment.max(1);
        let mut out = Vec::with_capacity(self.segment_count() * m + 1);
        for i in 0..self.segment_count() {
            let seg = self.segment(i).expect("in range");
            let skip = usize::from(i > 0);
            out.extend(seg.sample(m).into_iter().skip(skip));
        }
        out
    }
}

/// One spline segment, evaluated in the global knot parameter.
///
/// Tangents are stored as derivatives with respect to the global parameter,
/// so the chain-rule factor `1 / (t1 − t0)` is folded into every derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteSegment {
    pub start: Point2,
    pub end: Point2,
    pub start_tangent: Vector2,
    pub end_tangent: Vector2,
    pub t0: f64,
    pub t1: f64,
}

impl HermiteSegment {
    pub fn span(&self) -> f64 {
        self.t1 - self.t0
    }

    /// `m + 1` evenly spaced points from `start` to `end`.
    pub fn sample(&self, m: usize) -> Vec<Point2> {
        let h = self.span();
        (0..=m)
            .map(|k| {
                let u = k as f64 / m as f64;
                hermite_eval(
                    self.start,
                    self.end,
                    self.start_tangent * h,
                    self.end_tangent * h,
                    u,
                )
            })
            .collect()
    }
}

impl CurveEvaluator for HermiteSegment {
    fn derivatives(&self, t: f64) -> Derivatives {
        let h = self.span();
        let u = (t - self.t0) / h;
        let u2 = u * u;
        let u3 = u2 * u;
        let (a, b, va, vb) = (self.start, self.end, self.start_tangent, self.end_tangent);
        let diff = a - b;

        let position = a * (2.0 * u3 - 3.0 * u2 + 1.0)
            + b * (-2.0 * u3 + 3.0 * u2)
            + (va * (u3 - 2.0 * u2 + u) + vb * (u3 - u2)) * h;
        let first = diff * ((6.0 * u2 - 6.0 * u) / h)
            + va * (3.0 * u2 - 4.0 * u + 1.0)
            + vb * (3.0 * u2 - 2.0 * u);
        let second =
            diff * ((12.0 * u - 6.0) / (h * h)) + (va * (6.0 * u - 4.0) + vb * (6.0 * u - 2.0)) / h;
        let third = diff * (12.0 / (h * h * h)) + (va + vb) * (6.0 / (h * h));
        Derivatives {
            position,
            first,
            second,
            third,
        }
    }
}
