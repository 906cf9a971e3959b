//! Planar primitives and the similarity normalization of point triples.
//!
//! A non-collinear triple `(p1, p2, p3)` is translated so `p1` sits at the
//! origin, scaled so `|p3 - p1| = 1`, and rotated so `p3` lands on `(1, 0)`.
//! Only the image of the middle point, `q2`, carries information afterwards.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold on `|cross(p2 - p1, p3 - p1)| / |p3 - p1|^2`.
pub const COLLINEAR_TOLERANCE: f64 = 1e-9;
/// Relative threshold on `|p3 - p1|` against the largest coordinate magnitude.
pub const COINCIDENT_TOLERANCE: f64 = 1e-12;

/// A 2D vector of `f64`, used for both positions and displacements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

/// Positions and displacements share a representation.
pub type Point2 = Vec2;
pub type Vector2 = Vec2;

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Signed scalar cross product `self.x * other.y - self.y * other.x`.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Largest absolute coordinate.
    #[inline]
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x / rhs, self.y / rhs)
    }
}

impl From<(f64, f64)> for Vec2 {
    fn from((x, y): (f64, f64)) -> Self {
        Vec2::new(x, y)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Vec2::new(x, y)
    }
}

/// Signed scalar cross product of two plane vectors.
#[inline]
pub fn cross2(u: Vector2, v: Vector2) -> f64 {
    u.cross(v)
}

/// Row-major 2x2 rotation `[[c, s], [-s, c]]`, orthogonal with determinant +1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation2 {
    pub cos: f64,
    pub sin: f64,
}

impl Rotation2 {
    pub const IDENTITY: Rotation2 = Rotation2 { cos: 1.0, sin: 0.0 };

    /// The rotation that sends the unit vector `u` to `(1, 0)`.
    pub fn aligning(u: Vector2) -> Self {
        Rotation2 { cos: u.x, sin: u.y }
    }

    #[inline]
    pub fn apply(&self, v: Vector2) -> Vector2 {
        Vec2::new(
            self.cos * v.x + self.sin * v.y,
            -self.sin * v.x + self.cos * v.y,
        )
    }

    #[inline]
    pub fn apply_inverse(&self, v: Vector2) -> Vector2 {
        Vec2::new(
            self.cos * v.x - self.sin * v.y,
            self.sin * v.x + self.cos * v.y,
        )
    }

    pub fn determinant(&self) -> f64 {
        self.cos * self.cos + self.sin * self.sin
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.cos, self.sin], [-self.sin, self.cos]]
    }
}

/// A triple in canonical position together with the similarity that put it there.
///
/// The canonical images of `p1` and `p3` are always `(0, 0)` and `(1, 0)`,
/// so only `q2` is stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedTriple {
    pub q2: Point2,
    pub translation: Vector2,
    pub scale: f64,
    pub rotation: Rotation2,
}

impl NormalizedTriple {
    /// Map a point from original coordinates into the canonical frame.
    pub fn to_canonical(&self, p: Point2) -> Point2 {
        self.rotation.apply((p - self.translation) / self.scale)
    }

    /// Map a canonical-frame point back to original coordinates.
    pub fn from_canonical(&self, q: Point2) -> Point2 {
        self.rotation.apply_inverse(q) * self.scale + self.translation
    }
}

/// Check that three points form a usable, non-collinear triple.
pub fn check_triple(p1: Point2, p2: Point2, p3: Point2) -> Result<()> {
    if !(p1.is_finite() && p2.is_finite() && p3.is_finite()) {
        return Err(Error::NonFinite);
    }
    let chord = p3 - p1;
    let distance = chord.norm();
    let magnitude = p1.max_abs().max(p2.max_abs()).max(p3.max_abs());
    if distance == 0.0 || distance <= COINCIDENT_TOLERANCE * magnitude {
        return Err(Error::CoincidentEndpoints { distance });
    }
    let cross = cross2(p2 - p1, chord);
    let threshold = COLLINEAR_TOLERANCE * chord.norm_squared();
    if cross.abs() <= threshold {
        return Err(Error::CollinearPoints { cross, threshold });
    }
    Ok(())
}

/// Translate, scale and rotate a triple so that `p1 -> (0,0)` and `p3 -> (1,0)`.
pub fn normalize_triple(p1: Point2, p2: Point2, p3: Point2) -> Result<NormalizedTriple> {
    check_triple(p1, p2, p3)?;
    let scale = (p3 - p1).norm();
    let p3_hat = (p3 - p1) / scale;
    let p2_hat = (p2 - p1) / scale;
    let rotation = Rotation2::aligning(p3_hat);
    Ok(NormalizedTriple {
        q2: rotation.apply(p2_hat),
        translation: p1,
        scale,
        rotation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn cross2_examples() {
        assert_eq!(cross2(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)), 1.0);
        assert_eq!(cross2(Vec2::new(2.0, 3.0), Vec2::new(4.0, 6.0)), 0.0);
        assert_eq!(cross2(Vec2::new(0.5, 1.0), Vec2::new(1.0, 0.0)), -1.0);
    }

    #[test]
    fn canonical_triple_is_identity() {
        let n = normalize_triple(
            Vec2::new(0.0, 0.0),
            Vec2::new(0.5, 1.0),
            Vec2::new(1.0, 0.0),
        )
        .unwrap();
        assert_eq!(n.q2, Vec2::new(0.5, 1.0));
        assert_eq!(n.rotation, Rotation2::IDENTITY);
        assert_eq!(n.scale, 1.0);
    }

    #[test]
    fn quarter_turn_triple() {
        let p1 = Vec2::new(0.0, 0.0);
        let p3 = Vec2::new(0.0, 1.0);
        let n = normalize_triple(p1, Vec2::new(-1.0, 0.5), p3).unwrap();
        assert!(close(n.q2, Vec2::new(0.5, 1.0), 1e-15));
        assert_eq!(n.scale, 1.0);
        // rotation by -90 degrees: (0,1) -> (1,0)
        assert_eq!(n.rotation.matrix(), [[0.0, 1.0], [-1.0, 0.0]]);
        assert!(close(n.to_canonical(p3), Vec2::new(1.0, 0.0), 1e-15));
        assert!(close(n.to_canonical(p1), Vec2::ZERO, 0.0));
    }

    #[test]
    fn collinear_rejected() {
        let err = normalize_triple(
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, 0.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::CollinearPoints { .. }));
    }

    #[test]
    fn coincident_endpoints_rejected() {
        let p = Vec2::new(3.0, 4.0);
        let err = normalize_triple(p, Vec2::new(1.0, 0.0), p).unwrap_err();
        assert!(matches!(err, Error::CoincidentEndpoints { .. }));
        let err = normalize_triple(
            Vec2::new(1e6, 1e6),
            Vec2::new(0.0, 0.0),
            Vec2::new(1e6, 1e6 + 1e-8),
        )
        .unwrap_err();
        assert!(matches!(err, Error::CoincidentEndpoints { .. }));
    }

    #[test]
    fn non_finite_rejected() {
        let err = normalize_triple(
            Vec2::new(f64::NAN, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(2.0, 0.0),
        )
        .unwrap_err();
        assert_eq!(err, Error::NonFinite);
    }

    #[test]
    fn collinearity_threshold_is_scale_invariant() {
        // cross / |chord|^2 = 5e-10 at every scale
        for s in [1e-6, 1.0, 1e6] {
            let r = normalize_triple(
                Vec2::new(0.0, 0.0),
                Vec2::new(0.5 * s, 5e-10 * s),
                Vec2::new(s, 0.0),
            );
            assert!(matches!(r, Err(Error::CollinearPoints { .. })), "scale {s}");
            let ok = normalize_triple(
                Vec2::new(0.0, 0.0),
                Vec2::new(0.5 * s, 5e-9 * s),
                Vec2::new(s, 0.0),
            );
            assert!(ok.is_ok(), "scale {s}");
        }
    }

    #[test]
    fn rotation_is_proper() {
        let n = normalize_triple(
            Vec2::new(1.0, 2.0),
            Vec2::new(-3.0, 5.0),
            Vec2::new(4.0, -2.0),
        )
        .unwrap();
        assert!((n.rotation.determinant() - 1.0).abs() < 1e-12);
        let m = n.rotation.matrix();
        for row in m {
            assert!((row[0].hypot(row[1]) - 1.0).abs() < 1e-12);
        }
    }
}
