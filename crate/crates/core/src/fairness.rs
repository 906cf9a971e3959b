//! Curvature, elastic energy and curvature variation of parametric plane curves.
//!
//! Energy and variation are integrated in the curve parameter:
//! `E = ∫ κ(t)² dt` and `V = ∫ κ̇(t)² dt`, where `κ̇ = dκ/dt`.
//! They are not arc-length integrals.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Vector2};
use crate::quadrature::{integrate, integrate_whole_line, LineMapping, QuadratureConfig};

/// Position and first three parameter derivatives at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivatives {
    pub position: Point2,
    pub first: Vector2,
    pub second: Vector2,
    pub third: Vector2,
}

/// A parametric plane curve that can report exact derivatives up to third order.
pub trait CurveEvaluator {
    fn derivatives(&self, t: f64) -> Derivatives;

    fn position(&self, t: f64) -> Point2 {
        self.derivatives(t).position
    }
}

impl<C: CurveEvaluator + ?Sized> CurveEvaluator for &C {
    fn derivatives(&self, t: f64) -> Derivatives {
        (**self).derivatives(t)
    }
}

/// Squared speeds at or below this are treated as a stationary point.
pub const MIN_SPEED_SQUARED: f64 = 1e-300;

/// Signed curvature from precomputed derivatives.
pub fn curvature_of(d: &Derivatives) -> Option<f64> {
    let speed2 = d.first.norm_squared();
    if speed2 <= MIN_SPEED_SQUARED {
        return None;
    }
    Some(d.first.cross(d.second) / (speed2 * speed2.sqrt()))
}

/// `dκ/dt` from precomputed derivatives, keeping third-derivative terms.
pub fn curvature_rate_of(d: &Derivatives) -> Option<f64> {
    let speed2 = d.first.norm_squared();
    if speed2 <= MIN_SPEED_SQUARED {
        return None;
    }
    let cross12 = d.first.cross(d.second);
    let cross13 = d.first.cross(d.third);
    let dot12 = d.first.dot(d.second);
    let numerator = cross13 * speed2 - 3.0 * dot12 * cross12;
    Some(numerator / (speed2 * speed2 * speed2.sqrt()))
}

/// Signed curvature `(ẋÿ − ẏẍ) / (ẋ² + ẏ²)^{3/2}`.
pub fn curvature<C: CurveEvaluator + ?Sized>(c: &C, t: f64) -> Result<f64> {
    curvature_of(&c.derivatives(t)).ok_or(Error::ZeroSpeed { t })
}

/// Parameter derivative of the signed curvature.
pub fn curvature_rate<C: CurveEvaluator + ?Sized>(c: &C, t: f64) -> Result<f64> {
    curvature_rate_of(&c.derivatives(t)).ok_or(Error::ZeroSpeed { t })
}

/// Which squared quantity to integrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Functional {
    Energy,
    Variation,
}

fn squared_integrand<'a, C: CurveEvaluator + ?Sized>(
    c: &'a C,
    functional: Functional,
    stalled: &'a Cell<Option<f64>>,
) -> impl Fn(f64) -> f64 + 'a {
    move |t| {
        let d = c.derivatives(t);
        let value = match functional {
            Functional::Energy => curvature_of(&d),
            Functional::Variation => curvature_rate_of(&d),
        };
        match value {
            Some(k) => k * k,
            None => {
                if stalled.get().is_none() {
                    stalled.set(Some(t));
                }
                f64::NAN
            }
        }
    }
}

fn integrate_segment<C: CurveEvaluator + ?Sized>(
    c: &C,
    t0: f64,
    t1: f64,
    cfg: &QuadratureConfig,
    functional: Functional,
) -> Result<f64> {
    if !(t0 < t1) {
        return Err(Error::DomainError { value: t1 - t0 });
    }
    let stalled = Cell::new(None);
    let f = squared_integrand(c, functional, &stalled);
    match integrate(f, t0, t1, cfg) {
        Ok(est) => Ok(est.value),
        Err(e) => Err(stalled.get().map_or(e, |t| Error::ZeroSpeed { t })),
    }
}

fn integrate_line<C: CurveEvaluator + ?Sized>(
    c: &C,
    mapping: LineMapping,
    cfg: &QuadratureConfig,
    functional: Functional,
) -> Result<f64> {
    let stalled = Cell::new(None);
    let f = squared_integrand(c, functional, &stalled);
    match integrate_whole_line(f, mapping, cfg) {
        Ok(est) => Ok(est.value),
        Err(e) => Err(stalled.get().map_or(e, |t| Error::ZeroSpeed { t })),
    }
}

/// `∫ κ² dt` over `[t0, t1]`.
pub fn segment_energy<C: CurveEvaluator + ?Sized>(
    c: &C,
    t0: f64,
    t1: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    integrate_segment(c, t0, t1, cfg, Functional::Energy)
}

/// `∫ κ̇² dt` over `[t0, t1]`.
pub fn segment_variation<C: CurveEvaluator + ?Sized>(
    c: &C,
    t0: f64,
    t1: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    integrate_segment(c, t0, t1, cfg, Functional::Variation)
}

/// `∫ κ² dt` over the whole real line.
///
/// `mapping` places the `tan` substitution; centering it on the region where
/// the curve bends (and scaling it to that region's width) keeps the
/// transformed integrand well resolved.
pub fn whole_line_energy<C: CurveEvaluator + ?Sized>(
    c: &C,
    mapping: LineMapping,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    integrate_line(c, mapping, cfg, Functional::Energy)
}

/// `∫ κ̇² dt` over the whole real line.
pub fn whole_line_variation<C: CurveEvaluator + ?Sized>(
    c: &C,
    mapping: LineMapping,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    integrate_line(c, mapping, cfg, Functional::Variation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use std::f64::consts::PI;

    /// `(x(t), y(t))` with polynomial coordinates, coefficients lowest order first.
    struct Poly {
        x: Vec<f64>,
        y: Vec<f64>,
    }

    fn poly_derivs(c: &[f64], t: f64) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (k, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (n, &a) in c.iter().enumerate().skip(k) {
                let falling: f64 = (0..k).map(|j| (n - j) as f64).product();
                acc += a * falling * t.powi((n - k) as i32);
            }
            *o = acc;
        }
        out
    }

    impl CurveEvaluator for Poly {
        fn derivatives(&self, t: f64) -> Derivatives {
            let x = poly_derivs(&self.x, t);
            let y = poly_derivs(&self.y, t);
            Derivatives {
                position: Vec2::new(x[0], y[0]),
                first: Vec2::new(x[1], y[1]),
                second: Vec2::new(x[2], y[2]),
                third: Vec2::new(x[3], y[3]),
            }
        }
    }

    fn parabola(a: f64, b: f64, c: f64) -> Poly {
        Poly {
            x: vec![0.0, 1.0],
            y: vec![c, b, a],
        }
    }

    #[test]
    fn curvature_examples() {
        let p = parabola(1.0, 0.0, 0.0);
        assert_eq!(curvature(&p, 0.0).unwrap(), 2.0);
        let expected = 2.0 / 5f64.powf(1.5);
        assert!((curvature(&p, 1.0).unwrap() - expected).abs() < 1e-15);
        let line = Poly {
            x: vec![0.0, 1.0],
            y: vec![0.0],
        };
        for t in [-3.0, 0.0, 2.5] {
            assert_eq!(curvature(&line, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn curvature_rate_examples() {
        let p = parabola(1.0, 0.0, 0.0);
        assert_eq!(curvature_rate(&p, 0.0).unwrap(), 0.0);
        let expected = -24.0 / 5f64.powf(2.5);
        assert!((curvature_rate(&p, 1.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn curvature_rate_matches_finite_difference_on_cubics() {
        let cubics = [
            Poly {
                x: vec![0.0, 1.0, 0.5, -0.3],
                y: vec![1.0, -2.0, 0.7, 0.9],
            },
            Poly {
                x: vec![2.0, 0.3, -1.0, 0.25],
                y: vec![0.0, 1.5, 0.2, -0.6],
            },
        ];
        let h = 1e-6;
        for c in &cubics {
            for i in 0..20 {
                let t = -1.0 + 0.1 * i as f64;
                let fd = (curvature(c, t + h).unwrap() - curvature(c, t - h).unwrap()) / (2.0 * h);
                let exact = curvature_rate(c, t).unwrap();
                assert!(
                    (fd - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                    "t={t} {fd} {exact}"
                );
            }
        }
    }

    #[test]
    fn zero_speed_is_an_error() {
        // (t^2, t^3) has a cusp at the origin
        let cusp = Poly {
            x: vec![0.0, 0.0, 1.0],
            y: vec![0.0, 0.0, 0.0, 1.0],
        };
        assert_eq!(curvature(&cusp, 0.0), Err(Error::ZeroSpeed { t: 0.0 }));
        assert_eq!(curvature_rate(&cusp, 0.0), Err(Error::ZeroSpeed { t: 0.0 }));
        let cfg = QuadratureConfig::default();
        // Quadrature samples the midpoint first.
        let e = segment_energy(&cusp, -1.0, 1.0, &cfg).unwrap_err();
        assert_eq!(e, Error::ZeroSpeed { t: 0.0 });
    }

    #[test]
    fn straight_segment_has_no_energy() {
        let line = Poly {
            x: vec![1.0, 2.0],
            y: vec![-1.0, 3.0],
        };
        let cfg = QuadratureConfig::default();
        assert_eq!(segment_energy(&line, 0.0, 4.0, &cfg).unwrap(), 0.0);
        assert_eq!(segment_variation(&line, 0.0, 4.0, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn bad_interval_is_rejected() {
        let p = parabola(1.0, 0.0, 0.0);
        let cfg = QuadratureConfig::default();
        assert!(matches!(
            segment_energy(&p, 1.0, 1.0, &cfg),
            Err(Error::DomainError { .. })
        ));
        assert!(matches!(
            segment_variation(&p, 2.0, 1.0, &cfg),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn whole_line_energy_of_unit_parabola() {
        let cfg = QuadratureConfig::default();
        let e = whole_line_energy(&parabola(1.0, 0.0, 0.0), LineMapping::default(), &cfg).unwrap();
        assert!((e - 0.75 * PI).abs() < 1e-6 * 0.75 * PI);
    }

    #[test]
    fn whole_line_laws_for_graph_parabolas() {
        // Energy is (3π/4)|a|. Variation integrates to (45π/16)|a|³; the two
        // agree with the (45π/16)|a| constant only at |a| = 1.
        let cfg = QuadratureConfig::default();
        for a in [0.5, 1.0, 2.0, -1.5] {
            for (b, c) in [(0.0, 0.0), (1.3, -2.0), (-4.0, 7.0)] {
                let p = parabola(a, b, c);
                let m = LineMapping::new(-b / (2.0 * a), 1.0 / (2.0 * a.abs()));
                let e = whole_line_energy(&p, m, &cfg).unwrap();
                let v = whole_line_variation(&p, m, &cfg).unwrap();
                let e_exact = 0.75 * PI * a.abs();
                let v_exact = 45.0 * PI / 16.0 * a.abs().powi(3);
                assert!((e - e_exact).abs() < 1e-6 * e_exact, "a={a} b={b} E={e}");
                assert!((v - v_exact).abs() < 1e-6 * v_exact, "a={a} b={b} V={v}");
                assert!((v / e - 3.75 * a * a).abs() < 1e-6 * 3.75 * a * a);
            }
        }
    }

    #[test]
    fn reflection_negates_curvature_only() {
        let p = Poly {
            x: vec![0.0, 1.0, 0.5, -0.3],
            y: vec![1.0, -2.0, 0.7, 0.9],
        };
        let r = Poly {
            x: p.x.clone(),
            y: p.y.iter().map(|v| -v).collect(),
        };
        let cfg = QuadratureConfig::default();
        for t in [-0.5, 0.0, 0.7] {
            assert!((curvature(&p, t).unwrap() + curvature(&r, t).unwrap()).abs() < 1e-15);
        }
        let (e1, e2) = (
            segment_energy(&p, 0.0, 1.0, &cfg).unwrap(),
            segment_energy(&r, 0.0, 1.0, &cfg).unwrap(),
        );
        let (v1, v2) = (
            segment_variation(&p, 0.0, 1.0, &cfg).unwrap(),
            segment_variation(&r, 0.0, 1.0, &cfg).unwrap(),
        );
        assert!((e1 - e2).abs() <= 1e-9 * e1);
        assert!((v1 - v2).abs() <= 1e-9 * v1);
    }

    #[test]
    fn energy_is_additive() {
        let p = Poly {
            x: vec![0.0, 1.0, 0.5, -0.3],
            y: vec![1.0, -2.0, 0.7, 0.9],
        };
        let cfg = QuadratureConfig::default();
        let whole = segment_energy(&p, -1.0, 2.0, &cfg).unwrap();
        let parts = segment_energy(&p, -1.0, 0.3, &cfg).unwrap()
            + segment_energy(&p, 0.3, 2.0, &cfg).unwrap();
        assert!((whole - parts).abs() <= 4.0 * cfg.rel_tol * whole + 2.0 * cfg.abs_tol);
        let whole = segment_variation(&p, -1.0, 2.0, &cfg).unwrap();
        let parts = segment_variation(&p, -1.0, 0.3, &cfg).unwrap()
            + segment_variation(&p, 0.3, 2.0, &cfg).unwrap();
        assert!((whole - parts).abs() <= 4.0 * cfg.rel_tol * whole + 2.0 * cfg.abs_tol);
    }
}
