//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals and on the
//! whole real line via `t = center + scale * tan(u)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Tolerances for adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections applied to any one subinterval.
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 50,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_depth: u32) -> Result<Self> {
        let cfg = QuadratureConfig {
            rel_tol,
            abs_tol,
            max_depth,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_depth >= 1;
        if ok && self.rel_tol.is_finite() && self.abs_tol.is_finite() {
            Ok(())
        } else {
            Err(Error::DomainError {
                value: if self.rel_tol > 0.0 {
                    self.abs_tol
                } else {
                    self.rel_tol
                },
            })
        }
    }
}

/// Integral value with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Hard cap on subintervals kept in the work queue.
const MAX_INTERVALS: usize = 200_000;

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, depth: u32) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFiniteIntegrand { t: x })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = WGK[7] * fc.abs();
    let mut values = [0.0; 15];
    values[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        values[j] = f1;
        values[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((values[j] - mean).abs() + (values[14 - j] - mean).abs());
    }

    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(roundoff);
    }
    Ok(Panel {
        a,
        b,
        value,
        error,
        depth,
    })
}

/// Integrate `f` over `[a, b]` to `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite);
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }

    let first = gauss_kronrod(&f, a, b, 0)?;
    let mut evaluations = 15;
    let mut total = first.value;
    let mut total_error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        let tolerance = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_error <= tolerance {
            break;
        }
        let worst = heap.pop().expect("work queue never empties");
        if worst.depth >= cfg.max_depth || heap.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureDivergence {
                a,
                b,
                error: total_error,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(&f, worst.a, mid, worst.depth + 1)?;
        let right = gauss_kronrod(&f, mid, worst.b, worst.depth + 1)?;
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed drift from the running updates.
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Estimate {
        value,
        error,
        evaluations,
    })
}

/// Affine placement of the `tan` substitution used for whole-line integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineMapping {
    pub center: f64,
    pub scale: f64,
}

impl Default for LineMapping {
    fn default() -> Self {
        LineMapping {
            center: 0.0,
            scale: 1.0,
        }
    }
}

impl LineMapping {
    pub fn new(center: f64, scale: f64) -> Self {
        LineMapping { center, scale }
    }
}

/// Integrate `f` over the whole real line using `t = center + scale * tan(u)`.
pub fn integrate_whole_line<F: Fn(f64) -> f64>(
    f: F,
    mapping: LineMapping,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !(mapping.scale > 0.0 && mapping.scale.is_finite() && mapping.center.is_finite()) {
        return Err(Error::DomainError {
            value: mapping.scale,
        });
    }
    let g = |u: f64| {
        let c = u.cos();
        let t = mapping.center + mapping.scale * u.tan();
        let y = f(t);
        // The integrand decays faster than the Jacobian grows; treat underflow as zero.
        if y == 0.0 {
            0.0
        } else {
            y * mapping.scale / (c * c)
        }
    };
    integrate(g, -FRAC_PI_2, FRAC_PI_2, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|x| 3.0 * x * x + 2.0 * x + 1.0, 0.0, 2.0, &cfg).unwrap();
        assert!((r.value - 14.0).abs() < 1e-13);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn oscillatory_and_peaked() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|x: f64| x.sin(), 0.0, PI, &cfg).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        // 1/(1+(100 x)^2) on [-1,1] = atan(100)/50
        let r = integrate(|x: f64| 1.0 / (1.0 + 1e4 * x * x), -1.0, 1.0, &cfg).unwrap();
        let exact = 100f64.atan() / 50.0;
        assert!((r.value - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn reversed_interval_negates() {
        let cfg = QuadratureConfig::default();
        let a = integrate(|x: f64| x.exp(), 0.0, 1.0, &cfg).unwrap().value;
        let b = integrate(|x: f64| x.exp(), 1.0, 0.0, &cfg).unwrap().value;
        assert!((a + b).abs() < 1e-14);
    }

    #[test]
    fn whole_line_lorentzian() {
        let cfg = QuadratureConfig::default();
        let r =
            integrate_whole_line(|t| 1.0 / (1.0 + t * t), LineMapping::default(), &cfg).unwrap();
        assert!((r.value - PI).abs() < 1e-10);
        // shifted, narrow Lorentzian integrates to pi as well
        let w = 1e-3;
        let f = |t: f64| w / ((t - 40.0).powi(2) + w * w);
        let r = integrate_whole_line(f, LineMapping::new(40.0, w), &cfg).unwrap();
        assert!((r.value - PI).abs() < 1e-9);
    }

    #[test]
    fn divergence_is_reported() {
        let cfg = QuadratureConfig::new(1e-10, 1e-12, 6).unwrap();
        let err = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::QuadratureDivergence { .. }));
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let cfg = QuadratureConfig::default();
        let err = integrate(|_| f64::NAN, 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::NonFiniteIntegrand { .. }));
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(0.0, 1e-12, 50).is_err());
        assert!(QuadratureConfig::new(1e-10, -1.0, 50).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-12, 0).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-12, 1).is_ok());
    }
}
