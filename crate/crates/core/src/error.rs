use thiserror::Error;

/// Errors raised by the geometric and numerical operations of this crate.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    #[error("points are collinear (|cross| = {cross:e}, threshold {threshold:e})")]
    CollinearPoints { cross: f64, threshold: f64 },
    #[error("first and last points coincide (|p3 - p1| = {distance:e})")]
    CoincidentEndpoints { distance: f64 },
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("no root of the minimizing cubic found in (0, 1)")]
    NoRootInUnitInterval,
    #[error("parameter {value} outside the open interval (0, 1)")]
    DomainError { value: f64 },
    #[error("quadratic is a straight-line traversal (|a1 x a2| = {cross:e})")]
    DegenerateCurve { cross: f64 },
    #[error("curve has zero speed at t = {t}")]
    ZeroSpeed { t: f64 },
    #[error("adaptive quadrature did not converge on [{a}, {b}] (error estimate {error:e})")]
    QuadratureDivergence { a: f64, b: f64, error: f64 },
    #[error("integrand is not finite at t = {t}")]
    NonFiniteIntegrand { t: f64 },
    #[error("at least {required} points are required, got {got}")]
    TooFewPoints { required: usize, got: usize },
    #[error("knot vector invalid: {0}")]
    InvalidKnots(String),
    #[error("segment index {index} out of range (spline has {count} segments)")]
    IndexOutOfRange { index: usize, count: usize },
}

impl Error {
    /// True for errors caused by bad caller input rather than numerical breakdown.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::CollinearPoints { .. }
                | Error::CoincidentEndpoints { .. }
                | Error::NonFinite
                | Error::DomainError { .. }
                | Error::DegenerateCurve { .. }
                | Error::TooFewPoints { .. }
                | Error::InvalidKnots(_)
                | Error::IndexOutOfRange { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
