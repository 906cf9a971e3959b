//! Minimum-energy quadratics through point triples, and cubic Hermite splines
//! whose tangents come from them.
//!
//! - [`geometry`]: plane vectors and canonical normalization of triples.
//! - [`minquad`]: the optimal quadratic, its tangent, length and energy.
//! - [`fairness`]: curvature, energy and curvature-variation functionals.
//! - [`spline`]: Hermite splines under several tangent rules.
//! - [`pointset`], [`report`], [`plot`]: file formats used by the CLI.

// `!(a < b)` is used on purpose so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fairness;
pub mod geometry;
pub mod minquad;
pub mod plot;
pub mod pointset;
pub mod quadrature;
pub mod report;
pub mod spline;

pub use error::{Error, Result};
pub use geometry::{Point2, Vec2, Vector2};
