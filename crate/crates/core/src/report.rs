//! Fairness comparison across point sets and tangent methods.
//!
//! Each cell builds the spline for one (set, method) pair and integrates
//! `κ²` and `κ̇²` over the second segment, `t2 < t < t3`, in the curve
//! parameter.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fairness::{segment_energy, segment_variation};
use crate::pointset::PointSetFile;
use crate::quadrature::QuadratureConfig;
use crate::spline::{build_spline, KnotConvention, TangentMethod};

/// Segment whose energy and variation are reported (between the 2nd and 3rd points).
pub const REPORTED_SEGMENT: usize = 1;
/// Minimum number of points a compared set must have.
pub const MIN_COMPARE_POINTS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub enum CellStatus {
    Ok,
    Failed(String),
}

impl CellStatus {
    fn render(&self) -> String {
        match self {
            CellStatus::Ok => "ok".to_string(),
            CellStatus::Failed(msg) => format!("failed: {msg}"),
        }
    }

    fn parse(s: &str) -> Self {
        match s.strip_prefix("failed: ") {
            Some(msg) => CellStatus::Failed(msg.to_string()),
            None if s == "failed:" => CellStatus::Failed(String::new()),
            None => CellStatus::Ok,
        }
    }
}

/// One (set, method) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub set: String,
    pub method: TangentMethod,
    pub energy: Option<f64>,
    pub variation: Option<f64>,
    pub knot_convention: String,
    pub status: CellStatus,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ReportRow>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CompareOptions {
    pub knots: KnotConvention,
    pub quadrature: QuadratureConfig,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    set: String,
    method: String,
    params: String,
    #[serde(rename = "E")]
    energy: String,
    #[serde(rename = "V")]
    variation: String,
    knot_convention: String,
    status: String,
}

/// 17 significant digits, enough to reproduce any `f64` exactly.
pub fn format_exact(x: f64) -> String {
    format!("{x:.16e}")
}

/// Four significant digits for human-readable tables.
pub fn format_short(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn evaluate_cell(
    set: &PointSetFile,
    method: TangentMethod,
    opts: &CompareOptions,
) -> Result<(f64, f64)> {
    if set.points.len() < MIN_COMPARE_POINTS {
        return Err(Error::TooFewPoints {
            required: MIN_COMPARE_POINTS,
            got: set.points.len(),
        });
    }
    let knots = match &set.knots {
        Some(k) => k.clone(),
        None => opts.knots.knots_for(&set.points)?,
    };
    let spline = build_spline(&set.points, &knots, method)?;
    let seg = spline.segment(REPORTED_SEGMENT)?;
    let energy = segment_energy(&seg, seg.t0, seg.t1, &opts.quadrature)?;
    let variation = segment_variation(&seg, seg.t0, seg.t1, &opts.quadrature)?;
    Ok((energy, variation))
}

/// Evaluate every (set, method) cell. Failures are recorded per cell.
pub fn compare(
    sets: &[PointSetFile],
    methods: &[TangentMethod],
    opts: &CompareOptions,
) -> ComparisonReport {
    let cells: Vec<(&PointSetFile, TangentMethod)> = sets
        .iter()
        .flat_map(|s| methods.iter().map(move |&m| (s, m)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(set, method)| {
            let knot_convention = match set.knots {
                Some(_) => "explicit".to_string(),
                None => opts.knots.to_string(),
            };
            let (energy, variation, status) = match evaluate_cell(set, method, opts) {
                Ok((e, v)) => (Some(e), Some(v), CellStatus::Ok),
                Err(e) => (None, None, CellStatus::Failed(e.to_string())),
            };
            ReportRow {
                set: set.name.clone(),
                method,
                energy,
                variation,
                knot_convention,
                status,
            }
        })
        .collect();
    ComparisonReport { rows }
}

/// Error returned when reading a report back from CSV.
#[derive(Debug, thiserror::Error)]
pub enum ReportParseError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Field { row: usize, message: String },
}

impl ComparisonReport {
    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| r.status != CellStatus::Ok)
    }

    /// Columns `set,method,params,E,V,knot_convention,status`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(CsvRow {
                set: r.set.clone(),
                method: r.method.name().to_string(),
                params: r.method.params(),
                energy: r.energy.map(format_exact).unwrap_or_default(),
                variation: r.variation.map(format_exact).unwrap_or_default(),
                knot_convention: r.knot_convention.clone(),
                status: r.status.render(),
            })
            .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
    }

    pub fn from_csv(text: &str) -> Result<Self, ReportParseError> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (i, rec) in reader.deserialize::<CsvRow>().enumerate() {
            let rec = rec?;
            let field_err = |message: String| ReportParseError::Field {
                row: i + 1,
                message,
            };
            let number = |s: &str| -> Result<Option<f64>, ReportParseError> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse()
                        .map(Some)
                        .map_err(|_| field_err(format!("bad number `{s}`")))
                }
            };
            rows.push(ReportRow {
                method: TangentMethod::from_parts(&rec.method, &rec.params)
                    .map_err(|e| field_err(e.to_string()))?,
                energy: number(&rec.energy)?,
                variation: number(&rec.variation)?,
                status: CellStatus::parse(&rec.status),
                set: rec.set,
                knot_convention: rec.knot_convention,
            });
        }
        Ok(ComparisonReport { rows })
    }

    /// Aligned text table: one column per method, E and V rows per set.
    pub fn to_text(&self) -> String {
        let mut methods: Vec<TangentMethod> = Vec::new();
        let mut sets: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !methods.contains(&r.method) {
                methods.push(r.method);
            }
            if !sets.contains(&r.set.as_str()) {
                sets.push(&r.set);
            }
        }
        let headers: Vec<String> = methods.iter().map(|m| m.to_string()).collect();
        let cell = |set: &str, m: &TangentMethod, energy: bool| -> String {
            self.rows
                .iter()
                .find(|r| r.set == set && r.method == *m)
                .map(|r| match (energy, r.energy, r.variation) {
                    (true, Some(e), _) => format_short(e),
                    (false, _, Some(v)) => format_short(v),
                    _ => "failed".to_string(),
                })
                .unwrap_or_else(|| "-".to_string())
        };
        let mut lines: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["set".to_string(), String::new()];
        header.extend(headers.iter().cloned());
        lines.push(header);
        for set in &sets {
            for (label, energy) in [("E", true), ("V", false)] {
                let mut line = vec![
                    if energy {
                        set.to_string()
                    } else {
                        String::new()
                    },
                    label.to_string(),
                ];
                line.extend(methods.iter().map(|m| cell(set, m, energy)));
                lines.push(line);
            }
        }
        let ncols = lines[0].len();
        let widths: Vec<usize> = (0..ncols)
            .map(|c| {
                lines
                    .iter()
                    .map(|l| l[c].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();

        let mut out = String::new();
        let conventions: Vec<&str> = {
            let mut v: Vec<&str> = self
                .rows
                .iter()
                .map(|r| r.knot_convention.as_str())
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let _ = writeln!(out, "# E = ∫ κ² dt, V = ∫ (dκ/dt)² dt over t2 < t < t3");
        let _ = writeln!(
            out,
            "# integrated in the curve parameter t, not in arc length"
        );
        let _ = writeln!(out, "# knots: {}", conventions.join(", "));
        if methods
            .iter()
            .any(|m| matches!(m, TangentMethod::KochanekBartels { .. }))
        {
            let _ = writeln!(
                out,
                "# kochanek-bartels tangents have no knot-span divisor; tau and gamma are 0 unless listed"
            );
        }
        for (i, line) in lines.iter().enumerate() {
            let mut text = String::new();
            for (c, field) in line.iter().enumerate() {
                if c > 0 {
                    text.push_str("  ");
                }
                if c < 2 {
                    let _ = write!(text, "{field:<w$}", w = widths[c]);
                } else {
                    let _ = write!(text, "{field:>w$}", w = widths[c]);
                }
            }
            out.push_str(text.trim_end());
            out.push('\n');
            if i == 0 {
                let total: usize = widths.iter().sum::<usize>() + 2 * (ncols - 1);
                out.push_str(&"-".repeat(total));
                out.push('\n');
            }
        }
        for r in &self.rows {
            if let CellStatus::Failed(msg) = &r.status {
                let _ = writeln!(out, "# {} / {}: {}", r.set, r.method, msg);
            }
        }
        out
    }
}
