//! Point-set files: plain CSV (`x,y` per line) and a JSON document with
//! `name`, `points` and optional `knots`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Point2, Vec2};
use crate::spline::KnotVector;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid point set: {0}")]
    Validation(String),
}

/// A named, ordered point set with optional explicit knots.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSetFile {
    pub name: String,
    pub points: Vec<Point2>,
    pub knots: Option<KnotVector>,
}

impl PointSetFile {
    pub fn new(
        name: impl Into<String>,
        points: Vec<Point2>,
        knots: Option<Vec<f64>>,
    ) -> Result<Self, LoadError> {
        let name = name.into();
        if points.len() < 2 {
            return Err(LoadError::Validation(format!(
                "`{name}` has {} point(s); at least 2 are required",
                points.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(LoadError::Validation(format!(
                "`{name}` has a non-finite coordinate"
            )));
        }
        let knots = match knots {
            None => None,
            Some(k) if k.len() != points.len() => {
                return Err(LoadError::Validation(format!(
                    "`{name}` has {} knots for {} points",
                    k.len(),
                    points.len()
                )))
            }
            Some(k) => Some(KnotVector::new(k).map_err(|e| LoadError::Validation(e.to_string()))?),
        };
        Ok(PointSetFile {
            name,
            points,
            knots,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointFormat {
    Csv,
    Json,
}

impl PointFormat {
    fn detect(path: &Path, text: &str) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
        {
            Some(ext) if ext == "json" => PointFormat::Json,
            Some(ext) if ext == "csv" || ext == "txt" => PointFormat::Csv,
            _ if text.trim_start().starts_with('{') => PointFormat::Json,
            _ => PointFormat::Csv,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonPointSet {
    name: Option<String>,
    points: Vec<[f64; 2]>,
    #[serde(default)]
    knots: Option<Vec<f64>>,
}

fn parse_field(field: &str, line: usize, column: usize) -> Result<f64, LoadError> {
    let value: f64 = field.trim().parse().map_err(|_| LoadError::Parse {
        line,
        column,
        message: format!("expected a number, found `{}`", field.trim()),
    })?;
    if !value.is_finite() {
        return Err(LoadError::Parse {
            line,
            column,
            message: format!("non-finite coordinate `{}`", field.trim()),
        });
    }
    Ok(value)
}

/// Parse CSV text; a first line with no numeric field is taken as a header.
pub fn parse_csv(name: &str, text: &str) -> Result<PointSetFile, LoadError> {
    let mut points = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let line = if idx == 0 {
            line.trim_start_matches('\u{feff}')
        } else {
            line
        };
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<(usize, &str)> = {
            let mut col = 1;
            line.split(',')
                .map(|f| {
                    let start = col + (f.len() - f.trim_start().len());
                    col += f.chars().count() + 1;
                    (start, f)
                })
                .collect()
        };
        let is_header =
            !seen_content && fields.iter().all(|(_, f)| f.trim().parse::<f64>().is_err());
        seen_content = true;
        if is_header {
            continue;
        }
        if fields.len() != 2 {
            return Err(LoadError::Parse {
                line: line_no,
                column: 1,
                message: format!("expected 2 fields `x,y`, found {}", fields.len()),
            });
        }
        let x = parse_field(fields[0].1, line_no, fields[0].0)?;
        let y = parse_field(fields[1].1, line_no, fields[1].0)?;
        points.push(Vec2::new(x, y));
    }
    PointSetFile::new(name, points, None)
}

/// Parse the structured JSON form.
pub fn parse_json(default_name: &str, text: &str) -> Result<PointSetFile, LoadError> {
    let doc: JsonPointSet = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let points = doc.points.into_iter().map(Vec2::from).collect();
    PointSetFile::new(
        doc.name.unwrap_or_else(|| default_name.to_string()),
        points,
        doc.knots,
    )
}

/// Serialize to the structured JSON form.
pub fn to_json(set: &PointSetFile) -> String {
    let doc = JsonPointSet {
        name: Some(set.name.clone()),
        points: set.points.iter().map(|p| [p.x, p.y]).collect(),
        knots: set.knots.as_ref().map(|k| k.as_slice().to_vec()),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

/// Load a point set, detecting the format from the extension (or content)
/// when `format` is `None`.
pub fn load_point_set(path: &Path, format: Option<PointFormat>) -> Result<PointSetFile, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("points")
        .to_string();
    match format.unwrap_or_else(|| PointFormat::detect(path, &text)) {
        PointFormat::Csv => parse_csv(&name, &text),
        PointFormat::Json => parse_json(&name, &text),
    }
}

/// The four benchmark four-point sets.
pub const BENCHMARK_SETS: [[(f64, f64); 4]; 4] = [
    [(0.0, 0.0), (1.0, 3.0), (2.0, 1.0), (3.0, 2.0)],
    [(0.0, 0.0), (0.0, 3.0), (3.0, 3.0), (3.0, 0.0)],
    [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 3.0)],
    [(0.0, 0.0), (1.0, 0.0), (2.0, 1.0), (3.0, 3.0)],
];

/// Built-in set `index` (1-based), named `set1` .. `set4`.
pub fn builtin_set(index: usize) -> Option<PointSetFile> {
    let coords = BENCHMARK_SETS.get(index.checked_sub(1)?)?;
    let points = coords.iter().map(|&p| Vec2::from(p)).collect();
    Some(PointSetFile {
        name: format!("set{index}"),
        points,
        knots: None,
    })
}

pub fn builtin_sets() -> Vec<PointSetFile> {
    (1..=BENCHMARK_SETS.len()).filter_map(builtin_set).collect()
}

/// Resolve a source argument: `set1`..`set4` (or `builtin:N`) name a
/// built-in set, anything else is a file path.
pub fn resolve_source(
    source: &str,
    format: Option<PointFormat>,
) -> Result<PointSetFile, LoadError> {
    let builtin = source
        .strip_prefix("builtin:")
        .or_else(|| source.strip_prefix("set"))
        .and_then(|n| n.parse::<usize>().ok())
        .and_then(builtin_set);
    match builtin {
        Some(set) if !Path::new(source).exists() => Ok(set),
        _ => load_point_set(Path::new(source), format),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_point_set_one() {
        let set = parse_csv("s", "0,0\n1,3\n2,1\n3,2").unwrap();
        assert_eq!(set.points, builtin_set(1).unwrap().points);
        assert!(set.knots.is_none());
    }

    #[test]
    fn csv_header_and_crlf() {
        let set = parse_csv("s", "x, y\r\n0, 0\r\n1.5,-2e1\r\n\r\n").unwrap();
        assert_eq!(set.points, vec![Vec2::new(0.0, 0.0), Vec2::new(1.5, -20.0)]);
    }

    #[test]
    fn empty_csv_is_invalid() {
        assert!(matches!(parse_csv("s", ""), Err(LoadError::Validation(_))));
        assert!(matches!(
            parse_csv("s", "x,y\n1,2\n"),
            Err(LoadError::Validation(_))
        ));
    }

    #[test]
    fn non_numeric_token_reports_location() {
        match parse_csv("s", "0,0\n1,3\n2, abc\n") {
            Err(LoadError::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_csv("s", "0,0\n1,2,3\n"),
            Err(LoadError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_csv("s", "0,0\n1,inf\n"),
            Err(LoadError::Parse {
                line: 2,
                column: 3,
                ..
            })
        ));
    }

    #[test]
    fn json_with_knots() {
        let set = parse_json(
            "d",
            r#"{"name":"a","points":[[0,0],[1,1],[2,0]],"knots":[0,0.5,2]}"#,
        )
        .unwrap();
        assert_eq!(set.name, "a");
        assert_eq!(set.knots.unwrap().as_slice(), &[0.0, 0.5, 2.0]);
        let bad = parse_json("d", r#"{"points":[[0,0],[1,1]],"knots":[1,0]}"#);
        assert!(matches!(bad, Err(LoadError::Validation(_))));
        let short = parse_json("d", r#"{"points":[[0,0],[1,1]],"knots":[0]}"#);
        assert!(matches!(short, Err(LoadError::Validation(_))));
        assert!(matches!(
            parse_json("d", "{\"points\": [[0,"),
            Err(LoadError::Parse { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let set = PointSetFile::new(
            "r",
            vec![Vec2::new(0.1, 0.2), Vec2::new(3.0, -1.0)],
            Some(vec![0.0, 1.5]),
        )
        .unwrap();
        assert_eq!(parse_json("x", &to_json(&set)).unwrap(), set);
    }

    #[test]
    fn builtin_sets_match_benchmark_coordinates() {
        let sets = builtin_sets();
        assert_eq!(sets.len(), 4);
        let expected: [&[(f64, f64)]; 4] = [
            &[(0.0, 0.0), (1.0, 3.0), (2.0, 1.0), (3.0, 2.0)],
            &[(0.0, 0.0), (0.0, 3.0), (3.0, 3.0), (3.0, 0.0)],
            &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 3.0)],
            &[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0), (3.0, 3.0)],
        ];
        for (set, want) in sets.iter().zip(expected) {
            let got: Vec<(f64, f64)> = set.points.iter().map(|p| (p.x, p.y)).collect();
            assert_eq!(got, want);
        }
        assert!(builtin_set(0).is_none());
        assert!(builtin_set(5).is_none());
        assert_eq!(resolve_source("set3", None).unwrap().name, "set3");
        assert_eq!(resolve_source("builtin:2", None).unwrap().name, "set2");
    }
}
