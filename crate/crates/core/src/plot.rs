//! SVG rendering of a point set and its spline.

use std::fmt::Write as _;

use crate::geometry::{Point2, Vec2};
use crate::report::REPORTED_SEGMENT;
use crate::spline::HermiteSpline;

#[derive(Clone, Debug, PartialEq)]
pub struct PlotOptions {
    /// Polyline vertices per segment (at least 64).
    pub samples_per_segment: usize,
    /// Draw tangent arrows at interior points.
    pub tangents: bool,
    /// Arrow length as a multiple of the tangent vector.
    pub tangent_scale: f64,
    /// Segment drawn in the highlight colour, if it exists.
    pub highlight: Option<usize>,
    /// Pixel length of the longer data axis.
    pub size: f64,
    pub padding: f64,
    pub title: Option<String>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            samples_per_segment: 64,
            tangents: false,
            tangent_scale: 1.0,
            highlight: Some(REPORTED_SEGMENT),
            size: 480.0,
            padding: 40.0,
            title: None,
        }
    }
}

pub const MIN_SAMPLES_PER_SEGMENT: usize = 64;

struct Frame {
    min: Vec2,
    max: Vec2,
    scale: f64,
    padding: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = Point2>, size: f64, padding: f64) -> Frame {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min = Vec2::new(min.x.min(p.x), min.y.min(p.y));
            max = Vec2::new(max.x.max(p.x), max.y.max(p.y));
        }
        let extent = (max.x - min.x).max(max.y - min.y);
        let scale = if extent > 0.0 { size / extent } else { 1.0 };
        Frame {
            min,
            max,
            scale,
            padding,
        }
    }

    fn width(&self) -> f64 {
        (self.max.x - self.min.x) * self.scale + 2.0 * self.padding
    }

    fn height(&self) -> f64 {
        (self.max.y - self.min.y) * self.scale + 2.0 * self.padding
    }

    /// Data to pixel coordinates with the y axis pointing up.
    fn map(&self, p: Point2) -> (f64, f64) {
        (
            self.padding + (p.x - self.min.x) * self.scale,
            self.padding + (self.max.y - p.y) * self.scale,
        )
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Render the spline as an SVG 1.1 document. Output depends only on the inputs.
pub fn render_svg(spline: &HermiteSpline, opts: &PlotOptions) -> String {
    let samples = opts.samples_per_segment.max(MIN_SAMPLES_PER_SEGMENT);
    let segments: Vec<Vec<Point2>> = (0..spline.segment_count())
        .map(|i| spline.segment(i).expect("in range").sample(samples))
        .collect();
    let n = spline.points().len();
    let arrows: Vec<(Point2, Point2)> = if opts.tangents {
        (1..n.saturating_sub(1))
            .map(|i| {
                let p = spline.points()[i];
                (p, p + spline.tangents()[i] * opts.tangent_scale)
            })
            .collect()
    } else {
        Vec::new()
    };

    let frame = Frame::fit(
        segments
            .iter()
            .flatten()
            .copied()
            .chain(spline.points().iter().copied())
            .chain(arrows.iter().map(|a| a.1)),
        opts.size,
        opts.padding,
    );

    let mut svg = String::new();
    let (w, h) = (frame.width(), frame.height());
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let title = opts
        .title
        .clone()
        .unwrap_or_else(|| format!("{} spline", spline.method()));
    let _ = writeln!(svg, "  <title>{}</title>", escape(&title));
    if !arrows.is_empty() {
        let _ = writeln!(
            svg,
            r##"  <defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M 0 0 L 10 5 L 0 10 z" fill="#2ca02c"/></marker></defs>"##
        );
    }
    let _ = writeln!(
        svg,
        r#"  <rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="white"/>"#
    );

    for (i, pts) in segments.iter().enumerate() {
        let (class, colour, width) = if opts.highlight == Some(i) {
            ("segment highlight", "#d62728", 2.5)
        } else {
            ("segment", "#1f77b4", 1.5)
        };
        let mut coords = String::new();
        for (k, p) in pts.iter().enumerate() {
            let (x, y) = frame.map(*p);
            if k > 0 {
                coords.push(' ');
            }
            let _ = write!(coords, "{x:.3},{y:.3}");
        }
        let _ = writeln!(
            svg,
            r#"  <polyline class="{class}" fill="none" stroke="{colour}" stroke-width="{width}" points="{coords}"/>"#
        );
    }

    for (from, to) in &arrows {
        let (x1, y1) = frame.map(*from);
        let (x2, y2) = frame.map(*to);
        let _ = writeln!(
            svg,
            r##"  <line class="tangent" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="#2ca02c" stroke-width="1.5" marker-end="url(#arrow)"/>"##
        );
    }

    for p in spline.points() {
        let (x, y) = frame.map(*p);
        let _ = writeln!(
            svg,
            r#"  <circle class="control-point" cx="{x:.3}" cy="{y:.3}" r="4" fill="black"/>"#
        );
    }
    svg.push_str("</svg>\n");
    svg
}
