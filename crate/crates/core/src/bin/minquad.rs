//! `minquad` command-line front end.
//!
//! Exit status: 0 on success, 1 on internal or quadrature failure, 2 on invalid input.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use minquad::geometry::{Point2, Vec2};
use minquad::minquad::{
    arc_length_closed, build_solution, cubic_roots, tangent_at_p2, ArcLengthMethod,
};
use minquad::plot::{render_svg, PlotOptions};
use minquad::pointset::{builtin_sets, resolve_source, LoadError, PointFormat, PointSetFile};
use minquad::quadrature::QuadratureConfig;
use minquad::report::{compare, format_exact, CompareOptions, MIN_COMPARE_POINTS};
use minquad::spline::{build_spline, KnotConvention, TangentMethod};

#[derive(Parser)]
#[command(
    name = "minquad",
    version,
    about = "Minimum-energy quadratics and Hermite spline fairness"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Knot spacing for point sets without explicit knots.
    #[arg(long, global = true, env = "MQS_KNOTS", default_value = "uniform")]
    knots: KnotConvention,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, env = "MQS_TOL_REL", default_value_t = 1e-10)]
    tol_rel: f64,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, env = "MQS_TOL_ABS", default_value_t = 1e-12)]
    tol_abs: f64,
    /// Output format.
    #[arg(long, global = true, env = "MQS_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Point-file format; detected from the extension when omitted.
    #[arg(long, global = true, value_enum)]
    input_format: Option<InputFormat>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// The six method columns of the standard comparison table.
    Table1,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the minimum-energy quadratic through three points given as `x,y`.
    Solve {
        #[arg(allow_hyphen_values = true, value_parser = parse_point)]
        p1: Point2,
        #[arg(allow_hyphen_values = true, value_parser = parse_point)]
        p2: Point2,
        #[arg(allow_hyphen_values = true, value_parser = parse_point)]
        p3: Point2,
    },
    /// Tabulate energy and curvature variation of the t2..t3 segment.
    Compare {
        /// Point files, or `set1`..`set4`. Defaults to the four built-in sets.
        sources: Vec<String>,
        /// Tangent method, e.g. `min-energy`, `catmull-rom`, `cardinal:0.5`, `kb:0,0.5,0`.
        #[arg(long = "method", short = 'm')]
        methods: Vec<TangentMethod>,
        /// Add a built-in method list.
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// Write the report to a file instead of stdout.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Render a point set and its spline as SVG.
    Plot {
        /// Point file, or `set1`..`set4`.
        source: String,
        #[arg(long, short = 'm', default_value = "min-energy")]
        method: TangentMethod,
        #[arg(long, short = 'o')]
        output: PathBuf,
        /// Draw tangent arrows at interior points.
        #[arg(long)]
        tangents: bool,
        /// Polyline samples per segment.
        #[arg(long, env = "MQS_SAMPLES", default_value_t = 64)]
        samples: usize,
    },
}

fn parse_point(s: &str) -> Result<Point2, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let x: f64 = x
        .trim()
        .parse()
        .map_err(|_| format!("bad x coordinate in `{s}`"))?;
    let y: f64 = y
        .trim()
        .parse()
        .map_err(|_| format!("bad y coordinate in `{s}`"))?;
    if !(x.is_finite() && y.is_finite()) {
        return Err(format!("non-finite coordinate in `{s}`"));
    }
    Ok(Vec2::new(x, y))
}

/// A failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<minquad::Error> for Failure {
    fn from(e: minquad::Error) -> Self {
        if e.is_invalid_input() {
            Failure::invalid(e.to_string())
        } else {
            Failure::internal(e.to_string())
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::invalid(e.to_string())
    }
}

fn quadrature(common: &Common) -> Result<QuadratureConfig, Failure> {
    QuadratureConfig::new(
        common.tol_rel,
        common.tol_abs,
        QuadratureConfig::default().max_depth,
    )
    .map_err(|_| Failure::invalid("quadrature tolerances must be positive and finite"))
}

fn point_format(common: &Common) -> Option<PointFormat> {
    common.input_format.map(|f| match f {
        InputFormat::Csv => PointFormat::Csv,
        InputFormat::Json => PointFormat::Json,
    })
}

fn cmd_solve(common: &Common, p1: Point2, p2: Point2, p3: Point2) -> Result<String, Failure> {
    let sol = build_solution(p1, p2, p3)?;
    let roots = cubic_roots(sol.frame.q2)
        .ok_or_else(|| Failure::internal("cubic has fewer than three real roots"))?;
    let tangent = tangent_at_p2(&sol);
    let arc = arc_length_closed(&sol)?;
    let arc_method = match arc.method {
        ArcLengthMethod::ClosedForm => "closed-form",
        ArcLengthMethod::NumericFallback => "numeric-fallback",
    };
    let c = sol.curve;
    let fields: Vec<(&str, Vec<f64>)> = vec![
        ("T", vec![sol.t]),
        ("roots", roots.roots.to_vec()),
        ("beta", vec![roots.beta]),
        ("gamma", vec![roots.gamma]),
        ("q2", vec![sol.frame.q2.x, sol.frame.q2.y]),
        ("a1", vec![c.a1.x, c.a1.y]),
        ("a2", vec![c.a2.x, c.a2.y]),
        ("a3", vec![c.a3.x, c.a3.y]),
        ("tangent_p2", vec![tangent.x, tangent.y]),
        ("arc_length", vec![arc.value]),
        ("objective", vec![sol.objective]),
    ];
    let mut out = String::new();
    match common.format {
        Format::Csv => {
            out.push_str("key,values\n");
            for (k, vals) in &fields {
                let vals: Vec<String> = vals.iter().map(|v| format_exact(*v)).collect();
                let _ = writeln!(out, "{k},{}", vals.join(" "));
            }
            let _ = writeln!(out, "arc_length_method,{arc_method}");
        }
        Format::Text => {
            for (k, vals) in &fields {
                let vals: Vec<String> = vals.iter().map(|v| format!("{v}")).collect();
                let _ = writeln!(out, "{k:<12} {}", vals.join("  "));
            }
            let _ = writeln!(out, "{:<12} {arc_method}", "arc_method");
        }
    }
    Ok(out)
}

fn cmd_compare(
    common: &Common,
    sources: &[String],
    methods: &[TangentMethod],
    preset: Option<Preset>,
) -> Result<(String, bool), Failure> {
    let sets: Vec<PointSetFile> = if sources.is_empty() {
        builtin_sets()
    } else {
        sources
            .iter()
            .map(|s| resolve_source(s, point_format(common)))
            .collect::<Result<_, _>>()?
    };
    if let Some(short) = sets.iter().find(|s| s.points.len() < MIN_COMPARE_POINTS) {
        return Err(Failure::invalid(format!(
            "`{}` has {} points; compare needs at least {MIN_COMPARE_POINTS}",
            short.name,
            short.points.len()
        )));
    }
    let mut all: Vec<TangentMethod> = Vec::new();
    if preset.is_some() || methods.is_empty() {
        all.extend(TangentMethod::comparison_set());
    }
    for m in methods {
        if !all.contains(m) {
            all.push(*m);
        }
    }
    let opts = CompareOptions {
        knots: common.knots,
        quadrature: quadrature(common)?,
    };
    let report = compare(&sets, &all, &opts);
    let text = match common.format {
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    Ok((text, report.any_failed()))
}

fn cmd_plot(
    common: &Common,
    source: &str,
    method: TangentMethod,
    output: &PathBuf,
    tangents: bool,
    samples: usize,
) -> Result<String, Failure> {
    let set = resolve_source(source, point_format(common))?;
    let knots = match &set.knots {
        Some(k) => k.clone(),
        None => common.knots.knots_for(&set.points)?,
    };
    let spline = build_spline(&set.points, &knots, method)?;
    let opts = PlotOptions {
        samples_per_segment: samples,
        tangents,
        title: Some(format!("{} / {}", set.name, method)),
        ..PlotOptions::default()
    };
    let svg = render_svg(&spline, &opts);
    fs::write(output, svg)
        .map_err(|e| Failure::internal(format!("cannot write {}: {e}", output.display())))?;
    Ok(format!("wrote {}\n", output.display()))
}

fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    match &cli.command {
        Command::Solve { p1, p2, p3 } => cmd_solve(&cli.common, *p1, *p2, *p3).map(|s| (s, false)),
        Command::Compare {
            sources,
            methods,
            preset,
            output,
        } => {
            let (text, failed) = cmd_compare(&cli.common, sources, methods, *preset)?;
            match output {
                Some(path) => {
                    fs::write(path, &text).map_err(|e| {
                        Failure::internal(format!("cannot write {}: {e}", path.display()))
                    })?;
                    Ok((format!("wrote {}\n", path.display()), failed))
                }
                None => Ok((text, failed)),
            }
        }
        Command::Plot {
            source,
            method,
            output,
            tangents,
            samples,
        } => {
            cmd_plot(&cli.common, source, *method, output, *tangents, *samples).map(|s| (s, false))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, failed)) => {
            print!("{text}");
            if failed {
                eprintln!("error: one or more cells failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
