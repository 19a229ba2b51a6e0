//! Command-line front end. [`run`] takes the argument list and returns the
//! exit code with captured output, so it can be driven from tests.
//!
//! Exit codes: 0 inner product, 1 not an inner product, 2 inconclusive,
//! 64 usage or configuration error, 65 malformed input data, 66 unreadable
//! input file. Commands other than `classify` exit 0 on success.

pub mod config;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::degeneracy::{
    circumradius_landscape, classify, ClassificationReport, ClassifyOptions, SearchBudget, Verdict,
};
use crate::energies::{
    menger_energy_with, parse_cloud, thickness, EnergyOptions, WeightedPointCloud,
};
use crate::euclid_embed::{four_point_embeddable, DistanceMatrix4, FourPointVerdict};
use crate::menger::{circumradius, circumradius_points, ExtendedRadius, TriangleSides};
use crate::normspace::{NormSpec, Point};
use crate::Error;

pub use config::{ConfigError, NormConfig};
pub use report::ReportDocument;

pub const EXIT_INNER_PRODUCT: i32 = 0;
pub const EXIT_NOT_INNER_PRODUCT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(
    name = "circumnorm",
    version,
    about = "Circumradius-based inner-product tests for normed spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a norm comes from an inner product.
    Classify(ClassifyArgs),
    /// Circumradius of a triangle given by sides or by three points.
    Circumradius(CircumradiusArgs),
    /// Embed a four-point metric space in Euclidean 3-space.
    Embed4(Embed4Args),
    /// Thickness or integral Menger curvature of a weighted point cloud.
    Energy(EnergyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Norm configuration (TOML, or JSON by extension).
    #[arg(long)]
    config: PathBuf,
    /// Sphere center as comma-separated coordinates; defaults to the origin.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    center: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Comma-separated overrides, e.g. `grid=32,starts=4,sections=8,iterations=100`.
    #[arg(long)]
    budget: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = ClassifyOptions::default().margin)]
    margin: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the circumradius landscape of the first section as CSV.
    #[arg(long)]
    emit_plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["sides", "points"]))]
struct CircumradiusArgs {
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"])]
    sides: Option<Vec<f64>>,
    /// File with three points, one per line.
    #[arg(long, requires = "config")]
    points: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct Embed4Args {
    /// File with a 4×4 distance matrix, one row per line.
    #[arg(long)]
    distances: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnergyKind {
    Thickness,
    Menger,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("space").args(["config", "dim"]))]
struct EnergyArgs {
    /// Point table: coordinates per line, optionally followed by a weight.
    #[arg(long)]
    cloud: PathBuf,
    #[arg(long, value_enum)]
    energy: EnergyKind,
    /// Curvature exponent for `menger`.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Norm configuration; Euclidean when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dimension of the Euclidean space, needed to read a weight column.
    #[arg(long)]
    dim: Option<usize>,
    /// Seed for the sampled estimate on large clouds.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::InvalidDistanceMatrix(_)
            | Error::InvalidMetric { .. }
            | Error::CoincidentPoints
            | Error::TooFewPoints { .. }
            | Error::InvalidWeights(_)
            | Error::DimensionMismatch { .. } => EXIT_DATA,
            _ => EXIT_USAGE,
        };
        Failure::new(code, e.to_string())
    }
}

struct Success {
    code: i32,
    stdout: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let result = match cli.command {
        Command::Classify(a) => cmd_classify(&a),
        Command::Circumradius(a) => cmd_circumradius(&a),
        Command::Embed4(a) => cmd_embed4(&a),
        Command::Energy(a) => cmd_energy(&a),
    };
    match result {
        Ok(s) => Outcome {
            code: s.code,
            stdout: s.stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_NO_INPUT, format!("{}: {e}", path.display())))
}

fn load_config(path: &Path) -> Result<(NormConfig, NormSpec), Failure> {
    let text = read_input(path)?;
    let bad = |e: ConfigError| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display()));
    let config = NormConfig::parse_for_path(path, &text).map_err(bad)?;
    let spec = config.to_spec().map_err(bad)?;
    Ok((config, spec))
}

/// Applies `key=value` overrides to the default budget.
fn parse_budget(text: Option<&str>, seed: u64) -> Result<SearchBudget, Failure> {
    let mut budget = SearchBudget {
        seed,
        ..SearchBudget::default()
    };
    let Some(text) = text else {
        return Ok(budget);
    };
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item.split_once('=').ok_or_else(|| {
            Failure::new(
                EXIT_USAGE,
                format!("budget entry `{item}` is not key=value"),
            )
        })?;
        let value: usize = value.trim().parse().map_err(|_| {
            Failure::new(
                EXIT_USAGE,
                format!("budget `{key}` needs a non-negative integer"),
            )
        })?;
        match key.trim() {
            "grid" => budget.grid = value,
            "starts" => budget.refine_starts = value,
            "sections" => budget.sections = value,
            "iterations" => budget.max_iterations = value,
            other => return Err(Failure::new(
                EXIT_USAGE,
                format!(
                    "unknown budget key `{other}` (expected grid, starts, sections, iterations)"
                ),
            )),
        }
    }
    Ok(budget)
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::InnerProduct => EXIT_INNER_PRODUCT,
        Verdict::NotInnerProduct => EXIT_NOT_INNER_PRODUCT,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn cmd_classify(a: &ClassifyArgs) -> Result<Success, Failure> {
    let (config, spec) = load_config(&a.config)?;
    if spec.dim() < 2 {
        return Err(Failure::new(
            EXIT_USAGE,
            format!(
                "{}: classify needs dim >= 2, found {}",
                a.config.display(),
                spec.dim()
            ),
        ));
    }
    let center = match &a.center {
        Some(c) if c.len() != spec.dim() => {
            return Err(Failure::new(
                EXIT_USAGE,
                format!(
                    "--center has {} coordinates, dim is {}",
                    c.len(),
                    spec.dim()
                ),
            ))
        }
        Some(c) => Point::new(c.clone()),
        None => Point::zeros(spec.dim()),
    };
    if !(a.margin.is_finite() && a.margin >= 0.0) {
        return Err(Failure::new(
            EXIT_USAGE,
            "--margin must be finite and non-negative",
        ));
    }
    let budget = parse_budget(a.budget.as_deref(), a.seed)?;
    let options = ClassifyOptions {
        budget,
        margin: a.margin,
        ..ClassifyOptions::default()
    };
    let report = classify(&spec, &center, a.radius, &options)?;
    if let Some(path) = &a.emit_plot {
        let csv = landscape_csv(&spec, a.radius, budget.grid)?;
        std::fs::write(path, csv)
            .map_err(|e| Failure::new(EXIT_NO_INPUT, format!("{}: {e}", path.display())))?;
    }
    let code = verdict_code(report.verdict);
    let stdout = match a.format {
        Format::Json => ReportDocument::new(config, budget, a.margin, report).to_json(),
        Format::Text => classify_text(&report, &budget, a.margin),
    };
    Ok(Success { code, stdout })
}

fn landscape_csv(spec: &NormSpec, r: f64, grid: usize) -> Result<String, Failure> {
    let mut out = String::from("theta_u,theta_v,circumradius\n");
    for (tu, tv, rad) in circumradius_landscape(spec, r, grid)? {
        let cell = rad.map(|x| x.to_string()).unwrap_or_default();
        writeln!(out, "{tu},{tv},{cell}").unwrap();
    }
    Ok(out)
}

fn classify_text(r: &ClassificationReport, budget: &SearchBudget, margin: f64) -> String {
    let mut out = String::new();
    writeln!(out, "verdict: {}", r.verdict).unwrap();
    writeln!(out, "s_estimate: {}", r.s_estimate).unwrap();
    writeln!(out, "sphere: center {} radius {}", r.x0, r.r).unwrap();
    if let Some(w) = &r.witness {
        writeln!(
            out,
            "witness: {} {} {} circumradius {}",
            w.points[0], w.points[1], w.points[2], w.circumradius
        )
        .unwrap();
    }
    writeln!(out, "max_defect: {:e}", r.max_defect).unwrap();
    if let Some(d) = &r.defect_pair {
        writeln!(
            out,
            "defect_pair: u {} v {} defect {:e}",
            d.u, d.v, d.defect
        )
        .unwrap();
    }
    writeln!(
        out,
        "budget: grid {} starts {} sections {} iterations {} seed {} margin {margin:e}",
        budget.grid, budget.refine_starts, budget.sections, budget.max_iterations, budget.seed
    )
    .unwrap();
    out
}

fn cmd_circumradius(a: &CircumradiusArgs) -> Result<Success, Failure> {
    let radius = if let Some(s) = &a.sides {
        circumradius(&TriangleSides::new(s[0], s[1], s[2])?)?
    } else {
        let path = a.points.as_ref().expect("clap enforces the input group");
        let (_, spec) = load_config(a.config.as_ref().expect("clap enforces --config"))?;
        let (points, _) = parse_cloud(&read_input(path)?, Some(spec.dim()))?;
        if points.len() != 3 {
            return Err(Failure::new(
                EXIT_DATA,
                format!(
                    "{}: expected 3 points, found {}",
                    path.display(),
                    points.len()
                ),
            ));
        }
        circumradius_points(&spec, &points[0], &points[1], &points[2])?
    };
    let stdout = match a.format {
        Format::Text => format!("{radius}\n"),
        Format::Json => format!("{}\n", serde_json::json!({ "circumradius": radius })),
    };
    Ok(Success { code: 0, stdout })
}

fn parse_distance_matrix(path: &Path) -> Result<DistanceMatrix4, Failure> {
    let (rows, _) = parse_cloud(&read_input(path)?, None)?;
    let bad = |m: String| Failure::new(EXIT_DATA, format!("{}: {m}", path.display()));
    if rows.len() != 4 || rows[0].dim() != 4 {
        return Err(bad(format!(
            "expected a 4x4 matrix, found {} rows of {} entries",
            rows.len(),
            rows.first().map_or(0, Point::dim)
        )));
    }
    let mut d = [[0.0; 4]; 4];
    for (i, row) in rows.iter().enumerate() {
        d[i].copy_from_slice(row.coords());
    }
    DistanceMatrix4::new(d).map_err(|e| bad(e.to_string()))
}

fn cmd_embed4(a: &Embed4Args) -> Result<Success, Failure> {
    let d = parse_distance_matrix(&a.distances)?;
    let verdict = four_point_embeddable(&d);
    let stdout = match a.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&verdict).expect("verdict serializes");
            s.push('\n');
            s
        }
        Format::Text => match &verdict {
            FourPointVerdict::Embeddable { embedding } => {
                let mut out = String::from("EMBEDDABLE\n");
                for (label, p) in embedding.labels.iter().zip(&embedding.points) {
                    let coords: Vec<String> = p.coords().iter().map(f64::to_string).collect();
                    writeln!(out, "{label} {}", coords.join(" ")).unwrap();
                }
                out
            }
            FourPointVerdict::NotEmbeddable { obstruction } => {
                format!("NOT_EMBEDDABLE: {obstruction}\n")
            }
        },
    };
    Ok(Success { code: 0, stdout })
}

fn cmd_energy(a: &EnergyArgs) -> Result<Success, Failure> {
    let (spec, dim) = match (&a.config, a.dim) {
        (Some(path), _) => {
            let (_, spec) = load_config(path)?;
            let dim = spec.dim();
            (Some(spec), Some(dim))
        }
        (None, dim) => (None, dim),
    };
    let (points, weights) = parse_cloud(&read_input(&a.cloud)?, dim)?;
    let spec = match spec {
        Some(s) => s,
        None => NormSpec::euclidean(points.first().map_or(dim.unwrap_or(2), Point::dim)),
    };
    let cloud = WeightedPointCloud::with_norm(spec, points, weights)?;
    let (value, extra) = match a.energy {
        EnergyKind::Thickness => (thickness(&cloud)?, None),
        EnergyKind::Menger => {
            let opts = EnergyOptions {
                seed: a.seed,
                ..EnergyOptions::default()
            };
            let est = menger_energy_with(&cloud, a.p, &opts)?;
            (ExtendedRadius::Finite(est.value), Some(est))
        }
    };
    let stdout = match a.format {
        Format::Text => match &extra {
            Some(e) if e.std_error.is_some() => {
                format!("{value} ± {}\n", e.std_error.unwrap())
            }
            _ => format!("{value}\n"),
        },
        Format::Json => {
            let mut doc = serde_json::json!({
                "energy": match a.energy { EnergyKind::Thickness => "thickness", EnergyKind::Menger => "menger" },
                "points": cloud.len(),
                "value": value,
            });
            if let Some(e) = extra {
                doc["p"] = serde_json::json!(a.p);
                doc["std_error"] = serde_json::json!(e.std_error);
                doc["triples"] = serde_json::json!(e.triples);
                doc["seed"] = serde_json::json!(a.seed);
            }
            format!("{doc}\n")
        }
    };
    Ok(Success { code: 0, stdout })
}
