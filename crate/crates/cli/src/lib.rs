//! Command-line driver for `fractafold-core`.
//!
//! Exit codes: 0 success, 2 validation error, 3 internal assertion failure.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fractafold_core::ifs::AttractorNet;
use fractafold_core::measure::{Measures, Rectangle};
use fractafold_core::words::FiniteWord;
use fractafold_core::{
    sample, sweep, Bundle, BundlePoint, GroupoidElement, InfiniteWord, KPoint, Point, SimilaritySystem,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use config::{parse_config, LoadedSystem, Preset};
use output::{csv_text, decimal, exact, parse_points_csv, svg_text, write_atomic, CsvRow, RenderSpec};

/// Overrides the number of threads used to build attractor nets.
pub const WORKERS_ENV: &str = "FRACTAFOLD_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "fractafold",
    version,
    about = "Exact attractors, blowup bundles, groupoid actions and invariant measures of rational similarity systems",
    after_help = "Systems: --preset dyadic | simplex:<N>:<r> | gasket (default dyadic), or --config <file>.\n\
                  Words: finite words are digit strings (`121`, `-` for empty); eventually periodic words are `u(v)`, e.g. `2(12)`.\n\
                  Environment: FRACTAFOLD_WORKERS sets the attractor worker count."
)]
struct Cli {
    #[arg(long, global = true, value_parser = clap::value_parser!(Preset), conflicts_with = "config")]
    preset: Option<Preset>,
    /// IFS file with `dim`, `maps` and `map r=<rat> Q=<perm> b=(<rat>,...)` lines.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Significant digits of decimal columns.
    #[arg(long, global = true, default_value_t = output::DEFAULT_PRECISION, value_parser = clap::value_parser!(usize))]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Depth-k net of the attractor.
    Attractor {
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Net of the blowup patch F_ω^{-1}(K).
    Blowup {
        /// The word ω.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Net depth; read from the CSV metadata with --from-csv.
        #[arg(long)]
        depth: Option<usize>,
        /// Attractor points from a CSV written by `attractor`.
        #[arg(long, value_name = "FILE")]
        from_csv: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Coordinates of the bisection orbit of a bundle point.
    Orbit {
        /// `<x> ; <n> ; <u>`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Bound on |α| and |β| of enumerated bisections.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Applies a groupoid element to a bundle point.
    Act {
        /// `<x> ; <k> ; <y>`.
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        /// `<x> ; <n> ; <u>`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Groupoid operations.
    Groupoid {
        #[command(subcommand)]
        op: GroupoidOp,
    },
    /// Invariant measure checks.
    Measure {
        #[command(subcommand)]
        op: MeasureOp,
    },
    /// Runs the embedded property sweeps.
    Selftest {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum GroupoidOp {
    /// Product `left · right`; requires s(left) = r(right).
    Compose {
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// Inverse of an element.
    Invert {
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
}

#[derive(Subcommand, Debug)]
enum MeasureOp {
    /// Exact σ̃-invariance of μ_∞ on random rectangles.
    CheckInvariance {
        /// Bound on |ω| + |η| and on cell depth.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PointFormat {
    Csv,
    Svg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = PointFormat::Csv)]
    format: PointFormat,
    /// Destination file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// 1-based coordinate pair drawn by SVG output, e.g. `1,2`.
    #[arg(long, default_value = "1,2")]
    project: String,
    /// SVG width and height in pixels.
    #[arg(long, default_value_t = 512)]
    size: u32,
}

enum Failure {
    Validation(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Validation(e)
    }
}

type Outcome = Result<String, Failure>;

fn invalid(msg: impl std::fmt::Display) -> Failure {
    Failure::Validation(anyhow!("{}", msg))
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code. Results go to stdout or `--output`;
/// diagnostics to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = std::panic::catch_unwind(move || dispatch(&cli));
    match result {
        Ok(Ok(text)) => {
            print!("{}", text);
            EXIT_OK
        }
        Ok(Err(Failure::Validation(e))) => {
            eprintln!("error: {:#}", e);
            EXIT_VALIDATION
        }
        Ok(Err(Failure::Internal(e))) => {
            eprintln!("internal assertion failed: {:#}", e);
            EXIT_INTERNAL
        }
        Err(_) => {
            eprintln!("internal assertion failed: panic");
            EXIT_INTERNAL
        }
    }
}

fn load_system(cli: &Cli) -> Result<LoadedSystem, Failure> {
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        return parse_config(&text).map_err(|e| invalid(format!("{}: {}", path.display(), e)));
    }
    cli.preset.clone().unwrap_or(Preset::Dyadic).load().map_err(invalid)
}

fn dispatch(cli: &Cli) -> Outcome {
    if cli.precision == 0 || cli.precision > 17 {
        return Err(invalid("--precision must be between 1 and 17"));
    }
    if let Command::Selftest { seed } = &cli.command {
        return selftest(*seed);
    }
    let loaded = load_system(cli)?;
    let sys = &loaded.system;
    match &cli.command {
        Command::Attractor { depth, out } => {
            let net = attractor_net(sys, *depth)?;
            let meta = vec![
                ("system".to_string(), loaded.label.clone()),
                ("depth".to_string(), depth.to_string()),
                ("resolution".to_string(), net.resolution.to_string()),
            ];
            emit_points(&meta, &net.points, sys.dim(), out, cli.precision)
        }
        Command::Blowup { word, depth, from_csv, out } => {
            let w = parse_finite(word, sys)?;
            let (points, depth) = match from_csv {
                Some(path) => read_attractor_csv(path, *depth)?,
                None => {
                    let d = depth.ok_or_else(|| invalid("--depth is required without --from-csv"))?;
                    (attractor_net(sys, d)?.points, d)
                }
            };
            if let Some(p) = points.iter().find(|p| p.dim() != sys.dim()) {
                return Err(invalid(format!("point {} does not have dimension {}", p, sys.dim())));
            }
            let patch = Bundle::new(sys).patch_from_net(&w, depth, &points);
            let meta = vec![
                ("word".to_string(), if w.is_empty() { "-".to_string() } else { w.to_string() }),
                ("depth".to_string(), depth.to_string()),
                ("resolution".to_string(), patch.resolution.to_string()),
            ];
            emit_points(&meta, &patch.net, sys.dim(), out, cli.precision)
        }
        Command::Orbit { point, depth, out } => orbit(sys, point, *depth, out, cli.precision),
        Command::Act { gamma, point } => {
            let g = parse_element(gamma, sys)?;
            let z = parse_point(point, sys)?;
            let b = Bundle::new(sys);
            let image = b.act(&g, &z).map_err(invalid)?;
            Ok(describe_point("point", &b, &image, cli.precision))
        }
        Command::Groupoid { op } => match op {
            GroupoidOp::Compose { left, right } => {
                let a = parse_element(left, sys)?;
                let c = parse_element(right, sys)?;
                let prod = a.compose(&c).map_err(invalid)?;
                Ok(describe_element(&prod))
            }
            GroupoidOp::Invert { element } => {
                let a = parse_element(element, sys)?;
                Ok(describe_element(&a.inverse()))
            }
        },
        Command::Measure { op: MeasureOp::CheckInvariance { depth, trials, seed, format } } => {
            check_invariance(&loaded, *depth, *trials, *seed, *format)
        }
        Command::Selftest { .. } => unreachable!("handled above"),
    }
}

fn workers(alphabet: usize) -> Result<usize, Failure> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| invalid(format!("{} must be a positive integer, got `{}`", WORKERS_ENV, v)))?;
            if n == 0 {
                return Err(invalid(format!("{} must be positive", WORKERS_ENV)));
            }
            Ok(n.min(alphabet))
        }
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get()).min(alphabet)),
    }
}

/// Splits the work by outermost symbol; the result is canonically sorted
/// whatever the worker count.
fn attractor_net(sys: &SimilaritySystem, depth: usize) -> Result<AttractorNet, Failure> {
    if depth > 24 || (sys.len() as f64).powi(depth as i32) > 2e7 {
        return Err(invalid(format!("depth {} gives too many points", depth)));
    }
    let n = workers(sys.len())?;
    if n <= 1 || depth == 0 {
        return Ok(sys.attractor_net(depth));
    }
    let symbols: Vec<u8> = (1..=sys.len() as u8).collect();
    let chunk = symbols.len().div_ceil(n);
    let points = std::thread::scope(|scope| {
        let handles: Vec<_> = symbols
            .chunks(chunk)
            .map(|group| scope.spawn(move || group.iter().flat_map(|&s| sys.net_partition(depth, s)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect::<Vec<Point>>()
    });
    Ok(sys.finish_net(depth, points))
}

fn read_attractor_csv(path: &Path, depth: Option<usize>) -> Result<(Vec<Point>, usize), Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = parse_points_csv(&text).map_err(|e| invalid(format!("{}: {:#}", path.display(), e)))?;
    let meta_depth = parsed
        .metadata
        .iter()
        .find(|(k, _)| k == "depth")
        .map(|(_, v)| v.parse::<usize>().map_err(|_| invalid(format!("{}: invalid depth `{}`", path.display(), v))))
        .transpose()?;
    let d = match (depth, meta_depth) {
        (Some(a), Some(b)) if a != b => {
            return Err(invalid(format!("--depth {} disagrees with the file's depth {}", a, b)))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(invalid(format!("{}: no depth metadata; pass --depth", path.display()))),
    };
    Ok((parsed.points, d))
}

fn render_spec(out: &OutputArgs, dim: usize) -> Result<RenderSpec, Failure> {
    let parts: Vec<&str> = out.project.split(',').collect();
    let parse = |s: &str| s.trim().parse::<usize>().ok().filter(|&v| v >= 1);
    let projection = match parts.as_slice() {
        [a, b] => match (parse(a), parse(b)) {
            (Some(a), Some(b)) => (a - 1, b - 1),
            _ => return Err(invalid(format!("invalid --project `{}`", out.project))),
        },
        _ => return Err(invalid(format!("invalid --project `{}`", out.project))),
    };
    let projection = if dim == 1 { (projection.0, projection.0) } else { projection };
    if out.size == 0 {
        return Err(invalid("--size must be positive"));
    }
    Ok(RenderSpec { projection, size: out.size, ..RenderSpec::default() })
}

fn emit_points(meta: &[(String, String)], points: &[Point], dim: usize, out: &OutputArgs, precision: usize) -> Outcome {
    let text = match out.format {
        PointFormat::Csv => {
            let rows: Vec<CsvRow<'_>> = points.iter().map(|p| CsvRow { label: None, point: p }).collect();
            csv_text(meta, None, dim, &rows, precision)
        }
        PointFormat::Svg => svg_text(points, dim, &render_spec(out, dim)?).map_err(Failure::Validation)?,
    };
    finish(text, out)
}

fn finish(text: String, out: &OutputArgs) -> Outcome {
    match &out.output {
        Some(path) => {
            write_atomic(path, &text).map_err(Failure::Validation)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn parse_finite(text: &str, sys: &SimilaritySystem) -> Result<FiniteWord, Failure> {
    let w: FiniteWord = text.parse().map_err(|e| invalid(format!("word `{}`: {}", text, e)))?;
    sys.check_word(&w).map_err(|e| invalid(format!("word `{}`: {}", text, e)))?;
    Ok(w)
}

fn parse_infinite(text: &str, sys: &SimilaritySystem) -> Result<InfiniteWord, Failure> {
    let t = text.trim();
    let w: InfiniteWord = t.parse().map_err(|e| invalid(format!("word `{}`: {}", t, e)))?;
    sys.check_address(&w).map_err(|e| invalid(format!("word `{}`: {}", t, e)))?;
    Ok(w)
}

fn parse_element(text: &str, sys: &SimilaritySystem) -> Result<GroupoidElement, Failure> {
    let g: GroupoidElement = text.parse().map_err(|e| invalid(format!("element `{}`: {}", text, e)))?;
    for w in [g.range(), g.source()] {
        sys.check_address(w).map_err(|e| invalid(format!("element `{}`: {}", text, e)))?;
    }
    Ok(g)
}

fn parse_point(text: &str, sys: &SimilaritySystem) -> Result<BundlePoint, Failure> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 3 {
        return Err(invalid(format!("point `{}`: expected `<x> ; <n> ; <u>`", text)));
    }
    let base = parse_infinite(parts[0], sys)?;
    let level: usize = parts[1]
        .trim()
        .parse()
        .map_err(|_| invalid(format!("point `{}`: invalid level `{}`", text, parts[1].trim())))?;
    let u = parse_infinite(parts[2], sys)?;
    Ok(BundlePoint::new(base, level, KPoint::new(u)))
}

fn describe_point(key: &str, b: &Bundle<'_>, z: &BundlePoint, precision: usize) -> String {
    let c = b.point_coords(z);
    let mut s = String::new();
    writeln!(s, "{}: {}", key, z).unwrap();
    let ex: Vec<String> = c.coords().iter().map(exact).collect();
    let dec: Vec<String> = c.coords().iter().map(|q| decimal(q, precision)).collect();
    writeln!(s, "exact: ({})", ex.join(", ")).unwrap();
    writeln!(s, "decimal: ({})", dec.join(", ")).unwrap();
    s
}

fn describe_element(g: &GroupoidElement) -> String {
    let (m, n) = g.witness();
    format!("element: {}\nwitness: m={} n={}\n", g, m, n)
}

fn orbit(sys: &SimilaritySystem, point: &str, depth: usize, out: &OutputArgs, precision: usize) -> Outcome {
    let z = parse_point(point, sys)?;
    if depth > 6 {
        return Err(invalid("orbit depth is limited to 6"));
    }
    let b = Bundle::new(sys);
    let mut rows: Vec<(String, BundlePoint, Point)> = b
        .orbit_elements(&z, depth)
        .into_iter()
        .map(|(_, p)| {
            let c = b.point_coords(&p);
            (p.base().to_string(), p, c)
        })
        .collect();
    rows.sort_by(|a, c| (&a.0, &a.2).cmp(&(&c.0, &c.2)));
    rows.dedup_by(|a, c| a.0 == c.0 && b.same_point(&a.1, &c.1));
    let meta = vec![
        ("point".to_string(), z.to_string()),
        ("depth".to_string(), depth.to_string()),
        ("points".to_string(), rows.len().to_string()),
    ];
    let text = match out.format {
        PointFormat::Csv => {
            let csv_rows: Vec<CsvRow<'_>> =
                rows.iter().map(|(l, _, c)| CsvRow { label: Some(l.clone()), point: c }).collect();
            csv_text(&meta, Some("base"), sys.dim(), &csv_rows, precision)
        }
        PointFormat::Svg => {
            let mut pts: Vec<Point> = rows.into_iter().map(|(_, _, c)| c).collect();
            pts.sort();
            pts.dedup();
            svg_text(&pts, sys.dim(), &render_spec(out, sys.dim())?).map_err(Failure::Validation)?
        }
    };
    finish(text, out)
}

#[derive(Serialize)]
struct InvarianceReport {
    system: String,
    alphabet: usize,
    depth: usize,
    trials: usize,
    seed: u64,
    open_set_condition: bool,
    invariance_failures: usize,
    additivity_partitions: usize,
    additivity_covers: usize,
    additivity_failures: usize,
    first_failure: Option<String>,
    passed: bool,
}

fn check_invariance(loaded: &LoadedSystem, depth: usize, trials: usize, seed: u64, format: ReportFormat) -> Outcome {
    if depth == 0 || depth > 12 {
        return Err(invalid("--depth must be between 1 and 12"));
    }
    let m = Measures::certified(&loaded.system, &loaded.region)
        .map_err(|e| invalid(format!("cannot certify the open set condition: {}", e)))?;
    let n = loaded.system.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut first_failure: Option<String> = None;
    for _ in 0..trials {
        let r: Rectangle = sample::pushable_rectangle(&mut rng, n, depth);
        let ok = match m.push_sigma_tilde(&r) {
            Ok(pushed) => m.mu_infinity(&pushed) == m.mu_infinity(&r),
            Err(_) => false,
        };
        if !ok {
            failures += 1;
            first_failure.get_or_insert_with(|| r.to_string());
        }
    }
    let add = m.semialgebra_additivity_check(&mut rng, depth.min(5), trials.min(200));
    if first_failure.is_none() {
        first_failure = add.first_failure.clone();
    }
    let report = InvarianceReport {
        system: loaded.label.clone(),
        alphabet: n,
        depth,
        trials,
        seed,
        open_set_condition: true,
        invariance_failures: failures,
        additivity_partitions: add.partitions,
        additivity_covers: add.covers,
        additivity_failures: add.failures,
        first_failure,
        passed: failures == 0 && add.passed(),
    };
    let text = match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.into()))?;
            s.push('\n');
            s
        }
        ReportFormat::Text => {
            let mut s = String::new();
            writeln!(s, "system: {}", report.system).unwrap();
            writeln!(s, "alphabet: {}", report.alphabet).unwrap();
            writeln!(s, "depth: {}", report.depth).unwrap();
            writeln!(s, "trials: {}", report.trials).unwrap();
            writeln!(s, "seed: {}", report.seed).unwrap();
            writeln!(s, "open_set_condition: certified").unwrap();
            writeln!(s, "invariance_failures: {}", report.invariance_failures).unwrap();
            writeln!(s, "additivity: {} partitions, {} covers, {} failures", add.partitions, add.covers, add.failures)
                .unwrap();
            if let Some(f) = &report.first_failure {
                writeln!(s, "first_failure: {}", f).unwrap();
            }
            writeln!(s, "result: {}", if report.passed { "PASS" } else { "FAIL" }).unwrap();
            s
        }
    };
    if report.passed {
        Ok(text)
    } else {
        print!("{}", text);
        Err(Failure::Internal(anyhow!("measure invariance check failed")))
    }
}

fn selftest(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reports = sweep::run_all(&mut rng);
    let mut s = String::new();
    let mut passed = 0;
    for r in &reports {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        write!(s, "{} {}", verdict, r.name).unwrap();
        if !r.subject.is_empty() {
            write!(s, "[{}]", r.subject).unwrap();
        }
        write!(s, " trials={} failures={}", r.trials, r.failures).unwrap();
        if let Some(f) = &r.first_failure {
            write!(s, " first={}", f).unwrap();
        }
        s.push('\n');
        if r.passed() {
            passed += 1;
        }
    }
    writeln!(s, "selftest seed={}: {}/{} sweeps passed", seed, passed, reports.len()).unwrap();
    if passed == reports.len() {
        Ok(s)
    } else {
        print!("{}", s);
        Err(Failure::Internal(anyhow!("{} sweep(s) failed", reports.len() - passed)))
    }
}
