//! `xyquench`: correlation measures of the quenched XY chain from the command line.
//!
//! Exit codes: 0 on success, 1 on configuration errors, 2 when some points
//! failed (the output holds the rest and the errors go to a sidecar file
//! next to it, `<output>.errors.jsonl`, or to stderr when writing to stdout).

mod config;
mod output;
mod range;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use xyquench::analysis::{AnalysisConfig, Analyzer, Measures, PointReport};
use xyquench::correlators::{correlator_set, ModelParams};
use xyquench::{Error, QuadratureSpec, Side, TwoQubitState};

use config::ConfigFile;
use output::{Cell, Format, Table};
use range::Range;

const WORKERS_ENV: &str = "XYQUENCH_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "xyquench",
    version,
    about = "Quantum correlations of the quenched anisotropic XY chain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// key = value file; explicit flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Anisotropy γ in (0, 1] [default: 0.5]
    #[arg(long, global = true, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Comma-separated subset of ln, discord, deficit, mi [default: all]
    #[arg(long, global = true)]
    measures: Option<String>,
    /// csv or json (JSON lines) [default: json for point, csv otherwise]
    #[arg(long, global = true)]
    format: Option<String>,
    /// Output file [default: stdout]
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads [default: $XYQUENCH_WORKERS, else all cores]
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Gauss-Legendre order of the base panel
    #[arg(long, global = true)]
    base_order: Option<usize>,
    #[arg(long, global = true)]
    max_subdivisions: Option<usize>,
    /// Measured (discord) and dephased (deficit) qubit, a or b [default: b]
    #[arg(long, global = true)]
    side: Option<String>,
    /// No progress messages
    #[arg(short, long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Every measure at one (ã, t̃)
    Point {
        #[arg(long, allow_negative_numbers = true)]
        a: Option<String>,
        /// Time t̃ >= 0 (value or range); quadrature defaults are tuned for t̃ up to about 20
        #[arg(long, allow_negative_numbers = true)]
        t: Option<String>,
    },
    /// Measures along ã at fixed t̃
    Profile {
        /// Time t̃ >= 0 (value or range); quadrature defaults are tuned for t̃ up to about 20
        #[arg(long, allow_negative_numbers = true)]
        t: Option<String>,
        /// Initial field ã as min:max:count_or_step
        #[arg(long, allow_negative_numbers = true)]
        a: Option<String>,
    },
    /// Measures over an (ã, t̃) grid, t̃ outer and ã inner
    Grid {
        #[arg(long, allow_negative_numbers = true)]
        a: Option<String>,
        /// Time t̃ >= 0 (value or range); quadrature defaults are tuned for t̃ up to about 20
        #[arg(long, allow_negative_numbers = true)]
        t: Option<String>,
    },
    /// Collapse field, discord slope and revival for each t̃
    Scan {
        /// Time t̃ >= 0 (value or range); quadrature defaults are tuned for t̃ up to about 20
        #[arg(long, allow_negative_numbers = true)]
        t: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        window_min: Option<f64>,
        #[arg(long)]
        window_max: Option<f64>,
        /// Upper field of the revival search [default: 20]
        #[arg(long)]
        ceiling: Option<f64>,
        /// Post-collapse LN (ebits) counted as revival [default: 1e-4]
        #[arg(long)]
        revival_threshold: Option<f64>,
        /// Central-difference half-width [default: 1e-3]
        #[arg(long)]
        slope_step: Option<f64>,
    },
    /// State diagnostics and quadrature self-consistency over a grid
    Validate {
        #[arg(long, allow_negative_numbers = true)]
        a: Option<String>,
        /// Time t̃ >= 0 (value or range); quadrature defaults are tuned for t̃ up to about 20
        #[arg(long, allow_negative_numbers = true)]
        t: Option<String>,
        /// Allowed defect [default: 1e-8]
        #[arg(long)]
        tol: Option<f64>,
    },
}

/// Configuration errors, reported with exit code 1.
#[derive(Debug)]
struct ConfigError(String);

impl<E: std::fmt::Display> From<E> for ConfigError {
    fn from(e: E) -> Self {
        ConfigError(e.to_string())
    }
}

struct Settings {
    gamma: f64,
    measures: Measures,
    format: Option<Format>,
    output: Option<PathBuf>,
    workers: usize,
    quadrature: QuadratureSpec,
    side: Side,
    quiet: bool,
}

fn resolve(common: &Common, file: &ConfigFile) -> Result<Settings, ConfigError> {
    let mut quadrature = QuadratureSpec::default();
    if let Some(v) = file.merge(common.abs_tol, "abs-tol")? {
        quadrature.abs_tol = v;
    }
    if let Some(v) = file.merge(common.rel_tol, "rel-tol")? {
        quadrature.rel_tol = v;
    }
    if let Some(v) = file.merge(common.base_order, "base-order")? {
        quadrature.base_order = v;
    }
    if let Some(v) = file.merge(common.max_subdivisions, "max-subdivisions")? {
        quadrature.max_subdivisions = v;
    }
    quadrature.validate()?;

    let env_workers =
        match std::env::var(WORKERS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                ConfigError(format!("{WORKERS_ENV}='{v}' is not a positive integer"))
            })?),
            Err(_) => None,
        };
    let workers = file
        .merge(common.workers, "workers")?
        .or(env_workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err(ConfigError("workers must be positive".into()));
    }

    let measures = match file.merge(common.measures.clone(), "measures")? {
        Some(s) => s.parse::<Measures>()?,
        None => Measures::all(),
    };
    let format = file
        .merge(common.format.clone(), "format")?
        .map(|s| s.parse::<Format>())
        .transpose()?;
    let side = match file.merge(common.side.clone(), "side")? {
        Some(s) => s.parse::<Side>()?,
        None => Side::B,
    };
    let gamma = file.merge(common.gamma, "gamma")?.unwrap_or(0.5);
    ModelParams::new(gamma, 0.0, 0.0)?;
    Ok(Settings {
        gamma,
        measures,
        format,
        output: file.merge(common.output.clone(), "output")?,
        workers,
        quadrature,
        side,
        quiet: common.quiet,
    })
}

fn required_range(
    flag: &Option<String>,
    file: &ConfigFile,
    key: &str,
) -> Result<Range, ConfigError> {
    let raw = file
        .merge(flag.clone(), key)?
        .ok_or_else(|| ConfigError(format!("--{key} is required")))?;
    raw.parse::<Range>()
        .map_err(|e| ConfigError(format!("--{key}: {e}")))
}

fn required_value(flag: &Option<String>, file: &ConfigFile, key: &str) -> Result<f64, ConfigError> {
    let r = required_range(flag, file, key)?;
    match r.values().as_slice() {
        [v] => Ok(*v),
        _ => Err(ConfigError(format!("--{key} takes a single value here"))),
    }
}

/// A point that could not be evaluated.
struct Failure {
    a_tilde: Option<f64>,
    t_tilde: f64,
    message: String,
}

fn failure_from(a: Option<f64>, t: f64, e: &Error) -> Failure {
    Failure {
        a_tilde: a,
        t_tilde: t,
        message: e.to_string(),
    }
}

const POINT_COLUMNS: &[&str] = &[
    "a_tilde",
    "t_tilde",
    "gamma",
    "ln",
    "discord",
    "deficit",
    "mi",
    "negativity",
    "min_pt_eigenvalue",
    "mz",
    "txx",
    "tyy",
    "tzz",
    "txy",
    "hermiticity_defect",
    "trace_defect",
    "min_eigenvalue",
    "discord_theta",
    "discord_phi",
    "deficit_theta",
    "deficit_phi",
];

fn point_row(r: &PointReport, measures: Measures) -> Vec<Cell> {
    let p = r.params;
    let c = r.correlators;
    let ent = r.entanglement;
    let diag = r.diagnostics;
    vec![
        p.a_tilde.into(),
        p.t_tilde.into(),
        p.gamma.into(),
        ent.filter(|_| measures.ln).map(|e| e.log_negativity).into(),
        r.discord.map(|d| d.discord).into(),
        r.deficit.map(|d| d.deficit).into(),
        r.mutual_info.into(),
        ent.map(|e| e.negativity).into(),
        r.min_pt_eigenvalue.into(),
        c.mz.into(),
        c.txx.into(),
        c.tyy.into(),
        c.tzz.into(),
        c.txy.into(),
        diag.map(|d| d.hermiticity_defect).into(),
        diag.map(|d| d.trace_defect).into(),
        diag.map(|d| d.min_eigenvalue).into(),
        r.discord.map(|d| d.optimal_basis.theta).into(),
        r.discord.map(|d| d.optimal_basis.phi).into(),
        r.deficit.map(|d| d.optimal_basis.theta).into(),
        r.deficit.map(|d| d.optimal_basis.phi).into(),
    ]
}

fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".errors.jsonl");
    PathBuf::from(s)
}

fn failure_json(f: &Failure) -> String {
    let a = f.a_tilde.map_or("null".to_string(), output::fmt_f64);
    format!(
        "{{\"a_tilde\":{a},\"t_tilde\":{},\"error\":{}}}",
        output::fmt_f64(f.t_tilde),
        serde_json::Value::String(f.message.clone())
    )
}

/// Writes the table and any failures. Returns the exit code.
fn emit(
    table: &Table,
    failures: &[Failure],
    settings: &Settings,
    default_format: Format,
) -> Result<ExitCode, ConfigError> {
    let format = settings.format.unwrap_or(default_format);
    match &settings.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| ConfigError(format!("cannot create '{}': {e}", path.display())))?;
            table.write(format, BufWriter::new(file))?;
            let sidecar = sidecar_path(path);
            if failures.is_empty() {
                if sidecar.exists() {
                    std::fs::remove_file(&sidecar)?;
                }
            } else {
                let mut w = BufWriter::new(File::create(&sidecar)?);
                for f in failures {
                    writeln!(w, "{}", failure_json(f))?;
                }
                w.flush()?;
            }
        }
        None => {
            table.write(format, io::stdout().lock())?;
            for f in failures {
                eprintln!("{}", failure_json(f));
            }
        }
    }
    if !settings.quiet {
        eprintln!(
            "{} rows written, {} failed",
            table.rows.len(),
            failures.len()
        );
    }
    Ok(if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn analyzer(settings: &Settings, config: AnalysisConfig) -> Result<Analyzer, ConfigError> {
    Ok(Analyzer::new(
        settings.gamma,
        AnalysisConfig {
            quadrature: settings.quadrature,
            measured_side: settings.side,
            ..config
        },
    )?)
}

fn evaluate_points(
    an: &Analyzer,
    points: &[(f64, f64)],
    settings: &Settings,
) -> (Table, Vec<Failure>) {
    let mut table = Table::new(POINT_COLUMNS.to_vec());
    let mut failures = Vec::new();
    for (r, &(a, t)) in an
        .evaluate_many(points, settings.measures)
        .iter()
        .zip(points)
    {
        match r {
            Ok(report) => table.push(point_row(report, settings.measures)),
            Err(e) => failures.push(failure_from(Some(a), t, e)),
        }
    }
    (table, failures)
}

fn validate_points(points: &[(f64, f64)], settings: &Settings, tol: f64) -> (Table, Vec<Failure>) {
    use rayon::prelude::*;
    let columns = vec![
        "a_tilde",
        "t_tilde",
        "gamma",
        "quadrature_delta",
        "hermiticity_defect",
        "trace_defect",
        "min_eigenvalue",
        "x_shape_defect",
        "ok",
    ];
    let check = |a: f64, t: f64| -> Result<Vec<Cell>, Error> {
        let p = ModelParams::new(settings.gamma, a, t)?;
        let base = correlator_set(&p, &settings.quadrature)?;
        let fine = correlator_set(&p, &settings.quadrature.doubled())?;
        let delta = base.max_abs_diff(&fine);
        let d = TwoQubitState::from_correlators(&base)?.validate();
        let ok = delta < tol && d.is_valid(tol);
        Ok(vec![
            a.into(),
            t.into(),
            settings.gamma.into(),
            delta.into(),
            d.hermiticity_defect.into(),
            d.trace_defect.into(),
            d.min_eigenvalue.into(),
            d.x_shape_defect.into(),
            ok.into(),
        ])
    };
    let results: Vec<_> = points.par_iter().map(|&(a, t)| check(a, t)).collect();
    let mut table = Table::new(columns);
    let mut failures = Vec::new();
    for (r, &(a, t)) in results.into_iter().zip(points) {
        match r {
            Ok(row) => {
                if row[8] == Cell::Bool(false) {
                    failures.push(Failure {
                        a_tilde: Some(a),
                        t_tilde: t,
                        message: format!("defect above tolerance {tol:e}"),
                    });
                }
                table.push(row);
            }
            Err(e) => failures.push(failure_from(Some(a), t, &e)),
        }
    }
    (table, failures)
}

fn grid_points(a: &Range, t: &Range) -> Vec<(f64, f64)> {
    let a_values = a.values();
    t.values()
        .into_iter()
        .flat_map(|t| a_values.iter().map(move |&a| (a, t)))
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode, ConfigError> {
    let file = match &cli.common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let settings = resolve(&cli.common, &file)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.workers)
        .build()?;
    let say = |msg: String| {
        if !settings.quiet {
            eprintln!("{msg}");
        }
    };

    match &cli.command {
        Command::Point { a, t } => {
            let a = required_value(a, &file, "a")?;
            let t = required_value(t, &file, "t")?;
            ModelParams::new(settings.gamma, a, t)?;
            let an = analyzer(&settings, AnalysisConfig::default())?;
            let (table, failures) = pool.install(|| evaluate_points(&an, &[(a, t)], &settings));
            emit(&table, &failures, &settings, Format::Json)
        }
        Command::Profile { t, a } => {
            let t = required_value(t, &file, "t")?;
            let a = required_range(a, &file, "a")?;
            ModelParams::new(settings.gamma, a.min, t)?;
            let points: Vec<_> = a.values().into_iter().map(|a| (a, t)).collect();
            say(format!(
                "profile: {} points on {} workers",
                points.len(),
                settings.workers
            ));
            let an = analyzer(&settings, AnalysisConfig::default())?;
            let (table, failures) = pool.install(|| evaluate_points(&an, &points, &settings));
            emit(&table, &failures, &settings, Format::Csv)
        }
        Command::Grid { a, t } => {
            let a = required_range(a, &file, "a")?;
            let t = required_range(t, &file, "t")?;
            ModelParams::new(settings.gamma, a.min, t.min)?;
            let an = analyzer(&settings, AnalysisConfig::default())?;
            let rows = t.values();
            say(format!(
                "grid: {} x {} points on {} workers",
                a.len(),
                rows.len(),
                settings.workers
            ));
            let mut table = Table::new(POINT_COLUMNS.to_vec());
            let mut failures = Vec::new();
            for (i, &tv) in rows.iter().enumerate() {
                let row_range = Range {
                    min: tv,
                    max: tv,
                    spacing: range::Spacing::Count(1),
                };
                let points = grid_points(&a, &row_range);
                let (part, fails) = pool.install(|| evaluate_points(&an, &points, &settings));
                table.rows.extend(part.rows);
                failures.extend(fails);
                say(format!("  row {}/{} (t = {tv})", i + 1, rows.len()));
            }
            emit(&table, &failures, &settings, Format::Csv)
        }
        Command::Scan {
            t,
            window_min,
            window_max,
            ceiling,
            revival_threshold,
            slope_step,
        } => {
            let t = required_range(t, &file, "t")?;
            ModelParams::new(settings.gamma, 0.0, t.min)?;
            let mut cfg = AnalysisConfig::default();
            cfg.collapse_window = (
                file.merge(*window_min, "window-min")?
                    .unwrap_or(cfg.collapse_window.0),
                file.merge(*window_max, "window-max")?
                    .unwrap_or(cfg.collapse_window.1),
            );
            cfg.revival_ceiling = file
                .merge(*ceiling, "ceiling")?
                .unwrap_or(cfg.revival_ceiling);
            cfg.revival_threshold = file
                .merge(*revival_threshold, "revival-threshold")?
                .unwrap_or(cfg.revival_threshold);
            cfg.slope_step = file
                .merge(*slope_step, "slope-step")?
                .unwrap_or(cfg.slope_step);
            if !(cfg.slope_step > 0.0 && cfg.revival_threshold >= 0.0) {
                return Err(ConfigError(
                    "slope-step must be positive and revival-threshold non-negative".into(),
                ));
            }
            let an = analyzer(&settings, cfg)?;
            let times = t.values();
            say(format!(
                "scan: {} times on {} workers",
                times.len(),
                settings.workers
            ));
            let report = pool.install(|| an.derivative_scan(&times));
            let mut table = Table::new(vec![
                "t_tilde",
                "gamma",
                "a_c",
                "slope",
                "revived",
                "max_ln_after_collapse",
                "a_revival_peak",
                "predicate_holds",
                "exceptional_near_qpt",
                "concordant",
            ]);
            for r in &report.records {
                table.push(vec![
                    r.t_tilde.into(),
                    settings.gamma.into(),
                    r.a_c.into(),
                    r.slope.into(),
                    r.revived.into(),
                    r.max_ln_after_collapse.into(),
                    r.a_revival_peak.into(),
                    r.predicate_holds.into(),
                    r.exceptional_near_qpt.into(),
                    r.concordant().into(),
                ]);
            }
            let checked: Vec<_> = report
                .records
                .iter()
                .filter(|r| r.a_c.is_some() && !r.exceptional_near_qpt)
                .collect();
            let agree = checked.iter().filter(|r| r.concordant()).count();
            say(format!(
                "predicate agrees with revival at {agree} of {} unflagged collapse times",
                checked.len()
            ));
            let failures: Vec<_> = report
                .failures
                .iter()
                .map(|f| failure_from(None, f.t_tilde, &f.error))
                .collect();
            emit(&table, &failures, &settings, Format::Csv)
        }
        Command::Validate { a, t, tol } => {
            let a = required_range(a, &file, "a")?;
            let t = required_range(t, &file, "t")?;
            ModelParams::new(settings.gamma, a.min, t.min)?;
            let tol = file.merge(*tol, "tol")?.unwrap_or(1e-8);
            let points = grid_points(&a, &t);
            let (table, failures) = pool.install(|| validate_points(&points, &settings, tol));
            emit(&table, &failures, &settings, Format::Csv)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
