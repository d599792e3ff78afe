//! `bolab`: command-line driver for the solver, gauge checks, lattice
//! verification, normal-form residuals and the scans.
//!
//! Every command takes an optional JSON config (`--config`) carrying a
//! `version` field; command-line flags override values from the file. Unknown
//! keys are rejected. Exit codes: 0 pass, 1 check failure or I/O failure,
//! 2 usage or configuration error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use bolab_core::experiments::{
    self, DifferenceConfig, ReportFormat, ScanReport, SmoothingConfig, StrichartzConfig, U0Spec,
};
use bolab_core::gauge;
use bolab_core::normalform::{normalform_residual, verify_lattice};
use bolab_core::solver::{self, Scheme, SolverConfig};
use bolab_core::spectral::{Grid, Mode};
use bolab_core::BolabError;

const CONFIG_VERSION: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "bolab", version, about = "Benjamin-Ono laboratory")]
struct Cli {
    /// Worker threads; defaults to BOLAB_THREADS or the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve initial data and write a binary trajectory.
    Solve(SolveArgs),
    /// Gauge round trip and gauge-equation residual along a trajectory.
    GaugeCheck(GaugeArgs),
    /// Exhaustive lattice checks of phases and multipliers.
    VerifyLattice(LatticeArgs),
    /// Residual of the integrated normal-form identity.
    NfResidual(NfArgs),
    /// Resolution study of the gauge smoothing.
    Smoothing(SmoothingArgs),
    /// Dyadic space-time norms against the refined Strichartz bound.
    Strichartz(StrichartzArgs),
    /// Differences between two solver settings.
    Difference(DifferenceArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// JSON config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    /// Initial data: `zero`, `cos`, or an inline JSON spec.
    #[arg(long)]
    u0: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "T")]
    t_final: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    store_every: Option<usize>,
}

#[derive(Args, Debug)]
struct GaugeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    u0: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "T")]
    t_final: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    store_every: Option<usize>,
    /// Largest accepted round-trip error.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    max_freq: Option<i64>,
    #[arg(long = "M")]
    m: Option<f64>,
}

#[derive(Args, Debug)]
struct NfArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    u0: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Grid of the underlying solve; defaults to twice `n`.
    #[arg(long)]
    solve_n: Option<usize>,
    #[arg(long = "T")]
    t_final: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    store_every: Option<usize>,
    #[arg(long = "M")]
    m: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct ScanFlags {
    #[arg(long)]
    u0: Option<String>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long = "T")]
    t_final: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    scheme: Option<String>,
    /// `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args, Debug)]
struct SmoothingArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    scan: ScanFlags,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    resolutions: Option<Vec<usize>>,
    #[arg(long)]
    store_every: Option<usize>,
}

#[derive(Args, Debug)]
struct StrichartzArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    scan: ScanFlags,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    bands: Option<Vec<f64>>,
    #[arg(long)]
    store_every: Option<usize>,
}

#[derive(Args, Debug)]
struct DifferenceArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    scan: ScanFlags,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// Step of the second run (the first uses `--dt`).
    #[arg(long)]
    dt2: Option<f64>,
    /// Scheme of the second run.
    #[arg(long)]
    scheme2: Option<String>,
}

/// Failure of a command, with its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<BolabError> for Failure {
    fn from(e: BolabError) -> Self {
        match e {
            BolabError::Io(_) => Failure::Runtime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<bool, Failure>;

/// Load the config file (if any) as a JSON object and check its version.
fn load_config(path: Option<&Path>) -> Result<Map<String, Value>, Failure> {
    let Some(path) = path else {
        return Ok(Map::new());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let Value::Object(mut map) = value else {
        return Err(Failure::Usage(format!("{}: config must be a JSON object", path.display())));
    };
    match map.remove("version") {
        Some(Value::Number(v)) if v.as_u64() == Some(CONFIG_VERSION) => Ok(map),
        Some(v) => Err(Failure::Usage(format!(
            "{}: unsupported config version {v}, expected {CONFIG_VERSION}",
            path.display()
        ))),
        None => Err(Failure::Usage(format!("{}: missing field `version`", path.display()))),
    }
}

fn set<T: Serialize>(map: &mut Map<String, Value>, key: &str, v: Option<T>) {
    if let Some(v) = v {
        map.insert(key.into(), serde_json::to_value(v).expect("plain value"));
    }
}

fn set_nested<T: Serialize>(map: &mut Map<String, Value>, outer: &str, key: &str, v: Option<T>) {
    if let Some(v) = v {
        let entry = map
            .entry(outer.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
        if let Value::Object(inner) = entry {
            inner.insert(key.into(), serde_json::to_value(v).expect("plain value"));
        }
    }
}

/// `zero`, `cos`, or inline JSON.
fn parse_u0(text: &str) -> Result<Value, Failure> {
    match text {
        "zero" => Ok(json!({"kind": "zero"})),
        "cos" => Ok(json!({"kind": "cos", "amplitude": 1.0})),
        t if t.trim_start().starts_with('{') => {
            serde_json::from_str(t).map_err(|e| Failure::Usage(format!("--u0: {e}")))
        }
        t => Err(Failure::Usage(format!(
            "--u0 {t:?}: expected `zero`, `cos` or a JSON object"
        ))),
    }
}

fn set_u0(map: &mut Map<String, Value>, u0: &Option<String>) -> Result<(), Failure> {
    if let Some(t) = u0 {
        map.insert("u0".into(), parse_u0(t)?);
    }
    Ok(())
}

fn parse_scheme(s: &Option<String>) -> Result<Option<Scheme>, Failure> {
    s.as_deref()
        .map(|t| {
            serde_json::from_value(Value::String(t.into()))
                .map_err(|_| Failure::Usage(format!("unknown scheme {t:?} (ifrk4, if-midpoint)")))
        })
        .transpose()
}

fn decode<T: DeserializeOwned>(map: Map<String, Value>) -> Result<T, Failure> {
    serde_json::from_value(Value::Object(map)).map_err(|e| Failure::Usage(format!("config: {e}")))
}

fn take_string(map: &mut Map<String, Value>, key: &str) -> Result<Option<String>, Failure> {
    match map.remove(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(v) => Err(Failure::Usage(format!("config: `{key}` must be a string, got {v}"))),
    }
}

fn output_path(map: &mut Map<String, Value>, flag: &Option<PathBuf>, default: &str) -> Result<PathBuf, Failure> {
    let from_file = take_string(map, "out")?;
    Ok(flag
        .clone()
        .or(from_file.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(default)))
}

fn report_format(map: &mut Map<String, Value>, flag: &Option<String>) -> Result<ReportFormat, Failure> {
    let from_file = take_string(map, "format")?;
    match flag.clone().or(from_file).as_deref() {
        None | Some("csv") => Ok(ReportFormat::Csv),
        Some("json") => Ok(ReportFormat::Json),
        Some(f) => Err(Failure::Usage(format!("unknown format {f:?} (csv, json)"))),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct SolveConfig {
    u0: U0Spec,
    n: usize,
    #[serde(default = "two_pi")]
    period: f64,
    t_final: f64,
    #[serde(default)]
    dt: Option<f64>,
    #[serde(default = "default_scheme")]
    scheme: Scheme,
    #[serde(default = "one")]
    store_every: usize,
}

fn two_pi() -> f64 {
    2.0 * std::f64::consts::PI
}

fn default_scheme() -> Scheme {
    Scheme::Ifrk4
}

fn one() -> usize {
    1
}

fn default_n(map: &mut Map<String, Value>, n: usize) {
    map.entry("n").or_insert(json!(n));
}

fn solve_from(cfg: &SolveConfig) -> Result<solver::Trajectory, Failure> {
    let mode = if (cfg.period - two_pi()).abs() < 1e-12 {
        Mode::Torus
    } else {
        Mode::Line
    };
    let grid = Grid::new(cfg.n, cfg.period, mode)?;
    let u0 = cfg.u0.build(grid)?;
    let sc = SolverConfig {
        t_final: cfg.t_final,
        dt: cfg.dt,
        scheme: cfg.scheme,
        store_every: cfg.store_every,
        dealias: true,
    };
    Ok(solver::solve(&u0, &sc)?)
}

fn cmd_solve(a: &SolveArgs) -> CmdResult {
    let mut map = load_config(a.common.config.as_deref())?;
    let out = output_path(&mut map, &a.common.out, "trajectory.bolab")?;
    set_u0(&mut map, &a.u0)?;
    set(&mut map, "n", a.n);
    set(&mut map, "t_final", a.t_final);
    set(&mut map, "dt", a.dt);
    set(&mut map, "scheme", parse_scheme(&a.scheme)?);
    set(&mut map, "store_every", a.store_every);
    default_n(&mut map, 64);
    let cfg: SolveConfig = decode(map)?;
    let traj = solve_from(&cfg)?;
    let file = fs::File::create(&out).map_err(|e| Failure::Runtime(format!("{}: {e}", out.display())))?;
    traj.write_to(std::io::BufWriter::new(file))
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    println!(
        "wrote {} records (N = {}, dt = {:e}) to {}",
        traj.times.len(),
        traj.grid.n,
        traj.dt,
        out.display()
    );
    Ok(true)
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct GaugeConfig {
    u0: U0Spec,
    n: usize,
    t_final: f64,
    #[serde(default)]
    dt: Option<f64>,
    #[serde(default = "one")]
    store_every: usize,
    #[serde(default = "gauge_tol")]
    tol: f64,
}

fn gauge_tol() -> f64 {
    1e-9
}

#[derive(Serialize)]
struct GaugeReport {
    n: usize,
    t_final: f64,
    round_trip_error: f64,
    tail_mass: f64,
    tol: f64,
    passed: bool,
    residual: Vec<(f64, f64)>,
}

fn cmd_gauge_check(a: &GaugeArgs) -> CmdResult {
    let mut map = load_config(a.common.config.as_deref())?;
    let out = output_path(&mut map, &a.common.out, "gauge_residual.csv")?;
    let format = report_format(&mut map, &a.format)?;
    set_u0(&mut map, &a.u0)?;
    set(&mut map, "n", a.n);
    set(&mut map, "t_final", a.t_final);
    set(&mut map, "dt", a.dt);
    set(&mut map, "store_every", a.store_every);
    set(&mut map, "tol", a.tol);
    default_n(&mut map, 64);
    let cfg: GaugeConfig = decode(map)?;
    let traj = solve_from(&SolveConfig {
        u0: cfg.u0.clone(),
        n: cfg.n,
        period: two_pi(),
        t_final: cfg.t_final,
        dt: cfg.dt,
        scheme: Scheme::Ifrk4,
        store_every: cfg.store_every,
    })?;
    let states = gauge::gauge_trajectory(&traj)?;
    let mut err = 0.0f64;
    let mut tail = 0.0f64;
    for st in &states {
        let back = st.reconstruct()?;
        let d = bolab_core::spectral::l2_norm(&back.sub(&st.u)?);
        let scale = bolab_core::spectral::l2_norm(&st.u);
        err = err.max(if scale > 0.0 { d / scale } else { d });
        tail = tail.max(st.tail_mass);
    }
    let residual = if traj.fields.len() >= 3 {
        gauge::gauge_residual(&traj)?
    } else {
        Vec::new()
    };
    let report = GaugeReport {
        n: cfg.n,
        t_final: cfg.t_final,
        round_trip_error: err,
        tail_mass: tail,
        tol: cfg.tol,
        passed: err <= cfg.tol,
        residual,
    };
    match format {
        ReportFormat::Json => write_json(&out, &report)?,
        ReportFormat::Csv => {
            let mut text = String::from("t,residual\n");
            for (t, r) in &report.residual {
                text.push_str(&format!("{t},{r}\n"));
            }
            fs::write(&out, text).map_err(|e| Failure::Runtime(format!("{}: {e}", out.display())))?;
        }
    }
    println!(
        "round-trip error {:.3e} (tol {:.1e}), {} residual samples",
        err,
        cfg.tol,
        report.residual.len()
    );
    Ok(report.passed)
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct LatticeConfig {
    #[serde(default = "default_max_freq")]
    max_freq: i64,
    #[serde(default = "default_m")]
    m: f64,
}

fn default_max_freq() -> i64 {
    16
}

fn default_m() -> f64 {
    4.0
}

fn cmd_verify_lattice(a: &LatticeArgs) -> CmdResult {
    let mut map = load_config(a.common.config.as_deref())?;
    let out = output_path(&mut map, &a.common.out, "lattice_report.json")?;
    set(&mut map, "max_freq", a.max_freq);
    set(&mut map, "m", a.m);
    let cfg: LatticeConfig = decode(map)?;
    if cfg.max_freq < 1 {
        return Err(Failure::Usage("max_freq must be at least 1".into()));
    }
    let report = verify_lattice(cfg.max_freq, cfg.m);
    write_json(&out, &report)?;
    let bad: u64 = report.checks.iter().map(|c| c.violations).sum();
    println!(
        "{} check families, {bad} violations, expanded max rel err {:.2e}",
        report.checks.len(),
        report.expanded_max_rel_err
    );
    Ok(report.passed())
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct NfConfig {
    #[serde(default = "default_nf_u0")]
    u0: U0Spec,
    #[serde(default = "default_nf_n")]
    n: usize,
    #[serde(default)]
    solve_n: Option<usize>,
    #[serde(default = "default_nf_t")]
    t_final: f64,
    #[serde(default = "default_nf_dt")]
    dt: f64,
    #[serde(default = "default_nf_store")]
    store_every: usize,
    #[serde(default = "default_nf_m")]
    m: f64,
    #[serde(default = "default_nf_s")]
    s: f64,
    #[serde(default = "default_nf_delta")]
    delta: f64,
    #[serde(default = "one")]
    stride: usize,
    #[serde(default = "default_nf_tol")]
    tol: f64,
}

fn default_nf_u0() -> U0Spec {
    U0Spec::Smooth {
        seed: 7,
        max_mode: 3,
        decay: 1.0,
        s: 0.25,
        norm: 0.1,
    }
}
fn default_nf_n() -> usize {
    32
}
fn default_nf_t() -> f64 {
    0.1
}
fn default_nf_dt() -> f64 {
    2.5e-4
}
fn default_nf_store() -> usize {
    10
}
fn default_nf_m() -> f64 {
    16.0
}
fn default_nf_s() -> f64 {
    0.25
}
fn default_nf_delta() -> f64 {
    0.1
}
fn default_nf_tol() -> f64 {
    1e-6
}

fn cmd_nf_residual(a: &NfArgs) -> CmdResult {
    let mut map = load_config(a.common.config.as_deref())?;
    let out = output_path(&mut map, &a.common.out, "nf_residual.json")?;
    set_u0(&mut map, &a.u0)?;
    set(&mut map, "n", a.n);
    set(&mut map, "solve_n", a.solve_n);
    set(&mut map, "t_final", a.t_final);
    set(&mut map, "dt", a.dt);
    set(&mut map, "store_every", a.store_every);
    set(&mut map, "m", a.m);
    set(&mut map, "s", a.s);
    set(&mut map, "delta", a.delta);
    set(&mut map, "stride", a.stride);
    set(&mut map, "tol", a.tol);
    let cfg: NfConfig = decode(map)?;
    let grid = Grid::torus(cfg.n)?;
    let fine = Grid::torus(cfg.solve_n.unwrap_or(2 * cfg.n))?;
    let u0 = cfg.u0.build(fine)?;
    let sc = SolverConfig {
        t_final: cfg.t_final,
        dt: Some(cfg.dt),
        scheme: Scheme::Ifrk4,
        store_every: cfg.store_every,
        dealias: true,
    };
    let traj = solver::solve(&u0, &sc)?.resampled(grid)?;
    let report = normalform_residual(&traj, cfg.m, cfg.s, cfg.delta, cfg.stride)?;
    write_json(&out, &report)?;
    println!(
        "relative residual {:.3e} over {} samples (tol {:.1e})",
        report.relative_residual, report.samples, cfg.tol
    );
    Ok(report.relative_residual <= cfg.tol)
}

fn apply_scan_flags(map: &mut Map<String, Value>, f: &ScanFlags) -> Result<(), Failure> {
    set_u0(map, &f.u0)?;
    set(map, "s", f.s);
    set(map, "t_final", f.t_final);
    set_nested(map, "run", "dt", f.dt);
    set_nested(map, "run", "scheme", parse_scheme(&f.scheme)?);
    Ok(())
}

fn emit(report: &ScanReport, out: &Path, format: ReportFormat) -> CmdResult {
    experiments::emit_report(report, out, format).map_err(|e| Failure::Runtime(e.to_string()))?;
    let mut stdout = std::io::stdout().lock();
    for (k, v) in &report.summary {
        let _ = writeln!(stdout, "{k} = {v}");
    }
    Ok(true)
}

fn cmd_smoothing(a: &SmoothingArgs) -> CmdResult {
    let mut map = load_config(a.common.config.as_deref())?;
    let out = output_path(&mut map, &a.common.out, "smoothing.csv")?;
    let format = report_format(&mut map, &a.scan.format)?;
    apply_scan_flags(&mut map, &a.scan)?;
    set(&mut map, "delta", a.delta);
    set(&mut map, "resolutions", a.resolutions.clone());
    set(&mut map, "store_every", a.store_every);
    let cfg: SmoothingConfig = decode(map)?;
    let report = experiments::smoothing_scan(&cfg)?;
    emit(&report, &out, format)
}

fn cmd_strichartz(a: &StrichartzArgs) -> CmdResult {
    let mut map = load_config(a.common.config.as_deref())?;
    let out = output_path(&mut map, &a.common.out, "strichartz.csv")?;
    let format = report_format(&mut map, &a.scan.format)?;
    apply_scan_flags(&mut map, &a.scan)?;
    set(&mut map, "n", a.n);
    set(&mut map, "p", a.p);
    set(&mut map, "bands", a.bands.clone());
    set(&mut map, "store_every", a.store_every);
    let cfg: StrichartzConfig = decode(map)?;
    let report = experiments::strichartz_scan(&cfg)?;
    emit(&report, &out, format)
}

fn cmd_difference(a: &DifferenceArgs) -> CmdResult {
    let mut map = load_config(a.common.config.as_deref())?;
    let out = output_path(&mut map, &a.common.out, "difference.csv")?;
    let format = report_format(&mut map, &a.scan.format)?;
    set_u0(&mut map, &a.scan.u0)?;
    set(&mut map, "s", a.scan.s);
    set(&mut map, "t_final", a.scan.t_final);
    set(&mut map, "n", a.n);
    set(&mut map, "samples", a.samples);
    set_nested(&mut map, "first", "dt", a.scan.dt);
    set_nested(&mut map, "first", "scheme", parse_scheme(&a.scan.scheme)?);
    set_nested(&mut map, "second", "dt", a.dt2);
    set_nested(&mut map, "second", "scheme", parse_scheme(&a.scheme2)?);
    let cfg: DifferenceConfig = decode(map)?;
    let report = experiments::difference_scan(&cfg)?;
    emit(&report, &out, format)
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("BOLAB_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("BOLAB_THREADS={v:?} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

fn run(cli: &Cli) -> CmdResult {
    if let Some(n) = thread_count(cli.threads)? {
        if n == 0 {
            return Err(Failure::Usage("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::GaugeCheck(a) => cmd_gauge_check(a),
        Command::VerifyLattice(a) => cmd_verify_lattice(a),
        Command::NfResidual(a) => cmd_nf_residual(a),
        Command::Smoothing(a) => cmd_smoothing(a),
        Command::Strichartz(a) => cmd_strichartz(a),
        Command::Difference(a) => cmd_difference(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("check failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
