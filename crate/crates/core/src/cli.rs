//! Command-line surface. Every output starts with the tool version and the
//! resolved configuration; rerunning that configuration reproduces the
//! output byte for byte.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::experiment::{
    factorial_moments, gumbel_gof, hitting_agreement, nhat_curve, poisson_gof, run_trials, write_jsonl,
    ExperimentConfig, DEFAULT_MAX_REDUCTION_SIZE, DEFAULT_WINDOW_OFFSET,
};
use crate::format;
use crate::homology::{betti_process, FieldChoice, StepFunction};
use crate::maximal::FaceCountProcess;
use crate::process::{event_schedule, rescale_time, EdgeWeights};
use crate::spectral::{garland_certify, zuk_certify};

pub const TOOL: &str = "clique-process";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = TOOL, version, about = "Random clique complex process: Betti curves, hitting times, limit-law tests and spectral certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Betti number and maximal-face counts at every edge event of one trial.
    BettiCurve(BettiCurveArgs),
    /// Hitting times T and T' over a seeded campaign (JSON lines).
    Hitting(HittingArgs),
    /// Poisson fit of N_k(t_c) over a seeded campaign (JSON).
    PoissonTest(PoissonArgs),
    /// Garland or Zuk certificate for a complex read from JSON.
    Certify(CertifyArgs),
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid 64-bit seed '{s}': {e}"))
}

fn parse_field(s: &str) -> std::result::Result<FieldChoice, String> {
    FieldChoice::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
struct BettiCurveArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_seed)]
    seed: u64,
    /// Window start in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    t_lo: f64,
    /// `prime`, `prime:<p>` or `rational`.
    #[arg(long, value_parser = parse_field, default_value = "prime")]
    field: FieldChoice,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CampaignArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long, value_parser = parse_seed, default_value = "0")]
    master_seed: u64,
    #[arg(long, value_parser = parse_field, default_value = "prime")]
    field: FieldChoice,
    /// Worker threads; does not affect the output.
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_REDUCTION_SIZE)]
    max_reduction_size: f64,
    /// Rescaled time where homology starts being tracked; affects speed only.
    #[arg(long, default_value_t = DEFAULT_WINDOW_OFFSET, allow_negative_numbers = true)]
    homology_window_c: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct HittingArgs {
    #[command(flatten)]
    campaign: CampaignArgs,
    /// Rescaled times at which counts are recorded.
    #[arg(long = "c", value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
    c_grid: Vec<f64>,
}

#[derive(Debug, Args)]
struct PoissonArgs {
    #[command(flatten)]
    campaign: CampaignArgs,
    #[arg(long, allow_negative_numbers = true)]
    c: f64,
    /// Also fit the Betti number marginal (runs homology).
    #[arg(long)]
    betti: bool,
    #[arg(long, default_value_t = 4)]
    r_max: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Mode {
    Garland,
    Zuk,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Mode::Garland)]
    mode: Mode,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let to_out = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            let _ = if to_out { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return if to_out { 0 } else { 2 };
        }
    };
    let (path, result) = match &cli.command {
        Command::BettiCurve(a) => (a.out.clone(), betti_curve(a)),
        Command::Hitting(a) => (a.campaign.out.clone(), hitting(a)),
        Command::PoissonTest(a) => (a.campaign.out.clone(), poisson_test(a)),
        Command::Certify(a) => (a.out.clone(), certify(a)),
    };
    let (bytes, failure) = match result {
        Ok(bytes) => (bytes, None),
        Err(Failure { partial, error }) => (partial, Some(error)),
    };
    let written = match &path {
        Some(p) => fs::write(p, &bytes),
        None => out.write_all(&bytes).and_then(|_| out.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return 1;
    }
    match failure {
        None => 0,
        Some(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::OutOfRegime(_) | Error::InvalidFace(_) | Error::Parse { .. } => 2,
        _ => 1,
    }
}

/// A failed command and whatever output it produced before failing.
struct Failure {
    partial: Vec<u8>,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure {
            partial: Vec::new(),
            error,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

fn header(command: &str, config: &impl Serialize) -> serde_json::Value {
    json!({ "tool": TOOL, "version": VERSION, "command": command, "config": config })
}

#[derive(Serialize)]
struct BettiCurveConfig {
    n: usize,
    k: usize,
    seed: u64,
    t_lo: f64,
    field: FieldChoice,
}

fn betti_curve(a: &BettiCurveArgs) -> Result<Vec<u8>, Failure> {
    let config = BettiCurveConfig {
        n: a.n,
        k: a.k,
        seed: a.seed,
        t_lo: a.t_lo,
        field: a.field.validate()?,
    };
    if !(0.0..1.0).contains(&a.t_lo) {
        return Err(Error::InvalidParameter(format!("--t-lo {} leaves an empty window", a.t_lo)).into());
    }
    // Validates n and k for the time rescaling.
    rescale_time(a.t_lo, a.k, a.n)?;
    let w = EdgeWeights::generate(a.n, a.seed)?;
    let bp = betti_process(&w, a.k, a.t_lo, a.field)?;
    let fc = FaceCountProcess::new(&w, a.k, a.t_lo)?;
    let nk = fc.step_function(a.t_lo);
    let nk_star = StepFunction::from_intervals(fc.intervals.iter().map(|iv| (f64::NEG_INFINITY, iv.death)), a.t_lo);
    let schedule = event_schedule(&w, a.t_lo, 1.0)?;

    let mut buf = Vec::new();
    writeln!(buf, "# {}", header("betti-curve", &config))?;
    writeln!(buf, "t,c,beta_k,N_k,N_k_star")?;
    let times = std::iter::once(a.t_lo).chain(schedule.events.iter().map(|e| e.weight));
    for t in times {
        writeln!(
            buf,
            "{},{},{},{},{}",
            format::real(t),
            format::real(rescale_time(t, a.k, a.n)?),
            bp.value_at(t),
            nk.value_at(t),
            nk_star.value_at(t)
        )?;
    }
    Ok(buf)
}

fn campaign_config(a: &CampaignArgs, c_grid: Vec<f64>, compute_betti: bool) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(a.n, a.k, c_grid, a.trials, a.master_seed);
    cfg.field = a.field;
    cfg.parallelism = a.parallelism;
    cfg.compute_betti = compute_betti;
    cfg.max_reduction_size = a.max_reduction_size;
    cfg.homology_window_c = Some(a.homology_window_c);
    cfg.time_budget = match a.time_budget {
        Some(s) if !(s >= 0.0 && s.is_finite()) => {
            return Err(Error::InvalidParameter(format!("--time-budget {s} must be a non-negative number")))
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn hitting(a: &HittingArgs) -> Result<Vec<u8>, Failure> {
    let cfg = campaign_config(&a.campaign, a.c_grid.clone(), true)?;
    let mut buf = Vec::new();
    let mut head = header("hitting", &cfg);
    head["kind"] = json!("header");
    writeln!(buf, "{head}")?;
    let records = match run_trials(&cfg) {
        Ok(r) => r,
        Err(e) => {
            write_jsonl(&e.partial, &mut buf)?;
            let marker = json!({
                "kind": "budget_exceeded",
                "completed_trials": e.partial.len(),
                "message": e.error.to_string(),
            });
            writeln!(buf, "{marker}")?;
            return Err(Failure {
                partial: buf,
                error: e.error,
            });
        }
    };
    write_jsonl(&records, &mut buf)?;
    let summary = json!({
        "kind": "summary",
        "trials": records.len(),
        "agreement_rate": hitting_agreement(&records)?,
        "gumbel": gumbel_gof(&records, cfg.k, cfg.n)?,
        "nhat": nhat_curve(&records, &cfg.c_grid)?,
    });
    writeln!(buf, "{summary}")?;
    Ok(buf)
}

fn poisson_test(a: &PoissonArgs) -> Result<Vec<u8>, Failure> {
    let cfg = campaign_config(&a.campaign, vec![a.c], a.betti)?;
    let records = run_trials(&cfg).map_err(|e| e.error)?;
    let report = json!({
        "tool": TOOL,
        "version": VERSION,
        "command": "poisson-test",
        "config": &cfg,
        "r_max": a.r_max,
        "poisson": poisson_gof(&records, a.c, cfg.k)?,
        "factorial_moments": factorial_moments(&records, cfg.k, a.c, a.r_max)?,
        "nhat": nhat_curve(&records, &cfg.c_grid)?,
    });
    let mut buf = serde_json::to_vec_pretty(&report)?;
    buf.push(b'\n');
    Ok(buf)
}

/// Input of `certify`: faces are closed downward.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub n: usize,
    pub faces: Vec<Vec<u32>>,
    #[serde(default)]
    pub dim_cap: Option<usize>,
}

/// Parses a complex file. `min_dim_cap` is raised to the largest face
/// dimension when that is bigger.
pub fn load_complex(text: &str, min_dim_cap: usize) -> Result<SimplicialComplex> {
    let file: ComplexFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let mut faces = Vec::with_capacity(file.faces.len());
    for (i, f) in file.faces.iter().enumerate() {
        let bad = |message: String| Error::Parse {
            location: format!("faces[{i}]"),
            message,
        };
        if let Some(&v) = f.iter().find(|&&v| v as usize >= file.n) {
            return Err(bad(format!("vertex {v} out of range for n = {}", file.n)));
        }
        faces.push(Face::new(f.clone()).map_err(|e| bad(e.to_string()))?);
    }
    let top = faces.iter().map(Face::dim).max().unwrap_or(0);
    let dim_cap = file.dim_cap.unwrap_or(top).max(min_dim_cap);
    SimplicialComplex::from_generators(file.n, dim_cap, faces)
}

fn certify(a: &CertifyArgs) -> Result<Vec<u8>, Failure> {
    let text = fs::read_to_string(&a.input)?;
    let k = match a.mode {
        Mode::Garland => a.k,
        Mode::Zuk => 1,
    };
    if k < 1 {
        return Err(Error::InvalidParameter("--k must be at least 1".into()).into());
    }
    let x = load_complex(&text, k + 1)?;
    let certificate = match a.mode {
        Mode::Garland => garland_certify(&x, k)?,
        Mode::Zuk => zuk_certify(&x)?,
    };
    let report = json!({
        "tool": TOOL,
        "version": VERSION,
        "command": "certify",
        "config": { "input": a.input.display().to_string(), "k": k, "mode": a.mode },
        "certificate": certificate,
    });
    let mut buf = serde_json::to_vec_pretty(&report)?;
    buf.push(b'\n');
    Ok(buf)
}
