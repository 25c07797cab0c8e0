//! Command-line front end: configuration ingestion, the four subcommands,
//! deterministic output files and a run manifest.

pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use commands::identity::{IdentityConfig, Suite};
use commands::Outcome;
use output::{render_json, render_rows, sha256_hex, to_value, Format};

pub const MANIFEST: &str = "manifest.json";
pub const THREADS_VAR: &str = "ELASTAB_THREADS";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// Invalid inputs map to `Config`; numerical failures to `Runtime`.
    pub fn from_core(e: elastab::Error) -> Self {
        use elastab::Error as E;
        match e {
            E::Config(_)
            | E::InvalidMaterial(_)
            | E::UnsupportedDomain(_)
            | E::InvalidDomain(_)
            | E::InvalidRobin(_)
            | E::InadmissibleMultiplier(_)
            | E::InadmissibleCoefficients(_)
            | E::Inadmissible(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "elastab", version, about = "Frequency-explicit stability bounds for time-harmonic elasticity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Configuration document (JSON or `key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the seed of the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory receiving every output file.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form stability bounds per (omega, lambda/mu).
    Bounds(Common),
    /// Lattice verification of the free-space bound.
    GreensVerify(Common),
    /// Finite-element sweep of the empirical stability constant.
    FemSweep(Common),
    /// Quadrature audits of the identities and the estimate chain.
    IdentityCheck {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub name: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub rows: usize,
    pub sha256: String,
}

/// Provenance of one run. Written last; the only output carrying timings.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub suite: Option<Suite>,
    pub config_path: Option<String>,
    pub config: Value,
    pub seed: Option<u64>,
    pub threads: usize,
    pub format: Format,
    pub stages: Vec<Stage>,
    pub outputs: Vec<OutputDigest>,
    pub pass: bool,
    pub summary: String,
}

fn read_config<T: DeserializeOwned>(path: Option<&Path>) -> Result<T, CliError> {
    let p = path.ok_or_else(|| CliError::Usage("--config is required for this subcommand".into()))?;
    let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
    elastab::model::config::from_document(&text).map_err(|e| match e {
        elastab::Error::Config(m) => CliError::Config(m),
        other => CliError::from_core(other),
    })
}

fn read_optional<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    path.map_or_else(|| Ok(T::default()), |p| read_config(Some(p)))
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {s:?}"))),
        },
    }
}

struct Timer {
    stages: Vec<Stage>,
    last: Instant,
}

impl Timer {
    fn new() -> Self {
        Self { stages: Vec::new(), last: Instant::now() }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.stages.push(Stage { name: name.into(), seconds: (now - self.last).as_secs_f64() });
        self.last = now;
    }
}

struct Prepared {
    subcommand: &'static str,
    suite: Option<Suite>,
    common: Common,
    config: Value,
    seed: Option<u64>,
    format: Format,
    job: Box<dyn FnOnce() -> Result<Outcome, CliError> + Send>,
}

fn prepare(command: Command) -> Result<Prepared, CliError> {
    match command {
        Command::Bounds(common) => {
            let cfg: commands::bounds::BoundsConfig = read_config(common.config.as_deref())?;
            Ok(Prepared {
                subcommand: "bounds",
                suite: None,
                config: to_value(&cfg)?,
                seed: common.seed,
                format: common.format.unwrap_or(Format::Csv),
                common,
                job: Box::new(move || commands::bounds::run(&cfg)),
            })
        }
        Command::GreensVerify(common) => {
            let mut cfg: commands::greens::GreensConfig = read_optional(common.config.as_deref())?;
            if let Some(s) = common.seed {
                cfg.seed = s;
            }
            Ok(Prepared {
                subcommand: "greens-verify",
                suite: None,
                config: to_value(&cfg)?,
                seed: Some(cfg.seed),
                format: common.format.unwrap_or(Format::Csv),
                common,
                job: Box::new(move || commands::greens::run(&cfg)),
            })
        }
        Command::FemSweep(common) => {
            let mut spec: elastab::fem::SweepSpec = read_config(common.config.as_deref())?;
            if let Some(s) = common.seed {
                spec.seed = s;
            }
            Ok(Prepared {
                subcommand: "fem-sweep",
                suite: None,
                config: to_value(&spec)?,
                seed: Some(spec.seed),
                format: common.format.unwrap_or(Format::Csv),
                common,
                job: Box::new(move || commands::fem::run(&spec)),
            })
        }
        Command::IdentityCheck { suite, common } => {
            let mut cfg: IdentityConfig = read_optional(common.config.as_deref())?;
            if let Some(s) = common.seed {
                cfg.seed = s;
            }
            Ok(Prepared {
                subcommand: "identity-check",
                suite: Some(suite),
                config: to_value(&cfg)?,
                seed: Some(cfg.seed),
                format: common.format.unwrap_or(Format::Json),
                common,
                job: Box::new(move || commands::identity::run(suite, &cfg)),
            })
        }
    }
}

fn execute(command: Command, threads: Option<usize>) -> Result<bool, CliError> {
    let mut timer = Timer::new();
    let p = prepare(command)?;
    timer.lap("configure");

    let pool = match threads {
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?,
        ),
        None => None,
    };
    let n_threads = pool.as_ref().map_or_else(rayon::current_num_threads, |p| p.current_num_threads());
    let outcome = match &pool {
        Some(pool) => pool.install(p.job)?,
        None => (p.job)()?,
    };
    timer.lap("compute");

    let files: Vec<(String, usize, String)> = outcome
        .tables
        .iter()
        .map(|(name, rows)| (format!("{name}.{}", p.format.extension()), rows.len(), render_rows(rows, p.format)))
        .collect();
    timer.lap("render");

    let out_dir = &p.common.out_dir;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut outputs = Vec::new();
    for (file, rows, text) in &files {
        let path = out_dir.join(file);
        std::fs::write(&path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        outputs.push(OutputDigest { file: file.clone(), rows: *rows, sha256: sha256_hex(text.as_bytes()) });
        println!("wrote {}", path.display());
    }
    timer.lap("write");

    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        subcommand: p.subcommand.into(),
        suite: p.suite,
        config_path: p.common.config.as_ref().map(|c| c.display().to_string()),
        config: p.config,
        seed: p.seed,
        threads: n_threads,
        format: p.format,
        stages: timer.stages,
        outputs,
        pass: outcome.pass,
        summary: outcome.summary.clone(),
    };
    let path = out_dir.join(MANIFEST);
    std::fs::write(&path, render_json(&to_value(&manifest)?))
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    println!("{} {}: {}", if outcome.pass { "PASS" } else { "FAIL" }, p.subcommand, outcome.summary);
    Ok(outcome.pass)
}

/// Parse `argv` (program name first), run the subcommand and return the
/// exit code: 0 on full pass, 1 on any violation, 2 on usage or
/// configuration errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = threads_from_env().and_then(|t| execute(cli.command, t));
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("elastab: {e}");
            e.exit_code()
        }
    }
}
