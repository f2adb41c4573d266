//! Argument parsing, configuration merge, dispatch and exit codes.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::commands::{self, Outcome};
use crate::config::{is_global, load_kv, RunConfig};
use crate::error::CliError;
use crate::io;
use crate::suite;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "orliczlab",
    version,
    about = "Numerical laboratory for Orlicz-Sobolev integral conditions and distortion estimates"
)]
pub struct Cli {
    /// key=value file; flags given on the command line win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Seed for sampled checks
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Override a configuration key (repeatable)
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Convergent,
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalize {
    Report,
    Rescale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyCheck {
    Invariants,
    Osc,
    Diam,
    Energy,
    Hausdorff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Spheres,
    Curves,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistortionCheck {
    /// Hölder exponent and hypothesis constant of a contracting stretch
    Holder,
    /// Numerical K_f at random points against the closed form
    Kf,
    /// Joining and separating moduli of the image ring
    Reciprocity,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Classify the Calderon condition for a gauge, optionally with the six
    /// Orlicz forms (--p) and the weighted log-integral comparison (--weight)
    CheckCondition {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: Option<f64>,
        /// Lower limit of the Orlicz forms
        #[arg(long)]
        delta: Option<f64>,
        /// Radial weight for the log-integral comparison
        #[arg(long)]
        weight: Option<String>,
        /// Dimension of the weight
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        #[arg(long)]
        #[serde(skip)]
        report: Option<PathBuf>,
        #[arg(long)]
        #[serde(skip)]
        plot: Option<PathBuf>,
    },
    /// Build the extremal radial profile of a gauge
    BuildExtremal {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        #[serde(skip)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Normalize::Report)]
        normalize: Normalize,
        #[arg(long)]
        #[serde(skip)]
        report: Option<PathBuf>,
        #[arg(long)]
        #[serde(skip)]
        plot: Option<PathBuf>,
    },
    /// Build the lattice counterexample to a given depth
    BuildCounterexample {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        #[serde(skip)]
        out: Option<PathBuf>,
        #[arg(long)]
        #[serde(skip)]
        report: Option<PathBuf>,
        #[arg(long)]
        #[serde(skip)]
        plot: Option<PathBuf>,
    },
    /// Verify a saved counterexample, or build one in memory from --phi/--k/--depth
    VerifyCounterexample {
        #[arg(long, required_unless_present = "phi", conflicts_with = "phi")]
        model: Option<PathBuf>,
        #[arg(long, requires_all = ["k", "depth"])]
        phi: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "invariants,osc,diam,energy,hausdorff"
        )]
        checks: Vec<VerifyCheck>,
        #[arg(long)]
        #[serde(skip)]
        report: Option<PathBuf>,
    },
    /// Mean oscillation of a field at a point over dyadic scales
    Oscillation {
        #[arg(long)]
        field: String,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        center: String,
        #[arg(long, default_value_t = 8)]
        scales: usize,
        /// Largest radius
        #[arg(long, default_value_t = 0.5)]
        top: f64,
        #[arg(long)]
        #[serde(skip)]
        report: Option<PathBuf>,
        #[arg(long)]
        #[serde(skip)]
        plot: Option<PathBuf>,
    },
    /// Closed-form and grid moduli of a ring
    Modulus {
        /// r1,r2,n
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "const:c=1")]
        weight: String,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Grid resolution for the planar discrete solver
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        #[serde(skip)]
        report: Option<PathBuf>,
        #[arg(long)]
        #[serde(skip)]
        plot: Option<PathBuf>,
    },
    /// Distortion checks for model maps
    Distortion {
        #[arg(long)]
        map: String,
        #[arg(long, value_enum, default_value_t = DistortionCheck::Holder)]
        check: DistortionCheck,
        /// Sample points for --check kf
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// r1,r2 for --check reciprocity
        #[arg(long, default_value = "1,2.718281828459045")]
        ring: String,
        /// Grid resolution for planar reciprocity
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        #[serde(skip)]
        report: Option<PathBuf>,
    },
    /// Run a battery of scenarios and write one summary
    Suite {
        /// One `name: subcommand flags...` per line; the built-in battery when absent
        #[arg(long)]
        #[serde(skip)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        #[serde(skip)]
        report: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckCondition { .. } => "check-condition",
            Command::BuildExtremal { .. } => "build-extremal",
            Command::BuildCounterexample { .. } => "build-counterexample",
            Command::VerifyCounterexample { .. } => "verify-counterexample",
            Command::Oscillation { .. } => "oscillation",
            Command::Modulus { .. } => "modulus",
            Command::Distortion { .. } => "distortion",
            Command::Suite { .. } => "suite",
        }
    }

    pub fn report_path(&self) -> Option<&PathBuf> {
        match self {
            Command::CheckCondition { report, .. }
            | Command::BuildExtremal { report, .. }
            | Command::BuildCounterexample { report, .. }
            | Command::VerifyCounterexample { report, .. }
            | Command::Oscillation { report, .. }
            | Command::Modulus { report, .. }
            | Command::Distortion { report, .. }
            | Command::Suite { report, .. } => report.as_ref(),
        }
    }
}

fn usage(e: clap::Error) -> CliError {
    CliError::Usage(e.render().to_string().trim_end().to_string())
}

fn flag_given(args: &[OsString], long: &str) -> bool {
    let bare = format!("--{long}");
    let eq = format!("--{long}=");
    args.iter()
        .any(|a| a.to_str().is_some_and(|s| s == bare || s.starts_with(&eq)))
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Parse arguments, merging the config file: global keys set the run
/// configuration, the rest become flags of the subcommand unless given.
/// `Ok(None)` when help or version text was printed.
pub fn parse(args: Vec<OsString>) -> Result<Option<(Cli, RunConfig)>, CliError> {
    let mut args = args;
    let mut cfg = RunConfig::default();
    if let Some(path) = config_path(&args) {
        let kv = load_kv(&path)?;
        let names: Vec<String> = Cli::command()
            .get_subcommands()
            .map(|c| c.get_name().to_string())
            .collect();
        let pos = args
            .iter()
            .position(|a| names.iter().any(|n| a.to_str() == Some(n.as_str())));
        let mut injected: Vec<OsString> = Vec::new();
        for (k, v) in &kv {
            if is_global(k) {
                cfg.set(k, v)?;
                continue;
            }
            let long = k.replace('_', "-");
            let pos = pos.ok_or_else(|| {
                CliError::Usage(format!("configuration key `{k}` needs a subcommand"))
            })?;
            let name = args[pos].to_string_lossy().into_owned();
            let root = Cli::command();
            let sub = root
                .find_subcommand(&name)
                .expect("subcommand located above");
            if !sub
                .get_arguments()
                .any(|a| a.get_long() == Some(long.as_str()))
            {
                return Err(CliError::Usage(format!(
                    "unknown parameter `{k}` for `{name}`"
                )));
            }
            if !flag_given(&args, &long) {
                injected.push(OsString::from(format!("--{long}")));
                injected.push(OsString::from(v));
            }
        }
        if let Some(pos) = pos {
            args.splice(pos + 1..pos + 1, injected);
        }
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return Ok(None);
        }
        Err(e) => return Err(usage(e)),
    };
    for kv in &cli.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(Some((cli, cfg)))
}

/// Cap the rayon pool from `ORLICZLAB_THREADS`.
pub fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("ORLICZLAB_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
            CliError::Usage(format!(
                "ORLICZLAB_THREADS must be a positive integer, got `{v}`"
            ))
        })?;
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

fn emit(
    outcome: &Outcome,
    report: Option<&PathBuf>,
    started: f64,
    runtime: f64,
) -> Result<(), CliError> {
    for (path, bytes) in &outcome.artifacts {
        io::write_bytes(path, bytes)?;
    }
    if let Some((path, table)) = &outcome.plot {
        table.write(path)?;
    }
    match report {
        Some(path) => {
            io::write_json(path, &outcome.report)?;
            io::write_json(
                &io::sidecar_path(path),
                &io::sidecar(started, runtime, outcome.timing.clone()),
            )?;
            println!(
                "{} {}: {} ({} checks)",
                outcome.command,
                outcome.status_name(),
                path.display(),
                outcome.tally.total()
            );
        }
        None => {
            let bytes = io::to_pretty(&outcome.report)?;
            print!("{}", String::from_utf8_lossy(&bytes));
        }
    }
    Ok(())
}

fn fail(e: &CliError, report: Option<&PathBuf>) -> i32 {
    let body = e.to_json();
    eprintln!(
        "{}",
        serde_json::to_string(&body).unwrap_or_else(|_| e.to_string())
    );
    if let (Some(path), false) = (report, matches!(e, CliError::Usage(_))) {
        let _ = io::write_json(path, &body);
    }
    e.exit_code()
}

/// Full program: returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let (cli, cfg) = match parse(args) {
        Ok(Some(v)) => v,
        Ok(None) => return 0,
        Err(e) => return fail(&e, None),
    };
    if let Err(e) = init_threads() {
        return fail(&e, None);
    }
    let report = cli.command.report_path().cloned();
    let started = io::unix_time();
    let clock = Instant::now();
    let outcome = match &cli.command {
        Command::Suite { manifest, .. } => suite::run_suite(manifest.as_deref(), &cfg),
        other => commands::execute(other, &cfg),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => return fail(&e, report.as_ref()),
    };
    if let Err(e) = emit(
        &outcome,
        report.as_ref(),
        started,
        clock.elapsed().as_secs_f64(),
    ) {
        return fail(&e, None);
    }
    if outcome.tally.fail > 0 {
        1
    } else {
        0
    }
}
