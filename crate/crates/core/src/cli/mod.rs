//! Command-line front end. Every subcommand validates its inputs, builds the
//! whole CSV (or report) in memory, and only then writes it to `--out` or
//! stdout.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 when `mc-verify` finds
//! points outside the acceptance window.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::gaussian::{from_db, from_squeezing_db, GaussianMode};
use config::ConfigFile;

pub use commands::{
    dense_coding_csv, entanglement_sweep_csv, linspace, mc_verify_report, optimal_bound_csv,
    photon_diagram_csv, purify_sweep_csv, NUMBER_FORMAT_DIGITS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Model(#[from] crate::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "gaussian-purify",
    version,
    about = "Purification of Gaussian squeezed states: sweeps, photon budgets, dense coding, entanglement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Feed-forward purification versus tap transmission.
    PurifySweep(SweepArgs),
    /// Minimum phase variance versus target amplitude variance.
    OptimalBound(SweepArgs),
    /// Photon-number trajectories with and without feed-forward.
    PhotonDiagram(SweepArgs),
    /// Dense-coding capacity over a (non-classical, thermal) photon grid.
    DenseCoding(SweepArgs),
    /// Log-negativity of two purified beams versus tap transmission.
    EntanglementSweep(SweepArgs),
    /// Monte-Carlo check of the analytic feed-forward variances.
    McVerify(SweepArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::PurifySweep(_) => "purify-sweep",
            Command::OptimalBound(_) => "optimal-bound",
            Command::PhotonDiagram(_) => "photon-diagram",
            Command::DenseCoding(_) => "dense-coding",
            Command::EntanglementSweep(_) => "entanglement-sweep",
            Command::McVerify(_) => "mc-verify",
        }
    }

    fn args(&self) -> &SweepArgs {
        match self {
            Command::PurifySweep(a)
            | Command::OptimalBound(a)
            | Command::PhotonDiagram(a)
            | Command::DenseCoding(a)
            | Command::EntanglementSweep(a)
            | Command::McVerify(a) => a,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Amplitude-quadrature variance (shot-noise units)
    #[arg(long, conflicts_with = "squeezing_db")]
    pub vx: Option<f64>,
    /// Phase-quadrature variance (shot-noise units)
    #[arg(long, conflicts_with = "antisqueezing_db")]
    pub vy: Option<f64>,
    /// Amplitude squeezing in dB below shot noise (positive means vx < 1)
    #[arg(long, allow_hyphen_values = true)]
    pub squeezing_db: Option<f64>,
    /// Phase anti-squeezing in dB above shot noise
    #[arg(long, allow_hyphen_values = true)]
    pub antisqueezing_db: Option<f64>,
    #[arg(long)]
    pub eta_start: Option<f64>,
    #[arg(long)]
    pub eta_stop: Option<f64>,
    #[arg(long)]
    pub eta_steps: Option<usize>,
    /// In-loop homodyne efficiency
    #[arg(long)]
    pub eps: Option<f64>,
    /// Verification detector efficiency
    #[arg(long)]
    pub eta_det: Option<f64>,
    /// Photons per bandwidth per time available to the communication protocol
    #[arg(long)]
    pub n_cp: Option<f64>,
    /// Beam-splitter transmission used to generate entanglement
    #[arg(long)]
    pub bs_t: Option<f64>,
    /// Monte-Carlo samples per grid point
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest non-classical photon number on the dense-coding grid
    #[arg(long)]
    pub noncl_max: Option<f64>,
    /// Largest thermal photon number on the dense-coding grid
    #[arg(long)]
    pub thermal_max: Option<f64>,
    /// Points per axis on the dense-coding grid
    #[arg(long)]
    pub grid_steps: Option<usize>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat key=value file mirroring the flags; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved, validated parameters for one subcommand run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub subcommand: &'static str,
    pub input: GaussianMode,
    pub eta_start: f64,
    pub eta_stop: f64,
    pub eta_steps: usize,
    pub eps: f64,
    pub eta_det: f64,
    pub n_cp: f64,
    pub bs_t: f64,
    pub samples: usize,
    pub seed: u64,
    pub noncl_max: f64,
    pub thermal_max: f64,
    pub grid_steps: usize,
    pub out: Option<PathBuf>,
    /// Whether the input state was given explicitly (flag or config).
    pub explicit_state: bool,
}

impl SweepSpec {
    pub fn etas(&self) -> Vec<f64> {
        linspace(self.eta_start, self.eta_stop, self.eta_steps)
    }
}

struct Defaults {
    vx: f64,
    vy: f64,
    eps: f64,
}

fn defaults_for(cmd: &Command) -> Defaults {
    match cmd {
        // measured 3.4 dB-class squeezing with a representative excess phase noise
        Command::PurifySweep(_) | Command::OptimalBound(_) | Command::McVerify(_) => Defaults {
            vx: 0.47,
            vy: 100.0,
            eps: crate::purification::EXPERIMENT_EPS,
        },
        Command::PhotonDiagram(_) | Command::DenseCoding(_) | Command::EntanglementSweep(_) => {
            Defaults {
                vx: 0.3,
                vy: 400.0,
                eps: 1.0,
            }
        }
    }
}

fn pick<T: std::str::FromStr + Copy>(
    flag: Option<T>,
    cfg: &ConfigFile,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    Ok(match flag {
        Some(v) => v,
        None => cfg.get(key)?.unwrap_or(default),
    })
}

/// One quadrature from a linear flag, a dB flag, or the config file.
fn pick_quadrature(
    linear: Option<f64>,
    db: Option<f64>,
    cfg: &ConfigFile,
    (lin_key, db_key): (&str, &str),
    db_to_linear: fn(f64) -> f64,
) -> Result<Option<f64>, CliError> {
    if let Some(v) = linear {
        return Ok(Some(v));
    }
    if let Some(d) = db {
        return Ok(Some(db_to_linear(d)));
    }
    match (cfg.get::<f64>(lin_key)?, cfg.get::<f64>(db_key)?) {
        (Some(_), Some(_)) => Err(CliError::Usage(format!(
            "config gives both '{lin_key}' and '{db_key}'; use exactly one"
        ))),
        (Some(v), None) => Ok(Some(v)),
        (None, Some(d)) => Ok(Some(db_to_linear(d))),
        (None, None) => Ok(None),
    }
}

fn check_unit(name: &str, v: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--{name} = {v} must lie in [0, 1]"
        )))
    }
}

/// Merges flags, config file and subcommand defaults, then validates.
pub fn resolve(cmd: &Command) -> Result<SweepSpec, CliError> {
    let args = cmd.args();
    let cfg = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let d = defaults_for(cmd);

    let vx = pick_quadrature(
        args.vx,
        args.squeezing_db,
        &cfg,
        ("vx", "squeezing-db"),
        from_squeezing_db,
    )?;
    let vy = pick_quadrature(
        args.vy,
        args.antisqueezing_db,
        &cfg,
        ("vy", "antisqueezing-db"),
        from_db,
    )?;
    let explicit_state = vx.is_some() || vy.is_some();
    let input = GaussianMode::new(vx.unwrap_or(d.vx), vy.unwrap_or(d.vy))
        .map_err(|e| CliError::Usage(format!("invalid input state: {e}")))?;

    let out = match &args.out {
        Some(p) => Some(p.clone()),
        None => cfg.get_str("out").map(PathBuf::from),
    };

    let spec = SweepSpec {
        subcommand: cmd.name(),
        input,
        eta_start: pick(args.eta_start, &cfg, "eta-start", 0.0)?,
        eta_stop: pick(args.eta_stop, &cfg, "eta-stop", 1.0)?,
        eta_steps: pick(args.eta_steps, &cfg, "eta-steps", 101)?,
        eps: pick(args.eps, &cfg, "eps", d.eps)?,
        eta_det: pick(args.eta_det, &cfg, "eta-det", 1.0)?,
        n_cp: pick(args.n_cp, &cfg, "n-cp", crate::photon::DEFAULT_N_CP)?,
        bs_t: pick(args.bs_t, &cfg, "bs-t", 0.9)?,
        samples: pick(args.samples, &cfg, "samples", 100_000)?,
        seed: pick(args.seed, &cfg, "seed", 20_050_101)?,
        noncl_max: pick(args.noncl_max, &cfg, "noncl-max", 2.0)?,
        thermal_max: pick(args.thermal_max, &cfg, "thermal-max", 120.0)?,
        grid_steps: pick(args.grid_steps, &cfg, "grid-steps", 101)?,
        out,
        explicit_state,
    };

    check_unit("eta-start", spec.eta_start)?;
    check_unit("eta-stop", spec.eta_stop)?;
    check_unit("eps", spec.eps)?;
    check_unit("eta-det", spec.eta_det)?;
    check_unit("bs-t", spec.bs_t)?;
    if spec.eta_steps < 1 {
        return Err(CliError::Usage("--eta-steps must be at least 1".into()));
    }
    if spec.grid_steps < 1 {
        return Err(CliError::Usage("--grid-steps must be at least 1".into()));
    }
    if spec.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    if !(spec.n_cp.is_finite() && spec.n_cp > 0.0) {
        return Err(CliError::Usage(format!(
            "--n-cp = {} must be positive",
            spec.n_cp
        )));
    }
    for (name, v) in [
        ("noncl-max", spec.noncl_max),
        ("thermal-max", spec.thermal_max),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(CliError::Usage(format!(
                "--{name} = {v} must be non-negative"
            )));
        }
    }
    Ok(spec)
}

/// Outcome of a subcommand: its text output and whether verification passed.
pub struct Output {
    pub text: String,
    pub verified: bool,
}

pub fn execute(cmd: &Command, spec: &SweepSpec) -> Result<Output, CliError> {
    let text = match cmd {
        Command::PurifySweep(_) => purify_sweep_csv(spec)?,
        Command::OptimalBound(_) => optimal_bound_csv(spec)?,
        Command::PhotonDiagram(_) => photon_diagram_csv(spec)?,
        Command::DenseCoding(_) => dense_coding_csv(spec)?,
        Command::EntanglementSweep(_) => entanglement_sweep_csv(spec)?,
        Command::McVerify(_) => {
            let (text, verified) = mc_verify_report(spec)?;
            return Ok(Output { text, verified });
        }
    };
    Ok(Output {
        text,
        verified: true,
    })
}

/// Parses `args` (including the program name), runs the subcommand and returns
/// the exit status. Diagnostics go to `stderr`; results go to `--out` or `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match run_command(&cli.command, stdout) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(stderr, "{}: verification failed", cli.command.name());
            EXIT_VERIFY_FAILED
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}: error: {e}", cli.command.name());
            EXIT_USAGE
        }
    }
}

fn run_command(cmd: &Command, stdout: &mut dyn Write) -> Result<bool, CliError> {
    let spec = resolve(cmd)?;
    let output = execute(cmd, &spec)?;
    match &spec.out {
        Some(path) => std::fs::write(path, output.text.as_bytes())?,
        None => stdout.write_all(output.text.as_bytes())?,
    }
    Ok(output.verified)
}

/// Entry point for the binary.
pub fn main_exit() -> ! {
    let code = run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code)
}
