// SPDX-License-Identifier: Apache-2.0

//! `cvneg`: logarithmic negativity of a two-mode squeezed vacuum in laser
//! channels.
//!
//! Exit codes: 0 success, 1 failed check or numerical failure, 2 invalid
//! argument, 3 I/O error.

mod format;
mod sweep;
mod wigner;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cvneg::negativity::{en_analytic, threshold_time, threshold_time_bisect};
use cvneg::verify::{run_suite, DEFAULT_CUTOFF, DEFAULT_SEED};
use cvneg::{ChannelParams, Error};

use crate::sweep::{SweepSpec, SweepVar};

#[derive(Parser)]
#[command(name = "cvneg", version, about = "Entanglement of a two-mode squeezed vacuum in gain/loss channels")]
struct Cli {
    /// Worker threads for sweeps and verification (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Logarithmic negativity at one parameter point.
    #[command(allow_negative_numbers = true)]
    EnPoint {
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        channel: ChannelArgs,
        /// Print one JSON object instead of `key: value` lines.
        #[arg(long)]
        json: bool,
    },
    /// Logarithmic negativity over a one-dimensional grid.
    #[command(allow_negative_numbers = true)]
    Sweep {
        /// Swept quantity; `T` is the transmissivity of equal pure loss on both modes.
        #[arg(long, value_enum)]
        var: SweepVar,
        #[arg(long)]
        start: f64,
        #[arg(long)]
        stop: f64,
        #[arg(long)]
        count: usize,
        /// Squeezing (fixed unless `--var r`).
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        /// Transmissivity for `--var r` sweeps under equal pure loss.
        #[arg(long = "T")]
        transmissivity: Option<f64>,
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Disentanglement time for equal gain `g` and loss `kappa` on both modes.
    #[command(allow_negative_numbers = true)]
    Threshold {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        g: f64,
        /// Also report the bisection root and its distance to the closed form.
        #[arg(long)]
        bisect: bool,
    },
    /// Run verification checks and print one JSON line per report.
    Verify {
        /// `all` or one of: transpose, squeezer, reflections, covariance, channel, negativity.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Evolved Wigner function W on a quadrature grid, as CSV.
    #[command(allow_negative_numbers = true)]
    WignerGrid {
        #[arg(long)]
        r: f64,
        #[command(flatten)]
        channel: ChannelArgs,
        /// Grid spans `[-half-width, half-width]` in each swept quadrature.
        #[arg(long, default_value_t = 2.0)]
        half_width: f64,
        #[arg(long, default_value_t = 21)]
        points: usize,
        #[arg(long, value_enum, default_value_t = wigner::Slice::Qq)]
        slice: wigner::Slice,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy, Debug)]
struct ChannelArgs {
    /// Loss rate of both modes (overridden per mode by --kappa1/--kappa2).
    #[arg(long)]
    kappa: Option<f64>,
    /// Gain rate of both modes (overridden per mode by --g1/--g2).
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    kappa1: Option<f64>,
    #[arg(long)]
    g1: Option<f64>,
    #[arg(long)]
    kappa2: Option<f64>,
    #[arg(long)]
    g2: Option<f64>,
    /// Evolution time.
    #[arg(long, default_value_t = 0.0)]
    t: f64,
}

impl ChannelArgs {
    fn params(&self) -> cvneg::Result<ChannelParams> {
        let kappa = self.kappa.unwrap_or(0.0);
        let g = self.g.unwrap_or(0.0);
        ChannelParams::new(
            self.kappa1.unwrap_or(kappa),
            self.g1.unwrap_or(g),
            self.kappa2.unwrap_or(kappa),
            self.g2.unwrap_or(g),
            self.t,
        )
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A failure with its exit code.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Numerical(String),
    Io(String),
    ChecksFailed(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::ChecksFailed(_) | Failure::Numerical(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::InvalidArgument(_) | Error::NoThreshold(_) | Error::UnsupportedState(_) | Error::CutoffTooSmall { .. } => {
                Failure::Invalid(err.to_string())
            }
            _ => Failure::Numerical(err.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Io(err.to_string())
    }
}

/// Opens `--out` or standard output.
pub fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn check_finite(name: &str, value: f64) -> Result<(), Failure> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("invalid argument: {name} must be finite, got {value}")))
    }
}

fn en_point(r: f64, channel: &ChannelArgs, json: bool) -> Result<(), Failure> {
    check_finite("r", r)?;
    let ch = channel.params()?;
    let rep = en_analytic(r, &ch)?;
    let mut out = std::io::stdout().lock();
    if json {
        let line = serde_json::to_string(&rep).map_err(|e| Failure::Numerical(e.to_string()))?;
        writeln!(out, "{line}")?;
    } else {
        let rows = [
            ("e_n", format::num(rep.e_n)),
            ("log_ratio", format::num(rep.log_ratio)),
            ("trace_norm", format::num(rep.trace_norm)),
            ("delta", format::num(rep.delta)),
            ("lambda_plus", format::num(rep.lambda_plus)),
            ("lambda_minus", format::num(rep.lambda_minus)),
            ("entangled", rep.entangled.to_string()),
        ];
        for (key, value) in rows {
            writeln!(out, "{key}: {value}")?;
        }
    }
    Ok(())
}

fn threshold(r: f64, kappa: f64, g: f64, bisect: bool) -> Result<(), Failure> {
    let t_c = threshold_time(r, kappa, g)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "t_c: {}", format::num(t_c))?;
    if bisect {
        let root = threshold_time_bisect(r, kappa, g, 1e-12)?;
        writeln!(out, "t_c_bisect: {}", format::num(root))?;
        writeln!(out, "abs_diff: {}", format::num((root - t_c).abs()))?;
    }
    Ok(())
}

fn verify(suite: &str, seed: u64, cutoff: usize) -> Result<(), Failure> {
    let reports = run_suite(suite, seed, cutoff)?;
    let mut out = std::io::stdout().lock();
    for rep in &reports {
        writeln!(out, "{}", rep.to_json_line())?;
    }
    out.flush()?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(Failure::ChecksFailed(failed));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::EnPoint { r, channel, json } => en_point(r, &channel, json),
        Command::Sweep { var, start, stop, count, r, transmissivity, channel, format, out } => {
            let spec = SweepSpec::new(var, start, stop, count, r, transmissivity, channel, format)?;
            let rows = spec.evaluate()?;
            let mut sink = open_output(&out)?;
            spec.write(&rows, &mut sink)?;
            sink.flush()?;
            Ok(())
        }
        Command::Threshold { r, kappa, g, bisect } => threshold(r, kappa, g, bisect),
        Command::Verify { suite, seed, cutoff } => verify(&suite, seed, cutoff),
        Command::WignerGrid { r, channel, half_width, points, slice, out } => {
            let grid = wigner::grid(r, &channel.params()?, half_width, points, slice)?;
            let mut sink = open_output(&out)?;
            wigner::write_csv_rows(&grid, &mut sink)?;
            sink.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: invalid argument: threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::ChecksFailed(n) => eprintln!("error: {n} check(s) failed"),
                Failure::Invalid(msg) | Failure::Numerical(msg) | Failure::Io(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
