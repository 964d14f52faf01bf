//! Command-line pipeline for probe-spin Ising thermodynamics.
//!
//! One subcommand per stage: `coherence` samples the decoherence signal,
//! `reconstruct` turns coherence data into the zero-field free energy,
//! `fit-c` runs the strip-geometry central-charge regression, `elongation`
//! produces the fixed-area table, and `oracle` cross-validates every
//! evaluation route on enumeration-scale lattices.
//!
//! Exit codes: 0 success, 2 validation error, 3 oracle tolerance failure,
//! 4 capacity error, 1 I/O failure. Outputs are written atomically and are
//! byte-identical across reruns of the same configuration
//! (`RAYON_NUM_THREADS` changes scheduling, never results).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use holoising::{Error, BETA_CRITICAL};

mod commands;
mod io;
mod reports;

/// Portion of the coherence period to sample; the remainder of the full
/// turn is completed from exact symmetries before any quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpanArg {
    /// Quarter turn (pi/2) for even site counts, half turn otherwise.
    Auto,
    /// [0, pi/2]; valid for even site counts only.
    Quarter,
    /// [0, pi].
    Half,
    /// [0, 2pi].
    Full,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn validation(message: String) -> Self {
        CliError { code: 2, message }
    }
    fn tolerance(message: String) -> Self {
        CliError { code: 3, message }
    }
    fn io(message: String) -> Self {
        CliError { code: 1, message }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Validation(_) | Error::Contour(_) => 2,
            Error::Capacity(_) => 4,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "holoising",
    version,
    about = "2D Ising probe-spin decoherence, free-energy reconstruction and central-charge fits",
    after_help = "Defaults: beta = ln(1+sqrt(2))/2 (the critical point), h = 0.1, J = 1, \
                  394 sample points. Parallelism honors RAYON_NUM_THREADS."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the probe-spin coherence signal over one period, as CSV.
    Coherence {
        #[arg(long)]
        rows: u32,
        #[arg(long)]
        cols: u32,
        /// Inverse temperature (defaults to the critical point).
        #[arg(long, default_value_t = BETA_CRITICAL)]
        beta: f64,
        /// Real magnetic field (bath control parameter), in units of J.
        #[arg(long = "h", default_value_t = 0.1)]
        field: f64,
        /// Probe-bath coupling; only the product eta*t enters, recorded in
        /// the CSV header.
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Sample count (3k+1, closed grid).
        #[arg(long, default_value_t = 394)]
        points: usize,
        #[arg(long, value_enum, default_value_t = SpanArg::Full)]
        span: SpanArg,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct Z(beta, lambda')/Z(beta, h) and the per-site free energy
    /// from coherence data; JSON report.
    Reconstruct {
        #[arg(long, required_unless_present = "from_csv", conflicts_with = "from_csv")]
        rows: Option<u32>,
        #[arg(long, required_unless_present = "from_csv", conflicts_with = "from_csv")]
        cols: Option<u32>,
        #[arg(long, default_value_t = BETA_CRITICAL, conflicts_with = "from_csv")]
        beta: f64,
        #[arg(long = "h", default_value_t = 0.1, conflicts_with = "from_csv")]
        field: f64,
        #[arg(long, default_value_t = 394, conflicts_with = "from_csv")]
        points: usize,
        #[arg(long, value_enum, default_value_t = SpanArg::Auto, conflicts_with = "from_csv")]
        span: SpanArg,
        /// Target field lambda'; must satisfy |lambda'| < h.
        #[arg(long, default_value_t = 0.0)]
        lambda_prime: f64,
        /// Reconstruct from a previously emitted coherence CSV instead of
        /// simulating; all bath parameters come from its header.
        #[arg(long)]
        from_csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strip-geometry central-charge fit: f vs 1/N^2 over a lattice family.
    FitC {
        /// Comma-separated NxM list sharing the long edge.
        #[arg(long, default_value = "6x50,7x50,8x50,9x50,10x50")]
        lattices: String,
        #[arg(long, default_value_t = BETA_CRITICAL)]
        beta: f64,
        #[arg(long = "h", default_value_t = 0.1)]
        field: f64,
        #[arg(long, default_value_t = 394)]
        points: usize,
        #[arg(long, value_enum, default_value_t = SpanArg::Auto)]
        span: SpanArg,
        /// Fit exact h = 0 transfer-matrix free energies instead of
        /// reconstructed ones (oracle pipeline).
        #[arg(long)]
        direct: bool,
        /// JSON report path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional per-point CSV (N,M,f,residual).
        #[arg(long)]
        points_csv: Option<PathBuf>,
    },
    /// Fixed-area elongation table: x, ln x, F_total, f per site (CSV).
    Elongation {
        /// Comma-separated NxM list sharing one area.
        #[arg(long, default_value = "2x50,4x25,5x20,10x10")]
        lattices: String,
        /// Also evaluate every swapped (MxN) lattice.
        #[arg(long)]
        include_swapped: bool,
        #[arg(long, default_value_t = BETA_CRITICAL)]
        beta: f64,
        #[arg(long = "h", default_value_t = 0.1)]
        field: f64,
        #[arg(long, default_value_t = 394)]
        points: usize,
        #[arg(long, value_enum, default_value_t = SpanArg::Auto)]
        span: SpanArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-validate brute force, transfer matrix, dense powering and
    /// reconstruction on all lattices up to an area cap; exits 3 if any
    /// tolerance is exceeded.
    Oracle {
        #[arg(long, default_value_t = 16)]
        area_limit: u64,
        /// Override the log/phase agreement tolerance (default 1e-10).
        #[arg(long)]
        max_log_dev: Option<f64>,
        /// Override the reconstruction tolerance (default 1e-8).
        #[arg(long)]
        max_recon_dev: Option<f64>,
        /// Optional JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coherence {
            rows,
            cols,
            beta,
            field,
            eta,
            points,
            span,
            out,
        } => commands::cmd_coherence(rows, cols, beta, field, eta, points, span, out.as_ref()),
        Command::Reconstruct {
            rows,
            cols,
            beta,
            field,
            points,
            span,
            lambda_prime,
            from_csv,
            out,
        } => commands::cmd_reconstruct(
            rows,
            cols,
            beta,
            field,
            points,
            span,
            lambda_prime,
            from_csv.as_ref(),
            out.as_ref(),
        ),
        Command::FitC {
            lattices,
            beta,
            field,
            points,
            span,
            direct,
            out,
            points_csv,
        } => commands::cmd_fit_c(
            &lattices,
            beta,
            field,
            points,
            span,
            direct,
            out.as_ref(),
            points_csv.as_ref(),
        ),
        Command::Elongation {
            lattices,
            include_swapped,
            beta,
            field,
            points,
            span,
            out,
        } => commands::cmd_elongation(
            &lattices,
            include_swapped,
            beta,
            field,
            points,
            span,
            out.as_ref(),
        ),
        Command::Oracle {
            area_limit,
            max_log_dev,
            max_recon_dev,
            out,
        } => commands::cmd_oracle(area_limit, max_log_dev, max_recon_dev, out.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
