//! `twoloop` command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence,
//! 4 non-finite result.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "twoloop", version, about = "Two-loop Loewner potential toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
struct Numerics {
    /// Maximum series degree of the uniformizing maps.
    #[arg(long)]
    degree: Option<usize>,
    /// Boundary residual tolerance of the uniformization.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

use clap::Args;

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the modulus and the three uniformizing maps of a configuration.
    Uniformize {
        config: PathBuf,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// Two-loop potential by the pre-Schwarzian and winding-function routes.
    Potential {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Route::Both)]
        route: Route,
        #[command(flatten)]
        numerics: Numerics,
        /// Also evaluate this many random Möbius images.
        #[arg(long, default_value_t = 0)]
        moebius_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tabulate the circle-pair potential or the modulus criterion over τ.
    ScanTau {
        #[arg(long, value_parser = parse_range)]
        range: (f64, f64),
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = Mode::Circles)]
        mode: Mode,
        /// Trivialization JSON, required in criterion mode.
        #[arg(long)]
        trivialization: Option<PathBuf>,
    },
    /// Grunsky coefficients and the multiple Grunsky gap.
    Grunsky {
        config: PathBuf,
        /// Number of coefficients per series.
        #[arg(long, default_value_t = 128)]
        degree: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Classify the minimum of the modulus criterion for a trivialization.
    Criterion {
        trivialization: PathBuf,
        #[arg(long, value_parser = parse_range, default_value = "0.05:20")]
        range: (f64, f64),
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Finite-difference check of the Schwarzian variational formula.
    VariationCheck {
        config: PathBuf,
        /// Bump center as `re,im`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        center: num_complex::Complex64,
        #[arg(long, default_value_t = 0.3)]
        radius: f64,
        /// Bump amplitude as `re,im`.
        #[arg(long, value_parser = parse_complex, default_value = "0.1,0", allow_hyphen_values = true)]
        amplitude: num_complex::Complex64,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    Preschwarzian,
    Lk,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Circles,
    Criterion,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected A:B")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(format!("need 0 < A < B, got {a}:{b}"));
    }
    Ok((a, b))
}

fn parse_complex(s: &str) -> Result<num_complex::Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re: f64 = re.trim().parse().map_err(|e| format!("{re}: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("{im}: {e}"))?;
    Ok(num_complex::Complex64::new(re, im))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
