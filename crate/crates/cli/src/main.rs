mod commands;
mod config;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exact Wick, anti-Wick and Weyl calculus on truncated Fock spaces.
#[derive(Parser, Debug)]
#[command(name = "fockcalc", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// TOML file with tolerances, grids and cutoffs; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance the command compares against (see `--help` of each command).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Comma-separated grid: `r_min,r_max,radial,angular` for shell grids,
    /// `radius,count` for certificate cubes, radii for `detect-poly`.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Truncation degree.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Matrix of the quantized symbol on polynomials of degree ≤ cutoff, as CSV.
    Quantize {
        #[arg(long)]
        sym: PathBuf,
        /// Dense matrix in the orthonormal basis instead of exact sparse entries.
        #[arg(long)]
        float: bool,
    },
    /// Weyl symbol of any input symbol or operator.
    #[command(alias = "dequantize")]
    ToWeyl {
        #[arg(long)]
        sym: PathBuf,
    },
    /// Wick symbol of any input symbol or operator.
    ToWick {
        #[arg(long)]
        sym: PathBuf,
    },
    /// Twisted product of two Wick symbols, or Moyal product of two Weyl symbols.
    Compose {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Also compare matrices on the interior block at this cutoff.
        #[arg(long)]
        check_matrix: Option<usize>,
    },
    /// Anti-Wick expansion coefficients of a Wick symbol.
    AwExpand {
        #[arg(long)]
        sym: PathBuf,
        /// Expansion order; defaults to the z-degree, where the remainder vanishes.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Wick symbol of an anti-Wick operator.
    AwToWick {
        #[arg(long)]
        sym: PathBuf,
    },
    /// Diagonal restriction a(w, w).
    Berezin {
        #[arg(long)]
        sym: PathBuf,
    },
    /// Ellipticity of the principal part, on the real side and the Wick diagonal.
    /// `--tol` sets the relative threshold.
    Elliptic {
        #[arg(long)]
        sym: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Hypoellipticity inequalities probed on a shell grid. `--tol` sets the slack.
    Hypo {
        #[arg(long)]
        sym: PathBuf,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        rho0: Option<f64>,
    },
    /// Lowest eigenvalue of the Hermitian part and skew norm across cutoffs, as CSV.
    /// `--tol` sets the eigenvalue tolerance.
    Garding {
        #[arg(long)]
        sym: PathBuf,
        /// Comma-separated cutoff ladder.
        #[arg(long)]
        cutoffs: Option<String>,
    },
    /// The positive-diagonal symbol whose Wick operator is not positive.
    Counterexample,
    /// Bargmann transform of seeded Hermite series by coefficients, quadrature and STFT;
    /// with `--sym` (Weyl) also the assignment identity. `--tol` bounds the quadrature error.
    BargmannCheck {
        #[arg(long)]
        sym: Option<PathBuf>,
    },
    /// Growth certificate of a Wick symbol, or anti-Wick bound check of an anti-Wick symbol.
    /// `--tol` bounds the quadrature change on refinement.
    Certify {
        #[arg(long)]
        sym: PathBuf,
    },
    /// Polynomial detector on z ↦ a(z, w₀), or on e^{z₁} with `--exp`. `--tol` is the zero threshold.
    DetectPoly {
        #[arg(long, required_unless_present = "exp")]
        sym: Option<PathBuf>,
        /// Probe e^{z₁} in dimension `--dim`.
        #[arg(long, conflicts_with = "sym")]
        exp: bool,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Comma-separated `re,im` pairs for w₀.
        #[arg(long)]
        w0: Option<String>,
        /// Probe the full kernel a(z, w₀) e^{z·w̄₀} instead of a(z, w₀).
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Malformed(String),
    Precondition(String),
    NonConvergence(String),
    /// A requested comparison came out unequal.
    CheckFailed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Malformed(_) => 1,
            Self::Precondition(_) => 2,
            Self::NonConvergence(_) => 3,
            Self::CheckFailed(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Malformed(m) => write!(f, "malformed input: {m}"),
            Self::Precondition(m) => write!(f, "precondition violated: {m}"),
            Self::NonConvergence(m) => write!(f, "no convergence: {m}"),
            Self::CheckFailed(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<fockcalc::Error> for CliError {
    fn from(e: fockcalc::Error) -> Self {
        use fockcalc::Error as E;
        match e {
            E::Malformed(m) => Self::Malformed(m),
            E::Precondition(m) => Self::Precondition(m),
            E::NonConvergence(m) => Self::NonConvergence(m),
            E::DimensionMismatch { .. } | E::ShapeMismatch { .. } | E::Internal(_) => Self::Malformed(e.to_string()),
            E::NotHomogeneous { .. } | E::ZeroPolynomial | E::NotSelfAdjoint { .. } | E::EmptyGrid => {
                Self::Precondition(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fockcalc: {e}");
            ExitCode::from(e.code())
        }
    }
}
