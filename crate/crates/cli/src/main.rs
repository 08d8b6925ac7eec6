use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Representations of the motion group M(2) on truncated Fourier windows.
///
/// Exit status: 0 success, 1 verification failure, 2 usage or parse error,
/// 3 mode mismatch or an operation unavailable in the requested mode.
#[derive(Parser, Debug)]
#[command(name = "motion2", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply or tabulate π_ξ(g)
    #[command(subcommand)]
    Rep(RepCommand),
    /// Operations on operator files
    #[command(subcommand)]
    Op(OpCommand),
    /// Run the verification suite and write a JSON report
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
pub enum RepCommand {
    /// Apply π_ξ(g) to a vector file; fails with status 1 if the norm moves by more than --tol
    Apply(RepApplyArgs),
    /// Write π_ξ(g) on the window [-N, N] as an operator file
    Matrix(RepMatrixArgs),
}

#[derive(Subcommand, Debug)]
pub enum OpCommand {
    /// Isotypic component Π_m: keep diagonal m only
    Project(ProjectArgs),
    /// [A, B] of two operator files (pass --input twice)
    Commutator(CommutatorArgs),
    /// κ(g)T = π_ξ(g) T π_ξ(g)^{-1}
    Conjugate(ConjugateArgs),
    /// Fit a degree-m operator by a·S^m
    Classify(ClassifyArgs),
    /// Distance from constancy along each diagonal
    LaurentDefect(LaurentArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Numeric,
    Exact,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    Grid,
    Matrix,
}

#[derive(Args, Debug)]
pub struct ElementArgs {
    /// Representation parameter ξ (nonzero)
    #[arg(long, allow_hyphen_values = true)]
    pub xi: String,
    /// Rotation part a, written "re+imi"
    #[arg(long, default_value = "1+0i", allow_hyphen_values = true)]
    pub a: String,
    /// Translation part b, written "re+imi"
    #[arg(long, default_value = "0+0i", allow_hyphen_values = true)]
    pub b: String,
}

#[derive(Args, Debug)]
pub struct RepApplyArgs {
    #[command(flatten)]
    pub element: ElementArgs,
    /// Band truncation tolerance, also the allowed norm change
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Application path
    #[arg(long, value_enum, default_value = "grid")]
    pub path: PathArg,
    /// Vector file {"N", "coeffs"}
    #[arg(long)]
    pub input: PathBuf,
    /// Output vector file (stdout if omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RepMatrixArgs {
    #[command(flatten)]
    pub element: ElementArgs,
    /// Window half-width
    #[arg(long = "N", default_value_t = 64)]
    pub n: usize,
    /// Band truncation tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    /// Shift degree
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    /// Expected mode of the input; a different mode exits with status 3
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CommutatorArgs {
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// The two operator files A and B
    #[arg(long, num_args = 1, required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConjugateArgs {
    #[command(flatten)]
    pub element: ElementArgs,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    /// Certification threshold on the defect
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub input: PathBuf,
    /// Report file (stdout if omitted)
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LaurentArgs {
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Representation parameter ξ (nonzero)
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    pub xi: f64,
    /// Window half-width
    #[arg(long = "N", default_value_t = 64)]
    pub n: usize,
    /// Tolerance for the representation contracts
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Report file (stdout if omitted)
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("motion2: {e}");
            e.exit_code()
        }
    }
}
