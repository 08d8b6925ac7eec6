use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use motion2_core::inductive::{classify_isotypic, laurent_defect, run_verification_suite};
use motion2_core::io::{self, AnyOperator};
use motion2_core::operators::{commutator, conjugate, isotypic_project};
use motion2_core::rep::{apply_grid, apply_matrix, rep_operator, RepParameter};
use motion2_core::specfun::band_estimate;
use motion2_core::{BandedOperator, Error, GroupElement, Mode, ModeScalar, Window};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::{
    ClassifyArgs, Command, CommutatorArgs, ConjugateArgs, ElementArgs, LaurentArgs, ModeArg, OpCommand, PathArg,
    ProjectArgs, RepApplyArgs, RepCommand, RepMatrixArgs, VerifyArgs,
};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(Error::ModeMismatch { .. } | Error::UnsupportedMode { .. }) => ExitCode::from(3),
            _ => ExitCode::from(2),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T = ExitCode> = Result<T, CliError>;

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Rep(RepCommand::Apply(args)) => rep_apply(args),
        Command::Rep(RepCommand::Matrix(args)) => rep_matrix(args),
        Command::Op(OpCommand::Project(args)) => project(args),
        Command::Op(OpCommand::Commutator(args)) => commutator_cmd(args),
        Command::Op(OpCommand::Conjugate(args)) => conjugate_cmd(args),
        Command::Op(OpCommand::Classify(args)) => classify(args),
        Command::Op(OpCommand::LaurentDefect(args)) => laurent(args),
        Command::Verify(args) => verify(args),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn emit(path: Option<&Path>, value: &Value) -> CliResult<()> {
    let text = io::to_pretty(value);
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn element<S: ModeScalar>(args: &ElementArgs) -> CliResult<(RepParameter<S::Real>, GroupElement<S>)> {
    let xi = RepParameter::new(S::real_from_str(&args.xi)?)?;
    let g = GroupElement::new(S::parse_flag(&args.a)?, S::parse_flag(&args.b)?)?;
    Ok((xi, g))
}

fn check_tol(tol: f64) -> CliResult<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::Contract(format!("--tol must lie in (0, 1), got {tol}")).into())
    }
}

fn load_operator(path: &Path, expected: Option<ModeArg>) -> CliResult<AnyOperator> {
    let op = io::read_operator(&read(path)?)?;
    if let Some(mode) = expected {
        let expected = match mode {
            ModeArg::Numeric => Mode::Numeric,
            ModeArg::Exact => Mode::Exact,
        };
        if op.mode() != expected {
            return Err(Error::ModeMismatch {
                expected,
                found: op.mode(),
            }
            .into());
        }
    }
    Ok(op)
}

fn rep_apply(args: RepApplyArgs) -> CliResult {
    check_tol(args.tol)?;
    let (xi, g) = element::<Complex64>(&args.element)?;
    let f = io::read_vector(&read(&args.input)?)?;
    let out = match args.path {
        PathArg::Grid => apply_grid(&xi, &g, &f, args.tol)?,
        PathArg::Matrix => apply_matrix(&xi, &g, &f, args.tol)?,
    };
    emit(args.output.as_deref(), &io::vector_to_json(&out))?;
    let drift = (out.norm() - f.norm()).abs();
    if drift > args.tol {
        eprintln!("motion2: norm changed by {drift:e}, above --tol {:e}", args.tol);
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn rep_matrix(args: RepMatrixArgs) -> CliResult {
    check_tol(args.tol)?;
    let (xi, g) = element::<Complex64>(&args.element)?;
    let window = Window::new(args.n)?;
    let band = band_estimate(xi.value().abs() * g.b().norm(), args.tol)?;
    let op = rep_operator(&xi, &g, band, window)?;
    emit(args.output.as_deref(), &io::operator_to_json(&op))?;
    Ok(ExitCode::SUCCESS)
}

fn project(args: ProjectArgs) -> CliResult {
    let out = match load_operator(&args.input, args.mode)? {
        AnyOperator::Numeric(t) => AnyOperator::Numeric(isotypic_project(&t, args.m)),
        AnyOperator::Exact(t) => AnyOperator::Exact(isotypic_project(&t, args.m)),
    };
    emit(args.output.as_deref(), &out.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn commutator_cmd(args: CommutatorArgs) -> CliResult {
    let [a, b] = args.input.as_slice() else {
        return Err(Error::Contract(format!("commutator needs exactly two --input files, got {}", args.input.len())).into());
    };
    let out = match (load_operator(a, args.mode)?, load_operator(b, args.mode)?) {
        (AnyOperator::Numeric(x), AnyOperator::Numeric(y)) => AnyOperator::Numeric(commutator(&x, &y)?),
        (AnyOperator::Exact(x), AnyOperator::Exact(y)) => AnyOperator::Exact(commutator(&x, &y)?),
        (x, y) => {
            return Err(Error::ModeMismatch {
                expected: x.mode(),
                found: y.mode(),
            }
            .into())
        }
    };
    emit(args.output.as_deref(), &out.to_json())?;
    Ok(ExitCode::SUCCESS)
}

fn conjugate_with<S: ModeScalar>(args: &ConjugateArgs, t: &BandedOperator<S>) -> CliResult<Value> {
    let (xi, g) = element::<S>(&args.element)?;
    Ok(io::operator_to_json(&conjugate(&xi, &g, t, args.tol)?))
}

fn conjugate_cmd(args: ConjugateArgs) -> CliResult {
    check_tol(args.tol)?;
    let out = match load_operator(&args.input, args.mode)? {
        AnyOperator::Numeric(t) => conjugate_with(&args, &t)?,
        AnyOperator::Exact(t) => conjugate_with(&args, &t)?,
    };
    emit(args.output.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn classify_with<S: ModeScalar>(t: &BandedOperator<S>, m: i64, tol: f64) -> CliResult<Value> {
    let fit = classify_isotypic(t, m, tol)?;
    Ok(json!({
        "mode": S::MODE,
        "m": m,
        "a": fit.a.encode(),
        "defect": fit.defect,
        "certified": fit.certified,
    }))
}

fn classify(args: ClassifyArgs) -> CliResult {
    check_tol(args.tol)?;
    let report = match load_operator(&args.input, args.mode)? {
        AnyOperator::Numeric(t) => classify_with(&t, args.m, args.tol)?,
        AnyOperator::Exact(t) => classify_with(&t, args.m, args.tol)?,
    };
    emit(args.report.as_deref(), &report)?;
    Ok(ExitCode::SUCCESS)
}

fn laurent(args: LaurentArgs) -> CliResult {
    let op = load_operator(&args.input, args.mode)?;
    let defect = match &op {
        AnyOperator::Numeric(t) => laurent_defect(t),
        AnyOperator::Exact(t) => laurent_defect(t),
    };
    emit(args.report.as_deref(), &json!({ "mode": op.mode(), "defect": defect }))?;
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> CliResult {
    let reports = run_verification_suite(args.xi, args.n, args.seed, args.tol)?;
    emit(args.report.as_deref(), &io::reports_to_json(&reports))?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
    if failed.is_empty() {
        eprintln!("motion2: {} checks passed", reports.len());
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("motion2: failed checks: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}
