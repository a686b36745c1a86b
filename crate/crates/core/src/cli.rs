//! The `twocenter` command line. [`run`] takes the argument list and output
//! streams explicitly and returns the process exit code.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::eval::{self, Window};
use crate::matching::{self, SolveOptions};
use crate::mathieu::{self, Parity};
use crate::record::{self, ResidualReport, SolutionRecord};
use crate::scalar::{parse_rational, Rational};
use crate::separation::CenterPair;
use crate::symmetric::{self, SymmetricOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NONE_FOUND: i32 = 3;
pub const EXIT_SYMMETRIC: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

/// Sample count and seed of the residual report attached to new records.
const REPORT_SAMPLES: usize = 200;
const REPORT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(name = "twocenter", version, about = "Elementary eigenfunctions of the planar two-center Coulomb problem")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Elementary eigenfunctions for unequal charges.
    Solve(SolveArgs),
    /// Mixed radial x Mathieu eigenfunctions for equal charges.
    Symmetric(SymmetricArgs),
    /// Probability density of one stored solution on a grid, as CSV.
    Density(DensityArgs),
    /// Full-equation residual check of stored solutions.
    Verify(VerifyArgs),
    /// Mathieu characteristic value a_n(p) or b_n(p).
    Mathieu(MathieuArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Charge at x1 = +R/2 (integer, fraction or decimal).
    #[arg(long)]
    pub z1: String,
    /// Charge at x1 = -R/2.
    #[arg(long)]
    pub z2: String,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    /// Largest R scanned [default: 20 max(1, 1/(Z1+Z2))].
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Relative tolerance on R.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SymmetricArgs {
    #[arg(long)]
    pub z: f64,
    #[arg(long, default_value_t = 2)]
    pub nr_max: usize,
    #[arg(long, default_value_t = 2)]
    pub mathieu_n_max: usize,
    /// Largest R scanned [default: 20 max(1, 1/(2Z))].
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub solution_file: PathBuf,
    /// Position in the solution file, from 0.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    /// `x1min,x1max,x2min,x2max`; a square around both centers when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long, default_value_t = 201)]
    pub nx: usize,
    #[arg(long, default_value_t = 201)]
    pub ny: usize,
    /// CSV file; standard output when absent. A `.json` metadata sidecar is
    /// written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub solution_file: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-5)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct MathieuArgs {
    /// `a` (cosine type) or `b` (sine type).
    #[arg(long)]
    pub parity: String,
    #[arg(long)]
    pub order: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
}

/// Failure with its exit code and message.
struct Exit(i32, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SymmetricCase => EXIT_SYMMETRIC,
            Error::InvalidParameter(_) | Error::BranchOutOfRange { .. } | Error::Domain { .. } => EXIT_INVALID,
            _ => EXIT_FAILURE,
        };
        Exit(code, e.to_string())
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Exit(EXIT_FAILURE, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Exit {
    Exit(EXIT_INVALID, msg.into())
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_INVALID;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Symmetric(a) => cmd_symmetric(a, stdout),
        Command::Density(a) => cmd_density(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Mathieu(a) => cmd_mathieu(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(Exit(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

fn parse_charge(flag: &str, s: &str) -> Result<Rational, Exit> {
    parse_rational(s).ok_or_else(|| invalid(format!("--{flag}: cannot read {s:?} as a number")))
}

fn check_positive(flag: &str, x: f64) -> Result<(), Exit> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("--{flag} must be positive, got {x}")))
    }
}

fn records_with_report(sols: &[matching::ElementaryEigenfunction]) -> Vec<SolutionRecord> {
    sols.iter()
        .map(|s| {
            let report = ResidualReport {
                samples: REPORT_SAMPLES,
                seed: REPORT_SEED,
                max_relative: eval::pde_residual(s, REPORT_SAMPLES, REPORT_SEED),
            };
            SolutionRecord::from_solution(s, Some(report))
        })
        .collect()
}

fn emit_records(records: &[SolutionRecord], out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, Exit> {
    match out {
        Some(path) => record::write_records(records, BufWriter::new(File::create(path)?))?,
        None => record::write_records(records, &mut *stdout)?,
    }
    Ok(if records.is_empty() { EXIT_NONE_FOUND } else { EXIT_OK })
}

fn cmd_solve(a: &SolveArgs, stdout: &mut dyn Write) -> Result<i32, Exit> {
    let z1 = parse_charge("z1", &a.z1)?;
    let z2 = parse_charge("z2", &a.z2)?;
    if z1 == z2 {
        return Err(Exit(
            EXIT_SYMMETRIC,
            format!("{}; use `twocenter symmetric --z {}`", Error::SymmetricCase, a.z1),
        ));
    }
    if let Some(r) = a.r_max {
        check_positive("r-max", r)?;
    }
    check_positive("tol", a.tol)?;
    let centers = CenterPair::new(z1, z2)?;
    let opts = SolveOptions {
        n_max: a.n_max,
        r_max: a.r_max,
        tol: a.tol,
        ..SolveOptions::default()
    };
    let sols = matching::solve(&centers, &opts)?;
    emit_records(&records_with_report(&sols), a.out.as_deref(), stdout)
}

fn cmd_symmetric(a: &SymmetricArgs, stdout: &mut dyn Write) -> Result<i32, Exit> {
    check_positive("z", a.z)?;
    if let Some(r) = a.r_max {
        check_positive("r-max", r)?;
    }
    check_positive("tol", a.tol)?;
    let opts = SymmetricOptions {
        nr_max: a.nr_max,
        mathieu_n_max: a.mathieu_n_max,
        r_max: a.r_max,
        tol: a.tol,
        ..SymmetricOptions::default()
    };
    let sols = symmetric::solve_symmetric(a.z, &opts)?;
    emit_records(&records_with_report(&sols), a.out.as_deref(), stdout)
}

fn load(path: &Path) -> Result<Vec<SolutionRecord>, Exit> {
    let file = File::open(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    Ok(record::read_records(BufReader::new(file))?)
}

fn cmd_density(a: &DensityArgs, stdout: &mut dyn Write) -> Result<i32, Exit> {
    let records = load(&a.solution_file)?;
    let rec = records
        .get(a.index)
        .ok_or_else(|| invalid(format!("--index {} out of range ({} records)", a.index, records.len())))?;
    let sol = rec.to_solution()?;
    let window = match &a.window {
        Some(w) => Window::parse(w).ok_or_else(|| invalid(format!("--window {w:?}: expected x1min,x1max,x2min,x2max")))?,
        None => Window::around(&sol),
    };
    let mut grid = eval::density_grid(&sol, window, a.nx, a.ny)?;
    grid.label = format!("{}#{}", a.solution_file.display(), a.index);
    match &a.out {
        Some(path) => {
            grid.write_csv(BufWriter::new(File::create(path)?))?;
            let meta = serde_json::json!({
                "solution_file": a.solution_file.display().to_string(),
                "index": a.index,
                "window": grid.window,
                "nx": grid.nx,
                "ny": grid.ny,
                "normalization": grid.normalization,
                "energy": rec.energy,
                "r": rec.r,
            });
            let mut side = BufWriter::new(File::create(path.with_extension("json"))?);
            serde_json::to_writer_pretty(&mut side, &meta).map_err(std::io::Error::from)?;
            writeln!(side)?;
        }
        None => grid.write_csv(&mut *stdout)?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32, Exit> {
    if a.samples == 0 {
        return Err(invalid("--samples must be at least 1"));
    }
    check_positive("tolerance", a.tolerance)?;
    let records = load(&a.solution_file)?;
    let sols = records.iter().map(|r| r.to_solution()).collect::<Result<Vec<_>, _>>()?;
    let mut all_pass = true;
    for (i, s) in sols.iter().enumerate() {
        let res = eval::pde_residual(s, a.samples, a.seed);
        let pass = res < a.tolerance;
        all_pass &= pass;
        writeln!(
            stdout,
            "{i}\tE={:.12}\tR={:.12}\tresidual={res:.3e}\t{}",
            s.energy,
            s.r(),
            if pass { "PASS" } else { "FAIL" }
        )?;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_mathieu(a: &MathieuArgs, stdout: &mut dyn Write) -> Result<i32, Exit> {
    let parity = Parity::from_tag(&a.parity).ok_or_else(|| invalid(format!("--parity {:?}: expected a or b", a.parity)))?;
    let ch = mathieu::char_value(parity, a.order, a.p)?;
    writeln!(stdout, "{}_{}({}) = {:.15}", parity.tag(), a.order, a.p, ch.value)?;
    writeln!(stdout, "truncation = {}", ch.truncation)?;
    Ok(EXIT_OK)
}
