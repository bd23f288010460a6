//! Command-line front-end for `polyrank`.
//!
//! Exit codes: 0 success, 1 input rejected by the library or a failed
//! verification, 2 usage, 3 unreadable or malformed input, 4 randomized
//! failure after all retries.

pub mod format;
mod report;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use polyrank::nullspace::{with_retries, DEFAULT_MAX_RETRIES};
use polyrank::oracle::{kronecker_indices, rank_oracle};
use polyrank::{nullspace, nullspace_minimal_vectors, Error, Failure, MulStrategy, PolyMatrix, PrimeField, RandomPlan};
use thiserror::Error;

pub use format::{parse_matrix, write_matrix, ParseError};
pub use report::{coefficients, Coefficients, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "polyrank",
    version,
    about = "Rank and left nullspace bases of polynomial matrices over F_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed of the random choices [default: from the OS, echoed in the report]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Prime overriding the one in the file headers
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Retries after a failed randomized attempt
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_RETRIES)]
    max_retries: usize,
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Also write the basis to this file in matrix format
    #[arg(long, global = true, value_name = "PATH")]
    basis_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certified rank over F_p(x)
    Rank { file: PathBuf },
    /// Certified rank and left nullspace basis
    Nullspace { file: PathBuf },
    /// Minimal nullspace vectors of degree at most DELTA of a tall full column rank matrix
    MinimalVectors {
        file: PathBuf,
        #[arg(long)]
        delta: usize,
    },
    /// Matrix product
    Mul { a: PathBuf, b: PathBuf },
    /// Checks that a basis (matrix file or JSON report) spans the left nullspace
    Verify { basis: PathBuf, matrix: PathBuf },
    /// Slow reference computations
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
}

#[derive(Debug, Subcommand)]
enum OracleQuery {
    /// Kronecker indices and a minimal basis by linearization
    Kronecker { file: PathBuf },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: not a report with a basis: {reason}", path.display())]
    BadReport { path: PathBuf, reason: String },
    #[error("{}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Rejected(Error),
    #[error("no certified result after {attempts} attempts; last failure: {failure}")]
    Failed { attempts: usize, failure: Failure },
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Read { .. } | CliError::Parse { .. } | CliError::BadReport { .. } => EXIT_PARSE,
            CliError::Write { .. } | CliError::Rejected(_) => EXIT_REJECTED,
            CliError::Failed { .. } => EXIT_FAILED,
        }
    }
}

/// A finished command: its report, the basis to save with `--basis-out`,
/// and why the result is not certified, if it is not.
struct Outcome {
    report: Report,
    basis: Option<PolyMatrix>,
    problem: Option<String>,
}

struct Context {
    prime: Option<PrimeField>,
    seed: u64,
    max_retries: usize,
}

impl Context {
    fn plan(&self) -> RandomPlan {
        RandomPlan::new(self.seed).with_max_retries(self.max_retries)
    }

    fn load(&self, path: &Path) -> Result<PolyMatrix, CliError> {
        let text = read(path)?;
        parse_matrix(&text, self.prime).map_err(|source| CliError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    fn lift(&self, e: Error) -> CliError {
        match e {
            Error::Fail(failure) => CliError::Failed {
                attempts: self.max_retries + 1,
                failure,
            },
            e => CliError::Rejected(e),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let text = if cli.json {
                outcome.report.to_json()
            } else {
                outcome.report.to_text()
            };
            if let Err(e) = out.write_all(text.as_bytes()) {
                let _ = writeln!(err, "polyrank: cannot write the report: {e}");
                return EXIT_REJECTED;
            }
            if let (Some(path), Some(basis)) = (&cli.basis_out, &outcome.basis) {
                if let Err(source) = std::fs::write(path, write_matrix(basis)) {
                    let e = CliError::Write {
                        path: path.clone(),
                        source,
                    };
                    let _ = writeln!(err, "polyrank: {e}");
                    return e.code();
                }
            }
            match outcome.problem {
                Some(problem) => {
                    let _ = writeln!(err, "polyrank: not certified: {problem}");
                    EXIT_REJECTED
                }
                None => EXIT_OK,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "polyrank: {e}");
            e.code()
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let prime = cli
        .prime
        .map(PrimeField::new)
        .transpose()
        .map_err(|e| CliError::Usage(format!("--prime: {e}")))?;
    let seed = cli.seed.unwrap_or_else(|| RandomPlan::from_entropy().seed());
    let cx = Context {
        prime,
        seed,
        max_retries: cli.max_retries,
    };
    match &cli.command {
        Command::Rank { file } => run_nullspace(&cx, file, "rank"),
        Command::Nullspace { file } => run_nullspace(&cx, file, "nullspace"),
        Command::MinimalVectors { file, delta } => run_minimal(&cx, file, *delta),
        Command::Mul { a, b } => run_mul(&cx, a, b),
        Command::Verify { basis, matrix } => run_verify(&cx, basis, matrix),
        Command::Oracle {
            query: OracleQuery::Kronecker { file },
        } => run_kronecker(&cx, file),
    }
}

fn run_nullspace(cx: &Context, file: &Path, command: &str) -> Result<Outcome, CliError> {
    let m = cx.load(file)?;
    let res = nullspace(&m, &mut cx.plan()).map_err(|e| cx.lift(e))?;
    let mut report = Report::new(command, m.field(), cx.seed).with_basis(&res.basis);
    report.rank = Some(res.rank);
    report.retries_used = res.retries_used;
    report.certified = true;
    Ok(Outcome {
        report,
        basis: Some(res.basis),
        problem: None,
    })
}

fn run_minimal(cx: &Context, file: &Path, delta: usize) -> Result<Outcome, CliError> {
    let m = cx.load(file)?;
    let mut plan = cx.plan();
    let (res, retries) =
        with_retries(&mut plan, |p| nullspace_minimal_vectors(&m, delta, p)).map_err(|e| cx.lift(e))?;
    let mut report = Report::new("minimal-vectors", m.field(), cx.seed).with_basis(&res.vectors);
    report.kappa = Some(res.kappa);
    report.retries_used = retries;
    report.certified = true;
    Ok(Outcome {
        report,
        basis: Some(res.vectors),
        problem: None,
    })
}

fn run_mul(cx: &Context, a: &Path, b: &Path) -> Result<Outcome, CliError> {
    let (a, b) = (cx.load(a)?, cx.load(b)?);
    let prod = a.mul(&b).map_err(CliError::Rejected)?;
    // A product of degree at most D is determined by D + 1 values; in fields
    // too small for that, compare against the other strategy.
    let bound = a.degree().to_usize().unwrap_or(0) + b.degree().to_usize().unwrap_or(0);
    let f = prod.field();
    let certified = if (bound as u64) < f.modulus() {
        (0..=bound as u64).all(|x| a.eval(x).checked_mul(&b.eval(x)).ok() == Some(prod.eval(x)))
    } else {
        polyrank::mul_with(&a, &b, MulStrategy::Convolution).ok().as_ref() == Some(&prod)
    };
    let mut report = Report::new("mul", f, cx.seed);
    report.product = Some(coefficients(&prod));
    report.certified = certified;
    Ok(Outcome {
        report,
        basis: None,
        problem: (!certified).then(|| "product check failed".to_string()),
    })
}

/// Reads a basis given as a matrix file or as the JSON report of a previous
/// run.
fn load_basis(cx: &Context, path: &Path, cols: usize) -> Result<PolyMatrix, CliError> {
    let text = read(path)?;
    if !text.trim_start().starts_with('{') {
        return cx.load(path);
    }
    let bad = |reason: String| CliError::BadReport {
        path: path.to_path_buf(),
        reason,
    };
    let report: Report = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let f = match cx.prime {
        Some(f) => f,
        None => PrimeField::new(report.prime).map_err(|e| bad(e.to_string()))?,
    };
    let mut entries = Vec::new();
    for (i, row) in report.basis.iter().enumerate() {
        if row.len() != cols {
            return Err(bad(format!("row {i} has {} entries, expected {cols}", row.len())));
        }
        for coeffs in row {
            if let Some(&c) = coeffs.iter().find(|&&c| c >= f.modulus()) {
                return Err(bad(format!(
                    "row {i}: coefficient {c} is not below p = {}",
                    f.modulus()
                )));
            }
            entries.push(polyrank::Poly::from_coeffs(f, coeffs.clone()));
        }
    }
    PolyMatrix::from_entries(f, report.basis.len(), cols, entries).map_err(CliError::Rejected)
}

/// `N` spans the left nullspace of `M` iff `N M = 0`, `N` has full row rank
/// `k` and `M` has rank `m - k`. The ranks come from the exact evaluation
/// oracle.
fn run_verify(cx: &Context, basis: &Path, matrix: &Path) -> Result<Outcome, CliError> {
    let m = cx.load(matrix)?;
    let n = load_basis(cx, basis, m.rows())?;
    let mut report = Report::new("verify", m.field(), cx.seed).with_basis(&n);
    let prod = n.mul(&m).map_err(CliError::Rejected)?;
    let problem = if !prod.is_zero() {
        Some("the basis does not annihilate the matrix".to_string())
    } else {
        let k = n.rows();
        let rank_n = rank_oracle(&n).map_err(CliError::Rejected)?;
        let rank_m = rank_oracle(&m).map_err(CliError::Rejected)?;
        report.rank = Some(rank_m);
        if rank_n < k {
            Some(format!("the {k} basis rows have rank {rank_n}"))
        } else if rank_m + k != m.rows() {
            Some(format!(
                "{k} rows cannot span a nullspace of dimension {} (rank {rank_m})",
                m.rows() - rank_m
            ))
        } else {
            None
        }
    };
    report.certified = problem.is_none();
    Ok(Outcome {
        report,
        basis: None,
        problem,
    })
}

fn run_kronecker(cx: &Context, file: &Path) -> Result<Outcome, CliError> {
    let m = cx.load(file)?;
    let prof = kronecker_indices(&m).map_err(CliError::Rejected)?;
    let mut report = Report::new("oracle kronecker", m.field(), cx.seed).with_basis(&prof.basis);
    report.rank = Some(prof.rank);
    report.certified = prof.basis.mul(&m).map_err(CliError::Rejected)?.is_zero();
    Ok(Outcome {
        problem: (!report.certified).then(|| "oracle basis does not annihilate the matrix".to_string()),
        report,
        basis: Some(prof.basis),
    })
}
