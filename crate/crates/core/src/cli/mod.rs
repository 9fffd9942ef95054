//! The `qjd` command line: `poly`, `verify <suite>` and `simulate`.
//!
//! Parameter flags describe the base tuple `(q, t; α, β; γ, δ)`. Anything at
//! level `N` runs at `shift_level(N)`, so `N = 1` uses the flags verbatim.
//!
//! Exit codes: 0 success, 1 configuration error, 2 failed check or failed
//! computation. Errors are reported as JSON on stdout.

mod poly;
mod simulate;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::qalgebra::{parse_complex, parse_scalar, ConjugatePair, Params, Partition};
use crate::{Error, Result};

pub use verify::{run_suite, sample_poly};

#[derive(Debug, Parser)]
#[command(
    name = "qjd",
    version,
    about = "Big q-Jacobi polynomials and their jump processes"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write P_λ|N, φ_λ|N, π, Φ_λ, μ and h_λ for each --lambda as JSON.
    Poly,
    /// Run a verification suite; exit 0 iff every check passes.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Simulate the N-particle process and compare with its stationary measure.
    Simulate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Eigen,
    Ct,
    #[value(alias = "intertwining")]
    Pi,
    Pmp,
    Reversibility,
    Orthogonality,
    Norm,
    Semigroup,
    Resolvent,
    Macdonald,
}

#[derive(Clone, Debug, Args)]
pub struct RunConfig {
    #[arg(long, global = true, default_value = "1/3")]
    pub q: String,
    #[arg(long, global = true, default_value = "1/2")]
    pub t: String,
    /// α > 0.
    #[arg(long, global = true, default_value = "3/2")]
    pub a: String,
    /// β < 0.
    #[arg(long, global = true, default_value = "-2", allow_hyphen_values = true)]
    pub b: String,
    /// γ as `re±imi`, e.g. `1/4+1/2i`. Overrides --s1/--s2.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// δ; must be the complex conjugate of γ.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// γ + δ.
    #[arg(long, global = true, default_value = "1/2", allow_hyphen_values = true)]
    pub s1: String,
    /// γ·δ.
    #[arg(long, global = true, default_value = "3/4")]
    pub s2: String,
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    #[arg(long = "K", global = true)]
    pub k: Option<u32>,
    /// A partition such as `2,1`; repeat for several. `""` is the empty partition.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Vec<String>,
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    /// Cap on jumps per simulated sector.
    #[arg(long, global = true)]
    pub events: Option<usize>,
    /// Cap on jumps in the trajectory CSV.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub trajectory_events: usize,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Output file (poly, verify) or directory (simulate).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override the suite tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub maxdeg: Option<usize>,
    #[arg(long, global = true, default_value_t = 200)]
    pub trials: usize,
    /// With `poly`: also check that π does not depend on N.
    #[arg(long, global = true)]
    pub check_stability: bool,
}

impl RunConfig {
    /// Validates and assembles the base parameter tuple.
    pub fn params(&self) -> Result<Params> {
        let cd = match (&self.gamma, &self.delta) {
            (Some(g), d) => {
                let (re, im) = parse_complex(g)?;
                if let Some(d) = d {
                    let (dre, dim) = parse_complex(d)?;
                    if dre != re || dim != -im.clone() {
                        return Err(Error::Constraint(format!(
                            "δ = {d} is not the complex conjugate of γ = {g}"
                        )));
                    }
                }
                ConjugatePair::from_parts(&re, &im)?
            }
            (None, Some(_)) => {
                return Err(Error::Constraint("--delta needs --gamma".into()));
            }
            (None, None) => ConjugatePair::new(parse_scalar(&self.s1)?, parse_scalar(&self.s2)?)?,
        };
        Params::new(
            parse_scalar(&self.q)?,
            parse_scalar(&self.t)?,
            parse_scalar(&self.a)?,
            parse_scalar(&self.b)?,
            cd,
        )
    }

    pub fn partitions(&self) -> Result<Vec<Partition>> {
        self.lambda.iter().map(|s| s.parse()).collect()
    }
}

#[derive(Serialize)]
struct ErrorReport {
    error: &'static str,
    message: String,
    exit_code: i32,
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Constraint(_) | Error::Parse(_) | Error::InvalidPartition(_) | Error::Io(_)
    )
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Constraint(_) => "constraint",
        Error::Parse(_) => "parse",
        Error::InvalidPartition(_) => "invalid_partition",
        Error::EigenvalueCollision { .. } => "eigenvalue_collision",
        Error::Io(_) => "io",
        _ => "computation",
    }
}

/// Writes `text` to `out` if given, and always to stdout.
pub(crate) fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    if let Some(path) = out {
        std::fs::write(path, format!("{text}\n"))?;
    }
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{text}")?;
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<bool> {
    let params = cli.config.params()?;
    match &cli.command {
        Command::Poly => poly::run(&cli.config, &params),
        Command::Verify { suite } => {
            let report = run_suite(*suite, &cli.config, &params)?;
            emit(&report.to_json(), cli.config.out.as_ref())?;
            Ok(report.status.is_pass())
        }
        Command::Simulate => simulate::run(&cli.config, &params),
    }
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("QJD_THREADS") {
        let n: usize = v.parse().map_err(|_| {
            Error::Parse(format!("QJD_THREADS must be a positive integer, got {v:?}"))
        })?;
        // a second initialization in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match init_threads().and_then(|_| dispatch(&cli)) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let exit_code = if is_config_error(&e) { 1 } else { 2 };
            let report = ErrorReport {
                error: error_kind(&e),
                message: e.to_string(),
                exit_code,
            };
            let text = serde_json::to_string_pretty(&report).expect("serializes");
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            exit_code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("qjd").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_after_subcommand() {
        let cli = parse(&["verify", "pmp", "--N", "2", "--K", "6", "--trials", "10"]);
        assert!(matches!(cli.command, Command::Verify { suite: Suite::Pmp }));
        assert_eq!(
            (cli.config.n, cli.config.k, cli.config.trials),
            (Some(2), Some(6), 10)
        );
    }

    #[test]
    fn gamma_delta_must_conjugate() {
        let cli = parse(&["poly", "--gamma", "1/4+1/2i", "--delta", "1/4-1/2i"]);
        let p = cli.config.params().unwrap();
        assert_eq!(p.s1(), &crate::qalgebra::rat(1, 2));
        assert_eq!(p.s2(), &crate::qalgebra::rat(5, 16));
        let bad = parse(&["poly", "--gamma", "1/4+1/2i", "--delta", "1/4+1/2i"]);
        assert!(matches!(bad.config.params(), Err(Error::Constraint(_))));
    }

    #[test]
    fn constraint_violation_is_a_config_error() {
        let cli = parse(&["poly", "--q", "3/2"]);
        let e = cli.config.params().unwrap_err();
        assert!(is_config_error(&e));
        assert!(e.to_string().contains("q"));
    }

    #[test]
    fn intertwining_alias() {
        let cli = parse(&["verify", "intertwining"]);
        assert!(matches!(cli.command, Command::Verify { suite: Suite::Pi }));
    }
}
