//! The `kmatch` command line.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input and invalid
//! arguments, 3 methods disagree under `--check`, 4 a resource cap was
//! exceeded, 1 an internal consistency failure. Results go to stdout, diagnostics to stderr.

pub mod format;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::approx::{self, EstimateReport, Proposal, SamplerConfig, Target};
use crate::enumerate::{
    count_k_matchings, graph_from_matrix, graph_from_symmetric, weighted_matching_sum,
};
use crate::exact::{self, Limits};
use crate::matrix::{NonnegMatrix, SymZeroDiagMatrix};
use crate::polynomial::{self, verify_real_negative_roots, CoefficientRoute};
use crate::reduction;
use crate::{Error, ExactNumber};
use format::{parse_input, write_matrix, write_symmetric, Input};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "kmatch",
    version,
    about = "Count and estimate weighted k-matchings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print an exact permanent, hafnian, perm_k, haf_k or k-matching count.
    Count {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: CountMode,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "direct")]
        method: Method,
        /// Run every applicable method and fail if any two disagree.
        #[arg(long)]
        check: bool,
        /// Largest permanent / hafnian order to attempt.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Print the matching polynomial coefficients c_0 .. c_d.
    Poly {
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Also decide whether all roots are real and negative.
        #[arg(long)]
        verify_roots: bool,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Write B_k (bipartite) or A_k (general) to a file.
    Reduce {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Monte Carlo estimate with standard error.
    Estimate {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: EstimateMode,
        #[arg(long)]
        k: Option<usize>,
        /// Evaluation point for `--mode poly`.
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative error target; requires --delta and overrides --samples.
        #[arg(long, requires = "delta")]
        eps: Option<f64>,
        #[arg(long, requires = "eps")]
        delta: Option<f64>,
        #[arg(long, value_enum, default_value = "uniform")]
        proposal: ProposalArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CountMode {
    Perm,
    Haf,
    #[value(name = "perm_k", alias = "perm-k")]
    PermK,
    #[value(name = "haf_k", alias = "haf-k")]
    HafK,
    Matchings,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Reduction,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Bipartite,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EstimateMode {
    Perm,
    Haf,
    #[value(name = "perm_k", alias = "perm-k")]
    PermK,
    #[value(name = "haf_k", alias = "haf-k")]
    HafK,
    Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ProposalArg {
    Uniform,
    Weighted,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Disagree(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Disagree(_) => EXIT_DISAGREE,
            Failure::Lib(e) => match e {
                Error::ResourceLimit { .. } => EXIT_RESOURCE,
                Error::Consistency(_) => EXIT_FAILURE,
                Error::Io(_)
                | Error::Dimension(_)
                | Error::Argument(_)
                | Error::Parity(_)
                | Error::NegativeEntry { .. }
                | Error::NotSymmetric(_)
                | Error::Parse { .. } => EXIT_INPUT,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Disagree(m) => format!("methods disagree: {m}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_input(path: &Path) -> CliResult<Input> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_input(&text)?)
}

fn expect_matrix(input: Input) -> CliResult<NonnegMatrix> {
    match input {
        Input::Matrix(b) => Ok(b),
        _ => Err(Error::Argument("this mode needs an \"m n\" matrix file".into()).into()),
    }
}

/// Symmetric file, graph file, or a square "n n" matrix that happens to be
/// symmetric with a zero diagonal.
fn expect_symmetric(input: Input) -> CliResult<SymZeroDiagMatrix> {
    match input {
        Input::Symmetric(a) => Ok(a),
        Input::Graph(g) => Ok(g.to_symmetric()),
        Input::Matrix(b) if b.is_square() => {
            let rows = (0..b.rows()).map(|i| b.row(i).to_vec()).collect();
            Ok(SymZeroDiagMatrix::from_rows(rows)?)
        }
        Input::Matrix(_) => {
            Err(Error::Argument("this mode needs a symmetric matrix or graph file".into()).into())
        }
    }
}

fn require_k(k: Option<usize>) -> CliResult<usize> {
    k.ok_or_else(|| Error::Argument("--k is required for this mode".into()).into())
}

/// The methods that make sense for one count request. `None` marks a method
/// that does not apply (for example the reduction at `k = 0`).
type Evaluator<'a> = Box<dyn Fn() -> crate::Result<ExactNumber> + 'a>;

fn count_methods<'a>(
    mode: CountMode,
    input: Input,
    k: Option<usize>,
    limits: &'a Limits,
) -> CliResult<Vec<(Method, Option<Evaluator<'a>>)>> {
    Ok(match mode {
        CountMode::Perm | CountMode::PermK => {
            let b = expect_matrix(input)?;
            let k = if mode == CountMode::Perm {
                if !b.is_square() {
                    return Err(Error::Dimension(format!(
                        "permanent needs a square matrix, got {}x{}",
                        b.rows(),
                        b.cols()
                    ))
                    .into());
                }
                b.rows()
            } else {
                require_k(k)?
            };
            if k > b.rows().min(b.cols()) {
                return Err(Error::Argument(format!(
                    "k = {k} exceeds min(m, n) = {}",
                    b.rows().min(b.cols())
                ))
                .into());
            }
            let (b1, b2, b3) = (b.clone(), b.clone(), b);
            let direct: Evaluator = if mode == CountMode::Perm {
                Box::new(move || exact::permanent_with(&b1, limits))
            } else {
                Box::new(move || exact::perm_k_direct_with(&b1, k, limits))
            };
            vec![
                (Method::Direct, Some(direct)),
                (
                    Method::Reduction,
                    (k >= 1).then(|| -> Evaluator {
                        Box::new(move || reduction::perm_k_via_reduction_with(&b2, k, limits))
                    }),
                ),
                (
                    Method::Brute,
                    Some(Box::new(move || {
                        Ok(weighted_matching_sum(&graph_from_matrix(&b3), k))
                    })),
                ),
            ]
        }
        CountMode::Haf | CountMode::HafK | CountMode::Matchings => {
            let a = match (mode, input) {
                (CountMode::Matchings, Input::Graph(g)) => g.support().to_symmetric(),
                (CountMode::Matchings, _) => {
                    return Err(
                        Error::Argument("--mode matchings needs a graph file".into()).into(),
                    )
                }
                (_, input) => expect_symmetric(input)?,
            };
            let m = a.order();
            let k = if mode == CountMode::Haf {
                if m % 2 == 1 {
                    return Err(Error::Parity(m).into());
                }
                m / 2
            } else {
                require_k(k)?
            };
            if 2 * k > m {
                return Err(
                    Error::Argument(format!("k = {k} exceeds floor(m/2) = {}", m / 2)).into(),
                );
            }
            let (a1, a2, a3) = (a.clone(), a.clone(), a);
            let direct: Evaluator = if mode == CountMode::Haf {
                Box::new(move || exact::hafnian_with(&a1, limits))
            } else {
                Box::new(move || exact::haf_k_direct_with(&a1, k, limits))
            };
            let brute: Evaluator = if mode == CountMode::Matchings {
                Box::new(move || Ok(count_k_matchings(&graph_from_symmetric(&a3), k)))
            } else {
                Box::new(move || Ok(weighted_matching_sum(&graph_from_symmetric(&a3), k)))
            };
            vec![
                (Method::Direct, Some(direct)),
                (
                    Method::Reduction,
                    (k >= 1).then(|| -> Evaluator {
                        Box::new(move || reduction::haf_k_via_reduction_with(&a2, k, limits))
                    }),
                ),
                (Method::Brute, Some(brute)),
            ]
        }
    })
}

fn limits_from(max_n: Option<usize>) -> Limits {
    match max_n {
        Some(n) => Limits::default().with_max_order(n),
        None => Limits::default(),
    }
}

fn cmd_count(
    input: &Path,
    mode: CountMode,
    k: Option<usize>,
    method: Method,
    check: bool,
    max_n: Option<usize>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let limits = limits_from(max_n);
    let methods = count_methods(mode, read_input(input)?, k, &limits)?;
    let value = if check {
        let mut results: Vec<(Method, ExactNumber)> = Vec::new();
        for (m, eval) in &methods {
            if let Some(eval) = eval {
                results.push((*m, eval()?));
            }
        }
        let first = results[0].1.clone();
        if results.iter().any(|(_, v)| *v != first) {
            let detail: Vec<String> = results.iter().map(|(m, v)| format!("{m:?}={v}")).collect();
            return Err(Failure::Disagree(detail.join(", ")));
        }
        // report the requested method's value when it ran
        results
            .into_iter()
            .find(|(m, _)| *m == method)
            .map_or(first, |(_, v)| v)
    } else {
        let eval = methods
            .iter()
            .find(|(m, _)| *m == method)
            .and_then(|(_, e)| e.as_ref())
            .ok_or_else(|| {
                Error::Argument(format!("method {method:?} does not apply to this request"))
            })?;
        eval()?
    };
    writeln!(out, "{value}").map_err(Error::from)?;
    Ok(())
}

fn cmd_poly(
    input: &Path,
    kind: Kind,
    verify_roots: bool,
    max_n: Option<usize>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let limits = limits_from(max_n);
    let input = read_input(input)?;
    let p = match kind {
        Kind::Bipartite => polynomial::matching_poly_bipartite_with(
            &expect_matrix(input)?,
            CoefficientRoute::Auto,
            &limits,
        )?,
        Kind::General => polynomial::matching_poly_general_with(
            &expect_symmetric(input)?,
            CoefficientRoute::Auto,
            &limits,
        )?,
    };
    writeln!(out, "{p}").map_err(Error::from)?;
    if verify_roots {
        let r = verify_real_negative_roots(&p);
        writeln!(out, "real-negative-roots: {}", r.all_real_negative).map_err(Error::from)?;
    }
    Ok(())
}

fn cmd_reduce(input: &Path, k: usize, kind: Kind, output: &Path) -> CliResult<()> {
    let input = read_input(input)?;
    let text = match kind {
        Kind::Bipartite => write_matrix(&reduction::build_bk(&expect_matrix(input)?, k)?),
        Kind::General => write_symmetric(&reduction::build_ak(&expect_symmetric(input)?, k)?),
    };
    std::fs::write(output, text).map_err(|e| Error::Io(format!("{}: {e}", output.display())))?;
    Ok(())
}

pub fn format_report(r: &EstimateReport) -> String {
    let mut s = format!(
        "estimate={} stderr={} samples={} seed={}",
        r.point_estimate, r.standard_error, r.samples, r.seed
    );
    if let Some(t) = r.target {
        s.push_str(&format!(" eps={} delta={}", t.epsilon, t.delta));
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_estimate(
    input: &Path,
    mode: EstimateMode,
    k: Option<usize>,
    x: Option<f64>,
    samples: u64,
    seed: u64,
    target: Option<Target>,
    proposal: Proposal,
    out: &mut dyn Write,
) -> CliResult<()> {
    let config = SamplerConfig {
        samples,
        seed,
        proposal,
        target,
    };
    let input = read_input(input)?;
    let report = match mode {
        EstimateMode::Perm => approx::estimate_permanent_with(&expect_matrix(input)?, &config)?,
        EstimateMode::PermK => {
            approx::estimate_perm_k_with(&expect_matrix(input)?, require_k(k)?, &config)?
        }
        EstimateMode::Haf => approx::estimate_hafnian_with(&expect_symmetric(input)?, &config)?,
        EstimateMode::HafK => {
            approx::estimate_haf_k_with(&expect_symmetric(input)?, require_k(k)?, &config)?
        }
        EstimateMode::Poly => {
            let x = x.ok_or_else(|| Error::Argument("--x is required for --mode poly".into()))?;
            approx::estimate_matching_poly_eval_with(&expect_matrix(input)?, x, &config)?
        }
    };
    writeln!(out, "{}", format_report(&report)).map_err(Error::from)?;
    Ok(())
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Count {
            input,
            mode,
            k,
            method,
            check,
            max_n,
        } => cmd_count(&input, mode, k, method, check, max_n, out),
        Command::Poly {
            input,
            kind,
            verify_roots,
            max_n,
        } => cmd_poly(&input, kind, verify_roots, max_n, out),
        Command::Reduce {
            input,
            k,
            kind,
            output,
        } => cmd_reduce(&input, k, kind, &output),
        Command::Estimate {
            input,
            mode,
            k,
            x,
            samples,
            seed,
            eps,
            delta,
            proposal,
        } => {
            let target = eps
                .zip(delta)
                .map(|(epsilon, delta)| Target { epsilon, delta });
            let proposal = match proposal {
                ProposalArg::Uniform => Proposal::Uniform,
                ProposalArg::Weighted => Proposal::WeightProportional,
            };
            cmd_estimate(&input, mode, k, x, samples, seed, target, proposal, out)
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["kmatch"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    #[test]
    fn count_examples() {
        let d = tempfile::tempdir().unwrap();
        let j3 = file(&d, "j3", "3 3\n1 1 1\n1 1 1\n1 1 1\n");
        assert_eq!(run_str(&["count", &j3, "--mode", "perm"]).1, "6\n");
        let j2 = file(&d, "j2", "2 2\n1 1\n1 1\n");
        let r = run_str(&[
            "count",
            &j2,
            "--mode",
            "perm_k",
            "--k",
            "1",
            "--method",
            "reduction",
        ]);
        assert_eq!(r.1, "4\n");
        let k4 = file(&d, "k4", "4\n0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n");
        let r = run_str(&["count", &k4, "--mode", "haf_k", "--k", "1", "--check"]);
        assert_eq!((r.0, r.1.as_str()), (0, "6\n"));
    }

    #[test]
    fn matchings_mode_needs_graph() {
        let d = tempfile::tempdir().unwrap();
        let g = file(
            &d,
            "c6",
            "v 6\ne 1 2 3\ne 2 3 1\ne 3 4 1\ne 4 5 1\ne 5 6 1\ne 6 1 1\n",
        );
        let r = run_str(&[
            "count",
            &g,
            "--mode",
            "matchings",
            "--k",
            "3",
            "--method",
            "brute",
            "--check",
        ]);
        assert_eq!((r.0, r.1.as_str()), (0, "2\n"));
        // weights count for haf_k
        let r = run_str(&["count", &g, "--mode", "haf_k", "--k", "3", "--check"]);
        assert_eq!((r.0, r.1.as_str()), (0, "4\n"));
        let m = file(&d, "m", "2 2\n1 1\n1 1\n");
        assert_eq!(
            run_str(&["count", &m, "--mode", "matchings", "--k", "1"]).0,
            EXIT_INPUT
        );
    }

    #[test]
    fn exit_codes() {
        let d = tempfile::tempdir().unwrap();
        let bad = file(&d, "bad", "2 2\n1 x\n1 1\n");
        let (code, out, err) = run_str(&["count", &bad, "--mode", "perm"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.is_empty());
        assert!(err.contains("line 2"), "{err}");

        let j3 = file(&d, "j3", "3 3\n1 1 1\n1 1 1\n1 1 1\n");
        let r = run_str(&["count", &j3, "--mode", "perm", "--max-n", "2"]);
        assert_eq!(r.0, EXIT_RESOURCE);
        let r = run_str(&["count", &j3, "--mode", "perm_k", "--k", "4"]);
        assert_eq!(r.0, EXIT_INPUT);
        let r = run_str(&["count", &j3, "--mode", "perm_k"]);
        assert_eq!(r.0, EXIT_INPUT);
        let r = run_str(&["count", "/nonexistent/file", "--mode", "perm"]);
        assert_eq!(r.0, EXIT_INPUT);
        let r = run_str(&["count", &j3, "--mode", "bogus"]);
        assert_eq!(r.0, EXIT_INPUT);
        let r = run_str(&[
            "count",
            &j3,
            "--mode",
            "perm_k",
            "--k",
            "0",
            "--method",
            "reduction",
        ]);
        assert_eq!(r.0, EXIT_INPUT);
        let r = run_str(&["count", &j3, "--mode", "perm_k", "--k", "0", "--check"]);
        assert_eq!((r.0, r.1.as_str()), (0, "1\n"));
    }

    #[test]
    fn poly_and_reduce() {
        let d = tempfile::tempdir().unwrap();
        let j2 = file(&d, "j2", "2 2\n1 1\n1 1\n");
        assert_eq!(run_str(&["poly", &j2, "--kind", "bipartite"]).1, "1 4 2\n");
        let z = file(&d, "z", "3 3\n0 0 0\n0 0 0\n0 0 0\n");
        assert_eq!(run_str(&["poly", &z, "--kind", "bipartite"]).1, "1\n");
        let k4 = file(&d, "k4", "4\n0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n");
        let r = run_str(&["poly", &k4, "--kind", "general", "--verify-roots"]);
        assert_eq!(r.1, "1 6 3\nreal-negative-roots: true\n");

        let out = d.path().join("b1");
        let o = out.to_str().unwrap();
        assert_eq!(
            run_str(&["reduce", &j2, "--k", "1", "--kind", "bipartite", "-o", o]).0,
            0
        );
        assert_eq!(
            fs::read_to_string(&out).unwrap(),
            "3 3\n1 1 1\n1 1 1\n1 1 0\n"
        );
        assert_eq!(
            run_str(&["reduce", &j2, "--k", "2", "--kind", "bipartite", "-o", o]).0,
            0
        );
        assert_eq!(fs::read_to_string(&out).unwrap(), "2 2\n1 1\n1 1\n");
        assert_eq!(
            run_str(&["reduce", &k4, "--k", "1", "--kind", "general", "-o", o]).0,
            0
        );
        assert!(fs::read_to_string(&out)
            .unwrap()
            .starts_with("6\n0 1 1 1 1 1\n"));
        assert_eq!(
            run_str(&["reduce", &j2, "--k", "3", "--kind", "bipartite", "-o", o]).0,
            EXIT_INPUT
        );
    }

    #[test]
    fn estimate_output() {
        let d = tempfile::tempdir().unwrap();
        let p = file(&d, "p", "3 3\n0 1 0\n0 0 1\n1 0 0\n");
        let r = run_str(&[
            "estimate",
            &p,
            "--mode",
            "perm",
            "--samples",
            "10",
            "--seed",
            "5",
        ]);
        assert_eq!(r.1, "estimate=1 stderr=0 samples=10 seed=5\n");
        let z = file(&d, "z", "2 2\n1 1\n0 0\n");
        let r = run_str(&["estimate", &z, "--mode", "perm", "--samples", "10"]);
        assert!(r.1.starts_with("estimate=0 "));
        let r = run_str(&["estimate", &z, "--mode", "perm", "--samples", "0"]);
        assert_eq!(r.0, EXIT_INPUT);
        let r = run_str(&["estimate", &z, "--mode", "poly", "--samples", "10"]);
        assert_eq!(r.0, EXIT_INPUT);
        let r = run_str(&[
            "estimate", &p, "--mode", "perm", "--eps", "0.5", "--delta", "0.05",
        ]);
        assert_eq!(
            r.1,
            "estimate=1 stderr=0 samples=2016 seed=0 eps=0.5 delta=0.05\n"
        );
        let r = run_str(&["estimate", &p, "--mode", "perm", "--eps", "0.5"]);
        assert_eq!(r.0, EXIT_INPUT);
    }
}
