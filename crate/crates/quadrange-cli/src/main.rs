use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadrange::analysis::{analyze, certify, solve};
use quadrange::convexity::at_most_two_directions;
use quadrange::corpus;
use quadrange::oracle::default_seed;
use quadrange::optimize::Cone;
use quadrange::plot::{sample_range, to_csv, to_svg};
use quadrange::problem::{load_problem, NumberPolicy, Problem};
use quadrange::scalar::parse_rat;
use quadrange::{PlaneDirection, QrError};

#[derive(Parser)]
#[command(name = "quadrange", version, about = "Joint ranges of quadratic pairs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Range geometry, convexity and property battery.
    Analyze {
        file: PathBuf,
        /// Only decide convexity of F(R^n) + R+(d1,d2).
        #[arg(long, num_args = 2, value_names = ["D1", "D2"], allow_negative_numbers = true)]
        dir: Option<Vec<String>>,
        #[command(flatten)]
        num: NumArgs,
    },
    /// Lagrangian dual of min{f(x) : g(x) in -P}.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        opt: OptArgs,
    },
    /// S-lemma, KKT and existence certificates.
    Certify {
        file: PathBuf,
        #[command(flatten)]
        opt: OptArgs,
    },
    /// Sampled joint range as CSV and SVG.
    Plot {
        file: PathBuf,
        /// Output path; `.csv` and `.svg` are written next to each other.
        #[arg(long, default_value = "quadrange_plot")]
        out: PathBuf,
        #[arg(long, default_value_t = 4000)]
        samples: usize,
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
        #[arg(long)]
        seed: Option<u64>,
        /// Direction to shade; defaults to the nonconvex directions.
        #[arg(long, num_args = 2, value_names = ["D1", "D2"], allow_negative_numbers = true)]
        dir: Option<Vec<String>>,
        #[command(flatten)]
        num: NumArgs,
    },
    /// Built-in worked examples.
    Examples {
        #[command(subcommand)]
        action: ExAction,
    },
}

#[derive(Subcommand)]
enum ExAction {
    List,
    Run {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
    },
}

#[derive(Args)]
struct NumArgs {
    /// Read decimal literals as exact fractions.
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Round every input to binary64.
    #[arg(long)]
    float: bool,
}

impl NumArgs {
    fn policy(&self) -> NumberPolicy {
        if self.exact {
            NumberPolicy::Exact
        } else if self.float {
            NumberPolicy::Float
        } else {
            NumberPolicy::Auto
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConeArg {
    Zero,
    Nonneg,
}

#[derive(Args)]
struct OptArgs {
    /// Constraint cone; required unless the file names one.
    #[arg(long, value_enum)]
    cone: Option<ConeArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    num: NumArgs,
}

const EXIT_EXAMPLES: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_ASYMMETRIC: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;
const EXIT_MU_MINUS_INF: u8 = 5;

struct Failure(u8, String);

impl From<QrError> for Failure {
    fn from(e: QrError) -> Self {
        let code = match e {
            QrError::Parse(_) | QrError::DimensionMismatch { .. } => EXIT_PARSE,
            QrError::Asymmetric { .. } => EXIT_ASYMMETRIC,
            QrError::Infeasible(_) => EXIT_INFEASIBLE,
            _ => 1,
        };
        Failure(code, e.to_string())
    }
}

fn load(file: &Path, num: &NumArgs) -> Result<Problem, Failure> {
    let p = load_problem(file, num.policy())?;
    for w in &p.warnings {
        eprintln!("warning: {w}");
    }
    Ok(p)
}

fn parse_dir(v: &Option<Vec<String>>) -> Result<Option<PlaneDirection>, Failure> {
    let Some(v) = v else { return Ok(None) };
    let d1 = parse_rat(&v[0])?;
    let d2 = parse_rat(&v[1])?;
    PlaneDirection::new(d1, d2).map(Some).map_err(|e| Failure(EXIT_PARSE, format!("--dir: {e}")))
}

fn cone_of(arg: Option<ConeArg>, p: &Problem) -> Result<Cone, Failure> {
    match (arg, p.cone) {
        (Some(ConeArg::Zero), _) => Ok(Cone::Zero),
        (Some(ConeArg::Nonneg), _) => Ok(Cone::NonNeg),
        (None, Some(c)) => Ok(c),
        (None, None) => Err(Failure(EXIT_PARSE, "--cone is required (the problem file names no cone)".into())),
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Failure(1, e.to_string()))?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{s}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure(1, e.to_string())),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Analyze { file, dir, num } => {
            let p = load(&file, &num)?;
            let d = parse_dir(&dir)?;
            print_json(&analyze(&p.pair, p.mode, d.as_ref())?)?;
            Ok(0)
        }
        Cmd::Solve { file, opt } => {
            let p = load(&file, &opt.num)?;
            let rep = solve(&p.pair, cone_of(opt.cone, &p)?)?;
            print_json(&rep)?;
            Ok(if rep.mu_minus_infinity() { EXIT_MU_MINUS_INF } else { 0 })
        }
        Cmd::Certify { file, opt } => {
            let p = load(&file, &opt.num)?;
            print_json(&certify(&p.pair, cone_of(opt.cone, &p)?)?)?;
            Ok(0)
        }
        Cmd::Plot { file, out, samples, radius, seed, dir, num } => {
            if !(radius.is_finite() && radius > 0.0) {
                return Err(Failure(EXIT_PARSE, "--radius must be positive".into()));
            }
            let p = load(&file, &num)?;
            let dirs = match parse_dir(&dir)? {
                Some(d) => vec![d],
                None => at_most_two_directions(&p.pair)?,
            };
            let data = sample_range(&p.pair, samples, radius, seed.unwrap_or_else(default_seed));
            let title = p.name.clone().unwrap_or_else(|| file.display().to_string());
            let csv = out.with_extension("csv");
            let svg = out.with_extension("svg");
            std::fs::write(&csv, to_csv(&data)).map_err(|e| Failure(1, format!("{}: {e}", csv.display())))?;
            std::fs::write(&svg, to_svg(&data, &dirs, &title)).map_err(|e| Failure(1, format!("{}: {e}", svg.display())))?;
            println!("{}\n{}", csv.display(), svg.display());
            Ok(0)
        }
        Cmd::Examples { action } => match action {
            ExAction::List => {
                for n in corpus::names() {
                    println!("{n}");
                }
                Ok(0)
            }
            ExAction::Run { name, all } => {
                let names: Vec<String> = match (name, all) {
                    (Some(n), _) => vec![n],
                    (None, true) => corpus::names().into_iter().map(String::from).collect(),
                    (None, false) => return Err(Failure(EXIT_PARSE, "give an example name or --all".into())),
                };
                let mut ok = true;
                for n in &names {
                    match corpus::run_example(n)? {
                        None => return Err(Failure(EXIT_PARSE, format!("unknown example {n:?}"))),
                        Some(out) => {
                            ok &= out.passed();
                            println!("{} {} ({} checks)", if out.passed() { "PASS" } else { "FAIL" }, n, out.checks.len());
                            for c in out.failures() {
                                println!("  failed: {} [{}]", c.label, c.detail);
                            }
                        }
                    }
                }
                Ok(if ok { 0 } else { EXIT_EXAMPLES })
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
