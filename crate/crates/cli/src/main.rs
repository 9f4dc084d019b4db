//! `gammaratio`: coefficients, evaluation sweeps and verification suites for
//! balanced gamma-function ratios.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error, 3 spec
//! invariant violated, 4 pole, 5 order out of range.

mod error;
mod pipeline;
mod specfile;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::Value;

use gammaratio::numerics::{ComplexFloat, GaussRational};

use error::{CliError, EXIT_VERIFY};
use pipeline::{build_series, build_spec, eval_rows, expand_factorial, expand_poincare, HRoute, Mode, Precision, Shape, CSV_HEADER};
use specfile::{parse_complex, resolve_precision, ProblemSpec, DEFAULT_ORDER};
use verify::Suite;

#[derive(Parser)]
#[command(name = "gammaratio", version, about = "Inverse factorial series for balanced gamma-function ratios")]
struct Cli {
    /// Precision in bits (overrides the spec file and GAMMARATIO_PRECISION)
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit Poincare or factorial-series coefficients as JSON
    Expand(ExpandArgs),
    /// Partial sums against the direct oracle as CSV
    Eval(EvalArgs),
    /// Run verification suites and print a JSON report
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SeriesArgs {
    /// Problem spec file (JSON)
    spec: PathBuf,
    /// Plain-shift parameter sigma (overrides the spec file)
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    /// Gamma-prefactor parameter theta (overrides the spec file)
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Route for the gamma-prefactor coefficients
    #[arg(long, value_enum, default_value = "stirling")]
    route: HRoute,
    /// Highest coefficient index (overrides the spec file; default 32)
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["poincare", "factorial"])))]
struct ExpandArgs {
    #[command(flatten)]
    series: SeriesArgs,
    #[arg(long)]
    poincare: bool,
    #[arg(long)]
    factorial: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// Evaluation point, e.g. `2`, `1+2i`, `0.5-1/3i` (repeatable)
    #[arg(long, required = true, allow_hyphen_values = true)]
    z: Vec<String>,
    /// Comma-separated truncation orders
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
}

struct Loaded {
    spec: ProblemSpec,
    prec: Precision,
    order: usize,
}

fn load(args: &SeriesArgs, precision: Option<u32>) -> Result<Loaded, CliError> {
    let path = args.spec.display().to_string();
    let text = std::fs::read_to_string(&args.spec).map_err(|e| CliError::io(&path, e))?;
    let mut spec = ProblemSpec::parse(&text).map_err(|e| CliError { code: e.code, message: format!("{path}: {}", e.message) })?;
    for (flag, slot) in [(&args.sigma, &mut spec.sigma), (&args.theta, &mut spec.theta)] {
        if let Some(text) = flag {
            let parsed = parse_complex(text)?;
            spec.float_mode |= parsed.decimal;
            *slot = Some(parsed.value);
        }
    }
    if args.sigma.is_some() && args.theta.is_none() {
        spec.theta = None;
    }
    if args.theta.is_some() && args.sigma.is_none() {
        spec.sigma = None;
    }
    let bits = resolve_precision(precision, spec.precision_bits)?;
    let order = args.order.or(spec.order).unwrap_or(DEFAULT_ORDER);
    Ok(Loaded { prec: Precision::new(bits, spec.float_mode), order, spec })
}

fn print_json(v: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}").or_else(CliError::write)
}

fn expand<S: Mode>(args: &ExpandArgs, l: &Loaded) -> Result<Value, CliError> {
    let spec = build_spec::<S>(&l.spec, l.prec.work)?;
    if args.poincare {
        expand_poincare(&spec, l.order, l.prec)
    } else {
        let shape = Shape::choose(l.spec.sigma.clone(), l.spec.theta.clone(), args.series.route)?;
        expand_factorial(&spec, &shape, l.order, l.prec)
    }
}

fn eval<S: Mode>(args: &EvalArgs, l: &Loaded, points: &[(GaussRational, bool)]) -> Result<Vec<String>, CliError> {
    let spec = build_spec::<S>(&l.spec, l.prec.work)?;
    let shape = Shape::choose(l.spec.sigma.clone(), l.spec.theta.clone(), args.series.route)?;
    let max_n = args.n_list.iter().copied().max().unwrap_or(0);
    let fs = build_series(&spec, &shape, l.order, l.prec)?;
    if max_n > fs.order() {
        return Err(gammaratio::Error::Range { requested: max_n, available: fs.order() }.into());
    }
    let mut rows = vec![CSV_HEADER.to_string()];
    for (z, decimal) in points {
        rows.extend(eval_rows(&spec, &fs, z, *decimal, &args.n_list, l.prec)?);
    }
    Ok(rows)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Expand(args) => {
            let l = load(&args.series, cli.precision)?;
            let v = if l.spec.float_mode { expand::<ComplexFloat>(&args, &l)? } else { expand::<GaussRational>(&args, &l)? };
            print_json(&v)
        }
        Command::Eval(args) => {
            let mut l = load(&args.series, cli.precision)?;
            let points = args
                .z
                .iter()
                .map(|s| parse_complex(s).map(|p| (p.value, p.decimal)))
                .collect::<Result<Vec<_>, _>>()?;
            if l.spec.float_mode || points.iter().any(|(_, d)| *d) {
                l.prec = Precision::new(l.prec.out, true);
            }
            let rows = if l.spec.float_mode { eval::<ComplexFloat>(&args, &l, &points)? } else { eval::<GaussRational>(&args, &l, &points)? };
            let mut out = std::io::stdout().lock();
            for r in rows {
                if let Err(e) = writeln!(out, "{r}") {
                    return CliError::write(e);
                }
            }
            Ok(())
        }
        Command::Verify(args) => {
            let (ok, report) = verify::run(args.suite);
            print_json(&report)?;
            if ok {
                Ok(())
            } else {
                Err(CliError { code: EXIT_VERIFY, message: "verification failed".into() })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gammaratio: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
