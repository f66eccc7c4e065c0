//! Command-line interface: solver pipelines (`solve`), exact brute-force
//! oracles (`oracle`) and randomized benchmark campaigns (`bench`).
//!
//! Exit codes: 0 success, 2 input error, 3 precondition failure, 4 oracle
//! limits exceeded, 5 internal invariant violation.

mod bench;
mod document;

use clap::{Args, Parser, Subcommand, ValueEnum};
use document::{cut_json, flow_json, rational_value, ResultDocument};
use serde_json::json;
use splitflow::approx::{
    concurrent_quarter, doubled_uniform_flow, even_split_exact, uniform_half_approx, ApproxError,
};
use splitflow::cuts::{min_two_commodity_cut, CutsError};
use splitflow::oracle::{
    cut_bound, exact_biuniform, exact_concurrent, exact_totally_uniform, ConcurrentMode,
    CutBound, CutBoundMode, OracleError, OracleLimits,
};
use splitflow::{parse_instance, parse_rational, Instance, Rational};
use std::path::PathBuf;
use std::time::Instant;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_ORACLE_LIMIT: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<ApproxError> for CliError {
    fn from(e: ApproxError) -> Self {
        let code = match e {
            ApproxError::Internal(_) => EXIT_INTERNAL,
            ApproxError::InstanceTooLarge => EXIT_INPUT,
            _ => EXIT_PRECONDITION,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<CutsError> for CliError {
    fn from(e: CutsError) -> Self {
        let code = match e {
            CutsError::ZeroSplits => EXIT_PRECONDITION,
            CutsError::InstanceTooLarge => EXIT_INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::TooManyPaths { .. } | OracleError::TooManySelections { .. } => {
                EXIT_ORACLE_LIMIT
            }
            OracleError::DemandFreeCut | OracleError::InvalidDemand => EXIT_PRECONDITION,
        };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Parser)]
#[command(name = "splitflow", version, about = "Two-commodity k-splittable flow approximations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver pipeline on an instance file.
    Solve(SolveArgs),
    /// Run an exact brute-force oracle on an instance file.
    Oracle(OracleArgs),
    /// Generate random instances, solve them and compare against oracles.
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMode {
    /// Two-commodity minimum cut value with witness.
    Cut,
    /// Totally uniform flow on doubled path counts.
    Tu2k,
    /// 1/2-approximation of the maximum totally uniform flow.
    Tuhalf,
    /// Exactness certificate for even split counts.
    Evenk,
    /// 1/4-approximation of the maximal concurrent flow.
    Concurrent,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    mode: SolveMode,
    /// Instance file in the biflow format.
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    /// Demand of commodity 1 as num/den (concurrent mode).
    #[arg(long)]
    d1: Option<String>,
    /// Demand of commodity 2 as num/den (concurrent mode).
    #[arg(long)]
    d2: Option<String>,
    #[arg(short = 'o', long = "output", value_enum, default_value = "json")]
    output: OutputFormat,
    /// Include wall-clock timing in the document (off by default so output
    /// is byte-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleMode {
    /// Exact maximum totally uniform flow.
    Tu,
    /// Exact maximum bi-uniform flow.
    Bi,
    /// Exact maximal concurrent flow.
    Concurrent,
    /// Packing bound of one cut.
    Cutbound,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConcurrentUniformity {
    Free,
    Bi,
    Total,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PackingMode {
    Tu,
    Bi,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    mode: OracleMode,
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    /// Maximum simple paths per commodity before the oracle refuses.
    #[arg(long, default_value_t = 10_000)]
    max_paths: usize,
    /// Maximum path selections before the oracle refuses.
    #[arg(long, default_value_t = 2_000_000)]
    max_selections: u64,
    #[arg(long)]
    d1: Option<String>,
    #[arg(long)]
    d2: Option<String>,
    /// Uniformity restriction for the concurrent oracle.
    #[arg(long, value_enum, default_value = "free")]
    uniformity: ConcurrentUniformity,
    /// Cut members for cutbound mode, e.g. --cut 1,3.
    #[arg(long, value_delimiter = ',')]
    cut: Vec<usize>,
    /// Packing mode for cutbound: one shared item size (tu) or
    /// per-commodity sizes (bi).
    #[arg(long, value_enum, default_value = "tu")]
    packing: PackingMode,
    #[arg(short = 'o', long = "output", value_enum, default_value = "json")]
    output: OutputFormat,
    #[arg(long)]
    timing: bool,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Bench(args) => bench::run_bench(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}

fn load_instance(path: &PathBuf) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Demands for concurrent modes: command-line arguments override the
/// instance's optional demand fields.
fn resolve_demands(
    inst: &Instance,
    d1: &Option<String>,
    d2: &Option<String>,
) -> Result<(Rational, Rational), CliError> {
    let parse = |text: &String| {
        parse_rational(text).map_err(|e| CliError::input(format!("bad demand `{text}`: {e}")))
    };
    match (d1, d2) {
        (Some(a), Some(b)) => Ok((parse(a)?, parse(b)?)),
        (None, None) => match (inst.commodities[0].demand, inst.commodities[1].demand) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(CliError::input("concurrent mode needs demands: --d1 and --d2")),
        },
        _ => Err(CliError::input("give both --d1 and --d2 or neither")),
    }
}

fn emit(doc: ResultDocument, format: OutputFormat) {
    match format {
        OutputFormat::Json => println!("{}", doc.to_json()),
        OutputFormat::Text => print!("{}", doc.to_text()),
    }
}

fn run_solve(args: SolveArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let inst = load_instance(&args.input)?;
    let mode_name = match args.mode {
        SolveMode::Cut => "cut",
        SolveMode::Tu2k => "tu2k",
        SolveMode::Tuhalf => "tuhalf",
        SolveMode::Evenk => "evenk",
        SolveMode::Concurrent => "concurrent",
    };
    let mut parameters = json!({ "input": args.input.display().to_string() });
    let outputs = match args.mode {
        SolveMode::Cut => {
            let cut = min_two_commodity_cut(&inst)?;
            json!({ "value": rational_value(cut.value), "cut": cut_json(&cut) })
        }
        SolveMode::Tu2k => {
            let result = doubled_uniform_flow(&inst)?;
            json!({
                "value": rational_value(result.cut.value),
                "per_path": rational_value(result.per_path),
                "total": rational_value(result.flow.total_value()),
                "cut": cut_json(&result.cut),
                "flow": flow_json(&result.flow),
            })
        }
        SolveMode::Tuhalf => {
            let result = uniform_half_approx(&inst)?;
            json!({
                "per_path": rational_value(result.per_path),
                "total": rational_value(result.flow.total_value()),
                "upper_bound": rational_value(result.upper_bound),
                "cut": cut_json(&result.cut),
                "flow": flow_json(&result.flow),
            })
        }
        SolveMode::Evenk => {
            let cert = even_split_exact(&inst)?;
            let mut outputs = json!({
                "applicable": cert.applicable,
                "full_value": rational_value(cert.full_cut.value),
                "halved_value": rational_value(cert.halved_cut.value),
            });
            if let (Some(flow), Some(per_path)) = (&cert.flow, cert.per_path) {
                let map = outputs.as_object_mut().expect("object");
                map.insert("per_path".into(), rational_value(per_path));
                map.insert("total".into(), rational_value(flow.total_value()));
                map.insert("flow".into(), flow_json(flow));
            }
            outputs
        }
        SolveMode::Concurrent => {
            let (d1, d2) = resolve_demands(&inst, &args.d1, &args.d2)?;
            parameters
                .as_object_mut()
                .expect("object")
                .insert("demands".into(), json!([rational_value(d1), rational_value(d2)]));
            let result = concurrent_quarter(&inst, d1, d2)?;
            json!({
                "lambda": rational_value(result.lambda),
                "demands": [rational_value(d1), rational_value(d2)],
                "per_path": rational_value(result.per_path),
                "total": rational_value(result.flow.total_value()),
                "cut": cut_json(&result.cut),
                "flow": flow_json(&result.flow),
            })
        }
    };
    let mut doc = ResultDocument::new("solve", mode_name, &inst, parameters, outputs);
    if args.timing {
        doc.timing_ms = Some(start.elapsed().as_millis());
    }
    emit(doc, args.output);
    Ok(())
}

fn run_oracle(args: OracleArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let inst = load_instance(&args.input)?;
    let limits = OracleLimits { max_paths: args.max_paths, max_selections: args.max_selections };
    let mode_name = match args.mode {
        OracleMode::Tu => "tu",
        OracleMode::Bi => "bi",
        OracleMode::Concurrent => "concurrent",
        OracleMode::Cutbound => "cutbound",
    };
    let mut parameters = json!({
        "input": args.input.display().to_string(),
        "max_paths": args.max_paths,
        "max_selections": args.max_selections,
    });
    let outputs = match args.mode {
        OracleMode::Tu => {
            let (value, flow) = exact_totally_uniform(&inst, &limits)?;
            json!({
                "value": rational_value(value),
                "total": rational_value(flow.total_value()),
                "flow": flow_json(&flow),
            })
        }
        OracleMode::Bi => {
            let (x, y, flow) = exact_biuniform(&inst, &limits)?;
            json!({
                "x": rational_value(x),
                "y": rational_value(y),
                "total": rational_value(x + y),
                "flow": flow_json(&flow),
            })
        }
        OracleMode::Concurrent => {
            let (d1, d2) = resolve_demands(&inst, &args.d1, &args.d2)?;
            let (mode, uniformity) = match args.uniformity {
                ConcurrentUniformity::Free => (ConcurrentMode::Free, "free"),
                ConcurrentUniformity::Bi => (ConcurrentMode::Bi, "bi"),
                ConcurrentUniformity::Total => (ConcurrentMode::Total, "total"),
            };
            let (lambda, flow) = exact_concurrent(&inst, d1, d2, mode, &limits)?;
            json!({
                "lambda": rational_value(lambda),
                "uniformity": uniformity,
                "demands": [rational_value(d1), rational_value(d2)],
                "flow": flow_json(&flow),
            })
        }
        OracleMode::Cutbound => {
            if args.cut.is_empty() {
                return Err(CliError::input("cutbound mode needs --cut <v1,v2,...>"));
            }
            for &v in &args.cut {
                inst.graph.check_vertex(v).map_err(|e| CliError::input(e.to_string()))?;
            }
            parameters.as_object_mut().expect("object").insert("cut".into(), json!(args.cut));
            let mode = match args.packing {
                PackingMode::Tu => CutBoundMode::TotallyUniform,
                PackingMode::Bi => CutBoundMode::BiUniform,
            };
            let bound = cut_bound(&inst, &args.cut, mode)?;
            json!({
                "bound": match bound {
                    CutBound::Finite(value) => rational_value(value),
                    CutBound::Unbounded => json!("unbounded"),
                },
                "cut_members": args.cut,
                "packing_mode": match args.packing {
                    PackingMode::Tu => "tu",
                    PackingMode::Bi => "bi",
                },
            })
        }
    };
    let mut doc = ResultDocument::new("oracle", mode_name, &inst, parameters, outputs);
    if args.timing {
        doc.timing_ms = Some(start.elapsed().as_millis());
    }
    emit(doc, args.output);
    Ok(())
}
