//! Randomized solve-versus-oracle campaigns with a CSV summary.
//!
//! Per instance the campaign records the cut value, both uniform pipelines,
//! the exact oracle values and the resulting approximation ratios, asserting
//! the 1/2 (totally uniform) and 1/4 (concurrent) guarantees. Documents go
//! to stdout as JSON lines in instance order; the CSV follows on stdout or
//! goes to `--csv`; aggregates are reported on stderr. Any guarantee
//! violation dumps the offending instance and exits nonzero.

use crate::document::{instance_digest, rational_value, ResultDocument};
use crate::{CliError, EXIT_INTERNAL, EXIT_PRECONDITION};
use clap::Args;
use serde_json::{json, Value};
use splitflow::approx::concurrent_quarter;
use splitflow::approx::{doubled_uniform_flow, uniform_half_approx};
use splitflow::cuts::min_two_commodity_cut;
use splitflow::generate::{generate_instance, GenParams};
use splitflow::oracle::{
    exact_concurrent, exact_totally_uniform, verify_flow, ConcurrentMode, OracleError, OracleLimits,
};
use splitflow::{format_rational, ratio, serialize_instance, Instance, Rational};
use std::io::Write;
use std::path::PathBuf;

pub const CSV_HEADER: &str = "seed,n,m,k1,k2,c_value,tu2k_total,tuhalf_total,oracle_tu,ratio_tu,lambda_approx,lambda_oracle,ratio_conc";

#[derive(Args)]
pub struct BenchArgs {
    /// Number of instances to generate.
    #[arg(long)]
    count: u64,
    #[arg(long, default_value_t = 6)]
    vertices: usize,
    #[arg(long, default_value_t = 9)]
    edges: usize,
    #[arg(long = "max-cap", default_value_t = 8)]
    max_cap: i64,
    #[arg(long, default_value_t = 1)]
    k1: u32,
    #[arg(long, default_value_t = 1)]
    k2: u32,
    /// Base seed; instance i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write the summary CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Directory for dumped counterexample instances.
    #[arg(long = "dump-dir", default_value = ".")]
    dump_dir: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    max_paths: usize,
    #[arg(long, default_value_t = 2_000_000)]
    max_selections: u64,
}

struct Outcome {
    document: String,
    csv_row: String,
    ratio_tu: Option<Rational>,
    ratio_conc: Option<Rational>,
    failure: Option<(String, Instance)>,
}

fn opt_rational(r: Option<Rational>) -> String {
    r.map(format_rational).unwrap_or_default()
}

fn run_one(index: u64, args: &BenchArgs, limits: &OracleLimits) -> Result<Outcome, CliError> {
    let seed = args.seed + index;
    let params = GenParams {
        vertices: args.vertices,
        edges: args.edges,
        max_capacity: args.max_cap,
        splits: (args.k1, args.k2),
        seed,
    };
    let inst = generate_instance(&params)
        .map_err(|e| CliError { code: EXIT_PRECONDITION, message: e.to_string() })?;

    let cut = min_two_commodity_cut(&inst)?;
    let doubled = doubled_uniform_flow(&inst)?;
    let half = uniform_half_approx(&inst)?;
    let half_total = half.flow.total_value();
    for flow in [&doubled.flow, &half.flow] {
        let report = verify_flow(&inst, flow);
        if !report.ok() {
            return Err(CliError {
                code: EXIT_INTERNAL,
                message: format!("solver flow failed verification at seed {seed}: {:?}", report.checks),
            });
        }
    }

    let oracle_tu = match exact_totally_uniform(&inst, limits) {
        Ok((_, flow)) => Some(flow.total_value()),
        Err(OracleError::TooManySelections { .. } | OracleError::TooManyPaths { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let ratio_tu = match oracle_tu {
        Some(total) if total > ratio(0, 1) => Some(half_total / total),
        _ => None,
    };

    let mut lambda_approx = None;
    let mut lambda_oracle = None;
    if args.k1 >= 1 && args.k2 >= 1 {
        let (d1, d2) =
            (Rational::from_integer(args.k1 as i64), Rational::from_integer(args.k2 as i64));
        lambda_approx = Some(concurrent_quarter(&inst, d1, d2)?.lambda);
        lambda_oracle = match exact_concurrent(&inst, d1, d2, ConcurrentMode::Free, limits) {
            Ok((lambda, _)) => Some(lambda),
            Err(OracleError::TooManySelections { .. } | OracleError::TooManyPaths { .. }) => None,
            Err(e) => return Err(e.into()),
        };
    }
    let ratio_conc = match (lambda_approx, lambda_oracle) {
        (Some(a), Some(o)) if o > ratio(0, 1) => Some(a / o),
        _ => None,
    };

    let mut failure = None;
    if let Some(r) = ratio_tu {
        if r < ratio(1, 2) || r > ratio(1, 1) {
            failure = Some((
                format!("totally uniform ratio {} outside [1/2, 1] at seed {seed}", format_rational(r)),
                inst.clone(),
            ));
        }
    }
    if failure.is_none() {
        if let Some(r) = ratio_conc {
            if r < ratio(1, 4) || r > ratio(1, 1) {
                failure = Some((
                    format!("concurrent ratio {} outside [1/4, 1] at seed {seed}", format_rational(r)),
                    inst.clone(),
                ));
            }
        }
    }

    let opt_value = |r: Option<Rational>| -> Value {
        r.map(rational_value).unwrap_or(Value::Null)
    };
    let outputs = json!({
        "seed": seed,
        "n": args.vertices,
        "m": args.edges,
        "k1": args.k1,
        "k2": args.k2,
        "c_value": rational_value(cut.value),
        "tu2k_total": rational_value(doubled.flow.total_value()),
        "tuhalf_total": rational_value(half_total),
        "oracle_tu": opt_value(oracle_tu),
        "ratio_tu": opt_value(ratio_tu),
        "lambda_approx": opt_value(lambda_approx),
        "lambda_oracle": opt_value(lambda_oracle),
        "ratio_conc": opt_value(ratio_conc),
        "oracle_refused": oracle_tu.is_none(),
    });
    let parameters = json!({
        "seed": seed,
        "vertices": args.vertices,
        "edges": args.edges,
        "max_cap": args.max_cap,
        "k1": args.k1,
        "k2": args.k2,
    });
    let document =
        ResultDocument::new("bench-instance", "bench", &inst, parameters, outputs).to_json();

    let csv_row = format!(
        "{seed},{},{},{},{},{},{},{},{},{},{},{},{}",
        args.vertices,
        args.edges,
        args.k1,
        args.k2,
        format_rational(cut.value),
        format_rational(doubled.flow.total_value()),
        format_rational(half_total),
        opt_rational(oracle_tu),
        opt_rational(ratio_tu),
        opt_rational(lambda_approx),
        opt_rational(lambda_oracle),
        opt_rational(ratio_conc),
    );
    Ok(Outcome { document, csv_row, ratio_tu, ratio_conc, failure })
}

fn aggregate(name: &str, ratios: &[Rational]) -> String {
    if ratios.is_empty() {
        return format!("{name}: no instances with an oracle value");
    }
    let min = ratios.iter().min().expect("nonempty");
    let sum: Rational = ratios.iter().copied().sum();
    let mean = sum / Rational::from_integer(ratios.len() as i64);
    format!(
        "{name}: {} instances, min {}, mean {}",
        ratios.len(),
        format_rational(*min),
        format_rational(mean)
    )
}

pub fn run_bench(args: BenchArgs) -> Result<(), CliError> {
    if args.k1 == 0 && args.k2 == 0 {
        return Err(CliError {
            code: EXIT_PRECONDITION,
            message: "bench needs at least one positive split count".into(),
        });
    }
    if args.jobs == 0 {
        return Err(CliError::input("--jobs must be at least 1"));
    }
    let limits = OracleLimits { max_paths: args.max_paths, max_selections: args.max_selections };
    let count = args.count as usize;
    let mut outcomes: Vec<Option<Result<Outcome, CliError>>> = Vec::new();
    outcomes.resize_with(count, || None);

    if args.jobs <= 1 || count <= 1 {
        for (i, slot) in outcomes.iter_mut().enumerate() {
            *slot = Some(run_one(i as u64, &args, &limits));
        }
    } else {
        let chunk_size = count.div_ceil(args.jobs);
        std::thread::scope(|scope| {
            for (w, chunk) in outcomes.chunks_mut(chunk_size).enumerate() {
                let args = &args;
                let limits = &limits;
                scope.spawn(move || {
                    for (j, slot) in chunk.iter_mut().enumerate() {
                        let index = (w * chunk_size + j) as u64;
                        *slot = Some(run_one(index, args, limits));
                    }
                });
            }
        });
    }

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut csv_lines = vec![CSV_HEADER.to_string()];
    let mut ratios_tu = Vec::new();
    let mut ratios_conc = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes.into_iter().flatten() {
        let outcome = outcome?;
        writeln!(out, "{}", outcome.document).map_err(|e| CliError::input(e.to_string()))?;
        csv_lines.push(outcome.csv_row);
        ratios_tu.extend(outcome.ratio_tu);
        ratios_conc.extend(outcome.ratio_conc);
        failures.extend(outcome.failure);
    }

    let csv_text = csv_lines.join("\n") + "\n";
    match &args.csv {
        Some(path) => std::fs::write(path, &csv_text)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?,
        None => {
            write!(out, "{csv_text}").map_err(|e| CliError::input(e.to_string()))?;
        }
    }
    eprintln!("{}", aggregate("ratio_tu", &ratios_tu));
    eprintln!("{}", aggregate("ratio_conc", &ratios_conc));

    if !failures.is_empty() {
        for (message, inst) in &failures {
            let digest = instance_digest(inst);
            let name = digest.trim_start_matches("sha256:");
            let path = args.dump_dir.join(format!("splitflow-failure-{}.biflow", &name[..16]));
            std::fs::write(&path, serialize_instance(inst))
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            eprintln!("guarantee violated: {message}; instance dumped to {}", path.display());
        }
        return Err(CliError {
            code: EXIT_INTERNAL,
            message: format!("{} guarantee violation(s)", failures.len()),
        });
    }
    Ok(())
}
