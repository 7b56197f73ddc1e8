//! `sumsets` — compute windowed sum/product sets, evaluate lower bounds,
//! classify extremal instances, generate extremal families, and run the
//! verification suites.
//!
//! Results go to stdout as JSON; diagnostics go to stderr.  Exit codes:
//! 0 success, 1 a verification violation (or broken internal guarantee),
//! 2 parse/usage error, 3 work budget exceeded.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sumsets::bounds::{evaluate_bound, hamidoune_check, BoundName};
use sumsets::constructions::{
    construct, mirror_to_free, named_example, ConstructionParams, ConstructionVariant,
};
use sumsets::error::Error;
use sumsets::inverse::classify_extremal;
use sumsets::json::{
    bound_report_to_json, element_to_json, extremal_report_to_json, gset_to_json,
    instance_to_json, model_to_json, parse_instance, subseq_report_to_json, Instance, Payload,
};
use sumsets::seqset::{
    generalized_product_set, multiplicity_profile, subsequence_sumset, SetSequence,
};
use sumsets::subseq::{subseq_inverse_check, subseq_profile};
use sumsets::verify::{
    parse_exhaustive_spec, verify_inverse_exhaustive, verify_suite, FuzzConfig, SuiteOutcome,
};

#[derive(Parser)]
#[command(
    name = "sumsets",
    version,
    about = "Windowed sumsets, extremal bounds, and their verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the windowed sum/product set of an instance.
    Compute(ComputeArgs),
    /// Evaluate a named lower bound on an instance.
    Bound(BoundArgs),
    /// Classify an instance against the extremal structure theorems.
    Classify(ClassifyArgs),
    /// Generate one of the extremal interval families as an instance.
    Construct(ConstructArgs),
    /// Run a verification suite (fuzzed or exhaustive).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Instance JSON file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Override the window size recorded in the instance.
    #[arg(long)]
    ell: Option<usize>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Also print the multiplicity table.
    #[arg(long)]
    profile: bool,
    /// Maximum number of windowed product tuples to enumerate.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Bound name: cauchy-davenport, kneser, dgm, kemperman-tf,
    /// tf-mu, zp-mu, abelian-mu, or hamidoune (element sequences).
    #[arg(long)]
    name: String,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args)]
#[command(group(
    clap::ArgGroup::new("family").required(true).multiple(false)
))]
struct ConstructArgs {
    /// Family variant: c1/stacked, c2/short-overlap, c3/long-overlap.
    #[arg(long, group = "family")]
    variant: Option<String>,
    /// A named instance: `five-intervals`.
    #[arg(long, group = "family")]
    name: Option<String>,
    /// Window size of the emitted instance.
    #[arg(long)]
    ell: usize,
    /// Interval lengths `k_1,…,k_m` (nondecreasing).
    #[arg(long, value_delimiter = ',')]
    k: Vec<u64>,
    /// Block count for the stacked variant (default: smallest valid).
    #[arg(long)]
    n: Option<usize>,
    /// Offsets for the overlap variants.
    #[arg(long = "n-aux", value_delimiter = ',')]
    n_aux: Vec<u64>,
    /// Emit the family over `integers` or mirrored into `free`.
    #[arg(long, default_value = "integers")]
    model: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: bounds, inverse, structure, constructions, subseq, or all.
    suite: String,
    /// Seed for the deterministic fuzzer.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instances per fuzzed suite.
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Exhaustive scan spec, e.g. `Z,m=3,ell=2,universe=0..5` or
    /// `Z7,m=3,ell=2` (inverse suite only).
    #[arg(long)]
    exhaustive: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded(_) => ExitCode::from(3),
                // A broken internal guarantee is a found violation, not a
                // usage problem.
                Error::Internal(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn read_instance(args: &InputArgs) -> Result<Instance, Error> {
    let text = if args.input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Json(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(&args.input)
            .map_err(|e| Error::Json(format!("cannot read {}: {e}", args.input)))?
    };
    let mut instance = parse_instance(&text)?;
    if let Some(ell) = args.ell {
        instance.ell = ell;
    }
    Ok(instance)
}

fn emit(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable value"));
}

/// Number of product tuples the windowed computation enumerates: the
/// elementary symmetric polynomial `e_ℓ` of the set sizes.
fn tuple_estimate(sizes: &[u64], ell: usize) -> u128 {
    let mut e = vec![0u128; ell + 1];
    e[0] = 1;
    for &s in sizes {
        for j in (1..=ell).rev() {
            e[j] = e[j].saturating_add(e[j - 1].saturating_mul(s as u128));
        }
    }
    e[ell]
}

fn cmd_compute(args: ComputeArgs) -> Result<ExitCode, Error> {
    let instance = read_instance(&args.input)?;
    let ell = instance.ell;
    match &instance.payload {
        Payload::Sets(seq) => {
            let sizes: Vec<u64> = seq.sets().iter().map(|s| s.len() as u64).collect();
            let estimate = tuple_estimate(&sizes, ell.min(sizes.len()));
            if estimate > args.budget as u128 {
                return Err(Error::BudgetExceeded(format!(
                    "{estimate} product tuples exceed the budget of {}",
                    args.budget
                )));
            }
            let result = generalized_product_set(seq, ell)?;
            let mut out = json!({
                "model": model_to_json(seq.model()),
                "ell": ell,
                "size": result.len(),
                "set": gset_to_json(&result),
            });
            if args.profile {
                out["profile"] = set_profile_json(seq, ell)?;
            }
            emit(&out);
        }
        Payload::Sequence(seq) => {
            let result = subsequence_sumset(seq, ell)?;
            let mut out = json!({
                "model": model_to_json(seq.model()),
                "ell": ell,
                "size": result.len(),
                "set": gset_to_json(&result),
            });
            if args.profile {
                let profile = subseq_profile(seq, ell)?;
                let table: Vec<Value> = seq
                    .distinct()
                    .iter()
                    .map(|a| {
                        json!({
                            "element": element_to_json(a),
                            "rho": profile.rho_of(a),
                            "mu": profile.mu_of(a),
                        })
                    })
                    .collect();
                out["profile"] = json!({
                    "table": table,
                    "mu_total": profile.mu_total(),
                });
            }
            emit(&out);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn set_profile_json(seq: &SetSequence, ell: usize) -> Result<Value, Error> {
    let profile = multiplicity_profile(seq, ell)?;
    let table: Vec<Value> = profile
        .support()
        .iter()
        .map(|a| {
            json!({
                "element": element_to_json(a),
                "mu": profile.mu_of(a).unwrap(),
                "eta": profile.eta_of(a).unwrap(),
                "tau": profile.tau_of(a).unwrap(),
            })
        })
        .collect();
    Ok(json!({
        "table": table,
        "mu_total": profile.mu_total(),
        "saturated": gset_to_json(profile.m_set()),
    }))
}

fn cmd_bound(args: BoundArgs) -> Result<ExitCode, Error> {
    let instance = read_instance(&args.input)?;
    let name: BoundName = args.name.parse()?;
    let report = match &instance.payload {
        Payload::Sets(seq) => {
            if name == BoundName::SubseqHamidoune {
                return Err(Error::Precondition(
                    "the subsequence disjunction applies to element sequences".into(),
                ));
            }
            evaluate_bound(name, seq, instance.ell)?
        }
        Payload::Sequence(seq) => {
            if name != BoundName::SubseqHamidoune {
                return Err(Error::Precondition(format!(
                    "bound `{name}` applies to set sequences; use a sets instance"
                )));
            }
            hamidoune_check(seq, instance.ell)?
        }
    };
    emit(&bound_report_to_json(&report));
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(args: ClassifyArgs) -> Result<ExitCode, Error> {
    let instance = read_instance(&args.input)?;
    match &instance.payload {
        Payload::Sets(seq) => {
            let report = classify_extremal(seq, instance.ell)?;
            emit(&extremal_report_to_json(&report));
        }
        Payload::Sequence(seq) => {
            let report = subseq_inverse_check(seq, instance.ell)?;
            emit(&subseq_report_to_json(&report));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct(args: ConstructArgs) -> Result<ExitCode, Error> {
    let seq = if let Some(name) = &args.name {
        named_example(name)?
    } else {
        let variant: ConstructionVariant = args.variant.as_deref().unwrap_or_default().parse()?;
        if args.k.is_empty() {
            return Err(Error::InvalidParams(
                "the --k interval lengths are required with --variant".into(),
            ));
        }
        let m = args.k.len();
        let params = match variant {
            ConstructionVariant::Stacked => {
                let blocks = args.n.unwrap_or_else(|| m.div_ceil(args.ell.max(1)));
                ConstructionParams::stacked(args.ell, m, args.k.clone(), blocks)
            }
            ConstructionVariant::ShortOverlap => {
                ConstructionParams::short_overlap(args.ell, m, args.k.clone(), args.n_aux.clone())
            }
            ConstructionVariant::LongOverlap => {
                ConstructionParams::long_overlap(args.ell, m, args.k.clone(), args.n_aux.clone())
            }
        };
        construct(&params)?
    };
    let seq = match args.model.as_str() {
        "integers" => seq,
        "free" => mirror_to_free(&seq)?,
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown construct model `{other}` (expected integers or free)"
            )))
        }
    };
    let instance = Instance {
        ell: args.ell,
        payload: Payload::Sets(seq),
    };
    emit(&instance_to_json(&instance));
    Ok(ExitCode::SUCCESS)
}

fn outcome_json(outcome: &SuiteOutcome) -> Value {
    json!({
        "suite": outcome.suite,
        "instances": outcome.instances,
        "equality_cases": outcome.equality_cases,
        "skips": outcome.skips,
        "violations": outcome
            .violations
            .iter()
            .map(|v| json!({ "description": v.description, "instance": v.instance }))
            .collect::<Vec<Value>>(),
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let outcomes = if let Some(spec) = &args.exhaustive {
        if args.suite != "inverse" {
            return Err(Error::InvalidParams(
                "--exhaustive applies to the inverse suite".into(),
            ));
        }
        let params = parse_exhaustive_spec(spec)?;
        vec![verify_inverse_exhaustive(&params)?]
    } else {
        let cfg = FuzzConfig {
            seed: args.seed,
            count: args.count,
            ..FuzzConfig::default()
        };
        verify_suite(&args.suite, &cfg)?
    };
    let mut total_violations = 0usize;
    for outcome in &outcomes {
        total_violations += outcome.violations.len();
        eprintln!(
            "suite {}: {} instances, {} equality cases, {} skips, {} violations",
            outcome.suite,
            outcome.instances,
            outcome.equality_cases,
            outcome.skips,
            outcome.violations.len()
        );
    }
    emit(&json!({
        "suites": outcomes.iter().map(outcome_json).collect::<Vec<Value>>(),
    }));
    if total_violations > 0 {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
