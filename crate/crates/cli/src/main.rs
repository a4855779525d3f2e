use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nmls_core::grid::{generate_starts, run_bench};
use nmls_core::profiles::{self, MAX_ALPHA};
use nmls_core::results::{read_records_from, BenchConfig};
use nmls_core::testfns::{by_name, make_suite};
use nmls_core::verify::{self, CheckReport};
use nmls_core::{
    solve, BenchPlan, Error, LineSearchParams, Objective, Point, RelaxationKind, RunSummary, Sigma, SolveConfig,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "nmls", version, about = "Non-monotone line-search solvers, benchmarks and data profiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one test problem and print the run record as JSON
    Run(RunArgs),
    /// Run the seeded benchmark grid and write a results file
    Bench(BenchArgs),
    /// Compute data profiles from a results file
    Profile(ProfileArgs),
    /// Check gradients and the worst-case iteration bounds
    Verify(VerifyArgs),
    /// List the registered test functions
    ListFunctions,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct StartPoint {
    /// Draw the starting point uniformly from the function's box
    #[arg(long)]
    seed: Option<u64>,
    /// Explicit starting point, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,
}

#[derive(Args)]
struct RunArgs {
    /// Test function name (see list-functions)
    #[arg(long)]
    function: String,
    /// Relaxation rule: m, nm1, nm2, nm3 or nm4
    #[arg(long)]
    method: RelaxationKind,
    #[command(flatten)]
    start: StartPoint,
    #[arg(long, default_value_t = 2.0)]
    theta: f64,
    /// Relaxation scale; `auto` means |f(x0)|
    #[arg(long, default_value_t = Sigma::Auto)]
    sigma: Sigma,
    /// Budget in simplex gradients (n+1 function evaluations each)
    #[arg(long, default_value_t = 100)]
    budget_sg: u64,
    /// Stop once the gradient norm is at most this
    #[arg(long, default_value_t = 0.0)]
    grad_tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_iters: u64,
    #[arg(long, default_value_t = 1.0)]
    alpha0: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    /// Window length for the max-window rule
    #[arg(long, default_value_t = 10)]
    window_m: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Starting points per function (360 matches the full-scale grid)
    #[arg(long, default_value_t = 30, conflicts_with = "config")]
    starts: u32,
    /// Budget in simplex gradients per problem
    #[arg(long, default_value_t = 100, conflicts_with = "config")]
    budget_sg: u64,
    /// Methods to run, comma separated
    #[arg(long, value_delimiter = ',', default_value = "m,nm1,nm2,nm3,nm4", conflicts_with = "config")]
    methods: Vec<RelaxationKind>,
    /// Master seed for the starting points
    #[arg(long, default_value_t = 42, conflicts_with = "config")]
    seed: u64,
    /// Results file to write
    #[arg(long, default_value = "results.tsv")]
    out: PathBuf,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// TOML file with [plan] and [params] tables, replacing the plan flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    /// Results file written by `bench`
    #[arg(long = "in")]
    input: PathBuf,
    /// Convergence tolerance
    #[arg(long, default_value_t = 1e-7)]
    tau: f64,
    /// Writes <prefix>.csv and <prefix>.svg
    #[arg(long, default_value = "profiles")]
    out_prefix: PathBuf,
    /// Methods to compare, comma separated [default: all in the file]
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<RelaxationKind>>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Gradients,
    Lemma1,
    Theorem1,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Bench(args) => bench(args),
        Command::Profile(args) => profile(args),
        Command::Verify(args) => verify(args),
        Command::ListFunctions => list_functions(),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(args: RunArgs) -> Outcome {
    let f = by_name(&args.function).map_err(usage)?;
    let params = LineSearchParams {
        alpha0: args.alpha0,
        beta: args.beta,
        rho: args.rho,
        theta: args.theta,
        sigma: args.sigma,
        window_m: args.window_m,
        grad_tol: args.grad_tol,
        max_iters: args.max_iters,
        ..LineSearchParams::paper()
    };
    params.validate().map_err(usage)?;
    if args.budget_sg == 0 {
        return Err(usage(anyhow::anyhow!("--budget-sg must be positive")));
    }
    // a seed gives the same point as start 0 of a bench with that master seed
    let x0 = match (args.start.seed, args.start.x0) {
        (Some(seed), _) => generate_starts(&f, 1, seed).remove(0).x0,
        (None, Some(x0)) => x0,
        (None, None) => unreachable!("clap requires one start option"),
    };
    if x0.len() != f.dim() {
        return Err(usage(Error::DimensionMismatch {
            expected: f.dim(),
            got: x0.len(),
        }));
    }
    let config = SolveConfig::new(args.method, params).with_budget(args.budget_sg * (f.dim() as u64 + 1));
    let record = solve(&f, &Point::from_vec(x0), &config).map_err(usage)?;
    println!("{}", serde_json::to_string_pretty(&record).context("serializing run record")?);
    Ok(if record.status.is_fatal() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn bench(args: BenchArgs) -> Outcome {
    let (mut plan, params) = match &args.config {
        Some(path) => {
            let cfg = BenchConfig::load(path).map_err(usage)?;
            (cfg.plan, cfg.params)
        }
        None => (
            BenchPlan {
                methods: args.methods,
                starts_per_function: args.starts,
                budget_simplex_gradients: args.budget_sg,
                master_seed: args.seed,
                parallelism: 1,
            },
            LineSearchParams::paper(),
        ),
    };
    plan.parallelism = args.jobs;
    plan.validate().map_err(usage)?;
    params.validate().map_err(usage)?;

    let started = Instant::now();
    let file = run_bench(&plan, &params, &make_suite()).context("running the benchmark grid")?;
    file.write_to(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;

    println!(
        "wrote {} records to {} in {:.1}s (seed {}, plan {:016x})",
        file.records.len(),
        args.out.display(),
        started.elapsed().as_secs_f64(),
        file.header.master_seed,
        file.header.plan_hash
    );
    for method in &plan.methods {
        let mut counts = std::collections::BTreeMap::new();
        for r in file.records.iter().filter(|r| r.method == *method) {
            *counts.entry(r.status.as_str()).or_insert(0usize) += 1;
        }
        let parts: Vec<String> = counts.iter().map(|(s, n)| format!("{s}={n}")).collect();
        println!("{:<4} {}", method.label(), parts.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

fn profile(args: ProfileArgs) -> Outcome {
    let file = read_records_from(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    if file.records.is_empty() {
        return Err(Failure::Runtime(anyhow::anyhow!(
            "{} holds no run records; run `nmls bench` first",
            args.input.display()
        )));
    }
    let records: Vec<RunSummary> = match &args.methods {
        Some(ms) => file.records.into_iter().filter(|r| ms.contains(&r.method)).collect(),
        None => file.records,
    };
    if records.is_empty() {
        return Err(Failure::Runtime(anyhow::anyhow!("no records for the requested methods")));
    }
    let set = profiles::data_profiles(&records, args.tau, |name| Ok(by_name(name)?.dim()))
        .context("computing data profiles")?;
    let csv = args.out_prefix.with_extension("csv");
    let svg = args.out_prefix.with_extension("svg");
    profiles::emit_csv(&set, &csv).with_context(|| format!("writing {}", csv.display()))?;
    profiles::emit_plot(&set, &svg).with_context(|| format!("writing {}", svg.display()))?;
    println!(
        "{} problems ({} degenerate excluded), tau={:e}",
        set.problems, set.degenerate, set.tau
    );
    for p in &set.profiles {
        println!("{:<4} solved at alpha={MAX_ALPHA}: {:.4}", p.method.label(), p.at(MAX_ALPHA));
    }
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Outcome {
    let mut reports: Vec<CheckReport> = Vec::new();
    if matches!(args.suite, Suite::Gradients | Suite::All) {
        reports.extend(verify::gradient_suite(&make_suite()));
    }
    if matches!(args.suite, Suite::Lemma1 | Suite::All) {
        reports.extend(verify::lemma1_suite().context("lemma1 harness")?);
    }
    if matches!(args.suite, Suite::Theorem1 | Suite::All) {
        reports.extend(verify::theorem1_suite().context("theorem1 harness")?);
    }
    for r in &reports {
        let tag = if r.passed { "ok  " } else { "FAIL" };
        println!("{tag} {:<32} {:>4} cases  worst margin {:.3e}", r.name, r.cases, r.worst_margin);
        for f in &r.failures {
            println!("       {f}");
        }
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    let summary = json!({
        "passed": failed.is_empty(),
        "checks": reports.len(),
        "failed": failed,
    });
    println!("{summary}");
    Ok(if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn list_functions() -> Outcome {
    for f in make_suite() {
        println!(
            "{:<22} n={:<2} box=[{}, {}]  {}",
            f.name(),
            f.dim(),
            f.lower()[0],
            f.upper()[0],
            f.title()
        );
    }
    Ok(ExitCode::SUCCESS)
}
