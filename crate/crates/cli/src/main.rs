use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use treeprob::automaton::{AutomatonError, Builtin};
use treeprob::exact::{solve_exact, wik_determinant, wik_value};
use treeprob::mbp::validate_mbp;
use treeprob::montecarlo::{estimate, McError, Z95};
use treeprob::numeric::NumericConfig;
use treeprob::pipeline::{
    prepare_builtin, prepare_file, reproduce, solve, McOptions, PipelineError, Prepared, ReproduceConfig, RunReport,
    SolveOptions,
};
use treeprob::poly::format_rational;
use treeprob::qe::runner::{configured_runner, run_qepcad, RUNNER_ENV};
use treeprob::qe::{export_stages, ingest_qf_answer, BoundPolicy, PrimedOrder, QeError, QeOptions, StageFile};

const EXIT_INPUT: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_CHECK: u8 = 3;

#[derive(Parser)]
#[command(name = "treeprob", version, about = "Probability of tree languages recognized by game automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check an automaton and its Markov branching play.
    Validate(InputArgs),
    /// Compute the probability of the language.
    Solve(SolveArgs),
    /// Write one qepcad input file per stage of the equation system.
    ExportQe(ExportArgs),
    /// Monte Carlo bracket of the value.
    Estimate(EstimateArgs),
    /// Value of the game language W(i,k) and the determinant of A_k.
    Wik(WikArgs),
    /// Check every published value on the corpus.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Built-in automaton: L1, L2, L3, Linf, W(1,3), or L/W with --n, --i, --k.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    builtin: Option<String>,
    /// Automaton in .gta format.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    i: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Args)]
struct McArgs {
    #[arg(long, default_value_t = 30)]
    depth: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    numeric: bool,
    /// Also run the Monte Carlo oracle when the MBP is eligible.
    #[arg(long)]
    mc: bool,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    mc_args: McArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bounds {
    Listings,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    EquationFirst,
    BoundFirst,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Bounds::Listings)]
    bounds: Bounds,
    #[arg(long, value_enum, default_value_t = Order::EquationFirst)]
    primed_order: Order,
    /// Run each stage through the executable named by TREEPROB_QEPCAD.
    #[arg(long)]
    run: bool,
    /// Seconds allowed per qepcad run.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    mc_args: McArgs,
    /// MBP state to start from; defaults to the initial one.
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WikArgs {
    #[arg(long)]
    i: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Directory holding the corpus .gta files; the embedded copy otherwise.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match &e {
            PipelineError::Automaton { .. } | PipelineError::Io { .. } | PipelineError::Mbp(_) => EXIT_INPUT,
            PipelineError::MonteCarlo(McError::MixedParity(_) | McError::UnknownState(_)) => EXIT_INPUT,
            _ => EXIT_SOLVER,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<QeError> for Failure {
    fn from(e: QeError) -> Self {
        Failure::new(EXIT_SOLVER, e.to_string())
    }
}

fn load(input: &InputArgs) -> Result<Prepared, Failure> {
    if let Some(path) = &input.file {
        return Ok(prepare_file(path)?);
    }
    let name = input.builtin.as_deref().expect("clap requires --builtin or --file");
    let params: Vec<u32> = [input.n, input.i, input.k].into_iter().flatten().collect();
    let b = Builtin::from_parts(name, &params)
        .map_err(|source: AutomatonError| PipelineError::Automaton { name: name.to_string(), source })?;
    Ok(prepare_builtin(&b)?)
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn cmd_validate(args: &InputArgs) -> Result<(), Failure> {
    let p = load(args)?;
    let diags = p.automaton.validate();
    for w in diags.warnings.iter().chain(validate_mbp(&p.mbp).warnings.iter()) {
        println!("warning: {w}");
    }
    let mbp_diags = validate_mbp(&p.mbp);
    if !mbp_diags.is_ok() {
        return Err(Failure::new(EXIT_INPUT, format!("invalid MBP: {mbp_diags}")));
    }
    println!(
        "ok: {} states, {} letters, initial {}; MBP with {} states; {} equations after simplification",
        p.automaton.states.len(),
        p.automaton.alphabet.len(),
        p.automaton.initial,
        p.mbp.len(),
        p.system.len()
    );
    Ok(())
}

fn print_report(r: &RunReport) {
    println!("input: {} {} (initial {})", r.input.kind, r.input.name, r.input.initial);
    println!("system ({}):", r.system.class);
    for e in &r.system.equations {
        println!("  {e}");
    }
    if let Some(e) = &r.results.exact {
        println!("exact:   {} (root of {} in [{}, {}], {})", e.decimal, e.poly, e.interval[0], e.interval[1], e.method);
    }
    if let Some(n) = &r.results.numeric {
        let status = if n.converged { "converged" } else { "NOT converged" };
        println!("numeric: {:.12} (residual {:.3e}, {} updates, {status})", n.value, n.residual, n.iterations);
    }
    if let Some(m) = &r.results.montecarlo {
        println!(
            "montecarlo: [{:.6}, {:.6}] (pessimistic {:.6}, optimistic {:.6}, n={}, depth={}, seed={})",
            m.lo, m.hi, m.pessimistic_mean, m.optimistic_mean, m.n, m.depth, m.seed
        );
    }
    for s in &r.skipped {
        println!("skipped {s}");
    }
    for c in &r.checks {
        println!("check {}: {} ({})", c.name, if c.pass { "pass" } else { "FAIL" }, c.detail);
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), Failure> {
    let p = load(&args.input)?;
    let none = !args.exact && !args.numeric;
    let opts = SolveOptions {
        exact: args.exact || none,
        numeric: args.numeric || none,
        montecarlo: args.mc.then_some(McOptions {
            depth: args.mc_args.depth,
            samples: args.mc_args.samples,
            seed: args.mc_args.seed,
        }),
        numeric_config: NumericConfig { tol: args.tol, ..NumericConfig::default() },
    };
    let report = solve(&p, &opts)?;
    if args.json {
        print_json(&report);
    } else {
        print_report(&report);
    }
    if !report.converged() {
        return Err(Failure::new(EXIT_SOLVER, "numeric solver did not converge; best iterate reported"));
    }
    if !report.all_checks_pass() {
        return Err(Failure::new(EXIT_CHECK, "backends disagree"));
    }
    Ok(())
}

fn cmd_export(args: &ExportArgs) -> Result<(), Failure> {
    let p = load(&args.input)?;
    let options = QeOptions {
        bounds: match args.bounds {
            Bounds::Listings => BoundPolicy::Listings,
            Bounds::Uniform => BoundPolicy::Uniform,
        },
        primed_order: match args.primed_order {
            Order::EquationFirst => PrimedOrder::EquationFirst,
            Order::BoundFirst => PrimedOrder::BoundFirst,
        },
    };
    let exact = solve_exact(&p.system).ok();
    let stem = p.input.name.rsplit('/').next().unwrap_or(&p.input.name).trim_end_matches(".gta").to_string();
    let sys = &p.system;
    let files = if args.run {
        let program = configured_runner()
            .ok_or_else(|| Failure::new(EXIT_INPUT, format!("--run needs {RUNNER_ENV} to name the qepcad executable")))?;
        let timeout = Duration::from_secs(args.timeout);
        let mut external = |f: &StageFile| {
            let text = run_qepcad(&program, &f.input, timeout)?;
            ingest_qf_answer(&text, &mut |name: &str| sys.index_of(name))
        };
        export_stages(sys, &stem, exact.as_ref(), &options, Some(&mut external))?
    } else {
        export_stages(sys, &stem, exact.as_ref(), &options, None)?
    };
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", args.out_dir.display())))?;
    let names = |v: usize| sys.name(v).to_string();
    for f in &files {
        let path = args.out_dir.join(&f.file_name);
        std::fs::write(&path, &f.input).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
        println!("{}  answer: {}", path.display(), treeprob::qe::render_conjunction(&f.answer, &names));
    }
    Ok(())
}

fn cmd_estimate(args: &EstimateArgs) -> Result<(), Failure> {
    let p = load(&args.input)?;
    let state = args.state.clone().unwrap_or_else(|| p.start.clone());
    let m = &args.mc_args;
    let est = estimate(&p.mbp, &state, m.depth, m.samples, m.seed).map_err(PipelineError::from)?;
    let (lo, hi) = est.bracket(Z95);
    if args.json {
        print_json(&serde_json::json!({
            "state": state,
            "lo": lo,
            "hi": hi,
            "optimistic_mean": est.optimistic_mean,
            "pessimistic_mean": est.pessimistic_mean,
            "ci_halfwidth": est.ci_halfwidth,
            "n": est.n,
            "depth": est.depth,
            "seed": est.seed,
        }));
    } else {
        println!(
            "{state}: [{lo:.6}, {hi:.6}] pessimistic {:.6} optimistic {:.6} ±{:.6} (n={}, depth={}, seed={})",
            est.pessimistic_mean, est.optimistic_mean, est.ci_halfwidth, est.n, est.depth, est.seed
        );
    }
    Ok(())
}

fn cmd_wik(args: &WikArgs) -> Result<(), Failure> {
    let value = wik_value(args.i, args.k).map_err(|e| Failure::new(EXIT_INPUT, e.to_string()))?;
    let p = prepare_builtin(&Builtin::W(args.i, args.k))?;
    let report = solve(&p, &SolveOptions::default())?;
    let pipeline = report.results.exact.as_ref().map(|e| e.decimal.clone()).unwrap_or_default();
    let agrees = pipeline.parse::<f64>().is_ok_and(|v| v == value as f64);
    let det = (args.k >= 3).then(|| wik_determinant(args.k).map(|d| format_rational(&d))).transpose().map_err(|e| {
        Failure::new(EXIT_SOLVER, e.to_string())
    })?;
    if args.json {
        print_json(&serde_json::json!({
            "i": args.i,
            "k": args.k,
            "value": value,
            "pipeline": pipeline,
            "agrees": agrees,
            "determinant": det,
        }));
    } else {
        println!("W({},{}) = {value}; pipeline {pipeline}", args.i, args.k);
        if let Some(d) = det {
            println!("det A_{} = {d}", args.k);
        }
    }
    if !agrees {
        return Err(Failure::new(EXIT_CHECK, "pipeline disagrees with the closed form"));
    }
    Ok(())
}

fn cmd_reproduce(args: &ReproduceArgs) -> Result<(), Failure> {
    let cfg = ReproduceConfig {
        corpus_dir: args.corpus.clone(),
        numeric: NumericConfig { tol: args.tol, ..NumericConfig::default() },
    };
    let claims = reproduce(&cfg)?;
    if args.json {
        print_json(&claims);
    } else {
        println!("{:<24} {:<6} {:>9}  observed", "claim", "result", "ms");
        for c in &claims {
            println!("{:<24} {:<6} {:>9.1}  {}", c.name, if c.pass { "pass" } else { "FAIL" }, c.ms, c.observed);
        }
    }
    let failed: Vec<&str> = claims.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_CHECK, format!("failed claims: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::ExportQe(a) => cmd_export(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Wik(a) => cmd_wik(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
