use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blockwake::bench::{
    brute_force, compare_plans, csv_bytes, curve_csv, random_orderings, run_experiment, write_atomic, write_report,
    BenchError, ExperimentConfig, LandscapeKind, LandscapeSpec, PlanEntry, SyntheticLandscape, DEFAULT_BUDGET,
    FAST_ORDERINGS, PROTOCOL_ORDERINGS,
};
use blockwake::engine::EngineError;
use blockwake::indicators::IndicatorError;
use blockwake::plan::PlanError;
use blockwake::space::SpaceError;
use blockwake::{
    initial_point, parse_structure_name, run_search, Cache, IndicatorTrace, InitPolicy, ParameterSpace, Point,
    Recombination, SweepPlan, Trace, Variants,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "blockwake", version, about = "Overlapping block coordinate descent toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect structure names and expanded sweep plans
    #[command(subcommand)]
    Plan(PlanCmd),
    /// Single searches
    #[command(subcommand)]
    Search(SearchCmd),
    /// Exhaustive enumeration
    #[command(subcommand)]
    Bench(BenchCmd),
    /// Multi-plan experiments over shared orderings
    #[command(subcommand)]
    Exp(ExpCmd),
    /// Indicator computation from a saved trace
    #[command(subcommand)]
    Indicators(IndicatorsCmd),
}

#[derive(Subcommand, Debug)]
enum PlanCmd {
    /// Print the parsed structure as JSON
    Parse { name: String },
    /// Print the expanded cycles as JSON
    Expand {
        name: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        cycles: usize,
        #[arg(long, default_value = "none")]
        recomb: String,
    },
}

#[derive(Subcommand, Debug)]
enum SearchCmd {
    Run(SearchRun),
}

#[derive(Subcommand, Debug)]
enum BenchCmd {
    Brute(BruteRun),
}

#[derive(Subcommand, Debug)]
enum ExpCmd {
    Run(ExpRun),
}

#[derive(Subcommand, Debug)]
enum IndicatorsCmd {
    Compute(IndicatorsRun),
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Number of parameters
    #[arg(long)]
    m: usize,
    /// Levels per parameter: one integer for all, or a comma-separated list of m
    #[arg(long, default_value = "3")]
    levels: String,
    /// separable | random | trap[:basins=N,noise=X] | conflict[:conflicts=N,coupling=X]
    #[arg(long, default_value = "trap")]
    landscape: String,
    /// Raw-objective bounds for the conflict landscape
    #[arg(long, value_enum, default_value_t = Bounds::Analytic)]
    bounds: Bounds,
    #[arg(long, env = "BLOCKWAKE_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Bounds {
    Analytic,
    Brute,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Init {
    /// All coordinates at level 0
    Fixed,
    Mid,
    Random,
}

#[derive(Args, Debug)]
struct SearchRun {
    #[arg(long)]
    plan: String,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 1)]
    cycles: usize,
    #[arg(long, default_value = "none")]
    recomb: String,
    #[arg(long, value_enum, default_value_t = Init::Mid)]
    init: Init,
    /// Parameter visited at each circular position, comma-separated; identity by default
    #[arg(long)]
    ordering: Option<String>,
    #[arg(long, default_value = "")]
    variants: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BruteRun {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ExpRun {
    /// Manifest with one `name,cycles,recomb` record per line
    #[arg(long)]
    plans: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = PROTOCOL_ORDERINGS)]
    orderings: usize,
    /// Shorthand for the reduced ordering count
    #[arg(long, conflicts_with = "orderings")]
    fast: bool,
    #[arg(long, value_enum, default_value_t = Init::Mid)]
    init: Init,
    #[arg(long, default_value = "")]
    variants: String,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Paired comparison of two manifest entries, 1-based: `i,j`
    #[arg(long)]
    compare: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct IndicatorsRun {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long, default_value = "")]
    variants: String,
    /// Levels per parameter of the traced grid
    #[arg(long, default_value = "3")]
    levels: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl ToString) -> Self {
        Self {
            code,
            kind,
            message: message.to_string(),
        }
    }

    fn config(message: impl ToString) -> Self {
        Self::new(5, "config", message)
    }
}

impl From<PlanError> for Failure {
    fn from(e: PlanError) -> Self {
        Self::new(3, "plan", e)
    }
}

impl From<SpaceError> for Failure {
    fn from(e: SpaceError) -> Self {
        match e {
            SpaceError::NonFinite { .. } | SpaceError::CacheFull { .. } => Self::new(1, "runtime", e),
            _ => Self::config(e),
        }
    }
}

impl From<IndicatorError> for Failure {
    fn from(e: IndicatorError) -> Self {
        match e {
            IndicatorError::BadVariant(_) => Self::config(e),
            _ => Self::new(1, "runtime", e),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::BadTrace(_) => Self::config(e),
            EngineError::InvalidOrdering { .. } => Self::config(e),
            _ => Self::new(1, "runtime", e),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::BudgetExceeded { .. } => Self::new(4, "budget", e),
            BenchError::Plan(p) => p.into(),
            BenchError::Space(s) => s.into(),
            BenchError::Io(_) => Self::new(1, "io", e),
            BenchError::Landscape(_) | BenchError::Manifest(_) => Self::config(e),
        }
    }
}

type Result<T, E = Failure> = std::result::Result<T, E>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            return report(&Failure::new(2, "usage", first));
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(&f),
    }
}

fn report(f: &Failure) -> ExitCode {
    let message = f.message.replace(['\n', '\r'], " ");
    eprintln!("error: code={} kind={} message={}", f.code, f.kind, message);
    ExitCode::from(f.code)
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Plan(PlanCmd::Parse { name }) => {
            let spec = parse_structure_name(&name)?;
            let v = json!({
                "name": spec.to_string(),
                "sizes": spec.sizes(),
                "overlaps": spec.overlaps(),
                "truncated": spec.truncated(),
            });
            println!("{v}");
            Ok(())
        }
        Command::Plan(PlanCmd::Expand { name, m, cycles, recomb }) => {
            let recomb: Recombination = recomb.parse()?;
            let plan = SweepPlan::from_name(&name, m, cycles, recomb)?;
            println!("{}", plan.to_json());
            Ok(())
        }
        Command::Search(SearchCmd::Run(args)) => search_run(args),
        Command::Bench(BenchCmd::Brute(args)) => bench_brute(args),
        Command::Exp(ExpCmd::Run(args)) => exp_run(args),
        Command::Indicators(IndicatorsCmd::Compute(args)) => indicators_compute(args),
    }
}

fn parse_levels(levels: &str, m: usize) -> Result<ParameterSpace> {
    let cards = levels
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::config(format!("levels must be integers: {levels:?}")))?;
    let cards = match cards.as_slice() {
        [c] => vec![*c; m],
        _ if cards.len() == m => cards,
        _ => return Err(Failure::config(format!("{} level counts given for m = {m}", cards.len()))),
    };
    if m == 0 {
        return Err(Failure::config("m must be at least 1"));
    }
    Ok(ParameterSpace::from_cardinalities(&cards)?)
}

fn landscape(grid: &GridArgs, space: &ParameterSpace) -> Result<SyntheticLandscape> {
    let spec: LandscapeSpec = grid.landscape.parse()?;
    let mut l = SyntheticLandscape::new(spec, space, grid.seed)?;
    if grid.bounds == Bounds::Brute && l.spec().kind == LandscapeKind::ConflictPair {
        let b = brute_force::<f64, _>(space, &l, DEFAULT_BUDGET, 1)?;
        if let Some(spec) = b.raw_spec() {
            l.set_objective_spec(spec?)?;
        }
    }
    Ok(l)
}

fn init_policy(init: Init, m: usize) -> InitPolicy {
    match init {
        Init::Fixed => InitPolicy::Fixed(Point::new(vec![0; m])),
        Init::Mid => InitPolicy::MidLevel,
        Init::Random => InitPolicy::SeededRandom,
    }
}

fn init_name(init: Init) -> &'static str {
    match init {
        Init::Fixed => "fixed",
        Init::Mid => "mid",
        Init::Random => "random",
    }
}

fn parse_variants(s: &str) -> Result<Variants> {
    Ok(s.parse::<Variants>()?)
}

fn json_bytes(v: &serde_json::Value) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v).map_err(|e| Failure::new(1, "io", e))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn write_all(dir: &Path, files: &[(&str, Vec<u8>)]) -> Result<()> {
    for (name, bytes) in files {
        write_atomic(&dir.join(name), bytes)?;
    }
    Ok(())
}

fn search_run(args: SearchRun) -> Result<()> {
    let m = args.grid.m;
    let space = parse_levels(&args.grid.levels, m)?;
    let recomb: Recombination = args.recomb.parse()?;
    let plan = SweepPlan::from_name(&args.plan, m, args.cycles, recomb)?;
    let variants = parse_variants(&args.variants)?;
    let ordering: Vec<usize> = match &args.ordering {
        Some(s) => Point::parse_with(s, ',')
            .map_err(|_| Failure::config(format!("ordering must be integers: {s:?}")))?
            .coords()
            .to_vec(),
        None => (0..m).collect(),
    };
    let l = landscape(&args.grid, &space)?;
    let policy = init_policy(args.init, m);
    let init = initial_point(&space, &policy, args.grid.seed)?;

    let mut cache = Cache::new();
    let mut trace: Trace = run_search(&space, &l, &plan, &ordering, &init, &mut cache)?;
    trace.seed = Some(args.grid.seed);
    let ind = IndicatorTrace::from_search(&trace, &space, variants)?;

    let run = json!({
        "plan": plan.name(),
        "m": m,
        "cardinalities": space.cardinalities(),
        "cycles": args.cycles,
        "recomb": recomb.to_string(),
        "landscape": l.spec().to_string(),
        "seed": args.grid.seed,
        "init": init_name(args.init),
        "ordering": trace.ordering,
        "init_point": trace.init.to_string(),
        "init_value": trace.init_value,
        "final_point": trace.final_point().to_string(),
        "final_value": trace.final_value(),
        "iterations": trace.records.len(),
        "evaluations": cache.misses(),
        "cache_hits": cache.hits(),
        "variants": variants.to_string(),
    });
    let rows = &ind.rows;
    let files = [
        ("trace.csv", csv_bytes(|b| trace.write_csv(b))?),
        ("indicators.csv", csv_bytes(|b| ind.write_csv(b))?),
        ("cache.csv", csv_bytes(|b| cache.write_csv(b))?),
        (
            "plot_quality.csv",
            curve_csv("logSQ", rows.iter().map(|r| (r.iter, r.sq_max.map(f64::ln))))?,
        ),
        ("plot_efficiency.csv", curve_csv("logSE", rows.iter().map(|r| (r.iter, r.se_log)))?),
        ("run.json", json_bytes(&run)?),
    ];
    write_all(&args.out, &files)
}

fn bench_brute(args: BruteRun) -> Result<()> {
    if args.bins == 0 {
        return Err(Failure::config("bins must be at least 1"));
    }
    let space = parse_levels(&args.grid.levels, args.grid.m)?;
    let l = landscape(&args.grid, &space)?;
    let b = brute_force::<f64, _>(&space, &l, args.budget, args.bins)?;
    let summary = json!({
        "m": args.grid.m,
        "cardinalities": space.cardinalities(),
        "landscape": l.spec().to_string(),
        "seed": args.grid.seed,
        "evaluations": b.evaluations,
        "best_point": b.best_point.to_string(),
        "best_value": b.best_value,
        "worst_value": b.worst_value,
        "raw_bounds": b.raw_bounds,
    });
    let files = [
        ("brute.json", json_bytes(&summary)?),
        ("hist.csv", csv_bytes(|w| b.histogram.write_csv(w))?),
    ];
    write_all(&args.out, &files)
}

fn parse_compare(s: &str, n: usize) -> Result<(usize, usize)> {
    let bad = || Failure::config(format!("--compare expects two 1-based plan indices i,j: {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b == 0 || a > n || b > n || a == b {
        return Err(bad());
    }
    Ok((a - 1, b - 1))
}

fn exp_run(args: ExpRun) -> Result<()> {
    let m = args.grid.m;
    let space = parse_levels(&args.grid.levels, m)?;
    let text = fs::read_to_string(&args.plans)
        .map_err(|e| Failure::config(format!("{}: {e}", args.plans.display())))?;
    let plans = PlanEntry::parse_manifest(&text)?;
    if plans.is_empty() {
        return Err(Failure::config("plan manifest is empty"));
    }
    for p in &plans {
        SweepPlan::from_name(&p.name, m, p.cycles, p.recombination)?;
    }
    let compare = args.compare.as_deref().map(|s| parse_compare(s, plans.len())).transpose()?;
    let count = if args.fast { FAST_ORDERINGS } else { args.orderings };
    if count == 0 {
        return Err(Failure::config("orderings must be at least 1"));
    }
    if args.bins == 0 || args.jobs == 0 {
        return Err(Failure::config("bins and jobs must be at least 1"));
    }
    let config = ExperimentConfig {
        init: init_policy(args.init, m),
        seed: args.grid.seed,
        variants: parse_variants(&args.variants)?,
        jobs: args.jobs,
        bins: args.bins,
    };
    let l = landscape(&args.grid, &space)?;
    let orderings = random_orderings(m, count, args.grid.seed);
    let report = run_experiment::<f64, _>(&space, &l, &l.spec().to_string(), &plans, &orderings, &config)?;
    let comparison = compare
        .map(|(a, b)| json_bytes(&json!(compare_plans(&report.plans[a], &report.plans[b]))))
        .transpose()?;
    write_report(&args.out, &report)?;
    if let Some(bytes) = comparison {
        write_atomic(&args.out.join("comparison.json"), &bytes)?;
    }
    Ok(())
}

fn indicators_compute(args: IndicatorsRun) -> Result<()> {
    let variants = parse_variants(&args.variants)?;
    let file = fs::File::open(&args.trace)
        .map_err(|e| Failure::config(format!("{}: {e}", args.trace.display())))?;
    let trace = Trace::read_csv(BufReader::new(file))?;
    let space = parse_levels(&args.levels, trace.m())?;
    for r in &trace.records {
        space.validate(&r.point)?;
    }
    let ind = IndicatorTrace::from_search(&trace, &space, variants)?;
    write_atomic(&args.out, &csv_bytes(|b| ind.write_csv(b))?)?;
    Ok(())
}
