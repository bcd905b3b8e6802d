use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddsg::dalvks::{
    dalvks_accel_with, dalvks_lp_full_with, dalvks_peel, dalvks_prop2, DemandVector, LpFullOptions,
};
use ddsg::ddsp::{ddsp_approx, DdspOutcome, DdspParams, GammaSolver, DEFAULT_LP_SIZE_LIMIT};
use ddsg::dense::{dalks_lp, dalks_peel, dsp_exact, dsp_peel, greedy_plus_plus};
use ddsg::error::Error;
use ddsg::generators::{generate, ColorMode, GenSpec, GraphKind};
use ddsg::graph::{ColoredGraph, Fraction, Subset};
use ddsg::harness::{
    ratio_instances, run_scaling_suite, run_planted_suite, run_ratio_suite, write_scaling_csv,
    write_planted_csv, write_ratio_csv, ScalingConfig, PlantedConfig, RatioSuiteConfig,
};
use ddsg::io::{read_graph, write_colors, write_combined, write_edges};
use ddsg::lp::{LpEngine, SolverError};
use ddsg::oracle::{brute_force_dalvks, milp_dalvks};
use ddsg::report::{labeled_counts, reference_density, Params, Problem, ResultStats, SolveReport, Status};

#[derive(Parser)]
#[command(name = "ddsg", version, about = "Densest subgraphs under color diversity constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Densest subgraph, no color constraint.
    Dsp {
        #[command(flatten)]
        io: SolveIo,
        #[arg(long, value_enum, default_value_t = DspAlgo::Peel)]
        algo: DspAlgo,
        /// Greedy++ rounds.
        #[arg(long, default_value_t = 5)]
        iters: usize,
    },
    /// Densest subgraph whose largest color holds at most an alpha share.
    Ddsp {
        #[command(flatten)]
        io: SolveIo,
        /// Exact fraction P/Q.
        #[arg(long, value_parser = parse_alpha)]
        alpha: Fraction,
        /// Densest at-least-k routine; `auto` picks lp for small graphs.
        #[arg(long, value_enum, default_value_t = Gamma::Auto)]
        gamma: Gamma,
    },
    /// Densest subgraph with at least k nodes.
    Dalks {
        #[command(flatten)]
        io: SolveIo,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = DalksAlgo::Lp)]
        algo: DalksAlgo,
    },
    /// Densest subgraph with per-color lower bounds.
    Dalvks {
        #[command(flatten)]
        io: SolveIo,
        /// Comma-separated `label=count` pairs; unlisted colors demand 0.
        #[arg(long, value_parser = parse_demand)]
        demand: Demand,
        #[arg(long, value_enum, default_value_t = DalvksAlgo::Accel)]
        algo: DalvksAlgo,
        /// Give up after this many LP solves.
        #[arg(long)]
        lp_budget: Option<usize>,
    },
    /// Generate a random colored graph.
    Gen(GenArgs),
    /// Run a benchmark suite and write CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveIo {
    /// Edge list, or a combined file with `@color` lines.
    #[arg(long)]
    graph: PathBuf,
    /// Color list; omit when the graph file is combined.
    #[arg(long)]
    colors: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write every LP and MILP model to this directory.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DspAlgo {
    Peel,
    Gpp,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum Gamma {
    Lp,
    Peel,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum DalksAlgo {
    Peel,
    Lp,
}

#[derive(Clone, Copy, ValueEnum)]
enum DalvksAlgo {
    Lp,
    Peel,
    Accel,
    Prop2,
    Milp,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Er,
    Planted,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorModeArg {
    Even,
    Cluster,
    Random,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Node count (er).
    #[arg(long, default_value_t = 18)]
    n: usize,
    /// Edge probability (er); defaults to 5/n.
    #[arg(long)]
    p: Option<f64>,
    /// Comma-separated cluster sizes (planted).
    #[arg(long, value_delimiter = ',', default_values_t = [40, 40, 40, 40, 40])]
    sizes: Vec<usize>,
    /// Comma-separated intra-cluster probabilities (planted).
    #[arg(long, value_delimiter = ',', default_values_t = [0.8, 0.2, 0.2, 0.2, 0.2])]
    p_intra: Vec<f64>,
    /// Probability between clusters (planted).
    #[arg(long, default_value_t = 0.02)]
    p_inter: f64,
    /// Coloring; defaults to `even` for er and `cluster` for planted.
    #[arg(long, value_enum)]
    color_mode: Option<ColorModeArg>,
    /// Number of colors for `even` and `random`.
    #[arg(long, default_value_t = 2)]
    colors: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Writes PREFIX.edges and PREFIX.colors; a combined file goes to stdout
    /// otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Sparse random graphs of growing size and color count.
    #[value(alias = "appendixC")]
    Scaling,
    Ratio,
    Amazonlike,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seeds per cell (scaling, amazonlike) or instance count (ratio).
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    /// LP solves allowed per scaling instance.
    #[arg(long, default_value_t = 200)]
    lp_budget: usize,
    /// Node counts for scaling.
    #[arg(long, value_delimiter = ',', default_values_t = [18, 54, 90, 126])]
    n: Vec<usize>,
    /// Color counts for scaling.
    #[arg(long = "colors", value_delimiter = ',', default_values_t = [2, 3, 6])]
    color_counts: Vec<usize>,
    /// Largest instance of the ratio suite.
    #[arg(long, default_value_t = 14)]
    max_n: usize,
}

#[derive(Clone, Debug)]
struct Demand(Vec<(String, usize)>);

fn parse_alpha(text: &str) -> Result<Fraction, String> {
    let (p, q) = text
        .split_once('/')
        .ok_or_else(|| format!("`{text}` is not an exact fraction P/Q"))?;
    let p: u64 = p.trim().parse().map_err(|_| format!("bad numerator in `{text}`"))?;
    let q: u64 = q.trim().parse().map_err(|_| format!("bad denominator in `{text}`"))?;
    if q == 0 {
        return Err("zero denominator".into());
    }
    Ok(Fraction::new(p, q))
}

fn parse_demand(text: &str) -> Result<Demand, String> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (label, count) = pair
                .split_once('=')
                .ok_or_else(|| format!("`{pair}` is not label=count"))?;
            let count = count.trim().parse().map_err(|_| format!("bad count in `{pair}`"))?;
            Ok((label.trim().to_string(), count))
        })
        .collect::<Result<_, _>>()
        .map(Demand)
}

/// Exit code for unparseable arguments.
const USAGE: u8 = 1;

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }

    fn solver(message: impl Into<String>) -> Self {
        Failure { code: 4, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::InfeasibleDemand { .. } | Error::InfeasibleExtension { .. } => Failure::infeasible(message),
            Error::TooLarge { .. } => Failure::solver(message),
            Error::Solver(SolverError::UnknownBackend(_)) => Failure::invalid(message),
            Error::Solver(_) => Failure::solver(message),
            Error::InvalidGraph(_)
            | Error::Parse { .. }
            | Error::EmptySubset
            | Error::InvalidParameter(_)
            | Error::Precondition(_) => Failure::invalid(message),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        Error::from(e).into()
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn engine(dump: Option<&Path>) -> CliResult<LpEngine> {
    let lp = LpEngine::from_env()?;
    Ok(match dump {
        Some(dir) => lp.with_dump_dir(dir),
        None => lp,
    })
}

fn load(io: &SolveIo) -> CliResult<ColoredGraph> {
    let g = read_graph(&io.graph, io.colors.as_deref())?;
    if g.node_count() == 0 {
        return Err(Failure::invalid("graph has no nodes"));
    }
    Ok(g)
}

fn emit_text(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::invalid(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Describes why a set breaks the problem's constraint, if it does.
type Check = Box<dyn Fn(&Subset) -> Option<String>>;

/// A finished solve: the report plus what the output must satisfy.
struct Solved {
    report: SolveReport,
    subset: Option<Subset>,
    check: Check,
}

fn finish(solved: Solved, g: &ColoredGraph, lp: &LpEngine, start: Instant, out: Option<&Path>) -> CliResult {
    let Solved {
        mut report,
        subset,
        check,
    } = solved;
    report.lp_solve_count = lp.solve_count();
    if let Some(s) = &subset {
        if let Some(problem) = check(s) {
            return Err(Failure::solver(format!("solver returned an infeasible set: {problem}")));
        }
        // The reference solve uses its own engine so it is not counted.
        let reference = reference_density(g, &LpEngine::from_env()?, DEFAULT_LP_SIZE_LIMIT)?;
        report.result = Some(ResultStats::new(g, s, reference));
    } else {
        report.status = Status::Infeasible;
    }
    report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut text = report.to_json();
    text.push('\n');
    emit_text(out, &text)?;
    if subset.is_none() {
        return Err(Failure::infeasible("no feasible set found"));
    }
    Ok(())
}

fn no_check() -> Check {
    Box::new(|_| None)
}

fn run_dsp(g: &ColoredGraph, algo: DspAlgo, iters: usize, lp: &LpEngine) -> CliResult<Solved> {
    let (name, s) = match algo {
        DspAlgo::Peel => ("dsp_peel", dsp_peel(g)?),
        DspAlgo::Gpp => ("greedy_plus_plus", greedy_plus_plus(g, iters)?),
        DspAlgo::Exact => ("dsp_exact", dsp_exact(g, lp)?),
    };
    let params = Params {
        iterations: matches!(algo, DspAlgo::Gpp).then_some(iters),
        ..Params::default()
    };
    let mut report = SolveReport::new(Problem::Dsp, name, g, params);
    report.status = Status::Solved;
    Ok(Solved {
        report,
        subset: Some(s),
        check: no_check(),
    })
}

fn run_ddsp(g: &ColoredGraph, alpha: Fraction, gamma: Gamma, lp: &LpEngine) -> CliResult<Solved> {
    let solver = match gamma {
        Gamma::Lp => GammaSolver::DalksLp,
        Gamma::Peel => GammaSolver::DalksPeel,
        Gamma::Auto => GammaSolver::auto(g, DEFAULT_LP_SIZE_LIMIT),
    };
    let params = DdspParams::new(g, alpha, solver)?;
    let outcome = ddsp_approx(g, params, lp)?;
    let mut report = SolveReport::new(
        Problem::Ddsp,
        "ddsp_approx",
        g,
        Params {
            alpha: Some(alpha.to_string()),
            gamma_solver: Some(solver),
            ..Params::default()
        },
    );
    report.status = match outcome {
        DdspOutcome::Solved(_) => Status::Solved,
        DdspOutcome::Fallback(_) => Status::Fallback,
        DdspOutcome::Infeasible => Status::Infeasible,
    };
    Ok(Solved {
        report,
        subset: outcome.into_subset(),
        check: Box::new(move |s| {
            (!s.diversity().satisfies(alpha)).then(|| format!("alpha(S) = {} > {alpha}", s.diversity().alpha()))
        }),
    })
}

fn run_dalks(g: &ColoredGraph, k: usize, algo: DalksAlgo, lp: &LpEngine) -> CliResult<Solved> {
    let (name, s) = match algo {
        DalksAlgo::Peel => ("dalks_peel", dalks_peel(g, k)?),
        DalksAlgo::Lp => ("dalks_lp", dalks_lp(g, k, lp)?),
    };
    let mut report = SolveReport::new(
        Problem::Dalks,
        name,
        g,
        Params {
            k: Some(k),
            ..Params::default()
        },
    );
    report.status = Status::Solved;
    Ok(Solved {
        report,
        subset: Some(s),
        check: Box::new(move |s| (s.size() < k).then(|| format!("|S| = {} < {k}", s.size()))),
    })
}

fn run_dalvks(
    g: &ColoredGraph,
    demand: &Demand,
    algo: DalvksAlgo,
    lp_budget: Option<usize>,
    lp: &LpEngine,
) -> CliResult<Solved> {
    let k = DemandVector::from_labels(g, &demand.0)?;
    let (name, s) = match algo {
        DalvksAlgo::Lp => {
            let options = LpFullOptions {
                lp_budget,
                ..LpFullOptions::default()
            };
            ("dalvks_lp_full", Some(dalvks_lp_full_with(g, &k, lp, options)?.best))
        }
        DalvksAlgo::Peel => ("dalvks_peel", Some(dalvks_peel(g, &k)?)),
        DalvksAlgo::Accel => ("dalvks_accel", Some(dalvks_accel_with(g, &k, lp, lp_budget)?.best)),
        DalvksAlgo::Prop2 => ("dalvks_prop2", Some(dalvks_prop2(g, &k, lp)?)),
        DalvksAlgo::Milp => ("milp_dalvks", milp_dalvks(g, &k, lp)?.witness),
        DalvksAlgo::Brute => ("brute_force_dalvks", brute_force_dalvks(g, k.as_slice())?.witness),
    };
    let mut report = SolveReport::new(
        Problem::Dalvks,
        name,
        g,
        Params {
            demand: Some(labeled_counts(g, k.as_slice())),
            ..Params::default()
        },
    );
    report.status = Status::Solved;
    Ok(Solved {
        report,
        subset: s,
        check: Box::new(move |s| (!k.is_satisfied_by(s)).then(|| "a color demand is not met".to_string())),
    })
}

fn run_gen(args: &GenArgs) -> CliResult {
    let kind = match args.kind {
        GenKind::Er => GraphKind::ErdosRenyi {
            n: args.n,
            p: args.p.unwrap_or(if args.n == 0 { 0.0 } else { (5.0 / args.n as f64).min(1.0) }),
        },
        GenKind::Planted => GraphKind::PlantedClusters {
            cluster_sizes: args.sizes.clone(),
            p_intra: args.p_intra.clone(),
            p_inter: args.p_inter,
        },
    };
    let mode = args.color_mode.unwrap_or(match args.kind {
        GenKind::Er => ColorModeArg::Even,
        GenKind::Planted => ColorModeArg::Cluster,
    });
    let colors = match mode {
        ColorModeArg::Even => ColorMode::EvenSplit(args.colors),
        ColorModeArg::Cluster => ColorMode::PerCluster,
        ColorModeArg::Random => ColorMode::UniformRandom(args.colors),
    };
    let g = generate(&GenSpec {
        kind,
        colors,
        seed: args.seed,
    })?;
    match &args.out {
        Some(prefix) => {
            let with_ext = |ext: &str| {
                let mut p = prefix.clone().into_os_string();
                p.push(ext);
                PathBuf::from(p)
            };
            emit_text(Some(&with_ext(".edges")), &write_edges(&g))?;
            emit_text(Some(&with_ext(".colors")), &write_colors(&g))
        }
        None => emit_text(None, &write_combined(&g)),
    }
}

fn run_bench(args: &BenchArgs, lp: &LpEngine) -> CliResult {
    let mut buf = Vec::new();
    match args.suite {
        Suite::Scaling => {
            let config = ScalingConfig {
                node_counts: args.n.clone(),
                color_counts: args.color_counts.clone(),
                seeds: args.seeds.unwrap_or(10),
                base_seed: args.base_seed,
                lp_budget: Some(args.lp_budget),
            };
            if config.node_counts.contains(&0) || config.color_counts.contains(&0) {
                return Err(Failure::invalid("node and color counts must be positive"));
            }
            write_scaling_csv(&mut buf, &run_scaling_suite(&config, lp))?;
        }
        Suite::Ratio => {
            let config = RatioSuiteConfig {
                instances: args.seeds.unwrap_or(100),
                max_nodes: args.max_n,
                min_nodes: RatioSuiteConfig::default().min_nodes.min(args.max_n),
                seed: args.base_seed,
                ..RatioSuiteConfig::default()
            };
            if config.max_nodes > ddsg::oracle::BRUTE_FORCE_LIMIT {
                return Err(Failure::invalid(format!(
                    "--max-n {} exceeds the oracle limit {}",
                    config.max_nodes,
                    ddsg::oracle::BRUTE_FORCE_LIMIT
                )));
            }
            let instances = ratio_instances(&config)?;
            write_ratio_csv(&mut buf, &run_ratio_suite(&instances, lp))?;
        }
        Suite::Amazonlike => {
            let config = PlantedConfig {
                seeds: args.seeds.unwrap_or(10),
                base_seed: args.base_seed,
                ..PlantedConfig::default()
            };
            write_planted_csv(&mut buf, &run_planted_suite(&config, lp))?;
        }
    }
    emit_text(args.out.as_deref(), &String::from_utf8(buf).expect("CSV is UTF-8"))
}

fn run(cli: Cli) -> CliResult {
    let start = Instant::now();
    match cli.command {
        Command::Gen(args) => run_gen(&args),
        Command::Bench(args) => run_bench(&args, &engine(None)?),
        Command::Dsp { io, algo, iters } => {
            let (g, lp) = (load(&io)?, engine(io.dump_lp.as_deref())?);
            finish(run_dsp(&g, algo, iters, &lp)?, &g, &lp, start, io.out.as_deref())
        }
        Command::Ddsp { io, alpha, gamma } => {
            let (g, lp) = (load(&io)?, engine(io.dump_lp.as_deref())?);
            finish(run_ddsp(&g, alpha, gamma, &lp)?, &g, &lp, start, io.out.as_deref())
        }
        Command::Dalks { io, k, algo } => {
            let (g, lp) = (load(&io)?, engine(io.dump_lp.as_deref())?);
            finish(run_dalks(&g, k, algo, &lp)?, &g, &lp, start, io.out.as_deref())
        }
        Command::Dalvks {
            io,
            demand,
            algo,
            lp_budget,
        } => {
            let (g, lp) = (load(&io)?, engine(io.dump_lp.as_deref())?);
            finish(run_dalvks(&g, &demand, algo, lp_budget, &lp)?, &g, &lp, start, io.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(USAGE);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
