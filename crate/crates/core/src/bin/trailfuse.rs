//! Command-line front end: decompose, solve, bench, validate, convert.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use trailfuse::bench::BenchSettings;
use trailfuse::io;
use trailfuse::{
    random_sparse_graph, run_trials, solve_gfl, solve_with_trails, spg_solve, summarize, trail_halving_experiment,
    trail_stats, validate_trail_partition, BenchArm, BlobSpec, DecompositionStrategy, Graph, ProblemInstance,
    SolverConfig, SolverError, SpgConfig, StrategyKind,
};

#[derive(Parser, Debug)]
#[command(name = "trailfuse", version, about = "Graph-fused lasso by trail decomposition and ADMM")]
struct Cli {
    /// Worker threads for trail-parallel updates and parallel trials [default: all cores]
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split a graph's edges into trails
    Decompose(DecomposeArgs),
    /// Solve a graph-fused lasso problem
    Solve(SolveArgs),
    /// Run seeded benchmark trials
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Check that a trail file partitions a graph's edges
    Validate(ValidateArgs),
    /// Convert between Matrix Market (.mtx) and edge-list graph files
    Convert(ConvertArgs),
}

#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false)]
struct GraphSource {
    /// Graph file: Matrix Market if it ends in .mtx, edge list otherwise
    #[arg(long, group = "source")]
    graph: Option<PathBuf>,
    /// Use an n x n grid graph instead of a file
    #[arg(long, group = "source", value_name = "N")]
    grid: Option<usize>,
}

impl GraphSource {
    fn load(&self) -> Result<(Graph, Option<usize>), Failure> {
        match (&self.graph, self.grid) {
            (Some(p), None) => Ok((io::read_graph(p).map_err(|e| Failure::data(p, e))?, None)),
            (None, Some(n)) if n >= 1 => Ok((trailfuse::grid_graph(n, n), Some(n))),
            (None, Some(_)) => Err(Failure::Usage("--grid must be at least 1".into())),
            _ => unreachable!("clap enforces exactly one source"),
        }
    }
}

#[derive(Args, Debug)]
struct StrategyArgs {
    /// pseudotour, medians, random, edgewise or rowscols (rowscols needs --grid)
    #[arg(long, default_value = "pseudotour")]
    strategy: String,
    /// Candidate odd-vertex pairs per step for medians/random
    #[arg(long, default_value_t = trailfuse::decompose::DEFAULT_PAIR_SAMPLE_CAP)]
    pair_cap: usize,
    /// Random seed; a random one is drawn and logged when omitted
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    strategy: StrategyArgs,
    /// Output trail file
    #[arg(long)]
    out: PathBuf,
    /// Also write the trail-length histogram as CSV
    #[arg(long, value_name = "CSV")]
    emit_histogram: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Admm,
    Spg,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    strategy: StrategyArgs,
    /// Observations, one value per line
    #[arg(long)]
    y: PathBuf,
    /// Fusion penalty
    #[arg(long)]
    lambda: f64,
    /// Precomputed trail file (overrides --strategy)
    #[arg(long)]
    trails: Option<PathBuf>,
    /// Solver: trail ADMM or the smoothed proximal-gradient baseline
    #[arg(long, value_enum, default_value = "admm")]
    method: Method,
    /// Penalty dampening for trail-length adaptive penalties (0 = uniform)
    #[arg(long, default_value_t = 0.0)]
    c: f64,
    /// Convergence tolerance
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Iteration limit
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
    /// Initial ADMM penalty
    #[arg(long, default_value_t = 1.0)]
    alpha0: f64,
    /// Keep the ADMM penalty fixed
    #[arg(long)]
    no_vary_penalty: bool,
    /// Smoothing accuracy for --method spg
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    /// Solution output, one value per line
    #[arg(long)]
    out_beta: Option<PathBuf>,
    /// Per-iteration diagnostics CSV (ADMM only)
    #[arg(long)]
    out_diag: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct BenchCommon {
    /// Trials per strategy
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Comma-separated strategy names
    #[arg(long, default_value = "pseudotour,medians,edgewise")]
    strategies: String,
    /// Comma-separated penalty dampening values; every strategy runs with each
    #[arg(long, default_value = "0")]
    c: String,
    /// Fusion penalty
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Convergence tolerance
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Iteration limit per solve
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
    /// Master seed; a random one is drawn and logged when omitted
    #[arg(long)]
    seed: Option<u64>,
    /// Number of constant blobs in the true signal
    #[arg(long, default_value_t = 4)]
    blobs: usize,
    /// Fraction of the vertices in each blob
    #[arg(long, default_value_t = 0.05)]
    blob_fraction: f64,
    /// Standard deviation of the Gaussian noise
    #[arg(long, default_value_t = 1.0)]
    noise_sd: f64,
    /// Results CSV (graph,strategy,trial,steps,seconds,objective,converged)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trail-length histogram CSV of each strategy's decomposition
    #[arg(long, value_name = "CSV")]
    emit_histogram: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum BenchCommand {
    /// n x n grid graph
    Grid {
        /// Grid side length
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: BenchCommon,
    },
    /// Random connected sparse graph
    Random {
        /// Vertex count
        #[arg(long)]
        n: usize,
        /// Fraction of absent vertex pairs
        #[arg(long, default_value_t = 0.998)]
        sparsity: f64,
        #[command(flatten)]
        common: BenchCommon,
    },
    /// Graph read from a file
    File {
        /// Graph file: Matrix Market if it ends in .mtx, edge list otherwise
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        common: BenchCommon,
    },
    /// Rows+cols trails on an n x n grid, halved repeatedly
    Halving {
        /// Grid side length
        #[arg(long)]
        n: usize,
        /// Number of halvings after the rows+cols level
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[command(flatten)]
        common: BenchCommon,
    },
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Trail file to check
    #[arg(long)]
    trails: PathBuf,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    /// Input graph (.mtx or edge list)
    #[arg(long)]
    input: PathBuf,
    /// Output graph; format chosen by extension
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn data(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure::Data(format!("{}: {e}", path.display()))
    }
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        eprintln!("seed: {s}");
        s
    })
}

fn strategy(args: &StrategyArgs, grid: Option<usize>) -> Result<DecompositionStrategy, Failure> {
    let kind = parse_kind(&args.strategy, grid)?;
    let mut s = DecompositionStrategy::new(kind, seed_or_random(args.seed));
    s.pair_sample_cap = args.pair_cap;
    Ok(s)
}

fn parse_kind(name: &str, grid: Option<usize>) -> Result<StrategyKind, Failure> {
    let kind: StrategyKind = name.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
    match (kind, grid) {
        (StrategyKind::GridRowsCols { .. }, Some(n)) => Ok(kind.with_grid(n, n)),
        (StrategyKind::GridRowsCols { .. }, None) => Err(Failure::Usage("strategy rowscols needs a grid graph".into())),
        _ => Ok(kind),
    }
}

fn solver_error(e: SolverError) -> Failure {
    match e {
        SolverError::DimensionMismatch { .. } | SolverError::InvalidConfig(_) => Failure::Usage(e.to_string()),
        e => Failure::Data(e.to_string()),
    }
}

fn decompose(args: DecomposeArgs) -> Result<(), Failure> {
    let (g, grid) = args.source.load()?;
    let s = strategy(&args.strategy, grid)?;
    let ts = s.decompose(&g).map_err(|e| Failure::Data(e.to_string()))?;
    io::write_trails(&args.out, &ts).map_err(|e| Failure::data(&args.out, e))?;
    if let Some(h) = &args.emit_histogram {
        io::write_histogram_csv(h, &[(s.kind.name().to_string(), &ts)]).map_err(|e| Failure::data(h, e))?;
    }
    let st = trail_stats(&ts);
    eprintln!(
        "{} trails, lengths min {} median {} mean {:.2} max {}",
        st.count, st.min, st.median, st.mean, st.max
    );
    Ok(())
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let (g, grid) = args.source.load()?;
    let y = io::read_vector_csv(&args.y).map_err(|e| Failure::data(&args.y, e))?;
    if y.len() != g.n_vertices() {
        return Err(Failure::Usage(format!(
            "dimension mismatch: {} has {} values, graph has {} vertices",
            args.y.display(),
            y.len(),
            g.n_vertices()
        )));
    }
    let beta = match args.method {
        Method::Spg => {
            let cfg = SpgConfig { max_iters: args.max_steps, ..SpgConfig::default() };
            let r = spg_solve(&g, &y, args.lambda, args.epsilon, &cfg).map_err(|e| Failure::Usage(e.to_string()))?;
            eprintln!(
                "spg: {} iterations, objective {:.10e}, converged {}",
                r.iterations, r.objective, r.converged
            );
            if !r.converged {
                write_beta(&args.out_beta, &r.beta)?;
                return Err(Failure::Data("spg did not converge".into()));
            }
            r.beta
        }
        Method::Admm => {
            let config = SolverConfig {
                tol: args.tol,
                max_iters: args.max_steps,
                alpha0: args.alpha0,
                vary_penalty: !args.no_vary_penalty,
                accel_c: args.c,
                record_history: args.out_diag.is_some(),
                ..SolverConfig::default()
            };
            let problem = ProblemInstance::squared(y, args.lambda);
            let report = match &args.trails {
                Some(p) => {
                    let ts = io::read_trails(p, g.n_vertices()).map_err(|e| Failure::data(p, e))?;
                    let check = validate_trail_partition(&g, &ts);
                    if !check.is_valid() {
                        return Err(Failure::data(p, "trails do not partition the graph's edges"));
                    }
                    let mut r = solve_with_trails(&ts, &problem, &config).map_err(solver_error)?;
                    r.objective = trailfuse::gfl_objective(&g, &problem.y, &r.beta, problem.lambda, &problem.loss);
                    r
                }
                None => {
                    let s = strategy(&args.strategy, grid)?;
                    solve_gfl(&g, &problem, &s, &config).map_err(solver_error)?
                }
            };
            eprintln!(
                "admm: {} steps, objective {:.10e}, converged {}, {:.3}s",
                report.steps, report.objective, report.converged, report.seconds
            );
            if let Some(p) = &args.out_diag {
                io::write_diagnostics_csv(p, &report.history).map_err(|e| Failure::data(p, e))?;
            }
            if !report.converged {
                write_beta(&args.out_beta, &report.beta)?;
                return Err(Failure::Data(format!("no convergence within {} steps", report.steps)));
            }
            report.beta
        }
    };
    write_beta(&args.out_beta, &beta)
}

fn write_beta(out: &Option<PathBuf>, beta: &[f64]) -> Result<(), Failure> {
    match out {
        Some(p) => io::write_vector_csv(p, beta).map_err(|e| Failure::data(p, e)),
        None => {
            print!("{}", io::format_vector_csv(beta));
            Ok(())
        }
    }
}

fn settings(c: &BenchCommon) -> BenchSettings {
    BenchSettings {
        n_trials: c.trials,
        lambda: c.lambda,
        master_seed: seed_or_random(c.seed),
        blobs: BlobSpec { n_blobs: c.blobs, blob_fraction: c.blob_fraction, noise_sd: c.noise_sd, ..BlobSpec::default() },
        solver: SolverConfig { tol: c.tol, max_iters: c.max_steps, record_history: false, ..SolverConfig::default() },
    }
}

fn arms(c: &BenchCommon, grid: Option<usize>, seed: u64) -> Result<Vec<BenchArm>, Failure> {
    let cs: Vec<f64> = c
        .c
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("bad --c value {s:?}"))))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for name in c.strategies.split(',').filter(|s| !s.trim().is_empty()) {
        let kind = parse_kind(name, grid)?;
        for &cv in &cs {
            let arm = BenchArm::new(DecompositionStrategy::new(kind, seed));
            out.push(if cs.len() > 1 { arm.with_c(cv) } else { BenchArm { accel_c: cv, ..arm } });
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("no strategies given".into()));
    }
    Ok(out)
}

fn bench_graph(g: &Graph, name: &str, grid: Option<usize>, common: &BenchCommon) -> Result<(), Failure> {
    let settings = settings(common);
    let arms = arms(common, grid, settings.master_seed)?;
    if let Some(h) = &common.emit_histogram {
        let sets: Vec<(String, trailfuse::TrailSet)> = arms
            .iter()
            .map(|a| a.strategy.decompose(g).map(|ts| (a.label.clone(), ts)))
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::Data(e.to_string()))?;
        let refs: Vec<(String, &trailfuse::TrailSet)> = sets.iter().map(|(n, t)| (n.clone(), t)).collect();
        io::write_histogram_csv(h, &refs).map_err(|e| Failure::data(h, e))?;
    }
    let results = run_trials(g, name, &arms, &settings);
    for r in results.iter().filter_map(|r| r.error.as_ref().map(|e| (r, e))) {
        eprintln!("trial {} {}: {}", r.0.trial, r.0.strategy, r.1);
    }
    println!("strategy,trials,converged,mean_steps,std_error,mean_seconds");
    for s in summarize(&arms, &results) {
        println!(
            "{},{},{},{:.3},{:.3},{:.4}",
            s.label, s.trials, s.converged, s.mean_steps, s.std_error, s.mean_seconds
        );
    }
    if let Some(p) = &common.out {
        io::write_results_csv(p, &results).map_err(|e| Failure::data(p, e))?;
    }
    if results.iter().any(|r| !r.converged) {
        return Err(Failure::Data("some trials failed or did not converge".into()));
    }
    Ok(())
}

fn bench(cmd: BenchCommand) -> Result<(), Failure> {
    match cmd {
        BenchCommand::Grid { n, common } => {
            let g = trailfuse::grid_graph(n, n);
            bench_graph(&g, &format!("grid{n}x{n}"), Some(n), &common)
        }
        BenchCommand::Random { n, sparsity, common } => {
            let seed = seed_or_random(common.seed);
            let g = random_sparse_graph(n, sparsity, seed).map_err(|e| Failure::Usage(e.to_string()))?;
            let common = BenchCommon { seed: Some(seed), ..common };
            bench_graph(&g, &format!("random{n}"), None, &common)
        }
        BenchCommand::File { graph, common } => {
            let g = io::read_graph(&graph).map_err(|e| Failure::data(&graph, e))?;
            let name = graph.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            bench_graph(&g, &name, None, &common)
        }
        BenchCommand::Halving { n, levels, common } => {
            let settings = settings(&common);
            let table = trail_halving_experiment(n, n, levels, &settings).map_err(|e| Failure::Data(e.to_string()))?;
            let mut csv = String::from("level,trails,trial,steps\n");
            println!("level,trails,mean_steps,std_error");
            for l in &table {
                println!("{},{},{:.3},{:.3}", l.level, l.n_trails, l.mean_steps, l.std_error);
                for (t, s) in l.steps.iter().enumerate() {
                    csv.push_str(&format!("{},{},{},{}\n", l.level, l.n_trails, t, s));
                }
            }
            if let Some(p) = &common.out {
                std::fs::write(p, csv).map_err(|e| Failure::data(p, e))?;
            }
            Ok(())
        }
    }
}

fn validate(args: ValidateArgs) -> Result<(), Failure> {
    let (g, _) = args.source.load()?;
    let ts = io::read_trails(&args.trails, g.n_vertices()).map_err(|e| Failure::data(&args.trails, e))?;
    let report = validate_trail_partition(&g, &ts);
    if report.is_valid() {
        println!("OK");
        Ok(())
    } else {
        for v in &report.violations {
            println!("{v:?}");
        }
        Err(Failure::Data(format!(
            "{}: {} unused and {} reused edges",
            args.trails.display(),
            report.unused_edges(),
            report.reused_edges()
        )))
    }
}

fn convert(args: ConvertArgs) -> Result<(), Failure> {
    let g = io::read_graph(&args.input).map_err(|e| Failure::data(&args.input, e))?;
    let to_mtx = args.output.extension().is_some_and(|e| e.eq_ignore_ascii_case("mtx"));
    let written = if to_mtx {
        io::write_matrix_market_adjacency(&args.output, &g)
    } else {
        io::write_edge_list(&args.output, &g)
    };
    written.map_err(|e| Failure::data(&args.output, e))?;
    eprintln!("{} vertices, {} edges", g.n_vertices(), g.n_edges());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool is set once");
    }
    let outcome = match cli.command {
        Command::Decompose(a) => decompose(a),
        Command::Solve(a) => solve(a),
        Command::Bench(b) => bench(b),
        Command::Validate(a) => validate(a),
        Command::Convert(a) => convert(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
