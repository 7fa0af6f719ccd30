use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use chigf::canon::LatticeGraph;
use chigf::certify::{self, CertifyConfig, DualWitness, DEFAULT_EPSILON};
use chigf::congr::{build_constraints, congruence_classes, spanning_pairs};
use chigf::io::{ColouringFile, GraphFile, G27_COLOURING_TXT, G27_TXT, M7_TXT};
use chigf::lp::{
    self, Backend, Mode, NumericConfig, Solution, Tolerances, DEFAULT_EXACT_CAP,
    EXTERNAL_SOLVER_ENV,
};
use chigf::search::{
    self, GreedyConfig, Scorer, SearchConfig, SearchState, StopConditions, DEFAULT_BEAM_WIDTH,
    DEFAULT_GREEDY_THRESHOLD, DEFAULT_TIE_CAP, DEFAULT_VALUE_TOLERANCE,
};
use chigf::udgraph::{
    build_graph, count_independent_sets, cube_colouring, enumerate_independent_sets, hall_ratio,
    independence_number, independence_ratio, UnitGraph, DEFAULT_CUBE_CAP, DEFAULT_HALL_CAP,
};
use chigf::Rational;

/// Fractional and geometric fractional chromatic numbers of unit-distance
/// graphs in the Moser lattice.
///
/// Graph arguments are vertex files (`a b c d` per line) or one of the
/// bundled graphs `@m7` and `@g27`.
#[derive(Parser, Debug)]
#[command(name = "chigf", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graph summary.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Independent sets.
    #[command(subcommand)]
    Indep(IndepCmd),
    /// Independence number and ratio.
    Alpha { graph: String },
    /// Hall ratio.
    Hall {
        graph: String,
        #[arg(long, default_value_t = DEFAULT_HALL_CAP)]
        cap: usize,
    },
    /// Congruence classes and constraint rows.
    #[command(subcommand)]
    Congr(CongrCmd),
    /// Linear programs.
    #[command(subcommand)]
    Lp(LpCmd),
    /// Integer colourings.
    #[command(subcommand)]
    Colouring(ColouringCmd),
    /// Fractional colouring from a maximum independent set of a cube.
    CubeColour {
        graph: String,
        #[arg(long, default_value_t = 0)]
        half_width: i64,
        #[arg(long, default_value_t = DEFAULT_CUBE_CAP)]
        cap: i64,
    },
    /// Certify a lower bound on χ_gf with an exact dual witness.
    Certify(CertifyArgs),
    /// Dual witness files.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Beam search and related runs.
    #[command(subcommand)]
    Search(SearchCmd),
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    Info { graph: String },
}

#[derive(Subcommand, Debug)]
enum IndepCmd {
    /// Number of independent sets.
    Count { graph: String },
    /// One independent set per line, as vertex indices.
    Enumerate { graph: String },
}

#[derive(Subcommand, Debug)]
enum CongrCmd {
    /// Congruence classes of the nonempty independent sets.
    Classes { graph: String },
    /// The χ_gf constraint system in text form.
    Constraints {
        graph: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct SolveArgs {
    /// Exact rational simplex.
    #[arg(long, conflicts_with = "numeric")]
    exact: bool,
    /// Floating-point solve (the default).
    #[arg(long)]
    numeric: bool,
    /// Column cap for exact solves.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    #[command(flatten)]
    numeric_opts: NumericArgs,
}

#[derive(Args, Debug, Clone)]
struct NumericArgs {
    /// External solver command with `{lp}` and `{sol}` placeholders.
    #[arg(long, env = EXTERNAL_SOLVER_ENV)]
    solver: Option<String>,
    /// Primal feasibility tolerance.
    #[arg(long, default_value_t = 1e-9)]
    feasibility_tol: f64,
    /// Columns above which column generation is used.
    #[arg(long)]
    colgen_above: Option<usize>,
}

impl NumericArgs {
    fn config(&self) -> NumericConfig {
        let mut cfg = NumericConfig {
            backend: match &self.solver {
                Some(cmd) if !cmd.trim().is_empty() => Backend::External(cmd.clone()),
                _ => Backend::InProcess,
            },
            tolerances: Tolerances {
                feasibility: self.feasibility_tol,
                ..Tolerances::default()
            },
            ..NumericConfig::default()
        };
        if let Some(c) = self.colgen_above {
            cfg.colgen_above = c;
        }
        cfg
    }
}

impl SolveArgs {
    fn mode(&self) -> Mode {
        if self.exact {
            Mode::Exact {
                cap: self.exact_cap,
            }
        } else {
            Mode::Numeric(self.numeric_opts.config())
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModelKind {
    Chif,
    ChifRegular,
    Chigf,
}

#[derive(Subcommand, Debug)]
enum LpCmd {
    /// Fractional chromatic number.
    Chif {
        graph: String,
        /// Require every vertex to be covered exactly once.
        #[arg(long)]
        regular: bool,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Geometric fractional chromatic number.
    Chigf {
        graph: String,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Write a model in LP format.
    Export {
        graph: String,
        #[arg(long, value_enum, default_value = "chigf")]
        model: ModelKind,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum ColouringCmd {
    /// Check that a colouring is proper and lies in the χ_gf feasible set.
    Verify {
        graph: String,
        /// Colour vector file; `@g27` for the bundled one.
        colours: String,
    },
}

#[derive(Args, Debug)]
struct CertifyArgs {
    graph: String,
    /// Target lower bound, as a rational such as `4` or `7/2`.
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[command(flatten)]
    numeric: NumericArgs,
    /// Where to write the witness.
    #[arg(long)]
    witness_out: Option<PathBuf>,
    /// Where to write the report (stdout otherwise).
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum WitnessCmd {
    /// Exactly check a witness file against a graph's constraints.
    Check { graph: String, witness: PathBuf },
}

#[derive(Args, Debug, Clone)]
struct StopArgs {
    #[arg(long)]
    target: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    max_size: Option<usize>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    wall_clock: Option<u64>,
}

impl StopArgs {
    fn conditions(&self) -> StopConditions {
        StopConditions {
            target: self.target,
            max_iterations: self.max_iterations,
            max_size: self.max_size,
            wall_clock: self.wall_clock.map(Duration::from_secs),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct ScoreArgs {
    /// Score with the exact simplex instead of floating point.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    numeric: NumericArgs,
}

impl ScoreArgs {
    fn scorer(&self) -> Scorer {
        if self.exact {
            Scorer::Exact
        } else {
            Scorer::Numeric(self.numeric.config())
        }
    }
}

#[derive(Subcommand, Debug)]
enum SearchCmd {
    /// Backtracking beam search.
    Run {
        /// Start graph (default: the Moser spindle).
        #[arg(long, default_value = "@m7")]
        start: String,
        /// Beam width; 0 keeps every candidate.
        #[arg(long, default_value_t = DEFAULT_BEAM_WIDTH)]
        beam_width: usize,
        /// Largest beam after tie inclusion; 0 for no bound.
        #[arg(long, default_value_t = DEFAULT_TIE_CAP)]
        tie_cap: usize,
        #[arg(long, default_value_t = DEFAULT_VALUE_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        stop: StopArgs,
        #[command(flatten)]
        score: ScoreArgs,
        /// Resume from a checkpoint instead of the start graph.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Write the final state here.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Run log CSV.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Best value per size CSV.
        #[arg(long)]
        figure2: Option<PathBuf>,
        /// Directory for the champion graph of each size.
        #[arg(long)]
        champions: Option<PathBuf>,
        /// Re-score champions with the exact simplex.
        #[arg(long)]
        exact_champions: bool,
    },
    /// Greedy ascent through children.
    Greedy {
        start: String,
        #[arg(long, default_value_t = DEFAULT_GREEDY_THRESHOLD)]
        threshold: f64,
        /// Consider parents as well as children.
        #[arg(long)]
        with_parents: bool,
        #[command(flatten)]
        stop: StopArgs,
        #[command(flatten)]
        score: ScoreArgs,
        #[arg(long)]
        log: Option<PathBuf>,
        /// Write the final graph here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Score all children and sampled grandchildren of a graph.
    Descendants {
        graph: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        score: ScoreArgs,
    },
    /// Best value per size from a checkpoint, as CSV.
    Figure2 { checkpoint: PathBuf },
}

enum Failure {
    Usage(String),
    Computation { stage: &'static str, error: String },
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Computation { .. } => 2,
            Failure::Verification(_) => 3,
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

trait Stage<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, Failure>;
}

impl<T, E: Display> Stage<T> for std::result::Result<T, E> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, Failure> {
        self.map_err(|e| Failure::Computation {
            stage,
            error: e.to_string(),
        })
    }
}

fn read_graph_file(arg: &str) -> std::result::Result<GraphFile, Failure> {
    let text = match arg {
        "@m7" => M7_TXT.to_string(),
        "@g27" => G27_TXT.to_string(),
        path => {
            std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {}", path, e)))?
        }
    };
    GraphFile::parse(&text).stage("reading graph")
}

fn load_graph(arg: &str) -> std::result::Result<UnitGraph, Failure> {
    build_graph(&read_graph_file(arg)?.points()).stage("building graph")
}

fn load_lattice_graph(arg: &str) -> std::result::Result<LatticeGraph, Failure> {
    search::canonical_from_file(&read_graph_file(arg)?).stage("canonizing graph")
}

fn parse_rational(s: &str) -> std::result::Result<Rational, Failure> {
    let bad = || Failure::Usage(format!("not a rational number: {}", s));
    let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
    match s.split_once('/') {
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(int(n)?, d))
        }
        None => Ok(Rational::from_integer(int(s)?)),
    }
}

fn decimal(v: f64) -> String {
    format!("{:.12}", v)
}

fn show_rational(r: &Rational) -> String {
    format!("{} ({})", r, decimal(r.to_f64().unwrap_or(f64::NAN)))
}

fn print_solution(name: &str, sol: &Solution) -> CmdResult {
    if !sol.is_optimal() {
        return Err(Failure::Computation {
            stage: "solving LP",
            error: format!("status {}", sol.status),
        });
    }
    match sol.exact_objective() {
        Some(v) => println!("{} = {}", name, show_rational(v)),
        None => {
            println!("{} ~ {}", name, decimal(sol.objective));
            println!(
                "residuals: primal {:.3e}, dual {:.3e}, gap {:.3e}",
                sol.residuals.primal, sol.residuals.dual, sol.residuals.gap
            );
        }
    }
    Ok(())
}

fn write_or_print(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => std::fs::write(p, text).stage("writing output"),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Graph(GraphCmd::Info { graph }) => {
            let g = load_graph(&graph)?;
            println!("vertices: {}", g.len());
            println!("edges: {}", g.edge_count());
            println!("hash: {}", certify::graph_hash(&g));
        }
        Command::Indep(IndepCmd::Count { graph }) => {
            let g = load_graph(&graph)?;
            let n = count_independent_sets(&g);
            println!("{}", n);
            eprintln!(
                "{} nonempty independent sets; {} counting the empty set",
                n,
                n + 1
            );
        }
        Command::Indep(IndepCmd::Enumerate { graph }) => {
            let g = load_graph(&graph)?;
            let mut out = String::new();
            for s in enumerate_independent_sets(&g) {
                out.push_str(&s.to_index_list());
                out.push('\n');
            }
            print!("{}", out);
        }
        Command::Alpha { graph } => {
            let g = load_graph(&graph)?;
            println!("alpha: {}", independence_number(&g));
            println!(
                "alpha_1: {}",
                show_rational(&independence_ratio(&g).stage("independence ratio")?)
            );
        }
        Command::Hall { graph, cap } => {
            let g = load_graph(&graph)?;
            println!(
                "hall_ratio: {}",
                show_rational(&hall_ratio(&g, cap).stage("hall ratio")?)
            );
        }
        Command::Congr(CongrCmd::Classes { graph }) => {
            let g = load_graph(&graph)?;
            let cols = enumerate_independent_sets(&g);
            let classes = congruence_classes(&g, &cols);
            let pairs = spanning_pairs(&classes);
            println!("independent_sets: {}", cols.len());
            println!("classes: {}", classes.len());
            println!("spanning_pairs: {}", pairs.len());
            for c in classes.iter().filter(|c| c.len() > 1) {
                let sets: Vec<String> = c.iter().map(|&j| cols[j].to_index_list()).collect();
                println!("{}", sets.join(" | "));
            }
        }
        Command::Congr(CongrCmd::Constraints { graph, output }) => {
            let g = load_graph(&graph)?;
            write_or_print(output.as_deref(), &build_constraints(&g).to_text())?;
        }
        Command::Lp(LpCmd::Chif {
            graph,
            regular,
            solve,
        }) => {
            let g = load_graph(&graph)?;
            let mode = solve.mode();
            let sol = if regular {
                let model = lp::chi_f_model(&g, true);
                lp::solve(&model, &mode)
            } else {
                lp::chi_f(&g, &mode)
            }
            .stage("solving chi_f LP")?;
            print_solution(if regular { "chi_f (regular)" } else { "chi_f" }, &sol)?;
        }
        Command::Lp(LpCmd::Chigf { graph, solve }) => {
            let g = load_graph(&graph)?;
            let sol = lp::chi_gf(&g, &solve.mode()).stage("solving chi_gf LP")?;
            print_solution("chi_gf", &sol)?;
        }
        Command::Lp(LpCmd::Export {
            graph,
            model,
            output,
        }) => {
            let g = load_graph(&graph)?;
            let m = match model {
                ModelKind::Chif => lp::chi_f_model(&g, false),
                ModelKind::ChifRegular => lp::chi_f_model(&g, true),
                ModelKind::Chigf => lp::chi_gf_model(&g),
            };
            write_or_print(output.as_deref(), &lp::export_lp(&m))?;
        }
        Command::Colouring(ColouringCmd::Verify { graph, colours }) => {
            let g = load_graph(&graph)?;
            let text = match colours.as_str() {
                "@g27" => G27_COLOURING_TXT.to_string(),
                path => std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("{}: {}", path, e)))?,
            };
            let c = ColouringFile::parse(&text)
                .stage("reading colouring")?
                .colours();
            let report = lp::verify_colouring_in_gfc(&g, &c).stage("checking colouring")?;
            println!("constraint rows checked: {}", report.rows_checked);
            if report.is_valid() {
                println!("valid gfc colouring, weight {}", report.weight());
            } else {
                for (a, b) in &report.monochromatic_edges {
                    println!("monochromatic edge {} {}", a, b);
                }
                if report.e_value != 1 {
                    println!("vertex 0 lies in {} classes", report.e_value);
                }
                for (y, yp) in &report.violated {
                    println!(
                        "violated pair {} ~ {}",
                        y.to_index_list(),
                        yp.to_index_list()
                    );
                }
                return Err(Failure::Verification(
                    "colouring is not a valid gfc colouring".into(),
                ));
            }
        }
        Command::CubeColour {
            graph,
            half_width,
            cap,
        } => {
            let g = load_graph(&graph)?;
            let c = cube_colouring(&g, half_width, cap).stage("cube colouring")?;
            println!("cube: {}", c.cube.len());
            println!("independent_set: {}", c.independent_set.len());
            println!("translates: {}", c.translates);
            println!("weight: {}", show_rational(&c.weight));
            println!("weight_bound: {}", show_rational(&c.weight_bound()));
            if !c.gamma.is_fractional_colouring(&g) {
                return Err(Failure::Verification(
                    "cube colouring does not cover every vertex".into(),
                ));
            }
        }
        Command::Certify(args) => {
            let g = load_graph(&args.graph)?;
            let t = parse_rational(&args.target)?;
            let cfg = CertifyConfig {
                numeric: args.numeric.config(),
                epsilon: args.epsilon,
            };
            let cert = certify::certify_chi_gf(&g, &t, &cfg);
            if let (Some(path), Some(w)) = (&args.witness_out, &cert.witness) {
                w.write(path).stage("writing witness")?;
            }
            write_or_print(args.report_out.as_deref(), &cert.report())?;
            if !cert.verdict {
                return Err(Failure::Verification(
                    cert.failure
                        .clone()
                        .unwrap_or_else(|| "witness failed the exact check".into()),
                ));
            }
        }
        Command::Witness(WitnessCmd::Check { graph, witness }) => {
            let g = load_graph(&graph)?;
            let w = DualWitness::read(&witness).stage("reading witness")?;
            let sys = build_constraints(&g);
            let ok = certify::check_witness(&sys, &w.y, &w.target).stage("checking witness")?;
            if ok {
                println!("valid witness: chi_gf >= {}", show_rational(&w.target));
            } else {
                println!("invalid witness");
                return Err(Failure::Verification(
                    "witness violates a dual constraint".into(),
                ));
            }
        }
        Command::Search(cmd) => run_search(cmd)?,
    }
    Ok(())
}

fn nonzero(v: usize) -> Option<usize> {
    (v > 0).then_some(v)
}

fn run_search(cmd: SearchCmd) -> CmdResult {
    match cmd {
        SearchCmd::Run {
            start,
            beam_width,
            tie_cap,
            tolerance,
            stop,
            score,
            resume,
            checkpoint,
            log,
            figure2,
            champions,
            exact_champions,
        } => {
            let cfg = SearchConfig {
                beam_width: nonzero(beam_width),
                tie_cap: nonzero(tie_cap),
                tolerance,
                stop: stop.conditions(),
                scorer: score.scorer(),
                ..SearchConfig::default()
            };
            let result = match resume {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).stage("reading checkpoint")?;
                    let state = SearchState::from_checkpoint(&text).stage("reading checkpoint")?;
                    search::resume_search(state, &cfg)
                }
                None => search::beam_search(load_lattice_graph(&start)?, &cfg),
            };
            let run = result.stage("beam search")?;
            if let Some(p) = checkpoint {
                std::fs::write(p, run.state.to_checkpoint()).stage("writing checkpoint")?;
            }
            if let Some(p) = log {
                std::fs::write(p, run.state.log_csv()).stage("writing log")?;
            }
            if let Some(p) = figure2 {
                std::fs::write(p, run.state.figure2_csv()).stage("writing figure data")?;
            }
            println!(
                "stopped: {:?} after {} iterations",
                run.reason, run.state.iteration
            );
            for (n, (g, v)) in run.state.champions() {
                let exact = if exact_champions {
                    format!(
                        " exact {}",
                        show_rational(&Scorer::score_exact(&g).stage("exact re-scoring")?)
                    )
                } else {
                    String::new()
                };
                println!("n={} best {}{}", n, decimal(v), exact);
                if let Some(dir) = &champions {
                    std::fs::create_dir_all(dir).stage("writing champions")?;
                    let file = g.to_graph_file().with_comment(&format!(
                        "{} vertices, chi_gf ~ {}",
                        n,
                        decimal(v)
                    ));
                    file.write(&dir.join(format!("best_{}.txt", n)))
                        .stage("writing champions")?;
                }
            }
        }
        SearchCmd::Greedy {
            start,
            threshold,
            with_parents,
            stop,
            score,
            log,
            output,
        } => {
            let cfg = GreedyConfig {
                threshold,
                children_only: !with_parents,
                stop: stop.conditions(),
                scorer: score.scorer(),
                ..GreedyConfig::default()
            };
            let run =
                search::greedy_search(load_lattice_graph(&start)?, &cfg).stage("greedy search")?;
            for (g, v) in &run.path {
                println!("n={} value {}", g.len(), decimal(*v));
            }
            match run.reason {
                Some(r) => println!("stopped: {:?}", r),
                None => println!("stopped: no child improves by {}", threshold),
            }
            if let Some(p) = log {
                std::fs::write(p, run.log_csv()).stage("writing log")?;
            }
            if let (Some(p), Some((g, _))) = (output, run.path.last()) {
                g.to_graph_file().write(&p).stage("writing graph")?;
            }
        }
        SearchCmd::Descendants {
            graph,
            samples,
            seed,
            score,
        } => {
            let g = load_lattice_graph(&graph)?;
            let r = search::descendants(&g, samples, seed, &score.scorer())
                .stage("scoring descendants")?;
            println!("base {}", decimal(r.base.1));
            println!("children: {}", r.children.len());
            println!("grandchildren sampled: {}", r.grandchildren.len());
            println!("minimum: {}", decimal(r.min_value()));
            println!(
                "all equal to base: {}",
                r.all_equal(DEFAULT_VALUE_TOLERANCE)
            );
        }
        SearchCmd::Figure2 { checkpoint } => {
            let text = std::fs::read_to_string(&checkpoint).stage("reading checkpoint")?;
            let state = SearchState::from_checkpoint(&text).stage("reading checkpoint")?;
            print!("{}", state.figure2_csv());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: could not size the worker pool: {}", e);
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {}", m),
                Failure::Computation { stage, error } => {
                    eprintln!("error while {}: {}", stage, error)
                }
                Failure::Verification(m) => eprintln!("verification failed: {}", m),
            }
            ExitCode::from(f.code())
        }
    }
}
