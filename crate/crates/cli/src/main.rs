use anticoord::experiments::{
    run_count_ne, run_density_sweep, run_simulate, ExperimentError, ExperimentResult, SchemeKind,
    SimulatePlan,
};
use anticoord::gen::{self, GeneratorSpec};
use anticoord::io;
use anticoord_core::reduction::{build_reduction, parse_dimacs, verify_parsimony};
use anticoord_core::solvers::{
    is_even_cycle_free, solve_complete, solve_dag, solve_even_cycle_free, solve_nand_nor,
    solve_sn_general,
};
use anticoord_core::{Mode, SolveOutcome, ThresholdSystem};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: msg.into() }
    }
    fn io(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_IO, message: msg.into() }
    }
    fn budget(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_BUDGET, message: msg.into() }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::InvalidParams(_) => CliError::usage(e.to_string()),
            ExperimentError::Budget(_) => CliError::budget(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "anticoord",
    about = "Simulate, solve, and count equilibria of inverted-threshold network dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Se,
    Sn,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Se => Mode::SelfEssential,
            ModeArg::Sn => Mode::SelfNonEssential,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Sync,
    Seq,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Gnp,
    Ba,
    Ws,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Auto,
    General,
    NandNor,
    Dag,
    Complete,
    EvenCycleFree,
}

#[derive(Args, Clone)]
struct GeneratorFlags {
    /// Network model for generated instances
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// Vertex count
    #[arg(long)]
    n: Option<usize>,
    /// Gnp edge probability
    #[arg(long)]
    p: Option<f64>,
    /// Preferential-attachment edge count per new vertex
    #[arg(long)]
    attach: Option<usize>,
    /// Ring-lattice neighbor count (even)
    #[arg(long)]
    k: Option<usize>,
    /// Small-world rewiring probability
    #[arg(long)]
    rewire: Option<f64>,
}

impl GeneratorFlags {
    fn to_spec(&self) -> Result<GeneratorSpec, CliError> {
        let n = self.n.ok_or_else(|| CliError::usage("--n is required with --model"))?;
        match self.model {
            Some(ModelArg::Gnp) => Ok(GeneratorSpec::Gnp {
                n,
                p: self.p.ok_or_else(|| CliError::usage("--p is required for gnp"))?,
            }),
            Some(ModelArg::Ba) => Ok(GeneratorSpec::BarabasiAlbert {
                n,
                attach_count: self
                    .attach
                    .ok_or_else(|| CliError::usage("--attach is required for ba"))?,
            }),
            Some(ModelArg::Ws) => Ok(GeneratorSpec::WattsStrogatz {
                n,
                k: self.k.ok_or_else(|| CliError::usage("--k is required for ws"))?,
                rewire_prob: self
                    .rewire
                    .ok_or_else(|| CliError::usage("--rewire is required for ws"))?,
            }),
            None => Err(CliError::usage("--model is required (or pass --instance)")),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic network and emit it as an edge list
    Gen {
        #[command(flatten)]
        generator: GeneratorFlags,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the dynamics over a trial grid and record convergence
    Simulate {
        /// Instance JSON file (alternative to generator flags)
        #[arg(long)]
        instance: Option<PathBuf>,
        #[command(flatten)]
        generator: GeneratorFlags,
        #[arg(long, value_enum, default_value = "sn")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "sync")]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Initial-configuration draws per (instance, p_zero) cell
        #[arg(long, default_value_t = 10)]
        trials: u64,
        /// Generated networks (ignored with --instance)
        #[arg(long, default_value_t = 1)]
        instances: usize,
        /// Threshold draws per network (ignored with --instance)
        #[arg(long, default_value_t = 1)]
        threshold_draws: usize,
        /// Comma-separated zero-probabilities for initial configurations
        #[arg(long, default_value = "0.5")]
        p_zero_grid: String,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Convergence-time sweep over average degrees (synchronous updates)
    Sweep {
        #[arg(long, default_value_t = 200)]
        n: usize,
        /// Comma-separated average degrees
        #[arg(long, default_value = "5,10,20")]
        degrees: String,
        /// Comma-separated modes (se, sn)
        #[arg(long, default_value = "se,sn")]
        modes: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Exhaustively count equilibria over a batch of random instances
    CountNe {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        avg_deg: usize,
        #[arg(long, default_value_t = 20)]
        threshold_draws: usize,
        #[arg(long, default_value = "se,sn")]
        modes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Run an equilibrium solver on an instance file
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        solver: SolverArg,
    },
    /// Build the equilibrium-counting instance for a 3-CNF formula
    Reduce {
        /// DIMACS CNF input
        #[arg(long)]
        cnf: PathBuf,
        /// Check the fixed-point / satisfying-assignment correspondence
        #[arg(long)]
        verify: bool,
        /// Write the built instance JSON here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|tok| tok.trim())
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            tok.parse::<T>()
                .map_err(|_| CliError::usage(format!("bad {} entry: {:?}", what, tok)))
        })
        .collect()
}

fn parse_modes(s: &str) -> Result<Vec<Mode>, CliError> {
    s.split(',')
        .map(|tok| tok.trim())
        .filter(|tok| !tok.is_empty())
        .map(|tok| io::parse_mode(tok).map_err(|e| CliError::usage(e.to_string())))
        .collect()
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {}", path.display(), e)))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::io(format!("cannot write {}: {}", path.display(), e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn emit_result(
    result: &ExperimentResult,
    out: &Option<PathBuf>,
    format: FormatArg,
) -> Result<(), CliError> {
    let body = match format {
        FormatArg::Csv => result.to_csv(),
        FormatArg::Json => result.to_json(),
    };
    emit(&body, out)?;
    // CSV writes carry a JSON sidecar with the full provenance.
    if let (Some(path), FormatArg::Csv) = (out, format) {
        let sidecar = path.with_extension("json");
        std::fs::write(&sidecar, result.to_json())
            .map_err(|e| CliError::io(format!("cannot write {}: {}", sidecar.display(), e)))?;
    }
    Ok(())
}

fn load_instance(path: &PathBuf) -> Result<ThresholdSystem, CliError> {
    let text = read_file(path)?;
    io::read_instance(&text).map_err(|e| CliError::io(format!("{}: {}", path.display(), e)))
}

fn detect_solver(system: &ThresholdSystem) -> SolverArg {
    let graph = system.graph();
    if graph.is_directed() && graph.topological_order().is_some() {
        return SolverArg::Dag;
    }
    if !graph.is_directed() && graph.is_complete() {
        return SolverArg::Complete;
    }
    let all_nand_nor = (0..system.n()).all(|v| {
        let tau = system.tau1(v);
        tau == 1 || tau == system.num_inputs(v)
    });
    if all_nand_nor {
        return SolverArg::NandNor;
    }
    if !graph.is_directed() {
        let adj: Vec<Vec<usize>> = (0..graph.n()).map(|v| graph.neighbors(v).to_vec()).collect();
        if is_even_cycle_free(graph.n(), &adj) {
            return SolverArg::EvenCycleFree;
        }
    }
    SolverArg::General
}

fn run_solver(system: &ThresholdSystem, solver: SolverArg) -> SolveOutcome {
    match solver {
        SolverArg::Auto => run_solver(system, detect_solver(system)),
        SolverArg::General => {
            if system.mode() == Mode::SelfNonEssential {
                solve_sn_general(system)
            } else {
                SolveOutcome::NotApplicable(
                    "no general polynomial search exists for the self-essential mode".into(),
                )
            }
        }
        SolverArg::NandNor => solve_nand_nor(system),
        SolverArg::Dag => solve_dag(system),
        SolverArg::Complete => solve_complete(system),
        SolverArg::EvenCycleFree => solve_even_cycle_free(system),
    }
}

fn solver_name(solver: SolverArg) -> &'static str {
    match solver {
        SolverArg::Auto => "auto",
        SolverArg::General => "general",
        SolverArg::NandNor => "nand-nor",
        SolverArg::Dag => "dag",
        SolverArg::Complete => "complete",
        SolverArg::EvenCycleFree => "even-cycle-free",
    }
}

fn cmd_gen(generator: &GeneratorFlags, seed: u64, out: &Option<PathBuf>) -> Result<(), CliError> {
    let spec = generator.to_spec()?;
    let graph = gen::generate(&spec, seed).map_err(|e| CliError::usage(e.to_string()))?;
    let isolated = (0..graph.n()).filter(|&v| graph.degree(v) == 0).count();
    if isolated > 0 {
        eprintln!("warning: {} isolated vertices", isolated);
    }
    emit(&io::write_edge_list(&graph), out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    instance: &Option<PathBuf>,
    generator: &GeneratorFlags,
    mode: Mode,
    scheme: SchemeArg,
    seed: u64,
    trials: u64,
    instances: usize,
    threshold_draws: usize,
    p_zero_grid: &str,
    max_steps: Option<usize>,
    out: &Option<PathBuf>,
    format: FormatArg,
    command: String,
) -> Result<(), CliError> {
    let grid: Vec<f64> = parse_list(p_zero_grid, "p-zero-grid")?;
    if grid.is_empty() {
        return Err(CliError::usage("--p-zero-grid must name at least one probability"));
    }
    let mut systems = Vec::new();
    if let Some(path) = instance {
        systems.push((0usize, load_instance(path)?));
    } else {
        let spec = generator.to_spec()?;
        for i in 0..instances.max(1) {
            let graph_seed = seed.wrapping_add(0x6EED).wrapping_mul(i as u64 + 1);
            let graph =
                gen::generate(&spec, graph_seed).map_err(|e| CliError::usage(e.to_string()))?;
            for j in 0..threshold_draws.max(1) {
                let (tau, warnings) =
                    gen::random_thresholds(&graph, mode, graph_seed ^ (j as u64 + 1));
                for w in warnings {
                    eprintln!("warning: {}", w);
                }
                let sys = ThresholdSystem::new(graph.clone(), tau, mode)
                    .map_err(|e| CliError::usage(format!("{:?}", e)))?;
                systems.push((i * threshold_draws.max(1) + j, sys));
            }
        }
    }
    let plan = SimulatePlan {
        systems,
        scheme: match scheme {
            SchemeArg::Sync => SchemeKind::Sync,
            SchemeArg::Seq => SchemeKind::Seq,
        },
        p_zero_grid: grid,
        trials: trials as usize,
        seed,
        max_steps,
        command,
    };
    let result = run_simulate(&plan)?;
    // A sequential self-non-essential run ending anywhere but a fixed point
    // breaks the convergence guarantee the engine is built on.
    if plan.scheme == SchemeKind::Seq && mode == Mode::SelfNonEssential {
        if let Some(bad) = result.records.iter().find(|r| r.terminal != "fixed_point") {
            return Err(CliError {
                code: EXIT_INTERNAL,
                message: format!(
                    "sequential sn run (instance {}, seed {}) ended in {} instead of a fixed point",
                    bad.instance, bad.seed, bad.terminal
                ),
            });
        }
    }
    emit_result(&result, out, format)
}

fn cmd_solve(instance: &PathBuf, solver: SolverArg) -> Result<(), CliError> {
    let system = load_instance(instance)?;
    let chosen = if solver == SolverArg::Auto { detect_solver(&system) } else { solver };
    let started = Instant::now();
    let outcome = run_solver(&system, chosen);
    let elapsed = started.elapsed();
    match &outcome {
        SolveOutcome::Found(config) => {
            let verified = system.is_fixed_point(config);
            println!(
                "solver={} outcome=found verified={} time_us={}",
                solver_name(chosen),
                verified,
                elapsed.as_micros()
            );
            let states: Vec<String> = config.states().iter().map(|s| s.to_string()).collect();
            println!("configuration={}", states.join(""));
            if !verified {
                return Err(CliError {
                    code: EXIT_INTERNAL,
                    message: "solver returned a non-fixed-point".into(),
                });
            }
        }
        SolveOutcome::NoEquilibrium => {
            println!(
                "solver={} outcome=no-equilibrium time_us={}",
                solver_name(chosen),
                elapsed.as_micros()
            );
        }
        SolveOutcome::NotApplicable(reason) => {
            println!(
                "solver={} outcome=not-applicable reason={:?} time_us={}",
                solver_name(chosen),
                reason,
                elapsed.as_micros()
            );
        }
    }
    Ok(())
}

fn cmd_reduce(cnf: &PathBuf, verify: bool, out: &Option<PathBuf>) -> Result<(), CliError> {
    let text = read_file(cnf)?;
    let formula =
        parse_dimacs(&text).map_err(|e| CliError::io(format!("{}: {:?}", cnf.display(), e)))?;
    let artifact = build_reduction(&formula);
    println!(
        "variables={} clauses={} vertices={} edges={}",
        formula.num_vars,
        formula.clauses.len(),
        artifact.system.n(),
        artifact.system.m()
    );
    if let Some(path) = out {
        std::fs::write(path, io::write_instance(&artifact.system))
            .map_err(|e| CliError::io(format!("cannot write {}: {}", path.display(), e)))?;
    }
    if verify {
        let exhaustive = artifact.system.n() <= anticoord_core::reduction::EXHAUSTIVE_VERTEX_LIMIT;
        let report = verify_parsimony(&artifact, exhaustive)
            .map_err(|e| CliError::budget(format!("{:?}", e)))?;
        match report.num_fixed_points {
            Some(fp) => println!("#SAT={} #FP={} parsimonious={}", report.num_satisfying, fp, report.holds()),
            None => println!(
                "#SAT={} (assignment-side check only) parsimonious={}",
                report.num_satisfying,
                report.holds()
            ),
        }
        if !report.holds() {
            return Err(CliError {
                code: EXIT_INTERNAL,
                message: "parsimony verification failed".into(),
            });
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let command_line: Vec<String> = std::env::args().collect();
    let provenance = command_line.join(" ");
    match cli.command {
        Command::Gen { generator, seed, out } => cmd_gen(&generator, seed, &out),
        Command::Simulate {
            instance,
            generator,
            mode,
            scheme,
            seed,
            trials,
            instances,
            threshold_draws,
            p_zero_grid,
            max_steps,
            out,
            format,
        } => cmd_simulate(
            &instance,
            &generator,
            mode.into(),
            scheme,
            seed,
            trials,
            instances,
            threshold_draws,
            &p_zero_grid,
            max_steps,
            &out,
            format,
            provenance,
        ),
        Command::Sweep { n, degrees, modes, trials, seed, out, format } => {
            let degrees: Vec<usize> = parse_list(&degrees, "degrees")?;
            let modes = parse_modes(&modes)?;
            let result = run_density_sweep(n, &degrees, &modes, trials, seed, provenance)?;
            emit_result(&result, &out, format)
        }
        Command::CountNe { instances, n, avg_deg, threshold_draws, modes, seed, out, format } => {
            let modes = parse_modes(&modes)?;
            let result =
                run_count_ne(instances, n, avg_deg, threshold_draws, &modes, seed, provenance)?;
            emit_result(&result, &out, format)
        }
        Command::Solve { instance, solver } => cmd_solve(&instance, solver),
        Command::Reduce { cnf, verify, out } => cmd_reduce(&cnf, verify, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
