//! `lllkit` command-line front end.
//!
//! Exit codes: 0 ok, 1 unsatisfiable or failed, 2 input error, 3 condition
//! violated.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lllkit::apps::{
    chromatic_index, independent_complete_section, proper_coloring_csp, schreier_edge_coloring, sinkless, SchreierAction,
    SectionRoute, SectionSolver,
};
use lllkit::bridge::{lcl_to_csp, run_pipeline, verify_reduction, PipelineOptions, VerifyOptions};
use lllkit::condition::{check_condition, LllCondition};
use lllkit::csp::{brute_force_solve, Csp, PartialColoring, DEFAULT_BRUTE_FORCE_BUDGET};
use lllkit::exact::{rational_string, DEFAULT_PRECISION_CAP};
use lllkit::graph::{self, Graph};
use lllkit::io::{self, CspFile, GraphFile, LabelsFile, PartitionFile, StructuredFile, WitnessFile};
use lllkit::local::{
    self, check_lcl, id_sweep, run_deterministic, run_local, run_randomized, subdivide, Constant, GreedyById, Identity,
    LclProblem, LocalAlgorithm, LubyMis, SinklessRandomTrial, StructuredGraph, UniformColorTrial,
};
use lllkit::moser_tardos::moser_tardos;
use lllkit::shattering::{
    grid_separation, interval_separation, partition_from_separation, shattering_width, FinitePartition, SeparationWitness,
};
use lllkit::solver::shattering_solve;
use lllkit::Error;

#[derive(Parser)]
#[command(name = "lllkit", version, about = "Constructive local lemma toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_PRECISION_CAP)]
    precision_cap: u32,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a CSP.
    Solve(SolveArgs),
    /// Evaluate local lemma conditions for a CSP.
    Check(CheckArgs),
    /// Reduce an LCL with a randomized algorithm to a CSP, optionally solving it.
    Reduce(ReduceArgs),
    /// Run a LOCAL algorithm.
    Simulate(SimulateArgs),
    /// Edge-color the Schreier graph of an action.
    Schreier(SchreierArgs),
    /// Find an independent complete section.
    Section(SectionArgs),
    /// Generate graphs, CSPs, witnesses and actions.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverKind {
    Brute,
    MoserTardos,
    Shattering,
}

#[derive(Args)]
struct SolveArgs {
    /// CSP file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = SolverKind::Brute)]
    solver: SolverKind,
    #[arg(long)]
    partition: Option<PathBuf>,
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Graph the witness refers to (default: the CSP's primal graph).
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    s: Option<usize>,
    /// Class size budget (brute force: component budget).
    #[arg(long)]
    budget: Option<usize>,
    /// Moser–Tardos resampling budget.
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 2)]
    s: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct LocalArgs {
    /// Structured graph (plain graph files are accepted).
    #[arg(long)]
    input: PathBuf,
    /// Subdivide the input graph (vertex and edge nodes).
    #[arg(long)]
    subdivide: bool,
    /// always-true, proper-coloring:Q, distinct-labels, weak-coloring, mis, sinkless.
    #[arg(long)]
    problem: String,
    /// constant:C, identity, uniform:Q, greedy, luby:PHASES, sinkless-trial.
    #[arg(long)]
    algorithm: String,
    #[arg(long, default_value_t = 0)]
    rounds: usize,
    /// Label range ℓ.
    #[arg(long, default_value_t = 2)]
    labels: u32,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    local: LocalArgs,
    /// Separation witness; runs the full pipeline when given.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Write the reduced CSP here when it is explicit.
    #[arg(long)]
    csp_out: Option<PathBuf>,
    /// Random labelings examined when enumeration is too large.
    #[arg(long, default_value_t = 2000)]
    trials: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    local: LocalArgs,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Deterministic run with identifiers `0..n`.
    #[arg(long)]
    ids: bool,
    /// Run on the labeling in this file instead of random ones.
    #[arg(long)]
    theta: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteKind {
    Direct,
    Lll,
}

#[derive(Args)]
struct SchreierArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = RouteKind::Direct)]
    route: RouteKind,
    /// Compute the exact chromatic index when there are at most 40 edges.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    dot: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum SectionSolverKind {
    MoserTardos,
    Brute,
}

#[derive(Args)]
struct SectionArgs {
    /// Graph G₁ (independence).
    #[arg(long)]
    input: PathBuf,
    /// Graph G₂ (components to meet); defaults to G₁.
    #[arg(long)]
    partner: Option<PathBuf>,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    delta: u32,
    #[arg(long, value_enum, default_value_t = SectionSolverKind::MoserTardos)]
    solver: SectionSolverKind,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_BUDGET)]
    budget: usize,
    /// Moser–Tardos resampling budget.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Grid,
    Complete,
    Regular,
    Tree,
    Gnp,
    Translations,
}

#[derive(Clone, Copy, ValueEnum)]
enum CspKind {
    Coloring,
    Sinkless,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    width: usize,
    #[arg(long, default_value_t = 4)]
    height: usize,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Emit a proper-coloring CSP with this many colors.
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, value_enum)]
    csp: Option<CspKind>,
    /// Emit an interval (paths, cycles) or brick (grids) witness with this budget.
    #[arg(long)]
    budget: Option<usize>,
    /// Group dimensions for translation actions.
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    /// A translation, comma separated per coordinate; repeatable.
    #[arg(long = "shift", allow_hyphen_values = true)]
    shifts: Vec<String>,
    /// Output directory.
    #[arg(long)]
    dir: PathBuf,
    #[command(flatten)]
    common: Common,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConditionViolated(_) => 3,
            Error::BudgetExceeded { .. } | Error::PrecisionExhausted { .. } | Error::AuditFailure(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Outcome = std::result::Result<(Value, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Solve(a) => &a.common,
        Command::Check(a) => &a.common,
        Command::Reduce(a) => &a.common,
        Command::Simulate(a) => &a.common,
        Command::Schreier(a) => &a.common,
        Command::Section(a) => &a.common,
        Command::Gen(a) => &a.common,
    }
    .clone();
    if let Some(t) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Check(a) => cmd_check(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Schreier(a) => cmd_schreier(a),
        Command::Section(a) => cmd_section(a),
        Command::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok((mut report, code)) => {
            if let Value::Object(map) = &mut report {
                map.insert("seed".into(), json!(common.seed));
                map.insert("precision_cap".into(), json!(common.precision_cap));
                if common.timings {
                    map.insert("wall_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
                }
            }
            let text = match io::to_json(&report) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            match &common.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn primal_graph(csp: &Csp) -> Result<Graph, Failure> {
    let mut pairs = Vec::new();
    for b in csp.constraints() {
        let d = b.domain();
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                pairs.push((d[i], d[j]));
            }
        }
    }
    Ok(Graph::from_edges(csp.universe(), &pairs)?)
}

fn verified_solution(csp: &Csp, f: &PartialColoring) -> Result<(bool, Vec<u32>), Failure> {
    let total = f.to_total(csp.universe())?;
    Ok((csp.is_solution(f)?, total))
}

fn cmd_solve(a: SolveArgs) -> Outcome {
    let csp = io::read_csp(&a.input)?;
    let cap = a.common.precision_cap;
    let mut report = json!({
        "command": "solve",
        "variables": csp.universe(),
        "constraints": csp.len(),
        "q": csp.q(),
        "p": rational_string(&csp.p_param()),
        "d": csp.d_param(),
        "classic": check_condition(&csp, LllCondition::Classic, cap)?,
    });
    let found = match a.solver {
        SolverKind::Brute => {
            report["solver"] = json!("brute");
            let budget = a.budget.unwrap_or(DEFAULT_BRUTE_FORCE_BUDGET);
            report["budget"] = json!(budget);
            brute_force_solve(&csp, budget)?
        }
        SolverKind::MoserTardos => {
            report["solver"] = json!("moser-tardos");
            let mt = moser_tardos(&csp, a.common.seed, a.trials)?;
            report["moser_tardos"] = serde_json::to_value(&mt).map_err(Error::from)?;
            if mt.solution.is_none() {
                report["status"] = json!("failed");
                return Ok((report, 1));
            }
            mt.solution
        }
        SolverKind::Shattering => {
            report["solver"] = json!("shattering");
            let (partition, default_s, default_budget) = load_partition(&a, &csp)?;
            let s = a.s.unwrap_or(default_s);
            let budget = a.budget.unwrap_or(default_budget);
            report["s"] = json!(s);
            report["budget"] = json!(budget);
            report["classes"] = json!(partition.len());
            report["width"] = json!(shattering_width(&partition, &csp)?);
            let condition = check_condition(&csp, LllCondition::Shatter(s as u32), cap)?;
            report["condition"] = serde_json::to_value(&condition).map_err(Error::from)?;
            match shattering_solve(&csp, &partition, s, budget, cap) {
                Ok(rep) => {
                    let coloring = rep.coloring.clone();
                    report["rounds"] = serde_json::to_value(&rep.rounds).map_err(Error::from)?;
                    Some(coloring)
                }
                Err(Error::ConditionViolated(msg)) => {
                    report["status"] = json!("condition-violated");
                    report["message"] = json!(msg);
                    return Ok((report, 3));
                }
                Err(e) => return Err(e.into()),
            }
        }
    };
    match found {
        Some(f) => {
            let (ok, total) = verified_solution(&csp, &f)?;
            report["status"] = json!(if ok { "solved" } else { "invalid" });
            report["verified"] = json!(ok);
            report["solution"] = json!(total);
            Ok((report, if ok { 0 } else { 1 }))
        }
        None => {
            report["status"] = json!("unsatisfiable");
            Ok((report, 1))
        }
    }
}

fn load_partition(a: &SolveArgs, csp: &Csp) -> Result<(FinitePartition, usize, usize), Failure> {
    if let Some(p) = &a.partition {
        let partition = io::read_json::<PartitionFile>(p)?.to_partition(csp.universe())?;
        let width = shattering_width(&partition, csp)?;
        let size = partition.max_class_size();
        return Ok((partition, width, size));
    }
    if let Some(w) = &a.witness {
        let g = match &a.graph {
            Some(path) => io::read_graph(path)?,
            None => primal_graph(csp)?,
        };
        if g.n() != csp.universe() {
            return Err(input_error("graph and CSP disagree on the number of variables"));
        }
        let witness = io::read_json::<WitnessFile>(w)?.to_witness(g.n())?;
        let partition = partition_from_separation(&g, &witness)?;
        return Ok((partition, witness.s() + 1, witness.budget));
    }
    Err(input_error("the shattering solver needs --partition or --witness"))
}

fn cmd_check(a: CheckArgs) -> Outcome {
    let csp = io::read_csp(&a.input)?;
    let cap = a.common.precision_cap;
    let conds = [LllCondition::Classic, LllCondition::Shatter(a.s), LllCondition::Separation(a.s), LllCondition::Polynomial];
    let reports = conds.iter().map(|&c| check_condition(&csp, c, cap)).collect::<lllkit::Result<Vec<_>>>()?;
    Ok((
        json!({
            "command": "check",
            "p": rational_string(&csp.p_param()),
            "d": csp.d_param(),
            "conditions": reports,
        }),
        0,
    ))
}

fn parse_problem(spec: &str) -> Result<LclProblem, Failure> {
    let (name, arg) = spec.split_once(':').map_or((spec, None), |(n, a)| (n, Some(a)));
    let num = |a: Option<&str>| -> Result<u64, Failure> {
        a.ok_or_else(|| input_error(format!("{name} needs a parameter")))?
            .parse()
            .map_err(|_| input_error(format!("bad parameter in {spec}")))
    };
    Ok(match name {
        "always-true" => LclProblem::always_true(),
        "proper-coloring" => LclProblem::proper_coloring(num(arg)?),
        "distinct-labels" => LclProblem::distinct_labels(),
        "weak-coloring" => LclProblem::weak_coloring(),
        "mis" => LclProblem::mis(),
        "sinkless" => LclProblem::sinkless_orientation(),
        _ => return Err(input_error(format!("unknown problem {spec}"))),
    })
}

fn parse_algorithm(spec: &str) -> Result<Arc<dyn LocalAlgorithm>, Failure> {
    let (name, arg) = spec.split_once(':').map_or((spec, None), |(n, a)| (n, Some(a)));
    let num = |a: Option<&str>| -> Result<u64, Failure> {
        a.ok_or_else(|| input_error(format!("{name} needs a parameter")))?
            .parse()
            .map_err(|_| input_error(format!("bad parameter in {spec}")))
    };
    Ok(match name {
        "constant" => Arc::new(Constant(num(arg)?)),
        "identity" => Arc::new(Identity),
        "uniform" => {
            let q = num(arg)?;
            if q == 0 {
                return Err(input_error("uniform needs q >= 1"));
            }
            Arc::new(UniformColorTrial { q })
        }
        "greedy" => Arc::new(GreedyById),
        "luby" => Arc::new(LubyMis { phases: num(arg)? as usize }),
        "sinkless-trial" => Arc::new(SinklessRandomTrial),
        _ => return Err(input_error(format!("unknown algorithm {spec}"))),
    })
}

fn load_structured(path: &Path, subdivide_it: bool) -> Result<StructuredGraph, Failure> {
    let sg = io::read_json::<StructuredFile>(path)?.to_structured()?;
    if subdivide_it {
        Ok(subdivide(sg.graph(), |e| e.v)?.structured)
    } else {
        Ok(sg)
    }
}

fn cmd_reduce(a: ReduceArgs) -> Outcome {
    let sg = load_structured(&a.local.input, a.local.subdivide)?;
    let problem = parse_problem(&a.local.problem)?;
    let alg = parse_algorithm(&a.local.algorithm)?;
    if let Some(w) = &a.witness {
        let witness = io::read_json::<WitnessFile>(w)?.to_witness(sg.n())?;
        let opts = PipelineOptions { precision_cap: a.common.precision_cap, ..PipelineOptions::default() };
        return match run_pipeline(&problem, alg, a.local.rounds, a.local.labels, &sg, &witness, &opts) {
            Ok(rep) => {
                let mut v = serde_json::to_value(&rep).map_err(Error::from)?;
                v["command"] = json!("reduce");
                v["status"] = json!("solved");
                Ok((v, 0))
            }
            Err(Error::ConditionViolated(msg)) => {
                Ok((json!({"command": "reduce", "status": "condition-violated", "message": msg}), 3))
            }
            Err(e) => Err(e.into()),
        };
    }
    let out = lcl_to_csp(&problem, alg, a.local.rounds, a.local.labels, &sg, lllkit::bridge::reduction::DEFAULT_ENUMERATION_CAP)?;
    let opts = VerifyOptions { samples: a.trials, seed: a.common.seed, ..VerifyOptions::default() };
    let rep = verify_reduction(&out, &opts)?;
    if let Some(path) = &a.csp_out {
        if !out.is_explicit() {
            return Err(input_error("reduced CSP is not explicit; cannot write it"));
        }
        io::write_json(path, &CspFile::from_csp(&out.csp()?))?;
    }
    let passed = rep.passed;
    let mut v = serde_json::to_value(&rep).map_err(Error::from)?;
    v["command"] = json!("reduce");
    Ok((v, if passed { 0 } else { 1 }))
}

fn cmd_simulate(a: SimulateArgs) -> Outcome {
    let sg = load_structured(&a.local.input, a.local.subdivide)?;
    let problem = parse_problem(&a.local.problem)?;
    let alg = parse_algorithm(&a.local.algorithm)?;
    let rounds = a.local.rounds;
    if let Some(path) = &a.theta {
        let theta = io::read_json::<LabelsFile>(path)?.labels;
        let output = run_local(alg.as_ref(), &sg, &theta, rounds)?;
        let check = check_lcl(&problem, &sg, &output)?;
        let ok = check.ok;
        return Ok((json!({"command": "simulate", "mode": "labeling", "output": output, "check": check}), if ok { 0 } else { 1 }));
    }
    if a.ids {
        let ids: Vec<u64> = (0..sg.n() as u64).collect();
        let run = run_deterministic(alg.as_ref(), &problem, &sg, &ids, rounds)?;
        let mut report = json!({"command": "simulate", "mode": "deterministic", "run": run});
        let mut ok = run.check.ok;
        if sg.n() <= local::runner::MAX_SWEEP_VERTICES {
            let sweep = id_sweep(alg.as_ref(), &problem, &sg, rounds)?;
            ok &= sweep.failures == 0;
            report["sweep"] = serde_json::to_value(&sweep).map_err(Error::from)?;
        }
        return Ok((report, if ok { 0 } else { 1 }));
    }
    let run = run_randomized(alg.as_ref(), &problem, &sg, a.local.labels as u64, rounds, a.trials, a.common.seed)?;
    Ok((json!({"command": "simulate", "mode": "randomized", "algorithm": alg.name(), "problem": problem.name, "run": run}), 0))
}

fn cmd_schreier(a: SchreierArgs) -> Outcome {
    let action = io::read_action(&a.input)?;
    let route = match a.route {
        RouteKind::Direct => SectionRoute::Direct,
        RouteKind::Lll => SectionRoute::Lll { seed: a.common.seed },
    };
    let coloring = schreier_edge_coloring(&action, route)?;
    let sg = lllkit::apps::schreier_graph(&action)?;
    let mut report = serde_json::to_value(&coloring).map_err(Error::from)?;
    report["command"] = json!("schreier");
    report["edges"] = json!(sg.graph.edge_pairs());
    if a.exact {
        report["chromatic_index"] = match chromatic_index(&sg.graph, 40) {
            Ok(x) => json!(x),
            Err(e) => json!(e.to_string()),
        };
    }
    if let Some(path) = &a.dot {
        std::fs::write(path, io::to_dot(&sg.graph, None, Some(&coloring.colors))).map_err(Error::from)?;
    }
    Ok((report, 0))
}

fn cmd_section(a: SectionArgs) -> Outcome {
    let g1 = io::read_graph(&a.input)?;
    let g2 = match &a.partner {
        Some(p) => io::read_graph(p)?,
        None => g1.clone(),
    };
    let solver = match a.solver {
        SectionSolverKind::MoserTardos => SectionSolver::MoserTardos { max_resamples: a.trials, budget: a.budget },
        SectionSolverKind::Brute => SectionSolver::BruteForce { budget: a.budget },
    };
    let rep = independent_complete_section(&g1, &g2, a.k, a.delta, solver, a.common.seed)?;
    let found = rep.section.is_some();
    let mut v = serde_json::to_value(&rep).map_err(Error::from)?;
    v["command"] = json!("section");
    Ok((v, if found { 0 } else { 1 }))
}

fn cmd_gen(a: GenArgs) -> Outcome {
    std::fs::create_dir_all(&a.dir).map_err(Error::from)?;
    let mut files = Vec::new();
    let mut write = |name: &str, text: lllkit::Result<String>| -> Result<(), Failure> {
        let path = a.dir.join(name);
        std::fs::write(&path, text?).map_err(Error::from)?;
        files.push(path.display().to_string());
        Ok(())
    };
    if let Family::Translations = a.family {
        let shifts = a
            .shifts
            .iter()
            .map(|s| s.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| input_error(format!("bad shift: {e}")))?;
        let action = SchreierAction::translations(&a.dims, &shifts)?;
        write("action.json", io::to_json(&action))?;
        return Ok((json!({"command": "gen", "files": files}), 0));
    }
    let seed = a.common.seed;
    let g = match a.family {
        Family::Path => graph::path(a.n),
        Family::Cycle => graph::cycle(a.n)?,
        Family::Grid => graph::grid(a.width, a.height),
        Family::Complete => graph::complete(a.n),
        Family::Regular => graph::random_regular(a.n, a.degree, seed)?,
        Family::Tree => graph::random_tree(a.n, seed),
        Family::Gnp => graph::random_gnp(a.n, a.p, seed),
        Family::Translations => unreachable!(),
    };
    write("graph.json", io::to_json(&GraphFile::from_graph(&g)))?;
    let csp = match (a.csp, a.q) {
        (Some(CspKind::Sinkless), _) => Some(sinkless::sinkless_orientation_csp(&g, &sinkless::default_choice(&g))?),
        (Some(CspKind::Coloring), None) => return Err(input_error("--csp coloring needs --q")),
        (_, Some(q)) => Some(proper_coloring_csp(&g, q)?),
        (None, None) => None,
    };
    if let Some(csp) = &csp {
        write("csp.json", io::to_json(&CspFile::from_csp(csp)))?;
    }
    if let Some(budget) = a.budget {
        let witness: SeparationWitness = match a.family {
            Family::Grid => grid_separation(a.width, a.height, budget)?,
            Family::Path | Family::Cycle => interval_separation(&g, budget)?,
            _ => return Err(input_error("witnesses are generated for paths, cycles and grids")),
        };
        write("witness.json", io::to_json(&WitnessFile::from_witness(&witness)))?;
        let partition = partition_from_separation(&g, &witness)?;
        write("partition.json", io::to_json(&PartitionFile::from_partition(&partition)))?;
    }
    Ok((json!({"command": "gen", "files": files}), 0))
}
