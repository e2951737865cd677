//! Command-line front end.
//!
//! Exit codes: 0 success, 1 an infeasible / not series-parallel / failed
//! certificate verdict, 2 input or usage error, 3 enumeration budget
//! exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::generators::{
    gen_cut_complete, gen_interior_chain, gen_knapsack_reduction, gen_paradox_complex, gen_paradox_simple,
    gen_random, gen_random_sp, KnapsackData,
};
use crate::instance_io::{
    parse_cost_matrix, parse_flow, parse_instance, parse_potentials, parse_scenario, write_flow,
    write_instance, write_potentials, write_scenario,
};
use crate::mcf::{certify_optimality, min_cost_flow, McfResult};
use crate::milp::emit_milp;
use crate::model::{Instance, Scenario};
use crate::oracle::{BruteForce, OracleError, DEFAULT_BUDGET};
use crate::paradox::{
    detect_paradox, most_negative_improving_path_complete, worst_value_profile, ParadoxError,
};
use crate::spdp::{parse_sp_tree, sp_decompose, worst_value_with_tree, SpError, SpOutcome};
use crate::structure::{extremalize_to_forest, interior_arcs, StructureError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Overrides the enumeration budget of the brute-force oracle.
pub const BUDGET_VAR: &str = "IFLOW_BUDGET";

#[derive(Parser, Debug)]
#[command(
    name = "iflow",
    version,
    about = "Worst-case optimal values of min-cost flows with interval capacities"
)]
struct Cli {
    /// Print only the essential result lines.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Sp,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimum cost flow for one scenario.
    Solve {
        instance: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        flow_out: Option<PathBuf>,
        /// Write certifying node potentials.
        #[arg(long)]
        pi_out: Option<PathBuf>,
    },
    /// Worst optimal value c_w over all scenarios.
    Worst {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "brute")]
        method: Method,
        /// Decomposition tree for --method sp, e.g. "P(S(0,1),2)".
        #[arg(long)]
        tree: Option<String>,
        /// Override the flow amount of the instance.
        #[arg(long)]
        flow_amount: Option<i64>,
        #[arg(long)]
        scenario_out: Option<PathBuf>,
        #[arg(long)]
        flow_out: Option<PathBuf>,
        /// Write node potentials certifying the worst flow.
        #[arg(long)]
        pi_out: Option<PathBuf>,
    },
    /// Reshape a worst scenario so that its interior arcs form a forest.
    Extremalize {
        instance: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        flow: PathBuf,
        #[arg(long)]
        scenario_out: Option<PathBuf>,
        #[arg(long)]
        flow_out: Option<PathBuf>,
    },
    /// c_w profile over flow amounts and the first more-for-less step.
    Paradox {
        instance: PathBuf,
        #[arg(long)]
        fmax: Option<i64>,
    },
    /// Immunity of a complete digraph's cost matrix.
    Immune {
        #[arg(long)]
        complete: usize,
        #[arg(long)]
        costs: PathBuf,
        #[arg(long, default_value_t = 1)]
        source: usize,
        /// Defaults to the last node.
        #[arg(long)]
        sink: Option<usize>,
    },
    /// Write the big-M model in LP format.
    EmitMilp {
        instance: PathBuf,
        #[arg(long)]
        tighten: bool,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Check an optimality certificate.
    Certify {
        instance: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        flow: PathBuf,
        #[arg(long)]
        pi: PathBuf,
    },
    /// Generate an instance file.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(subcommand)]
    family: Family,
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Knapsack reduction.
    Knapsack {
        #[arg(long)]
        capacity: i64,
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<i64>,
    },
    /// Chain whose worst scenario has n - 1 interior arcs.
    Chain {
        #[arg(long)]
        n: usize,
    },
    ParadoxSimple,
    ParadoxComplex,
    /// Complete digraph with [0, 2] capacities.
    Cut {
        #[arg(long)]
        n: usize,
    },
    /// Seeded random instance.
    Random {
        #[arg(long, default_value_t = 4)]
        nodes: usize,
        #[arg(long, default_value_t = 6)]
        arcs: usize,
        #[arg(long, default_value_t = 2)]
        cap_hi: i64,
        #[arg(long, default_value_t = 5)]
        cost_hi: i64,
        #[arg(long, default_value_t = 1)]
        flow: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Grow a series-parallel graph instead (ignores --nodes).
        #[arg(long)]
        series_parallel: bool,
    },
}

/// A failure that ends the invocation with a nonzero code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::BudgetExceeded { .. } => EXIT_BUDGET,
            OracleError::AllInfeasible => EXIT_VERDICT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ParadoxError> for Failure {
    fn from(e: ParadoxError) -> Self {
        match e {
            ParadoxError::Oracle(o) => o.into(),
            other => Failure::input(other.to_string()),
        }
    }
}

type Outcome = Result<i32, Failure>;

struct Ctx<'a> {
    out: &'a mut dyn Write,
    quiet: bool,
    brute: BruteForce,
}

impl Ctx<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", s.as_ref());
    }

    /// Prose suppressed by --quiet.
    fn info(&mut self, s: impl AsRef<str>) {
        if !self.quiet {
            self.line(s);
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_scenario(path: &Path, inst: &Instance) -> Result<Scenario, Failure> {
    parse_scenario(&read(path)?, inst).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn budget_from_env() -> Result<BruteForce, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map(|budget| BruteForce { budget })
            .map_err(|_| Failure::input(format!("{BUDGET_VAR} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(BruteForce {
            budget: DEFAULT_BUDGET,
        }),
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let brute = match budget_from_env() {
        Ok(b) => b,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let mut ctx = Ctx {
        out,
        quiet: cli.quiet,
        brute,
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, ctx: &mut Ctx) -> Outcome {
    match command {
        Command::Solve {
            instance,
            scenario,
            flow_out,
            pi_out,
        } => solve(ctx, &instance, &scenario, flow_out.as_deref(), pi_out.as_deref()),
        Command::Worst {
            instance,
            method,
            tree,
            flow_amount,
            scenario_out,
            flow_out,
            pi_out,
        } => {
            let mut inst = load_instance(&instance)?;
            if let Some(f) = flow_amount {
                if f < 0 {
                    return Err(Failure::input("flow amount must be nonnegative"));
                }
                inst = inst.with_flow_amount(f);
            }
            match method {
                Method::Brute => {
                    if tree.is_some() {
                        return Err(Failure::input("--tree requires --method sp"));
                    }
                    let outputs = [scenario_out.as_deref(), flow_out.as_deref(), pi_out.as_deref()];
                    worst_brute(ctx, &inst, outputs)
                }
                Method::Sp => {
                    if scenario_out.is_some() || flow_out.is_some() || pi_out.is_some() {
                        return Err(Failure::input(
                            "--scenario-out, --flow-out and --pi-out require --method brute",
                        ));
                    }
                    worst_sp(ctx, &inst, tree.as_deref())
                }
            }
        }
        Command::Extremalize {
            instance,
            scenario,
            flow,
            scenario_out,
            flow_out,
        } => extremalize(
            ctx,
            &instance,
            &scenario,
            &flow,
            scenario_out.as_deref(),
            flow_out.as_deref(),
        ),
        Command::Paradox { instance, fmax } => paradox(ctx, &instance, fmax),
        Command::Immune {
            complete,
            costs,
            source,
            sink,
        } => immune(ctx, complete, &costs, source, sink.unwrap_or(complete)),
        Command::EmitMilp {
            instance,
            tighten,
            output,
        } => {
            let inst = load_instance(&instance)?;
            write_file(&output, &emit_milp(&inst, tighten))?;
            ctx.info(format!("wrote {}", output.display()));
            Ok(EXIT_OK)
        }
        Command::Certify {
            instance,
            scenario,
            flow,
            pi,
        } => certify(ctx, &instance, &scenario, &flow, &pi),
        Command::Gen(args) => generate(ctx, args),
    }
}

fn solve(
    ctx: &mut Ctx,
    instance: &Path,
    scenario: &Path,
    flow_out: Option<&Path>,
    pi_out: Option<&Path>,
) -> Outcome {
    let inst = load_instance(instance)?;
    let scen = load_scenario(scenario, &inst)?;
    match min_cost_flow(&inst, &scen) {
        McfResult::Infeasible { max_flow } => {
            ctx.line("INFEASIBLE");
            ctx.info(format!("maximum flow {max_flow} < {}", inst.flow_amount));
            Ok(EXIT_VERDICT)
        }
        McfResult::Optimal { flow, potentials } => {
            ctx.line(format!("cost = {}", flow.total_cost));
            if let Some(p) = flow_out {
                write_file(p, &write_flow(&flow))?;
            }
            if let Some(p) = pi_out {
                write_file(p, &write_potentials(&potentials))?;
            }
            if !ctx.quiet {
                for (e, x) in flow.values.iter().enumerate() {
                    ctx.line(format!("x {e} = {x}"));
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// `outputs` are the scenario, flow and potential file paths.
fn worst_brute(ctx: &mut Ctx, inst: &Instance, outputs: [Option<&Path>; 3]) -> Outcome {
    let [scenario_out, flow_out, pi_out] = outputs;
    let w = match ctx.brute.worst_value(inst) {
        Ok(w) => w,
        Err(OracleError::AllInfeasible) => {
            ctx.line("INFEASIBLE");
            return Ok(EXIT_VERDICT);
        }
        Err(e) => return Err(e.into()),
    };
    ctx.line(format!("c_w = {}", w.c_w));
    ctx.info(format!("worst scenario: {}", join(&w.scenario.capacities)));
    ctx.info(format!("optimal flow:   {}", join(&w.flow.values)));
    ctx.info(format!("feasible scenarios: {}", w.feasible_count));
    if let Some(p) = scenario_out {
        write_file(p, &write_scenario(&w.scenario))?;
    }
    if let Some(p) = flow_out {
        write_file(p, &write_flow(&w.flow))?;
    }
    if let Some(p) = pi_out {
        let (_, pi) = min_cost_flow(inst, &w.scenario)
            .into_optimal()
            .expect("worst scenario is feasible");
        write_file(p, &write_potentials(&pi))?;
    }
    Ok(EXIT_OK)
}

fn worst_sp(ctx: &mut Ctx, inst: &Instance, tree: Option<&str>) -> Outcome {
    let tree = match tree {
        Some(text) => parse_sp_tree(text, inst).map_err(|e| Failure::input(e.to_string()))?,
        None => match sp_decompose(inst) {
            Ok(t) => t,
            Err(SpError::NotSeriesParallel | SpError::Disconnected) => {
                ctx.line("NOT SERIES-PARALLEL");
                return Ok(EXIT_VERDICT);
            }
            Err(e) => return Err(Failure::input(e.to_string())),
        },
    };
    ctx.info(format!("decomposition: {tree}"));
    match worst_value_with_tree(&tree, inst) {
        SpOutcome::Worst(c) => {
            ctx.line(format!("c_w = {c}"));
            Ok(EXIT_OK)
        }
        SpOutcome::Infeasible => {
            ctx.line("INFEASIBLE");
            Ok(EXIT_VERDICT)
        }
    }
}

fn extremalize(
    ctx: &mut Ctx,
    instance: &Path,
    scenario: &Path,
    flow: &Path,
    scenario_out: Option<&Path>,
    flow_out: Option<&Path>,
) -> Outcome {
    let inst = load_instance(instance)?;
    let scen = load_scenario(scenario, &inst)?;
    let flow =
        parse_flow(&read(flow)?, &inst).map_err(|e| Failure::input(format!("{}: {e}", flow.display())))?;
    let out = extremalize_to_forest(&inst, &scen, &flow).map_err(|e| match e {
        StructureError::NotWorstCase { .. } | StructureError::NotOptimal => Failure {
            code: EXIT_VERDICT,
            message: e.to_string(),
        },
        other => Failure::input(other.to_string()),
    })?;
    let interior = interior_arcs(&inst, &out.scenario);
    ctx.line(format!("cost = {}", out.flow.total_cost));
    ctx.line(format!(
        "interior arcs ({}): {}",
        interior.len(),
        join(&interior.arcs)
    ));
    ctx.info(format!("cycles canceled: {}", out.iterations));
    ctx.info(format!("scenario: {}", join(&out.scenario.capacities)));
    if let Some(p) = scenario_out {
        write_file(p, &write_scenario(&out.scenario))?;
    }
    if let Some(p) = flow_out {
        write_file(p, &write_flow(&out.flow))?;
    }
    Ok(EXIT_OK)
}

fn paradox(ctx: &mut Ctx, instance: &Path, fmax: Option<i64>) -> Outcome {
    let inst = load_instance(instance)?;
    let top = crate::mcf::max_flow_value(&inst, &Scenario::upper(&inst));
    let limit = fmax.map_or(top, |k| k.min(top));
    if !ctx.quiet {
        ctx.line("f\tc_w");
        for (f, c) in worst_value_profile(&inst, limit, &ctx.brute)? {
            ctx.line(match c {
                Some(c) => format!("{f}\t{c}"),
                None => format!("{f}\tinfeasible"),
            });
        }
    }
    match detect_paradox(&inst, fmax, &ctx.brute)? {
        None => ctx.line("NO PARADOX"),
        Some(r) => {
            ctx.line(format!(
                "PARADOX at f = {}: c_w {} -> {}",
                r.f, r.c_w_at_f, r.c_w_at_f_plus_1
            ));
            if let Some(w) = r.witness {
                ctx.line(format!("witness: {w} (cost {})", w.signed_cost(&inst)));
            }
        }
    }
    Ok(EXIT_OK)
}

fn immune(ctx: &mut Ctx, n: usize, costs: &Path, s: usize, t: usize) -> Outcome {
    let matrix =
        parse_cost_matrix(&read(costs)?).map_err(|e| Failure::input(format!("{}: {e}", costs.display())))?;
    let (path, cost) = most_negative_improving_path_complete(n, &matrix, s, t)?;
    ctx.line(if cost >= 0 { "IMMUNE" } else { "NOT-IMMUNE" });
    ctx.info(format!("most negative improving path: {path} (cost {cost})"));
    Ok(EXIT_OK)
}

fn certify(ctx: &mut Ctx, instance: &Path, scenario: &Path, flow: &Path, pi: &Path) -> Outcome {
    let inst = load_instance(instance)?;
    let scen = load_scenario(scenario, &inst)?;
    let flow =
        parse_flow(&read(flow)?, &inst).map_err(|e| Failure::input(format!("{}: {e}", flow.display())))?;
    let pi =
        parse_potentials(&read(pi)?, &inst).map_err(|e| Failure::input(format!("{}: {e}", pi.display())))?;
    match certify_optimality(&inst, &scen, &flow, &pi) {
        Ok(()) => {
            ctx.line("CERTIFIED");
            ctx.info(format!("cost = {}", flow.total_cost));
            Ok(EXIT_OK)
        }
        Err(e) => {
            ctx.line("NOT CERTIFIED");
            ctx.info(e.to_string());
            Ok(EXIT_VERDICT)
        }
    }
}

fn generate(ctx: &mut Ctx, args: GenArgs) -> Outcome {
    let inst = match args.family {
        Family::Knapsack {
            capacity,
            weights,
            values,
        } => {
            let k =
                KnapsackData::new(capacity, weights, values).map_err(|e| Failure::input(e.to_string()))?;
            gen_knapsack_reduction(&k)
        }
        Family::Chain { n } => gen_interior_chain(n).map_err(|e| Failure::input(e.to_string()))?,
        Family::ParadoxSimple => gen_paradox_simple(),
        Family::ParadoxComplex => gen_paradox_complex(),
        Family::Cut { n } => gen_cut_complete(n).map_err(|e| Failure::input(e.to_string()))?,
        Family::Random {
            nodes,
            arcs,
            cap_hi,
            cost_hi,
            flow,
            seed,
            series_parallel,
        } => if series_parallel {
            gen_random_sp(arcs, cap_hi, cost_hi, flow, seed)
        } else {
            gen_random(nodes, arcs, cap_hi, cost_hi, flow, seed)
        }
        .map_err(|e| Failure::input(e.to_string()))?,
    };
    let text = write_instance(&inst);
    match args.output {
        Some(p) => {
            write_file(&p, &text)?;
            ctx.info(format!(
                "wrote {} ({} nodes, {} arcs)",
                p.display(),
                inst.num_nodes,
                inst.num_arcs()
            ));
        }
        None => {
            let _ = ctx.out.write_all(text.as_bytes());
        }
    }
    Ok(EXIT_OK)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}
