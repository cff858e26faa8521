//! `gridex` command-line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use gridex::adversary::{
    adaptive_gadget_run, find_hard_pair_g24, gen_gadget_ladder, gen_greedy_trap_ladder,
    gen_greedy_trap_square, gen_random, minimax_value, GadgetChoice, InstanceFamily,
};
use gridex::engine::default_step_budget;
use gridex::opt::{best_known_opt, optimal_cost, OptError};
use gridex::report::{evaluate, ratio_decimal, EvalLimits, RatioReport, RatioRow};
use gridex::strategy::StrategyRegistry;
use gridex::{parse_instance, run, serialize_instance, GridSpec, Instance, Ratio, StaticSource, Trace, Vertex};

const BUDGET_ENV: &str = "GRIDEX_STEP_BUDGET";

#[derive(Parser)]
#[command(name = "gridex", version, about = "Online exploration of weighted grids")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a strategy on an instance and write its trace.
    Explore {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Exact offline optimum.
    Opt {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Strict ratios for every instance matching a glob.
    Ratio {
        #[arg(long)]
        instances: String,
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 0 uses every processor.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        budget: Option<u64>,
        /// Vertex limit of the exhaustive optimum search (at most 63).
        #[arg(long)]
        opt_limit: Option<usize>,
    },
    /// Exact minimax value of the full `{1, k}` family.
    Minimax {
        #[arg(long, default_value_t = 2)]
        rows: u32,
        #[arg(long)]
        cols: u32,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value = "1,1", value_parser = parse_vertex)]
        start: Vertex,
        #[arg(long)]
        directed: bool,
        /// Hop limit per travel leg.
        #[arg(long, default_value_t = 8)]
        step_cap: usize,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Instance generators.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Run a strategy against the adaptive gadget adversary.
    Adaptive {
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        k: u64,
        /// Committed instance.
        #[arg(long)]
        instance_out: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Args)]
struct OutArg {
    /// Destination file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCmd {
    GadgetLadder {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        k: u64,
        /// One letter per gadget, `F` or `S`; alternating when absent.
        #[arg(long)]
        choices: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    TrapLadder {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100)]
        k: u64,
        #[command(flatten)]
        out: OutArg,
    },
    TrapSquare {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100)]
        k: u64,
        #[command(flatten)]
        out: OutArg,
    },
    Random {
        #[arg(long)]
        rows: u32,
        #[arg(long)]
        cols: u32,
        #[arg(long, default_value_t = 5)]
        k: u64,
        #[arg(long, default_value_t = 0.5)]
        p_heavy: f64,
        #[arg(long)]
        directed: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Writes `I1.grid` and `I2.grid` into a directory.
    HardPair {
        #[arg(long, default_value_t = 5)]
        k: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_vertex(s: &str) -> Result<Vertex, String> {
    let (r, c) = s.split_once(',').ok_or("expected `row,col`")?;
    let p = |x: &str| x.trim().parse::<u32>().map_err(|e| e.to_string());
    Ok(Vertex::new(p(r)?, p(c)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

type Res<T> = Result<T, String>;

fn dispatch(cmd: Cmd) -> Res<()> {
    match cmd {
        Cmd::Explore { instance, strategy, trace, budget } => explore(&instance, &strategy, trace, budget),
        Cmd::Opt { instance, witness } => opt(&instance, witness),
        Cmd::Ratio { instances, strategy, out, jobs, budget, opt_limit } => {
            ratio(&instances, &strategy, out, jobs, budget, opt_limit)
        }
        Cmd::Minimax { rows, cols, k, start, directed, step_cap, witness } => {
            minimax(rows, cols, k, start, directed, step_cap, witness)
        }
        Cmd::Gen(g) => generate(g),
        Cmd::Adaptive { strategy, m, k, instance_out, trace, budget } => {
            adaptive(&strategy, m, k, instance_out, trace, budget)
        }
    }
}

fn load(path: &Path) -> Res<Instance> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_instance(&bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &OutArg, text: &str) -> Res<()> {
    match &out.out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_trace(path: &Path, trace: &Trace) -> Res<()> {
    write(path, &trace.to_csv_string())
}

/// `--budget`, then the environment, then `None`.
fn step_budget(flag: Option<u64>) -> Res<Option<u64>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{BUDGET_ENV}={v:?} is not a step count")),
        Err(_) => Ok(None),
    }
}

fn strategy_by_name(reg: &StrategyRegistry, name: &str) -> Res<Box<dyn gridex::Strategy + Send>> {
    reg.create(name).ok_or_else(|| {
        let known: Vec<_> = reg.names().collect();
        format!("unknown strategy `{name}` (known: {})", known.join(", "))
    })
}

fn explore(path: &Path, strategy: &str, trace: Option<PathBuf>, budget: Option<u64>) -> Res<()> {
    let inst = load(path)?;
    let reg = StrategyRegistry::with_builtins();
    let mut agent = strategy_by_name(&reg, strategy)?;
    let k = inst.k.unwrap_or_else(|| inst.weights.iter().copied().max().unwrap_or(1));
    let budget = step_budget(budget)?.unwrap_or_else(|| default_step_budget(&inst.spec, k));
    let out = run(StaticSource::new(inst.clone()), inst.start, &mut agent, budget).map_err(|e| e.to_string())?;
    if let Some(p) = trace {
        write_trace(&p, &out.trace)?;
    }
    println!("cost={} complete={}", out.trace.total_cost, out.trace.complete);
    Ok(())
}

fn opt(path: &Path, witness: Option<PathBuf>) -> Res<()> {
    let inst = load(path)?;
    let cost = match (&witness, optimal_cost(&inst)) {
        (Some(p), Ok(r)) => {
            let t = Trace::from_walk("opt", &inst, &r.witness).ok_or("witness is not a walk")?;
            write_trace(p, &t)?;
            r.cost
        }
        (_, Ok(r)) => r.cost,
        (None, Err(OptError::TooLarge { .. })) if inst.spec.is_ladder() && !inst.spec.directed => {
            best_known_opt(&inst).map_err(|e| e.to_string())?
        }
        (_, Err(e @ OptError::TooLarge { .. })) => {
            return Err(format!(
                "{e}; replay a known covering walk as a trace and compare its cost instead"
            ))
        }
        (_, Err(e)) => return Err(e.to_string()),
    };
    println!("opt={cost}");
    Ok(())
}

fn ratio(
    pattern: &str,
    strategy: &str,
    out: Option<PathBuf>,
    jobs: usize,
    budget: Option<u64>,
    opt_limit: Option<usize>,
) -> Res<()> {
    let paths: Vec<PathBuf> = glob::glob(pattern)
        .map_err(|e| format!("bad glob `{pattern}`: {e}"))?
        .filter_map(Result::ok)
        .filter(|p| p.is_file())
        .collect();
    if paths.is_empty() {
        return Err(format!("no instances match `{pattern}`"));
    }
    let limits = EvalLimits {
        step_budget: step_budget(budget)?,
        opt_vertex_limit: opt_limit,
    };
    let reg = StrategyRegistry::with_builtins();
    strategy_by_name(&reg, strategy)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| e.to_string())?;
    let rows = pool.install(|| {
        paths
            .par_iter()
            .map(|p| {
                let label = p.display().to_string();
                match load(p) {
                    Ok(inst) => evaluate(&label, &inst, strategy, &reg, limits),
                    Err(e) => RatioRow::failed(&label, strategy, e),
                }
            })
            .collect::<Vec<_>>()
    });
    let report = RatioReport::new(rows);
    let csv = report.to_csv_string();
    match &out {
        Some(p) => write(p, &csv)?,
        None => print!("{csv}"),
    }
    let fmt = |r: Ratio| format!("{}/{} ({})", r.numer(), r.denom(), ratio_decimal(r));
    eprintln!(
        "rows={} max={} mean={}",
        report.rows.len(),
        report.max_ratio().map_or("-".into(), fmt),
        report.mean_ratio().map_or("-".into(), |m| format!("{m:.6}"))
    );
    let failed = report.rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        return Err(format!("{failed} row(s) reported errors"));
    }
    Ok(())
}

fn minimax(
    rows: u32,
    cols: u32,
    k: u64,
    start: Vertex,
    directed: bool,
    step_cap: usize,
    witness: Option<PathBuf>,
) -> Res<()> {
    let spec = GridSpec::new(rows, cols, directed).map_err(|e| e.to_string())?;
    if !spec.contains(start) {
        return Err(format!("start {},{} is outside the grid", start.row, start.col));
    }
    let family = InstanceFamily::all(spec, start, k).map_err(|e| e.to_string())?;
    let res = minimax_value(&family, step_cap).map_err(|e| e.to_string())?;
    if let Some(p) = witness {
        write(&p, &res.witness_text())?;
    }
    println!("value={}/{}", res.value.numer(), res.value.denom());
    Ok(())
}

fn parse_choices(s: &str) -> Res<Vec<GadgetChoice>> {
    s.chars()
        .map(|c| match c.to_ascii_uppercase() {
            'F' => Ok(GadgetChoice::First),
            'S' => Ok(GadgetChoice::Second),
            _ => Err(format!("bad gadget choice `{c}`, expected F or S")),
        })
        .collect()
}

fn generate(cmd: GenCmd) -> Res<()> {
    let err = |e: gridex::adversary::AdversaryError| e.to_string();
    match cmd {
        GenCmd::GadgetLadder { m, k, choices, out } => {
            let choices = choices.as_deref().map(parse_choices).transpose()?;
            let g = gen_gadget_ladder(m, k, choices.as_deref()).map_err(err)?;
            emit(&out, &serialize_instance(&g))
        }
        GenCmd::TrapLadder { n, k, out } => {
            let t = gen_greedy_trap_ladder(n, k).map_err(err)?;
            emit(&out, &serialize_instance(&t.instance))
        }
        GenCmd::TrapSquare { n, k, out } => {
            let t = gen_greedy_trap_square(n, k).map_err(err)?;
            emit(&out, &serialize_instance(&t.instance))
        }
        GenCmd::Random { rows, cols, k, p_heavy, directed, seed, out } => {
            let spec = GridSpec::new(rows, cols, directed).map_err(|e| e.to_string())?;
            let g = gen_random(spec, k, p_heavy, seed).map_err(err)?;
            emit(&out, &serialize_instance(&g))
        }
        GenCmd::HardPair { k, out } => {
            let (a, b) = find_hard_pair_g24(k).map_err(err)?;
            fs::create_dir_all(&out).map_err(|e| format!("{}: {e}", out.display()))?;
            for (name, inst) in [("I1", &a), ("I2", &b)] {
                let cost = optimal_cost(inst).map_err(|e| e.to_string())?.cost;
                write(&out.join(format!("{name}.grid")), &serialize_instance(inst))?;
                println!("{name} opt={cost}");
            }
            Ok(())
        }
    }
}

fn adaptive(
    strategy: &str,
    m: usize,
    k: u64,
    instance_out: Option<PathBuf>,
    trace: Option<PathBuf>,
    budget: Option<u64>,
) -> Res<()> {
    let reg = StrategyRegistry::with_builtins();
    let mut agent = strategy_by_name(&reg, strategy)?;
    let res = adaptive_gadget_run(&mut agent, m, k, step_budget(budget)?).map_err(|e| e.to_string())?;
    if let Some(p) = instance_out {
        write(&p, &serialize_instance(&res.instance))?;
    }
    if let Some(p) = trace {
        write_trace(&p, &res.trace)?;
    }
    let r = res.ratio.ok_or("the strategy did not finish exploring")?;
    println!(
        "ratio={}/{} decimal={} cost={} opt={}",
        r.numer(),
        r.denom(),
        ratio_decimal(r),
        res.trace.total_cost,
        res.opt
    );
    Ok(())
}
