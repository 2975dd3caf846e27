use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use evrp_vns::bench::{list_instances, run_bench, BksTable};
use evrp_vns::construction::ConstructionId;
use evrp_vns::local_search::LsFlags;
use evrp_vns::solution::{read_solution, write_solution};
use evrp_vns::vns::{solve, SearchParams, SizeBasis, StopCondition, EVALS_PER_NODE};
use evrp_vns::{validate, Instance};

#[derive(Parser)]
#[command(name = "evrp", version, about = "Electric vehicle routing solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and write the solution.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        stop: StopArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Solution file; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Progress CSV (elapsed_s, evals, best_weight).
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Check a solution file against an instance.
    Validate {
        instance: PathBuf,
        solution: PathBuf,
    },
    /// Run several seeds on every instance of a directory.
    Bench {
        #[arg(env = "EVRP_DATASET_DIR")]
        dir: PathBuf,
        #[arg(long, default_value_t = 20)]
        runs: usize,
        #[arg(long, default_value_t = 1)]
        seed_base: u64,
        /// Reference scores (`instance,bks,origin`); the bundled table by default.
        #[arg(long)]
        bks: Option<PathBuf>,
        /// Write the report as CSV here as well.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        stop: StopArgs,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Setup label, e.g. VNS_zga_c:14_ls:110_p:2_r:0.35; other flags override it.
    #[arg(long)]
    setup: Option<String>,
    /// Construction (c0, c5..c8, c10, c12, c14 or a name such as dbca-mcwsa).
    #[arg(long)]
    construction: Option<ConstructionId>,
    /// Station operator flags [realloc-1, realloc-more, realloc-all].
    #[arg(long)]
    ls: Option<LsFlags>,
    /// Perturbation cuts.
    #[arg(short)]
    p: Option<usize>,
    /// Restart ratio.
    #[arg(short)]
    r: Option<f64>,
    /// Scale budgets and restarts by the customer count instead of all nodes.
    #[arg(long)]
    per_customer: bool,
}

impl SearchArgs {
    fn params(&self) -> Result<SearchParams> {
        let mut p = SearchParams::default();
        if let Some(s) = &self.setup {
            p = p.apply_setup(s)?;
        }
        if let Some(c) = self.construction {
            p.construction = c;
        }
        if let Some(ls) = self.ls {
            p.ls = ls;
        }
        if let Some(v) = self.p {
            p.p = v;
        }
        if let Some(v) = self.r {
            p.r = v;
        }
        if self.per_customer {
            p.size_basis = SizeBasis::Customers;
        }
        p.check()?;
        Ok(p)
    }
}

#[derive(Args)]
struct StopArgs {
    /// Evaluation cap.
    #[arg(long, conflicts_with_all = ["evals_per_node", "time_limit", "time_budget_eq10"])]
    evals: Option<u64>,
    /// Evaluation cap per instance node (the default stop uses 25000).
    #[arg(long, conflicts_with_all = ["time_limit", "time_budget_eq10"])]
    evals_per_node: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long, conflicts_with = "time_budget_eq10")]
    time_limit: Option<f64>,
    /// Wall-clock limit of (customers + stations) / 100 * nu hours.
    #[arg(long)]
    time_budget_eq10: bool,
    #[arg(long, default_value_t = 1.0, requires = "time_budget_eq10")]
    nu: f64,
    /// Multiplier applied to the scaled time budget.
    #[arg(long, default_value_t = 1.0, requires = "time_budget_eq10")]
    cpu_ratio: f64,
}

impl StopArgs {
    fn stop(&self, inst: &Instance, basis: SizeBasis) -> StopCondition {
        if let Some(cap) = self.evals {
            StopCondition::Evaluations(cap)
        } else if let Some(k) = self.evals_per_node {
            StopCondition::Evaluations(k * basis.size(inst) as u64)
        } else if let Some(s) = self.time_limit {
            StopCondition::WallClock(Duration::from_secs_f64(s))
        } else if self.time_budget_eq10 {
            StopCondition::scaled_time(inst, self.nu, self.cpu_ratio)
        } else {
            StopCondition::Evaluations(EVALS_PER_NODE * basis.size(inst) as u64)
        }
    }
}

fn load(path: &PathBuf) -> Result<Instance> {
    Instance::from_path(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_solve(
    instance: PathBuf,
    search: SearchArgs,
    stop: StopArgs,
    seed: u64,
    output: Option<PathBuf>,
    stats: Option<PathBuf>,
) -> Result<ExitCode> {
    let inst = load(&instance)?;
    let params = search.params()?.with_seed(seed);
    let res = solve(&inst, &params, stop.stop(&inst, params.size_basis))?;
    match output {
        Some(path) => write_solution(fs::File::create(&path)?, &res.tour, res.weight)?,
        None => write_solution(io::stdout().lock(), &res.tour, res.weight)?,
    }
    if let Some(path) = stats {
        res.stats.write_csv(fs::File::create(&path)?)?;
    }
    eprintln!(
        "{} {} seed {}: weight {:.2}, {} evaluations, {} restarts, {:.1}s",
        inst.name(),
        params,
        seed,
        res.weight,
        res.stats.evals_used,
        res.stats.restarts,
        res.stats.elapsed_s
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(instance: PathBuf, solution: PathBuf) -> Result<ExitCode> {
    let inst = load(&instance)?;
    let (tour, claimed) = read_solution(&solution, &inst)
        .with_context(|| format!("reading {}", solution.display()))?;
    let report = validate(&inst, &tour);
    let weight = tour.weight(&inst);
    let mut out = io::stdout().lock();
    let mut ok = report.valid;
    if report.valid {
        writeln!(out, "VALID, weight {weight:.2}")?;
    } else {
        writeln!(out, "INVALID, weight {weight:.2}")?;
        for v in &report.violations {
            writeln!(out, "  {v}")?;
        }
    }
    if let Some(c) = claimed {
        if (c - weight).abs() > 0.01 {
            writeln!(
                out,
                "weight mismatch: file claims {c:.2}, recomputed {weight:.2}"
            )?;
            ok = false;
        }
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_bench(
    dir: PathBuf,
    runs: usize,
    seed_base: u64,
    bks: Option<PathBuf>,
    csv: Option<PathBuf>,
    search: SearchArgs,
    stop: StopArgs,
) -> Result<ExitCode> {
    let params = search.params()?;
    let paths = list_instances(&dir).with_context(|| format!("listing {}", dir.display()))?;
    if paths.is_empty() {
        bail!("no .evrp files in {}", dir.display());
    }
    let instances = paths.iter().map(load).collect::<Result<Vec<_>>>()?;
    let table = match bks {
        Some(p) => BksTable::from_path(&p).with_context(|| format!("reading {}", p.display()))?,
        None => BksTable::builtin(),
    };
    let basis = params.size_basis;
    let report = run_bench(
        &instances,
        runs,
        seed_base,
        &params,
        |i| stop.stop(i, basis),
        &table,
    );
    print!("{}", report.to_table());
    if let Some(path) = csv {
        fs::write(&path, report.to_csv())?;
    }
    for row in &report.rows {
        for e in &row.errors {
            eprintln!("{}: {e}", row.instance);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Solve {
            instance,
            search,
            stop,
            seed,
            output,
            stats,
        } => cmd_solve(instance, search, stop, seed, output, stats),
        Command::Validate { instance, solution } => cmd_validate(instance, solution),
        Command::Bench {
            dir,
            runs,
            seed_base,
            bks,
            csv,
            search,
            stop,
        } => cmd_bench(dir, runs, seed_base, bks, csv, search, stop),
    };
    res.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
