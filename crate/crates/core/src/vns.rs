//! Restarting variable neighborhood search driver.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::budget::EvalBudget;
use crate::construction::{construct, ConstructionError, ConstructionId};
use crate::instance::Instance;
use crate::local_search::{rvnd, LsFlags, NeighborhoodSet};
use crate::perturbation::double_bridge;
use crate::repair::RepairError;
use crate::tour::Tour;
use crate::IMPROVEMENT_EPS;

/// Evaluations per instance node in the standard budget.
pub const EVALS_PER_NODE: u64 = 25_000;

/// Which size `n` scales the restart threshold and the evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SizeBasis {
    /// Depot, customers and stations.
    #[default]
    AllNodes,
    Customers,
}

impl SizeBasis {
    pub fn size(self, inst: &Instance) -> usize {
        match self {
            SizeBasis::AllNodes => inst.node_count(),
            SizeBasis::Customers => inst.customers().len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    /// Number of double-bridge cuts.
    pub p: usize,
    /// Restart ratio; a restart follows `ceil(r * n)` non-improving iterations.
    pub r: f64,
    pub construction: ConstructionId,
    pub ls: LsFlags,
    pub seed: u64,
    pub size_basis: SizeBasis,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            p: 2,
            r: 0.35,
            construction: ConstructionId::DbcaMcwsa,
            ls: LsFlags::default(),
            seed: 1,
            size_basis: SizeBasis::AllNodes,
        }
    }
}

impl SearchParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn iters_max(&self, inst: &Instance) -> u64 {
        ((self.r * self.size_basis.size(inst) as f64).ceil() as u64).max(1)
    }

    /// Setup label such as `VNS_zga_c:14_ls:110_p:2_r:0.35`.
    pub fn setup(&self) -> String {
        format!(
            "VNS_zga_c:{}_ls:{}_p:{}_r:{}",
            self.construction.index(),
            self.ls,
            self.p,
            self.r
        )
    }

    /// Applies the fields of a setup label on top of `self`.
    pub fn apply_setup(mut self, setup: &str) -> Result<Self, ParamsError> {
        let bad = |msg: &str| ParamsError(format!("{setup:?}: {msg}"));
        for (k, part) in setup.split('_').enumerate() {
            match (k, part.split_once(':')) {
                (0, None) if part.eq_ignore_ascii_case("vns") => {}
                (_, None) if part.eq_ignore_ascii_case("zga") => {}
                (_, None) => return Err(bad(&format!("unsupported component {part:?}"))),
                (_, Some(("c", v))) => {
                    self.construction = v.parse().map_err(|_| bad("bad construction"))?;
                }
                (_, Some(("ls", v))) => self.ls = v.parse().map_err(|_| bad("bad ls flags"))?,
                (_, Some(("p", v))) => self.p = v.parse().map_err(|_| bad("bad p"))?,
                (_, Some(("r", v))) => self.r = v.parse().map_err(|_| bad("bad r"))?,
                (_, Some((key, _))) => return Err(bad(&format!("unknown key {key:?}"))),
            }
        }
        self.check()?;
        Ok(self)
    }

    pub fn check(&self) -> Result<(), ParamsError> {
        if self.p == 0 {
            return Err(ParamsError("p must be at least 1".into()));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(ParamsError("r must be positive".into()));
        }
        Ok(())
    }
}

impl FromStr for SearchParams {
    type Err = ParamsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SearchParams::default().apply_setup(s)
    }
}

impl fmt::Display for SearchParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.setup())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid search parameters: {0}")]
pub struct ParamsError(pub String);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopCondition {
    Evaluations(u64),
    WallClock(Duration),
}

impl StopCondition {
    /// `EVALS_PER_NODE * n` evaluations.
    pub fn standard(inst: &Instance, basis: SizeBasis) -> Self {
        StopCondition::Evaluations(EVALS_PER_NODE * basis.size(inst) as u64)
    }

    /// Time budget of `(customers + stations) / 100 * nu` hours, scaled by a
    /// CPU speed ratio.
    pub fn scaled_time(inst: &Instance, nu: f64, cpu_ratio: f64) -> Self {
        let units = (inst.customers().len() + inst.stations().len()) as f64 / 100.0;
        StopCondition::WallClock(Duration::from_secs_f64(units * nu * 3600.0 * cpu_ratio))
    }

    pub fn budget(&self) -> EvalBudget {
        match *self {
            StopCondition::Evaluations(cap) => EvalBudget::new(cap),
            StopCondition::WallClock(limit) => EvalBudget::unlimited().with_time_limit(limit),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsRecord {
    pub elapsed_s: f64,
    pub evals: u64,
    pub best_weight: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    pub evals_used: u64,
    pub restarts: u64,
    pub iterations: u64,
    /// Non-improving iteration count at each restart.
    pub restart_counters: Vec<u64>,
    /// Incumbent improvements, one-second ticks and a final record.
    pub records: Vec<StatsRecord>,
    pub elapsed_s: f64,
}

impl RunStats {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "elapsed_s,evals,best_weight")?;
        for r in &self.records {
            writeln!(out, "{:.3},{},{:.6}", r.elapsed_s, r.evals, r.best_weight)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub tour: Tour,
    pub weight: f64,
    pub stats: RunStats,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("perturbation repair failed: {0}")]
    Repair(#[from] RepairError),
}

struct Recorder {
    records: Vec<StatsRecord>,
    next_tick: f64,
    best: f64,
}

impl Recorder {
    fn tick(&mut self, budget: &EvalBudget) {
        let now = budget.elapsed().as_secs_f64();
        while self.best.is_finite() && now >= self.next_tick {
            self.records.push(StatsRecord {
                elapsed_s: self.next_tick,
                evals: budget.used(),
                best_weight: self.best,
            });
            self.next_tick += 1.0;
        }
    }

    fn offer(&mut self, w: f64, budget: &EvalBudget) {
        self.tick(budget);
        if w < self.best {
            self.best = w;
            self.records.push(StatsRecord {
                elapsed_s: budget.elapsed().as_secs_f64(),
                evals: budget.used(),
                best_weight: w,
            });
        }
    }
}

/// Runs the search until the stop condition is met.
pub fn solve(
    inst: &Instance,
    params: &SearchParams,
    stop: StopCondition,
) -> Result<SolveResult, SolveError> {
    let mut budget = stop.budget();
    solve_with_budget(inst, params, &mut budget)
}

/// [`solve`] against a caller-provided budget.
pub fn solve_with_budget(
    inst: &Instance,
    params: &SearchParams,
    budget: &mut EvalBudget,
) -> Result<SolveResult, SolveError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let nbhd = NeighborhoodSet::from_flags(params.ls);
    let iters_max = params.iters_max(inst);
    let mut stats = RunStats::default();
    let mut rec = Recorder {
        records: Vec::new(),
        next_tick: 1.0,
        best: f64::INFINITY,
    };
    let mut global: Option<(Tour, f64)> = None;
    // constructed tour whose weight could not be evaluated
    let mut unevaluated: Option<Tour> = None;

    'outer: loop {
        let start = construct(inst, params.construction, &mut rng, budget)?;
        let Ok(w0) = budget.evaluate(inst, &start) else {
            unevaluated = Some(start);
            break;
        };
        rec.offer(w0, budget);
        let mut cur = (start, w0);
        let mut i = 0;
        while i < iters_max {
            if budget.exhausted() {
                fold(&mut global, cur);
                break 'outer;
            }
            i += 1;
            stats.iterations += 1;
            let perturbed = double_bridge(inst, &cur.0, params.p, &mut rng)?;
            let ls = rvnd(inst, perturbed, &nbhd, &mut rng, budget);
            let Ok(w) = budget.evaluate(inst, &ls.tour) else {
                fold(&mut global, cur);
                break 'outer;
            };
            if w < cur.1 - IMPROVEMENT_EPS {
                cur = (ls.tour, w);
                i = 0;
                rec.offer(w, budget);
            } else {
                rec.tick(budget);
            }
        }
        stats.restarts += 1;
        stats.restart_counters.push(i);
        fold(&mut global, cur);
        if budget.exhausted() {
            break;
        }
    }

    let (tour, weight) = match (global, unevaluated) {
        (Some(g), _) => g,
        (None, Some(t)) => {
            let w = t.weight(inst);
            (t, w)
        }
        (None, None) => unreachable!("every exit path records a tour"),
    };
    debug_assert!(crate::validate::is_valid(inst, &tour));
    rec.tick(budget);
    rec.records.push(StatsRecord {
        elapsed_s: budget.elapsed().as_secs_f64(),
        evals: budget.used(),
        best_weight: weight,
    });
    stats.evals_used = budget.used();
    stats.elapsed_s = budget.elapsed().as_secs_f64();
    stats.records = rec.records;
    Ok(SolveResult {
        tour,
        weight,
        stats,
    })
}

fn fold(global: &mut Option<(Tour, f64)>, cand: (Tour, f64)) {
    if global.as_ref().is_none_or(|g| cand.1 < g.1) {
        *global = Some(cand);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::ore;
    use crate::instance::NodeSpec;
    use crate::validate::is_valid;

    fn inst() -> Instance {
        let mut nodes = vec![NodeSpec::depot(50.0, 50.0)];
        let pts = [
            (10.0, 10.0),
            (12.0, 14.0),
            (15.0, 11.0),
            (90.0, 85.0),
            (88.0, 92.0),
            (50.0, 95.0),
            (20.0, 80.0),
            (70.0, 20.0),
        ];
        nodes.extend(pts.iter().map(|&(x, y)| NodeSpec::customer(x, y, 3)));
        nodes.push(NodeSpec::afs(20.0, 20.0));
        nodes.push(NodeSpec::afs(80.0, 80.0));
        nodes.push(NodeSpec::afs(40.0, 80.0));
        Instance::new("small", nodes, 9, 90.0, 1.0).unwrap()
    }

    #[test]
    fn setup_round_trip() {
        let p: SearchParams = "VNS_zga_c:14_ls:110_p:2_r:0.35".parse().unwrap();
        assert_eq!(p, SearchParams::default());
        assert_eq!(p.setup(), "VNS_zga_c:14_ls:110_p:2_r:0.35");
        let q: SearchParams = "VNS_zga_c:10_ls:001_p:3_r:1".parse().unwrap();
        assert_eq!(q.construction, ConstructionId::Mcwsa);
        assert_eq!(q.ls, LsFlags([false, false, true]));
        assert_eq!((q.p, q.r), (3, 1.0));
        assert!("VNS_ssf_c:14".parse::<SearchParams>().is_err());
        assert!("VNS_zga_p:0".parse::<SearchParams>().is_err());
        assert!("VNS_zga_q:1".parse::<SearchParams>().is_err());
    }

    #[test]
    fn stop_conditions() {
        let inst = inst();
        assert_eq!(
            StopCondition::standard(&inst, SizeBasis::AllNodes),
            StopCondition::Evaluations(25_000 * 12)
        );
        assert_eq!(
            StopCondition::standard(&inst, SizeBasis::Customers),
            StopCondition::Evaluations(25_000 * 8)
        );
        let StopCondition::WallClock(d) = StopCondition::scaled_time(&inst, 2.0, 0.5) else {
            panic!()
        };
        assert!((d.as_secs_f64() - 0.11 * 2.0 * 3600.0 * 0.5).abs() < 1e-6);
        assert_eq!(SearchParams::default().iters_max(&inst), 5);
    }

    #[test]
    fn zero_budget_returns_ore() {
        let inst = inst();
        let res = solve(
            &inst,
            &SearchParams::default(),
            StopCondition::Evaluations(0),
        )
        .unwrap();
        assert_eq!(res.tour, ore(&inst).unwrap());
        assert_eq!(res.stats.evals_used, 0);
    }

    #[test]
    fn deterministic_and_valid() {
        let inst = inst();
        let params = SearchParams::default().with_seed(4);
        let a = solve(&inst, &params, StopCondition::Evaluations(3000)).unwrap();
        let b = solve(&inst, &params, StopCondition::Evaluations(3000)).unwrap();
        assert_eq!(a.tour, b.tour);
        assert_eq!(a.stats.evals_used, b.stats.evals_used);
        assert!(is_valid(&inst, &a.tour));
        assert!((a.tour.weight(&inst) - a.weight).abs() < 1e-9);
        assert!(a.stats.evals_used <= 3000 + 2);
        assert!(a.stats.restarts >= 1);
        let iters = params.iters_max(&inst);
        // all but a possibly interrupted last restart end on the threshold
        let n = a.stats.restart_counters.len();
        assert!(a.stats.restart_counters[..n.saturating_sub(1)]
            .iter()
            .all(|&c| c == iters));
    }

    #[test]
    fn stats_are_monotone() {
        let inst = inst();
        let res = solve(
            &inst,
            &SearchParams::default(),
            StopCondition::Evaluations(2000),
        )
        .unwrap();
        let recs = &res.stats.records;
        assert!(recs
            .windows(2)
            .all(|w| w[1].best_weight <= w[0].best_weight));
        assert_eq!(recs.last().unwrap().best_weight, res.weight);
        let csv = res.stats.to_csv();
        assert_eq!(csv.lines().count(), recs.len() + 1);
        assert!(csv.starts_with("elapsed_s,evals,best_weight"));
    }

    #[test]
    fn wall_clock_stop() {
        let inst = inst();
        let stop = StopCondition::WallClock(Duration::from_millis(200));
        let res = solve(&inst, &SearchParams::default(), stop).unwrap();
        assert!(is_valid(&inst, &res.tour));
        assert!(res.stats.elapsed_s < 2.0);
    }
}
