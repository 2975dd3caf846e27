//! Exact solver for tiny instances and a generator of random test fixtures.
//!
//! The exact solver partitions the customers into capacity-feasible routes by
//! dynamic programming over subsets. Every route is costed as the best
//! customer permutation combined with an optimal placement of at most two
//! consecutive station visits on each leg. Battery arithmetic is sequential,
//! exactly as [`crate::validate`] performs it.

use rand::Rng;
use thiserror::Error;

use crate::instance::{Instance, NodeId, NodeSpec};
use crate::repair;
use crate::tour::Tour;
use crate::validate::is_valid;

/// Largest instance the exact solver accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TinyInstanceLimit {
    pub max_customers: usize,
    pub max_afs: usize,
}

impl Default for TinyInstanceLimit {
    fn default() -> Self {
        TinyInstanceLimit {
            max_customers: 8,
            max_afs: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance has {customers} customers and {afs} stations, limit is {limit:?}")]
    TooLarge {
        customers: usize,
        afs: usize,
        limit: TinyInstanceLimit,
    },
    #[error("no feasible tour exists within the search space")]
    Infeasible,
}

const MAX_STOPS_PER_LEG: usize = 2;

/// Cost and visited nodes of a partial route.
type Completion = Option<(f64, Vec<NodeId>)>;

struct RouteDp<'a> {
    inst: &'a Instance,
    seq: &'a [NodeId],
    recharge: Vec<NodeId>,
    memo: Vec<Option<Completion>>,
}

impl<'a> RouteDp<'a> {
    fn key(&self, j: usize, r: usize, c: usize) -> usize {
        (j * self.recharge.len() + r) * (MAX_STOPS_PER_LEG + 1) + c
    }

    /// Cheapest completion when standing on recharge point `r` with a full
    /// battery, `j` the index of the next customer (`seq.len()` = final
    /// depot) and `c` stations already placed on the current leg. Returns
    /// the cost and the nodes visited after `r`.
    fn solve(&mut self, j: usize, r: usize, c: usize) -> Option<(f64, Vec<NodeId>)> {
        let k = self.key(j, r, c);
        if let Some(v) = &self.memo[k] {
            return v.clone();
        }
        let inst = self.inst;
        let q = inst.battery_capacity();
        let d = inst.depot();
        let here = self.recharge[r];
        let mut best: Option<(f64, Vec<NodeId>)> = None;
        let consider = |cost: f64, path: Vec<NodeId>, best: &mut Option<(f64, Vec<NodeId>)>| {
            if best.as_ref().is_none_or(|b| cost < b.0) {
                *best = Some((cost, path));
            }
        };

        if j == self.seq.len() && q - inst.energy(here, d) >= 0.0 {
            consider(inst.distance(here, d), vec![d], &mut best);
        }
        // another station on this leg
        if c < MAX_STOPS_PER_LEG {
            for s in 1..self.recharge.len() {
                let st = self.recharge[s];
                if s == r || q - inst.energy(here, st) < 0.0 {
                    continue;
                }
                if let Some((rest, mut path)) = self.solve(j, s, c + 1) {
                    path.insert(0, st);
                    consider(inst.distance(here, st) + rest, path, &mut best);
                }
            }
        }
        // drive through customers j..=m on the current charge
        let mut charge = q;
        let mut cost = 0.0;
        let mut prev = here;
        for m in j..self.seq.len() {
            let v = self.seq[m];
            charge -= inst.energy(prev, v);
            if charge < 0.0 {
                break;
            }
            cost += inst.distance(prev, v);
            prev = v;
            if m + 1 == self.seq.len() && charge - inst.energy(v, d) >= 0.0 {
                let mut path = self.seq[j..=m].to_vec();
                path.push(d);
                consider(cost + inst.distance(v, d), path, &mut best);
            }
            for s in 1..self.recharge.len() {
                let st = self.recharge[s];
                if charge - inst.energy(v, st) < 0.0 {
                    continue;
                }
                if let Some((rest, tail)) = self.solve(m + 1, s, 1) {
                    let mut path = self.seq[j..=m].to_vec();
                    path.push(st);
                    path.extend(tail);
                    consider(cost + inst.distance(v, st) + rest, path, &mut best);
                }
            }
        }
        self.memo[k] = Some(best.clone());
        best
    }
}

/// Cheapest battery-feasible round trip serving `seq` in this order.
fn route_for_sequence(inst: &Instance, seq: &[NodeId]) -> Option<(f64, Vec<NodeId>)> {
    let recharge: Vec<NodeId> = std::iter::once(inst.depot())
        .chain(inst.stations().iter().copied())
        .collect();
    let states = (seq.len() + 1) * recharge.len() * (MAX_STOPS_PER_LEG + 1);
    let mut dp = RouteDp {
        inst,
        seq,
        recharge,
        memo: vec![None; states],
    };
    let (cost, tail) = dp.solve(0, 0, 0)?;
    let mut nodes = vec![inst.depot()];
    nodes.extend(tail);
    Some((cost, nodes))
}

fn next_permutation(a: &mut [NodeId]) -> bool {
    let Some(i) = a.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = a
        .iter()
        .rposition(|&x| x > a[i])
        .expect("pivot has a successor");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

fn best_route(inst: &Instance, members: &[NodeId]) -> Option<(f64, Vec<NodeId>)> {
    let mut perm = members.to_vec();
    perm.sort();
    let mut best: Option<(f64, Vec<NodeId>)> = None;
    loop {
        if let Some(r) = route_for_sequence(inst, &perm) {
            if best.as_ref().is_none_or(|b| r.0 < b.0) {
                best = Some(r);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best
}

/// Optimal tour of a tiny instance under the default limit.
pub fn exact_solve(inst: &Instance) -> Result<(f64, Tour), OracleError> {
    exact_solve_with_limit(inst, TinyInstanceLimit::default())
}

pub fn exact_solve_with_limit(
    inst: &Instance,
    limit: TinyInstanceLimit,
) -> Result<(f64, Tour), OracleError> {
    let cs = inst.customers();
    let k = cs.len();
    if k > limit.max_customers || inst.stations().len() > limit.max_afs {
        return Err(OracleError::TooLarge {
            customers: k,
            afs: inst.stations().len(),
            limit,
        });
    }
    let d = inst.depot();
    if k == 0 {
        return Ok((0.0, Tour::new(vec![d, d])));
    }
    let full = (1usize << k) - 1;
    let mut route: Vec<Option<(f64, Vec<NodeId>)>> = vec![None; full + 1];
    for (mask, slot) in route.iter_mut().enumerate().skip(1) {
        let members: Vec<NodeId> = (0..k)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| cs[b])
            .collect();
        let load: u64 = members.iter().map(|&v| inst.demand(v)).sum();
        if load <= inst.cargo_capacity() {
            *slot = best_route(inst, &members);
        }
    }
    // best[mask]: cheapest set of routes covering exactly `mask`
    let mut best: Vec<Option<(f64, usize)>> = vec![None; full + 1];
    best[0] = Some((0.0, 0));
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let mut sub = mask;
        while sub > 0 {
            if sub & low != 0 {
                if let (Some(r), Some(rest)) = (&route[sub], best[mask ^ sub]) {
                    let c = r.0 + rest.0;
                    if best[mask].is_none_or(|b| c < b.0) {
                        best[mask] = Some((c, sub));
                    }
                }
            }
            sub = (sub - 1) & mask;
        }
    }
    let (weight, _) = best[full].ok_or(OracleError::Infeasible)?;
    let mut nodes = vec![d];
    let mut mask = full;
    while mask > 0 {
        let (_, sub) = best[mask].expect("reachable state");
        let r = route[sub].as_ref().expect("chosen route exists");
        nodes.extend_from_slice(&r.1[1..]);
        mask ^= sub;
    }
    let tour = Tour::new(nodes);
    debug_assert!(is_valid(inst, &tour), "{tour}");
    Ok((weight, tour))
}

/// Shape of generated fixtures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureParams {
    pub customers: usize,
    pub stations: usize,
    /// Coordinates are integers in `0..=side`.
    pub side: u32,
    pub max_demand: u64,
    /// Reach is the smallest value satisfying the instance assumptions,
    /// multiplied by a factor drawn from this range.
    pub reach_slack: (f64, f64),
    /// Capacity as a fraction of the total demand, drawn from this range.
    pub capacity_share: (f64, f64),
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams {
            customers: 5,
            stations: 2,
            side: 100,
            max_demand: 10,
            reach_slack: (1.0, 1.4),
            capacity_share: (0.35, 0.8),
        }
    }
}

/// Random instance where every customer lies within half the reach of some
/// recharge point and the recharge points are connected by legs within
/// reach. The reach is then enlarged until the repair succeeds on every
/// input. Equal random streams give equal instances.
pub fn gen_fixture<R: Rng + ?Sized>(rng: &mut R, params: &FixtureParams) -> Instance {
    let side = params.side as i64;
    let mut pt = || {
        (
            rng.gen_range(0..=side) as f64,
            rng.gen_range(0..=side) as f64,
        )
    };
    let depot = pt();
    let customers: Vec<(f64, f64)> = (0..params.customers).map(|_| pt()).collect();
    let stations: Vec<(f64, f64)> = (0..params.stations).map(|_| pt()).collect();
    let dist = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();

    let recharge: Vec<(f64, f64)> = std::iter::once(depot)
        .chain(stations.iter().copied())
        .collect();
    let near = customers
        .iter()
        .map(|&c| {
            recharge
                .iter()
                .map(|&r| dist(c, r))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    // longest edge of a minimum spanning tree over the recharge points
    let mut in_tree = vec![false; recharge.len()];
    let mut link = vec![f64::INFINITY; recharge.len()];
    link[0] = 0.0;
    let mut mst_max: f64 = 0.0;
    for _ in 0..recharge.len() {
        let u = (0..recharge.len())
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| link[a].total_cmp(&link[b]))
            .expect("vertices remain");
        in_tree[u] = true;
        mst_max = mst_max.max(link[u]);
        for v in 0..recharge.len() {
            if !in_tree[v] {
                link[v] = link[v].min(dist(recharge[u], recharge[v]));
            }
        }
    }
    let slack = rng.gen_range(params.reach_slack.0..=params.reach_slack.1);
    let mut reach = ((2.0 * near).max(mst_max) * slack).ceil().max(1.0);

    let demands: Vec<u64> = (0..params.customers)
        .map(|_| rng.gen_range(1..=params.max_demand))
        .collect();
    let total: u64 = demands.iter().sum();
    let max_d = demands.iter().copied().max().unwrap_or(1);
    let share = rng.gen_range(params.capacity_share.0..=params.capacity_share.1);
    let capacity = ((total as f64 * share).round() as u64).max(max_d);

    let mut nodes = vec![NodeSpec::depot(depot.0, depot.1)];
    nodes.extend(
        customers
            .iter()
            .zip(&demands)
            .map(|(&(x, y), &q)| NodeSpec::customer(x, y, q)),
    );
    nodes.extend(stations.iter().map(|&(x, y)| NodeSpec::afs(x, y)));
    loop {
        let inst = Instance::new("fixture", nodes.clone(), capacity, reach, 1.0)
            .expect("generated instance is well formed");
        if repair_never_sticks(&inst) {
            return inst;
        }
        reach = (reach * 1.1).ceil();
    }
}

/// Every leg the repair can face starts at a fully charged recharge point, so
/// checking each recharge point against each target covers all inputs.
fn repair_never_sticks(inst: &Instance) -> bool {
    let d = inst.depot();
    inst.recharge_points().iter().all(|&s| {
        inst.customers()
            .iter()
            .chain(inst.recharge_points())
            .all(|&c| repair::repair_nodes(inst, &[d, s, c, d]).is_ok())
    })
}
