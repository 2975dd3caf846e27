//! Initial tour construction.

mod dbca;
mod mcwsa;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use dbca::{dbca_cluster, parameter_grid, Clustering, DELTAS, EPSILON_FRACTIONS};
pub use mcwsa::{mcwsa, mcwsa_with_trace, SavingsStep};

use crate::budget::EvalBudget;
use crate::instance::{Instance, NodeId};
use crate::repair::{relaxed_zga, RepairError};
use crate::tour::Tour;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeedMode {
    Random,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ConstructionId {
    /// One round trip per customer.
    Ore,
    /// Nearest-neighbor giant tour; random start customer or the one closest
    /// to the depot.
    Nn(SeedMode),
    /// Shuffled giant tour; the fixed variant always uses the same shuffle.
    Random(SeedMode),
    /// Savings construction over all customers.
    Mcwsa,
    /// Grid-searched clustering, nearest neighbor inside each cluster from a
    /// random start.
    DbcaNn,
    /// Grid-searched clustering, savings construction inside each cluster.
    #[default]
    DbcaMcwsa,
}

impl ConstructionId {
    pub const ALL: [ConstructionId; 8] = [
        ConstructionId::Ore,
        ConstructionId::Nn(SeedMode::Random),
        ConstructionId::Nn(SeedMode::Fixed),
        ConstructionId::Random(SeedMode::Random),
        ConstructionId::Random(SeedMode::Fixed),
        ConstructionId::Mcwsa,
        ConstructionId::DbcaNn,
        ConstructionId::DbcaMcwsa,
    ];

    /// Menu index, e.g. 14 for the default.
    pub fn index(self) -> u8 {
        match self {
            ConstructionId::Ore => 0,
            ConstructionId::Nn(SeedMode::Random) => 5,
            ConstructionId::Nn(SeedMode::Fixed) => 6,
            ConstructionId::Random(SeedMode::Random) => 7,
            ConstructionId::Random(SeedMode::Fixed) => 8,
            ConstructionId::Mcwsa => 10,
            ConstructionId::DbcaNn => 12,
            ConstructionId::DbcaMcwsa => 14,
        }
    }

    pub fn from_index(c: u8) -> Option<Self> {
        Some(match c {
            0 => ConstructionId::Ore,
            5 => ConstructionId::Nn(SeedMode::Random),
            6 => ConstructionId::Nn(SeedMode::Fixed),
            7 => ConstructionId::Random(SeedMode::Random),
            8 => ConstructionId::Random(SeedMode::Fixed),
            10 => ConstructionId::Mcwsa,
            12 => ConstructionId::DbcaNn,
            14 => ConstructionId::DbcaMcwsa,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            ConstructionId::Ore => "ore",
            ConstructionId::Nn(SeedMode::Random) => "nn-random",
            ConstructionId::Nn(SeedMode::Fixed) => "nn-fixed",
            ConstructionId::Random(SeedMode::Random) => "random-random",
            ConstructionId::Random(SeedMode::Fixed) => "random-fixed",
            ConstructionId::Mcwsa => "mcwsa",
            ConstructionId::DbcaNn => "dbca-nn",
            ConstructionId::DbcaMcwsa => "dbca-mcwsa",
        }
    }
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.index())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown construction {0:?}")]
pub struct ParseConstructionError(pub String);

impl FromStr for ConstructionId {
    type Err = ParseConstructionError;

    /// Accepts `c14`, `c:14`, `14` or a symbolic name such as `dbca-mcwsa`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let digits = t
            .strip_prefix("c:")
            .or_else(|| t.strip_prefix('c'))
            .unwrap_or(&t);
        if let Ok(c) = digits.parse::<u8>() {
            return Self::from_index(c).ok_or_else(|| ParseConstructionError(s.to_string()));
        }
        let name = t.replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| ParseConstructionError(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("construction {construction} failed: {source}")]
pub struct ConstructionError {
    pub construction: ConstructionId,
    #[source]
    pub source: RepairError,
}

fn giant(inst: &Instance, order: impl IntoIterator<Item = NodeId>) -> Tour {
    let d = inst.depot();
    let mut nodes = vec![d];
    nodes.extend(order);
    nodes.push(d);
    let mut t = Tour::new(nodes);
    t.dedup_consecutive();
    t
}

/// Savings round trips over a cluster without the leading depot visit.
fn mcwsa_part(inst: &Instance, cluster: &[NodeId]) -> Vec<NodeId> {
    let mut nodes = mcwsa(inst, cluster).into_nodes();
    nodes.remove(0);
    nodes
}

/// Nearest-neighbor order over `set`, starting with `start`.
fn nearest_neighbor_order(inst: &Instance, set: &[NodeId], start: NodeId) -> Vec<NodeId> {
    let mut left: Vec<NodeId> = set.iter().copied().filter(|&v| v != start).collect();
    let mut order = Vec::with_capacity(set.len());
    order.push(start);
    let mut cur = start;
    while !left.is_empty() {
        let mut best = 0;
        for k in 1..left.len() {
            if inst.distance(cur, left[k]) < inst.distance(cur, left[best]) {
                best = k;
            }
        }
        cur = left.remove(best);
        order.push(cur);
    }
    order
}

fn closest_to_depot(inst: &Instance, set: &[NodeId]) -> NodeId {
    let d = inst.depot();
    *set.iter()
        .min_by(|&&a, &&b| inst.distance(d, a).total_cmp(&inst.distance(d, b)))
        .expect("non-empty set")
}

fn repaired(inst: &Instance, id: ConstructionId, tour: &Tour) -> Result<Tour, ConstructionError> {
    relaxed_zga(inst, tour)
        .map(|o| o.tour)
        .map_err(|source| ConstructionError {
            construction: id,
            source,
        })
}

/// One round trip per customer in id order, repaired for the battery.
pub fn ore(inst: &Instance) -> Result<Tour, ConstructionError> {
    let d = inst.depot();
    let mut nodes = vec![d];
    for &c in inst.customers() {
        nodes.push(c);
        nodes.push(d);
    }
    repaired(inst, ConstructionId::Ore, &Tour::new(nodes))
}

/// Tries every cell of the clustering grid, building each cluster's part with
/// `per_cluster`, and returns the lightest repaired tour. Each candidate costs
/// one evaluation; cells whose repair fails are skipped. Falls back to
/// [`ore`] when no candidate could be evaluated.
pub fn dbca_grid_search_with<F>(
    inst: &Instance,
    budget: &mut EvalBudget,
    mut per_cluster: F,
) -> Result<Tour, ConstructionError>
where
    F: FnMut(&[NodeId]) -> Vec<NodeId>,
{
    let mut best: Option<(f64, Tour)> = None;
    for (eps, delta) in parameter_grid(inst) {
        let clustering = dbca_cluster(inst, eps, delta);
        let nodes: Vec<NodeId> = clustering
            .clusters
            .iter()
            .flat_map(|c| per_cluster(c))
            .collect();
        let Ok(out) = relaxed_zga(inst, &giant(inst, nodes)) else {
            continue;
        };
        let Ok(w) = budget.evaluate(inst, &out.tour) else {
            break;
        };
        if best.as_ref().is_none_or(|b| w < b.0) {
            best = Some((w, out.tour));
        }
    }
    match best {
        Some((_, t)) => Ok(t),
        None => ore(inst),
    }
}

/// Grid-searched clustering with savings construction inside each cluster.
pub fn dbca_grid_search(
    inst: &Instance,
    budget: &mut EvalBudget,
) -> Result<Tour, ConstructionError> {
    dbca_grid_search_with(inst, budget, |c| mcwsa_part(inst, c)).map_err(|e| ConstructionError {
        construction: ConstructionId::DbcaMcwsa,
        ..e
    })
}

/// Builds an initial valid tour. Only the grid-searched constructions consume
/// evaluations.
pub fn construct<R: Rng + ?Sized>(
    inst: &Instance,
    id: ConstructionId,
    rng: &mut R,
    budget: &mut EvalBudget,
) -> Result<Tour, ConstructionError> {
    let cs = inst.customers();
    if cs.is_empty() {
        return Ok(giant(inst, []));
    }
    match id {
        ConstructionId::Ore => ore(inst),
        ConstructionId::Nn(mode) => {
            let start = match mode {
                SeedMode::Random => *cs.choose(rng).expect("non-empty"),
                SeedMode::Fixed => closest_to_depot(inst, cs),
            };
            repaired(
                inst,
                id,
                &giant(inst, nearest_neighbor_order(inst, cs, start)),
            )
        }
        ConstructionId::Random(mode) => {
            let mut order = cs.to_vec();
            match mode {
                SeedMode::Random => order.shuffle(rng),
                SeedMode::Fixed => order.shuffle(&mut ChaCha8Rng::seed_from_u64(0)),
            }
            repaired(inst, id, &giant(inst, order))
        }
        ConstructionId::Mcwsa => repaired(inst, id, &mcwsa(inst, cs)),
        ConstructionId::DbcaNn => dbca_grid_search_with(inst, budget, |c| {
            let start = *c.choose(rng).expect("clusters are non-empty");
            nearest_neighbor_order(inst, c, start)
        })
        .map_err(|e| ConstructionError {
            construction: id,
            ..e
        }),
        ConstructionId::DbcaMcwsa => dbca_grid_search(inst, budget),
    }
}
