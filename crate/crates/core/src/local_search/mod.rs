//! Randomized variable neighborhood descent over permutation moves and
//! station reallocation.

mod afs;
mod moves;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

pub use afs::{
    afs_realloc_1, afs_realloc_1_step, afs_realloc_all_step, afs_realloc_more,
    afs_realloc_more_step,
};
pub use moves::{apply_two_opt, apply_two_string, delta_weight, insertion_cost, Move, MoveError};

use crate::budget::{BudgetExhausted, EvalBudget};
use crate::instance::Instance;
use crate::tour::Tour;
use crate::IMPROVEMENT_EPS;

use moves::{depot_before, two_opt_delta, two_opt_feasible, two_string_delta, two_string_feasible};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Neighborhood {
    TwoOpt,
    /// Block exchange of sizes `(x, y)`, scanned together with `(y, x)`.
    TwoString {
        x: usize,
        y: usize,
    },
    AfsRealloc1,
    AfsReallocMore,
    AfsReallocAll,
}

impl fmt::Display for Neighborhood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Neighborhood::TwoOpt => f.write_str("2-opt"),
            Neighborhood::TwoString { x: 0, y: 1 } => f.write_str("1-point"),
            Neighborhood::TwoString { x: 1, y: 1 } => f.write_str("2-point"),
            Neighborhood::TwoString { x: 1, y: 2 } => f.write_str("3-point"),
            Neighborhood::TwoString { x: 0, y } => write!(f, "or-opt-{y}"),
            Neighborhood::TwoString { x, y } => write!(f, "2-string({x},{y})"),
            Neighborhood::AfsRealloc1 => f.write_str("afs-realloc-1"),
            Neighborhood::AfsReallocMore => f.write_str("afs-realloc-more"),
            Neighborhood::AfsReallocAll => f.write_str("afs-realloc-all"),
        }
    }
}

/// The permutation neighborhoods that are always part of the descent.
pub const PERMUTATION_NEIGHBORHOODS: [Neighborhood; 8] = [
    Neighborhood::TwoOpt,
    Neighborhood::TwoString { x: 0, y: 1 },
    Neighborhood::TwoString { x: 1, y: 1 },
    Neighborhood::TwoString { x: 1, y: 2 },
    Neighborhood::TwoString { x: 0, y: 2 },
    Neighborhood::TwoString { x: 0, y: 3 },
    Neighborhood::TwoString { x: 0, y: 4 },
    Neighborhood::TwoString { x: 0, y: 5 },
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ls flags must be three 0/1 digits, got {0:?}")]
pub struct ParseLsError(pub String);

/// Station flags `[realloc-1, realloc-more, realloc-all]`, written as a
/// three-digit bit string such as `110`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LsFlags(pub [bool; 3]);

impl Default for LsFlags {
    fn default() -> Self {
        LsFlags([true, true, false])
    }
}

impl FromStr for LsFlags {
    type Err = ParseLsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b = s.as_bytes();
        if b.len() != 3 || !b.iter().all(|c| matches!(c, b'0' | b'1')) {
            return Err(ParseLsError(s.to_string()));
        }
        Ok(LsFlags([b[0] == b'1', b[1] == b'1', b[2] == b'1']))
    }
}

impl fmt::Display for LsFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.0 {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Ordered list of neighborhoods handed to the descent, which shuffles it.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodSet {
    neighborhoods: Vec<Neighborhood>,
}

impl NeighborhoodSet {
    pub fn new(neighborhoods: Vec<Neighborhood>) -> Self {
        NeighborhoodSet { neighborhoods }
    }

    pub fn from_flags(flags: LsFlags) -> Self {
        let mut neighborhoods = PERMUTATION_NEIGHBORHOODS.to_vec();
        let station = [
            Neighborhood::AfsRealloc1,
            Neighborhood::AfsReallocMore,
            Neighborhood::AfsReallocAll,
        ];
        neighborhoods.extend(
            station
                .into_iter()
                .zip(flags.0)
                .filter(|p| p.1)
                .map(|p| p.0),
        );
        NeighborhoodSet { neighborhoods }
    }

    pub fn neighborhoods(&self) -> &[Neighborhood] {
        &self.neighborhoods
    }
}

impl Default for NeighborhoodSet {
    fn default() -> Self {
        Self::from_flags(LsFlags::default())
    }
}

fn scan_permutation(
    inst: &Instance,
    tour: &Tour,
    nb: Neighborhood,
    budget: &mut EvalBudget,
) -> Option<Tour> {
    let t = tour.nodes();
    let n = t.len();
    let mut cands: Vec<(f64, Move)> = Vec::new();
    let mut count = 0u64;
    match nb {
        Neighborhood::TwoOpt => {
            for i in 1..n.saturating_sub(2) {
                for j in i + 1..n - 1 {
                    count += 1;
                    let d = two_opt_delta(inst, t, i, j);
                    if d < -IMPROVEMENT_EPS {
                        cands.push((d, Move::TwoOpt { i, j }));
                    }
                }
            }
        }
        Neighborhood::TwoString { x, y } => {
            let variants: &[(usize, usize)] = if x == y { &[(x, y)] } else { &[(x, y), (y, x)] };
            for &(x, y) in variants {
                for i in 1..n {
                    // j == i + x leaves the middle empty; with x == 0 or y == 0 that is the identity
                    let first_j = if x == 0 || y == 0 { i + x + 1 } else { i + x };
                    for j in first_j..n {
                        if j + y >= n {
                            break;
                        }
                        count += 1;
                        let d = two_string_delta(inst, t, i, j, x, y);
                        if d < -IMPROVEMENT_EPS {
                            cands.push((d, Move::TwoString { i, j, x, y }));
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    budget.charge_deltas(count);
    if cands.is_empty() {
        return None;
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    let before = depot_before(inst, t);
    let chosen = cands.into_iter().map(|c| c.1).find(|mv| match *mv {
        Move::TwoOpt { i, j } => two_opt_feasible(inst, t, &before, i, j),
        Move::TwoString { i, j, x, y } => two_string_feasible(inst, t, &before, i, j, x, y),
        _ => false,
    })?;
    let mut out = chosen.apply(inst, tour).expect("scanned move is in range");
    out.dedup_consecutive();
    Some(out)
}

/// Best feasible improving neighbor in one neighborhood, or `None` at a local
/// optimum. Candidates are ranked by delta and the first feasible one wins.
pub fn best_improvement(
    inst: &Instance,
    tour: &Tour,
    nb: Neighborhood,
    budget: &mut EvalBudget,
) -> Result<Option<Tour>, BudgetExhausted> {
    match nb {
        Neighborhood::TwoOpt | Neighborhood::TwoString { .. } => {
            Ok(scan_permutation(inst, tour, nb, budget))
        }
        Neighborhood::AfsRealloc1 => Ok(afs_realloc_1_step(inst, tour, budget)),
        Neighborhood::AfsReallocMore => afs_realloc_more_step(inst, tour, budget),
        Neighborhood::AfsReallocAll => afs_realloc_all_step(inst, tour, budget),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsOutcome {
    pub tour: Tour,
    pub improvements: usize,
    /// The budget ran out before a local optimum was confirmed.
    pub exhausted: bool,
}

/// Randomized VND: neighborhoods are tried in shuffled order; every
/// improvement reshuffles and restarts from the first one. Stops when a full
/// pass finds nothing or the budget is exhausted.
pub fn rvnd<R: Rng + ?Sized>(
    inst: &Instance,
    tour: Tour,
    set: &NeighborhoodSet,
    rng: &mut R,
    budget: &mut EvalBudget,
) -> LsOutcome {
    let mut order = set.neighborhoods().to_vec();
    order.shuffle(rng);
    let mut current = tour;
    let mut improvements = 0;
    let mut k = 0;
    while k < order.len() {
        if budget.exhausted() {
            return LsOutcome {
                tour: current,
                improvements,
                exhausted: true,
            };
        }
        match best_improvement(inst, &current, order[k], budget) {
            Ok(Some(next)) => {
                current = next;
                improvements += 1;
                order.shuffle(rng);
                k = 0;
            }
            Ok(None) => k += 1,
            Err(BudgetExhausted) => {
                return LsOutcome {
                    tour: current,
                    improvements,
                    exhausted: true,
                }
            }
        }
    }
    LsOutcome {
        tour: current,
        improvements,
        exhausted: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::NodeSpec;
    use crate::validate::is_valid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring() -> Instance {
        let mut nodes = vec![NodeSpec::depot(0.0, 0.0)];
        for k in 0..12 {
            let a = k as f64 * std::f64::consts::TAU / 12.0;
            nodes.push(NodeSpec::customer(10.0 * a.cos(), 10.0 * a.sin(), 1));
        }
        nodes.push(NodeSpec::afs(5.0, 5.0));
        Instance::new("ring", nodes, 6, 1000.0, 1.0).unwrap()
    }

    #[test]
    fn flags_parse() {
        assert_eq!(
            "110".parse::<LsFlags>().unwrap(),
            LsFlags([true, true, false])
        );
        assert_eq!(LsFlags([false, false, true]).to_string(), "001");
        assert!("12".parse::<LsFlags>().is_err());
        assert!("1101".parse::<LsFlags>().is_err());
        let set = NeighborhoodSet::from_flags("101".parse().unwrap());
        assert_eq!(set.neighborhoods().len(), 10);
        assert!(set.neighborhoods().contains(&Neighborhood::AfsReallocAll));
        assert!(!set.neighborhoods().contains(&Neighborhood::AfsReallocMore));
    }

    #[test]
    fn names() {
        let names: Vec<String> = PERMUTATION_NEIGHBORHOODS
            .iter()
            .map(|n| n.to_string())
            .collect();
        assert_eq!(
            names,
            [
                "2-opt", "1-point", "2-point", "3-point", "or-opt-2", "or-opt-3", "or-opt-4",
                "or-opt-5"
            ]
        );
    }

    #[test]
    fn descent_improves_and_stays_valid() {
        let inst = ring();
        let tour = Tour::from_indices(&[0, 1, 7, 3, 10, 5, 12, 0, 2, 8, 4, 11, 6, 9, 0]);
        assert!(is_valid(&inst, &tour));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut budget = EvalBudget::unlimited();
        let out = rvnd(
            &inst,
            tour.clone(),
            &NeighborhoodSet::default(),
            &mut rng,
            &mut budget,
        );
        assert!(!out.exhausted);
        assert!(out.improvements > 0);
        assert!(is_valid(&inst, &out.tour));
        assert!(out.tour.weight(&inst) < tour.weight(&inst));
        // local optimum: no neighborhood improves further
        for nb in NeighborhoodSet::default().neighborhoods() {
            assert!(
                best_improvement(&inst, &out.tour, *nb, &mut budget)
                    .unwrap()
                    .is_none(),
                "{nb}"
            );
        }
    }

    #[test]
    fn descent_stops_on_deadline() {
        let inst = ring();
        let tour = Tour::from_indices(&[0, 1, 7, 3, 10, 5, 12, 0, 2, 8, 4, 11, 6, 9, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut budget = EvalBudget::new(0);
        let out = rvnd(
            &inst,
            tour.clone(),
            &NeighborhoodSet::default(),
            &mut rng,
            &mut budget,
        );
        assert!(out.exhausted);
        assert_eq!(out.tour, tour);
    }
}
