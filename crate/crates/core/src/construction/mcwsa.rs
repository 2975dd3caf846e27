//! Savings-based construction of capacity-feasible round trips.

use std::collections::VecDeque;

use crate::instance::{Instance, NodeId};
use crate::tour::Tour;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Front,
    Back,
}

/// One insertion performed by [`mcwsa_with_trace`]. Weights are of closed
/// round trips from the depot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SavingsStep {
    pub inserted: NodeId,
    /// Round trip before the insertion (zero for the seed).
    pub before: f64,
    /// Round trip after the insertion.
    pub after: f64,
    /// Round trip serving only the inserted customer.
    pub alone: f64,
}

fn round_trip(inst: &Instance, sub: &VecDeque<NodeId>) -> f64 {
    let d = inst.depot();
    match (sub.front(), sub.back()) {
        (Some(&f), Some(&b)) => {
            inst.distance(d, f)
                + sub
                    .iter()
                    .zip(sub.iter().skip(1))
                    .map(|(&a, &b)| inst.distance(a, b))
                    .sum::<f64>()
                + inst.distance(b, d)
        }
        _ => 0.0,
    }
}

/// Builds round trips over `cluster`, ignoring the battery. Output starts and
/// ends at the depot and visits every cluster member exactly once.
pub fn mcwsa(inst: &Instance, cluster: &[NodeId]) -> Tour {
    build(inst, cluster, None)
}

/// [`mcwsa`] together with a record of every insertion.
pub fn mcwsa_with_trace(inst: &Instance, cluster: &[NodeId]) -> (Tour, Vec<SavingsStep>) {
    let mut steps = Vec::new();
    let tour = build(inst, cluster, Some(&mut steps));
    (tour, steps)
}

fn build(inst: &Instance, cluster: &[NodeId], mut trace: Option<&mut Vec<SavingsStep>>) -> Tour {
    let d = inst.depot();
    let mut remaining: Vec<NodeId> = cluster.to_vec();
    remaining.sort();
    remaining.dedup();
    let mut out = vec![d];

    while !remaining.is_empty() {
        let mut sub: VecDeque<NodeId> = VecDeque::new();
        let mut closest: Option<End> = None;
        // farthest customer, lowest id on ties
        let mut next_at = 0;
        for (k, &v) in remaining.iter().enumerate() {
            if inst.distance(d, v) > inst.distance(d, remaining[next_at]) {
                next_at = k;
            }
        }
        let mut cap = inst.cargo_capacity();
        loop {
            let next = remaining[next_at];
            let demand = inst.demand(next);
            if cap < demand {
                break;
            }
            let before = trace.as_ref().map(|_| round_trip(inst, &sub));
            if closest == Some(End::Front) {
                sub.push_front(next);
            } else {
                sub.push_back(next);
            }
            if let (Some(t), Some(before)) = (trace.as_deref_mut(), before) {
                t.push(SavingsStep {
                    inserted: next,
                    before,
                    after: round_trip(inst, &sub),
                    alone: 2.0 * inst.distance(d, next),
                });
            }
            cap -= demand;
            remaining.remove(next_at);
            if remaining.is_empty() {
                break;
            }
            let front = *sub.front().expect("non-empty");
            let back = *sub.back().expect("non-empty");
            let ends: &[(End, NodeId)] = if front == back {
                &[(End::Back, back)]
            } else if front < back {
                &[(End::Front, front), (End::Back, back)]
            } else {
                &[(End::Back, back), (End::Front, front)]
            };
            let mut best: Option<(f64, usize, End)> = None;
            for (k, &i) in remaining.iter().enumerate() {
                for &(end, j) in ends {
                    let s = inst.distance(i, j) - inst.distance(d, j) - inst.distance(d, i);
                    if best.is_none_or(|b| s < b.0) {
                        best = Some((s, k, end));
                    }
                }
            }
            let (_, k, end) = best.expect("remaining is non-empty");
            next_at = k;
            closest = Some(end);
        }
        out.extend(sub);
        out.push(d);
    }
    Tour::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::NodeSpec;

    fn pair(cap: u64) -> Instance {
        Instance::new(
            "pair",
            vec![
                NodeSpec::depot(0.0, 0.0),
                NodeSpec::customer(10.0, 0.0, 1),
                NodeSpec::customer(11.0, 0.0, 1),
                NodeSpec::afs(5.0, 5.0),
            ],
            cap,
            100.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn farthest_seed_then_back_insertion() {
        let inst = pair(2);
        let t = mcwsa(&inst, inst.customers());
        assert_eq!(t.indices(), vec![0, 2, 1, 0]);
        assert!((t.weight(&inst) - 22.0).abs() < 1e-12);
    }

    #[test]
    fn capacity_splits_round_trips() {
        let inst = pair(1);
        let t = mcwsa(&inst, inst.customers());
        assert_eq!(t.indices(), vec![0, 2, 0, 1, 0]);
        assert!((t.weight(&inst) - 42.0).abs() < 1e-12);
    }

    #[test]
    fn single_customer() {
        let inst = pair(2);
        assert_eq!(mcwsa(&inst, &[NodeId(1)]).indices(), vec![0, 1, 0]);
    }

    #[test]
    fn front_insertion_when_front_is_closer() {
        // a far seed on the right, one node near the depot on the left side of
        // the trip and one on the right
        let inst = Instance::new(
            "tri",
            vec![
                NodeSpec::depot(0.0, 0.0),
                NodeSpec::customer(20.0, 0.0, 1),
                NodeSpec::customer(10.0, 10.0, 1),
                NodeSpec::customer(10.0, -10.0, 1),
                NodeSpec::afs(1.0, 1.0),
            ],
            10,
            100.0,
            1.0,
        )
        .unwrap();
        let (t, steps) = mcwsa_with_trace(&inst, inst.customers());
        assert_eq!(steps.len(), 3);
        assert_eq!(t.customer_sequence(&inst).len(), 3);
        for s in &steps {
            assert!(s.after <= s.before + s.alone + 1e-9);
        }
        // seed, then node 2 at the back, then node 3 in front of the seed
        assert_eq!(t.indices(), vec![0, 3, 1, 2, 0]);
    }
}
