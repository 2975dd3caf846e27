//! Relaxed ZGA repair: a single left-to-right pass that turns any
//! depot-anchored node sequence into a feasible tour by inserting depot and
//! station visits. Customer order is never changed.
//!
//! For each pending node `next`:
//! 1. if the remaining cargo cannot serve `next`, a depot visit is queued first;
//! 2. else if the vehicle can drive to `next` and afterwards still reach some
//!    recharge point, `next` is appended;
//! 3. else the recharge point closest to `next` among those reachable from the
//!    current node is queued first; standing at a recharge point, only a
//!    strictly closer one qualifies.
//!
//! The depot counts as a recharge point throughout. Runs in O(n * |F|).

use thiserror::Error;

use crate::instance::{Instance, NodeId};
use crate::tour::Tour;
use crate::validate::VehicleState;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairOutcome {
    pub tour: Tour,
    pub inserted_afs: usize,
    pub inserted_depots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepairError {
    #[error("input tour must start and end at the depot")]
    BadEndpoints,
    #[error("stuck at output position {position}: no recharge point reachable from node {current} on the way to node {next}")]
    Stuck {
        position: usize,
        current: NodeId,
        next: NodeId,
    },
}

pub fn relaxed_zga(inst: &Instance, tour: &Tour) -> Result<RepairOutcome, RepairError> {
    let nodes = tour.nodes();
    if nodes.len() < 2 || !inst.is_depot(nodes[0]) || !inst.is_depot(nodes[nodes.len() - 1]) {
        return Err(RepairError::BadEndpoints);
    }
    let (out, inserted_afs, inserted_depots) = repair_nodes(inst, nodes)?;
    let tour = Tour::new(out);
    Ok(RepairOutcome {
        tour,
        inserted_afs,
        inserted_depots,
    })
}

/// Core pass over a sequence whose first node is the depot.
pub(crate) fn repair_nodes(
    inst: &Instance,
    nodes: &[NodeId],
) -> Result<(Vec<NodeId>, usize, usize), RepairError> {
    let depot = inst.depot();
    let h = inst.consumption_rate();
    let mut out = Vec::with_capacity(nodes.len() + nodes.len() / 4 + 2);
    out.push(depot);
    let mut state = VehicleState::full(inst);
    let mut current = depot;
    let mut inserted_afs = 0;
    let mut inserted_depots = 0;

    // nodes pushed in front of the remaining input, last element first
    let mut front: Vec<NodeId> = Vec::new();
    let mut k = 1;
    loop {
        let next = match front.last() {
            Some(&v) => v,
            None if k < nodes.len() => nodes[k],
            None => break,
        };

        if inst.is_customer(next) && state.load < inst.demand(next) {
            front.push(depot);
            inserted_depots += 1;
            continue;
        }

        let after = state.charge - inst.energy(current, next);
        let reachable =
            after >= 0.0 && (inst.is_recharge(next) || after >= h * inst.nearest_recharge(next).1);
        if reachable {
            let served = state.advance(inst, current, next);
            debug_assert!(served);
            if out.last() != Some(&next) {
                out.push(next);
            }
            current = next;
            if front.pop().is_none() {
                k += 1;
            }
            continue;
        }

        // from a recharge point, only strictly closer ones are worth a detour
        let mut best: Option<(NodeId, f64)> = inst
            .is_recharge(current)
            .then(|| (current, inst.distance(current, next)));
        for &q in inst.recharge_points() {
            if q == current {
                continue;
            }
            if state.charge - inst.energy(current, q) < 0.0 {
                continue;
            }
            let d = inst.distance(q, next);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((q, d));
            }
        }
        match best {
            Some((q, _)) if q != current => {
                if inst.is_depot(q) {
                    inserted_depots += 1;
                } else {
                    inserted_afs += 1;
                }
                front.push(q);
            }
            _ => {
                return Err(RepairError::Stuck {
                    position: out.len(),
                    current,
                    next,
                })
            }
        }
    }
    Ok((out, inserted_afs, inserted_depots))
}
