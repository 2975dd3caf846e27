//! Station reallocation operators.

use crate::budget::{BudgetExhausted, EvalBudget};
use crate::instance::{Instance, NodeId};
use crate::repair;
use crate::tour::{subtour_ranges, Tour};
use crate::validate::sequence_feasible;
use crate::IMPROVEMENT_EPS;

use super::moves::insertion_cost;

fn segment_weight(inst: &Instance, nodes: &[NodeId]) -> f64 {
    nodes.windows(2).map(|w| inst.distance(w[0], w[1])).sum()
}

/// Best station placement for a subtour that visits exactly one station.
/// `seg` starts and ends at the depot; `f` is the station's index in `seg`.
/// Returns the replacement segment when it is strictly cheaper.
fn realloc_one_segment(
    inst: &Instance,
    seg: &[NodeId],
    f: usize,
    deltas: &mut u64,
) -> Option<Vec<NodeId>> {
    let afs = seg[f];
    let stripped: Vec<NodeId> = seg
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != f)
        .map(|(_, &v)| v)
        .collect();
    let m = stripped.len();
    let load = inst.cargo_capacity();
    let i_orig = insertion_cost(inst, seg[f - 1], afs, seg[f + 1]);

    // (delta, edge, station); edge `e` joins stripped[e] and stripped[e + 1]
    let mut cands: Vec<(f64, Option<(usize, NodeId)>)> = Vec::new();
    cands.push((-i_orig, None));

    // forward charge on arrival at each stripped position, no recharging
    let q = inst.battery_capacity();
    let mut fwd = Vec::with_capacity(m);
    let mut c = q;
    fwd.push(c);
    for w in stripped.windows(2) {
        c -= inst.energy(w[0], w[1]);
        fwd.push(c);
    }
    // last position the vehicle reaches on its initial charge
    let a = fwd.iter().rposition(|&c| c >= 0.0).unwrap_or(0).min(m - 2);
    // first position from which the end depot is reachable on a full charge
    let mut suffix = 0.0;
    let mut b = m - 1;
    for k in (0..m - 1).rev() {
        suffix += inst.energy(stripped[k], stripped[k + 1]);
        if suffix > q + 1e-9 {
            break;
        }
        b = k;
    }
    let lo = b.saturating_sub(1);
    for e in lo..=a {
        let (l, r) = (stripped[e], stripped[e + 1]);
        for &s in inst.stations() {
            *deltas += 1;
            if fwd[e] - inst.energy(l, s) < 0.0 {
                continue;
            }
            let d = insertion_cost(inst, l, s, r) - i_orig;
            if d < -IMPROVEMENT_EPS {
                cands.push((d, Some((e, s))));
            }
        }
    }
    if cands[0].0 >= -IMPROVEMENT_EPS {
        cands.swap_remove(0);
    }
    cands.sort_by(|x, y| x.0.total_cmp(&y.0));
    for (_, place) in cands {
        let out: Vec<NodeId> = match place {
            None => stripped.clone(),
            Some((e, s)) => stripped[..=e]
                .iter()
                .copied()
                .chain(std::iter::once(s))
                .chain(stripped[e + 1..].iter().copied())
                .collect(),
        };
        if sequence_feasible(inst, out.iter().copied(), load) {
            return Some(out);
        }
    }
    None
}

fn rebuild(t: &[NodeId], pieces: Vec<(usize, usize, Vec<NodeId>)>) -> Vec<NodeId> {
    let mut out = Vec::with_capacity(t.len() + 2);
    let mut cursor = 0;
    for (s, e, seg) in pieces {
        if s >= cursor {
            out.extend_from_slice(&t[cursor..s]);
            out.extend_from_slice(&seg);
        } else {
            // neighboring subtours share the depot visit already written
            out.extend_from_slice(&seg[1..]);
        }
        cursor = e + 1;
    }
    out.extend_from_slice(&t[cursor..]);
    out
}

/// Moves the single station of each one-station subtour to its cheapest
/// feasible position, or drops it when the subtour is feasible without it.
/// Returns `None` when no subtour improves.
pub fn afs_realloc_1_step(inst: &Instance, tour: &Tour, budget: &mut EvalBudget) -> Option<Tour> {
    let t = tour.nodes();
    let mut deltas = 0;
    let mut pieces = Vec::new();
    for r in subtour_ranges(inst, t) {
        let (s, e) = (*r.start(), *r.end());
        let seg = &t[s..=e];
        let mut afs_at = seg
            .iter()
            .enumerate()
            .filter(|&(_, &v)| inst.is_afs(v))
            .map(|(k, _)| k);
        let (Some(f), None) = (afs_at.next(), afs_at.next()) else {
            continue;
        };
        if let Some(new_seg) = realloc_one_segment(inst, seg, f, &mut deltas) {
            pieces.push((s, e, new_seg));
        }
    }
    budget.charge_deltas(deltas);
    if pieces.is_empty() {
        return None;
    }
    Some(Tour::new(rebuild(t, pieces)))
}

/// [`afs_realloc_1_step`], returning the input when nothing improves.
pub fn afs_realloc_1(inst: &Instance, tour: &Tour, budget: &mut EvalBudget) -> Tour {
    afs_realloc_1_step(inst, tour, budget).unwrap_or_else(|| tour.clone())
}

/// Strips all stations from each multi-station subtour and re-runs the repair
/// on it and on its reversal. The strictly lightest of the three versions is
/// kept. Two evaluations are charged per subtour examined.
pub fn afs_realloc_more_step(
    inst: &Instance,
    tour: &Tour,
    budget: &mut EvalBudget,
) -> Result<Option<Tour>, BudgetExhausted> {
    let t = tour.nodes();
    let load = inst.cargo_capacity();
    let mut pieces = Vec::new();
    for r in subtour_ranges(inst, t) {
        let (s, e) = (*r.start(), *r.end());
        let seg = &t[s..=e];
        if seg.iter().filter(|&&v| inst.is_afs(v)).count() < 2 {
            continue;
        }
        let stripped: Vec<NodeId> = seg.iter().copied().filter(|&v| !inst.is_afs(v)).collect();
        let reversed: Vec<NodeId> = stripped.iter().rev().copied().collect();
        let fixed = |nodes: &[NodeId]| -> Option<(Vec<NodeId>, f64)> {
            let (out, _, _) = repair::repair_nodes(inst, nodes).ok()?;
            if !sequence_feasible(inst, out.iter().copied(), load) {
                return None;
            }
            let w = segment_weight(inst, &out);
            Some((out, w))
        };
        let fwd = fixed(&stripped);
        let rev = fixed(&reversed);
        budget.charge(2)?;
        let w = segment_weight(inst, seg);
        let w2 = fwd.as_ref().map_or(f64::INFINITY, |x| x.1);
        let w3 = rev.as_ref().map_or(f64::INFINITY, |x| x.1);
        if w2 < w3 && w2 < w - IMPROVEMENT_EPS {
            pieces.push((s, e, fwd.unwrap().0));
        } else if w3 < w2 && w3 < w - IMPROVEMENT_EPS {
            pieces.push((s, e, rev.unwrap().0));
        }
    }
    if pieces.is_empty() {
        return Ok(None);
    }
    Ok(Some(Tour::new(rebuild(t, pieces))))
}

/// [`afs_realloc_more_step`], returning the input when nothing improves.
pub fn afs_realloc_more(
    inst: &Instance,
    tour: &Tour,
    budget: &mut EvalBudget,
) -> Result<Tour, BudgetExhausted> {
    Ok(afs_realloc_more_step(inst, tour, budget)?.unwrap_or_else(|| tour.clone()))
}

/// Single-station reallocation first; the multi-station search runs only when
/// that finds nothing.
pub fn afs_realloc_all_step(
    inst: &Instance,
    tour: &Tour,
    budget: &mut EvalBudget,
) -> Result<Option<Tour>, BudgetExhausted> {
    if let Some(t) = afs_realloc_1_step(inst, tour, budget) {
        return Ok(Some(t));
    }
    afs_realloc_more_step(inst, tour, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::NodeSpec;
    use crate::validate::is_valid;

    fn line(s4: (f64, f64)) -> Instance {
        Instance::new(
            "line",
            vec![
                NodeSpec::depot(0.0, 0.0),
                NodeSpec::customer(40.0, 0.0, 1),
                NodeSpec::customer(80.0, 0.0, 1),
                NodeSpec::afs(70.0, 10.0),
                NodeSpec::afs(s4.0, s4.1),
                NodeSpec::afs(20.0, 10.0),
            ],
            10,
            100.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn moves_station_to_cheaper_spot() {
        let inst = line((60.0, 0.0));
        let tour = Tour::from_indices(&[0, 1, 2, 3, 0]);
        assert!(is_valid(&inst, &tour));
        let mut b = EvalBudget::unlimited();
        let out = afs_realloc_1(&inst, &tour, &mut b);
        assert!(is_valid(&inst, &out));
        assert!((out.weight(&inst) - 160.0).abs() < 1e-9);
        assert_eq!(out.customer_sequence(&inst), tour.customer_sequence(&inst));
    }

    #[test]
    fn drops_redundant_station() {
        let inst = line((60.0, 0.0));
        let tour = Tour::from_indices(&[0, 5, 1, 0]);
        let mut b = EvalBudget::unlimited();
        let out = afs_realloc_1(&inst, &tour, &mut b);
        assert_eq!(out.indices(), vec![0, 1, 0]);
    }

    #[test]
    fn keeps_optimal_placement() {
        let inst = line((60.0, 0.0));
        let tour = Tour::from_indices(&[0, 1, 2, 4, 0]);
        let mut b = EvalBudget::unlimited();
        assert!(afs_realloc_1_step(&inst, &tour, &mut b).is_none());
    }

    #[test]
    fn realloc_more_strips_and_repairs() {
        let inst = line((60.0, 5.0));
        let tour = Tour::from_indices(&[0, 5, 1, 3, 2, 3, 0]);
        assert!(is_valid(&inst, &tour));
        let mut b = EvalBudget::new(100);
        let out = afs_realloc_more(&inst, &tour, &mut b).unwrap();
        assert_eq!(b.used(), 2);
        assert_eq!(out.indices(), vec![0, 1, 2, 3, 0]);
    }

    #[test]
    fn realloc_more_tie_keeps_original() {
        // forward and reversed repairs cost the same here
        let inst = line((60.0, 0.0));
        let tour = Tour::from_indices(&[0, 5, 1, 3, 2, 3, 0]);
        let mut b = EvalBudget::new(100);
        assert!(afs_realloc_more_step(&inst, &tour, &mut b)
            .unwrap()
            .is_none());
    }

    #[test]
    fn realloc_more_respects_budget() {
        let inst = line((60.0, 5.0));
        let tour = Tour::from_indices(&[0, 5, 1, 3, 2, 3, 0]);
        let mut b = EvalBudget::new(0);
        assert!(afs_realloc_more(&inst, &tour, &mut b).is_err());
    }

    #[test]
    fn realloc_all_prefers_single() {
        let inst = line((60.0, 0.0));
        let tour = Tour::from_indices(&[0, 1, 2, 3, 0]);
        let mut b = EvalBudget::new(10);
        let out = afs_realloc_all_step(&inst, &tour, &mut b).unwrap().unwrap();
        assert_eq!(b.used(), 0);
        assert!((out.weight(&inst) - 160.0).abs() < 1e-9);
    }
}
