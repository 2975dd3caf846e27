//! Move descriptors, their application, and constant-time cost deltas.
//!
//! Tour positions `0` and `n - 1` hold the terminal depot visits and are
//! never touched by a move; interior depot and station visits move like any
//! other node, which is how subtours get merged and split.

use thiserror::Error;

use crate::instance::{Instance, NodeId};
use crate::repair;
use crate::tour::Tour;
use crate::validate::VehicleState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Move {
    /// Reverse positions `i..=j`.
    TwoOpt { i: usize, j: usize },
    /// Exchange the `x` nodes starting at `i` with the `y` nodes starting at `j`.
    TwoString {
        i: usize,
        j: usize,
        x: usize,
        y: usize,
    },
    /// Remove the station at position `from`; if `to` is set, insert station
    /// `to.1` right after position `to.0` (positions refer to the tour before
    /// the removal).
    AfsRelocate {
        from: usize,
        to: Option<(usize, NodeId)>,
    },
    /// Strip all stations from the subtour spanning `start..=end` and let the
    /// repair procedure re-insert them, optionally on the reversed subtour.
    AfsReallocMore {
        start: usize,
        end: usize,
        reversed: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MoveError {
    #[error("move {mv:?} is out of bounds for a tour of length {len}")]
    OutOfBounds { mv: Move, len: usize },
    #[error("move {0:?} does not target a station")]
    NotAStation(Move),
    #[error("repair failed while applying {0:?}")]
    RepairFailed(Move),
}

fn two_opt_ok(n: usize, i: usize, j: usize) -> bool {
    i >= 1 && i < j && j + 2 <= n
}

fn two_string_ok(n: usize, i: usize, j: usize, x: usize, y: usize) -> bool {
    i >= 1 && j >= i + x && j + y < n
}

/// Reverses positions `i..=j`; requires `1 <= i < j <= n - 2`.
pub fn apply_two_opt(tour: &Tour, i: usize, j: usize) -> Result<Tour, MoveError> {
    let n = tour.len();
    if !two_opt_ok(n, i, j) {
        return Err(MoveError::OutOfBounds {
            mv: Move::TwoOpt { i, j },
            len: n,
        });
    }
    let mut nodes = tour.nodes().to_vec();
    nodes[i..=j].reverse();
    Ok(Tour::new(nodes))
}

/// Swaps the block `[i, i + x)` with the block `[j, j + y)`; requires
/// `i >= 1`, `j >= i + x` and `j + y <= n - 1`.
pub fn apply_two_string(
    tour: &Tour,
    i: usize,
    j: usize,
    x: usize,
    y: usize,
) -> Result<Tour, MoveError> {
    let n = tour.len();
    if !two_string_ok(n, i, j, x, y) {
        return Err(MoveError::OutOfBounds {
            mv: Move::TwoString { i, j, x, y },
            len: n,
        });
    }
    let t = tour.nodes();
    let mut nodes = Vec::with_capacity(n);
    nodes.extend_from_slice(&t[..i]);
    nodes.extend_from_slice(&t[j..j + y]);
    nodes.extend_from_slice(&t[i + x..j]);
    nodes.extend_from_slice(&t[i..i + x]);
    nodes.extend_from_slice(&t[j + y..]);
    Ok(Tour::new(nodes))
}

/// Sum of the edges joining consecutive non-empty pieces.
#[inline]
fn junctions(inst: &Instance, t: &[NodeId], pieces: &[(usize, usize)]) -> f64 {
    let mut sum = 0.0;
    let mut prev_last: Option<NodeId> = None;
    for &(a, b) in pieces {
        if a == b {
            continue;
        }
        if let Some(p) = prev_last {
            sum += inst.distance(p, t[a]);
        }
        prev_last = Some(t[b - 1]);
    }
    sum
}

#[inline]
pub(crate) fn two_opt_delta(inst: &Instance, t: &[NodeId], i: usize, j: usize) -> f64 {
    inst.distance(t[i - 1], t[j]) + inst.distance(t[i], t[j + 1])
        - inst.distance(t[i - 1], t[i])
        - inst.distance(t[j], t[j + 1])
}

#[inline]
pub(crate) fn two_string_delta(
    inst: &Instance,
    t: &[NodeId],
    i: usize,
    j: usize,
    x: usize,
    y: usize,
) -> f64 {
    let n = t.len();
    let p = (0, i);
    let a = (i, i + x);
    let m = (i + x, j);
    let b = (j, j + y);
    let s = (j + y, n);
    junctions(inst, t, &[p, b, m, a, s]) - junctions(inst, t, &[p, a, m, b, s])
}

/// Insertion cost of `k` on the edge `(i, j)`: `w(i,k) + w(k,j) - w(i,j)`.
#[inline]
pub fn insertion_cost(inst: &Instance, i: NodeId, k: NodeId, j: NodeId) -> f64 {
    inst.distance(i, k) + inst.distance(k, j) - inst.distance(i, j)
}

fn relocate_neighbors(t: &[NodeId], from: usize, after: usize) -> (NodeId, NodeId) {
    let right = if after + 1 == from {
        t[from + 1]
    } else {
        t[after + 1]
    };
    (t[after], right)
}

fn afs_relocate_ok(inst: &Instance, t: &[NodeId], mv: Move) -> Result<(), MoveError> {
    let Move::AfsRelocate { from, to } = mv else {
        unreachable!()
    };
    let n = t.len();
    if from == 0 || from + 1 >= n {
        return Err(MoveError::OutOfBounds { mv, len: n });
    }
    if !inst.is_afs(t[from]) {
        return Err(MoveError::NotAStation(mv));
    }
    if let Some((after, afs)) = to {
        if after == from || after + 1 >= n || afs.0 >= inst.node_count() {
            return Err(MoveError::OutOfBounds { mv, len: n });
        }
        if !inst.is_afs(afs) {
            return Err(MoveError::NotAStation(mv));
        }
    }
    Ok(())
}

fn afs_more_ok(inst: &Instance, t: &[NodeId], mv: Move) -> Result<(), MoveError> {
    let Move::AfsReallocMore { start, end, .. } = mv else {
        unreachable!()
    };
    if start >= end || end >= t.len() || !inst.is_depot(t[start]) || !inst.is_depot(t[end]) {
        return Err(MoveError::OutOfBounds { mv, len: t.len() });
    }
    Ok(())
}

fn realloc_more_segment(
    inst: &Instance,
    t: &[NodeId],
    start: usize,
    end: usize,
    reversed: bool,
) -> Option<Vec<NodeId>> {
    let mut stripped: Vec<NodeId> = t[start..=end]
        .iter()
        .copied()
        .filter(|&v| !inst.is_afs(v))
        .collect();
    if reversed {
        stripped.reverse();
    }
    repair::repair_nodes(inst, &stripped)
        .ok()
        .map(|(nodes, _, _)| nodes)
}

impl Move {
    /// Checks the index contract against a tour.
    pub fn check(&self, inst: &Instance, tour: &Tour) -> Result<(), MoveError> {
        let t = tour.nodes();
        let n = t.len();
        match *self {
            Move::TwoOpt { i, j } if !two_opt_ok(n, i, j) => {
                Err(MoveError::OutOfBounds { mv: *self, len: n })
            }
            Move::TwoString { i, j, x, y } if !two_string_ok(n, i, j, x, y) => {
                Err(MoveError::OutOfBounds { mv: *self, len: n })
            }
            Move::AfsRelocate { .. } => afs_relocate_ok(inst, t, *self),
            Move::AfsReallocMore { .. } => afs_more_ok(inst, t, *self),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, inst: &Instance, tour: &Tour) -> Result<Tour, MoveError> {
        self.check(inst, tour)?;
        let t = tour.nodes();
        match *self {
            Move::TwoOpt { i, j } => apply_two_opt(tour, i, j),
            Move::TwoString { i, j, x, y } => apply_two_string(tour, i, j, x, y),
            Move::AfsRelocate { from, to } => {
                let mut nodes = Vec::with_capacity(t.len());
                for (k, &v) in t.iter().enumerate() {
                    if k != from {
                        nodes.push(v);
                    }
                    if let Some((after, afs)) = to {
                        let slot = if after + 1 == from { from } else { after };
                        if k == slot {
                            nodes.push(afs);
                        }
                    }
                }
                Ok(Tour::new(nodes))
            }
            Move::AfsReallocMore {
                start,
                end,
                reversed,
            } => {
                let seg = realloc_more_segment(inst, t, start, end, reversed)
                    .ok_or(MoveError::RepairFailed(*self))?;
                let mut nodes = Vec::with_capacity(t.len() + 4);
                nodes.extend_from_slice(&t[..start]);
                nodes.extend_from_slice(&seg);
                nodes.extend_from_slice(&t[end + 1..]);
                Ok(Tour::new(nodes))
            }
        }
    }

    /// `w(apply(tour)) - w(tour)` from the broken and created edges only.
    pub fn delta(&self, inst: &Instance, tour: &Tour) -> Result<f64, MoveError> {
        self.check(inst, tour)?;
        let t = tour.nodes();
        Ok(match *self {
            Move::TwoOpt { i, j } => two_opt_delta(inst, t, i, j),
            Move::TwoString { i, j, x, y } => two_string_delta(inst, t, i, j, x, y),
            Move::AfsRelocate { from, to } => {
                let removed = insertion_cost(inst, t[from - 1], t[from], t[from + 1]);
                match to {
                    None => -removed,
                    Some((after, afs)) => {
                        let (l, r) = relocate_neighbors(t, from, after);
                        insertion_cost(inst, l, afs, r) - removed
                    }
                }
            }
            Move::AfsReallocMore {
                start,
                end,
                reversed,
            } => {
                let seg = realloc_more_segment(inst, t, start, end, reversed)
                    .ok_or(MoveError::RepairFailed(*self))?;
                let new_w: f64 = seg.windows(2).map(|w| inst.distance(w[0], w[1])).sum();
                let old_w: f64 = t[start..=end]
                    .windows(2)
                    .map(|w| inst.distance(w[0], w[1]))
                    .sum();
                new_w - old_w
            }
        })
    }
}

/// Cost delta of a move (see [`Move::delta`]).
pub fn delta_weight(inst: &Instance, tour: &Tour, mv: &Move) -> Result<f64, MoveError> {
    mv.delta(inst, tour)
}

/// Position of the last depot visit at or before each position.
pub(crate) fn depot_before(inst: &Instance, t: &[NodeId]) -> Vec<usize> {
    let mut out = Vec::with_capacity(t.len());
    let mut last = 0;
    for (k, &v) in t.iter().enumerate() {
        if inst.is_depot(v) {
            last = k;
        }
        out.push(last);
    }
    out
}

/// Simulates the node stream of a modified tour starting at the depot visit
/// at position `start` and stops at the first depot reached at or after
/// position `region_end`. The prefix before `start` and everything after that
/// depot are unchanged from a feasible tour, so this decides feasibility of
/// the whole modified tour.
pub(crate) fn window_feasible<I>(
    inst: &Instance,
    mut stream: I,
    start: usize,
    region_end: usize,
) -> bool
where
    I: Iterator<Item = NodeId>,
{
    let Some(first) = stream.next() else {
        return true;
    };
    debug_assert!(inst.is_depot(first));
    let mut state = VehicleState::full(inst);
    let mut prev = first;
    let mut pos = start;
    for v in stream {
        pos += 1;
        if !state.advance(inst, prev, v) {
            return false;
        }
        if pos >= region_end && inst.is_depot(v) {
            return true;
        }
        prev = v;
    }
    true
}

pub(crate) fn two_opt_feasible(
    inst: &Instance,
    t: &[NodeId],
    before: &[usize],
    i: usize,
    j: usize,
) -> bool {
    let s = before[i - 1];
    let stream = t[s..i]
        .iter()
        .chain(t[i..=j].iter().rev())
        .chain(t[j + 1..].iter())
        .copied();
    window_feasible(inst, stream, s, j + 1)
}

pub(crate) fn two_string_feasible(
    inst: &Instance,
    t: &[NodeId],
    before: &[usize],
    i: usize,
    j: usize,
    x: usize,
    y: usize,
) -> bool {
    let s = before[i - 1];
    let stream = t[s..i]
        .iter()
        .chain(t[j..j + y].iter())
        .chain(t[i + x..j].iter())
        .chain(t[i..i + x].iter())
        .chain(t[j + y..].iter())
        .copied();
    window_feasible(inst, stream, s, j + y)
}
