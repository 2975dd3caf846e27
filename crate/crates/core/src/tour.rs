//! Solution representation: a single giant tour that starts and ends at the
//! depot. Interior depot visits separate the vehicle round trips (subtours).

use std::fmt;
use std::ops::RangeInclusive;

use crate::budget::{BudgetExhausted, EvalBudget};
use crate::instance::{Instance, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Tour {
    nodes: Vec<NodeId>,
}

impl Tour {
    pub fn new(nodes: Vec<NodeId>) -> Self {
        Tour { nodes }
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Tour {
            nodes: indices.iter().copied().map(NodeId).collect(),
        }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<NodeId> {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> Option<NodeId> {
        self.nodes.first().copied()
    }

    pub fn last(&self) -> Option<NodeId> {
        self.nodes.last().copied()
    }

    /// Sum of edge lengths. Not counted against any evaluation budget; use
    /// [`tour_weight`] inside the search.
    pub fn weight(&self, inst: &Instance) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| inst.distance(w[0], w[1]))
            .sum()
    }

    pub fn reversed(&self) -> Tour {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        Tour { nodes }
    }

    /// Customers in visiting order.
    pub fn customer_sequence(&self, inst: &Instance) -> Vec<NodeId> {
        self.nodes
            .iter()
            .copied()
            .filter(|&v| inst.is_customer(v))
            .collect()
    }

    /// Removes consecutive repeated nodes (`D D`, `s s`). Zero-length edges
    /// carry no cost, so the weight is unchanged.
    pub fn dedup_consecutive(&mut self) {
        self.nodes.dedup();
    }

    pub fn indices(&self) -> Vec<usize> {
        self.nodes.iter().map(|v| v.0).collect()
    }
}

impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.nodes {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl From<Vec<NodeId>> for Tour {
    fn from(nodes: Vec<NodeId>) -> Self {
        Tour::new(nodes)
    }
}

/// Fitness evaluation: the tour weight, charged as one evaluation.
pub fn tour_weight(
    inst: &Instance,
    tour: &Tour,
    budget: &mut EvalBudget,
) -> Result<f64, BudgetExhausted> {
    budget.evaluate(inst, tour)
}

/// Inclusive index ranges `[start_depot, end_depot]` of every subtour.
pub fn subtour_ranges(inst: &Instance, nodes: &[NodeId]) -> Vec<RangeInclusive<usize>> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, &v) in nodes.iter().enumerate() {
        if inst.is_depot(v) {
            if let Some(s) = start {
                out.push(s..=k);
            }
            start = Some(k);
        }
    }
    out
}

/// Splits a tour at every depot visit. Each piece starts and ends at the depot.
pub fn subtours(inst: &Instance, tour: &Tour) -> Vec<Tour> {
    subtour_ranges(inst, &tour.nodes)
        .into_iter()
        .map(|r| Tour::new(tour.nodes[r].to_vec()))
        .collect()
}

/// Inverse of [`subtours`]: concatenates pieces, merging the shared depots.
pub fn join_subtours(parts: &[Tour]) -> Tour {
    let mut nodes: Vec<NodeId> = Vec::new();
    for part in parts {
        let skip = usize::from(!nodes.is_empty() && !part.is_empty());
        nodes.extend_from_slice(&part.nodes[skip..]);
    }
    Tour::new(nodes)
}
