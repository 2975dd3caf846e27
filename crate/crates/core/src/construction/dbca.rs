//! Density-based customer clustering.

use crate::instance::{Instance, NodeId};

/// Radius fractions of the vehicle reach tried by the grid search.
pub const EPSILON_FRACTIONS: [f64; 8] = [
    1.0 / 2.0,
    1.0 / 3.0,
    1.0 / 4.0,
    1.0 / 6.0,
    1.0 / 8.0,
    1.0 / 10.0,
    1.0 / 15.0,
    1.0 / 20.0,
];
/// Density thresholds tried by the grid search.
pub const DELTAS: [usize; 4] = [2, 3, 4, 5];

/// All `(epsilon, delta)` cells of the grid, epsilon-major.
pub fn parameter_grid(inst: &Instance) -> Vec<(f64, usize)> {
    let reach = inst.reach();
    EPSILON_FRACTIONS
        .iter()
        .flat_map(|&f| DELTAS.iter().map(move |&d| (f * reach, d)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Disjoint, non-empty customer sets covering every customer. Members
    /// are sorted by id; clusters by centroid distance from the depot.
    pub clusters: Vec<Vec<NodeId>>,
    pub epsilon: f64,
    pub delta: usize,
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Clusters customers: a customer is a core when its `epsilon`-neighborhood
/// (itself included) has at least `delta` customers. Each core forms a
/// cluster with its neighborhood, overlapping clusters merge, and every
/// remaining customer joins the cluster of its nearest clustered customer.
/// Without any core all customers form a single cluster.
pub fn dbca_cluster(inst: &Instance, epsilon: f64, delta: usize) -> Clustering {
    let cs = inst.customers();
    let n = cs.len();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| inst.distance(cs[a], cs[b]) <= epsilon)
                .collect()
        })
        .collect();
    let core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= delta).collect();
    if !core.iter().any(|&c| c) {
        return Clustering {
            clusters: if n == 0 {
                Vec::new()
            } else {
                vec![cs.to_vec()]
            },
            epsilon,
            delta,
        };
    }
    let mut ds = DisjointSet::new(n);
    let mut clustered = vec![false; n];
    for a in (0..n).filter(|&a| core[a]) {
        for &b in &neighbors[a] {
            ds.union(a, b);
            clustered[b] = true;
        }
    }
    let members: Vec<usize> = (0..n).filter(|&a| clustered[a]).collect();
    let mut root: Vec<usize> = (0..n).map(|a| ds.find(a)).collect();
    for a in (0..n).filter(|&a| !clustered[a]) {
        let nearest = members
            .iter()
            .copied()
            .min_by(|&x, &y| {
                inst.distance(cs[a], cs[x])
                    .total_cmp(&inst.distance(cs[a], cs[y]))
            })
            .expect("at least one core exists");
        root[a] = root[nearest];
    }

    let mut groups: Vec<(usize, Vec<NodeId>)> = Vec::new();
    for a in 0..n {
        match groups.iter_mut().find(|g| g.0 == root[a]) {
            Some(g) => g.1.push(cs[a]),
            None => groups.push((root[a], vec![cs[a]])),
        }
    }
    let depot = inst.coord(inst.depot());
    let key = |g: &Vec<NodeId>| {
        let (sx, sy) = g.iter().fold((0.0, 0.0), |acc, &v| {
            let (x, y) = inst.coord(v);
            (acc.0 + x, acc.1 + y)
        });
        let k = g.len() as f64;
        ((sx / k - depot.0).powi(2) + (sy / k - depot.1).powi(2)).sqrt()
    };
    let mut clusters: Vec<(f64, Vec<NodeId>)> =
        groups.into_iter().map(|(_, g)| (key(&g), g)).collect();
    clusters.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1[0].cmp(&b.1[0])));
    Clustering {
        clusters: clusters.into_iter().map(|c| c.1).collect(),
        epsilon,
        delta,
    }
}
