//! Constraint checking by left-to-right simulation of the tour.
//!
//! On arrival at a node the vehicle has `load` cargo and `charge` energy left.
//! A customer needs `load >= demand`; every edge costs `h * w(i, j)` energy
//! and arrival charge must stay non-negative. Visiting a station restores full
//! charge; visiting the depot restores full charge and full cargo.

use std::fmt;

use crate::instance::{Instance, NodeId};
use crate::tour::Tour;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    CustomerCoverage,
    CapacityExceeded,
    BatteryDepleted,
    EndpointNotDepot,
    UnknownNode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Tour position, or `None` for a customer that is never visited.
    pub position: Option<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some(p) => write!(f, "{:?} at position {p}: {}", self.kind, self.detail),
            None => write!(f, "{:?}: {}", self.kind, self.detail),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// Remaining cargo on arrival at each position.
    pub load_trace: Vec<i64>,
    /// Remaining energy on arrival at each position.
    pub charge_trace: Vec<f64>,
}

impl ValidationReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Vehicle state shared by validation, repair and the operators' feasibility
/// filters so that all of them perform bit-identical arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct VehicleState {
    pub load: u64,
    pub charge: f64,
}

impl VehicleState {
    pub fn full(inst: &Instance) -> Self {
        VehicleState {
            load: inst.cargo_capacity(),
            charge: inst.battery_capacity(),
        }
    }

    /// Drives `from -> to` and services `to`. Returns false if the vehicle
    /// arrives with negative charge or cannot serve the demand.
    #[inline]
    pub fn advance(&mut self, inst: &Instance, from: NodeId, to: NodeId) -> bool {
        self.charge -= inst.energy(from, to);
        if self.charge < 0.0 {
            return false;
        }
        self.visit(inst, to)
    }

    #[inline]
    pub fn visit(&mut self, inst: &Instance, node: NodeId) -> bool {
        if inst.is_customer(node) {
            let d = inst.demand(node);
            if self.load < d {
                return false;
            }
            self.load -= d;
        } else {
            self.charge = inst.battery_capacity();
            if inst.is_depot(node) {
                self.load = inst.cargo_capacity();
            }
        }
        true
    }
}

/// Checks whether a node sequence that starts at a recharge point can be
/// driven without violating capacity or battery constraints. Starting state is
/// a full vehicle if the first node is the depot, full charge with `load` if
/// it is a station.
pub(crate) fn sequence_feasible<I>(inst: &Instance, mut nodes: I, start_load: u64) -> bool
where
    I: Iterator<Item = NodeId>,
{
    let Some(first) = nodes.next() else {
        return true;
    };
    let mut state = VehicleState {
        load: start_load,
        charge: inst.battery_capacity(),
    };
    if !state.visit(inst, first) {
        return false;
    }
    let mut prev = first;
    for v in nodes {
        if !state.advance(inst, prev, v) {
            return false;
        }
        prev = v;
    }
    true
}

/// Full check of coverage, endpoints, capacity and battery constraints.
pub fn validate(inst: &Instance, tour: &Tour) -> ValidationReport {
    let nodes = tour.nodes();
    let mut violations = Vec::new();
    let n_nodes = inst.node_count();

    if let Some(pos) = nodes.iter().position(|v| v.0 >= n_nodes) {
        violations.push(Violation {
            kind: ViolationKind::UnknownNode,
            position: Some(pos),
            detail: format!("node {} does not exist", nodes[pos]),
        });
        return ValidationReport {
            valid: false,
            violations,
            load_trace: Vec::new(),
            charge_trace: Vec::new(),
        };
    }

    match (nodes.first(), nodes.last()) {
        (Some(&a), Some(&b)) => {
            if !inst.is_depot(a) {
                violations.push(Violation {
                    kind: ViolationKind::EndpointNotDepot,
                    position: Some(0),
                    detail: format!("tour starts at node {a}"),
                });
            }
            if !inst.is_depot(b) {
                violations.push(Violation {
                    kind: ViolationKind::EndpointNotDepot,
                    position: Some(nodes.len() - 1),
                    detail: format!("tour ends at node {b}"),
                });
            }
        }
        _ => violations.push(Violation {
            kind: ViolationKind::EndpointNotDepot,
            position: None,
            detail: "empty tour".into(),
        }),
    }

    let mut seen = vec![false; n_nodes];
    for (pos, &v) in nodes.iter().enumerate() {
        if inst.is_customer(v) {
            if seen[v.0] {
                violations.push(Violation {
                    kind: ViolationKind::CustomerCoverage,
                    position: Some(pos),
                    detail: format!("customer {v} visited more than once"),
                });
            }
            seen[v.0] = true;
        }
    }
    for &c in inst.customers() {
        if !seen[c.0] {
            violations.push(Violation {
                kind: ViolationKind::CustomerCoverage,
                position: None,
                detail: format!("customer {c} is never visited"),
            });
        }
    }

    let capacity = inst.cargo_capacity() as i64;
    let battery = inst.battery_capacity();
    let mut load = capacity;
    let mut charge = battery;
    let mut load_trace = Vec::with_capacity(nodes.len());
    let mut charge_trace = Vec::with_capacity(nodes.len());
    let mut depleted = false;
    for (pos, &v) in nodes.iter().enumerate() {
        if pos > 0 {
            charge -= inst.energy(nodes[pos - 1], v);
        }
        load_trace.push(load);
        charge_trace.push(charge);
        if charge < 0.0 {
            if !depleted {
                violations.push(Violation {
                    kind: ViolationKind::BatteryDepleted,
                    position: Some(pos),
                    detail: format!("arrives at node {v} with charge {charge:.4}"),
                });
            }
            depleted = true;
        }
        if inst.is_customer(v) {
            let d = inst.demand(v) as i64;
            if load < d {
                violations.push(Violation {
                    kind: ViolationKind::CapacityExceeded,
                    position: Some(pos),
                    detail: format!("customer {v} needs {d}, vehicle carries {load}"),
                });
            }
            load -= d;
        } else {
            charge = battery;
            depleted = false;
            if inst.is_depot(v) {
                load = capacity;
            }
        }
    }

    ValidationReport {
        valid: violations.is_empty(),
        violations,
        load_trace,
        charge_trace,
    }
}

/// Shorthand for `validate(..).valid`.
pub fn is_valid(inst: &Instance, tour: &Tour) -> bool {
    let nodes = tour.nodes();
    if nodes.len() < 2 || !inst.is_depot(nodes[0]) || !inst.is_depot(nodes[nodes.len() - 1]) {
        return false;
    }
    validate(inst, tour).valid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::NodeSpec;

    fn inst(battery: f64) -> Instance {
        Instance::new(
            "v",
            vec![
                NodeSpec::depot(0.0, 0.0),
                NodeSpec::customer(3.0, 4.0, 6),
                NodeSpec::customer(-3.0, 4.0, 6),
                NodeSpec::afs(0.0, 5.0),
            ],
            10,
            battery,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn accepts_valid_tour() {
        let i = inst(100.0);
        let r = validate(&i, &Tour::from_indices(&[0, 1, 0, 2, 0]));
        assert!(r.valid, "{:?}", r.violations);
        assert_eq!(r.load_trace.len(), 5);
        assert_eq!(r.charge_trace.len(), 5);
        assert!(r.load_trace.iter().all(|&l| (0..=10).contains(&l)));
        assert!(r.charge_trace.iter().all(|&c| (0.0..=100.0).contains(&c)));
    }

    #[test]
    fn reports_missing_customer() {
        let i = inst(100.0);
        let r = validate(&i, &Tour::from_indices(&[0, 1, 0]));
        assert!(!r.valid);
        assert!(r.has(ViolationKind::CustomerCoverage));
    }

    #[test]
    fn reports_duplicate_customer() {
        let i = inst(100.0);
        let r = validate(&i, &Tour::from_indices(&[0, 1, 0, 2, 0, 1, 0]));
        assert!(r.has(ViolationKind::CustomerCoverage));
    }

    #[test]
    fn reports_capacity() {
        let i = inst(100.0);
        let r = validate(&i, &Tour::from_indices(&[0, 1, 2, 0]));
        let v = r
            .violations
            .iter()
            .find(|v| v.kind == ViolationKind::CapacityExceeded)
            .unwrap();
        assert!(v.position.unwrap() <= 2);
    }

    #[test]
    fn reports_battery() {
        // 2 * 5 * 1.0 > 9
        let i = inst(9.0);
        let r = validate(&i, &Tour::from_indices(&[0, 1, 0, 2, 0]));
        assert!(r.has(ViolationKind::BatteryDepleted));
        // recharging at the station fixes the first trip: 5 + hypot(3,1) <= 9, then 5 again
        let r = validate(&i, &Tour::from_indices(&[0, 1, 3, 0, 2, 3, 0]));
        assert!(r.valid, "{:?}", r.violations);
    }

    #[test]
    fn reports_endpoints() {
        let i = inst(100.0);
        let r = validate(&i, &Tour::from_indices(&[1, 0, 2, 0]));
        assert!(r.has(ViolationKind::EndpointNotDepot));
        let r = validate(&i, &Tour::from_indices(&[0, 1, 0, 2, 3]));
        assert!(r.has(ViolationKind::EndpointNotDepot));
        assert!(!validate(&i, &Tour::default()).valid);
        assert!(validate(&i, &Tour::from_indices(&[0, 9, 0])).has(ViolationKind::UnknownNode));
    }

    #[test]
    fn sequence_feasibility_matches_validate() {
        let i = inst(9.0);
        let ok = Tour::from_indices(&[0, 1, 3, 0, 2, 3, 0]);
        assert!(sequence_feasible(&i, ok.nodes().iter().copied(), 10));
        let bad = Tour::from_indices(&[0, 1, 0]);
        assert!(!sequence_feasible(&i, bad.nodes().iter().copied(), 10));
    }
}
