//! Variable neighborhood search for the capacitated electric vehicle routing
//! problem (EVRP/CGVRP): a fleet leaves one depot, serves every customer
//! exactly once under a cargo capacity, and recharges at stations (or the
//! depot) to keep the battery from running dry. The objective is total
//! Euclidean distance.
//!
//! The pipeline is:
//! - [`construction`]: density-based clustering, per-cluster savings tours and
//!   [`repair::relaxed_zga`] to obtain a feasible start;
//! - [`local_search::rvnd`]: randomized variable neighborhood descent over
//!   2-opt, the 2-string family and the station reallocation operators;
//! - [`perturbation::double_bridge`]: segment shuffling with repair;
//! - [`vns::solve`]: the restart loop under an evaluation or wall-clock budget.
//!
//! [`oracle`] holds a brute-force exact solver for tiny instances and a
//! fixture generator; [`bench`] aggregates multi-seed runs.

pub mod bench;
pub mod budget;
pub mod construction;
pub mod instance;
pub mod local_search;
pub mod oracle;
pub mod perturbation;
pub mod repair;
pub mod solution;
pub mod tour;
pub mod validate;
pub mod vns;

pub use budget::{BudgetExhausted, EvalBudget};
pub use instance::{Instance, InstanceError, NodeId, NodeKind, NodeSpec};
pub use tour::{subtours, tour_weight, Tour};
pub use validate::{validate, ValidationReport, Violation, ViolationKind};

/// Moves must improve the objective by more than this to be accepted.
pub const IMPROVEMENT_EPS: f64 = 1e-9;
