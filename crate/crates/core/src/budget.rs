//! Fitness-evaluation accounting.
//!
//! One full tour evaluation costs one unit. Constant-time move deltas are
//! free by default; [`EvalBudget::with_delta_cost`] charges a fraction of a
//! unit per delta instead, for accounting schemes that bill partial
//! evaluations.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::instance::Instance;
use crate::tour::Tour;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("evaluation budget exhausted")]
pub struct BudgetExhausted;

#[derive(Debug, Clone)]
pub struct EvalBudget {
    used: u64,
    cap: u64,
    start: Instant,
    deadline: Option<Instant>,
    delta_cost: f64,
    delta_acc: f64,
}

impl EvalBudget {
    pub fn new(cap: u64) -> Self {
        EvalBudget {
            used: 0,
            cap,
            start: Instant::now(),
            deadline: None,
            delta_cost: 0.0,
            delta_acc: 0.0,
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.deadline = Some(self.start + limit);
        self
    }

    /// Fraction of an evaluation charged per constant-time delta.
    pub fn with_delta_cost(mut self, fraction: f64) -> Self {
        self.delta_cost = fraction.max(0.0);
        self
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn remaining(&self) -> u64 {
        self.cap.saturating_sub(self.used)
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub fn start_time(&self) -> Instant {
        self.start
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.deadline
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.cap || self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Reserves `n` evaluations; fails without charging once the cap or the
    /// deadline has been reached.
    pub fn charge(&mut self, n: u64) -> Result<(), BudgetExhausted> {
        if self.exhausted() {
            return Err(BudgetExhausted);
        }
        self.used = self.used.saturating_add(n);
        Ok(())
    }

    /// Counted full evaluation of a tour.
    pub fn evaluate(&mut self, inst: &Instance, tour: &Tour) -> Result<f64, BudgetExhausted> {
        self.charge(1)?;
        Ok(tour.weight(inst))
    }

    /// Bills `count` delta computations under the configured delta cost.
    pub fn charge_deltas(&mut self, count: u64) {
        if self.delta_cost == 0.0 || count == 0 {
            return;
        }
        self.delta_acc += self.delta_cost * count as f64;
        let whole = self.delta_acc.floor();
        self.delta_acc -= whole;
        self.used = self.used.saturating_add(whole as u64);
    }
}
