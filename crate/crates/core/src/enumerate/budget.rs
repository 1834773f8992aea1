use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use super::EnumConfig;
use crate::error::{Error, Result};

/// Nodes a worker visits between updates of the shared counter.
const BATCH: u64 = 1024;

/// Shared node and wall-clock allowance for one enumeration call.
pub(crate) struct Budget {
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
    nodes: AtomicU64,
    tripped: AtomicBool,
}

impl Budget {
    pub(crate) fn new(cfg: &EnumConfig) -> Self {
        Budget {
            max_nodes: cfg.max_nodes,
            deadline: cfg.max_time.map(|d| Instant::now() + d),
            nodes: AtomicU64::new(0),
            tripped: AtomicBool::new(false),
        }
    }

    fn unlimited(&self) -> bool {
        self.max_nodes.is_none() && self.deadline.is_none()
    }

    fn exceeded(&self) -> Error {
        self.tripped.store(true, Ordering::Relaxed);
        Error::BudgetExceeded {
            nodes: self.nodes.load(Ordering::Relaxed),
        }
    }

    fn charge(&self, n: u64) -> Result<()> {
        let total = self.nodes.fetch_add(n, Ordering::Relaxed) + n;
        if self.tripped.load(Ordering::Relaxed) {
            return Err(self.exceeded());
        }
        if self.max_nodes.is_some_and(|max| total > max) {
            return Err(self.exceeded());
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(self.exceeded());
        }
        Ok(())
    }
}

/// Per-worker view of a [`Budget`] that batches counter updates.
pub(crate) struct Meter<'a> {
    budget: &'a Budget,
    pending: u64,
    limit: u64,
}

impl<'a> Meter<'a> {
    pub(crate) fn new(budget: &'a Budget) -> Self {
        let limit = match budget.max_nodes {
            Some(max) if max < BATCH => 1,
            _ => BATCH,
        };
        Meter {
            budget,
            pending: 0,
            limit,
        }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<()> {
        if self.budget.unlimited() {
            return Ok(());
        }
        self.pending += 1;
        if self.pending >= self.limit {
            let n = std::mem::take(&mut self.pending);
            self.budget.charge(n)?;
        }
        Ok(())
    }

    /// Flushes pending nodes; also catches a deadline that passed before
    /// the first full batch.
    pub(crate) fn finish(mut self) -> Result<()> {
        if self.budget.unlimited() {
            return Ok(());
        }
        let n = std::mem::take(&mut self.pending);
        self.budget.charge(n)
    }
}
