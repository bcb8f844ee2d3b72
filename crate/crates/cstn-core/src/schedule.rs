//! Schedules over the time grid.
//!
//! A schedule assigns grid indices to tasks; the real execution time of index
//! `k` is `k * mu` for whatever grid step `mu` the surrounding context fixes.
//! Schedules may be partial (the solver grows one task set at a time) or
//! total over a projection's tasks.

use alloc::collections::BTreeMap;
use core::fmt;

use crate::network::TaskId;
use crate::stn::{Stn, StnConstraint};

/// A time-grid index. Index 0 is reserved for the pre-execution sentinel;
/// real executions use indices starting at 1.
pub type GridIx = i64;

/// A (possibly partial) assignment of grid indices to tasks.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    times: BTreeMap<TaskId, GridIx>,
}

/// Why a schedule fails against an STN.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityError {
    /// A constraint endpoint has no scheduled time.
    Unscheduled { task: TaskId },
    /// A difference constraint does not hold.
    Violated { constraint: StnConstraint },
}

impl fmt::Display for FeasibilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeasibilityError::Unscheduled { task } => {
                write!(f, "constraint endpoint {} has no scheduled time", task)
            }
            FeasibilityError::Violated { constraint } => {
                write!(f, "violated: {}", constraint)
            }
        }
    }
}

impl Schedule {
    pub fn new() -> Self {
        Schedule::default()
    }

    pub fn from_iter(pairs: impl IntoIterator<Item = (TaskId, GridIx)>) -> Self {
        Schedule {
            times: pairs.into_iter().collect(),
        }
    }

    pub fn time(&self, task: TaskId) -> Option<GridIx> {
        self.times.get(&task).copied()
    }

    pub fn set(&mut self, task: TaskId, at: GridIx) {
        self.times.insert(task, at);
    }

    pub fn contains(&self, task: TaskId) -> bool {
        self.times.contains_key(&task)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Scheduled `(task, index)` pairs in task order.
    pub fn iter(&self) -> impl Iterator<Item = (TaskId, GridIx)> + '_ {
        self.times.iter().map(|(&t, &k)| (t, k))
    }

    pub fn max_time(&self) -> Option<GridIx> {
        self.times.values().copied().max()
    }
}

/// Checks a schedule against an STN's difference constraints.
///
/// Ok when `time(to) - time(from) <= bound` for every constraint; otherwise
/// reports the first violated constraint (in constraint-list order), or an
/// unscheduled endpoint. The schedule indices and the STN bounds must be
/// expressed on the same grid.
pub fn schedule_satisfies(schedule: &Schedule, stn: &Stn) -> Result<(), FeasibilityError> {
    for c in stn.constraints() {
        let from = schedule
            .time(c.from)
            .ok_or(FeasibilityError::Unscheduled { task: c.from })?;
        let to = schedule
            .time(c.to)
            .ok_or(FeasibilityError::Unscheduled { task: c.to })?;
        if to - from > c.bound {
            return Err(FeasibilityError::Violated { constraint: *c });
        }
    }
    Ok(())
}
