//! Simple temporal networks: difference constraints and their consistency.
//!
//! An STN is a task set plus constraints `to - from <= bound`. Throughout the
//! crate the constraint graph uses the convention: constraint `Y - X <= d`
//! becomes the edge `X -> Y` with weight `d`. The STN is consistent exactly
//! when this graph has no negative cycle, and shortest-path distances from a
//! virtual source (zero-weight edges to every task) give a satisfying
//! schedule.

use alloc::vec::Vec;
use core::fmt;

use crate::network::TaskId;
use crate::schedule::{GridIx, Schedule};

/// A single difference constraint `to - from <= bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StnConstraint {
    pub from: TaskId,
    pub to: TaskId,
    pub bound: i64,
}

impl StnConstraint {
    pub fn new(from: TaskId, to: TaskId, bound: i64) -> Self {
        StnConstraint { from, to, bound }
    }
}

impl fmt::Display for StnConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {} <= {}", self.to, self.from, self.bound)
    }
}

/// A task set with difference constraints between its members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stn {
    tasks: Vec<TaskId>,
    constraints: Vec<StnConstraint>,
}

impl Stn {
    /// Builds an STN. Constraint endpoints must be members of `tasks`; this
    /// is a programming-error guard, not a recoverable condition.
    pub fn new(mut tasks: Vec<TaskId>, constraints: Vec<StnConstraint>) -> Self {
        tasks.sort_unstable();
        tasks.dedup();
        debug_assert!(constraints
            .iter()
            .all(|c| tasks.binary_search(&c.from).is_ok() && tasks.binary_search(&c.to).is_ok()));
        Stn { tasks, constraints }
    }

    pub fn tasks(&self) -> &[TaskId] {
        &self.tasks
    }

    pub fn constraints(&self) -> &[StnConstraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }
}

/// True when the constraint graph has no negative cycle.
pub fn stn_consistent(stn: &Stn) -> bool {
    stn_solve(stn).is_some()
}

/// Bellman-Ford from a virtual source connected to every task with weight 0.
///
/// Returns a satisfying schedule (shifted so the earliest task sits at 0), or
/// `None` when a negative cycle makes the STN inconsistent. With all source
/// distances starting at 0, relaxing `|tasks|` rounds converges unless a
/// cycle keeps improving, which the final round detects.
pub fn stn_solve(stn: &Stn) -> Option<Schedule> {
    let n = stn.tasks.len();
    if n == 0 {
        return Some(Schedule::new());
    }
    let index_of = |t: TaskId| stn.tasks.binary_search(&t).expect("endpoint in task set");
    let mut dist: Vec<i64> = alloc::vec![0; n];
    for round in 0..n {
        let mut changed = false;
        for c in &stn.constraints {
            let u = index_of(c.from);
            let v = index_of(c.to);
            if dist[u] + c.bound < dist[v] {
                dist[v] = dist[u] + c.bound;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        if round == n - 1 {
            // An improvement in the n-th round means a negative cycle.
            return None;
        }
    }
    let shift = -dist.iter().copied().min().unwrap_or(0);
    Some(Schedule::from_iter(
        stn.tasks
            .iter()
            .zip(&dist)
            .map(|(&t, &d)| (t, (d + shift) as GridIx)),
    ))
}
