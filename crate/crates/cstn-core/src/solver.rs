//! Dynamic-controllability decision procedure on the discrete grid.
//!
//! Times are grid indices in `{1, …, M}` where the grid step is
//! `μ = w / K`, `K = 2^|𝒫| · |𝒯|` and `M = 2·K²·W` ([`discretize`]).
//! Restricting attention to this grid is lossless: a network is
//! dynamically controllable exactly when it admits a strategy whose
//! decision times all lie on the grid.
//!
//! The search ([`DcSolver`]) runs over *configurations* — partial
//! schedules plus the observations made so far — and asks: is there a next
//! time and task set such that, however the newly observed propositions
//! turn out, the resulting configuration still leads to success? The
//! recursion needs only a stack of configurations (polynomial space), and
//! its depth is at most `|𝒯|` since every step schedules at least one new
//! task. Succeeding choices assemble directly into a [`TreeStrategy`].
//!
//! Two sound prunings (on by default, [`SolveOptions::prune`]) cut the
//! search without changing any verdict: a configuration dies as soon as a
//! scheduled constraint pair is violated while the constraint's label is
//! still consistent with the observation history, or as soon as a pending
//! upper bound (source scheduled, target not) can no longer be met. Both
//! rest on the same argument: the environment can keep answering
//! observations in agreement with the constraint's label, the label then
//! implies both endpoint labels (label coherence), so some reachable
//! terminal scenario exposes the violation.

use alloc::vec::Vec;
use core::fmt;

use crate::label::Truth;
use crate::network::{Cstn, TaskId};
use crate::scenario::PartialScenario;
use crate::schedule::{GridIx, Schedule};
use crate::strategy::{observed_props, TreeNode, TreeStrategy};
use crate::Rational;

/// The grid constants of a network: unit `w`, bound magnitude `W`, fan-out
/// `K`, step `μ` and horizon `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscretizationParams {
    /// The discreteness unit `w` (every bound is an integer multiple).
    pub unit: Rational,
    /// `W`: the largest bound magnitude in units, floored at 1 so the
    /// horizon stays positive on constraint-free networks.
    pub max_bound: i64,
    /// `K = 2^|𝒫| · |𝒯|` grid indices per unit (floored at 1).
    pub steps_per_unit: i64,
    /// The grid step `μ = w / K`.
    pub step: Rational,
    /// The horizon `M = 2·K²·W`; decision times range over `{1, …, M}`.
    pub horizon: GridIx,
}

/// Parameters from the raw counts. Panics if `M` overflows `i64`; the
/// procedure is a desk-scale tool and such instances are far beyond any
/// feasible search anyway.
pub fn params_from_counts(
    num_props: usize,
    num_tasks: usize,
    unit: Rational,
    max_bound: i64,
) -> DiscretizationParams {
    assert!(num_props < 63, "proposition count out of supported range");
    let k = (1i64 << num_props)
        .checked_mul(num_tasks as i64)
        .expect("grid fan-out exceeds i64")
        .max(1);
    let horizon = k
        .checked_mul(k)
        .and_then(|kk| kk.checked_mul(2))
        .and_then(|kk| kk.checked_mul(max_bound))
        .expect("grid horizon exceeds i64");
    DiscretizationParams {
        unit,
        max_bound,
        steps_per_unit: k,
        step: unit / Rational::from_integer(k),
        horizon,
    }
}

/// The grid constants of a network.
pub fn discretize(cstn: &Cstn) -> DiscretizationParams {
    params_from_counts(
        cstn.num_props(),
        cstn.num_tasks(),
        cstn.unit(),
        cstn.max_abs_bound(),
    )
}

/// A search state: the current grid time (0 before any action), the
/// schedule built so far, and the values observed so far. The observation
/// history always holds exactly the propositions whose observer has been
/// scheduled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    now: GridIx,
    schedule: Schedule,
    observed: PartialScenario,
}

impl Configuration {
    /// The state before any action: time 0, nothing scheduled or observed.
    pub fn initial() -> Configuration {
        Configuration {
            now: 0,
            schedule: Schedule::new(),
            observed: PartialScenario::new(),
        }
    }

    pub fn now(&self) -> GridIx {
        self.now
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn observed(&self) -> &PartialScenario {
        &self.observed
    }

    /// The state after executing `tasks` at `at` and seeing `outcome`:
    /// bit `j` of `outcome` is the value of the `j`-th smallest
    /// proposition observed by `tasks`.
    pub fn advance(&self, cstn: &Cstn, at: GridIx, tasks: &[TaskId], outcome: u64) -> Configuration {
        debug_assert!(at > self.now, "actions move strictly forward");
        let mut next = self.clone();
        next.now = at;
        for &t in tasks {
            debug_assert!(!self.schedule.contains(t), "tasks execute once");
            next.schedule.set(t, at);
        }
        for (j, p) in observed_props(cstn, tasks).into_iter().enumerate() {
            next.observed.assign(p, outcome >> j & 1 == 1);
        }
        next
    }
}

/// Classification of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalStatus {
    /// In every scenario completing the history, the relevant tasks are
    /// exactly the scheduled ones and the schedule is feasible.
    TerminalDc,
    /// Some completion still has relevant tasks unscheduled (or a
    /// scheduled task it does not need).
    NotTerminal,
    /// Domains match everywhere, but some completion's constraints are
    /// violated — a dead end.
    TerminalNotDc,
}

/// Classifies a configuration by exhausting all completions of its
/// observation history. Any domain mismatch makes it [`NotTerminal`]
/// regardless of feasibility elsewhere; bounds are compared scaled by
/// `steps_per_unit`.
///
/// [`NotTerminal`]: TerminalStatus::NotTerminal
pub fn is_terminal_and_dc(
    cstn: &Cstn,
    config: &Configuration,
    steps_per_unit: i64,
) -> TerminalStatus {
    let mut feasible = true;
    for s in config.observed.completions(cstn.num_props()) {
        for task in cstn.tasks() {
            if cstn.task_label(task).holds_in(&s) != config.schedule.contains(task) {
                return TerminalStatus::NotTerminal;
            }
        }
        if feasible {
            for c in cstn.constraints() {
                if !c.label.holds_in(&s) {
                    continue;
                }
                // Label coherence puts both endpoints in the domain here.
                let from = config.schedule.time(c.from).expect("endpoint scheduled");
                let to = config.schedule.time(c.to).expect("endpoint scheduled");
                if to - from > c.bound_k * steps_per_unit {
                    feasible = false;
                    break;
                }
            }
        }
    }
    if feasible {
        TerminalStatus::TerminalDc
    } else {
        TerminalStatus::TerminalNotDc
    }
}

/// Candidate decision times for the search.
#[derive(Debug, Clone, Copy)]
pub enum GridSpec<'a> {
    /// Every index in `{1, …, horizon}` — the complete, verdict-exact grid.
    Full { horizon: GridIx },
    /// An explicit ascending subset. A `true` verdict is still a sound
    /// controllability certificate; a `false` verdict only says no
    /// strategy lives on these points.
    Points(&'a [GridIx]),
}

impl GridSpec<'_> {
    fn after(&self, now: GridIx) -> GridPoints<'_> {
        match *self {
            GridSpec::Full { horizon } => GridPoints::Range(now + 1..=horizon),
            GridSpec::Points(points) => {
                let start = points.partition_point(|&p| p <= now);
                GridPoints::Slice(points[start..].iter())
            }
        }
    }
}

enum GridPoints<'a> {
    Range(core::ops::RangeInclusive<GridIx>),
    Slice(core::slice::Iter<'a, GridIx>),
}

impl Iterator for GridPoints<'_> {
    type Item = GridIx;

    fn next(&mut self) -> Option<GridIx> {
        match self {
            GridPoints::Range(r) => r.next(),
            GridPoints::Slice(it) => it.next().copied(),
        }
    }
}

/// Rejected grid list for [`dc_bounded`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridError {
    /// Entry at `index` is not strictly greater than its predecessor.
    NotIncreasing { index: usize },
    /// Entry at `index` is below 1.
    OutOfRange { index: usize },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::NotIncreasing { index } => {
                write!(f, "grid point {} does not increase", index)
            }
            GridError::OutOfRange { index } => write!(f, "grid point {} is below 1", index),
        }
    }
}

/// Search switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Enable the sound prunings. Off, the recursion is the literal
    /// decision procedure; verdicts are identical either way.
    pub prune: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { prune: true }
    }
}

/// Search counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Configurations examined.
    pub nodes: u64,
    /// Deepest recursion seen; never exceeds the task count.
    pub max_depth: usize,
}

/// The decision-procedure engine. One instance per solve; holds the
/// network, the bound scale, and the running counters.
pub struct DcSolver<'a> {
    cstn: &'a Cstn,
    steps_per_unit: i64,
    options: SolveOptions,
    stats: SearchStats,
}

impl<'a> DcSolver<'a> {
    pub fn new(cstn: &'a Cstn, steps_per_unit: i64, options: SolveOptions) -> DcSolver<'a> {
        assert!(steps_per_unit >= 1, "grid must have at least one step per unit");
        assert!(
            cstn.num_tasks() < usize::BITS as usize - 1,
            "task count out of supported range"
        );
        DcSolver {
            cstn,
            steps_per_unit,
            options,
            stats: SearchStats::default(),
        }
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    /// Runs the search from the initial configuration. `Some` holds the
    /// first successful strategy in canonical order (times ascending,
    /// then task subsets by ascending bitmask over the sorted unscheduled
    /// tasks); its resolution is this solver's `steps_per_unit`.
    pub fn search(&mut self, grid: GridSpec<'_>) -> Option<TreeStrategy> {
        let root = self.search_from(&Configuration::initial(), grid, 0)?;
        Some(TreeStrategy {
            resolution: self.steps_per_unit,
            root,
        })
    }

    fn search_from(
        &mut self,
        config: &Configuration,
        grid: GridSpec<'_>,
        depth: usize,
    ) -> Option<TreeNode> {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        match is_terminal_and_dc(self.cstn, config, self.steps_per_unit) {
            TerminalStatus::TerminalDc => return Some(TreeNode::Terminal),
            // Without pruning, a dead end is still abandoned — but only
            // after the recursion below fails to extend it, exactly as in
            // the plain procedure.
            TerminalStatus::TerminalNotDc if self.options.prune => return None,
            _ => {}
        }
        let deadline = if self.options.prune {
            match self.pending_deadline(config) {
                Some(d) if config.now() >= d => return None,
                d => d,
            }
        } else {
            None
        };
        let unscheduled: Vec<TaskId> = self
            .cstn
            .tasks()
            .filter(|&t| !config.schedule().contains(t))
            .collect();
        if unscheduled.is_empty() {
            return None;
        }
        for at in grid.after(config.now()) {
            // Past the earliest pending deadline every continuation dies;
            // later grid points only die slower.
            if deadline.is_some_and(|d| at > d) {
                break;
            }
            'subset: for mask in 1..1usize << unscheduled.len() {
                let tasks: Vec<TaskId> = unscheduled
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &t)| t)
                    .collect();
                let outcomes = 1u64 << observed_props(self.cstn, &tasks).len();
                let mut children = Vec::with_capacity(outcomes as usize);
                for outcome in 0..outcomes {
                    let next = config.advance(self.cstn, at, &tasks, outcome);
                    match self.search_from(&next, grid, depth + 1) {
                        Some(node) => children.push(node),
                        None => continue 'subset,
                    }
                }
                return Some(TreeNode::Act { at, tasks, children });
            }
        }
        None
    }

    /// Violation check plus earliest deadline among constraints whose
    /// label is still consistent with the observation history.
    ///
    /// Returns the smallest index by which some unscheduled target must
    /// run — `Some(d)` with `now ≥ d` meaning "already missed" — and
    /// `Some(now)` (an immediate fail) when a fully scheduled pair is
    /// violated outright. Sound because the environment can keep every
    /// observation consistent with such a label, and the label implies
    /// both endpoint labels, so the violation surfaces in some completion
    /// of every terminal extension.
    fn pending_deadline(&self, config: &Configuration) -> Option<GridIx> {
        let mut deadline: Option<GridIx> = None;
        for c in self.cstn.constraints() {
            if c.label.eval(config.observed()) == Truth::False {
                continue;
            }
            let limit = match (config.schedule().time(c.from), config.schedule().time(c.to)) {
                (Some(from), Some(to)) => {
                    if to - from > c.bound_k * self.steps_per_unit {
                        return Some(config.now());
                    }
                    continue;
                }
                // Upper bound on an unscheduled target.
                (Some(from), None) => from + c.bound_k * self.steps_per_unit,
                // A missing source only ever imposes lower bounds.
                _ => continue,
            };
            deadline = Some(deadline.map_or(limit, |d| d.min(limit)));
        }
        deadline
    }
}

/// Decides dynamic controllability on the full `{1, …, M}` grid.
pub fn dc(cstn: &Cstn) -> bool {
    dc_extract(cstn).is_some()
}

/// Like [`dc`], returning the found strategy (at resolution `K`).
pub fn dc_extract(cstn: &Cstn) -> Option<TreeStrategy> {
    let params = discretize(cstn);
    let mut solver = DcSolver::new(cstn, params.steps_per_unit, SolveOptions::default());
    solver.search(GridSpec::Full { horizon: params.horizon })
}

/// The same search with decision times restricted to `points` (ascending,
/// ≥ 1), at an explicit resolution. `Ok(true)` certifies controllability;
/// `Ok(false)` is conclusive only if `points` covers the full grid.
pub fn dc_bounded(
    cstn: &Cstn,
    steps_per_unit: i64,
    points: &[GridIx],
) -> Result<bool, GridError> {
    for (index, &p) in points.iter().enumerate() {
        if p < 1 {
            return Err(GridError::OutOfRange { index });
        }
        if index > 0 && p <= points[index - 1] {
            return Err(GridError::NotIncreasing { index });
        }
    }
    let mut solver = DcSolver::new(cstn, steps_per_unit, SolveOptions::default());
    Ok(solver.search(GridSpec::Points(points)).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;
    use crate::network::CstnBuilder;
    use crate::scenario::Scenario;
    use crate::strategy::{tree_to_table, verify_dynamic, verify_viable};
    use alloc::vec;

    #[test]
    fn discretization_frozen_values() {
        let p = params_from_counts(1, 2, Rational::from_integer(1), 1);
        assert_eq!(p.steps_per_unit, 4);
        assert_eq!(p.step, Rational::new(1, 4));
        assert_eq!(p.horizon, 32);

        let p = params_from_counts(4, 9, Rational::from_integer(1), 5);
        assert_eq!(p.steps_per_unit, 144);
        assert_eq!(p.step, Rational::new(1, 144));
        assert_eq!(p.horizon, 207_360);

        // Without propositions the fan-out degenerates to the task count.
        let p = params_from_counts(0, 7, Rational::from_integer(1), 3);
        assert_eq!(p.steps_per_unit, 7);
    }

    #[test]
    fn discretize_reads_network_counts() {
        let mut b = CstnBuilder::new();
        let p = b.prop("p");
        let o = b.task("O");
        b.observes(p, o);
        let a = b.task("A");
        b.constraint(a, o, 1, Label::pos(p));
        b.constraint(o, a, -2, Label::pos(p));
        let net = b.build().unwrap();
        let params = discretize(&net);
        assert_eq!(params.max_bound, 2);
        assert_eq!(params.steps_per_unit, 4);
        assert_eq!(params.horizon, 64);
    }

    fn single_task() -> Cstn {
        let mut b = CstnBuilder::new();
        b.task("A");
        b.build().unwrap()
    }

    fn contradictory_pair() -> Cstn {
        let mut b = CstnBuilder::new();
        let a = b.task("A");
        let c = b.task("B");
        b.constraint(c, a, -1, Label::empty());
        b.constraint(a, c, -1, Label::empty());
        b.build().unwrap()
    }

    /// Observer O reveals p; A must come within 1 unit when p, but no
    /// earlier than 2 units when ¬p — satisfiable only by reacting.
    fn reactive() -> Cstn {
        let mut b = CstnBuilder::new();
        let p = b.prop("p");
        let o = b.task("O");
        b.observes(p, o);
        let a = b.task("A");
        b.constraint(a, o, 1, Label::pos(p));
        b.constraint(o, a, -2, Label::neg(p));
        b.build().unwrap()
    }

    /// As above but the two bounds share the label p: that scenario's
    /// projection is inconsistent, so no strategy exists.
    fn doomed() -> Cstn {
        let mut b = CstnBuilder::new();
        let p = b.prop("p");
        let o = b.task("O");
        b.observes(p, o);
        let a = b.task("A");
        b.constraint(a, o, 1, Label::pos(p));
        b.constraint(o, a, -2, Label::pos(p));
        b.build().unwrap()
    }

    #[test]
    fn terminal_classification() {
        let net = single_task();
        let c0 = Configuration::initial();
        assert_eq!(is_terminal_and_dc(&net, &c0, 1), TerminalStatus::NotTerminal);
        let a = net.task_by_name("A").unwrap();
        let done = c0.advance(&net, 1, &[a], 0);
        assert_eq!(is_terminal_and_dc(&net, &done, 1), TerminalStatus::TerminalDc);

        let net = contradictory_pair();
        let tasks: Vec<TaskId> = net.tasks().collect();
        let all = Configuration::initial().advance(&net, 1, &tasks, 0);
        assert_eq!(is_terminal_and_dc(&net, &all, 1), TerminalStatus::TerminalNotDc);
    }

    #[test]
    fn trivial_verdicts() {
        let empty = CstnBuilder::new().build().unwrap();
        assert!(dc(&empty));
        assert!(dc(&single_task()));
        assert!(!dc(&contradictory_pair()));
        assert!(!dc(&doomed()));
    }

    #[test]
    fn reactive_instance_extracts_branching_strategy() {
        let net = reactive();
        let tree = dc_extract(&net).expect("controllable");
        assert_eq!(tree.resolution, 4);

        // First success in canonical order: O alone at 1, then A at the
        // earliest index satisfying each branch's bound (scaled by 4).
        let o = net.task_by_name("O").unwrap();
        let a = net.task_by_name("A").unwrap();
        match &tree.root {
            TreeNode::Act { at, tasks, children } => {
                assert_eq!((*at, tasks.as_slice()), (1, &[o][..]));
                let times: Vec<GridIx> = children
                    .iter()
                    .map(|c| match c {
                        TreeNode::Act { at, tasks, .. } => {
                            assert_eq!(tasks, &[a]);
                            *at
                        }
                        TreeNode::Terminal => panic!("A still unscheduled"),
                    })
                    .collect();
                // ¬p needs A ≥ O + 8; p allows A ≤ O + 4 and 2 is the
                // first grid index after 1.
                assert_eq!(times, vec![9, 2]);
            }
            TreeNode::Terminal => panic!("root must act"),
        }

        let table = tree_to_table(&net, &tree).unwrap();
        assert_eq!(verify_viable(&net, &table), Ok(()));
        assert_eq!(verify_dynamic(&net, &table), Ok(()));
    }

    #[test]
    fn depth_never_exceeds_task_count() {
        for net in [reactive(), doomed(), contradictory_pair()] {
            let params = discretize(&net);
            let mut solver = DcSolver::new(&net, params.steps_per_unit, SolveOptions::default());
            solver.search(GridSpec::Full { horizon: params.horizon });
            assert!(solver.stats().max_depth <= net.num_tasks());
            assert!(solver.stats().nodes > 0);
        }
    }

    #[test]
    fn pruning_preserves_verdicts() {
        for net in [single_task(), contradictory_pair(), reactive(), doomed()] {
            let params = discretize(&net);
            let grid = GridSpec::Full { horizon: params.horizon };
            let with = DcSolver::new(&net, params.steps_per_unit, SolveOptions { prune: true })
                .search(grid)
                .is_some();
            let without = DcSolver::new(&net, params.steps_per_unit, SolveOptions { prune: false })
                .search(grid)
                .is_some();
            assert_eq!(with, without);
        }
    }

    #[test]
    fn bounded_grid_certifies_but_cannot_refute() {
        let net = reactive();
        // The extracted strategy lives on {1, 2, 9}.
        assert_eq!(dc_bounded(&net, 4, &[1, 2, 9]), Ok(true));
        // Without index 9 the ¬p branch has no feasible slot.
        assert_eq!(dc_bounded(&net, 4, &[1, 2, 5]), Ok(false));
        // Empty grid: no actions available at all.
        assert_eq!(dc_bounded(&net, 4, &[]), Ok(false));
        // Full grid agrees with the unrestricted verdict.
        let params = discretize(&net);
        let full: Vec<GridIx> = (1..=params.horizon).collect();
        assert_eq!(dc_bounded(&net, params.steps_per_unit, &full), Ok(true));
    }

    #[test]
    fn bounded_grid_validation() {
        let net = single_task();
        assert_eq!(
            dc_bounded(&net, 1, &[1, 1]),
            Err(GridError::NotIncreasing { index: 1 })
        );
        assert_eq!(
            dc_bounded(&net, 1, &[0, 2]),
            Err(GridError::OutOfRange { index: 0 })
        );
    }

    #[test]
    fn advance_records_observations_in_prop_order() {
        let mut b = CstnBuilder::new();
        let p = b.prop("p");
        let q = b.prop("q");
        let op = b.task("P");
        let oq = b.task("Q");
        b.observes(p, op);
        b.observes(q, oq);
        let net = b.build().unwrap();
        let c = Configuration::initial().advance(&net, 3, &[oq, op], 0b10);
        assert_eq!(c.observed().value(p), Some(false));
        assert_eq!(c.observed().value(q), Some(true));
        assert_eq!(c.schedule().time(op), Some(3));
        assert_eq!(c.schedule().time(oq), Some(3));

        // The same outcome completes to scenarios agreeing on p and q.
        let completions: Vec<Scenario> = c.observed().completions(2).collect();
        assert_eq!(completions, vec![Scenario::from_bits(2, 0b10)]);
    }
}
