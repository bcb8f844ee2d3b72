//! Execution strategies and their definitional verification.
//!
//! Two representations with a one-way conversion:
//!
//! * [`TreeStrategy`] — a decision tree of timed actions. Each internal node
//!   executes a task set at a grid index and branches on the outcomes of the
//!   observations made by that set. Trees are the synthesis currency: by
//!   construction, decisions can only depend on what was observed earlier,
//!   so every well-formed tree induces a dynamic strategy.
//! * [`TableStrategy`] — a dense scenario-to-schedule map. Tables are the
//!   verification currency: *viable* and *dynamic* are checked directly
//!   against their definitions.
//!
//! Both carry a `resolution` (grid indices per unit `w`), so times stay
//! integers regardless of how fine the grid is.
//!
//! The *dynamic* check implemented here: whenever two scenarios have equal
//! observation histories at a time `t` at which one of them executes task
//! `X`, the other must execute `X` at `t` as well. The history at `t`
//! contains exactly the propositions observed strictly before `t`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::label::PropId;
use crate::network::{Cstn, TaskId};
use crate::scenario::{PartialScenario, Scenario};
use crate::schedule::{GridIx, Schedule};

/// A decision-tree strategy node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNode {
    /// Every task relevant to the branch's scenarios has been executed.
    Terminal,
    /// Execute `tasks` at grid index `at`, then branch on the observations
    /// `tasks` makes. `children` has one entry per outcome of the observed
    /// propositions (taken in ascending proposition order, first proposition
    /// as the least-significant bit); a node observing nothing has exactly
    /// one child.
    Act {
        at: GridIx,
        tasks: Vec<TaskId>,
        children: Vec<TreeNode>,
    },
}

/// A strategy as a decision tree over grid times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStrategy {
    /// Grid indices per unit `w`; the grid step is `w / resolution`.
    pub resolution: i64,
    pub root: TreeNode,
}

/// A strategy as a dense scenario table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableStrategy {
    resolution: i64,
    num_props: usize,
    rows: Vec<Schedule>,
}

/// Structural or domain failures of strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategyError {
    /// Action times must strictly increase along every path and start at 1.
    NonIncreasingTime { at: GridIx },
    EmptyAction { at: GridIx },
    /// A task re-executed along one path.
    RepeatedTask { task: TaskId },
    UnknownTask { task: TaskId },
    /// A node's child count differs from 2^(observed propositions).
    WrongChildCount { at: GridIx, expected: usize, got: usize },
    /// The table must have one row per scenario.
    WrongRowCount { expected: usize, got: usize },
    /// A relevant task is missing from a row (for trees: a leaf was reached
    /// with this task still unexecuted although its label holds on the
    /// branch).
    IncompleteRow { scenario: Scenario, task: TaskId },
    /// A row schedules a task that is not relevant in its scenario.
    SpuriousTask { scenario: Scenario, task: TaskId },
}

impl fmt::Display for StrategyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyError::NonIncreasingTime { at } => {
                write!(f, "action time {} does not increase along its path", at)
            }
            StrategyError::EmptyAction { at } => write!(f, "empty action at {}", at),
            StrategyError::RepeatedTask { task } => write!(f, "task {} executed twice", task),
            StrategyError::UnknownTask { task } => write!(f, "unknown task {}", task),
            StrategyError::WrongChildCount { at, expected, got } => write!(
                f,
                "action at {} needs {} observation branches, found {}",
                at, expected, got
            ),
            StrategyError::WrongRowCount { expected, got } => {
                write!(f, "expected {} rows, found {}", expected, got)
            }
            StrategyError::IncompleteRow { scenario, task } => {
                write!(f, "scenario {} leaves relevant task {} unexecuted", scenario, task)
            }
            StrategyError::SpuriousTask { scenario, task } => {
                write!(f, "scenario {} schedules irrelevant task {}", scenario, task)
            }
        }
    }
}

impl TreeStrategy {
    /// Checks structural validity against a network: strictly increasing
    /// times from 1, nonempty disjoint task sets along each path, and full
    /// observation branching.
    pub fn validate(&self, cstn: &Cstn) -> Result<(), StrategyError> {
        let mut seen = alloc::vec![false; cstn.num_tasks()];
        validate_node(&self.root, cstn, 0, &mut seen)
    }
}

fn validate_node(
    node: &TreeNode,
    cstn: &Cstn,
    after: GridIx,
    seen: &mut Vec<bool>,
) -> Result<(), StrategyError> {
    let TreeNode::Act { at, tasks, children } = node else {
        return Ok(());
    };
    if *at <= after {
        return Err(StrategyError::NonIncreasingTime { at: *at });
    }
    if tasks.is_empty() {
        return Err(StrategyError::EmptyAction { at: *at });
    }
    for &t in tasks {
        if t.index() >= cstn.num_tasks() {
            return Err(StrategyError::UnknownTask { task: t });
        }
        if seen[t.index()] {
            return Err(StrategyError::RepeatedTask { task: t });
        }
        seen[t.index()] = true;
    }
    let expected = 1usize << observed_props(cstn, tasks).len();
    if children.len() != expected {
        return Err(StrategyError::WrongChildCount {
            at: *at,
            expected,
            got: children.len(),
        });
    }
    for child in children {
        validate_node(child, cstn, *at, seen)?;
    }
    for &t in tasks {
        seen[t.index()] = false;
    }
    Ok(())
}

/// The propositions observed by executing `tasks`, ascending.
pub fn observed_props(cstn: &Cstn, tasks: &[TaskId]) -> Vec<PropId> {
    let mut props: Vec<PropId> = tasks
        .iter()
        .filter_map(|&t| cstn.observed_prop(t))
        .collect();
    props.sort_unstable();
    props
}

/// The child index selected by scenario `s` at a node observing `props`.
pub fn outcome_index(props: &[PropId], s: &Scenario) -> usize {
    props
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &p)| acc | (usize::from(s.value(p)) << j))
}

impl TableStrategy {
    /// Builds a table, checking one row per scenario and that each row's
    /// domain is exactly the tasks relevant in its scenario.
    pub fn new(
        cstn: &Cstn,
        resolution: i64,
        rows: Vec<Schedule>,
    ) -> Result<TableStrategy, StrategyError> {
        let expected = 1usize << cstn.num_props();
        if rows.len() != expected {
            return Err(StrategyError::WrongRowCount {
                expected,
                got: rows.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            let s = Scenario::from_bits(cstn.num_props(), i as u64);
            for (task, _) in row.iter() {
                if !cstn.task_label(task).holds_in(&s) {
                    return Err(StrategyError::SpuriousTask { scenario: s, task });
                }
            }
            for task in cstn.tasks() {
                if cstn.task_label(task).holds_in(&s) && !row.contains(task) {
                    return Err(StrategyError::IncompleteRow { scenario: s, task });
                }
            }
        }
        Ok(TableStrategy {
            resolution,
            num_props: cstn.num_props(),
            rows,
        })
    }

    pub fn resolution(&self) -> i64 {
        self.resolution
    }

    pub fn num_props(&self) -> usize {
        self.num_props
    }

    pub fn row(&self, s: &Scenario) -> &Schedule {
        &self.rows[s.index()]
    }

    pub fn rows(&self) -> &[Schedule] {
        &self.rows
    }

    /// A copy with one time edited, bypassing validation. Intended for
    /// mutation tests; the result may no longer be a valid strategy.
    pub fn with_time(&self, s: &Scenario, task: TaskId, at: GridIx) -> TableStrategy {
        let mut rows = self.rows.clone();
        rows[s.index()].set(task, at);
        TableStrategy {
            resolution: self.resolution,
            num_props: self.num_props,
            rows,
        }
    }
}

/// Converts a decision tree to the table it induces.
///
/// Walks the tree once per scenario, branching by that scenario's values at
/// every observation, and collects the `(task, time)` pairs along the path.
/// Fails if the tree is structurally invalid or some leaf leaves a relevant
/// task unexecuted (or executes an irrelevant one).
pub fn tree_to_table(cstn: &Cstn, tree: &TreeStrategy) -> Result<TableStrategy, StrategyError> {
    tree.validate(cstn)?;
    let mut rows = Vec::with_capacity(1 << cstn.num_props());
    for s in cstn.scenarios() {
        let mut row = Schedule::new();
        let mut node = &tree.root;
        while let TreeNode::Act { at, tasks, children } = node {
            for &t in tasks {
                row.set(t, *at);
            }
            let props = observed_props(cstn, tasks);
            node = &children[outcome_index(&props, &s)];
        }
        rows.push(row);
    }
    TableStrategy::new(cstn, tree.resolution, rows)
}

/// Witness that a strategy is not viable: in `scenario`, the row violates
/// the constraint at `constraint_index` (into [`Cstn::constraints`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViabilityWitness {
    pub scenario: Scenario,
    pub constraint_index: usize,
}

/// Checks viability: every scenario's row satisfies every constraint whose
/// label holds in that scenario, with bounds scaled by the table's
/// resolution. Scenarios and constraints are scanned in canonical order, so
/// the returned witness is deterministic.
pub fn verify_viable(cstn: &Cstn, strategy: &TableStrategy) -> Result<(), ViabilityWitness> {
    for s in cstn.scenarios() {
        let row = strategy.row(&s);
        for (i, c) in cstn.constraints().iter().enumerate() {
            if !c.label.holds_in(&s) {
                continue;
            }
            // WD1 plus the row-domain invariant guarantee both times exist.
            let from = row.time(c.from).expect("constraint endpoint scheduled");
            let to = row.time(c.to).expect("constraint endpoint scheduled");
            if to - from > c.bound_k * strategy.resolution() {
                return Err(ViabilityWitness {
                    scenario: s,
                    constraint_index: i,
                });
            }
        }
    }
    Ok(())
}

/// The observation history of scenario `s` strictly before grid time `t`:
/// every proposition whose observer runs before `t`, with its value in `s`.
pub fn history(cstn: &Cstn, strategy: &TableStrategy, t: GridIx, s: &Scenario) -> PartialScenario {
    let row = strategy.row(s);
    let mut h = PartialScenario::new();
    for p in cstn.props() {
        if let Some(k) = row.time(cstn.observer(p)) {
            if k < t {
                h.assign(p, s.value(p));
            }
        }
    }
    h
}

/// Witness that a strategy is not dynamic: `scenario` executes `task` at
/// `at`, `other` has the same history at `at` but does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicWitness {
    pub scenario: Scenario,
    pub other: Scenario,
    pub task: TaskId,
    pub at: GridIx,
}

/// Checks the dynamic property.
///
/// For every task `X` and every time `t` some scenario executes `X` at,
/// scenarios are partitioned by their history at `t`; within one part,
/// either all rows execute `X` at `t` or none may. This is the definition
/// quantified over scenario pairs, grouped so each `(X, t)` costs one pass.
/// The witness returned is minimal in `(task, time, scenario, other)` order.
pub fn verify_dynamic(cstn: &Cstn, strategy: &TableStrategy) -> Result<(), DynamicWitness> {
    let scenarios: Vec<Scenario> = cstn.scenarios().collect();
    for task in cstn.tasks() {
        let mut times: Vec<GridIx> = scenarios
            .iter()
            .filter_map(|s| strategy.row(s).time(task))
            .collect();
        times.sort_unstable();
        times.dedup();
        for &t in &times {
            let mut groups: BTreeMap<Vec<(PropId, bool)>, Vec<&Scenario>> = BTreeMap::new();
            for s in &scenarios {
                let key: Vec<(PropId, bool)> = history(cstn, strategy, t, s).iter().collect();
                groups.entry(key).or_default().push(s);
            }
            let mut witness: Option<DynamicWitness> = None;
            for members in groups.values() {
                let Some(exec) = members
                    .iter()
                    .find(|s| strategy.row(s).time(task) == Some(t))
                else {
                    continue;
                };
                if let Some(other) = members
                    .iter()
                    .find(|s| strategy.row(s).time(task) != Some(t))
                {
                    let candidate = DynamicWitness {
                        scenario: (*exec).clone(),
                        other: (*other).clone(),
                        task,
                        at: t,
                    };
                    let better = witness.as_ref().is_none_or(|w| {
                        (&candidate.scenario, &candidate.other) < (&w.scenario, &w.other)
                    });
                    if better {
                        witness = Some(candidate);
                    }
                }
            }
            if let Some(w) = witness {
                return Err(w);
            }
        }
    }
    Ok(())
}

/// How a single-flip check fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlipViolation {
    /// Histories diverge at `t` although `t` is not past the observation.
    HistoryMismatch { t: GridIx },
    /// One scenario has executed `task` by `t`, the other has not.
    ExecutedByMismatch { t: GridIx, task: TaskId },
    /// One scenario executes `task` exactly at `t`, the other does not.
    ExecutedAtMismatch { t: GridIx, task: TaskId },
    /// Flipping the unobserved proposition moved its observation time.
    ObservationMoved {
        original: Option<GridIx>,
        flipped: Option<GridIx>,
    },
}

/// Checks the single-flip property of dynamic strategies: with
/// `s' = s[v/p]`, for every grid `t` up to the time `s` observes `p`, the
/// two rows have equal histories, agree on which tasks ran by `t` and at
/// `t`, and observe `p` at the same time. For a strategy that passed
/// [`verify_dynamic`] this always holds; a violation certifies the strategy
/// was not dynamic.
pub fn check_single_flip(
    cstn: &Cstn,
    strategy: &TableStrategy,
    s: &Scenario,
    p: PropId,
    v: bool,
) -> Result<(), FlipViolation> {
    let flipped = s.with(p, v);
    let row = strategy.row(s);
    let row_f = strategy.row(&flipped);
    let t_obs = row.time(cstn.observer(p));
    if t_obs != row_f.time(cstn.observer(p)) {
        return Err(FlipViolation::ObservationMoved {
            original: t_obs,
            flipped: row_f.time(cstn.observer(p)),
        });
    }
    // An unobserved proposition bounds nothing; check the whole horizon.
    let horizon = t_obs.unwrap_or_else(|| {
        row.max_time()
            .into_iter()
            .chain(row_f.max_time())
            .max()
            .unwrap_or(0)
            + 1
    });
    for t in 1..=horizon {
        if history(cstn, strategy, t, s) != history(cstn, strategy, t, &flipped) {
            return Err(FlipViolation::HistoryMismatch { t });
        }
        for task in cstn.tasks() {
            let by = row.time(task).is_some_and(|k| k <= t);
            let by_f = row_f.time(task).is_some_and(|k| k <= t);
            if by != by_f {
                return Err(FlipViolation::ExecutedByMismatch { t, task });
            }
            let at = row.time(task) == Some(t);
            let at_f = row_f.time(task) == Some(t);
            if at != at_f {
                return Err(FlipViolation::ExecutedAtMismatch { t, task });
            }
        }
    }
    Ok(())
}
