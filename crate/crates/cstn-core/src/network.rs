//! The CSTN data model: labeled tasks, labeled difference constraints,
//! observation tasks, and scenario projections.
//!
//! A network owns its name tables, so task and proposition ids are dense
//! indices assigned in declaration order. Construction goes through
//! [`CstnBuilder`], which enforces:
//!
//! * the observation map is a bijection between propositions and their
//!   observation tasks;
//! * every constraint label implies both endpoint labels (the WD1 condition,
//!   checked as literal containment);
//! * labels never carry complementary literals.
//!
//! Nothing else is required of labels: an observation task may itself be
//! labeled, and no ordering between observations is assumed.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::label::{Label, PropId};
use crate::scenario::Scenario;
use crate::stn::{Stn, StnConstraint};
use crate::Rational;

/// Index of a task within its owning network (dense, starting at 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskId(pub u32);

impl TaskId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// A labeled difference constraint `to - from <= bound_k * w`.
///
/// The bound is an integer number of grid units `w`; the label says in which
/// scenarios the constraint applies. Lower bounds `to >= from + k` are stored
/// in this canonical form as `from - to <= -k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledConstraint {
    pub from: TaskId,
    pub to: TaskId,
    pub bound_k: i64,
    pub label: Label,
}

/// One WD1 failure: a constraint whose label does not imply an endpoint's label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wd1Violation {
    pub constraint_index: usize,
    pub endpoint: TaskId,
}

impl fmt::Display for Wd1Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "constraint #{} does not imply the label of its endpoint {}",
            self.constraint_index, self.endpoint
        )
    }
}

/// Construction errors reported by [`CstnBuilder::build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    DuplicateTask { name: String },
    DuplicateProp { name: String },
    /// A proposition is observed by two tasks, or a task observes two props.
    ObservationNotBijective { detail: String },
    /// A proposition has no observation task.
    UnobservedProp { prop: String },
    Wd1 { violations: Vec<Wd1Violation> },
    /// The grid unit must be positive.
    NonPositiveUnit,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::DuplicateTask { name } => write!(f, "duplicate task name {:?}", name),
            BuildError::DuplicateProp { name } => write!(f, "duplicate proposition {:?}", name),
            BuildError::ObservationNotBijective { detail } => {
                write!(f, "observation map is not a bijection: {}", detail)
            }
            BuildError::UnobservedProp { prop } => {
                write!(f, "proposition {:?} has no observation task", prop)
            }
            BuildError::Wd1 { violations } => {
                write!(f, "{} constraint(s) violate label well-definedness:", violations.len())?;
                for v in violations {
                    write!(f, " [{}]", v)?;
                }
                Ok(())
            }
            BuildError::NonPositiveUnit => write!(f, "grid unit must be positive"),
        }
    }
}

/// A conditional simple temporal network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cstn {
    task_names: Vec<String>,
    prop_names: Vec<String>,
    task_labels: Vec<Label>,
    /// Per proposition, the task whose execution reveals it.
    observer: Vec<TaskId>,
    /// Per task, the proposition it reveals, if any.
    observed: Vec<Option<PropId>>,
    constraints: Vec<LabeledConstraint>,
    /// The grid unit `w`: constraint bounds are integer multiples of it.
    unit: Rational,
    /// The bound magnitude `W`: every `|bound_k| <= W`. At least 1.
    max_abs_bound: i64,
}

impl Cstn {
    pub fn num_tasks(&self) -> usize {
        self.task_names.len()
    }

    pub fn num_props(&self) -> usize {
        self.prop_names.len()
    }

    pub fn tasks(&self) -> impl Iterator<Item = TaskId> {
        (0..self.task_names.len() as u32).map(TaskId)
    }

    pub fn props(&self) -> impl Iterator<Item = PropId> {
        (0..self.prop_names.len() as u32).map(PropId)
    }

    pub fn task_name(&self, t: TaskId) -> &str {
        &self.task_names[t.index()]
    }

    pub fn prop_name(&self, p: PropId) -> &str {
        &self.prop_names[p.index()]
    }

    pub fn task_by_name(&self, name: &str) -> Option<TaskId> {
        self.task_names
            .iter()
            .position(|n| n == name)
            .map(|i| TaskId(i as u32))
    }

    pub fn prop_by_name(&self, name: &str) -> Option<PropId> {
        self.prop_names
            .iter()
            .position(|n| n == name)
            .map(|i| PropId(i as u32))
    }

    pub fn task_label(&self, t: TaskId) -> &Label {
        &self.task_labels[t.index()]
    }

    /// The task that reveals `p` when executed.
    pub fn observer(&self, p: PropId) -> TaskId {
        self.observer[p.index()]
    }

    /// The proposition revealed by `t`, if `t` is an observation task.
    pub fn observed_prop(&self, t: TaskId) -> Option<PropId> {
        self.observed[t.index()]
    }

    pub fn constraints(&self) -> &[LabeledConstraint] {
        &self.constraints
    }

    pub fn unit(&self) -> Rational {
        self.unit
    }

    /// `W`: the largest `|bound_k|` over all constraints, floored at 1.
    pub fn max_abs_bound(&self) -> i64 {
        self.max_abs_bound
    }

    /// All scenarios over this network's propositions, in canonical order.
    pub fn scenarios(&self) -> impl Iterator<Item = Scenario> {
        Scenario::all(self.num_props())
    }

    /// The tasks relevant under `s`: those whose label holds.
    pub fn relevant_tasks(&self, s: &Scenario) -> Vec<TaskId> {
        self.tasks()
            .filter(|&t| self.task_label(t).holds_in(s))
            .collect()
    }

    /// The projection at `s`: relevant tasks plus the constraints whose
    /// labels hold, with bounds in grid units `w`.
    pub fn project(&self, s: &Scenario) -> Stn {
        self.project_on(s, 1)
    }

    /// The projection at `s` with bounds scaled to a grid of
    /// `steps_per_unit` indices per unit `w` (the grid step is
    /// `w / steps_per_unit`).
    pub fn project_on(&self, s: &Scenario, steps_per_unit: i64) -> Stn {
        debug_assert!(steps_per_unit >= 1);
        let constraints = self
            .constraints
            .iter()
            .filter(|c| c.label.holds_in(s))
            .map(|c| StnConstraint::new(c.from, c.to, c.bound_k * steps_per_unit))
            .collect();
        Stn::new(self.relevant_tasks(s), constraints)
    }

    /// Re-checks WD1 on an already-built network. Always ok for networks from
    /// [`CstnBuilder`]; exposed so parsers and tests can report violations
    /// uniformly.
    pub fn validate_wd1(&self) -> Result<(), Vec<Wd1Violation>> {
        check_wd1(&self.task_labels, &self.constraints)
    }
}

/// WD1 as literal containment: for each constraint, every literal of both
/// endpoint labels must appear in the constraint label.
fn check_wd1(
    task_labels: &[Label],
    constraints: &[LabeledConstraint],
) -> Result<(), Vec<Wd1Violation>> {
    let mut violations = Vec::new();
    for (i, c) in constraints.iter().enumerate() {
        for endpoint in [c.from, c.to] {
            if !c.label.implies(&task_labels[endpoint.index()]) {
                violations.push(Wd1Violation {
                    constraint_index: i,
                    endpoint,
                });
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Incremental constructor for [`Cstn`].
pub struct CstnBuilder {
    unit: Rational,
    task_names: Vec<String>,
    task_labels: Vec<Label>,
    prop_names: Vec<String>,
    observes: Vec<(PropId, TaskId)>,
    constraints: Vec<LabeledConstraint>,
}

impl CstnBuilder {
    /// Starts a network with grid unit `w = 1`.
    pub fn new() -> Self {
        CstnBuilder::with_unit(Rational::from_integer(1))
    }

    pub fn with_unit(unit: Rational) -> Self {
        CstnBuilder {
            unit,
            task_names: Vec::new(),
            task_labels: Vec::new(),
            prop_names: Vec::new(),
            observes: Vec::new(),
            constraints: Vec::new(),
        }
    }

    /// Declares an unlabeled task and returns its id.
    pub fn task(&mut self, name: &str) -> TaskId {
        self.task_labeled(name, Label::empty())
    }

    pub fn task_labeled(&mut self, name: &str, label: Label) -> TaskId {
        let id = TaskId(self.task_names.len() as u32);
        self.task_names.push(String::from(name));
        self.task_labels.push(label);
        id
    }

    /// Declares a proposition and returns its id.
    pub fn prop(&mut self, name: &str) -> PropId {
        let id = PropId(self.prop_names.len() as u32);
        self.prop_names.push(String::from(name));
        id
    }

    /// Records that executing `task` reveals `prop`.
    pub fn observes(&mut self, prop: PropId, task: TaskId) {
        self.observes.push((prop, task));
    }

    /// Adds the constraint `to - from <= bound_k` (in grid units) under `label`.
    pub fn constraint(&mut self, to: TaskId, from: TaskId, bound_k: i64, label: Label) {
        self.constraints.push(LabeledConstraint {
            from,
            to,
            bound_k,
            label,
        });
    }

    /// Unlabeled constraint `to - from <= bound_k`.
    pub fn constraint_free(&mut self, to: TaskId, from: TaskId, bound_k: i64) {
        self.constraint(to, from, bound_k, Label::empty());
    }

    /// WD1 report on the constraints added so far.
    pub fn wd1_report(&self) -> Result<(), Vec<Wd1Violation>> {
        check_wd1(&self.task_labels, &self.constraints)
    }

    pub fn build(self) -> Result<Cstn, BuildError> {
        use num_rational::Ratio;
        if self.unit <= Ratio::from_integer(0) {
            return Err(BuildError::NonPositiveUnit);
        }
        for (i, name) in self.task_names.iter().enumerate() {
            if self.task_names[..i].contains(name) {
                return Err(BuildError::DuplicateTask { name: name.clone() });
            }
        }
        for (i, name) in self.prop_names.iter().enumerate() {
            if self.prop_names[..i].contains(name) {
                return Err(BuildError::DuplicateProp { name: name.clone() });
            }
        }
        let mut observer: Vec<Option<TaskId>> = alloc::vec![None; self.prop_names.len()];
        let mut observed: Vec<Option<PropId>> = alloc::vec![None; self.task_names.len()];
        for &(p, t) in &self.observes {
            if observer[p.index()].is_some() {
                return Err(BuildError::ObservationNotBijective {
                    detail: alloc::format!("{:?} observed twice", self.prop_names[p.index()]),
                });
            }
            if observed[t.index()].is_some() {
                return Err(BuildError::ObservationNotBijective {
                    detail: alloc::format!(
                        "task {:?} observes two propositions",
                        self.task_names[t.index()]
                    ),
                });
            }
            observer[p.index()] = Some(t);
            observed[t.index()] = Some(p);
        }
        let observer: Vec<TaskId> = observer
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| BuildError::UnobservedProp {
                    prop: self.prop_names[i].clone(),
                })
            })
            .collect::<Result<_, _>>()?;
        if let Err(violations) = check_wd1(&self.task_labels, &self.constraints) {
            return Err(BuildError::Wd1 { violations });
        }
        let max_abs_bound = self
            .constraints
            .iter()
            .map(|c| c.bound_k.abs())
            .max()
            .unwrap_or(0)
            .max(1);
        Ok(Cstn {
            task_names: self.task_names,
            prop_names: self.prop_names,
            task_labels: self.task_labels,
            observer,
            observed,
            constraints: self.constraints,
            unit: self.unit,
            max_abs_bound,
        })
    }
}

impl Default for CstnBuilder {
    fn default() -> Self {
        CstnBuilder::new()
    }
}
