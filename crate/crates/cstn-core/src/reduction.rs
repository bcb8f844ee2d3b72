//! Hardness construction: compiling quantified 3-SAT into conditional
//! networks whose dynamic controllability encodes the formula's truth.
//!
//! [`reduce`] builds, for a formula with `n` quantifier pairs, a network of
//! `7n+2` tasks arranged in `n` chained gadgets plus a final activation
//! pair. Gadget `i` forces the controller to commit to a guess for the
//! existential variable `xᵢ` (by running one of `Cᵢ⁰`/`Cᵢ¹` early) before
//! the environment reveals `xᵢ` and `yᵢ`; a slack bound is consumed
//! whenever the revealed `xᵢ` differs from the guess, and the clause
//! constraints at the end are violated exactly on runs where the
//! environment falsified the matrix against the controller's play.
//!
//! [`witness_strategy`] turns a winning existential strategy into an
//! execution tree for the network (this is the controllability witness for
//! true formulas), and [`adversary`] plays the environment with a winning
//! universal strategy to produce a violated constraint against any
//! purported execution table for a false formula.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::label::{Label, PropId};
use crate::network::{Cstn, CstnBuilder, TaskId};
use crate::qbf::{ExistentialStrategy, Q3SatFormula, QVar, UniversalStrategy};
use crate::scenario::Scenario;
use crate::schedule::GridIx;
use crate::strategy::{TableStrategy, TreeNode, TreeStrategy};

/// What a constraint does within the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// `B₁ − A₁ ≤ 0`: the first activation interval starts tight.
    Activation,
    /// `Dᵢ ≤ Bᵢ + 1` under `cᵢ⁰ ∧ cᵢ¹`: an early commitment deadline.
    DEarly,
    /// `Dᵢ ≥ Aᵢ + (n+2)` under `¬cᵢ⁰ ∧ ¬cᵢ¹`: the conflicting late bound.
    DLate,
    /// `Xᵢ ≥ Aᵢ + (n+2)`: the reveal of `xᵢ` comes after the commitment.
    XDelay,
    /// `Yᵢ ≥ Xᵢ + 1`: `yᵢ` is revealed strictly after `xᵢ`.
    YDelay,
    /// `Aᵢ₊₁ ≥ Yᵢ + 1`: the next gadget starts after both reveals.
    Chain,
    /// `Bᵢ₊₁ ≤ Cᵢ⁰ + (n+4)` under `¬xᵢ`: a wrong guess of 1 tightens the
    /// next activation interval.
    Propagate0,
    /// `Bᵢ₊₁ ≤ Cᵢ¹ + (n+4)` under `xᵢ`: symmetric for a wrong guess of 0.
    Propagate1,
    /// `Bₙ₊₁ − Aₙ₊₁ ≥ n+1` under "clause `j` falsified": unsatisfiable
    /// once the slack is gone.
    Clause(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Activation => write!(f, "activation"),
            Role::DEarly => write!(f, "D-early"),
            Role::DLate => write!(f, "D-late"),
            Role::XDelay => write!(f, "X-delay"),
            Role::YDelay => write!(f, "Y-delay"),
            Role::Chain => write!(f, "chain"),
            Role::Propagate0 => write!(f, "propagate-0"),
            Role::Propagate1 => write!(f, "propagate-1"),
            Role::Clause(j) => write!(f, "clause {}", j),
        }
    }
}

/// Annotation attached to each emitted constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstraintTag {
    /// Stage the constraint belongs to: `i` for per-gadget roles, 1 for
    /// the activation constraint, `n+1` for clause constraints.
    pub gadget: usize,
    pub role: Role,
}

impl fmt::Display for ConstraintTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gadget {} {}", self.gadget, self.role)
    }
}

/// Task handles of the construction, indexed by 0-based stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTasks {
    /// `A₁ … Aₙ₊₁`.
    pub a: Vec<TaskId>,
    /// `B₁ … Bₙ₊₁`.
    pub b: Vec<TaskId>,
    /// `C₁⁰ … Cₙ⁰`.
    pub c0: Vec<TaskId>,
    /// `C₁¹ … Cₙ¹`.
    pub c1: Vec<TaskId>,
    /// `D₁ … Dₙ`.
    pub d: Vec<TaskId>,
    /// `X₁ … Xₙ` (observers of the `x` propositions).
    pub x: Vec<TaskId>,
    /// `Y₁ … Yₙ` (observers of the `y` propositions).
    pub y: Vec<TaskId>,
}

/// Proposition handles of the construction, indexed by 0-based stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionProps {
    pub x: Vec<PropId>,
    pub y: Vec<PropId>,
    pub c0: Vec<PropId>,
    pub c1: Vec<PropId>,
}

/// The compiled network together with its construction metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub cstn: Cstn,
    /// One tag per constraint, parallel to `cstn.constraints()`.
    pub annotations: Vec<ConstraintTag>,
    pub tasks: ReductionTasks,
    pub props: ReductionProps,
    /// 1-based indices of tautological clauses whose constraint was
    /// omitted: their "falsified" label would be contradictory, so the
    /// constraint could never apply.
    pub omitted_clauses: Vec<usize>,
    /// Number of quantifier pairs `n`.
    pub levels: usize,
}

impl ReductionInstance {
    /// The proposition carrying a quantified variable's value.
    pub fn prop_of(&self, var: QVar) -> PropId {
        match var {
            QVar::Existential(i) => self.props.x[i - 1],
            QVar::Universal(i) => self.props.y[i - 1],
        }
    }

    /// Human-readable note for the constraint at `index`, stating the
    /// original orientation of the inequality.
    pub fn describe_constraint(&self, index: usize) -> String {
        use core::fmt::Write;
        let c = &self.cstn.constraints()[index];
        let tag = self.annotations[index];
        let mut out = String::new();
        let to = self.cstn.task_name(c.to);
        let from = self.cstn.task_name(c.from);
        if c.bound_k < 0 {
            // Stored as to − from ≤ −k; readers expect from ≥ to + k.
            let _ = write!(out, "{}: {} >= {} + {}", tag, from, to, -c.bound_k);
        } else {
            let _ = write!(out, "{}: {} <= {} + {}", tag, to, from, c.bound_k);
        }
        out
    }
}

/// Builds the network for a formula with `n` pairs: tasks
/// `Aᵢ,Bᵢ,Cᵢ⁰,Cᵢ¹,Dᵢ,Xᵢ,Yᵢ` per stage plus `Aₙ₊₁,Bₙ₊₁`, propositions
/// `xᵢ,yᵢ,cᵢ⁰,cᵢ¹` observed by `Xᵢ,Yᵢ,Cᵢ⁰,Cᵢ¹`, and the constraint list
/// described on [`Role`]. All task labels are empty, so the label-coherence
/// requirement holds trivially and every scenario projection contains all
/// `7n+2` tasks.
pub fn reduce(phi: &Q3SatFormula) -> ReductionInstance {
    let n = phi.levels();
    let nk = n as i64;
    let mut builder = CstnBuilder::new();

    let mut tasks = ReductionTasks {
        a: Vec::with_capacity(n + 1),
        b: Vec::with_capacity(n + 1),
        c0: Vec::with_capacity(n),
        c1: Vec::with_capacity(n),
        d: Vec::with_capacity(n),
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
    };
    let mut props = ReductionProps {
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        c0: Vec::with_capacity(n),
        c1: Vec::with_capacity(n),
    };

    let mut name = String::new();
    let mut named = |builder: &mut CstnBuilder, prefix: &str, i: usize, suffix: &str| {
        use core::fmt::Write;
        name.clear();
        let _ = write!(name, "{}{}{}", prefix, i, suffix);
        builder.task(&name)
    };
    for i in 1..=n {
        tasks.a.push(named(&mut builder, "A", i, ""));
        tasks.b.push(named(&mut builder, "B", i, ""));
        tasks.c0.push(named(&mut builder, "C", i, "_0"));
        tasks.c1.push(named(&mut builder, "C", i, "_1"));
        tasks.d.push(named(&mut builder, "D", i, ""));
        tasks.x.push(named(&mut builder, "X", i, ""));
        tasks.y.push(named(&mut builder, "Y", i, ""));
    }
    tasks.a.push(named(&mut builder, "A", n + 1, ""));
    tasks.b.push(named(&mut builder, "B", n + 1, ""));

    let mut pname = String::new();
    let mut prop = |builder: &mut CstnBuilder, prefix: &str, i: usize, suffix: &str| {
        use core::fmt::Write;
        pname.clear();
        let _ = write!(pname, "{}{}{}", prefix, i, suffix);
        builder.prop(&pname)
    };
    for i in 1..=n {
        props.x.push(prop(&mut builder, "x", i, ""));
        props.y.push(prop(&mut builder, "y", i, ""));
        props.c0.push(prop(&mut builder, "c", i, "_0"));
        props.c1.push(prop(&mut builder, "c", i, "_1"));
    }
    for i in 0..n {
        builder.observes(props.x[i], tasks.x[i]);
        builder.observes(props.y[i], tasks.y[i]);
        builder.observes(props.c0[i], tasks.c0[i]);
        builder.observes(props.c1[i], tasks.c1[i]);
    }

    let mut annotations = Vec::new();
    let emit = |builder: &mut CstnBuilder,
                    annotations: &mut Vec<ConstraintTag>,
                    to: TaskId,
                    from: TaskId,
                    k: i64,
                    label: Label,
                    tag: ConstraintTag| {
        builder.constraint(to, from, k, label);
        annotations.push(tag);
    };

    emit(
        &mut builder,
        &mut annotations,
        tasks.b[0],
        tasks.a[0],
        0,
        Label::empty(),
        ConstraintTag { gadget: 1, role: Role::Activation },
    );
    for i in 0..n {
        let tag = |role| ConstraintTag { gadget: i + 1, role };
        let both_c = Label::pos(props.c0[i]).and(&Label::pos(props.c1[i])).unwrap();
        let neither_c = Label::neg(props.c0[i]).and(&Label::neg(props.c1[i])).unwrap();
        // Dᵢ ≤ Bᵢ + 1 / Dᵢ ≥ Aᵢ + (n+2).
        emit(&mut builder, &mut annotations, tasks.d[i], tasks.b[i], 1, both_c, tag(Role::DEarly));
        emit(&mut builder, &mut annotations, tasks.a[i], tasks.d[i], -(nk + 2), neither_c, tag(Role::DLate));
        // Xᵢ ≥ Aᵢ + (n+2), Yᵢ ≥ Xᵢ + 1, Aᵢ₊₁ ≥ Yᵢ + 1.
        emit(&mut builder, &mut annotations, tasks.a[i], tasks.x[i], -(nk + 2), Label::empty(), tag(Role::XDelay));
        emit(&mut builder, &mut annotations, tasks.x[i], tasks.y[i], -1, Label::empty(), tag(Role::YDelay));
        emit(&mut builder, &mut annotations, tasks.y[i], tasks.a[i + 1], -1, Label::empty(), tag(Role::Chain));
        // Bᵢ₊₁ ≤ Cᵢʰ + (n+4) when the revealed xᵢ contradicts guess h.
        emit(&mut builder, &mut annotations, tasks.b[i + 1], tasks.c0[i], nk + 4, Label::neg(props.x[i]), tag(Role::Propagate0));
        emit(&mut builder, &mut annotations, tasks.b[i + 1], tasks.c1[i], nk + 4, Label::pos(props.x[i]), tag(Role::Propagate1));
    }

    let mut omitted_clauses = Vec::new();
    for (j, clause) in phi.clauses().iter().enumerate() {
        // Label "clause j falsified": every literal negated, conjoined.
        let mut label = Ok(Label::empty());
        for lit in clause {
            let p = match lit.var {
                QVar::Existential(i) => props.x[i - 1],
                QVar::Universal(i) => props.y[i - 1],
            };
            let negated = if lit.positive { Label::neg(p) } else { Label::pos(p) };
            label = label.and_then(|l| l.and(&negated));
        }
        match label {
            Ok(label) => {
                // Bₙ₊₁ − Aₙ₊₁ ≥ n+1, i.e. Aₙ₊₁ − Bₙ₊₁ ≤ −(n+1).
                emit(
                    &mut builder,
                    &mut annotations,
                    tasks.a[n],
                    tasks.b[n],
                    -(nk + 1),
                    label,
                    ConstraintTag { gadget: n + 1, role: Role::Clause(j + 1) },
                );
            }
            // A tautological clause can never be falsified; its constraint
            // would carry a contradictory label, so it is dropped.
            Err(_) => omitted_clauses.push(j + 1),
        }
    }

    let cstn = builder.build().expect("construction satisfies all network invariants");
    ReductionInstance {
        cstn,
        annotations,
        tasks,
        props,
        omitted_clauses,
        levels: n,
    }
}

/// The parking time `(n+4)(n+2)`: late enough that nothing scheduled there
/// can violate an upper bound, yet concrete so schedules stay finite.
pub fn park_time(levels: usize) -> GridIx {
    (levels as GridIx + 4) * (levels as GridIx + 2)
}

/// Builds the execution tree induced by a winning existential strategy
/// `f`, at grid resolution 1.
///
/// Stage `i` runs `Aᵢ` at `(n+4)i` in every branch. While the environment
/// has copied every earlier guess ("live"), the stage also runs `Bᵢ` and
/// the guessed `Cᵢ^h` (h from `f`) at `(n+4)i`, runs `Dᵢ` at `(n+4)i + 1`
/// exactly when the observed `cᵢ^h` is 1, and then observes `xᵢ` and `yᵢ`
/// at `(n+4)i + n+2` and `+ n+3`. A mismatch on `xᵢ` ends the live phase:
/// from then on only the mandatory `Aᵢ`/`Xᵢ`/`Yᵢ` run on time and
/// everything else is parked at [`park_time`]. The final stage runs
/// `Aₙ₊₁` — with `Bₙ₊₁` only if still live — and a last parking action
/// executes every remaining task.
pub fn witness_strategy(inst: &ReductionInstance, f: &ExistentialStrategy) -> TreeStrategy {
    assert_eq!(f.levels(), inst.levels, "strategy must cover every level");
    let root = build_stage(inst, f, 1, 0, true, Vec::new());
    TreeStrategy { resolution: 1, root }
}

fn stage_base(inst: &ReductionInstance, i: usize) -> GridIx {
    (inst.levels as GridIx + 4) * i as GridIx
}

/// Subtree from stage `i` on. `y_prefix` holds the observed y₁…yᵢ₋₁,
/// `live` says whether every observed xⱼ matched its guess so far, and
/// `pending` collects tasks deferred to the parking action.
fn build_stage(
    inst: &ReductionInstance,
    f: &ExistentialStrategy,
    i: usize,
    y_prefix: u64,
    live: bool,
    pending: Vec<TaskId>,
) -> TreeNode {
    let n = inst.levels;
    let base = stage_base(inst, i);
    if i == n + 1 {
        let mut tasks = vec![inst.tasks.a[n]];
        let mut pending = pending;
        if live {
            tasks.push(inst.tasks.b[n]);
        } else {
            pending.push(inst.tasks.b[n]);
        }
        tasks.sort_unstable();
        return TreeNode::Act {
            at: base,
            tasks,
            children: vec![park(inst, pending)],
        };
    }
    if live {
        let h = f.choose(i, y_prefix);
        let (chosen, other) = if h {
            (inst.tasks.c1[i - 1], inst.tasks.c0[i - 1])
        } else {
            (inst.tasks.c0[i - 1], inst.tasks.c1[i - 1])
        };
        let mut tasks = vec![inst.tasks.a[i - 1], inst.tasks.b[i - 1], chosen];
        tasks.sort_unstable();
        // Child per observed cᵢ^h: on 1, Dᵢ meets its early deadline; on
        // 0, Dᵢ is parked past the late bound.
        let on_zero = {
            let mut p = pending.clone();
            p.push(other);
            p.push(inst.tasks.d[i - 1]);
            build_reveals(inst, f, i, y_prefix, h, p)
        };
        let on_one = {
            let mut p = pending;
            p.push(other);
            TreeNode::Act {
                at: base + 1,
                tasks: vec![inst.tasks.d[i - 1]],
                children: vec![build_reveals(inst, f, i, y_prefix, h, p)],
            }
        };
        TreeNode::Act {
            at: base,
            tasks,
            children: vec![on_zero, on_one],
        }
    } else {
        let mut pending = pending;
        pending.extend([
            inst.tasks.b[i - 1],
            inst.tasks.c0[i - 1],
            inst.tasks.c1[i - 1],
            inst.tasks.d[i - 1],
        ]);
        let tail = build_dead_reveals(inst, f, i, y_prefix, pending);
        TreeNode::Act {
            at: base,
            tasks: vec![inst.tasks.a[i - 1]],
            children: vec![tail],
        }
    }
}

/// The `Xᵢ`/`Yᵢ` observations closing a live stage `i`; a mismatch between
/// the revealed `xᵢ` and the guess `h` kills the live phase.
fn build_reveals(
    inst: &ReductionInstance,
    f: &ExistentialStrategy,
    i: usize,
    y_prefix: u64,
    h: bool,
    pending: Vec<TaskId>,
) -> TreeNode {
    let n = inst.levels as GridIx;
    let base = stage_base(inst, i);
    let x_children = [false, true]
        .into_iter()
        .map(|vx| {
            let y_children = [false, true]
                .into_iter()
                .map(|vy| {
                    let y_prefix = y_prefix | (u64::from(vy) << (i - 1));
                    build_stage(inst, f, i + 1, y_prefix, vx == h, pending.clone())
                })
                .collect();
            TreeNode::Act {
                at: base + n + 3,
                tasks: vec![inst.tasks.y[i - 1]],
                children: y_children,
            }
        })
        .collect();
    TreeNode::Act {
        at: base + n + 2,
        tasks: vec![inst.tasks.x[i - 1]],
        children: x_children,
    }
}

/// Same reveals on a dead branch: the observations still happen on time
/// (the delay constraints are unlabeled) but no longer influence anything.
fn build_dead_reveals(
    inst: &ReductionInstance,
    f: &ExistentialStrategy,
    i: usize,
    y_prefix: u64,
    pending: Vec<TaskId>,
) -> TreeNode {
    let n = inst.levels as GridIx;
    let base = stage_base(inst, i);
    let x_children = [false, true]
        .into_iter()
        .map(|_| {
            let y_children = [false, true]
                .into_iter()
                .map(|vy| {
                    let y_prefix = y_prefix | (u64::from(vy) << (i - 1));
                    build_stage(inst, f, i + 1, y_prefix, false, pending.clone())
                })
                .collect();
            TreeNode::Act {
                at: base + n + 3,
                tasks: vec![inst.tasks.y[i - 1]],
                children: y_children,
            }
        })
        .collect();
    TreeNode::Act {
        at: base + n + 2,
        tasks: vec![inst.tasks.x[i - 1]],
        children: x_children,
    }
}

/// One final action executing every deferred task at [`park_time`];
/// branches over the parked observation tasks' outcomes, all terminal.
fn park(inst: &ReductionInstance, pending: Vec<TaskId>) -> TreeNode {
    if pending.is_empty() {
        return TreeNode::Terminal;
    }
    let mut tasks = pending;
    tasks.sort_unstable();
    let observed = tasks
        .iter()
        .filter(|&&t| inst.cstn.observed_prop(t).is_some())
        .count();
    TreeNode::Act {
        at: park_time(inst.levels),
        tasks,
        children: vec![TreeNode::Terminal; 1 << observed],
    }
}

/// Outcome of the refutation play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdversaryOutcome {
    /// In `scenario`, the strategy's row violates this constraint.
    Violation { scenario: Scenario, constraint_index: usize },
    /// No violated constraint in the final scenario. Against a genuinely
    /// viable and dynamic table this cannot happen for a false formula; it
    /// certifies the table was not actually dynamic.
    GivesUp { scenario: Scenario },
}

/// Plays the environment against an execution table using a winning
/// universal strategy `g`.
///
/// Starting from the all-zeros scenario, stage by stage: read the table's
/// committed guess `hᵢ` (did `Cᵢ⁰` run before `Bᵢ` plus one unit?), set
/// `xᵢ` to exactly that guess, and set `yᵢ` by `g` applied to x₁…xᵢ.
/// Copying the guess keeps the clause stage reachable within its slack
/// while `g` steers the assignment to falsify some clause; the final
/// scenario is scanned for a violated constraint.
pub fn adversary(
    inst: &ReductionInstance,
    g: &UniversalStrategy,
    sigma: &TableStrategy,
) -> AdversaryOutcome {
    assert_eq!(g.levels(), inst.levels, "strategy must cover every level");
    let res = sigma.resolution();
    let mut s = Scenario::from_bits(inst.cstn.num_props(), 0);
    let mut x_bits = 0u64;
    for i in 1..=inst.levels {
        let row = sigma.row(&s);
        let c0 = row.time(inst.tasks.c0[i - 1]).expect("rows are total");
        let b = row.time(inst.tasks.b[i - 1]).expect("rows are total");
        let h = c0 >= b + res;
        if h {
            x_bits |= 1 << (i - 1);
        }
        s = s.with(inst.props.x[i - 1], h);
        s = s.with(inst.props.y[i - 1], g.choose(i, x_bits));
    }
    let row = sigma.row(&s);
    for (index, c) in inst.cstn.constraints().iter().enumerate() {
        if !c.label.holds_in(&s) {
            continue;
        }
        let from = row.time(c.from).expect("rows are total");
        let to = row.time(c.to).expect("rows are total");
        if to - from > c.bound_k * res {
            return AdversaryOutcome::Violation { scenario: s, constraint_index: index };
        }
    }
    AdversaryOutcome::GivesUp { scenario: s }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::{qbf_eval, qbf_extract_existential, qbf_extract_universal, QLit};
    use crate::schedule::Schedule;
    use crate::strategy::{tree_to_table, verify_dynamic, verify_viable};

    fn x(i: usize) -> QVar {
        QVar::Existential(i)
    }

    fn y(i: usize) -> QVar {
        QVar::Universal(i)
    }

    /// Scenario with the named propositions true and all others false.
    fn scenario_of(cstn: &Cstn, truthy: &[&str]) -> Scenario {
        let mut bits = 0u64;
        for name in truthy {
            bits |= 1 << cstn.prop_by_name(name).unwrap().index();
        }
        Scenario::from_bits(cstn.num_props(), bits)
    }

    /// ∃x₁∀y₁ ((x₁∨y₁∨y₁) ∧ (¬x₁∨¬y₁∨¬y₁)): false, the universal player
    /// copies x₁ into y₁.
    fn copycat() -> Q3SatFormula {
        Q3SatFormula::new(
            1,
            vec![
                [QLit::pos(x(1)), QLit::pos(y(1)), QLit::pos(y(1))],
                [QLit::neg(x(1)), QLit::neg(y(1)), QLit::neg(y(1))],
            ],
        )
        .unwrap()
    }

    /// ∃x₁∀y₁ ((x₁∨¬y₁∨¬y₁) ∧ (x₁∨y₁∨y₁)): true with x₁ = 1.
    fn needs_one() -> Q3SatFormula {
        Q3SatFormula::new(
            1,
            vec![
                [QLit::pos(x(1)), QLit::neg(y(1)), QLit::neg(y(1))],
                [QLit::pos(x(1)), QLit::pos(y(1)), QLit::pos(y(1))],
            ],
        )
        .unwrap()
    }

    #[test]
    fn structure_counts() {
        let inst = reduce(&copycat());
        assert_eq!(inst.cstn.num_tasks(), 9);
        assert_eq!(inst.cstn.num_props(), 4);
        assert_eq!(inst.cstn.constraints().len(), 1 + 7 + 2);
        assert_eq!(inst.annotations.len(), inst.cstn.constraints().len());
        assert_eq!(inst.cstn.max_abs_bound(), 5);
        assert_eq!(inst.cstn.validate_wd1(), Ok(()));

        let three = Q3SatFormula::new(3, vec![[QLit::pos(x(3)); 3]]).unwrap();
        let inst3 = reduce(&three);
        assert_eq!(inst3.cstn.num_tasks(), 23);
        assert_eq!(inst3.cstn.num_props(), 12);
        assert_eq!(inst3.cstn.constraints().len(), 1 + 21 + 1);
        assert_eq!(inst3.cstn.max_abs_bound(), 7);
    }

    #[test]
    fn task_and_prop_names() {
        let inst = reduce(&copycat());
        let names: Vec<&str> = inst.cstn.tasks().map(|t| inst.cstn.task_name(t)).collect();
        assert_eq!(names, ["A1", "B1", "C1_0", "C1_1", "D1", "X1", "Y1", "A2", "B2"]);
        let pnames: Vec<&str> = inst.cstn.props().map(|p| inst.cstn.prop_name(p)).collect();
        assert_eq!(pnames, ["x1", "y1", "c1_0", "c1_1"]);
        assert_eq!(inst.cstn.observer(inst.props.x[0]), inst.tasks.x[0]);
        assert_eq!(inst.cstn.observer(inst.props.c1[0]), inst.tasks.c1[0]);
    }

    #[test]
    fn tautological_clause_omitted() {
        let phi = Q3SatFormula::new(
            1,
            vec![
                [QLit::pos(x(1)), QLit::neg(x(1)), QLit::pos(y(1))],
                [QLit::pos(x(1)); 3],
            ],
        )
        .unwrap();
        let inst = reduce(&phi);
        assert_eq!(inst.omitted_clauses, vec![1]);
        assert_eq!(inst.cstn.constraints().len(), 1 + 7 + 1);
        assert_eq!(inst.annotations.last().unwrap().role, Role::Clause(2));
    }

    /// The strategy table written out directly from its closed form, as an
    /// independent check on the tree construction: `hᵢ` is the guess `f`
    /// makes from the observed y-prefix, `b` the first stage whose
    /// revealed `xᵢ` differs (n+1 if none), `b' = min(b, n)`.
    fn closed_form_row(inst: &ReductionInstance, f: &ExistentialStrategy, s: &Scenario) -> Schedule {
        let n = inst.levels;
        let w = n as GridIx + 4;
        let inf = park_time(n);
        let h: Vec<bool> = (1..=n)
            .map(|i| {
                let mut yp = 0u64;
                for j in 0..i - 1 {
                    yp |= u64::from(s.value(inst.props.y[j])) << j;
                }
                f.choose(i, yp)
            })
            .collect();
        let b = (1..=n)
            .find(|&i| s.value(inst.props.x[i - 1]) != h[i - 1])
            .unwrap_or(n + 1);
        let bp = b.min(n);
        let mut row = Schedule::new();
        for i in 1..=n + 1 {
            row.set(inst.tasks.a[i - 1], w * i as GridIx);
            row.set(inst.tasks.b[i - 1], if i <= b { w * i as GridIx } else { inf });
        }
        for i in 1..=n {
            let (chosen, other) = if h[i - 1] {
                (inst.tasks.c1[i - 1], inst.tasks.c0[i - 1])
            } else {
                (inst.tasks.c0[i - 1], inst.tasks.c1[i - 1])
            };
            row.set(chosen, if i <= bp { w * i as GridIx } else { inf });
            row.set(other, inf);
            let c_prop = if h[i - 1] { inst.props.c1[i - 1] } else { inst.props.c0[i - 1] };
            let d_time = if i <= bp && s.value(c_prop) {
                w * i as GridIx + 1
            } else {
                inf
            };
            row.set(inst.tasks.d[i - 1], d_time);
            row.set(inst.tasks.x[i - 1], w * i as GridIx + n as GridIx + 2);
            row.set(inst.tasks.y[i - 1], w * i as GridIx + n as GridIx + 3);
        }
        row
    }

    #[test]
    fn witness_tree_matches_closed_form() {
        for phi in [needs_one(), copycat()] {
            let inst = reduce(&phi);
            for f in ExistentialStrategy::enumerate(1) {
                let table = tree_to_table(&inst.cstn, &witness_strategy(&inst, &f)).unwrap();
                for s in inst.cstn.scenarios() {
                    assert_eq!(*table.row(&s), closed_form_row(&inst, &f, &s), "scenario {}", s);
                }
            }
        }
    }

    #[test]
    fn witness_frozen_times() {
        let inst = reduce(&needs_one());
        let f = qbf_extract_existential(&needs_one()).unwrap().unwrap();
        assert_eq!(f.tables(), &[vec![true]]);
        let table = tree_to_table(&inst.cstn, &witness_strategy(&inst, &f)).unwrap();

        // Scenario x₁=1, c₁¹=1 (guess confirmed, matching reveal).
        let s = scenario_of(&inst.cstn, &["x1", "c1_1"]);
        let row = table.row(&s);
        let by_name = |n: &str| row.time(inst.cstn.task_by_name(n).unwrap()).unwrap();
        assert_eq!(by_name("A1"), 5);
        assert_eq!(by_name("B1"), 5);
        assert_eq!(by_name("C1_1"), 5);
        assert_eq!(by_name("D1"), 6);
        assert_eq!(by_name("X1"), 8);
        assert_eq!(by_name("Y1"), 9);
        assert_eq!(by_name("A2"), 10);
        assert_eq!(by_name("B2"), 10);
        assert_eq!(by_name("C1_0"), 15);

        // Same but the revealed x₁ = 0 deviates: B₂ is parked.
        let s = scenario_of(&inst.cstn, &["c1_1"]);
        assert_eq!(table.row(&s).time(inst.tasks.b[1]), Some(15));
        // And with c₁¹ = 0 the commitment task D₁ is parked.
        let s = scenario_of(&inst.cstn, &["x1"]);
        assert_eq!(table.row(&s).time(inst.tasks.d[0]), Some(15));
    }

    #[test]
    fn witness_for_true_formula_is_viable_and_dynamic() {
        let phi = needs_one();
        assert_eq!(qbf_eval(&phi), Ok(true));
        let inst = reduce(&phi);
        let f = qbf_extract_existential(&phi).unwrap().unwrap();
        let table = tree_to_table(&inst.cstn, &witness_strategy(&inst, &f)).unwrap();
        assert_eq!(verify_viable(&inst.cstn, &table), Ok(()));
        assert_eq!(verify_dynamic(&inst.cstn, &table), Ok(()));
    }

    #[test]
    fn adversary_refutes_both_guesses() {
        let phi = copycat();
        assert_eq!(qbf_eval(&phi), Ok(false));
        let inst = reduce(&phi);
        let g = qbf_extract_universal(&phi).unwrap().unwrap();
        for f in ExistentialStrategy::enumerate(1) {
            let table = tree_to_table(&inst.cstn, &witness_strategy(&inst, &f)).unwrap();
            match adversary(&inst, &g, &table) {
                AdversaryOutcome::Violation { scenario, constraint_index } => {
                    // The violation is real: the labeled constraint applies
                    // and its bound is exceeded.
                    let c = &inst.cstn.constraints()[constraint_index];
                    assert!(c.label.holds_in(&scenario));
                    let row = table.row(&scenario);
                    let from = row.time(c.from).unwrap();
                    let to = row.time(c.to).unwrap();
                    assert!(to - from > c.bound_k);
                    // The environment copies the guess, so the run stays
                    // live and a clause constraint is what breaks.
                    assert_eq!(inst.annotations[constraint_index].role, Role::Clause(
                        if f.tables()[0][0] { 2 } else { 1 },
                    ));
                }
                AdversaryOutcome::GivesUp { .. } => panic!("adversary must find a violation"),
            }
        }
    }

    #[test]
    fn degenerate_zero_level_formula() {
        let phi = Q3SatFormula::new(0, vec![]).unwrap();
        let inst = reduce(&phi);
        assert_eq!(inst.cstn.num_tasks(), 2);
        assert_eq!(inst.cstn.num_props(), 0);
        let f = ExistentialStrategy::from_tables(vec![]).unwrap();
        let table = tree_to_table(&inst.cstn, &witness_strategy(&inst, &f)).unwrap();
        assert_eq!(verify_viable(&inst.cstn, &table), Ok(()));
        assert_eq!(verify_dynamic(&inst.cstn, &table), Ok(()));
    }

    #[test]
    fn constraint_descriptions_show_original_orientation() {
        let inst = reduce(&copycat());
        assert_eq!(inst.describe_constraint(0), "gadget 1 activation: B1 <= A1 + 0");
        assert_eq!(inst.describe_constraint(2), "gadget 1 D-late: D1 >= A1 + 3");
        assert_eq!(inst.describe_constraint(8), "gadget 2 clause 1: B2 >= A2 + 2");
    }
}
