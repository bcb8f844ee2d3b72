//! Helpers shared by the integration suites: a seeded generator of tiny
//! observation networks, a self-contained strategy-space search used as a
//! reference verdict, random complete decision trees, permutation clones,
//! and the formula pools the acceptance tests revisit.

// Each test target compiles its own copy of this module and uses a subset.
#![allow(dead_code)]

use cstn_core::label::{Label, PropId};
use cstn_core::network::{Cstn, CstnBuilder, TaskId};
use cstn_core::qbf::{Clause, QLit, QVar, Q3SatFormula};
use cstn_core::scenario::Scenario;
use cstn_core::schedule::GridIx;
use cstn_core::strategy::{observed_props, TreeNode, TreeStrategy};
use itertools::Itertools;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// A seeded random network with at most 3 unlabeled tasks, at most one
/// observed proposition, and up to 3 constraints with |k| ≤ 2 (self-loops
/// allowed, so infeasible projections occur).
///
/// Small enough that [`oracle_dc`] stays exhaustive, yet rich enough to
/// exercise observation branching, labeled constraints, and dead ends.
pub fn micro(seed: u64) -> Cstn {
    let mut rng = StdRng::seed_from_u64(seed);
    let num_tasks = rng.gen_range(1..=3);
    let mut b = CstnBuilder::new();
    let tasks: Vec<TaskId> = (0..num_tasks).map(|i| b.task(&format!("T{i}"))).collect();
    let prop = if rng.gen_bool(0.6) {
        let p = b.prop("p");
        b.observes(p, tasks[rng.gen_range(0..num_tasks)]);
        Some(p)
    } else {
        None
    };
    for _ in 0..rng.gen_range(0..=3) {
        let to = tasks[rng.gen_range(0..num_tasks)];
        let from = tasks[rng.gen_range(0..num_tasks)];
        let bound = rng.gen_range(-2..=2);
        let label = match prop {
            Some(p) => match rng.gen_range(0..3) {
                0 => Label::empty(),
                1 => Label::pos(p),
                _ => Label::neg(p),
            },
            None => Label::empty(),
        };
        b.constraint(to, from, bound, label);
    }
    b.build().expect("unlabeled tasks cannot break label coherence")
}

/// Decides whether a dynamic viable strategy over the decision times
/// `points` exists, by exhausting the strategy space itself.
///
/// The search walks every decision tree over `points`: at each information
/// state it tries every (later time, nonempty subset of unexecuted tasks)
/// move, splits the scenario set on the propositions the chosen tasks
/// observe, and requires every branch to win. Feasibility is judged only at
/// complete assignments, with local constraint arithmetic, so none of the
/// production solver's terminal classification or pruning is involved.
/// Only handles networks whose tasks are all unlabeled (every task must run
/// in every scenario).
pub fn oracle_dc(cstn: &Cstn, steps_per_unit: i64, points: &[GridIx]) -> bool {
    assert!(
        cstn.tasks().all(|t| cstn.task_label(t).is_empty()),
        "reference search only covers networks with unlabeled tasks"
    );
    let scenarios: Vec<Scenario> = cstn.scenarios().collect();
    let mut times = vec![None; cstn.num_tasks()];
    oracle_wins(cstn, steps_per_unit, points, 0, &mut times, &scenarios)
}

fn oracle_wins(
    cstn: &Cstn,
    steps: i64,
    points: &[GridIx],
    after: GridIx,
    times: &mut Vec<Option<GridIx>>,
    scenarios: &[Scenario],
) -> bool {
    let unexecuted: Vec<TaskId> = cstn
        .tasks()
        .filter(|t| times[t.index()].is_none())
        .collect();
    if unexecuted.is_empty() {
        return scenarios
            .iter()
            .all(|s| oracle_feasible(cstn, steps, times, s));
    }
    for &at in points.iter().filter(|&&p| p > after) {
        for mask in 1usize..1 << unexecuted.len() {
            let chosen: Vec<TaskId> = unexecuted
                .iter()
                .enumerate()
                .filter(|&(j, _)| mask >> j & 1 == 1)
                .map(|(_, &t)| t)
                .collect();
            for &t in &chosen {
                times[t.index()] = Some(at);
            }
            let won = oracle_split(cstn, &chosen, scenarios)
                .iter()
                .all(|group| oracle_wins(cstn, steps, points, at, times, group));
            for &t in &chosen {
                times[t.index()] = None;
            }
            if won {
                return true;
            }
        }
    }
    false
}

/// Groups scenarios by their values on the propositions `chosen` observes;
/// moves after this point may differ between groups but not within one.
fn oracle_split(cstn: &Cstn, chosen: &[TaskId], scenarios: &[Scenario]) -> Vec<Vec<Scenario>> {
    let mut observed: Vec<PropId> = chosen
        .iter()
        .filter_map(|&t| cstn.observed_prop(t))
        .collect();
    observed.sort_unstable();
    let mut groups = vec![Vec::new(); 1 << observed.len()];
    for s in scenarios {
        let ix = observed
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &p)| acc | (usize::from(s.value(p)) << j));
        groups[ix].push(s.clone());
    }
    groups.retain(|g| !g.is_empty());
    groups
}

fn oracle_feasible(cstn: &Cstn, steps: i64, times: &[Option<GridIx>], s: &Scenario) -> bool {
    cstn.constraints().iter().all(|c| {
        let applies = c.label.literals().all(|(p, v)| s.value(p) == v);
        !applies
            || times[c.to.index()].unwrap() - times[c.from.index()].unwrap()
                <= c.bound_k * steps
    })
}

/// Rebuilds a network with tasks and propositions declared in a permuted
/// order; `task_order[i]` / `prop_order[i]` give the old index declared
/// i-th. Constraint order is preserved, endpoints and literals remapped.
pub fn permuted_clone(cstn: &Cstn, task_order: &[usize], prop_order: &[usize]) -> Cstn {
    assert_eq!(task_order.len(), cstn.num_tasks());
    assert_eq!(prop_order.len(), cstn.num_props());
    let mut b = CstnBuilder::with_unit(cstn.unit());
    let mut new_prop = vec![PropId(0); cstn.num_props()];
    for &old in prop_order {
        new_prop[old] = b.prop(cstn.prop_name(PropId(old as u32)));
    }
    let remap = |label: &Label| -> Label {
        Label::new(label.literals().map(|(p, v)| (new_prop[p.index()], v)))
            .expect("renaming propositions preserves label consistency")
    };
    let mut new_task = vec![TaskId(0); cstn.num_tasks()];
    for &old in task_order {
        let old_id = TaskId(old as u32);
        new_task[old] = b.task_labeled(cstn.task_name(old_id), remap(cstn.task_label(old_id)));
    }
    for p in cstn.props() {
        b.observes(new_prop[p.index()], new_task[cstn.observer(p).index()]);
    }
    for c in cstn.constraints() {
        b.constraint(
            new_task[c.to.index()],
            new_task[c.from.index()],
            c.bound_k,
            remap(&c.label),
        );
    }
    b.build().expect("a permuted clone satisfies the same invariants")
}

/// A structurally valid random decision tree that executes every task along
/// every branch (times advance by 1 or 2 per action, groupings and
/// post-observation continuations are random). The induced tables usually
/// violate constraints, but they always exist and are dynamic.
pub fn random_complete_tree(cstn: &Cstn, rng: &mut StdRng) -> TreeStrategy {
    let tasks: Vec<TaskId> = cstn.tasks().collect();
    TreeStrategy {
        resolution: 1,
        root: random_node(cstn, rng, 0, &tasks),
    }
}

fn random_node(cstn: &Cstn, rng: &mut StdRng, after: GridIx, remaining: &[TaskId]) -> TreeNode {
    if remaining.is_empty() {
        return TreeNode::Terminal;
    }
    let at = after + rng.gen_range(1..=2);
    let mut pool = remaining.to_vec();
    pool.shuffle(rng);
    let take = rng.gen_range(1..=pool.len());
    let mut tasks = pool[..take].to_vec();
    tasks.sort_unstable();
    let rest = &pool[take..];
    let branches = 1usize << observed_props(cstn, &tasks).len();
    let children = (0..branches)
        .map(|_| random_node(cstn, rng, at, rest))
        .collect();
    TreeNode::Act { at, tasks, children }
}

/// The 20 distinct clauses over x₁, y₁ (multisets of three literals drawn
/// from four), in a fixed order.
fn one_level_clauses() -> Vec<Clause> {
    let lits = [
        QLit::pos(QVar::Existential(1)),
        QLit::neg(QVar::Existential(1)),
        QLit::pos(QVar::Universal(1)),
        QLit::neg(QVar::Universal(1)),
    ];
    lits.iter()
        .copied()
        .combinations_with_replacement(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect()
}

/// Every one-level formula with at most three clauses, counted as clause
/// multisets (clause order and literal order never affect the game value):
/// 1 + 20 + 210 + 1540 = 1771 formulas.
pub fn one_level_pool() -> Vec<Q3SatFormula> {
    let types = one_level_clauses();
    let mut pool = Vec::new();
    for m in 0..=3 {
        for combo in types.iter().cloned().combinations_with_replacement(m) {
            pool.push(Q3SatFormula::new(1, combo).expect("single-level literals"));
        }
    }
    pool
}

/// A random formula over `levels` quantifier pairs with 1–8 clauses of
/// uniformly drawn literals.
pub fn random_formula(levels: usize, rng: &mut StdRng) -> Q3SatFormula {
    random_formula_with(levels, 8, rng)
}

/// As [`random_formula`] with an explicit cap on the clause count.
pub fn random_formula_with(levels: usize, max_clauses: usize, rng: &mut StdRng) -> Q3SatFormula {
    let m = rng.gen_range(1..=max_clauses);
    let clauses = (0..m)
        .map(|_| {
            [(); 3].map(|_| {
                let level = rng.gen_range(1..=levels);
                let var = if rng.gen_bool(0.5) {
                    QVar::Existential(level)
                } else {
                    QVar::Universal(level)
                };
                if rng.gen_bool(0.5) {
                    QLit::pos(var)
                } else {
                    QLit::neg(var)
                }
            })
        })
        .collect();
    Q3SatFormula::new(levels, clauses).expect("literals drawn within the level count")
}

/// A deterministic pool of `count` two-level formulas. Every suite that
/// revisits "the two-level pool" calls this with the same count, so the
/// instances line up across criteria.
pub fn two_level_pool(count: usize) -> Vec<Q3SatFormula> {
    let mut rng = StdRng::seed_from_u64(0x51A7);
    (0..count).map(|_| random_formula(2, &mut rng)).collect()
}
