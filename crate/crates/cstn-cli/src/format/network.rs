//! The network file format.
//!
//! ```text
//! # A reactive two-task example.
//! unit 1
//! task O
//! task A
//! observes p O
//! constraint A - O <= 1 label p
//! constraint O - A <= -2 label !p
//! ```
//!
//! One optional `unit` line (integer or `numer/denom`, default 1). Task
//! indices follow `task` line order and proposition indices follow
//! `observes` line order, so printing and reparsing reproduces an equal
//! network. References may point forward: the file is resolved as a whole.

use std::collections::BTreeMap;
use std::fmt::Write;

use cstn_core::label::Label;
use cstn_core::network::{BuildError, Cstn, CstnBuilder};
use cstn_core::Rational;

use super::{tokenize, valid_name, FormatError};

/// A literal as written: proposition name and polarity.
type RawLiteral = (String, bool);

struct RawTask {
    line: usize,
    name: String,
    literals: Vec<RawLiteral>,
}

struct RawObserves {
    line: usize,
    prop: String,
    task: String,
}

struct RawConstraint {
    line: usize,
    to: String,
    from: String,
    bound_k: i64,
    literals: Vec<RawLiteral>,
}

/// Parses the network format.
pub fn parse_network(text: &str) -> Result<Cstn, FormatError> {
    let mut unit: Option<(usize, Rational)> = None;
    let mut tasks: Vec<RawTask> = Vec::new();
    let mut observes: Vec<RawObserves> = Vec::new();
    let mut constraints: Vec<RawConstraint> = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let tokens = tokenize(raw);
        let Some(&head) = tokens.first() else {
            continue;
        };
        match head {
            "unit" => {
                if unit.is_some() {
                    return Err(FormatError::new(line, "duplicate unit line"));
                }
                let [_, value] = tokens[..] else {
                    return Err(FormatError::new(line, "expected: unit <rational>"));
                };
                let value: Rational = value.parse().map_err(|_| {
                    FormatError::new(line, format!("{value:?} is not a rational number"))
                })?;
                if value <= Rational::from_integer(0) {
                    return Err(FormatError::new(line, "the unit must be positive"));
                }
                unit = Some((line, value));
            }
            "task" => {
                let (name, literals) = match tokens[..] {
                    [_, name] => (name, Vec::new()),
                    [_, name, "label", lits] => (name, parse_literals(line, lits)?),
                    _ => {
                        return Err(FormatError::new(
                            line,
                            "expected: task <name> [label <lit[,lit…]>]",
                        ))
                    }
                };
                check_name(line, name)?;
                tasks.push(RawTask {
                    line,
                    name: name.to_string(),
                    literals,
                });
            }
            "observes" => {
                let [_, prop, task] = tokens[..] else {
                    return Err(FormatError::new(line, "expected: observes <prop> <task>"));
                };
                check_name(line, prop)?;
                check_name(line, task)?;
                observes.push(RawObserves {
                    line,
                    prop: prop.to_string(),
                    task: task.to_string(),
                });
            }
            "constraint" => {
                let (to, from, bound, literals) = match tokens[..] {
                    [_, to, "-", from, "<=", bound] => (to, from, bound, Vec::new()),
                    [_, to, "-", from, "<=", bound, "label", lits] => {
                        (to, from, bound, parse_literals(line, lits)?)
                    }
                    _ => {
                        return Err(FormatError::new(
                            line,
                            "expected: constraint <Y> - <X> <= <k> [label <lit[,lit…]>]",
                        ))
                    }
                };
                check_name(line, to)?;
                check_name(line, from)?;
                let bound_k: i64 = bound.parse().map_err(|_| {
                    FormatError::new(
                        line,
                        format!("bound {bound:?} must be an integer count of units"),
                    )
                })?;
                constraints.push(RawConstraint {
                    line,
                    to: to.to_string(),
                    from: from.to_string(),
                    bound_k,
                    literals,
                });
            }
            other => {
                return Err(FormatError::new(
                    line,
                    format!("unknown directive {other:?}"),
                ));
            }
        }
    }

    resolve(unit, tasks, observes, constraints)
}

/// Wires the collected records into a network, attributing every failure to
/// the line that caused it.
fn resolve(
    unit: Option<(usize, Rational)>,
    tasks: Vec<RawTask>,
    observes: Vec<RawObserves>,
    constraints: Vec<RawConstraint>,
) -> Result<Cstn, FormatError> {
    let unit = unit.map_or_else(|| Rational::from_integer(1), |(_, u)| u);
    let mut builder = CstnBuilder::with_unit(unit);

    let mut prop_ids = BTreeMap::new();
    for o in &observes {
        if prop_ids.contains_key(o.prop.as_str()) {
            return Err(FormatError::new(
                o.line,
                format!("proposition {:?} is observed twice", o.prop),
            ));
        }
        prop_ids.insert(o.prop.as_str(), builder.prop(&o.prop));
    }

    let mut task_ids = BTreeMap::new();
    for t in &tasks {
        if task_ids.contains_key(t.name.as_str()) {
            return Err(FormatError::new(
                t.line,
                format!("duplicate task {:?}", t.name),
            ));
        }
        let label = build_label(t.line, &t.literals, &prop_ids)?;
        task_ids.insert(t.name.as_str(), builder.task_labeled(&t.name, label));
    }

    let mut observers = BTreeMap::new();
    for o in &observes {
        let Some(&task) = task_ids.get(o.task.as_str()) else {
            return Err(FormatError::new(
                o.line,
                format!("unknown task {:?}", o.task),
            ));
        };
        if let Some(prev) = observers.insert(task, &o.prop) {
            return Err(FormatError::new(
                o.line,
                format!(
                    "task {:?} already observes {:?} and cannot also observe {:?}",
                    o.task, prev, o.prop
                ),
            ));
        }
        builder.observes(prop_ids[o.prop.as_str()], task);
    }

    for c in &constraints {
        let resolve_task = |name: &str| {
            task_ids.get(name).copied().ok_or_else(|| {
                FormatError::new(c.line, format!("unknown task {name:?}"))
            })
        };
        let to = resolve_task(&c.to)?;
        let from = resolve_task(&c.from)?;
        let label = build_label(c.line, &c.literals, &prop_ids)?;
        builder.constraint(to, from, c.bound_k, label);
    }

    if let Err(violations) = builder.wd1_report() {
        let index = violations[0].constraint_index;
        return Err(FormatError::new(
            constraints[index].line,
            format!(
                "label coherence: the constraint label must imply the labels \
                 of both endpoints ({})",
                violations[0]
            ),
        ));
    }

    // Every failure mode was attributed to a line above; keep a net anyway.
    builder
        .build()
        .map_err(|e: BuildError| FormatError::new(1, e.to_string()))
}

fn check_name(line: usize, name: &str) -> Result<(), FormatError> {
    if valid_name(name) {
        Ok(())
    } else {
        Err(FormatError::new(
            line,
            format!("name {name:?} must match [A-Za-z0-9_]+"),
        ))
    }
}

/// Parses `p,!q` into raw literals.
fn parse_literals(line: usize, text: &str) -> Result<Vec<RawLiteral>, FormatError> {
    text.split(',')
        .map(|part| {
            let (name, positive) = match part.strip_prefix('!') {
                Some(rest) => (rest, false),
                None => (part, true),
            };
            check_name(line, name)?;
            Ok((name.to_string(), positive))
        })
        .collect()
}

fn build_label(
    line: usize,
    literals: &[RawLiteral],
    prop_ids: &BTreeMap<&str, cstn_core::label::PropId>,
) -> Result<Label, FormatError> {
    let resolved = literals
        .iter()
        .map(|(name, positive)| {
            prop_ids.get(name.as_str()).map(|&p| (p, *positive)).ok_or_else(|| {
                FormatError::new(
                    line,
                    format!("unknown proposition {name:?} (no observes line declares it)"),
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Label::new(resolved).map_err(|e| FormatError::new(line, e.to_string()))
}

/// Renders a label as it appears in files (`p,!q`), canonical order.
pub fn format_label(cstn: &Cstn, label: &Label) -> String {
    label
        .literals()
        .map(|(p, positive)| {
            let name = cstn.prop_name(p);
            if positive {
                name.to_string()
            } else {
                format!("!{name}")
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Renders a constraint as it appears in files, without the trailing label.
pub fn format_constraint(cstn: &Cstn, index: usize) -> String {
    let c = &cstn.constraints()[index];
    format!(
        "constraint {} - {} <= {}",
        cstn.task_name(c.to),
        cstn.task_name(c.from),
        c.bound_k
    )
}

/// Prints the canonical network document; `parse_network` returns an equal
/// network.
pub fn print_network(cstn: &Cstn) -> String {
    let no_notes: Vec<String> = Vec::new();
    print_network_annotated(cstn, &[], &no_notes)
}

/// As [`print_network`], with `#` header comments and one optional comment
/// line above each constraint (empty strings are skipped). Comments never
/// affect reparsing.
pub fn print_network_annotated(cstn: &Cstn, header: &[String], notes: &[String]) -> String {
    assert!(notes.is_empty() || notes.len() == cstn.constraints().len());
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "unit {}", cstn.unit());
    for t in cstn.tasks() {
        let label = cstn.task_label(t);
        if label.is_empty() {
            let _ = writeln!(out, "task {}", cstn.task_name(t));
        } else {
            let _ = writeln!(
                out,
                "task {} label {}",
                cstn.task_name(t),
                format_label(cstn, label)
            );
        }
    }
    for p in cstn.props() {
        let _ = writeln!(
            out,
            "observes {} {}",
            cstn.prop_name(p),
            cstn.task_name(cstn.observer(p))
        );
    }
    for (i, c) in cstn.constraints().iter().enumerate() {
        if let Some(note) = notes.get(i).filter(|n| !n.is_empty()) {
            let _ = writeln!(out, "# {note}");
        }
        let _ = write!(out, "{}", format_constraint(cstn, i));
        if c.label.is_empty() {
            let _ = writeln!(out);
        } else {
            let _ = writeln!(out, " label {}", format_label(cstn, &c.label));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cstn_core::label::PropId;
    use cstn_core::network::TaskId;

    const REACTIVE: &str = "\
# A reactive pair.
unit 1
task O
task A
observes p O
constraint A - O <= 1 label p
constraint O - A <= -2 label !p
";

    #[test]
    fn parses_the_reactive_example() {
        let net = parse_network(REACTIVE).unwrap();
        assert_eq!(net.num_tasks(), 2);
        assert_eq!(net.num_props(), 1);
        assert_eq!(net.constraints().len(), 2);
        assert_eq!(net.task_by_name("O"), Some(TaskId(0)));
        assert_eq!(net.observer(PropId(0)), TaskId(0));
        assert_eq!(net.constraints()[1].bound_k, -2);
    }

    #[test]
    fn round_trips_to_an_equal_network() {
        let net = parse_network(REACTIVE).unwrap();
        let printed = print_network(&net);
        assert_eq!(parse_network(&printed).unwrap(), net);
    }

    #[test]
    fn labels_may_reference_later_observes_lines() {
        // Propositions are numbered by observes order, not first mention.
        let text = "\
task A label q
task OP
task OQ
observes p OP
observes q OQ
constraint A - OP <= 1 label p,q
";
        let net = parse_network(text).unwrap();
        assert_eq!(net.prop_name(PropId(0)), "p");
        assert_eq!(net.prop_name(PropId(1)), "q");
        let reparsed = parse_network(&print_network(&net)).unwrap();
        assert_eq!(reparsed, net);
    }

    #[test]
    fn fractional_unit_round_trips() {
        let text = "unit 3/2\ntask A\n";
        let net = parse_network(text).unwrap();
        assert_eq!(net.unit(), Rational::new(3, 2));
        assert_eq!(parse_network(&print_network(&net)).unwrap(), net);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = parse_network("task A\nconstraint A - B <= 1\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("unknown task"));

        let err = parse_network("task A\nconstraint A - A <= 0.5\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("integer"));

        let err = parse_network("frobnicate\n").unwrap_err();
        assert_eq!(err.line, 1);

        let err = parse_network("unit 0\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("positive"));
    }

    #[test]
    fn label_coherence_failures_point_at_the_constraint() {
        let text = "\
task O
task A label p
observes p O
constraint A - O <= 1
";
        let err = parse_network(text).unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("label coherence"));
    }

    #[test]
    fn duplicate_declarations_rejected() {
        let err = parse_network("task A\ntask A\n").unwrap_err();
        assert_eq!(err.line, 2);

        let err = parse_network("task O\nobserves p O\nobserves p O\n").unwrap_err();
        assert_eq!(err.line, 3);

        let err = parse_network("task O\nobserves p O\nobserves q O\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("already observes"));
    }
}
