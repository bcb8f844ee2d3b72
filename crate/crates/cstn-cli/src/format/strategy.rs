//! The decision-tree strategy file format.
//!
//! ```text
//! scale 1
//! at 1 exec O
//! on p=0 {
//!   at 3 exec A
//!   terminal
//! }
//! on p=1 {
//!   at 2 exec A
//!   terminal
//! }
//! ```
//!
//! `scale` gives the number of grid steps per network unit. A node is either
//! `terminal` or `at <step> exec <task,...>`; after an action that observes
//! nothing its single continuation follows directly. An action that observes
//! propositions is followed by nested `on <prop>=<0|1> { ... }` blocks, the
//! outermost block ranging over the first observed proposition in declaration
//! order, always `=0` before `=1`.

use std::fmt::Write;

use cstn_core::network::Cstn;
use cstn_core::strategy::{observed_props, TreeNode, TreeStrategy};

use super::{tokenize, FormatError};

struct Cursor<'a> {
    items: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    end_line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Cursor<'a> {
        let items: Vec<_> = text
            .lines()
            .enumerate()
            .map(|(i, raw)| (i + 1, tokenize(raw)))
            .filter(|(_, toks)| !toks.is_empty())
            .collect();
        let end_line = text.lines().count().max(1);
        Cursor { items, pos: 0, end_line }
    }

    fn next(&mut self, expected: &str) -> Result<(usize, &[&'a str]), FormatError> {
        match self.items.get(self.pos) {
            Some((line, toks)) => {
                self.pos += 1;
                Ok((*line, toks))
            }
            None => Err(FormatError::new(
                self.end_line,
                format!("unexpected end of file; expected {expected}"),
            )),
        }
    }
}

/// Parses a strategy document against the network its task and proposition
/// names refer to.
pub fn parse_strategy(text: &str, cstn: &Cstn) -> Result<TreeStrategy, FormatError> {
    let mut cursor = Cursor::new(text);

    let (line, header) = cursor.next("a scale header")?;
    let resolution = match header {
        ["scale", v] => v
            .parse::<i64>()
            .ok()
            .filter(|&r| r >= 1)
            .ok_or_else(|| {
                FormatError::new(line, format!("scale {v:?} is not a positive integer"))
            })?,
        _ => {
            return Err(FormatError::new(
                line,
                "expected header: scale <steps-per-unit>",
            ))
        }
    };

    let root = parse_node(&mut cursor, cstn)?;
    if let Some((line, _)) = cursor.items.get(cursor.pos) {
        return Err(FormatError::new(*line, "unexpected content after the strategy"));
    }
    Ok(TreeStrategy { resolution, root })
}

fn parse_node(cursor: &mut Cursor<'_>, cstn: &Cstn) -> Result<TreeNode, FormatError> {
    let (line, toks) = cursor.next("a strategy node (`terminal` or `at ... exec ...`)")?;
    match toks {
        ["terminal"] => Ok(TreeNode::Terminal),
        ["at", step, "exec", names @ ..] if !names.is_empty() => {
            let at = step.parse::<i64>().map_err(|_| {
                FormatError::new(line, format!("step {step:?} is not an integer"))
            })?;
            // Commas may be followed by spaces; rejoin before splitting.
            let mut tasks = Vec::new();
            for name in names.concat().split(',') {
                if name.is_empty() {
                    return Err(FormatError::new(line, "empty task name in exec list"));
                }
                let task = cstn.task_by_name(name).ok_or_else(|| {
                    FormatError::new(line, format!("unknown task {name:?}"))
                })?;
                tasks.push(task);
            }
            tasks.sort_unstable();
            let props = observed_props(cstn, &tasks);
            let children = parse_group(cursor, cstn, &props)?;
            Ok(TreeNode::Act { at, tasks, children })
        }
        _ => Err(FormatError::new(
            line,
            "expected `terminal` or `at <step> exec <task,...>`",
        )),
    }
}

/// Parses the continuation block for the observed propositions `props`,
/// returning children in outcome order (first proposition = least-significant
/// bit).
fn parse_group(
    cursor: &mut Cursor<'_>,
    cstn: &Cstn,
    props: &[cstn_core::label::PropId],
) -> Result<Vec<TreeNode>, FormatError> {
    let Some((&first, rest)) = props.split_first() else {
        return Ok(vec![parse_node(cursor, cstn)?]);
    };
    let name = cstn.prop_name(first);
    let mut blocks: Vec<Vec<TreeNode>> = Vec::with_capacity(2);
    for value in 0..2 {
        let want = format!("on {name}={value} {{");
        let (line, toks) = cursor.next(&format!("`{want}`"))?;
        let ok = matches!(toks, ["on", assign, "{"]
            if assign.split_once('=') == Some((name, if value == 0 { "0" } else { "1" })));
        if !ok {
            return Err(FormatError::new(
                line,
                format!("expected `{want}` (branches come in declaration order, 0 before 1)"),
            ));
        }
        blocks.push(parse_group(cursor, cstn, rest)?);
        let (line, toks) = cursor.next("`}`")?;
        if toks != ["}"] {
            return Err(FormatError::new(line, "expected `}` closing the branch"));
        }
    }
    let ones = blocks.pop().expect("two blocks were pushed");
    let zeros = blocks.pop().expect("two blocks were pushed");
    debug_assert_eq!(zeros.len(), ones.len());
    let mut out = Vec::with_capacity(zeros.len() * 2);
    for (z, o) in zeros.into_iter().zip(ones) {
        out.push(z);
        out.push(o);
    }
    Ok(out)
}

/// Prints the canonical strategy document; `parse_strategy` returns an equal
/// tree provided task lists were already sorted.
pub fn print_strategy(cstn: &Cstn, strategy: &TreeStrategy) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scale {}", strategy.resolution);
    write_node(&mut out, cstn, &strategy.root, 0);
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_node(out: &mut String, cstn: &Cstn, node: &TreeNode, depth: usize) {
    match node {
        TreeNode::Terminal => {
            indent(out, depth);
            out.push_str("terminal\n");
        }
        TreeNode::Act { at, tasks, children } => {
            indent(out, depth);
            let names: Vec<&str> = tasks.iter().map(|&t| cstn.task_name(t)).collect();
            let _ = writeln!(out, "at {} exec {}", at, names.join(","));
            let props = observed_props(cstn, tasks);
            let refs: Vec<&TreeNode> = children.iter().collect();
            write_group(out, cstn, &props, &refs, depth);
        }
    }
}

fn write_group(
    out: &mut String,
    cstn: &Cstn,
    props: &[cstn_core::label::PropId],
    children: &[&TreeNode],
    depth: usize,
) {
    let Some((&first, rest)) = props.split_first() else {
        write_node(out, cstn, children[0], depth);
        return;
    };
    for value in 0..2 {
        indent(out, depth);
        let _ = writeln!(out, "on {}={} {{", cstn.prop_name(first), value);
        let sub: Vec<&TreeNode> = children.iter().copied().skip(value).step_by(2).collect();
        write_group(out, cstn, rest, &sub, depth + 1);
        indent(out, depth);
        out.push_str("}\n");
    }
}
