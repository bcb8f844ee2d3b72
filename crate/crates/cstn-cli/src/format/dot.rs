//! Graphviz rendering of compiled formula networks.

use std::fmt::Write;

use cstn_core::network::TaskId;
use cstn_core::reduction::ReductionInstance;

use super::network::format_label;

/// Renders the network as a `dot` digraph: one box per task, grouped into a
/// cluster per quantifier stage, and one edge per constraint `to − from ≤ k`
/// drawn from `from` to `to` with its bound, label, and role.
pub fn reduction_dot(inst: &ReductionInstance) -> String {
    let cstn = &inst.cstn;
    let mut out = String::new();
    let name = |t: TaskId| cstn.task_name(t);

    out.push_str("digraph reduction {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=box];\n");
    for i in 0..inst.levels {
        let _ = writeln!(out, "  subgraph cluster_stage{} {{", i + 1);
        let _ = writeln!(out, "    label=\"stage {}\";", i + 1);
        let t = &inst.tasks;
        for task in [t.a[i], t.b[i], t.c0[i], t.c1[i], t.d[i], t.x[i], t.y[i]] {
            let _ = writeln!(out, "    {};", name(task));
        }
        out.push_str("  }\n");
    }
    out.push_str("  subgraph cluster_final {\n    label=\"final\";\n");
    let _ = writeln!(out, "    {};", name(inst.tasks.a[inst.levels]));
    let _ = writeln!(out, "    {};", name(inst.tasks.b[inst.levels]));
    out.push_str("  }\n");

    for (index, c) in cstn.constraints().iter().enumerate() {
        let mut text = format!("<= {}", c.bound_k);
        if !c.label.is_empty() {
            let _ = write!(text, " [{}]", format_label(cstn, &c.label));
        }
        let _ = write!(text, "\\n{}", inst.annotations[index]);
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}\"];",
            name(c.from),
            name(c.to),
            text
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cstn_core::qbf::{QLit, QVar, Q3SatFormula};
    use cstn_core::reduction::reduce;

    #[test]
    fn renders_every_task_and_constraint() {
        let x1 = QVar::Existential(1);
        let phi = Q3SatFormula::new(
            1,
            vec![[QLit::pos(x1), QLit::pos(x1), QLit::pos(x1)]],
        )
        .unwrap();
        let inst = reduce(&phi);
        let dot = reduction_dot(&inst);

        assert!(dot.starts_with("digraph reduction {"));
        assert!(dot.ends_with("}\n"));
        assert_eq!(dot.matches("subgraph cluster_").count(), 2);
        for t in inst.cstn.tasks() {
            assert!(dot.contains(&format!("    {};", inst.cstn.task_name(t))));
        }
        // One edge line per constraint.
        assert_eq!(
            dot.matches(" -> ").count(),
            inst.cstn.constraints().len()
        );
        assert!(dot.contains("activation"));
        assert!(dot.contains("[c1_0,c1_1]"));
    }
}
