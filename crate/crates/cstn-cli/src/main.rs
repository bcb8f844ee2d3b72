//! `cstn` — decide, compile, and verify conditional temporal networks.
//!
//! Exit codes: `check` returns 0 when controllable and 1 when not; `verify`
//! returns 0 when the strategy meets both contracts and 1 when a witness is
//! found; `qbf` returns 0 when the formula is true and 1 when false. Every
//! command returns 2 on malformed input or any other error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use cstn_core::network::Cstn;
use cstn_core::qbf::{qbf_eval, qbf_extract_existential, qbf_extract_universal};
use cstn_core::reduction::reduce;
use cstn_core::scenario::Scenario;
use cstn_core::solver::{discretize, DcSolver, GridSpec, SolveOptions};
use cstn_core::strategy::{tree_to_table, verify_dynamic, verify_viable};

use cstn_cli::format::dot::reduction_dot;
use cstn_cli::format::network::{format_constraint, parse_network, print_network_annotated};
use cstn_cli::format::q3sat::parse_q3sat;
use cstn_cli::format::strategy::{parse_strategy, print_strategy};

/// Conditional temporal network tools.
#[derive(Parser)]
#[command(name = "cstn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide dynamic controllability of a network file.
    Check {
        /// Network file.
        network: PathBuf,
        /// Print the found strategy when controllable.
        #[arg(long)]
        extract: bool,
        /// Run the plain recursion without the sound prunings (same
        /// verdict, usually slower).
        #[arg(long)]
        no_prune: bool,
        /// Restrict decision times to these ascending grid indices (at the
        /// network's discretization resolution) instead of the full grid.
        /// A `true` verdict remains conclusive; a `false` one only rules
        /// out strategies on the listed points.
        #[arg(long, value_delimiter = ',', value_name = "IX,IX,...")]
        grid: Option<Vec<i64>>,
    },
    /// Compile a quantified formula into an equivalent network.
    Reduce {
        /// Formula file.
        formula: PathBuf,
        /// Write the network here instead of stdout.
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
        /// Also write a Graphviz rendering of the network.
        #[arg(long, value_name = "FILE")]
        graph: Option<PathBuf>,
    },
    /// Check a strategy file against a network's execution contracts.
    Verify {
        /// Network file.
        network: PathBuf,
        /// Strategy file.
        strategy: PathBuf,
    },
    /// Evaluate a quantified formula.
    Qbf {
        /// Formula file.
        formula: PathBuf,
        /// Print the winning decision tables of the existential player
        /// when the formula is true.
        #[arg(long)]
        extract_existential: bool,
        /// Print the winning decision tables of the universal player when
        /// the formula is false.
        #[arg(long)]
        extract_universal: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { network, extract, no_prune, grid } => {
            check(&network, extract, no_prune, grid.as_deref())
        }
        Command::Reduce { formula, output, graph } => {
            reduce_formula(&formula, output.as_deref(), graph.as_deref())
        }
        Command::Verify { network, strategy } => verify(&network, &strategy),
        Command::Qbf { formula, extract_existential, extract_universal } => {
            qbf(&formula, extract_existential, extract_universal)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_network(path: &Path) -> Result<Cstn> {
    parse_network(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn check(network: &Path, extract: bool, no_prune: bool, grid: Option<&[i64]>) -> Result<u8> {
    let cstn = load_network(network)?;
    let params = discretize(&cstn);
    if let Some(points) = grid {
        for (i, &p) in points.iter().enumerate() {
            if p < 1 {
                bail!("grid index {p} is below 1");
            }
            if i > 0 && p <= points[i - 1] {
                bail!("grid indices must be strictly increasing ({p} follows {})", points[i - 1]);
            }
        }
    }

    let mut solver = DcSolver::new(&cstn, params.steps_per_unit, SolveOptions { prune: !no_prune });
    let started = Instant::now();
    let strategy = match grid {
        Some(points) => solver.search(GridSpec::Points(points)),
        None => solver.search(GridSpec::Full { horizon: params.horizon }),
    };
    let elapsed = started.elapsed();

    println!("controllable: {}", strategy.is_some());
    println!("unit: {}", params.unit);
    println!("bound: {}", params.max_bound);
    println!("resolution: {}", params.steps_per_unit);
    println!("step: {}", params.step);
    println!("horizon: {}", params.horizon);
    if let Some(points) = grid {
        println!("grid-points: {}", points.len());
    }
    println!("nodes-expanded: {}", solver.stats().nodes);
    println!("max-depth: {}", solver.stats().max_depth);
    println!("elapsed-ms: {}", elapsed.as_millis());
    if extract {
        if let Some(tree) = &strategy {
            println!("strategy:");
            print!("{}", print_strategy(&cstn, tree));
        }
    }
    Ok(if strategy.is_some() { 0 } else { 1 })
}

fn reduce_formula(formula: &Path, output: Option<&Path>, graph: Option<&Path>) -> Result<u8> {
    let phi = parse_q3sat(&read(formula)?)
        .with_context(|| format!("parsing {}", formula.display()))?;
    let inst = reduce(&phi);

    let mut header = vec![format!(
        "compiled from a {}-level quantified formula with {} clauses",
        phi.levels(),
        phi.clauses().len()
    )];
    for &j in &inst.omitted_clauses {
        header.push(format!(
            "clause {j} is tautological; its violation constraint is omitted"
        ));
    }
    let notes: Vec<String> = (0..inst.cstn.constraints().len())
        .map(|i| inst.describe_constraint(i))
        .collect();
    let doc = print_network_annotated(&inst.cstn, &header, &notes);

    match output {
        Some(path) => fs::write(path, &doc)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{doc}"),
    }
    if let Some(path) = graph {
        fs::write(path, reduction_dot(&inst))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn format_scenario(cstn: &Cstn, s: &Scenario) -> String {
    if cstn.num_props() == 0 {
        return "{}".to_string();
    }
    cstn.props()
        .map(|p| format!("{}={}", cstn.prop_name(p), s.value(p) as u8))
        .collect::<Vec<_>>()
        .join(",")
}

fn verify(network: &Path, strategy: &Path) -> Result<u8> {
    let cstn = load_network(network)?;
    let tree = parse_strategy(&read(strategy)?, &cstn)
        .with_context(|| format!("parsing {}", strategy.display()))?;
    let table = tree_to_table(&cstn, &tree)
        .map_err(|e| anyhow!("strategy does not fit the network: {e}"))?;

    let mut ok = true;
    match verify_viable(&cstn, &table) {
        Ok(()) => println!("viable: ok"),
        Err(w) => {
            ok = false;
            println!(
                "viable: scenario {} violates {}",
                format_scenario(&cstn, &w.scenario),
                format_constraint(&cstn, w.constraint_index)
            );
        }
    }
    match verify_dynamic(&cstn, &table) {
        Ok(()) => println!("dynamic: ok"),
        Err(w) => {
            ok = false;
            println!(
                "dynamic: task {} at {} differs between equal-history scenarios {} and {}",
                cstn.task_name(w.task),
                w.at,
                format_scenario(&cstn, &w.scenario),
                format_scenario(&cstn, &w.other)
            );
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn bits(table: &[bool]) -> String {
    table.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn qbf(formula: &Path, extract_existential: bool, extract_universal: bool) -> Result<u8> {
    let phi = parse_q3sat(&read(formula)?)
        .with_context(|| format!("parsing {}", formula.display()))?;
    let value = qbf_eval(&phi).map_err(|e| anyhow!("{e}"))?;
    println!("value: {value}");

    if extract_existential {
        match qbf_extract_existential(&phi).map_err(|e| anyhow!("{e}"))? {
            Some(f) => {
                for (i, table) in f.tables().iter().enumerate() {
                    println!("f{}: {}", i + 1, bits(table));
                }
            }
            None => println!("f: none"),
        }
    }
    if extract_universal {
        match qbf_extract_universal(&phi).map_err(|e| anyhow!("{e}"))? {
            Some(g) => {
                for (i, table) in g.tables().iter().enumerate() {
                    println!("g{}: {}", i + 1, bits(table));
                }
            }
            None => println!("g: none"),
        }
    }
    Ok(if value { 0 } else { 1 })
}
