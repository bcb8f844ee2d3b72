//! Conditional simple temporal networks (CSTNs) and their dynamic controllability.
//!
//! A CSTN extends a simple temporal network (tasks plus difference constraints
//! `Y - X <= bound`) with propositional variables. Tasks and constraints carry
//! *labels* (conjunctions of literals), and designated *observation tasks*
//! reveal the value of one proposition at the moment they are executed. The
//! controller must schedule every task relevant to the real scenario while
//! learning that scenario only through observations; a network is *dynamically
//! controllable* when a viable strategy exists whose decisions depend only on
//! what has been observed so far.
//!
//! The crate is organised around that problem:
//!
//! * [`label`], [`scenario`], [`schedule`], [`network`] — the data model:
//!   labels, (partial) scenarios, grid schedules, and the validated [`Cstn`]
//!   with its scenario projections.
//! * [`stn`] — consistency and feasibility for plain STNs (the projections).
//! * [`strategy`] — execution strategies as decision trees or dense
//!   scenario tables, with definitional checks for *viable* and *dynamic*.
//! * [`solver`] — the decision procedure: time-grid discretization and a
//!   depth-bounded search over configurations, with strategy extraction.
//! * [`qbf`] — quantified 3-SAT game evaluation and winning-strategy
//!   extraction, the ground truth for the hardness construction.
//! * [`reduction`] — the Q3SAT-to-CSTN construction together with its
//!   witness strategy builder and the nature-side adversary.
//!
//! All arithmetic is exact: times are integer grid indices and the grid unit
//! is a rational. The crate is `no_std` (with `alloc`); IO and file formats
//! live in the companion CLI crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod label;
pub mod network;
pub mod qbf;
pub mod reduction;
pub mod scenario;
pub mod schedule;
pub mod solver;
pub mod stn;
pub mod strategy;

/// Exact rational used for the grid unit `w` and the step `mu`.
pub type Rational = num_rational::Ratio<i64>;

pub use label::{Label, LabelError, PropId, Truth};
pub use network::{BuildError, Cstn, CstnBuilder, LabeledConstraint, TaskId, Wd1Violation};
pub use qbf::{
    qbf_eval, qbf_extract_existential, qbf_extract_universal, ExistentialStrategy, Q3SatFormula,
    QLit, QVar, UniversalStrategy,
};
pub use reduction::{adversary, reduce, witness_strategy, AdversaryOutcome, ReductionInstance};
pub use scenario::{PartialScenario, Scenario};
pub use schedule::{GridIx, Schedule};
pub use solver::{
    dc, dc_bounded, dc_extract, discretize, is_terminal_and_dc, Configuration,
    DiscretizationParams, DcSolver, GridSpec, SearchStats, SolveOptions, TerminalStatus,
};
pub use stn::{Stn, StnConstraint};
pub use strategy::{
    check_single_flip, history, tree_to_table, verify_dynamic, verify_viable, TableStrategy,
    TreeNode, TreeStrategy,
};
