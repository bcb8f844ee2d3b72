//! Propositions and labels.
//!
//! A label is a conjunction of literals over distinct propositions; the empty
//! label holds in every scenario. Labels evaluate to a three-valued result
//! against partial scenarios: a literal on an unassigned proposition leaves
//! the label undetermined unless another literal already contradicts the
//! assignment.

use alloc::vec::Vec;
use core::fmt;

use crate::scenario::{PartialScenario, Scenario};

/// Index of a proposition within its owning network (dense, starting at 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropId(pub u32);

impl PropId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PropId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Three-valued outcome of evaluating a label against a partial scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Undetermined,
}

/// Error raised when literal lists mention a proposition twice with opposite
/// polarity. Same-polarity repeats are collapsed silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelError {
    pub prop: PropId,
}

impl fmt::Display for LabelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "label contains both {} and !{}", self.prop, self.prop)
    }
}

/// A conjunction of literals, at most one per proposition, kept sorted by
/// proposition so equal labels compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Label {
    /// `(prop, polarity)`, sorted by prop; `true` means the positive literal.
    lits: Vec<(PropId, bool)>,
}

impl Label {
    /// The empty (always-true) label.
    pub fn empty() -> Self {
        Label { lits: Vec::new() }
    }

    /// Builds a label from literals, rejecting complementary pairs.
    pub fn new(literals: impl IntoIterator<Item = (PropId, bool)>) -> Result<Self, LabelError> {
        let mut lits: Vec<(PropId, bool)> = Vec::new();
        for (p, pol) in literals {
            match lits.iter().find(|(q, _)| *q == p) {
                Some(&(_, existing)) if existing == pol => {}
                Some(&(_, _)) => return Err(LabelError { prop: p }),
                None => lits.push((p, pol)),
            }
        }
        lits.sort_unstable();
        Ok(Label { lits })
    }

    /// Single positive literal.
    pub fn pos(p: PropId) -> Self {
        Label { lits: alloc::vec![(p, true)] }
    }

    /// Single negative literal.
    pub fn neg(p: PropId) -> Self {
        Label { lits: alloc::vec![(p, false)] }
    }

    /// Conjunction of two labels; fails on complementary literals.
    pub fn and(&self, other: &Label) -> Result<Label, LabelError> {
        Label::new(self.lits.iter().chain(other.lits.iter()).copied())
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    /// Literals in canonical (proposition-sorted) order.
    pub fn literals(&self) -> impl Iterator<Item = (PropId, bool)> + '_ {
        self.lits.iter().copied()
    }

    pub fn polarity_of(&self, p: PropId) -> Option<bool> {
        self.lits.iter().find(|(q, _)| *q == p).map(|&(_, pol)| pol)
    }

    /// Evaluates the label under a total scenario.
    pub fn holds_in(&self, s: &Scenario) -> bool {
        self.lits.iter().all(|&(p, pol)| s.value(p) == pol)
    }

    /// Three-valued evaluation under a partial scenario: `False` as soon as
    /// one assigned literal contradicts, `Undetermined` while any literal is
    /// unassigned, `True` when all are assigned and satisfied. The empty
    /// label is always `True`.
    pub fn eval(&self, h: &PartialScenario) -> Truth {
        let mut undetermined = false;
        for &(p, pol) in &self.lits {
            match h.value(p) {
                Some(v) if v == pol => {}
                Some(_) => return Truth::False,
                None => undetermined = true,
            }
        }
        if undetermined {
            Truth::Undetermined
        } else {
            Truth::True
        }
    }

    /// Conjunction-of-literals implication: every literal of `other` appears
    /// in `self`.
    pub fn implies(&self, other: &Label) -> bool {
        other
            .lits
            .iter()
            .all(|&(p, pol)| self.polarity_of(p) == Some(pol))
    }
}

/// Evaluates a label against a scenario or partial scenario.
///
/// The total-scenario case never yields [`Truth::Undetermined`]; for partial
/// scenarios the result is monotone under completion.
pub fn label_holds(h: &PartialScenario, label: &Label) -> Truth {
    label.eval(h)
}
