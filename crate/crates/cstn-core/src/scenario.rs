//! Scenarios (total truth assignments) and partial scenarios.
//!
//! A scenario fixes every proposition of a network; scenarios are canonically
//! indexed by reading proposition 0 as the least-significant bit. A partial
//! scenario assigns a subset, and stands in for both observation histories
//! and the solver's record of observed values.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::label::PropId;

/// A total assignment over propositions `0..num_props`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scenario {
    values: Vec<bool>,
}

impl Scenario {
    pub fn new(values: Vec<bool>) -> Self {
        Scenario { values }
    }

    /// Scenario from the canonical bit encoding (prop 0 is the LSB).
    pub fn from_bits(num_props: usize, bits: u64) -> Self {
        debug_assert!(num_props <= 63);
        Scenario {
            values: (0..num_props).map(|i| bits >> i & 1 == 1).collect(),
        }
    }

    /// Canonical index of this scenario (prop 0 is the LSB).
    pub fn index(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &v)| acc | (usize::from(v) << i))
    }

    pub fn num_props(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, p: PropId) -> bool {
        self.values[p.index()]
    }

    /// The scenario with `p` set to `v` and everything else unchanged.
    /// Identity when `v == self.value(p)`; an involution when `v` flips.
    pub fn with(&self, p: PropId, v: bool) -> Scenario {
        let mut values = self.values.clone();
        values[p.index()] = v;
        Scenario { values }
    }

    /// True when this scenario completes `h` (agrees on its whole domain).
    pub fn completes(&self, h: &PartialScenario) -> bool {
        h.iter().all(|(p, v)| self.value(p) == v)
    }

    /// All scenarios over `num_props` propositions in canonical index order.
    pub fn all(num_props: usize) -> impl Iterator<Item = Scenario> {
        (0..1u64 << num_props).map(move |bits| Scenario::from_bits(num_props, bits))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.values {
            write!(f, "{}", u8::from(v))?;
        }
        Ok(())
    }
}

/// A partial assignment of propositions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialScenario {
    assignment: BTreeMap<PropId, bool>,
}

impl PartialScenario {
    pub fn new() -> Self {
        PartialScenario::default()
    }

    pub fn from_iter(pairs: impl IntoIterator<Item = (PropId, bool)>) -> Self {
        PartialScenario {
            assignment: pairs.into_iter().collect(),
        }
    }

    pub fn value(&self, p: PropId) -> Option<bool> {
        self.assignment.get(&p).copied()
    }

    pub fn assign(&mut self, p: PropId, v: bool) {
        self.assignment.insert(p, v);
    }

    pub fn contains(&self, p: PropId) -> bool {
        self.assignment.contains_key(&p)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Assigned `(prop, value)` pairs in proposition order.
    pub fn iter(&self) -> impl Iterator<Item = (PropId, bool)> + '_ {
        self.assignment.iter().map(|(&p, &v)| (p, v))
    }

    /// All completions of this partial scenario over `0..num_props`, in
    /// canonical scenario-index order.
    pub fn completions(&self, num_props: usize) -> impl Iterator<Item = Scenario> + '_ {
        let free: Vec<usize> = (0..num_props)
            .filter(|&i| !self.contains(PropId(i as u32)))
            .collect();
        let base: u64 = self
            .iter()
            .filter(|&(_, v)| v)
            .fold(0, |acc, (p, _)| acc | 1 << p.index());
        (0..1u64 << free.len()).map(move |choice| {
            let mut bits = base;
            for (j, &i) in free.iter().enumerate() {
                if choice >> j & 1 == 1 {
                    bits |= 1 << i;
                }
            }
            Scenario::from_bits(num_props, bits)
        })
    }
}

impl fmt::Display for PartialScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let mut first = true;
        for (p, v) in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{}={}", p, u8::from(v))?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for bits in 0..16u64 {
            let s = Scenario::from_bits(4, bits);
            assert_eq!(s.index() as u64, bits);
        }
    }

    #[test]
    fn flip_involution_and_identity() {
        let s = Scenario::from_bits(3, 0b010);
        let p = PropId(1);
        assert_eq!(s.with(p, s.value(p)), s);
        assert_eq!(s.with(p, false).with(p, true), s);
    }

    #[test]
    fn completions_enumerate_free_props() {
        let mut h = PartialScenario::new();
        h.assign(PropId(1), true);
        let all: Vec<Scenario> = h.completions(3).collect();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|s| s.value(PropId(1))));
        // Canonical order: free props 0 and 2 count upward.
        assert_eq!(all[0].index(), 0b010);
        assert_eq!(all[1].index(), 0b011);
        assert_eq!(all[2].index(), 0b110);
        assert_eq!(all[3].index(), 0b111);
    }

    #[test]
    fn completes_checks_domain_agreement() {
        let mut h = PartialScenario::new();
        h.assign(PropId(0), false);
        assert!(Scenario::from_bits(2, 0b10).completes(&h));
        assert!(!Scenario::from_bits(2, 0b01).completes(&h));
        assert!(Scenario::from_bits(2, 0).completes(&PartialScenario::new()));
    }
}
