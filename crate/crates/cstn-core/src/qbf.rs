//! Quantified 3-SAT with a strictly alternating prefix
//! ∃x₁∀y₁ ⋯ ∃xₙ∀yₙ φ, where φ is a conjunction of 3-literal clauses.
//!
//! Everything here is exhaustive game-tree search at desk scale (the level
//! bound is [`MAX_LEVELS`]): [`qbf_eval`] decides the formula, and the two
//! extraction routines return explicit winning strategies — per-level truth
//! tables over the opponent's revealed prefix — for whichever player wins.
//! Tables rather than closures so strategies can be enumerated, serialized,
//! and fed to other components.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Highest supported number of ∃/∀ pairs; evaluation is Θ(4ⁿ·m) worst case.
pub const MAX_LEVELS: usize = 12;

/// A quantified variable, identified by its 1-based prefix level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum QVar {
    /// xᵢ, set by the existential player at level `i`.
    Existential(usize),
    /// yᵢ, set by the universal player at level `i`.
    Universal(usize),
}

impl QVar {
    pub fn level(self) -> usize {
        match self {
            QVar::Existential(i) | QVar::Universal(i) => i,
        }
    }
}

impl fmt::Display for QVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QVar::Existential(i) => write!(f, "x{}", i),
            QVar::Universal(i) => write!(f, "y{}", i),
        }
    }
}

/// A literal: a variable or its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct QLit {
    pub var: QVar,
    pub positive: bool,
}

impl QLit {
    pub fn pos(var: QVar) -> QLit {
        QLit { var, positive: true }
    }

    pub fn neg(var: QVar) -> QLit {
        QLit { var, positive: false }
    }
}

impl fmt::Display for QLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "!")?;
        }
        write!(f, "{}", self.var)
    }
}

/// Exactly three literal slots; repeats are allowed and express shorter
/// clauses.
pub type Clause = [QLit; 3];

/// True when the clause contains a variable and its negation, so every
/// assignment satisfies it.
pub fn clause_tautological(clause: &Clause) -> bool {
    clause.iter().any(|a| {
        clause
            .iter()
            .any(|b| a.var == b.var && a.positive != b.positive)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QbfError {
    /// A literal references a level outside 1..=levels.
    UnknownVariable { var: QVar, levels: usize },
    /// The prefix exceeds [`MAX_LEVELS`].
    Capacity { levels: usize },
    /// A strategy table has the wrong shape for its level.
    BadTable { level: usize, expected: usize, got: usize },
}

impl fmt::Display for QbfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QbfError::UnknownVariable { var, levels } => {
                write!(f, "literal {} outside the {}-level prefix", var, levels)
            }
            QbfError::Capacity { levels } => {
                write!(f, "{} levels exceed the supported bound of {}", levels, MAX_LEVELS)
            }
            QbfError::BadTable { level, expected, got } => {
                write!(f, "table at level {} needs {} entries, found {}", level, expected, got)
            }
        }
    }
}

/// A quantified 3-SAT instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q3SatFormula {
    levels: usize,
    clauses: Vec<Clause>,
}

impl Q3SatFormula {
    pub fn new(levels: usize, clauses: Vec<Clause>) -> Result<Q3SatFormula, QbfError> {
        for clause in &clauses {
            for lit in clause {
                let l = lit.var.level();
                if l == 0 || l > levels {
                    return Err(QbfError::UnknownVariable { var: lit.var, levels });
                }
            }
        }
        Ok(Q3SatFormula { levels, clauses })
    }

    /// Number of ∃/∀ pairs.
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Evaluates the matrix φ under a full assignment given as bit masks
    /// (level `i` at bit `i − 1`).
    pub fn matrix_satisfied(&self, x_bits: u64, y_bits: u64) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|lit| {
                let value = match lit.var {
                    QVar::Existential(i) => x_bits >> (i - 1) & 1 == 1,
                    QVar::Universal(i) => y_bits >> (i - 1) & 1 == 1,
                };
                value == lit.positive
            })
        })
    }

    fn check_capacity(&self) -> Result<(), QbfError> {
        if self.levels > MAX_LEVELS {
            return Err(QbfError::Capacity { levels: self.levels });
        }
        Ok(())
    }
}

/// Game value with the first `level` pairs already fixed in the masks.
fn eval_from(phi: &Q3SatFormula, level: usize, x_bits: u64, y_bits: u64) -> bool {
    if level == phi.levels {
        return phi.matrix_satisfied(x_bits, y_bits);
    }
    let bit = 1u64 << level;
    [false, true].into_iter().any(|vx| {
        let xb = if vx { x_bits | bit } else { x_bits };
        [false, true]
            .into_iter()
            .all(|vy| eval_from(phi, level + 1, xb, if vy { y_bits | bit } else { y_bits }))
    })
}

/// Decides the formula by exhaustive alternating search with short-circuit.
pub fn qbf_eval(phi: &Q3SatFormula) -> Result<bool, QbfError> {
    phi.check_capacity()?;
    Ok(eval_from(phi, 0, 0, 0))
}

/// A winning strategy for the existential player: at level `i`, xᵢ is read
/// from a table indexed by the observed y₁…y_{i−1} (y₁ at bit 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistentialStrategy {
    tables: Vec<Vec<bool>>,
}

impl ExistentialStrategy {
    pub fn from_tables(tables: Vec<Vec<bool>>) -> Result<ExistentialStrategy, QbfError> {
        for (i, t) in tables.iter().enumerate() {
            let expected = 1usize << i;
            if t.len() != expected {
                return Err(QbfError::BadTable { level: i + 1, expected, got: t.len() });
            }
        }
        Ok(ExistentialStrategy { tables })
    }

    pub fn levels(&self) -> usize {
        self.tables.len()
    }

    pub fn tables(&self) -> &[Vec<bool>] {
        &self.tables
    }

    /// The choice for xᵢ given the universal prefix y₁…y_{i−1}.
    pub fn choose(&self, level: usize, y_prefix: u64) -> bool {
        self.tables[level - 1][y_prefix as usize & ((1 << (level - 1)) - 1)]
    }

    /// The full x mask induced against a particular y mask.
    pub fn induced_x(&self, y_bits: u64) -> u64 {
        let mut x = 0u64;
        for i in 1..=self.levels() {
            if self.choose(i, y_bits & ((1 << (i - 1)) - 1)) {
                x |= 1 << (i - 1);
            }
        }
        x
    }

    /// Every existential strategy shape for `levels` pairs, in ascending
    /// table-bit order; there are 2^(2^levels − 1) of them.
    pub fn enumerate(levels: usize) -> impl Iterator<Item = ExistentialStrategy> {
        let total_bits = (1usize << levels) - 1;
        assert!(total_bits <= 20, "strategy space too large to enumerate");
        (0u64..1 << total_bits).map(move |code| {
            let mut tables = Vec::with_capacity(levels);
            let mut next = 0;
            for i in 0..levels {
                let mut t = vec![false; 1 << i];
                for entry in t.iter_mut() {
                    *entry = code >> next & 1 == 1;
                    next += 1;
                }
                tables.push(t);
            }
            ExistentialStrategy { tables }
        })
    }
}

/// A winning strategy for the universal player: at level `i`, yᵢ is read
/// from a table indexed by the observed x₁…xᵢ (x₁ at bit 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalStrategy {
    tables: Vec<Vec<bool>>,
}

impl UniversalStrategy {
    pub fn from_tables(tables: Vec<Vec<bool>>) -> Result<UniversalStrategy, QbfError> {
        for (i, t) in tables.iter().enumerate() {
            let expected = 1usize << (i + 1);
            if t.len() != expected {
                return Err(QbfError::BadTable { level: i + 1, expected, got: t.len() });
            }
        }
        Ok(UniversalStrategy { tables })
    }

    pub fn levels(&self) -> usize {
        self.tables.len()
    }

    pub fn tables(&self) -> &[Vec<bool>] {
        &self.tables
    }

    /// The choice for yᵢ given the existential prefix x₁…xᵢ.
    pub fn choose(&self, level: usize, x_prefix: u64) -> bool {
        self.tables[level - 1][x_prefix as usize & ((1 << level) - 1)]
    }

    /// The full y mask induced against a particular x mask.
    pub fn induced_y(&self, x_bits: u64) -> u64 {
        let mut y = 0u64;
        for i in 1..=self.levels() {
            if self.choose(i, x_bits & ((1 << i) - 1)) {
                y |= 1 << (i - 1);
            }
        }
        y
    }
}

/// If the existential player wins, returns a winning strategy; `None` for
/// false formulas.
///
/// The strategy is built level by level along every reachable universal
/// prefix, taking the first winning value (0 before 1) at each entry, so
/// extraction is deterministic.
pub fn qbf_extract_existential(
    phi: &Q3SatFormula,
) -> Result<Option<ExistentialStrategy>, QbfError> {
    phi.check_capacity()?;
    if !eval_from(phi, 0, 0, 0) {
        return Ok(None);
    }
    let mut tables: Vec<Vec<bool>> = Vec::with_capacity(phi.levels);
    for i in 1..=phi.levels {
        let mut table = vec![false; 1 << (i - 1)];
        for yp in 0u64..1 << (i - 1) {
            let mut x_bits = 0u64;
            for (j, t) in tables.iter().enumerate() {
                if t[(yp & ((1 << j) - 1)) as usize] {
                    x_bits |= 1 << j;
                }
            }
            let wins = |vx: bool| {
                let xb = if vx { x_bits | 1 << (i - 1) } else { x_bits };
                [false, true]
                    .into_iter()
                    .all(|vy| eval_from(phi, i, xb, if vy { yp | 1 << (i - 1) } else { yp }))
            };
            let choice = !wins(false);
            debug_assert!(wins(choice), "reachable position must stay winning");
            table[yp as usize] = choice;
        }
        tables.push(table);
    }
    Ok(Some(ExistentialStrategy { tables }))
}

/// Dual of [`qbf_extract_existential`]: a winning strategy for the
/// universal player of a false formula, `None` for true ones.
pub fn qbf_extract_universal(phi: &Q3SatFormula) -> Result<Option<UniversalStrategy>, QbfError> {
    phi.check_capacity()?;
    if eval_from(phi, 0, 0, 0) {
        return Ok(None);
    }
    let mut tables: Vec<Vec<bool>> = Vec::with_capacity(phi.levels);
    for i in 1..=phi.levels {
        let mut table = vec![false; 1 << i];
        for xp in 0u64..1 << i {
            let mut y_bits = 0u64;
            for (j, t) in tables.iter().enumerate() {
                if t[(xp & ((1 << (j + 1)) - 1)) as usize] {
                    y_bits |= 1 << j;
                }
            }
            let refutes = |vy: bool| {
                let yb = if vy { y_bits | 1 << (i - 1) } else { y_bits };
                !eval_from(phi, i, xp, yb)
            };
            let choice = !refutes(false);
            debug_assert!(refutes(choice), "reachable position must stay losing");
            table[xp as usize] = choice;
        }
        tables.push(table);
    }
    Ok(Some(UniversalStrategy { tables }))
}

/// True iff `f` defeats every universal reply sequence (all 2ⁿ of them).
pub fn replay_existential(phi: &Q3SatFormula, f: &ExistentialStrategy) -> bool {
    (0u64..1 << phi.levels).all(|y_bits| phi.matrix_satisfied(f.induced_x(y_bits), y_bits))
}

/// True iff `g` refutes every existential play sequence.
pub fn replay_universal(phi: &Q3SatFormula, g: &UniversalStrategy) -> bool {
    (0u64..1 << phi.levels).all(|x_bits| !phi.matrix_satisfied(x_bits, g.induced_y(x_bits)))
}
