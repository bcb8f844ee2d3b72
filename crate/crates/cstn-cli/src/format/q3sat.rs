//! The quantified-formula file format.
//!
//! ```text
//! c any number of comment lines
//! q3sat 2 3
//! 1 -2 3
//! 1 2 2
//! -3 -4 -4
//! ```
//!
//! Header `q3sat <n> <m>` declares n quantifier pairs and m clauses; each
//! clause line holds exactly three nonzero integers. Variable 2i−1 is the
//! existential xᵢ and 2i the universal yᵢ; a negative integer negates.
//! Lines starting with `c` (or `#`) are comments.

use std::fmt::Write;

use cstn_core::qbf::{Clause, QLit, QVar, Q3SatFormula};

use super::FormatError;

/// Parses the formula format.
pub fn parse_q3sat(text: &str) -> Result<Q3SatFormula, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| FormatError::new(1, "missing q3sat header"))?;
    let (levels, num_clauses) = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["q3sat", n, m] => {
            let parse = |what, v: &str| {
                v.parse::<usize>().map_err(|_| {
                    FormatError::new(header_line, format!("{what} {v:?} is not a count"))
                })
            };
            (parse("pair count", n)?, parse("clause count", m)?)
        }
        _ => {
            return Err(FormatError::new(
                header_line,
                "expected header: q3sat <pairs> <clauses>",
            ))
        }
    };

    let mut clauses: Vec<Clause> = Vec::with_capacity(num_clauses);
    for (line, body) in lines {
        if clauses.len() == num_clauses {
            return Err(FormatError::new(
                line,
                format!("more than the declared {num_clauses} clause lines"),
            ));
        }
        let numbers = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| FormatError::new(line, format!("{tok:?} is not an integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let [a, b, c] = numbers[..] else {
            return Err(FormatError::new(
                line,
                "a clause line needs exactly three literals",
            ));
        };
        let lit = |v: i64| -> Result<QLit, FormatError> {
            if v == 0 {
                return Err(FormatError::new(line, "0 is not a literal"));
            }
            let magnitude = v.unsigned_abs() as usize;
            if magnitude > 2 * levels {
                return Err(FormatError::new(
                    line,
                    format!("variable {magnitude} exceeds the {} declared", 2 * levels),
                ));
            }
            let var = if magnitude % 2 == 1 {
                QVar::Existential(magnitude.div_ceil(2))
            } else {
                QVar::Universal(magnitude / 2)
            };
            Ok(if v > 0 { QLit::pos(var) } else { QLit::neg(var) })
        };
        clauses.push([lit(a)?, lit(b)?, lit(c)?]);
    }
    if clauses.len() != num_clauses {
        return Err(FormatError::new(
            text.lines().count().max(1),
            format!(
                "header declares {num_clauses} clauses but the file has {}",
                clauses.len()
            ),
        ));
    }
    // Literal levels were bounded above, so construction cannot fail.
    Q3SatFormula::new(levels, clauses).map_err(|e| FormatError::new(1, e.to_string()))
}

fn literal_number(lit: QLit) -> i64 {
    let magnitude = match lit.var {
        QVar::Existential(i) => 2 * i as i64 - 1,
        QVar::Universal(i) => 2 * i as i64,
    };
    if lit.positive {
        magnitude
    } else {
        -magnitude
    }
}

/// Prints the canonical formula document; `parse_q3sat` returns an equal
/// formula.
pub fn print_q3sat(phi: &Q3SatFormula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "q3sat {} {}", phi.levels(), phi.clauses().len());
    for clause in phi.clauses() {
        let _ = writeln!(
            out,
            "{} {} {}",
            literal_number(clause[0]),
            literal_number(clause[1]),
            literal_number(clause[2])
        );
    }
    out
}
