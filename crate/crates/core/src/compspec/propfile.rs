// SPDX-License-Identifier: Apache-2.0

//! Property files:
//!
//! ```text
//! # sortedness
//! PROP p1
//! -z1 z2
//! PROP never
//! FALSE
//! ```
//!
//! Each `PROP <name>` header starts a property; every following non-empty
//! line is one clause of it, literals being net names with an optional `-`.
//! `FALSE` is the empty clause. A header with no clauses is the constant
//! true property.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Property, Specification};
use crate::circuit::is_valid_name;
use crate::formula::{Clause, Cnf, Lit, VarTable};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct PropFileError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> PropFileError {
    PropFileError {
        line,
        message: message.into(),
    }
}

fn parse_clause(toks: &[&str], table: &VarTable, line: usize) -> Result<Clause, PropFileError> {
    if toks == ["FALSE"] {
        return Ok(Clause::empty());
    }
    let mut lits = Vec::with_capacity(toks.len());
    for tok in toks {
        let (name, positive) = match tok.strip_prefix('-') {
            Some(rest) => (rest, false),
            None => (*tok, true),
        };
        let var = table
            .lookup(name)
            .ok_or_else(|| err(line, format!("unknown net `{name}`")))?;
        lits.push(Lit::new(var, positive));
    }
    Clause::new(lits).map_err(|e| err(line, e.to_string()))
}

/// Parses a property file whose names resolve in `table`.
pub fn parse_properties(text: &str, table: &VarTable) -> Result<Specification, PropFileError> {
    let mut spec = Specification::new(table.clone());
    let mut names = BTreeSet::new();
    let mut current: Option<Property> = None;
    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = full
            .split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .collect();
        match toks.as_slice() {
            [] => {}
            ["PROP", name] => {
                if !is_valid_name(name) {
                    return Err(err(line, format!("invalid property name `{name}`")));
                }
                if !names.insert(name.to_string()) {
                    return Err(err(line, format!("property `{name}` defined twice")));
                }
                if let Some(p) = current.take() {
                    spec.push(p);
                }
                current = Some(Property {
                    name: name.to_string(),
                    formula: Cnf::new(table.clone()),
                });
            }
            ["PROP", ..] => return Err(err(line, "expected `PROP <name>`")),
            toks => {
                let clause = parse_clause(toks, table, line)?;
                let p = current
                    .as_mut()
                    .ok_or_else(|| err(line, "clause before the first PROP header"))?;
                p.formula.push(clause).expect("names resolved in the table");
            }
        }
    }
    if let Some(p) = current {
        spec.push(p);
    }
    Ok(spec)
}

pub fn write_properties(spec: &Specification) -> String {
    let mut out = String::new();
    for p in spec.properties() {
        let _ = writeln!(out, "PROP {}", p.name);
        for c in p.formula.clauses() {
            let _ = writeln!(out, "{}", p.formula.display_clause(c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> VarTable {
        let mut t = VarTable::new();
        for n in ["x1", "x2", "z1", "z2"] {
            t.add_named(n).unwrap();
        }
        t
    }

    #[test]
    fn round_trip() {
        let text = "# c\nPROP p1\n-z1 z2\n\nPROP t\nPROP f\nFALSE\n";
        let spec = parse_properties(text, &table()).unwrap();
        assert_eq!(spec.properties().len(), 3);
        assert_eq!(spec.properties()[1].formula.len(), 0);
        assert_eq!(
            write_properties(&spec),
            "PROP p1\n-z1 z2\nPROP t\nPROP f\nFALSE\n"
        );
        assert_eq!(
            parse_properties(&write_properties(&spec), &table()).unwrap(),
            spec
        );
    }

    #[test]
    fn errors() {
        let t = table();
        assert_eq!(parse_properties("z1\n", &t).unwrap_err().line, 1);
        assert!(parse_properties("PROP a\nq9\n", &t).is_err());
        assert!(parse_properties("PROP a\nz1 -z1\n", &t).is_err());
        assert!(parse_properties("PROP a\nPROP a\n", &t).is_err());
        assert!(parse_properties("PROP\n", &t).is_err());
        assert!(parse_properties("PROP 1a\n", &t).is_err());
    }
}
