// SPDX-License-Identifier: Apache-2.0

//! DIMACS CNF reader and writer. Symbol names travel in comment lines of the
//! form `c var <id> <name>`; files without them read as anonymous variables.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Clause, Cnf, FormulaError, Lit, Var, VarTable};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct DimacsError {
    pub line: usize,
    pub kind: DimacsErrorKind,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DimacsErrorKind {
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("duplicate `p` header")]
    DuplicateHeader,
    #[error("malformed literal `{0}`")]
    BadLiteral(String),
    #[error("variable {0} exceeds the declared variable count {1}")]
    VarOutOfRange(u64, usize),
    #[error("malformed `c var` comment: {0}")]
    BadVarComment(String),
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCount { declared: usize, found: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

fn err(line: usize, kind: DimacsErrorKind) -> DimacsError {
    DimacsError { line, kind }
}

/// Serializes a formula. Named variables get a `c var` line each.
pub fn write(cnf: &Cnf) -> String {
    let mut out = String::new();
    for var in cnf.table().vars() {
        if let Some(name) = cnf.table().name(var) {
            let _ = writeln!(out, "c var {} {}", var.id(), name);
        }
    }
    let _ = writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.len());
    for clause in cnf.clauses() {
        for lit in clause.lits() {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS CNF text. Clauses may span lines; a `%` line ends the data.
pub fn parse(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut names: Vec<(usize, u64, String)> = Vec::new();
    let mut clauses: Vec<(usize, Vec<Lit>)> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut current_line = 0;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "c" || line.starts_with("c ") || line.starts_with("c\t") {
            let mut toks = line.split_whitespace().skip(1);
            if toks.next() == Some("var") {
                let rest: Vec<&str> = toks.collect();
                match rest.as_slice() {
                    [id, name] => {
                        let id: u64 = id.parse().ok().filter(|&i| i > 0).ok_or_else(|| {
                            err(line_no, DimacsErrorKind::BadVarComment(line.into()))
                        })?;
                        names.push((line_no, id, name.to_string()));
                    }
                    _ => return Err(err(line_no, DimacsErrorKind::BadVarComment(line.into()))),
                }
            }
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, DimacsErrorKind::DuplicateHeader));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["p", "cnf", nv, nc] => {
                    let nv: usize = nv
                        .parse()
                        .map_err(|_| err(line_no, DimacsErrorKind::BadHeader(line.into())))?;
                    let nc: usize = nc
                        .parse()
                        .map_err(|_| err(line_no, DimacsErrorKind::BadHeader(line.into())))?;
                    if nv > u32::MAX as usize {
                        return Err(err(line_no, DimacsErrorKind::BadHeader(line.into())));
                    }
                    header = Some((line_no, nv, nc));
                }
                _ => return Err(err(line_no, DimacsErrorKind::BadHeader(line.into()))),
            }
            continue;
        }
        let Some((_, nvars, _)) = header else {
            return Err(err(line_no, DimacsErrorKind::MissingHeader));
        };
        for tok in line.split_whitespace() {
            let code: i64 = tok
                .parse()
                .map_err(|_| err(line_no, DimacsErrorKind::BadLiteral(tok.into())))?;
            if current.is_empty() {
                current_line = line_no;
            }
            if code == 0 {
                clauses.push((current_line.max(1), std::mem::take(&mut current)));
                current_line = 0;
                continue;
            }
            if code.unsigned_abs() > nvars as u64 {
                return Err(err(
                    line_no,
                    DimacsErrorKind::VarOutOfRange(code.unsigned_abs(), nvars),
                ));
            }
            let lit = Lit::from_dimacs(code)
                .ok_or_else(|| err(line_no, DimacsErrorKind::BadLiteral(tok.into())))?;
            current.push(lit);
        }
    }

    let last_line = text.lines().count().max(1);
    let Some((header_line, nvars, nclauses)) = header else {
        return Err(err(last_line, DimacsErrorKind::MissingHeader));
    };
    if !current.is_empty() {
        return Err(err(current_line, DimacsErrorKind::Unterminated));
    }
    if clauses.len() != nclauses {
        return Err(err(
            header_line,
            DimacsErrorKind::ClauseCount {
                declared: nclauses,
                found: clauses.len(),
            },
        ));
    }

    let mut table = VarTable::anonymous(nvars);
    for (line_no, id, name) in names {
        if id > nvars as u64 {
            return Err(err(line_no, DimacsErrorKind::VarOutOfRange(id, nvars)));
        }
        table
            .set_name(Var::new(id as u32), &name)
            .map_err(|e| err(line_no, e.into()))?;
    }
    let mut cnf = Cnf::new(table);
    for (line_no, lits) in clauses {
        let clause = Clause::new(lits).map_err(|e| err(line_no, e.into()))?;
        cnf.push(clause).map_err(|e| err(line_no, e.into()))?;
    }
    Ok(cnf)
}
