// SPDX-License-Identifier: Apache-2.0

//! Quantifier elimination and partial quantifier elimination by cofactor
//! enumeration over the free variables, plus the two clause-splitting
//! transformations.
//!
//! Results are canonical maxterm CNFs: one maxterm per excluded free
//! assignment, in ascending assignment order over the free variables sorted
//! by id. Among the many PQE solutions the weakest one is returned: a free
//! point where `∃W[H2]` is already false is left unconstrained.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{all_assignments, Assignment, Clause, Cnf, FormulaError, Lit, Var, VarTable};
use crate::limits::{CapExceeded, Limits};
use crate::satcore::{implies_formula, Solver};

/// Largest variable set [`split_on_all_assignments`] accepts.
pub const FULL_SPLIT_MAX_VARS: usize = 4;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QuantError {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("variable `{0}` of the solution is not a free variable")]
    FreeVarViolation(String),
    #[error("split variable {0} occurs in the clause")]
    SharedVariable(Var),
    #[error("split variable {0} is repeated")]
    RepeatedSplitVariable(Var),
    #[error("the formula does not imply the target property")]
    NotImplied,
    #[error("no clauses are taken out of the quantifier scope")]
    EmptyTake,
    #[error("clause index {0} out of range")]
    BadClauseIndex(usize),
}

fn sorted_free(table: &VarTable, free: &[Var]) -> Result<Vec<Var>, QuantError> {
    let set: BTreeSet<Var> = free.iter().copied().collect();
    if let Some(&v) = set.iter().find(|v| !table.contains(**v)) {
        return Err(FormulaError::UnknownVar(v).into());
    }
    Ok(set.into_iter().collect())
}

/// `∃W[F]` where `W` is every variable of `F`'s table outside `free`.
#[derive(Clone, Debug)]
pub struct QuantProblem {
    formula: Cnf,
    free: Vec<Var>,
}

impl QuantProblem {
    pub fn new(formula: Cnf, free: &[Var]) -> Result<QuantProblem, QuantError> {
        let free = sorted_free(formula.table(), free)?;
        Ok(QuantProblem { formula, free })
    }

    pub fn formula(&self) -> &Cnf {
        &self.formula
    }

    pub fn free(&self) -> &[Var] {
        &self.free
    }

    pub fn quantified(&self) -> Vec<Var> {
        self.formula
            .table()
            .vars()
            .filter(|v| self.free.binary_search(v).is_err())
            .collect()
    }
}

/// Taking the clauses `take` (H1) of `formula` out of `∃W[H1 ∧ H2]`.
#[derive(Clone, Debug)]
pub struct PqeProblem {
    formula: Cnf,
    take: BTreeSet<usize>,
    free: Vec<Var>,
}

impl PqeProblem {
    pub fn new(
        formula: Cnf,
        take: BTreeSet<usize>,
        free: &[Var],
    ) -> Result<PqeProblem, QuantError> {
        if take.is_empty() {
            return Err(QuantError::EmptyTake);
        }
        if let Some(&i) = take.iter().find(|&&i| i >= formula.len()) {
            return Err(QuantError::BadClauseIndex(i));
        }
        let free = sorted_free(formula.table(), free)?;
        Ok(PqeProblem {
            formula,
            take,
            free,
        })
    }

    pub fn formula(&self) -> &Cnf {
        &self.formula
    }

    pub fn take(&self) -> &BTreeSet<usize> {
        &self.take
    }

    pub fn free(&self) -> &[Var] {
        &self.free
    }

    pub fn h1(&self) -> Cnf {
        self.formula.select(&self.take)
    }

    pub fn h2(&self) -> Cnf {
        self.formula.without(&self.take)
    }
}

/// Canonical maxterm CNF over `vars` (sorted by id) excluding exactly the
/// points where `keep` is false.
pub fn maxterm_cnf(
    table: &VarTable,
    vars: &[Var],
    mut keep: impl FnMut(&Assignment) -> bool,
) -> Result<Cnf, QuantError> {
    let vars = sorted_free(table, vars)?;
    let mut out = Cnf::new(table.clone());
    for point in all_assignments(&vars) {
        if !keep(&point) {
            out.push(Clause::maxterm(&point, &vars)?)?;
        }
    }
    Ok(out)
}

/// Computes `H*(V) ≡ ∃W[F]` as a canonical maxterm CNF.
pub fn quant_eliminate(p: &QuantProblem, limits: &Limits) -> Result<Cnf, QuantError> {
    limits.check(p.free.len())?;
    let mut solver = Solver::new(&p.formula);
    maxterm_cnf(p.formula.table(), &p.free, |v| {
        solver.solve(&v.lits()).is_sat()
    })
}

/// The weakest solution `Q(V)` with `∃W[H1 ∧ H2] ≡ Q ∧ ∃W[H2]`.
pub fn partial_qe(p: &PqeProblem, limits: &Limits) -> Result<Cnf, QuantError> {
    limits.check(p.free.len())?;
    let mut full = Solver::new(&p.formula);
    let mut rest = Solver::new(&p.h2());
    maxterm_cnf(p.formula.table(), &p.free, |v| {
        let lits = v.lits();
        !rest.solve(&lits).is_sat() || full.solve(&lits).is_sat()
    })
}

/// Checks the defining equivalence of a PQE solution point by point.
pub fn is_pqe_solution(p: &PqeProblem, q: &Cnf, limits: &Limits) -> Result<bool, QuantError> {
    limits.check(p.free.len())?;
    if let Some(v) = q
        .occurring_vars()
        .into_iter()
        .find(|v| p.free.binary_search(v).is_err())
    {
        return Err(QuantError::FreeVarViolation(p.formula.table().display(v)));
    }
    let mut full = Solver::new(&p.formula);
    let mut rest = Solver::new(&p.h2());
    for v in all_assignments(&p.free) {
        let lits = v.lits();
        let lhs = full.solve(&lits).is_sat();
        let rhs = q.evaluate(&v).is_true() && rest.solve(&lits).is_sat();
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Drops the clauses of `q` implied by `h2` alone.
pub fn clean_solution(q: &Cnf, h2: &Cnf) -> Cnf {
    let mut solver = Solver::new(h2);
    let kept = q.clauses().iter().filter(|c| !solver.implies(c)).cloned();
    Cnf::from_clauses(q.table().clone(), kept).expect("clauses come from q")
}

/// Splits `c` on the variables of `lits`: returns `c ∨ l1, …, c ∨ lm` and
/// finally `c ∨ ¬l1 ∨ … ∨ ¬lm`.
pub fn split_clause(c: &Clause, lits: &[Lit]) -> Result<Vec<Clause>, QuantError> {
    let mut seen = BTreeSet::new();
    for lit in lits {
        if c.vars().any(|v| v == lit.var()) {
            return Err(QuantError::SharedVariable(lit.var()));
        }
        if !seen.insert(lit.var()) {
            return Err(QuantError::RepeatedSplitVariable(lit.var()));
        }
    }
    let mut out = Vec::with_capacity(lits.len() + 1);
    for &lit in lits {
        out.push(c.with_lit(lit)?);
    }
    out.push(Clause::new(
        c.lits().iter().copied().chain(lits.iter().map(|&l| !l)),
    )?);
    Ok(out)
}

/// Result of splitting every clause on all assignments to a variable set,
/// partitioned against a target property.
#[derive(Clone, Debug)]
pub struct FullSplit {
    pub formula: Cnf,
    /// Clauses `C ∨ B_v` whose point `v` falsifies the property.
    pub g1: BTreeSet<usize>,
    /// The remaining clauses.
    pub g2: BTreeSet<usize>,
}

impl FullSplit {
    /// The PQE problem of taking G1 out of `∃W[G1 ∧ G2]`.
    pub fn pqe_problem(&self, free: &[Var]) -> Result<PqeProblem, QuantError> {
        PqeProblem::new(self.formula.clone(), self.g1.clone(), free)
    }
}

/// Replaces every clause `C` of `f` by the clauses `C ∨ B_v` for all full
/// assignments `v` to `vars` (`B_v` the maxterm of `v`), dropping the
/// tautologous ones, and partitions them by whether `v` falsifies `q`.
pub fn split_on_all_assignments(f: &Cnf, vars: &[Var], q: &Cnf) -> Result<FullSplit, QuantError> {
    if vars.len() > FULL_SPLIT_MAX_VARS {
        return Err(CapExceeded {
            requested: vars.len(),
            cap: FULL_SPLIT_MAX_VARS,
        }
        .into());
    }
    let vars = sorted_free(f.table(), vars)?;
    if let Some(v) = q
        .occurring_vars()
        .into_iter()
        .find(|v| vars.binary_search(v).is_err())
    {
        return Err(QuantError::FreeVarViolation(f.table().display(v)));
    }
    if !implies_formula(f, q) {
        return Err(QuantError::NotImplied);
    }
    let points: Vec<(Clause, bool)> = all_assignments(&vars)
        .map(|v| Ok((Clause::maxterm(&v, &vars)?, q.evaluate(&v).is_false())))
        .collect::<Result<_, QuantError>>()?;
    let mut formula = Cnf::new(f.table().clone());
    let mut g1 = BTreeSet::new();
    let mut g2 = BTreeSet::new();
    for c in f.clauses() {
        for (b, falsifies_q) in &points {
            let Ok(widened) = c.or(b) else {
                continue;
            };
            let idx = formula.push(widened)?;
            if *falsifies_q {
                g1.insert(idx);
            } else {
                g2.insert(idx);
            }
        }
    }
    Ok(FullSplit { formula, g1, g2 })
}
