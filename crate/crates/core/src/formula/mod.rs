// SPDX-License-Identifier: Apache-2.0

//! Propositional core shared by every other module: variables, literals,
//! clauses, CNF formulas and (partial) assignments.

pub mod dimacs;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Not;

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("clause contains both literals of {0}")]
    Tautology(Var),
    #[error("clauses are not resolvable on {var} ({clashes} clashing variables)")]
    NotResolvable { var: Var, clashes: usize },
    #[error("assignment is not full over the requested variables")]
    PartialAssignment,
    #[error("variable {0} is not in the variable table")]
    UnknownVar(Var),
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
}

/// A propositional variable. Ids start at 1 so they map directly onto DIMACS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn new(id: u32) -> Var {
        assert!(id > 0, "variable ids start at 1");
        Var(id)
    }

    pub fn from_index(index: usize) -> Var {
        Var(index as u32 + 1)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// Zero-based position in a variable table.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }

    /// The literal of this variable that `value` satisfies.
    pub fn lit(self, value: bool) -> Lit {
        Lit::new(self, value)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A literal. The derived order sorts by variable first and puts the
/// positive literal before the negative one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    var: Var,
    negated: bool,
}

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit {
            var,
            negated: !positive,
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        !self.negated
    }

    /// Whether the literal is satisfied when its variable takes `value`.
    pub fn satisfied_by(self, value: bool) -> bool {
        value != self.negated
    }

    pub fn from_dimacs(code: i64) -> Option<Lit> {
        if code == 0 || code.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Lit::new(Var::new(code.unsigned_abs() as u32), code > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        let id = self.var.id() as i64;
        if self.negated {
            -id
        } else {
            id
        }
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit {
            var: self.var,
            negated: !self.negated,
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-{}", self.var)
        } else {
            write!(f, "{}", self.var)
        }
    }
}

/// Three-valued result of evaluating a clause or formula under a partial
/// assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Undetermined,
}

impl Truth {
    pub fn is_true(self) -> bool {
        self == Truth::True
    }

    pub fn is_false(self) -> bool {
        self == Truth::False
    }
}

/// A disjunction of literals with at most one literal per variable, kept
/// sorted in canonical literal order. The empty clause is false.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Builds a clause, merging duplicate literals. Fails with
    /// [`FormulaError::Tautology`] naming the lowest clashing variable.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Result<Clause, FormulaError> {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        if let Some(w) = lits.windows(2).find(|w| w[0].var == w[1].var) {
            return Err(FormulaError::Tautology(w[0].var));
        }
        Ok(Clause { lits })
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    pub fn unit(lit: Lit) -> Clause {
        Clause { lits: vec![lit] }
    }

    /// The clause falsified by exactly one full assignment to `vars`, namely
    /// `a`: for each variable it holds the literal `a` falsifies.
    pub fn maxterm(a: &Assignment, vars: &[Var]) -> Result<Clause, FormulaError> {
        if !a.is_full_over(vars) {
            return Err(FormulaError::PartialAssignment);
        }
        let mut lits: Vec<Lit> = vars.iter().map(|&v| v.lit(!a.values[&v])).collect();
        lits.sort_unstable();
        Ok(Clause { lits })
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var)
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn lit_of(&self, var: Var) -> Option<Lit> {
        self.lits.iter().copied().find(|l| l.var == var)
    }

    pub fn eval(&self, a: &Assignment) -> Truth {
        let mut undetermined = false;
        for lit in &self.lits {
            match a.get(lit.var) {
                Some(value) if lit.satisfied_by(value) => return Truth::True,
                Some(_) => {}
                None => undetermined = true,
            }
        }
        if undetermined {
            Truth::Undetermined
        } else {
            Truth::False
        }
    }

    /// Disjunction of two clauses.
    pub fn or(&self, other: &Clause) -> Result<Clause, FormulaError> {
        Clause::new(self.lits.iter().chain(other.lits.iter()).copied())
    }

    pub fn with_lit(&self, lit: Lit) -> Result<Clause, FormulaError> {
        Clause::new(self.lits.iter().copied().chain(std::iter::once(lit)))
    }
}

/// Resolves `c1` and `c2` on `w`. The clauses must clash on exactly one
/// variable and that variable must be `w`.
pub fn resolve(c1: &Clause, c2: &Clause, w: Var) -> Result<Clause, FormulaError> {
    let clashing: Vec<Var> = c1
        .lits
        .iter()
        .filter(|l| c2.contains(!**l))
        .map(|l| l.var)
        .collect();
    if clashing.len() != 1 || clashing[0] != w {
        return Err(FormulaError::NotResolvable {
            var: w,
            clashes: clashing.len(),
        });
    }
    Clause::new(
        c1.lits
            .iter()
            .chain(c2.lits.iter())
            .copied()
            .filter(|l| l.var != w),
    )
}

/// Maps variable ids to optional symbolic names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<Option<String>>,
    by_name: HashMap<String, Var>,
}

impl VarTable {
    pub fn new() -> VarTable {
        VarTable::default()
    }

    /// A table of `n` anonymous variables.
    pub fn anonymous(n: usize) -> VarTable {
        VarTable {
            names: vec![None; n],
            by_name: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, var: Var) -> bool {
        var.index() < self.names.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (0..self.names.len()).map(Var::from_index)
    }

    pub fn add_named(&mut self, name: &str) -> Result<Var, FormulaError> {
        if self.by_name.contains_key(name) {
            return Err(FormulaError::DuplicateName(name.to_string()));
        }
        let var = Var::from_index(self.names.len());
        self.names.push(Some(name.to_string()));
        self.by_name.insert(name.to_string(), var);
        Ok(var)
    }

    pub fn add_anonymous(&mut self) -> Var {
        self.names.push(None);
        Var::from_index(self.names.len() - 1)
    }

    /// Grows the table with anonymous variables until it holds `n` entries.
    pub fn ensure_len(&mut self, n: usize) {
        if self.names.len() < n {
            self.names.resize(n, None);
        }
    }

    pub fn set_name(&mut self, var: Var, name: &str) -> Result<(), FormulaError> {
        if !self.contains(var) {
            return Err(FormulaError::UnknownVar(var));
        }
        match self.by_name.get(name) {
            Some(&other) if other == var => return Ok(()),
            Some(_) => return Err(FormulaError::DuplicateName(name.to_string())),
            None => {}
        }
        if let Some(old) = self.names[var.index()].take() {
            self.by_name.remove(&old);
        }
        self.names[var.index()] = Some(name.to_string());
        self.by_name.insert(name.to_string(), var);
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, var: Var) -> Option<&str> {
        self.names.get(var.index()).and_then(|n| n.as_deref())
    }

    /// The symbolic name, or `v<id>` for anonymous variables.
    pub fn display(&self, var: Var) -> String {
        match self.name(var) {
            Some(name) => name.to_string(),
            None => var.to_string(),
        }
    }

    pub fn display_lit(&self, lit: Lit) -> String {
        if lit.is_positive() {
            self.display(lit.var)
        } else {
            format!("-{}", self.display(lit.var))
        }
    }

    /// Clause in the line syntax of property files: space-separated names,
    /// `-` marks negation, `FALSE` is the empty clause.
    pub fn display_clause(&self, clause: &Clause) -> String {
        if clause.is_empty() {
            return "FALSE".to_string();
        }
        clause
            .lits
            .iter()
            .map(|&l| self.display_lit(l))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A conjunction of clauses over a variable table. Clause order is kept, so
/// clause indices are stable handles. Equality ignores order and the table.
#[derive(Clone, Debug, Default)]
pub struct Cnf {
    clauses: Vec<Clause>,
    table: VarTable,
}

impl PartialEq for Cnf {
    fn eq(&self, other: &Cnf) -> bool {
        self.canonical_clauses() == other.canonical_clauses()
    }
}

impl Eq for Cnf {}

impl Cnf {
    pub fn new(table: VarTable) -> Cnf {
        Cnf {
            clauses: Vec::new(),
            table,
        }
    }

    pub fn from_clauses(
        table: VarTable,
        clauses: impl IntoIterator<Item = Clause>,
    ) -> Result<Cnf, FormulaError> {
        let mut cnf = Cnf::new(table);
        for clause in clauses {
            cnf.push(clause)?;
        }
        Ok(cnf)
    }

    /// Appends a clause and returns its index.
    pub fn push(&mut self, clause: Clause) -> Result<usize, FormulaError> {
        if let Some(var) = clause.vars().find(|&v| !self.table.contains(v)) {
            return Err(FormulaError::UnknownVar(var));
        }
        self.clauses.push(clause);
        Ok(self.clauses.len() - 1)
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, index: usize) -> Option<&Clause> {
        self.clauses.get(index)
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn table_mut(&mut self) -> &mut VarTable {
        &mut self.table
    }

    pub fn num_vars(&self) -> usize {
        self.table.len()
    }

    /// Variables that occur in some clause.
    pub fn occurring_vars(&self) -> BTreeSet<Var> {
        self.clauses.iter().flat_map(|c| c.vars()).collect()
    }

    /// Sum of clause sizes.
    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    pub fn evaluate(&self, a: &Assignment) -> Truth {
        let mut result = Truth::True;
        for clause in &self.clauses {
            match clause.eval(a) {
                Truth::False => return Truth::False,
                Truth::Undetermined => result = Truth::Undetermined,
                Truth::True => {}
            }
        }
        result
    }

    /// The clauses at `indices`, in their original relative order.
    pub fn select(&self, indices: &BTreeSet<usize>) -> Cnf {
        Cnf {
            clauses: indices
                .iter()
                .filter_map(|&i| self.clauses.get(i).cloned())
                .collect(),
            table: self.table.clone(),
        }
    }

    /// All clauses except those at `indices`.
    pub fn without(&self, indices: &BTreeSet<usize>) -> Cnf {
        Cnf {
            clauses: self
                .clauses
                .iter()
                .enumerate()
                .filter(|(i, _)| !indices.contains(i))
                .map(|(_, c)| c.clone())
                .collect(),
            table: self.table.clone(),
        }
    }

    /// Conjunction with another formula over the same variable space.
    pub fn and(&self, other: &Cnf) -> Cnf {
        let mut table = self.table.clone();
        table.ensure_len(other.table.len());
        Cnf {
            clauses: self.clauses.iter().chain(&other.clauses).cloned().collect(),
            table,
        }
    }

    /// The same clauses interpreted over a different variable table.
    pub fn with_table(&self, table: VarTable) -> Result<Cnf, FormulaError> {
        Cnf::from_clauses(table, self.clauses.iter().cloned())
    }

    /// Rewrites every literal through `map`. Variables missing from the map
    /// are reported as unknown.
    pub fn rename(&self, map: &HashMap<Var, Var>, table: VarTable) -> Result<Cnf, FormulaError> {
        let mut out = Cnf::new(table);
        for clause in &self.clauses {
            let lits = clause
                .lits
                .iter()
                .map(|l| {
                    map.get(&l.var)
                        .map(|&v| Lit::new(v, l.is_positive()))
                        .ok_or(FormulaError::UnknownVar(l.var))
                })
                .collect::<Result<Vec<_>, _>>()?;
            out.push(Clause::new(lits)?)?;
        }
        Ok(out)
    }

    pub fn canonical_clauses(&self) -> Vec<Clause> {
        let mut clauses = self.clauses.clone();
        clauses.sort();
        clauses
    }

    pub fn display_clause(&self, clause: &Clause) -> String {
        self.table.display_clause(clause)
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "TRUE");
        }
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| format!("({})", self.table.display_clause(c)))
            .collect();
        write!(f, "{}", parts.join(" & "))
    }
}

/// A mapping from a set of variables to Boolean values.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    values: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    /// Full assignment to `vars` read from the low bits of `bits`; the first
    /// variable is the most significant bit, so counting upwards enumerates
    /// assignments in ascending order.
    pub fn from_bits(vars: &[Var], bits: u64) -> Assignment {
        let n = vars.len();
        vars.iter()
            .enumerate()
            .map(|(i, &v)| (v, (bits >> (n - 1 - i)) & 1 == 1))
            .collect()
    }

    /// Inverse of [`Assignment::from_bits`]; `None` unless every variable is
    /// assigned.
    pub fn to_bits(&self, vars: &[Var]) -> Option<u64> {
        let mut bits = 0u64;
        for &v in vars {
            bits = (bits << 1) | self.get(v)? as u64;
        }
        Some(bits)
    }

    pub fn set(&mut self, var: Var, value: bool) -> Option<bool> {
        self.values.insert(var, value)
    }

    pub fn with(mut self, var: Var, value: bool) -> Assignment {
        self.values.insert(var, value);
        self
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = Var> + '_ {
        self.values.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values.iter().map(|(&v, &b)| (v, b))
    }

    /// True iff the domain is exactly `vars`.
    pub fn is_full_over(&self, vars: &[Var]) -> bool {
        let wanted: BTreeSet<Var> = vars.iter().copied().collect();
        wanted.len() == self.values.len() && wanted.iter().all(|v| self.values.contains_key(v))
    }

    /// True iff every variable of `vars` is assigned.
    pub fn covers(&self, vars: &[Var]) -> bool {
        vars.iter().all(|v| self.values.contains_key(v))
    }

    pub fn restrict(&self, vars: &[Var]) -> Assignment {
        vars.iter()
            .filter_map(|&v| self.get(v).map(|b| (v, b)))
            .collect()
    }

    /// Literals that hold under this assignment, one per assigned variable.
    pub fn lits(&self) -> Vec<Lit> {
        self.iter().map(|(v, b)| v.lit(b)).collect()
    }

    /// Renders the values of `vars` as a bit string, `-` for unassigned.
    pub fn bit_string(&self, vars: &[Var]) -> String {
        vars.iter()
            .map(|&v| match self.get(v) {
                Some(true) => '1',
                Some(false) => '0',
                None => '-',
            })
            .collect()
    }

    /// `name=value` pairs in the order of `vars`.
    pub fn display_with(&self, table: &VarTable, vars: &[Var]) -> String {
        vars.iter()
            .filter_map(|&v| {
                self.get(v)
                    .map(|b| format!("{}={}", table.display(v), b as u8))
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Assignment {
        Assignment {
            values: iter.into_iter().collect(),
        }
    }
}

/// Full assignments to `vars` in ascending order.
pub fn all_assignments(vars: &[Var]) -> impl Iterator<Item = Assignment> {
    assert!(vars.len() < 64);
    let vars = vars.to_vec();
    (0..1u64 << vars.len()).map(move |bits| Assignment::from_bits(&vars, bits))
}
