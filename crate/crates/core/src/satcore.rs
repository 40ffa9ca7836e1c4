// SPDX-License-Identifier: Apache-2.0

//! Satisfiability checks, implication tests and model enumeration.
//!
//! The decision procedure is plain DPLL: two-watched-literal unit
//! propagation, decisions in ascending variable order, `false` tried first,
//! chronological backtracking. No learning. Assumptions are enqueued as
//! level-zero units so the input formula is never modified.

use crate::formula::{all_assignments, Assignment, Clause, Cnf, Lit, Var};
use crate::limits::{CapExceeded, Limits};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    /// The model is full over the formula's variables and the assumptions.
    Satisfiable(Assignment),
    Unsatisfiable,
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Satisfiable(_))
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            SatOutcome::Satisfiable(m) => Some(m),
            SatOutcome::Unsatisfiable => None,
        }
    }

    pub fn into_model(self) -> Option<Assignment> {
        match self {
            SatOutcome::Satisfiable(m) => Some(m),
            SatOutcome::Unsatisfiable => None,
        }
    }
}

pub fn is_satisfiable(f: &Cnf, assumptions: &Assignment) -> SatOutcome {
    Solver::new(f).solve(&assumptions.lits())
}

/// True iff `f ∧ ¬d` is unsatisfiable.
pub fn implies_clause(f: &Cnf, d: &Clause) -> bool {
    Solver::new(f).implies(d)
}

/// True iff `f` implies every clause of `g`.
pub fn implies_formula(f: &Cnf, g: &Cnf) -> bool {
    let mut solver = Solver::new(f);
    g.clauses().iter().all(|d| solver.implies(d))
}

/// The full assignments to `vars` under which `f` is satisfiable, in
/// ascending order (first variable most significant).
pub fn enumerate_sat(
    f: &Cnf,
    vars: &[Var],
    limits: &Limits,
) -> Result<Vec<Assignment>, CapExceeded> {
    limits.check(vars.len())?;
    let mut solver = Solver::new(f);
    Ok(all_assignments(vars)
        .filter(|a| solver.solve(&a.lits()).is_sat())
        .collect())
}

type Code = usize;

fn code(lit: Lit) -> Code {
    lit.var().index() * 2 + (!lit.is_positive()) as usize
}

#[derive(Clone, Copy)]
struct Level {
    trail_start: usize,
    var: usize,
    flipped: bool,
}

/// A reusable solver over one formula. Each [`Solver::solve`] call starts
/// from scratch with its own assumptions.
#[derive(Clone)]
pub struct Solver {
    num_vars: usize,
    has_empty: bool,
    units: Vec<Code>,
    clauses: Vec<Vec<Code>>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<Code>,
    qhead: usize,
}

impl Solver {
    pub fn new(f: &Cnf) -> Solver {
        let num_vars = f
            .clauses()
            .iter()
            .flat_map(|c| c.vars())
            .map(|v| v.index() + 1)
            .max()
            .unwrap_or(0)
            .max(f.num_vars());
        let mut solver = Solver {
            num_vars,
            has_empty: false,
            units: Vec::new(),
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            value: vec![0; num_vars],
            trail: Vec::new(),
            qhead: 0,
        };
        for clause in f.clauses() {
            match clause.len() {
                0 => solver.has_empty = true,
                1 => solver.units.push(code(clause.lits()[0])),
                _ => {
                    let idx = solver.clauses.len();
                    let lits: Vec<Code> = clause.lits().iter().map(|&l| code(l)).collect();
                    solver.watches[lits[0]].push(idx);
                    solver.watches[lits[1]].push(idx);
                    solver.clauses.push(lits);
                }
            }
        }
        solver
    }

    fn grow(&mut self, num_vars: usize) {
        if num_vars > self.num_vars {
            self.num_vars = num_vars;
            self.value.resize(num_vars, 0);
            self.watches.resize(2 * num_vars, Vec::new());
        }
    }

    fn lit_value(&self, c: Code) -> i8 {
        let v = self.value[c / 2];
        if c.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }

    /// Makes literal `c` true. Returns false on an immediate conflict.
    fn enqueue(&mut self, c: Code) -> bool {
        match self.lit_value(c) {
            1 => true,
            -1 => false,
            _ => {
                self.value[c / 2] = if c.is_multiple_of(2) { 1 } else { -1 };
                self.trail.push(c);
                true
            }
        }
    }

    /// Unit propagation. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let false_lit = self.trail[self.qhead] ^ 1;
            self.qhead += 1;
            let mut watchers = std::mem::take(&mut self.watches[false_lit]);
            let mut i = 0;
            let mut conflict = false;
            while i < watchers.len() {
                let ci = watchers[i];
                let clause = &mut self.clauses[ci];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.lit_value(first) == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[ci].len() {
                    let cand = self.clauses[ci][k];
                    if self.lit_value(cand) != -1 {
                        self.clauses[ci].swap(1, k);
                        self.watches[cand].push(ci);
                        watchers.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                i += 1;
                if !self.enqueue(first) {
                    conflict = true;
                    break;
                }
            }
            self.watches[false_lit] = watchers;
            if conflict {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        for &c in &self.trail[len..] {
            self.value[c / 2] = 0;
        }
        self.trail.truncate(len);
        self.qhead = len;
    }

    fn reset(&mut self) {
        self.undo_to(0);
    }

    /// Decides satisfiability under the assumed literals.
    pub fn solve(&mut self, assumptions: &[Lit]) -> SatOutcome {
        self.reset();
        let needed = assumptions
            .iter()
            .map(|l| l.var().index() + 1)
            .max()
            .unwrap_or(0);
        self.grow(needed);
        if self.has_empty {
            return SatOutcome::Unsatisfiable;
        }
        for i in 0..self.units.len() {
            if !self.enqueue(self.units[i]) {
                return SatOutcome::Unsatisfiable;
            }
        }
        for &lit in assumptions {
            if !self.enqueue(code(lit)) {
                return SatOutcome::Unsatisfiable;
            }
        }
        let mut levels: Vec<Level> = Vec::new();
        let mut ok = self.propagate();
        loop {
            if !ok {
                // chronological backtracking to the newest unflipped decision
                loop {
                    let Some(level) = levels.pop() else {
                        self.reset();
                        return SatOutcome::Unsatisfiable;
                    };
                    self.undo_to(level.trail_start);
                    if !level.flipped {
                        levels.push(Level {
                            flipped: true,
                            ..level
                        });
                        self.enqueue(level.var * 2);
                        break;
                    }
                }
            } else {
                let next = (0..self.num_vars).find(|&v| self.value[v] == 0);
                let Some(var) = next else {
                    let model = self
                        .value
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| (Var::from_index(i), v == 1))
                        .collect();
                    self.reset();
                    return SatOutcome::Satisfiable(model);
                };
                levels.push(Level {
                    trail_start: self.trail.len(),
                    var,
                    flipped: false,
                });
                self.enqueue(var * 2 + 1);
            }
            ok = self.propagate();
        }
    }

    /// True iff the formula implies `d`.
    pub fn implies(&mut self, d: &Clause) -> bool {
        let negated: Vec<Lit> = d.lits().iter().map(|&l| !l).collect();
        !self.solve(&negated).is_sat()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::VarTable;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(i: u32) -> Var {
        Var::new(i)
    }

    fn cnf(n: usize, clauses: &[&[i64]]) -> Cnf {
        Cnf::from_clauses(
            VarTable::anonymous(n),
            clauses
                .iter()
                .map(|c| Clause::new(c.iter().map(|&x| Lit::from_dimacs(x).unwrap())).unwrap()),
        )
        .unwrap()
    }

    fn brute_force_sat(f: &Cnf, assumptions: &Assignment) -> bool {
        let vars: Vec<Var> = f.table().vars().collect();
        all_assignments(&vars).any(|a| {
            assumptions.iter().all(|(v, b)| a.get(v) == Some(b)) && f.evaluate(&a).is_true()
        })
    }

    fn random_cnf(rng: &mut impl Rng, n: usize, m: usize, k: usize) -> Cnf {
        let mut f = Cnf::new(VarTable::anonymous(n));
        while f.len() < m {
            let lits = (0..k).map(|_| Lit::new(Var::from_index(rng.gen_range(0..n)), rng.gen()));
            if let Ok(c) = Clause::new(lits) {
                f.push(c).unwrap();
            }
        }
        f
    }

    #[test]
    fn basic_verdicts() {
        assert!(!is_satisfiable(&cnf(1, &[&[1], &[-1]]), &Assignment::new()).is_sat());
        // Example-1 AND encoding forces v3 once v1 = v2 = 1
        let and = cnf(3, &[&[1, -3], &[2, -3], &[-1, -2, 3]]);
        let out = is_satisfiable(&and, &Assignment::new().with(v(1), true).with(v(2), true));
        assert_eq!(out.model().unwrap().get(v(3)), Some(true));
        assert!(!is_satisfiable(&cnf(1, &[&[]]), &Assignment::new()).is_sat());
        assert!(is_satisfiable(&cnf(0, &[]), &Assignment::new()).is_sat());
    }

    #[test]
    fn assumptions_outside_the_table_are_kept() {
        let f = cnf(1, &[&[1]]);
        let model = is_satisfiable(&f, &Assignment::new().with(v(4), true))
            .into_model()
            .unwrap();
        assert_eq!(model.get(v(4)), Some(true));
        assert_eq!(model.get(v(1)), Some(true));
    }

    #[test]
    fn implication_examples() {
        let f = cnf(2, &[&[2]]);
        assert!(implies_clause(
            &f,
            &Clause::new([v(1).pos(), v(2).pos()]).unwrap()
        ));
        let g = cnf(2, &[&[-1, 2]]);
        assert!(!implies_clause(&g, &Clause::unit(v(1).neg())));
        assert!(implies_formula(&g, &Cnf::new(VarTable::anonymous(2))));
        assert!(!implies_formula(&g, &cnf(2, &[&[-1]])));
    }

    #[test]
    fn enumerate_examples() {
        // vars x=1 y=2 z=3; F = (x ∨ y) ∧ (z ∨ ¬y), V = {x, z}
        let f = cnf(3, &[&[1, 2], &[3, -2]]);
        let got = enumerate_sat(&f, &[v(1), v(3)], &Limits::default()).unwrap();
        let bits: Vec<u64> = got
            .iter()
            .map(|a| a.to_bits(&[v(1), v(3)]).unwrap())
            .collect();
        assert_eq!(bits, vec![0b01, 0b10, 0b11]);
        assert!(
            enumerate_sat(&cnf(1, &[&[1], &[-1]]), &[v(1)], &Limits::default())
                .unwrap()
                .is_empty()
        );
        assert_eq!(
            enumerate_sat(&cnf(1, &[]), &[v(1)], &Limits::default())
                .unwrap()
                .len(),
            2
        );
        let vars: Vec<Var> = (1..=17).map(Var::new).collect();
        assert_eq!(
            enumerate_sat(&cnf(17, &[]), &vars, &Limits::default()),
            Err(CapExceeded {
                requested: 17,
                cap: 16
            })
        );
    }

    #[test]
    fn agrees_with_enumeration_on_random_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..600 {
            let n = rng.gen_range(1..=12);
            let m = rng.gen_range(0..=n * 5);
            let f = random_cnf(&mut rng, n, m, 3);
            let mut assumptions = Assignment::new();
            if case % 3 == 0 {
                assumptions.set(Var::from_index(rng.gen_range(0..n)), rng.gen());
            }
            let got = is_satisfiable(&f, &assumptions);
            assert_eq!(
                got.is_sat(),
                brute_force_sat(&f, &assumptions),
                "case {case}"
            );
            if let Some(model) = got.model() {
                assert!(f.evaluate(model).is_true());
                for (var, value) in assumptions.iter() {
                    assert_eq!(model.get(var), Some(value));
                }
            }
        }
    }

    #[test]
    fn implication_is_transitive_on_random_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut chains = 0;
        for _ in 0..400 {
            let n = rng.gen_range(2..=6);
            let f = {
                let k = rng.gen_range(2..8);
                random_cnf(&mut rng, n, k, 2)
            };
            let g = {
                let k = rng.gen_range(1..3);
                random_cnf(&mut rng, n, k, 3)
            };
            let h = random_cnf(&mut rng, n, 1, 3);
            if implies_formula(&f, &g) && implies_formula(&g, &h) {
                chains += 1;
                assert!(implies_formula(&f, &h));
            }
        }
        assert!(chains > 0);
    }

    #[test]
    fn implies_clause_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=10);
            let f = {
                let k = rng.gen_range(0..n * 3);
                random_cnf(&mut rng, n, k, 3)
            };
            let d = loop {
                let lits = (0..rng.gen_range(0..4))
                    .map(|_| Lit::new(Var::from_index(rng.gen_range(0..n)), rng.gen()));
                if let Ok(c) = Clause::new(lits) {
                    break c;
                }
            };
            let vars: Vec<Var> = f.table().vars().collect();
            let expected = all_assignments(&vars)
                .filter(|a| f.evaluate(a).is_true())
                .all(|a| d.eval(&a).is_true());
            assert_eq!(implies_clause(&f, &d), expected);
        }
    }
}
