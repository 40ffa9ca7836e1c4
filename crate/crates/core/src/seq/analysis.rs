// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeSet, HashMap};

use super::{SeqError, SequentialCircuit};
use crate::formula::{Assignment, Clause, Cnf, Var, VarTable};
use crate::limits::{CapExceeded, Limits};
use crate::quant::{
    clean_solution, maxterm_cnf, partial_qe, quant_eliminate, PqeProblem, QuantProblem,
};

/// Largest number of state bits any analysis accepts.
pub const MAX_STATE_BITS: usize = 12;

/// Variables of one time frame of an unrolled machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub states: Vec<Var>,
    pub inputs: Vec<Var>,
    /// Next-state variables; these are the next frame's `states`.
    pub next: Vec<Var>,
    /// Core net index to unrolled variable.
    pub map: Vec<Var>,
}

/// `F_{1,n}`: `n` copies of the core with frame `j`'s next-state variables
/// shared with frame `j+1`'s states. Variables are named `<net>@<frame>`,
/// frames counted from 1; state `s` of frame `j+1` is `s@<j+1>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unrolled {
    pub formula: Cnf,
    /// The initial-state predicate on the first frame.
    pub init: Cnf,
    pub frames: Vec<Frame>,
}

impl Unrolled {
    pub fn final_states(&self) -> &[Var] {
        &self.frames.last().expect("at least one frame").next
    }

    /// `F_{1,n} ∧ I_1`, with the clauses of `F_{1,n}` first.
    pub fn with_init(&self) -> Cnf {
        self.formula.and(&self.init)
    }
}

/// A set of states both as a canonical maxterm CNF over the state variables
/// and as explicit state numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachSet {
    pub formula: Cnf,
    pub states: BTreeSet<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McOutcome {
    Holds,
    /// A shortest trace from an initial state to a state falsifying the
    /// property.
    Cex(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MakeInvOutcome {
    Invariant(Cnf),
    Trivial,
}

fn check_states(m: &SequentialCircuit) -> Result<usize, SeqError> {
    let k = m.states().len();
    if k > MAX_STATE_BITS {
        return Err(CapExceeded {
            requested: k,
            cap: MAX_STATE_BITS,
        }
        .into());
    }
    Ok(k)
}

fn require_stuttering(m: &SequentialCircuit) -> Result<(), SeqError> {
    check_states(m)?;
    if m.is_stuttering() {
        Ok(())
    } else {
        Err(SeqError::NoStuttering)
    }
}

fn check_over_states(m: &SequentialCircuit, q: &Cnf) -> Result<(), SeqError> {
    let states = m.states();
    match q.occurring_vars().into_iter().find(|v| !states.contains(v)) {
        Some(v) => Err(SeqError::NotOverStates(q.table().display(v))),
        None => Ok(()),
    }
}

/// Explicit state graph.
struct Graph {
    init: Vec<u64>,
    succ: Vec<Vec<u64>>,
}

impl Graph {
    fn build(m: &SequentialCircuit, limits: &Limits) -> Result<Graph, SeqError> {
        let k = check_states(m)?;
        let n = m.inputs().len();
        limits.check(k + n)?;
        let init = (0..1u64 << k)
            .filter(|&s| m.init().evaluate(&m.state_assignment(s)).is_true())
            .collect();
        let succ = (0..1u64 << k)
            .map(|s| {
                let next: BTreeSet<u64> = (0..1u64 << n).map(|x| m.step(s, x)).collect();
                next.into_iter().collect()
            })
            .collect();
        Ok(Graph { init, succ })
    }

    /// BFS levels from the initial states, each in ascending order, and the
    /// smallest predecessor through which each state was first reached.
    fn bfs(&self) -> (Vec<Vec<u64>>, Vec<Option<u64>>) {
        let mut seen = vec![false; self.succ.len()];
        let mut parent = vec![None; self.succ.len()];
        for &s in &self.init {
            seen[s as usize] = true;
        }
        let mut levels = Vec::new();
        let mut current = self.init.clone();
        while !current.is_empty() {
            let mut next = BTreeSet::new();
            for &s in &current {
                for &t in &self.succ[s as usize] {
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        parent[t as usize] = Some(s);
                        next.insert(t);
                    }
                }
            }
            levels.push(current);
            current = next.into_iter().collect();
        }
        (levels, parent)
    }
}

fn set_formula(m: &SequentialCircuit, states: &BTreeSet<u64>) -> Result<Cnf, SeqError> {
    let vars = m.states();
    Ok(maxterm_cnf(m.core().table(), &vars, |a| {
        states.contains(&a.to_bits(&vars).expect("full over states"))
    })?)
}

fn formula_states(m: &SequentialCircuit, f: &Cnf) -> BTreeSet<u64> {
    let k = m.states().len();
    (0..1u64 << k)
        .filter(|&s| f.evaluate(&m.state_assignment(s)).is_true())
        .collect()
}

fn onto_states(m: &SequentialCircuit, f: &Cnf, from: &[Var], to: &[Var]) -> Result<Cnf, SeqError> {
    onto(f, from, to, m.core().table().clone())
}

/// `T(S, S′) = ∃X,Y[F]` over the state and next-state variables.
pub fn transition_relation(m: &SequentialCircuit, limits: &Limits) -> Result<Cnf, SeqError> {
    check_states(m)?;
    let free: Vec<Var> = m.states().into_iter().chain(m.next_states()).collect();
    let p = QuantProblem::new(m.core().tseitin().cnf, &free)?;
    Ok(quant_eliminate(&p, limits)?)
}

pub fn unroll(m: &SequentialCircuit, n: usize) -> Result<Unrolled, SeqError> {
    if n == 0 {
        return Err(SeqError::NoFrames);
    }
    let core = m.core();
    let enc = core.tseitin();
    let next_of: HashMap<Var, usize> = m
        .next_states()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let state_idx: HashMap<Var, usize> = m
        .states()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let mut table = VarTable::new();
    let fresh = |table: &mut VarTable, name: &str, frame: usize| {
        table
            .add_named(&format!("{name}@{frame}"))
            .expect("frame-qualified names are unique")
    };
    let mut states: Vec<Var> = m
        .states()
        .iter()
        .map(|&s| fresh(&mut table, m.name(s), 1))
        .collect();
    let mut clauses = Vec::new();
    let mut frames = Vec::with_capacity(n);
    for j in 1..=n {
        let mut map = vec![Var::from_index(0); core.num_nets()];
        for v in core.table().vars() {
            if let Some(&i) = state_idx.get(&v) {
                map[v.index()] = states[i];
            } else if !next_of.contains_key(&v) {
                map[v.index()] = fresh(&mut table, m.name(v), j);
            }
        }
        let next: Vec<Var> = m
            .states()
            .iter()
            .map(|&s| fresh(&mut table, m.name(s), j + 1))
            .collect();
        for (&v, &i) in &next_of {
            map[v.index()] = next[i];
        }
        for c in enc.cnf.clauses() {
            clauses.push(
                Clause::new(
                    c.lits()
                        .iter()
                        .map(|l| map[l.var().index()].lit(l.is_positive())),
                )
                .expect("renaming is injective"),
            );
        }
        frames.push(Frame {
            states: states.clone(),
            inputs: m.inputs().iter().map(|v| map[v.index()]).collect(),
            next: next.clone(),
            map,
        });
        states = next;
    }
    let formula = Cnf::from_clauses(table.clone(), clauses)?;
    let first = &frames[0];
    let init = onto(m.init(), &m.states(), &first.states, table)?;
    Ok(Unrolled {
        formula,
        init,
        frames,
    })
}

/// Maps `from[i]` to `to[i]`, producing a formula over `table`.
fn onto(f: &Cnf, from: &[Var], to: &[Var], table: VarTable) -> Result<Cnf, SeqError> {
    let map: HashMap<Var, Var> = from.iter().copied().zip(to.iter().copied()).collect();
    Ok(f.rename(&map, table)?)
}

/// States reachable from the initial states in at most `n` transitions
/// (quantifier elimination on the unrolled formula), or in any number of
/// transitions when `n` is `None` (BFS fixpoint).
pub fn reachable(
    m: &SequentialCircuit,
    n: Option<usize>,
    limits: &Limits,
) -> Result<ReachSet, SeqError> {
    require_stuttering(m)?;
    let states = m.states();
    let formula = match n {
        None => {
            let (levels, _) = Graph::build(m, limits)?.bfs();
            let set: BTreeSet<u64> = levels.into_iter().flatten().collect();
            return Ok(ReachSet {
                formula: set_formula(m, &set)?,
                states: set,
            });
        }
        Some(0) => quant_eliminate(&QuantProblem::new(m.init().clone(), &states)?, limits)?,
        Some(n) => {
            let u = unroll(m, n)?;
            let p = QuantProblem::new(u.with_init(), u.final_states())?;
            let q = quant_eliminate(&p, limits)?;
            onto_states(m, &q, u.final_states(), &states)?
        }
    };
    Ok(ReachSet {
        states: formula_states(m, &formula),
        formula,
    })
}

/// Largest BFS distance from the initial states to a reachable state.
pub fn diameter(m: &SequentialCircuit, limits: &Limits) -> Result<usize, SeqError> {
    require_stuttering(m)?;
    let (levels, _) = Graph::build(m, limits)?.bfs();
    Ok(levels.len().saturating_sub(1))
}

/// Takes clause `clause` of `F_{1,n}` out of `∃W[I_1 ∧ F_{1,n}]` with the
/// last frame's states free; the cleaned result is returned over the
/// machine's state variables.
pub fn gen_safety_property(
    m: &SequentialCircuit,
    n: usize,
    clause: usize,
    limits: &Limits,
) -> Result<Cnf, SeqError> {
    require_stuttering(m)?;
    let u = unroll(m, n)?;
    if clause >= u.formula.len() {
        return Err(SeqError::BadClauseIndex(clause));
    }
    let p = PqeProblem::new(u.with_init(), [clause].into(), u.final_states())?;
    let q = clean_solution(&partial_qe(&p, limits)?, &p.h2());
    onto_states(m, &q, u.final_states(), &m.states())
}

/// Explicit-state check that every reachable state satisfies `q`.
pub fn model_check(m: &SequentialCircuit, q: &Cnf, limits: &Limits) -> Result<McOutcome, SeqError> {
    check_over_states(m, q)?;
    let (levels, parent) = Graph::build(m, limits)?.bfs();
    for level in &levels {
        if let Some(&bad) = level
            .iter()
            .find(|&&s| !q.evaluate(&m.state_assignment(s)).is_true())
        {
            let mut trace = vec![bad];
            while let Some(p) = parent[*trace.last().expect("non-empty") as usize] {
                trace.push(p);
            }
            trace.reverse();
            return Ok(McOutcome::Cex(trace));
        }
    }
    Ok(McOutcome::Holds)
}

/// States reachable from `q`-states in one transition, as a formula over
/// the state variables.
pub fn one_step_image(q: &Cnf, m: &SequentialCircuit, limits: &Limits) -> Result<Cnf, SeqError> {
    require_stuttering(m)?;
    check_over_states(m, q)?;
    let table = m.core().table().clone();
    if q.is_empty() {
        return Ok(Cnf::new(table));
    }
    let q = q.with_table(table)?;
    let f = q.and(&m.core().tseitin().cnf);
    let p = PqeProblem::new(f, (0..q.len()).collect(), &m.next_states())?;
    let r = partial_qe(&p, limits)?;
    onto_states(m, &r, &m.next_states(), &m.states())
}

/// Model-checks `q0`; on a counterexample ending in state `s`, replaces the
/// property by its one-step images until `s` satisfies it. When the images
/// stop growing with `s` still excluded, the clause excluding `s` is
/// dropped.
pub fn make_inv(
    m: &SequentialCircuit,
    q0: &Cnf,
    limits: &Limits,
) -> Result<MakeInvOutcome, SeqError> {
    check_over_states(m, q0)?;
    let mut q = q0.with_table(m.core().table().clone())?;
    loop {
        let bad = match model_check(m, &q, limits)? {
            McOutcome::Holds => return Ok(MakeInvOutcome::Invariant(q)),
            McOutcome::Cex(trace) => *trace.last().expect("non-empty trace"),
        };
        let s: Assignment = m.state_assignment(bad);
        while !q.evaluate(&s).is_true() {
            let r = one_step_image(&q, m, limits)?;
            if r == q {
                let excluded = Clause::maxterm(&s, &m.states())?;
                let kept = r.clauses().iter().filter(|&c| *c != excluded).cloned();
                q = Cnf::from_clauses(r.table().clone(), kept)?;
                break;
            }
            q = r;
        }
        if q.is_empty() {
            return Ok(MakeInvOutcome::Trivial);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::counter;
    use super::*;
    use crate::formula::Lit;
    use crate::satcore::implies_formula;

    fn m3s() -> SequentialCircuit {
        counter(2, 3).add_stuttering().unwrap()
    }

    fn m4s() -> SequentialCircuit {
        counter(2, 4).add_stuttering().unwrap()
    }

    fn clause(m: &SequentialCircuit, lits: &[(&str, bool)]) -> Clause {
        Clause::new(
            lits.iter()
                .map(|&(n, b)| Lit::new(m.core().net(n).unwrap(), b)),
        )
        .unwrap()
    }

    fn cnf(m: &SequentialCircuit, clauses: &[&[(&str, bool)]]) -> Cnf {
        Cnf::from_clauses(
            m.core().table().clone(),
            clauses.iter().map(|c| clause(m, c)),
        )
        .unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn transition_relation_of_m3() {
        let m = counter(2, 3);
        let t = transition_relation(&m, &lim()).unwrap();
        let point = |s: u64, t_: u64| {
            let mut a = m.state_assignment(s);
            for (i, &v) in m.next_states().iter().enumerate() {
                a.set(v, t_ >> (1 - i) & 1 == 1);
            }
            t.evaluate(&a).is_true()
        };
        assert!(point(0b00, 0b01));
        assert!(!point(0b00, 0b10));
        let ms = m3s();
        let t = transition_relation(&ms, &lim()).unwrap();
        let p = QuantProblem::new(t, &ms.next_states()).unwrap();
        assert!(quant_eliminate(&p, &lim()).unwrap().is_empty());
    }

    #[test]
    fn reachability_of_m3() {
        let m = m3s();
        assert_eq!(
            reachable(&m, Some(1), &lim()).unwrap().states,
            [0, 1].into()
        );
        let all = reachable(&m, None, &lim()).unwrap();
        assert_eq!(all.states, [0, 1, 2].into());
        assert_eq!(all.formula, cnf(&m, &[&[("s1", false), ("s0", false)]]));
        assert_eq!(reachable(&m, Some(3), &lim()).unwrap(), all);
        assert_eq!(reachable(&m, Some(0), &lim()).unwrap().states, [0].into());
        assert_eq!(
            reachable(&counter(2, 3), None, &lim()),
            Err(SeqError::NoStuttering)
        );
        assert_eq!(diameter(&m, &lim()).unwrap(), 2);
        assert_eq!(diameter(&m4s(), &lim()).unwrap(), 3);
        assert_eq!(
            diameter(&counter(1, 1).add_stuttering().unwrap(), &lim()).unwrap(),
            0
        );
    }

    #[test]
    fn unroll_structure() {
        let m = m3s();
        let core_clauses = m.core().tseitin().cnf.len();
        let u = unroll(&m, 3).unwrap();
        assert_eq!(u.formula.len(), 3 * core_clauses);
        for w in u.frames.windows(2) {
            assert_eq!(w[0].next, w[1].states);
        }
        assert_eq!(u.formula.table().display(u.frames[1].states[0]), "s1@2");
        assert_eq!(u.init.len(), 2);
        assert_eq!(unroll(&m, 0), Err(SeqError::NoFrames));
    }

    #[test]
    fn safety_properties_hold_beyond_diameter() {
        let m = m3s();
        let n = 3;
        let reach = reachable(&m, None, &lim()).unwrap();
        let u = unroll(&m, n).unwrap();
        for c in 0..u.formula.len() {
            let q = gen_safety_property(&m, n, c, &lim()).unwrap();
            assert!(implies_formula(&reach.formula, &q), "clause {c}");
            assert_eq!(model_check(&m, &q, &lim()).unwrap(), McOutcome::Holds);
        }
        assert_eq!(
            gen_safety_property(&m, n, u.formula.len(), &lim()),
            Err(SeqError::BadClauseIndex(u.formula.len()))
        );
    }

    #[test]
    fn model_check_examples() {
        let m = m3s();
        let inv = cnf(&m, &[&[("s1", false), ("s0", false)]]);
        assert_eq!(model_check(&m, &inv, &lim()).unwrap(), McOutcome::Holds);
        let q = cnf(&m, &[&[("s0", false)]]);
        assert_eq!(
            model_check(&m, &q, &lim()).unwrap(),
            McOutcome::Cex(vec![0b00, 0b01])
        );
        let empty = Cnf::new(m.core().table().clone());
        assert_eq!(model_check(&m, &empty, &lim()).unwrap(), McOutcome::Holds);
    }

    #[test]
    fn images() {
        let m = m3s();
        let only_00 = cnf(&m, &[&[("s1", false)], &[("s0", false)]]);
        let r = one_step_image(&only_00, &m, &lim()).unwrap();
        assert_eq!(formula_states(&m, &r), [0, 1].into());
        let empty = Cnf::new(m.core().table().clone());
        assert!(one_step_image(&empty, &m, &lim()).unwrap().is_empty());
        let m4 = m4s();
        let three = cnf(&m4, &[&[("s1", false), ("s0", false)]]);
        assert!(one_step_image(&three, &m4, &lim()).unwrap().is_empty());
    }

    #[test]
    fn make_inv_examples() {
        let m = m3s();
        let inv = cnf(&m, &[&[("s1", false), ("s0", false)]]);
        assert_eq!(
            make_inv(&m, &inv, &lim()).unwrap(),
            MakeInvOutcome::Invariant(inv.clone())
        );
        let m4 = m4s();
        let q0 = cnf(&m4, &[&[("s1", false), ("s0", false)]]);
        assert_eq!(make_inv(&m4, &q0, &lim()).unwrap(), MakeInvOutcome::Trivial);
        let empty = Cnf::new(m.core().table().clone());
        assert_eq!(
            make_inv(&m, &empty, &lim()).unwrap(),
            MakeInvOutcome::Invariant(empty)
        );
    }

    #[test]
    fn make_inv_drops_clause_outside_image_closure() {
        // a is set after one step, b never changes; q0 allows only 10, which
        // excludes the initial state 00 and is closed under images
        let m = SequentialCircuit::parse(
            "GATE one = CONST1\nGATE nb = BUF b\nLATCH a one 0\nLATCH b nb 0\n",
        )
        .unwrap()
        .add_stuttering()
        .unwrap();
        let q0 = cnf(&m, &[&[("a", true), ("b", true)], &[("b", false)]]);
        let MakeInvOutcome::Invariant(q) = make_inv(&m, &q0, &lim()).unwrap() else {
            panic!("expected an invariant");
        };
        assert!(implies_formula(&q0, &q));
        assert_eq!(formula_states(&m, &q), [0b00, 0b10].into());
        assert_eq!(model_check(&m, &q, &lim()).unwrap(), McOutcome::Holds);
    }
}
