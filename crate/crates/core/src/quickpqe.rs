// SPDX-License-Identifier: Apache-2.0

//! Fast path for taking one widened gate clause out of the quantifier scope
//! with two circuit simulations.
//!
//! The gate clause `C` is split on the primary inputs using the test `x′`:
//! the clause that stays is `C′ = C ∨ maxterm(x′)`. The first run simulates
//! `x′`. If the gate's inputs already satisfy `C`, `C′` is redundant.
//! Otherwise the second run forces the gate to falsify `C` and the outputs of
//! the two runs are compared.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Encoding};
use crate::formula::{all_assignments, Assignment, Clause, Cnf, Lit, Var};
use crate::limits::{CapExceeded, Limits};
use crate::quant::{split_clause, PqeProblem};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QuickPqeError {
    #[error("clause {0} is not a defining clause of a gate")]
    ClauseNotGateClause(usize),
    #[error("clause {0} contains a primary input")]
    ClauseTouchesInputs(usize),
    #[error("variable `{0}` is neither a primary input nor an output")]
    ForeignVariable(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuickPqeOutcome {
    Redundant,
    Property {
        q: Cnf,
        first_run: Assignment,
        second_run: Assignment,
    },
}

impl QuickPqeOutcome {
    /// The PQE solution: empty when redundant.
    pub fn solution(&self, enc: &Encoding) -> Cnf {
        match self {
            QuickPqeOutcome::Redundant => Cnf::new(enc.cnf.table().clone()),
            QuickPqeOutcome::Property { q, .. } => q.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuickPqeRun {
    pub outcome: QuickPqeOutcome,
    pub gate: usize,
    /// `C ∨ maxterm(x′)`.
    pub widened: Clause,
    /// Gate evaluations over both runs.
    pub gate_evals: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingleTestReport {
    /// `Q` holds for every input other than the test.
    pub other_inputs_free: bool,
    /// `Q` holds on the circuit's response to the test.
    pub accepts_response: bool,
    /// `Q` rejects some other output under the test.
    pub rejects_other_output: bool,
}

impl SingleTestReport {
    pub fn holds(&self) -> bool {
        self.other_inputs_free && self.accepts_response && self.rejects_other_output
    }
}

/// Checks the clause shape and returns (gate, output literal).
fn gate_clause(
    circuit: &Circuit,
    enc: &Encoding,
    index: usize,
) -> Result<(usize, Lit), QuickPqeError> {
    let not_gate = QuickPqeError::ClauseNotGateClause(index);
    let c = enc.cnf.clause(index).ok_or(not_gate.clone())?;
    let gate = enc.map.gate_of_clause(index).ok_or(not_gate.clone())?;
    let g = &circuit.gates()[gate];
    let out = c.lit_of(enc.map.var_of(g.output)).ok_or(not_gate.clone())?;
    let pins: BTreeSet<Var> = g.inputs.iter().map(|&v| enc.map.var_of(v)).collect();
    if c.vars().any(|v| v != out.var() && !pins.contains(&v)) {
        return Err(not_gate);
    }
    if c.vars()
        .any(|v| circuit.inputs().contains(&enc.map.net_of(v)))
    {
        return Err(QuickPqeError::ClauseTouchesInputs(index));
    }
    Ok((gate, out))
}

fn test_maxterm(circuit: &Circuit, test: &Assignment) -> Result<Clause, QuickPqeError> {
    circuit.input_bits(test)?;
    Ok(Clause::maxterm(test, circuit.inputs()).expect("test covers the inputs"))
}

/// Takes `C ∨ maxterm(test)` out of `∃Y[…]` for the gate clause `clause` of
/// `enc = circuit.tseitin()`.
pub fn quick_pqe(
    circuit: &Circuit,
    enc: &Encoding,
    clause: usize,
    test: &Assignment,
) -> Result<QuickPqeRun, QuickPqeError> {
    let (gate, out_lit) = gate_clause(circuit, enc, clause)?;
    let maxterm = test_maxterm(circuit, test)?;
    let c = &enc.cnf.clauses()[clause];
    let widened = c.or(&maxterm).expect("clause avoids the inputs");
    let bits = circuit.input_bits(test)?;

    let mut gate_evals = 0;
    let first = circuit.eval_dense(&bits, None, &mut gate_evals);
    let value =
        |values: &[bool], lit: Lit| lit.satisfied_by(values[enc.map.net_of(lit.var()).index()]);
    let done = |outcome, gate_evals| QuickPqeRun {
        outcome,
        gate,
        widened: widened.clone(),
        gate_evals,
    };
    if c.lits().iter().any(|&l| l != out_lit && value(&first, l)) {
        return Ok(done(QuickPqeOutcome::Redundant, gate_evals));
    }
    let forced = !out_lit.is_positive();
    let second = circuit.eval_dense(&bits, Some((gate, forced)), &mut gate_evals);
    let differing: Vec<Var> = circuit
        .outputs()
        .iter()
        .copied()
        .filter(|z| first[z.index()] != second[z.index()])
        .collect();
    if differing.is_empty() {
        return Ok(done(QuickPqeOutcome::Redundant, gate_evals));
    }
    let mut q = Cnf::new(enc.cnf.table().clone());
    for z in differing {
        let z_var = enc.map.var_of(z);
        q.push(
            maxterm
                .with_lit(Lit::new(z_var, first[z.index()]))
                .expect("outputs are not inputs"),
        )
        .expect("circuit variables");
    }
    let project = |values: &[bool]| -> Assignment {
        circuit
            .outputs()
            .iter()
            .map(|&z| (enc.map.var_of(z), values[z.index()]))
            .collect()
    };
    Ok(done(
        QuickPqeOutcome::Property {
            q,
            first_run: project(&first),
            second_run: project(&second),
        },
        gate_evals,
    ))
}

/// The PQE problem that [`quick_pqe`] solves: `C` replaced by its split on
/// the test literals, taking out `C ∨ maxterm(test)` (the last clause), with
/// the inputs and outputs free.
pub fn split_problem(
    circuit: &Circuit,
    enc: &Encoding,
    clause: usize,
    test: &Assignment,
) -> Result<PqeProblem, QuickPqeError> {
    gate_clause(circuit, enc, clause)?;
    test_maxterm(circuit, test)?;
    let lits: Vec<Lit> = circuit
        .inputs()
        .iter()
        .map(|&x| enc.map.var_of(x).lit(test.get(x).expect("checked")))
        .collect();
    let parts = split_clause(&enc.cnf.clauses()[clause], &lits).expect("clause avoids the inputs");
    let mut f = enc.cnf.without(&[clause].into());
    let mut last = 0;
    for part in parts {
        last = f.push(part).expect("circuit variables");
    }
    let free = inputs_and_outputs(circuit, enc);
    Ok(PqeProblem::new(f, [last].into(), &free).expect("valid indices and variables"))
}

fn inputs_and_outputs(circuit: &Circuit, enc: &Encoding) -> Vec<Var> {
    circuit
        .inputs()
        .iter()
        .chain(circuit.outputs())
        .map(|&v| enc.map.var_of(v))
        .collect()
}

/// Evaluates the three single-test conditions of `q` for `test` by
/// enumeration over inputs and outputs.
pub fn check_single_test(
    q: &Cnf,
    circuit: &Circuit,
    test: &Assignment,
    limits: &Limits,
) -> Result<SingleTestReport, QuickPqeError> {
    let xs = circuit.inputs();
    let zs = circuit.outputs();
    limits.check(xs.len() + zs.len())?;
    if let Some(v) = q
        .occurring_vars()
        .into_iter()
        .find(|v| !xs.contains(v) && !zs.contains(v))
    {
        return Err(QuickPqeError::ForeignVariable(q.table().display(v)));
    }
    let response = circuit.simulate(test)?.outputs;
    let test = test.restrict(xs);
    let mut report = SingleTestReport {
        other_inputs_free: true,
        accepts_response: false,
        rejects_other_output: false,
    };
    for x in all_assignments(xs) {
        for z in all_assignments(zs) {
            let mut point = x.clone();
            for (v, b) in z.iter() {
                point.set(v, b);
            }
            let holds = q.evaluate(&point).is_true();
            if x != test {
                report.other_inputs_free &= holds;
            } else if z == response {
                report.accepts_response = holds;
            } else if !holds {
                report.rejects_other_output = true;
            }
        }
    }
    Ok(report)
}
