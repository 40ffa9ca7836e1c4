// SPDX-License-Identifier: Apache-2.0

//! Sequential circuits M(S, X, Y, S′) and their analysis at desk scale.
//!
//! A sequential netlist is a combinational netlist plus `LATCH` lines:
//!
//! ```text
//! INPUT en
//! GATE n0 = XOR s0 en
//! LATCH s0 n0 0
//! ```
//!
//! `OUTPUT` is not allowed. The combinational core reads the state nets
//! (first, in latch order) and the inputs; its outputs are the next-state
//! nets. A next-state driver that is a state or input net, or that feeds two
//! latches, is routed through a `BUF` named `__latch_next_<state>`.
//!
//! States are numbered by their bits over the state variables, first latch
//! most significant.

mod analysis;
mod gen;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{parse_raw, Circuit, CircuitError, GateKind, RawGate};
use crate::formula::{Assignment, Clause, Cnf, FormulaError, Var};
use crate::limits::CapExceeded;
use crate::quant::QuantError;
use crate::satcore::Solver;

pub use analysis::{
    diameter, gen_safety_property, make_inv, model_check, one_step_image, reachable,
    transition_relation, unroll, Frame, MakeInvOutcome, McOutcome, ReachSet, Unrolled,
    MAX_STATE_BITS,
};
pub use gen::{counter, random_machine, MachineShape};

/// Name of the input added by [`SequentialCircuit::add_stuttering`].
pub const STUTTER_INPUT: &str = "__stutter";

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Quant(#[from] QuantError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error("net `{0}` already exists")]
    NameCollision(String),
    #[error("some state has no transition to itself; add stuttering first")]
    NoStuttering,
    #[error("`{0}` is not a state variable")]
    NotOverStates(String),
    #[error("clause index {0} out of range")]
    BadClauseIndex(usize),
    #[error("a frame count of at least 1 is required")]
    NoFrames,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Latch {
    pub state: Var,
    pub next: Var,
    pub init: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequentialCircuit {
    core: Circuit,
    latches: Vec<Latch>,
    inputs: Vec<Var>,
    init: Cnf,
}

impl SequentialCircuit {
    pub fn parse(text: &str) -> Result<SequentialCircuit, SeqError> {
        let mut raw = parse_raw(text)?;
        if let Some((_, line)) = raw.outputs.first() {
            return Err(CircuitError::Parse {
                line: *line,
                message: "OUTPUT is not allowed in a sequential netlist".into(),
            }
            .into());
        }
        let latches = std::mem::take(&mut raw.latches);
        let states: BTreeSet<&str> = latches.iter().map(|l| l.state.as_str()).collect();
        let inputs: BTreeSet<&str> = raw.inputs.iter().map(|(n, _)| n.as_str()).collect();
        let mut used = BTreeSet::new();
        let mut extra = Vec::with_capacity(latches.len());
        for l in &latches {
            extra.push((l.state.clone(), l.line));
            let mut next = l.next.clone();
            if states.contains(next.as_str())
                || inputs.contains(next.as_str())
                || used.contains(&next)
            {
                let buf = format!("__latch_next_{}", l.state);
                raw.gates.push(RawGate {
                    output: buf.clone(),
                    kind: GateKind::Buf,
                    inputs: vec![next],
                    line: l.line,
                });
                next = buf;
            }
            used.insert(next.clone());
            raw.outputs.push((next, l.line));
        }
        let core = Circuit::from_raw(&raw, &extra)?;
        let k = latches.len();
        let latches: Vec<Latch> = latches
            .iter()
            .enumerate()
            .map(|(i, l)| Latch {
                state: core.inputs()[i],
                next: core.outputs()[i],
                init: l.init,
            })
            .collect();
        let init = Cnf::from_clauses(
            core.table().clone(),
            latches.iter().map(|l| Clause::unit(l.state.lit(l.init))),
        )?;
        Ok(SequentialCircuit {
            inputs: core.inputs()[k..].to_vec(),
            core,
            latches,
            init,
        })
    }

    /// The combinational core: inputs are the states then the primary
    /// inputs, outputs are the next-state nets.
    pub fn core(&self) -> &Circuit {
        &self.core
    }

    pub fn latches(&self) -> &[Latch] {
        &self.latches
    }

    pub fn states(&self) -> Vec<Var> {
        self.latches.iter().map(|l| l.state).collect()
    }

    pub fn next_states(&self) -> Vec<Var> {
        self.latches.iter().map(|l| l.next).collect()
    }

    /// Primary inputs, excluding the state nets.
    pub fn inputs(&self) -> &[Var] {
        &self.inputs
    }

    /// Initial-state predicate over the state variables.
    pub fn init(&self) -> &Cnf {
        &self.init
    }

    pub fn name(&self, v: Var) -> &str {
        self.core.name(v)
    }

    /// Replaces the initial-state predicate. Its variables must be states
    /// (ids of the core's table).
    pub fn with_init(mut self, init: Cnf) -> Result<SequentialCircuit, SeqError> {
        let states = self.states();
        if let Some(v) = init
            .occurring_vars()
            .into_iter()
            .find(|v| !states.contains(v))
        {
            return Err(SeqError::NotOverStates(init.table().display(v)));
        }
        self.init = init.with_table(self.core.table().clone())?;
        Ok(self)
    }

    pub fn state_assignment(&self, state: u64) -> Assignment {
        Assignment::from_bits(&self.states(), state)
    }

    pub fn state_bits(&self, state: u64) -> String {
        self.state_assignment(state).bit_string(&self.states())
    }

    /// Next state from `state` under input bits `input` (first input most
    /// significant).
    pub fn step(&self, state: u64, input: u64) -> u64 {
        let k = self.latches.len();
        let n = self.inputs.len();
        let mut bits = Vec::with_capacity(k + n);
        bits.extend((0..k).map(|i| state >> (k - 1 - i) & 1 == 1));
        bits.extend((0..n).map(|i| input >> (n - 1 - i) & 1 == 1));
        let values = self.core.eval_dense(&bits, None, &mut 0);
        self.latches
            .iter()
            .fold(0, |acc, l| acc << 1 | values[l.next.index()] as u64)
    }

    /// Serializes to the sequential netlist format. A non-unit initial
    /// predicate is not representable; latch lines carry the latch init bits.
    pub fn to_netlist(&self) -> String {
        let mut out = String::new();
        for &x in &self.inputs {
            let _ = writeln!(out, "INPUT {}", self.name(x));
        }
        for g in self.core.gates() {
            let _ = write!(out, "GATE {} = {}", self.name(g.output), g.kind.name());
            for &i in &g.inputs {
                let _ = write!(out, " {}", self.name(i));
            }
            out.push('\n');
        }
        for l in &self.latches {
            let _ = writeln!(
                out,
                "LATCH {} {} {}",
                self.name(l.state),
                self.name(l.next),
                l.init as u8
            );
        }
        out
    }

    /// Adds input `__stutter`: when it is 0 every latch keeps its value,
    /// when 1 the machine steps as before.
    pub fn add_stuttering(&self) -> Result<SequentialCircuit, SeqError> {
        let mut fresh = vec![STUTTER_INPUT.to_string(), format!("{STUTTER_INPUT}_n")];
        for l in &self.latches {
            let s = self.name(l.state);
            fresh.push(format!("{STUTTER_INPUT}_hold_{s}"));
            fresh.push(format!("{STUTTER_INPUT}_step_{s}"));
            fresh.push(format!("{STUTTER_INPUT}_next_{s}"));
        }
        if let Some(taken) = fresh.iter().find(|n| self.core.net(n).is_some()) {
            return Err(SeqError::NameCollision(taken.clone()));
        }
        let mut text = String::new();
        for &x in &self.inputs {
            let _ = writeln!(text, "INPUT {}", self.name(x));
        }
        let _ = writeln!(text, "INPUT {STUTTER_INPUT}");
        for g in self.core.gates() {
            let _ = write!(text, "GATE {} = {}", self.name(g.output), g.kind.name());
            for &i in &g.inputs {
                let _ = write!(text, " {}", self.name(i));
            }
            text.push('\n');
        }
        let _ = writeln!(text, "GATE {STUTTER_INPUT}_n = NOT {STUTTER_INPUT}");
        for l in &self.latches {
            let (s, n) = (self.name(l.state), self.name(l.next));
            let _ = writeln!(
                text,
                "GATE {STUTTER_INPUT}_hold_{s} = AND {STUTTER_INPUT}_n {s}"
            );
            let _ = writeln!(
                text,
                "GATE {STUTTER_INPUT}_step_{s} = AND {STUTTER_INPUT} {n}"
            );
            let _ = writeln!(
                text,
                "GATE {STUTTER_INPUT}_next_{s} = OR {STUTTER_INPUT}_hold_{s} {STUTTER_INPUT}_step_{s}"
            );
            let _ = writeln!(text, "LATCH {s} {STUTTER_INPUT}_next_{s} {}", l.init as u8);
        }
        let m = SequentialCircuit::parse(&text)?;
        // state ids are unchanged: states come first in both cores
        let init = self.init.clone();
        m.with_init(init)
    }

    /// True iff every state can transition to itself under some input.
    pub fn is_stuttering(&self) -> bool {
        let k = self.latches.len();
        let mut solver = Solver::new(&self.core.tseitin().cnf);
        (0..1u64 << k).all(|s| {
            let lits: Vec<_> = self
                .latches
                .iter()
                .enumerate()
                .flat_map(|(i, l)| {
                    let b = s >> (k - 1 - i) & 1 == 1;
                    [l.state.lit(b), l.next.lit(b)]
                })
                .collect();
            solver.solve(&lits).is_sat()
        })
    }
}
