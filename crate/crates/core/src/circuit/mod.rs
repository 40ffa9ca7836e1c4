// SPDX-License-Identifier: Apache-2.0

//! Gate-level combinational circuits.
//!
//! Every net of a circuit is identified with a propositional variable, so a
//! net id doubles as the CNF variable of the Tseitin encoding. Net ids are
//! canonical: primary inputs first in declaration order, then gate outputs in
//! topological gate order.

mod gen;
mod parse;
mod sorter;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::ops::Range;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{Assignment, Clause, Cnf, Lit, Var, VarTable};

pub(crate) use gen::pick_kind;
pub use gen::{random_circuit, RandomCircuitShape};
pub(crate) use parse::{is_valid_name, parse_raw, RawGate, RawNetlist};
pub(crate) use sorter::bit_name as sorter_bit_name;
pub use sorter::build_sorter;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: net `{net}` is driven more than once")]
    MultipleDrivers { line: usize, net: String },
    #[error("line {line}: net `{net}` is never driven")]
    UndrivenNet { line: usize, net: String },
    #[error("line {line}: combinational cycle through net `{net}`")]
    CombinationalCycle { line: usize, net: String },
    #[error("input `{0}` is not assigned")]
    PartialInput(String),
    #[error("gate index {0} out of range")]
    BadGateIndex(usize),
    #[error("sorter size out of range: {0}")]
    SizeCap(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Nand,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
    Const0,
    Const1,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::And,
        GateKind::Or,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
        GateKind::Const0,
        GateKind::Const1,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Const0 | GateKind::Const1 => 0,
            GateKind::Not | GateKind::Buf => 1,
            _ => 2,
        }
    }

    pub fn eval(self, ins: &[bool]) -> bool {
        match self {
            GateKind::And => ins[0] && ins[1],
            GateKind::Or => ins[0] || ins[1],
            GateKind::Nand => !(ins[0] && ins[1]),
            GateKind::Nor => !(ins[0] || ins[1]),
            GateKind::Xor => ins[0] != ins[1],
            GateKind::Xnor => ins[0] == ins[1],
            GateKind::Not => !ins[0],
            GateKind::Buf => ins[0],
            GateKind::Const0 => false,
            GateKind::Const1 => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
            GateKind::Const0 => "CONST0",
            GateKind::Const1 => "CONST1",
        }
    }

    /// Defining clauses over (a, b, y) where y is the gate output. Each clause
    /// is falsified exactly by rows inconsistent with the truth table; rows
    /// that merge by resolution are merged (the AND case gives the familiar
    /// three clauses).
    fn template(self) -> &'static [&'static [(Pin, bool)]] {
        use Pin::{A, B, Y};
        match self {
            GateKind::And => &[
                &[(A, true), (Y, false)],
                &[(B, true), (Y, false)],
                &[(A, false), (B, false), (Y, true)],
            ],
            GateKind::Or => &[
                &[(A, false), (Y, true)],
                &[(B, false), (Y, true)],
                &[(A, true), (B, true), (Y, false)],
            ],
            GateKind::Nand => &[
                &[(A, true), (Y, true)],
                &[(B, true), (Y, true)],
                &[(A, false), (B, false), (Y, false)],
            ],
            GateKind::Nor => &[
                &[(A, false), (Y, false)],
                &[(B, false), (Y, false)],
                &[(A, true), (B, true), (Y, true)],
            ],
            GateKind::Xor => &[
                &[(A, true), (B, true), (Y, false)],
                &[(A, false), (B, false), (Y, false)],
                &[(A, true), (B, false), (Y, true)],
                &[(A, false), (B, true), (Y, true)],
            ],
            GateKind::Xnor => &[
                &[(A, true), (B, true), (Y, true)],
                &[(A, false), (B, false), (Y, true)],
                &[(A, true), (B, false), (Y, false)],
                &[(A, false), (B, true), (Y, false)],
            ],
            GateKind::Not => &[&[(A, true), (Y, true)], &[(A, false), (Y, false)]],
            GateKind::Buf => &[&[(A, false), (Y, true)], &[(A, true), (Y, false)]],
            GateKind::Const0 => &[&[(Y, false)]],
            GateKind::Const1 => &[&[(Y, true)]],
        }
    }
}

impl FromStr for GateKind {
    type Err = ();

    fn from_str(s: &str) -> Result<GateKind, ()> {
        GateKind::ALL.into_iter().find(|k| k.name() == s).ok_or(())
    }
}

#[derive(Clone, Copy)]
enum Pin {
    A,
    B,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub output: Var,
    pub kind: GateKind,
    pub inputs: Vec<Var>,
}

/// A combinational circuit N(X, Y, Z).
#[derive(Clone, Debug)]
pub struct Circuit {
    table: VarTable,
    inputs: Vec<Var>,
    outputs: Vec<Var>,
    gates: Vec<Gate>,
    gate_of_net: Vec<Option<usize>>,
    gate_lines: Vec<usize>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Circuit) -> bool {
        self.table == other.table
            && self.inputs == other.inputs
            && self.outputs == other.outputs
            && self.gates == other.gates
    }
}

impl Eq for Circuit {}

/// Per-gate grouping of the clauses of a Tseitin encoding. Nets and CNF
/// variables coincide, so the net/variable bijection is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarMap {
    gate_clauses: Vec<Range<usize>>,
    clause_gate: Vec<usize>,
}

impl VarMap {
    pub fn var_of(&self, net: Var) -> Var {
        net
    }

    pub fn net_of(&self, var: Var) -> Var {
        var
    }

    pub fn clauses_of_gate(&self, gate: usize) -> Range<usize> {
        self.gate_clauses[gate].clone()
    }

    pub fn gate_of_clause(&self, clause: usize) -> Option<usize> {
        self.clause_gate.get(clause).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    pub cnf: Cnf,
    pub map: VarMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimResult {
    /// Full assignment to every net.
    pub values: Assignment,
    /// Projection onto the outputs.
    pub outputs: Assignment,
}

/// Programmatic construction with the same validation as the parser.
#[derive(Default)]
pub struct CircuitBuilder {
    raw: RawNetlist,
}

impl CircuitBuilder {
    pub fn new() -> CircuitBuilder {
        CircuitBuilder::default()
    }

    pub fn input(&mut self, name: &str) -> &mut Self {
        self.raw.inputs.push((name.to_string(), 0));
        self
    }

    pub fn output(&mut self, name: &str) -> &mut Self {
        self.raw.outputs.push((name.to_string(), 0));
        self
    }

    pub fn gate(&mut self, name: &str, kind: GateKind, inputs: &[&str]) -> &mut Self {
        self.raw.gates.push(parse::RawGate {
            output: name.to_string(),
            kind,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            line: 0,
        });
        self
    }

    pub fn build(&self) -> Result<Circuit, CircuitError> {
        Circuit::from_raw(&self.raw, &[])
    }
}

impl Circuit {
    /// Parses the line-oriented netlist format:
    ///
    /// ```text
    /// # comment
    /// INPUT x1
    /// GATE z1 = AND x1 x2
    /// OUTPUT z1
    /// ```
    ///
    /// Gates may appear in any order; they are sorted topologically.
    pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
        let raw = parse_raw(text)?;
        if let Some(latch) = raw.latches.first() {
            return Err(CircuitError::Parse {
                line: latch.line,
                message: "LATCH is not allowed in a combinational netlist".into(),
            });
        }
        Circuit::from_raw(&raw, &[])
    }

    /// Validates and orders a raw netlist. `extra_inputs` are nets driven
    /// from outside the gate network (latch outputs); they become the first
    /// primary inputs.
    pub(crate) fn from_raw(
        raw: &RawNetlist,
        extra_inputs: &[(String, usize)],
    ) -> Result<Circuit, CircuitError> {
        enum Driver {
            Input,
            Gate(usize),
        }
        let mut drivers: HashMap<&str, (Driver, usize)> = HashMap::new();
        let sources = extra_inputs.iter().chain(raw.inputs.iter());
        for (name, line) in sources {
            if drivers.insert(name, (Driver::Input, *line)).is_some() {
                return Err(CircuitError::MultipleDrivers {
                    line: *line,
                    net: name.clone(),
                });
            }
        }
        for (i, g) in raw.gates.iter().enumerate() {
            if drivers
                .insert(&g.output, (Driver::Gate(i), g.line))
                .is_some()
            {
                return Err(CircuitError::MultipleDrivers {
                    line: g.line,
                    net: g.output.clone(),
                });
            }
        }
        for g in &raw.gates {
            if g.inputs.len() != g.kind.arity() {
                return Err(CircuitError::Parse {
                    line: g.line,
                    message: format!(
                        "{} expects {} inputs, got {}",
                        g.kind.name(),
                        g.kind.arity(),
                        g.inputs.len()
                    ),
                });
            }
            if let Some(missing) = g.inputs.iter().find(|n| !drivers.contains_key(n.as_str())) {
                return Err(CircuitError::UndrivenNet {
                    line: g.line,
                    net: missing.clone(),
                });
            }
        }
        let mut seen_outputs = BTreeSet::new();
        for (name, line) in &raw.outputs {
            match drivers.get(name.as_str()) {
                None => {
                    return Err(CircuitError::UndrivenNet {
                        line: *line,
                        net: name.clone(),
                    })
                }
                Some((Driver::Input, _)) => {
                    return Err(CircuitError::Parse {
                        line: *line,
                        message: format!("output `{name}` is a primary input"),
                    })
                }
                Some((Driver::Gate(_), _)) => {}
            }
            if !seen_outputs.insert(name.as_str()) {
                return Err(CircuitError::Parse {
                    line: *line,
                    message: format!("output `{name}` declared twice"),
                });
            }
        }

        // Kahn's algorithm, always releasing the lowest-numbered ready gate so
        // an already ordered netlist keeps its order.
        let n = raw.gates.len();
        let mut pending = vec![0usize; n];
        let mut fanout: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, g) in raw.gates.iter().enumerate() {
            for input in &g.inputs {
                if let Some((Driver::Gate(j), _)) = drivers.get(input.as_str()) {
                    pending[i] += 1;
                    fanout[*j].push(i);
                }
            }
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &j in &fanout[i] {
                pending[j] -= 1;
                if pending[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n)
                .filter(|&i| pending[i] > 0)
                .min_by_key(|&i| (raw.gates[i].line, i))
                .unwrap_or(0);
            return Err(CircuitError::CombinationalCycle {
                line: raw.gates[stuck].line,
                net: raw.gates[stuck].output.clone(),
            });
        }

        let mut table = VarTable::new();
        // names are unique: duplicate drivers were rejected above
        let add =
            |table: &mut VarTable, name: &str| table.add_named(name).expect("unique net name");
        let mut inputs = Vec::new();
        for (name, _) in extra_inputs.iter().chain(raw.inputs.iter()) {
            inputs.push(add(&mut table, name));
        }
        let mut gate_outputs = Vec::with_capacity(n);
        for &i in &order {
            gate_outputs.push(add(&mut table, &raw.gates[i].output));
        }
        let mut gates = Vec::with_capacity(n);
        let mut gate_lines = Vec::with_capacity(n);
        let mut gate_of_net = vec![None; table.len()];
        for (pos, &i) in order.iter().enumerate() {
            let g = &raw.gates[i];
            let ins = g
                .inputs
                .iter()
                .map(|name| table.lookup(name).expect("validated above"))
                .collect();
            gate_of_net[gate_outputs[pos].index()] = Some(pos);
            gates.push(Gate {
                output: gate_outputs[pos],
                kind: g.kind,
                inputs: ins,
            });
            gate_lines.push(g.line);
        }
        let outputs = raw
            .outputs
            .iter()
            .map(|(name, _)| table.lookup(name).expect("validated above"))
            .collect();
        Ok(Circuit {
            table,
            inputs,
            outputs,
            gates,
            gate_of_net,
            gate_lines,
        })
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn inputs(&self) -> &[Var] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Var] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_nets(&self) -> usize {
        self.table.len()
    }

    /// Internal nets Y: gate outputs that are not primary outputs.
    pub fn internal(&self) -> Vec<Var> {
        let outs: BTreeSet<Var> = self.outputs.iter().copied().collect();
        self.gates
            .iter()
            .map(|g| g.output)
            .filter(|v| !outs.contains(v))
            .collect()
    }

    pub fn net(&self, name: &str) -> Option<Var> {
        self.table.lookup(name)
    }

    pub fn name(&self, net: Var) -> &str {
        self.table.name(net).unwrap_or("?")
    }

    pub fn gate_driving(&self, net: Var) -> Option<usize> {
        self.gate_of_net.get(net.index()).copied().flatten()
    }

    /// Source line of a gate, 0 for programmatically built circuits.
    pub fn gate_line(&self, gate: usize) -> usize {
        self.gate_lines.get(gate).copied().unwrap_or(0)
    }

    /// Serializes to the netlist format; parsing the result yields an equal
    /// circuit.
    pub fn to_netlist(&self) -> String {
        let mut out = String::new();
        for &x in &self.inputs {
            let _ = writeln!(out, "INPUT {}", self.name(x));
        }
        for g in &self.gates {
            let _ = write!(out, "GATE {} = {}", self.name(g.output), g.kind.name());
            for &i in &g.inputs {
                let _ = write!(out, " {}", self.name(i));
            }
            out.push('\n');
        }
        for &z in &self.outputs {
            let _ = writeln!(out, "OUTPUT {}", self.name(z));
        }
        out
    }

    pub(crate) fn input_bits(&self, x: &Assignment) -> Result<Vec<bool>, CircuitError> {
        self.inputs
            .iter()
            .map(|&v| {
                x.get(v)
                    .ok_or_else(|| CircuitError::PartialInput(self.name(v).to_string()))
            })
            .collect()
    }

    /// Evaluates every net for the given input values (in input order).
    /// `forced` overrides one gate's output. Each gate evaluation bumps
    /// `evals`.
    pub(crate) fn eval_dense(
        &self,
        inputs: &[bool],
        forced: Option<(usize, bool)>,
        evals: &mut usize,
    ) -> Vec<bool> {
        let mut values = vec![false; self.table.len()];
        for (&v, &b) in self.inputs.iter().zip(inputs) {
            values[v.index()] = b;
        }
        let mut ins = [false; 2];
        for (i, g) in self.gates.iter().enumerate() {
            *evals += 1;
            values[g.output.index()] = match forced {
                Some((fg, value)) if fg == i => value,
                _ => {
                    for (slot, &inp) in ins.iter_mut().zip(&g.inputs) {
                        *slot = values[inp.index()];
                    }
                    g.kind.eval(&ins[..g.inputs.len()])
                }
            };
        }
        values
    }

    fn sim_result(&self, values: &[bool]) -> SimResult {
        let all = self.table.vars().map(|v| (v, values[v.index()])).collect();
        let outputs = self
            .outputs
            .iter()
            .map(|&v| (v, values[v.index()]))
            .collect();
        SimResult {
            values: all,
            outputs,
        }
    }

    pub fn simulate(&self, x: &Assignment) -> Result<SimResult, CircuitError> {
        let bits = self.input_bits(x)?;
        let values = self.eval_dense(&bits, None, &mut 0);
        Ok(self.sim_result(&values))
    }

    /// Simulation with gate `gate` producing `value` regardless of its inputs.
    pub fn simulate_forced(
        &self,
        x: &Assignment,
        gate: usize,
        value: bool,
    ) -> Result<SimResult, CircuitError> {
        if gate >= self.gates.len() {
            return Err(CircuitError::BadGateIndex(gate));
        }
        let bits = self.input_bits(x)?;
        let values = self.eval_dense(&bits, Some((gate, value)), &mut 0);
        Ok(self.sim_result(&values))
    }

    /// Tseitin encoding: one block of defining clauses per gate, in gate
    /// order. Clauses that come out tautologous (a gate reading the same net
    /// twice) are dropped.
    pub fn tseitin(&self) -> Encoding {
        let mut cnf = Cnf::new(self.table.clone());
        let mut gate_clauses = Vec::with_capacity(self.gates.len());
        let mut clause_gate = Vec::new();
        for (i, g) in self.gates.iter().enumerate() {
            let start = cnf.len();
            for row in g.kind.template() {
                let lits = row.iter().map(|&(pin, positive)| {
                    let var = match pin {
                        Pin::A => g.inputs[0],
                        Pin::B => g.inputs[1],
                        Pin::Y => g.output,
                    };
                    Lit::new(var, positive)
                });
                if let Ok(clause) = Clause::new(lits) {
                    cnf.push(clause).expect("gate nets are in the table");
                    clause_gate.push(i);
                }
            }
            gate_clauses.push(start..cnf.len());
        }
        Encoding {
            cnf,
            map: VarMap {
                gate_clauses,
                clause_gate,
            },
        }
    }
}
