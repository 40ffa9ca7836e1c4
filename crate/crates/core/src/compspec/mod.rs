// SPDX-License-Identifier: Apache-2.0

//! Growing a specification to structural completeness.
//!
//! Every clause of the implementation's CNF is taken out of the quantifier
//! scope in turn. The resulting property is kept if the specification
//! already implies it; otherwise the informal oracle decides whether it is
//! an unwanted behavior restriction (a bug) or a new specification property.

mod propfile;

use std::fmt;

use thiserror::Error;

use crate::circuit::{sorter_bit_name, Circuit, Encoding};
use crate::formula::{all_assignments, Assignment, Cnf, FormulaError, Lit, Var, VarTable};
use crate::limits::{CapExceeded, Limits};
use crate::quant::{
    clean_solution, maxterm_cnf, partial_qe, quant_eliminate, PqeProblem, QuantError, QuantProblem,
};
use crate::quickpqe::{quick_pqe, QuickPqeError};
use crate::satcore::{implies_formula, Solver};

pub use propfile::{parse_properties, write_properties, PropFileError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CompSpecError {
    #[error(transparent)]
    Quant(#[from] QuantError),
    #[error(transparent)]
    QuickPqe(#[from] QuickPqeError),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("`{0}` is not a primary input or output")]
    NotInputOrOutput(String),
    #[error("specification mentions `{0}`, which is not a free variable")]
    SpecOutsideFree(String),
    #[error("quick splitting needs every input and output free")]
    QuickSplitNeedsAllVars,
    #[error("golden model does not match the implementation on `{0}`")]
    GoldenMismatch(String),
    #[error("oracle aborted")]
    OracleAbort,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Property {
    pub name: String,
    pub formula: Cnf,
}

/// An ordered list of named properties over one variable table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specification {
    table: VarTable,
    properties: Vec<Property>,
}

impl Specification {
    pub fn new(table: VarTable) -> Specification {
        Specification {
            table,
            properties: Vec::new(),
        }
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn properties(&self) -> &[Property] {
        &self.properties
    }

    pub fn push(&mut self, p: Property) {
        self.properties.push(p);
    }

    pub fn conjunction(&self) -> Cnf {
        let mut all = Cnf::new(self.table.clone());
        for p in &self.properties {
            for c in p.formula.clauses() {
                all.push(c.clone()).expect("same table");
            }
        }
        all
    }
}

/// Answers `Some(unwanted)` for a property, `None` to abort.
pub type AskFn<'a> = Box<dyn FnMut(&Cnf) -> Option<bool> + 'a>;

/// Judge of whether an implementation property excludes correct behavior.
pub enum InformalOracle<'a> {
    /// Unwanted iff the golden circuit exhibits a behavior the property
    /// excludes. Nets are matched by name.
    GoldenModel(Circuit),
    /// Asks a person; `None` aborts.
    Interactive(AskFn<'a>),
    AcceptAll,
}

/// An input/output behavior, named by net.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub inputs: Vec<(String, bool)>,
    pub outputs: Vec<(String, bool)>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |pairs: &[(String, bool)]| {
            pairs
                .iter()
                .map(|(n, b)| format!("{n}={}", *b as u8))
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{} -> {}", join(&self.inputs), join(&self.outputs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub unwanted: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Expansion,
    QuickSplit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClauseStatus {
    Implied,
    Added,
    Unwanted,
    /// Not of the shape the quick path handles.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseRecord {
    pub clause: usize,
    /// The generated property; empty when skipped.
    pub property: Cnf,
    pub status: ClauseStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompSpecOutcome {
    Unwanted {
        clause: usize,
        property: Cnf,
        witness: Option<Witness>,
        report: Vec<ClauseRecord>,
    },
    StructurallyComplete {
        spec: Specification,
        report: Vec<ClauseRecord>,
    },
}

impl CompSpecOutcome {
    pub fn report(&self) -> &[ClauseRecord] {
        match self {
            CompSpecOutcome::Unwanted { report, .. }
            | CompSpecOutcome::StructurallyComplete { report, .. } => report,
        }
    }
}

fn inputs_and_outputs(n: &Circuit) -> Vec<Var> {
    let mut v: Vec<Var> = n.inputs().iter().chain(n.outputs()).copied().collect();
    v.sort();
    v
}

fn check_free(n: &Circuit, free: &[Var]) -> Result<Vec<Var>, CompSpecError> {
    let io = inputs_and_outputs(n);
    let mut free = free.to_vec();
    free.sort();
    free.dedup();
    if let Some(&v) = free.iter().find(|v| io.binary_search(v).is_err()) {
        return Err(CompSpecError::NotInputOrOutput(n.table().display(v)));
    }
    Ok(free)
}

fn check_golden(n: &Circuit, golden: &Circuit) -> Result<(), CompSpecError> {
    let names = |c: &Circuit, vs: &[Var]| {
        let mut v: Vec<String> = vs.iter().map(|&x| c.name(x).to_string()).collect();
        v.sort();
        v
    };
    for (mine, theirs) in [
        (names(n, n.inputs()), names(golden, golden.inputs())),
        (names(n, n.outputs()), names(golden, golden.outputs())),
    ] {
        if let Some(odd) = mine
            .iter()
            .find(|x| !theirs.contains(x))
            .or_else(|| theirs.iter().find(|x| !mine.contains(x)))
        {
            return Err(CompSpecError::GoldenMismatch(odd.clone()));
        }
    }
    Ok(())
}

/// Asks the oracle whether `q` (over `n`'s variables) is unwanted.
pub fn is_unwanted(
    q: &Cnf,
    n: &Circuit,
    oracle: &mut InformalOracle<'_>,
) -> Result<OracleVerdict, CompSpecError> {
    match oracle {
        InformalOracle::AcceptAll => Ok(OracleVerdict {
            unwanted: false,
            witness: None,
        }),
        InformalOracle::Interactive(ask) => match ask(q) {
            Some(unwanted) => Ok(OracleVerdict {
                unwanted,
                witness: None,
            }),
            None => Err(CompSpecError::OracleAbort),
        },
        InformalOracle::GoldenModel(golden) => {
            check_golden(n, golden)?;
            let mut solver = Solver::new(&golden.tseitin().cnf);
            for d in q.clauses() {
                let mut negated = Vec::with_capacity(d.len());
                for l in d.lits() {
                    let name = q.table().display(l.var());
                    let v = golden
                        .net(&name)
                        .ok_or(CompSpecError::GoldenMismatch(name))?;
                    negated.push(Lit::new(v, !l.is_positive()));
                }
                if let Some(model) = solver.solve(&negated).into_model() {
                    let pick = |vs: &[Var]| -> Vec<(String, bool)> {
                        vs.iter()
                            .map(|&v| {
                                let name = n.name(v);
                                let g = golden.net(name).expect("checked compatible");
                                (name.to_string(), model.get(g).unwrap_or(false))
                            })
                            .collect()
                    };
                    return Ok(OracleVerdict {
                        unwanted: true,
                        witness: Some(Witness {
                            inputs: pick(n.inputs()),
                            outputs: pick(n.outputs()),
                        }),
                    });
                }
            }
            Ok(OracleVerdict {
                unwanted: false,
                witness: None,
            })
        }
    }
}

/// The property generated for clause `index`, or `None` when the quick
/// path does not apply to it.
fn clause_property(
    n: &Circuit,
    enc: &Encoding,
    index: usize,
    free: &[Var],
    mode: Mode,
    test: &Assignment,
    limits: &Limits,
) -> Result<Option<Cnf>, CompSpecError> {
    match mode {
        Mode::Expansion => {
            let p = PqeProblem::new(enc.cnf.clone(), [index].into(), free)?;
            Ok(Some(clean_solution(&partial_qe(&p, limits)?, &p.h2())))
        }
        Mode::QuickSplit => match quick_pqe(n, enc, index, test) {
            Ok(run) => Ok(Some(run.outcome.solution(enc))),
            Err(QuickPqeError::ClauseTouchesInputs(_) | QuickPqeError::ClauseNotGateClause(_)) => {
                Ok(None)
            }
            Err(e) => Err(e.into()),
        },
    }
}

/// Settings for [`comp_spec`].
#[derive(Clone, Debug)]
pub struct CompSpecConfig {
    pub mode: Mode,
    /// Test vector for quick splitting; all zeros when absent.
    pub test: Option<Assignment>,
    pub limits: Limits,
}

impl Default for CompSpecConfig {
    fn default() -> CompSpecConfig {
        CompSpecConfig {
            mode: Mode::Expansion,
            test: None,
            limits: Limits::default(),
        }
    }
}

pub fn comp_spec(
    spec: &Specification,
    n: &Circuit,
    free: &[Var],
    oracle: &mut InformalOracle<'_>,
    config: &CompSpecConfig,
) -> Result<CompSpecOutcome, CompSpecError> {
    let free = check_free(n, free)?;
    let mut spec = Specification {
        table: n.table().clone(),
        properties: spec
            .properties
            .iter()
            .map(|p| {
                Ok(Property {
                    name: p.name.clone(),
                    formula: p.formula.with_table(n.table().clone())?,
                })
            })
            .collect::<Result<_, FormulaError>>()?,
    };
    if let Some(v) = spec
        .conjunction()
        .occurring_vars()
        .into_iter()
        .find(|v| free.binary_search(v).is_err())
    {
        return Err(CompSpecError::SpecOutsideFree(n.table().display(v)));
    }
    if config.mode == Mode::QuickSplit && free != inputs_and_outputs(n) {
        return Err(CompSpecError::QuickSplitNeedsAllVars);
    }
    if let InformalOracle::GoldenModel(golden) = oracle {
        check_golden(n, golden)?;
    }
    let test = config
        .test
        .clone()
        .unwrap_or_else(|| n.inputs().iter().map(|&x| (x, false)).collect());
    let enc = n.tseitin();
    let mut report = Vec::with_capacity(enc.cnf.len());
    for index in 0..enc.cnf.len() {
        let Some(q) = clause_property(n, &enc, index, &free, config.mode, &test, &config.limits)?
        else {
            report.push(ClauseRecord {
                clause: index,
                property: Cnf::new(n.table().clone()),
                status: ClauseStatus::Skipped,
            });
            continue;
        };
        debug_assert!(implies_formula(&enc.cnf, &q));
        if implies_formula(&spec.conjunction(), &q) {
            report.push(ClauseRecord {
                clause: index,
                property: q,
                status: ClauseStatus::Implied,
            });
            continue;
        }
        let verdict = is_unwanted(&q, n, oracle)?;
        if verdict.unwanted {
            report.push(ClauseRecord {
                clause: index,
                property: q.clone(),
                status: ClauseStatus::Unwanted,
            });
            return Ok(CompSpecOutcome::Unwanted {
                clause: index,
                property: q,
                witness: verdict.witness,
                report,
            });
        }
        spec.push(Property {
            name: format!("auto_{index}"),
            formula: q.clone(),
        });
        report.push(ClauseRecord {
            clause: index,
            property: q,
            status: ClauseStatus::Added,
        });
    }
    Ok(CompSpecOutcome::StructurallyComplete { spec, report })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completeness {
    pub complete: bool,
    /// A free-variable point allowed by the specification but impossible in
    /// the circuit.
    pub witness: Option<Assignment>,
}

/// Functional completeness: the specification implies `∃W[F]` over `free`.
pub fn check_complete(
    spec: &Specification,
    n: &Circuit,
    free: &[Var],
    limits: &Limits,
) -> Result<Completeness, CompSpecError> {
    let free = check_free(n, free)?;
    limits.check(free.len())?;
    let conj = spec.conjunction().with_table(n.table().clone())?;
    if let Some(v) = conj
        .occurring_vars()
        .into_iter()
        .find(|v| free.binary_search(v).is_err())
    {
        return Err(CompSpecError::SpecOutsideFree(n.table().display(v)));
    }
    let projection = quant_eliminate(&QuantProblem::new(n.tseitin().cnf, &free)?, limits)?;
    let witness = all_assignments(&free)
        .find(|v| conj.evaluate(v).is_true() && !projection.evaluate(v).is_true());
    Ok(Completeness {
        complete: witness.is_none(),
        witness,
    })
}

/// The sorter specification: `sorted` says the output numbers are in
/// ascending order, `permutation` that they are a rearrangement of the
/// inputs. Both are built by enumeration over the circuit's nets named as
/// by the sorter generator.
pub fn sorter_spec(
    n: &Circuit,
    r: usize,
    m: usize,
    limits: &Limits,
) -> Result<Specification, CompSpecError> {
    let net = |prefix: char, i: usize, b: usize| {
        let name = sorter_bit_name(prefix, r, i, b);
        n.net(&name).ok_or(CompSpecError::NotInputOrOutput(name))
    };
    let mut xs = Vec::with_capacity(r * m);
    let mut zs = Vec::with_capacity(r * m);
    for i in 0..m {
        for b in 0..r {
            xs.push(net('x', i, b)?);
            zs.push(net('z', i, b)?);
        }
    }
    let number = |a: &Assignment, vs: &[Var], i: usize| -> u32 {
        (0..r)
            .map(|b| (a.get(vs[i * r + b]).expect("full") as u32) << b)
            .sum()
    };
    let numbers =
        |a: &Assignment, vs: &[Var]| -> Vec<u32> { (0..m).map(|i| number(a, vs, i)).collect() };
    limits.check(zs.len())?;
    let sorted = maxterm_cnf(n.table(), &zs, |a| {
        numbers(a, &zs).windows(2).all(|w| w[0] <= w[1])
    })?;
    let all: Vec<Var> = xs.iter().chain(&zs).copied().collect();
    limits.check(all.len())?;
    let permutation = maxterm_cnf(n.table(), &all, |a| {
        let mut x = numbers(a, &xs);
        let mut z = numbers(a, &zs);
        x.sort_unstable();
        z.sort_unstable();
        x == z
    })?;
    let mut spec = Specification::new(n.table().clone());
    spec.push(Property {
        name: "sorted".into(),
        formula: sorted,
    });
    spec.push(Property {
        name: "permutation".into(),
        formula: permutation,
    });
    Ok(spec)
}
