// SPDX-License-Identifier: Apache-2.0

//! Generation of implementation properties for gate-level circuits by
//! partial quantifier elimination (PQE), checking them against a
//! specification, and growing the specification until it is structurally
//! complete.
//!
//! Everything runs at desk scale: quantifier elimination is done by
//! cofactor enumeration on top of a small DPLL solver, and sequential
//! reasoning uses explicit-state reachability as its oracle.

pub mod circuit;
pub mod cli;
pub mod compspec;
pub mod formula;
pub mod limits;
pub mod quant;
pub mod quickpqe;
pub mod satcore;
pub mod seq;

pub use circuit::{Circuit, CircuitError, Encoding, GateKind, SimResult, VarMap};
pub use formula::{Assignment, Clause, Cnf, FormulaError, Lit, Truth, Var, VarTable};
pub use limits::{CapExceeded, Limits};
