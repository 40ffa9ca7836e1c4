// SPDX-License-Identifier: Apache-2.0

//! Line-oriented netlist syntax shared by combinational and sequential
//! circuits:
//!
//! ```text
//! INPUT <net>
//! OUTPUT <net>
//! GATE <net> = <KIND> <in1> [<in2>]
//! LATCH <state-net> <next-driver-net> <init-bit>
//! ```
//!
//! `#` starts a comment. Names match `[A-Za-z_][A-Za-z0-9_]*`.

use super::{CircuitError, GateKind};

#[derive(Clone, Debug, Default)]
pub(crate) struct RawNetlist {
    pub inputs: Vec<(String, usize)>,
    pub outputs: Vec<(String, usize)>,
    pub gates: Vec<RawGate>,
    pub latches: Vec<RawLatch>,
}

#[derive(Clone, Debug)]
pub(crate) struct RawGate {
    pub output: String,
    pub kind: GateKind,
    pub inputs: Vec<String>,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct RawLatch {
    pub state: String,
    pub next: String,
    pub init: bool,
    pub line: usize,
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn name(tok: &str, line: usize) -> Result<String, CircuitError> {
    if is_valid_name(tok) {
        Ok(tok.to_string())
    } else {
        Err(CircuitError::Parse {
            line,
            message: format!("invalid net name `{tok}`"),
        })
    }
}

fn syntax(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Parse {
        line,
        message: message.into(),
    }
}

pub(crate) fn parse_raw(text: &str) -> Result<RawNetlist, CircuitError> {
    let mut raw = RawNetlist::default();
    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let content = full.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["INPUT", net] => raw.inputs.push((name(net, line)?, line)),
            ["OUTPUT", net] => raw.outputs.push((name(net, line)?, line)),
            ["GATE", out, "=", kind, ins @ ..] => {
                let kind: GateKind = kind
                    .parse()
                    .map_err(|_| syntax(line, format!("unknown gate kind `{kind}`")))?;
                if ins.len() != kind.arity() {
                    return Err(syntax(
                        line,
                        format!(
                            "{} expects {} inputs, got {}",
                            kind.name(),
                            kind.arity(),
                            ins.len()
                        ),
                    ));
                }
                raw.gates.push(RawGate {
                    output: name(out, line)?,
                    kind,
                    inputs: ins
                        .iter()
                        .map(|t| name(t, line))
                        .collect::<Result<_, _>>()?,
                    line,
                });
            }
            ["LATCH", state, next, init] => {
                let init = match *init {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(syntax(
                            line,
                            format!("init bit must be 0 or 1, got `{other}`"),
                        ))
                    }
                };
                raw.latches.push(RawLatch {
                    state: name(state, line)?,
                    next: name(next, line)?,
                    init,
                    line,
                });
            }
            [kw, ..] => {
                return Err(syntax(line, format!("cannot parse `{}` statement", kw)));
            }
        }
    }
    Ok(raw)
}
