// SPDX-License-Identifier: Apache-2.0

//! Sorter generator: an odd-even transposition network of compare-swap
//! blocks over `m` unsigned `r`-bit numbers, smallest number first.
//!
//! Net names: for `r = 1` the inputs are `x1..xm` and the outputs `z1..zm`;
//! otherwise bit `b` (0 = least significant) of number `i` is `x<i>_<b>` /
//! `z<i>_<b>`. The buggy variant drives every bit of output number 1 with
//! `CONST0`.

use super::{Circuit, CircuitBuilder, CircuitError, GateKind};

pub(crate) fn bit_name(prefix: char, r: usize, number: usize, bit: usize) -> String {
    if r == 1 {
        format!("{prefix}{}", number + 1)
    } else {
        format!("{prefix}{}_{bit}", number + 1)
    }
}

struct Net {
    builder: CircuitBuilder,
}

impl Net {
    fn gate(&mut self, name: String, kind: GateKind, ins: &[&str]) -> String {
        self.builder.gate(&name, kind, ins);
        name
    }

    /// Compare-swap block `k` on numbers `a`, `b` (bit vectors, LSB first):
    /// returns (min, max).
    fn compare_swap(&mut self, k: usize, a: &[String], b: &[String]) -> (Vec<String>, Vec<String>) {
        // a > b, rippled from the least significant bit upwards
        let mut gt: Option<String> = None;
        for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
            let nb = self.gate(format!("c{k}_nb{i}"), GateKind::Not, &[bi]);
            let here = self.gate(format!("c{k}_t{i}"), GateKind::And, &[ai, &nb]);
            gt = Some(match gt {
                None => here,
                Some(below) => {
                    let eq = self.gate(format!("c{k}_eq{i}"), GateKind::Xnor, &[ai, bi]);
                    let carry = self.gate(format!("c{k}_u{i}"), GateKind::And, &[&eq, &below]);
                    self.gate(format!("c{k}_gt{i}"), GateKind::Or, &[&here, &carry])
                }
            });
        }
        let swap = gt.expect("numbers have at least one bit");
        let keep = self.gate(format!("c{k}_keep"), GateKind::Not, &[&swap]);
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
            let l1 = self.gate(format!("c{k}_lb{i}"), GateKind::And, &[&swap, bi]);
            let l2 = self.gate(format!("c{k}_la{i}"), GateKind::And, &[&keep, ai]);
            lo.push(self.gate(format!("c{k}_lo{i}"), GateKind::Or, &[&l1, &l2]));
            let h1 = self.gate(format!("c{k}_ha{i}"), GateKind::And, &[&swap, ai]);
            let h2 = self.gate(format!("c{k}_hb{i}"), GateKind::And, &[&keep, bi]);
            hi.push(self.gate(format!("c{k}_hi{i}"), GateKind::Or, &[&h1, &h2]));
        }
        (lo, hi)
    }
}

/// Builds a sorter for `m` numbers of `r` bits each. Requires `r ≥ 1`,
/// `m ≥ 2` and `r·m ≤ 12`.
pub fn build_sorter(r: usize, m: usize, buggy: bool) -> Result<Circuit, CircuitError> {
    if r < 1 || m < 2 || r * m > 12 {
        return Err(CircuitError::SizeCap(format!(
            "need r >= 1, m >= 2, r*m <= 12 (got r={r}, m={m})"
        )));
    }
    let mut net = Net {
        builder: CircuitBuilder::new(),
    };
    let mut numbers: Vec<Vec<String>> = Vec::with_capacity(m);
    for i in 0..m {
        let bits: Vec<String> = (0..r).map(|b| bit_name('x', r, i, b)).collect();
        for bit in &bits {
            net.builder.input(bit);
        }
        numbers.push(bits);
    }
    let mut k = 0;
    for round in 0..m {
        let mut i = round % 2;
        while i + 1 < m {
            let (lo, hi) = net.compare_swap(k, &numbers[i], &numbers[i + 1]);
            numbers[i] = lo;
            numbers[i + 1] = hi;
            k += 1;
            i += 2;
        }
    }
    for (i, bits) in numbers.iter().enumerate() {
        for (b, src) in bits.iter().enumerate() {
            let z = bit_name('z', r, i, b);
            if buggy && i == 0 {
                net.builder.gate(&z, GateKind::Const0, &[]);
            } else {
                net.builder.gate(&z, GateKind::Buf, &[src]);
            }
            net.builder.output(&z);
        }
    }
    net.builder.build()
}
