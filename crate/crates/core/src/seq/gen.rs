// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use rand::Rng;

use super::SequentialCircuit;
use crate::circuit::pick_kind;

/// A `bits`-bit counter starting at 0 that wraps to 0 after `modulus - 1`.
/// State nets `s<bits-1> .. s0`, most significant latch first.
pub fn counter(bits: usize, modulus: u64) -> SequentialCircuit {
    assert!((1..64).contains(&bits) && modulus >= 1 && modulus <= 1 << bits);
    let mut t = String::new();
    let _ = writeln!(t, "GATE inc0 = NOT s0");
    let _ = writeln!(t, "GATE carry0 = BUF s0");
    for i in 1..bits {
        let _ = writeln!(t, "GATE inc{i} = XOR s{i} carry{}", i - 1);
        let _ = writeln!(t, "GATE carry{i} = AND s{i} carry{}", i - 1);
    }
    let wraps = modulus < 1 << bits;
    if wraps {
        let last = modulus - 1;
        for i in 0..bits {
            if last >> i & 1 == 1 {
                let _ = writeln!(t, "GATE eq{i} = BUF s{i}");
            } else {
                let _ = writeln!(t, "GATE eq{i} = NOT s{i}");
            }
        }
        let _ = writeln!(t, "GATE wrap0 = BUF eq0");
        for i in 1..bits {
            let _ = writeln!(t, "GATE wrap{i} = AND wrap{} eq{i}", i - 1);
        }
        let _ = writeln!(t, "GATE keep = NOT wrap{}", bits - 1);
    }
    for i in 0..bits {
        if wraps {
            let _ = writeln!(t, "GATE n{i} = AND inc{i} keep");
        } else {
            let _ = writeln!(t, "GATE n{i} = BUF inc{i}");
        }
    }
    for i in (0..bits).rev() {
        let _ = writeln!(t, "LATCH s{i} n{i} 0");
    }
    SequentialCircuit::parse(&t).expect("generated counter is well formed")
}

#[derive(Clone, Copy, Debug)]
pub struct MachineShape {
    pub state_bits: usize,
    pub inputs: usize,
    pub gates: usize,
}

/// A random machine: gates over states, inputs and earlier gates, each
/// latch fed by a random gate, random initial state.
pub fn random_machine(rng: &mut impl Rng, shape: MachineShape) -> SequentialCircuit {
    assert!(shape.state_bits >= 1 && shape.gates >= 1);
    let mut t = String::new();
    let mut nets: Vec<String> = (1..=shape.state_bits).map(|i| format!("s{i}")).collect();
    for i in 1..=shape.inputs {
        let _ = writeln!(t, "INPUT x{i}");
        nets.push(format!("x{i}"));
    }
    for g in 1..=shape.gates {
        let kind = pick_kind(rng);
        let _ = write!(t, "GATE g{g} = {}", kind.name());
        for _ in 0..kind.arity() {
            let _ = write!(t, " {}", nets[rng.gen_range(0..nets.len())]);
        }
        t.push('\n');
        nets.push(format!("g{g}"));
    }
    for i in 1..=shape.state_bits {
        let g = rng.gen_range(1..=shape.gates);
        let _ = writeln!(t, "LATCH s{i} g{g} {}", rng.gen_range(0..2));
    }
    SequentialCircuit::parse(&t).expect("generated machine is well formed")
}
