// SPDX-License-Identifier: Apache-2.0

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Circuit, CircuitBuilder, GateKind};

/// Size parameters for [`random_circuit`].
#[derive(Clone, Copy, Debug)]
pub struct RandomCircuitShape {
    pub inputs: usize,
    pub gates: usize,
    pub outputs: usize,
}

const WEIGHTED_KINDS: [(GateKind, u32); 10] = [
    (GateKind::And, 6),
    (GateKind::Or, 6),
    (GateKind::Nand, 4),
    (GateKind::Nor, 4),
    (GateKind::Xor, 4),
    (GateKind::Xnor, 3),
    (GateKind::Not, 4),
    (GateKind::Buf, 1),
    (GateKind::Const0, 1),
    (GateKind::Const1, 1),
];

pub(crate) fn pick_kind(rng: &mut impl Rng) -> GateKind {
    let total: u32 = WEIGHTED_KINDS.iter().map(|(_, w)| w).sum();
    let mut roll = rng.gen_range(0..total);
    for (kind, w) in WEIGHTED_KINDS {
        if roll < w {
            return kind;
        }
        roll -= w;
    }
    unreachable!()
}

/// A random acyclic circuit. Inputs are `x1..`, outputs `z1..` and internal
/// nets `y<gate>`. Gate inputs are drawn from all earlier nets; the outputs
/// are distinct randomly chosen gates. `outputs` is clamped to `gates`.
pub fn random_circuit(rng: &mut impl Rng, shape: RandomCircuitShape) -> Circuit {
    assert!(shape.inputs >= 1 && shape.gates >= 1);
    let outputs = shape.outputs.clamp(1, shape.gates);
    let mut out_gates: Vec<usize> = (0..shape.gates).collect();
    out_gates.shuffle(rng);
    out_gates.truncate(outputs);
    out_gates.sort_unstable();

    let mut gate_names = vec![String::new(); shape.gates];
    for (i, name) in gate_names.iter_mut().enumerate() {
        *name = match out_gates.iter().position(|&g| g == i) {
            Some(pos) => format!("z{}", pos + 1),
            None => format!("y{}", i + 1),
        };
    }

    let mut b = CircuitBuilder::new();
    let mut nets: Vec<String> = (1..=shape.inputs).map(|i| format!("x{i}")).collect();
    for net in &nets {
        b.input(net);
    }
    for name in &gate_names {
        let kind = pick_kind(rng);
        let ins: Vec<&str> = (0..kind.arity())
            .map(|_| nets[rng.gen_range(0..nets.len())].as_str())
            .collect();
        b.gate(name, kind, &ins);
        nets.push(name.clone());
    }
    for pos in 0..outputs {
        b.output(&format!("z{}", pos + 1));
    }
    b.build().expect("generated circuits are well formed")
}
