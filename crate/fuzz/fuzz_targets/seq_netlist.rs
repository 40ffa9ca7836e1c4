// SPDX-License-Identifier: Apache-2.0
#![no_main]

use libfuzzer_sys::fuzz_target;
use propforge::seq::SequentialCircuit;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = SequentialCircuit::parse(text) {
        SequentialCircuit::parse(&m.to_netlist()).expect("printed netlist parses");
    }
});
