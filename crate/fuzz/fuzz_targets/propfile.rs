// SPDX-License-Identifier: Apache-2.0
#![no_main]

use libfuzzer_sys::fuzz_target;
use propforge::compspec::{parse_properties, write_properties};
use propforge::VarTable;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut table = VarTable::new();
    for name in ["x1", "x2", "z1", "z2", "s0", "s1"] {
        table.add_named(name).expect("distinct names");
    }
    if let Ok(spec) = parse_properties(text, &table) {
        let again = parse_properties(&write_properties(&spec), &table).expect("written file parses");
        assert_eq!(again, spec);
    }
});
