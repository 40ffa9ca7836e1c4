// SPDX-License-Identifier: Apache-2.0
#![no_main]

use libfuzzer_sys::fuzz_target;
use propforge::Circuit;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = Circuit::parse(text) {
        let again = Circuit::parse(&c.to_netlist()).expect("printed netlist parses");
        assert_eq!(again, c);
        let _ = c.tseitin();
    }
});
