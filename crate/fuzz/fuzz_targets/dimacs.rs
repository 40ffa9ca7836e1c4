// SPDX-License-Identifier: Apache-2.0
#![no_main]

use libfuzzer_sys::fuzz_target;
use propforge::formula::dimacs;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(f) = dimacs::parse(text) {
        let again = dimacs::parse(&dimacs::write(&f)).expect("written CNF parses");
        assert_eq!(again.clauses(), f.clauses());
    }
});
