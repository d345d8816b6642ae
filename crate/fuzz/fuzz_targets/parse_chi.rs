//! Fuzz the root:value pair parser for chi on Levi f generators.

#![no_main]

use libfuzzer_sys::fuzz_target;
use uchi::gf::FiniteField;
use uchi::roots::build_root_system;
use uchi::textfmt::parse_chi_f;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for &(kind, rank) in &[('A', 2usize), ('B', 2), ('G', 2)] {
        let sys = build_root_system(kind, rank).expect("small system builds");
        let f = FiniteField::new(7, 1).expect("small field builds");
        if let Ok(map) = parse_chi_f(s, &sys, &f) {
            for (&idx, &v) in &map {
                assert!(idx < sys.positive_roots.len(), "root index in range");
                assert!(v < f.q(), "value in range");
            }
        }
    }
});
