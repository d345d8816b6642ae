//! Fuzz the comma-separated scalar-list parser used for weights and chi-h.

#![no_main]

use libfuzzer_sys::fuzz_target;
use uchi::gf::FiniteField;
use uchi::textfmt::{parse_field_elem, parse_scalar_list};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for &(p, e, len) in &[(3u32, 1u32, 2usize), (5, 1, 3), (3, 2, 2)] {
        let f = FiniteField::new(p, e).expect("small field builds");
        if let Ok(xs) = parse_scalar_list(s, &f, len) {
            assert_eq!(xs.len(), len, "list length honors the contract");
            for &x in &xs {
                assert!(x < f.q(), "element out of range");
                assert_eq!(parse_field_elem(&f.render(x), &f).unwrap(), x);
            }
        }
    }
});
