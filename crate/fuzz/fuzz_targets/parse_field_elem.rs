//! Fuzz the dotted field-element parser: no panics, render round-trips.

#![no_main]

use libfuzzer_sys::fuzz_target;
use uchi::gf::FiniteField;
use uchi::textfmt::parse_field_elem;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for &(p, e) in &[(3u32, 1u32), (5, 1), (3, 2), (7, 2)] {
        let f = FiniteField::new(p, e).expect("small field builds");
        if let Ok(v) = parse_field_elem(s, &f) {
            assert!(v < f.q(), "parsed element out of range");
            let back = parse_field_elem(&f.render(v), &f).expect("rendered form reparses");
            assert_eq!(back, v, "render/parse round trip");
        }
    }
});
