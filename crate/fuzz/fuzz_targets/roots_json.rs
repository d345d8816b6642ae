//! Fuzz the root-system JSON snapshot decoder: reject or round-trip, never panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use uchi::roots::{RootSystem, RootSystemDoc};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(doc) = serde_json::from_str::<RootSystemDoc>(s) else { return };
    if let Ok(sys) = RootSystem::from_doc(&doc) {
        let again = sys.to_doc();
        let sys2 = RootSystem::from_doc(&again).expect("accepted snapshot re-validates");
        assert_eq!(again, sys2.to_doc(), "snapshot round trip is stable");
    }
});
