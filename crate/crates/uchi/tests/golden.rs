//! Golden snapshots of the serialization surfaces: regenerate and compare
//! byte for byte, then round-trip through the deserializer.

use uchi::chevalley::structure_constants;
use uchi::roots::{build_root_system, RootSystem, RootSystemDoc};

fn doc_json(kind: char, rank: usize) -> String {
    let sys = build_root_system(kind, rank).unwrap();
    serde_json::to_string_pretty(&sys.to_doc()).unwrap() + "\n"
}

#[test]
fn b2_doc_matches_fixture() {
    assert_eq!(doc_json('B', 2), include_str!("fixtures/b2_roots.json"));
}

#[test]
fn g2_doc_matches_fixture() {
    assert_eq!(doc_json('G', 2), include_str!("fixtures/g2_roots.json"));
}

#[test]
fn fixture_docs_round_trip() {
    for raw in [
        include_str!("fixtures/b2_roots.json"),
        include_str!("fixtures/g2_roots.json"),
    ] {
        let doc: RootSystemDoc = serde_json::from_str(raw).unwrap();
        let sys = RootSystem::from_doc(&doc).unwrap();
        assert_eq!(sys.to_doc(), doc);
    }
}

#[test]
fn g2_chevalley_csv_matches_fixture() {
    let sys = build_root_system('G', 2).unwrap();
    let sc = structure_constants(&sys);
    assert_eq!(sc.to_csv(&sys), include_str!("fixtures/g2_chevalley.csv"));
}
