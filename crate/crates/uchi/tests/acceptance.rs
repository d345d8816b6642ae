//! Acceptance gate: ten criteria, one test and one pass/fail line each.
//!
//! Each criterion either wraps a named check at its default sweep sizes or
//! drives the library directly; case counts are pinned where the sweep is
//! small enough to enumerate by hand.

use uchi::checks::{run_check, CheckConfig, SUPPORTED_TYPES};
use uchi::envalg::{AlgebraContext, Character};
use uchi::gf::{good_prime, FiniteField};
use uchi::modrep::{build_z, is_simple, Weight};
use uchi::rcrit::{r_factorization, r_product};
use uchi::roots::build_root_system;

fn run(name: &str) -> uchi::checks::CheckReport {
    let rep = run_check(name, &CheckConfig::default()).unwrap();
    println!("{}", rep.line());
    assert!(rep.passed, "criterion check {name} failed: {}", rep.detail);
    rep
}

#[test]
fn criterion_01_string_classification() {
    let rep = run("strings");
    assert!(rep.cases > 100, "sweep too small: {} cases", rep.cases);
}

#[test]
fn criterion_02_chevalley_validity() {
    let rep = run("chevalley");
    assert!(rep.cases > 10_000, "sweep too small: {} cases", rep.cases);
}

#[test]
fn criterion_03_string_centralizers() {
    let rep = run("string-centralizer");
    assert!(rep.cases > 50, "sweep too small: {} cases", rep.cases);
}

#[test]
fn criterion_04_product_identities() {
    let reorder = run("reorder");
    // 22 permutations per proper I: 3+7+3+7+7+3 subsets over the six types.
    assert_eq!(reorder.cases, 22 * 30);
    run("insertion");
    let levi = run("levi-centralizer");
    // Nonempty proper subsets: 2+6+2+6+6+2 over the six types.
    assert_eq!(levi.cases, 24);
}

#[test]
fn criterion_05_formula_oracle_equivalence() {
    let rep = run("equivalence");
    // A1: 3+5+7 weights; A2 and B2: 3 subsets x (9 + 25) weights each;
    // G2 at 7: 3 subsets x 49 weights, formula-only.
    assert_eq!(rep.cases, 15 + 102 + 102 + 147);
    assert!(rep.detail.contains("219 with oracle"), "{}", rep.detail);
}

#[test]
fn criterion_06_constant_ratio() {
    let rep = run("ratio");
    // The oracle-sized part of the criterion-5 grid.
    assert_eq!(rep.cases, 15 + 102 + 102);
}

#[test]
fn criterion_07_nilpotent_chi_split() {
    let rep = run("chi-split");
    // A2 and B2 at p = 3: two singleton subsets each, 9 weights per config.
    assert_eq!(rep.cases, 36);
}

#[test]
fn criterion_08_kw_sufficiency_over_extension() {
    let rep = run("kw");
    // A1 over GF(9): 2 sufficient characters x 3 weights. A2 over GF(9):
    // 2 x 9 for the empty subset plus 4 x 9 for each singleton.
    assert_eq!(rep.cases, 6 + 18 + 36 + 36);
}

#[test]
fn criterion_09_rho_restriction() {
    let rep = run("rho");
    assert!(rep.cases > 100, "sweep too small: {} cases", rep.cases);
}

#[test]
fn criterion_10_steinberg_sanity() {
    let cfg = CheckConfig::default();
    let mut cases = 0;
    let mut oracle_cases = 0;
    for &(kind, rank) in SUPPORTED_TYPES {
        for p in [3u32, 5, 7] {
            if good_prime(kind, rank, p).is_err() {
                continue;
            }
            let sys = build_root_system(kind, rank).unwrap();
            let field = FiniteField::new(p, 1).unwrap();
            let pd = sys.parabolic_data(&[]).unwrap();
            let lambda = Weight::new(vec![p - 1; rank]);
            let verdict = r_product(&sys, &field, &pd, &lambda).unwrap();
            assert!(verdict.simple, "{kind}{rank}, p = {p}: Steinberg weight not formula-simple");
            for factor in &r_factorization(&sys, &pd).unwrap().factors {
                assert_eq!(
                    factor.value_at(&field, &lambda),
                    field.from_int(-1),
                    "{kind}{rank}, p = {p}: factor at {} is not -1",
                    factor.root
                );
            }
            cases += 1;
            if (p as u128).pow(pd.t as u32) <= cfg.oracle_dim_cap as u128 {
                let ctx = AlgebraContext::new(&sys, &field, Character::zero(rank), None).unwrap();
                let (_, z) = build_z(&ctx, &pd, &lambda, &cfg.opts).unwrap();
                let w = is_simple(&z, &cfg.opts).unwrap();
                assert!(w.simple, "{kind}{rank}, p = {p}: Steinberg module not oracle-simple");
                oracle_cases += 1;
            }
        }
    }
    println!("steinberg              {cases:>8}  pass  {oracle_cases} with oracle");
    assert_eq!(cases, 37);
    assert_eq!(oracle_cases, 10);
}
