//! Named verification suites shared by the command line and the test rig.
//!
//! Each check sweeps a family of configurations sized for desk-scale runs
//! and stops at the first counterexample. A failed mathematical identity is
//! a falsification alarm, not an input error, so it lands in the report;
//! Err is reserved for invalid configuration and resource bounds.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chevalley::structure_constants;
use crate::envalg::{AlgebraContext, Character};
use crate::err::{Error, Result};
use crate::gf::{good_prime, FiniteField, Fq};
use crate::modrep::{self, OracleOpts, Weight};
use crate::rcrit;
use crate::roots::build_root_system;

/// Identifiers accepted by run_check, in pipeline order: root-system
/// combinatorics, then structure constants, then enveloping-algebra
/// identities, then the module-level results.
pub const CHECK_IDS: &[&str] = &[
    "strings",
    "chevalley",
    "rho",
    "string-closure",
    "string-centralizer",
    "reorder",
    "insertion",
    "levi-centralizer",
    "r-scalar",
    "equivalence",
    "chi-split",
    "factor-split",
    "ratio",
    "kw",
];

#[derive(Clone, Debug)]
pub struct CheckConfig {
    /// Overrides each check's default type list.
    pub types: Option<Vec<(char, usize)>>,
    /// Overrides each check's default prime list; bad primes are skipped.
    pub primes: Option<Vec<u32>>,
    /// Drops types above this rank from every sweep.
    pub max_rank: Option<usize>,
    /// Oracle-driven sweeps skip configurations whose induced module
    /// dimension bound p^t exceeds this.
    pub oracle_dim_cap: usize,
    /// Random permutations per configuration in the reorder check.
    pub rand_perms: usize,
    pub opts: OracleOpts,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            types: None,
            primes: None,
            max_rank: None,
            oracle_dim_cap: 700,
            rand_perms: 20,
            opts: OracleOpts::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    /// Number of elementary assertions exercised.
    pub cases: usize,
    pub passed: bool,
    /// First counterexample on failure, sweep summary on success.
    pub detail: String,
}

impl CheckReport {
    pub fn line(&self) -> String {
        format!(
            "{:<20} {:>8}  {}  {}",
            self.name,
            self.cases,
            if self.passed { "pass" } else { "FAIL" },
            self.detail
        )
    }
}

pub fn run_check(name: &str, cfg: &CheckConfig) -> Result<CheckReport> {
    match name {
        "strings" => check_strings(cfg),
        "chevalley" => check_chevalley(cfg),
        "rho" => check_rho(cfg),
        "string-closure" => check_string_closure(cfg),
        "string-centralizer" => check_string_centralizer(cfg),
        "reorder" => check_reorder(cfg),
        "insertion" => check_insertion(cfg),
        "levi-centralizer" => check_levi_centralizer(cfg),
        "r-scalar" => check_r_scalar(cfg),
        "equivalence" => check_equivalence(cfg),
        "chi-split" => check_chi_split(cfg),
        "factor-split" => check_factor_split(cfg),
        "ratio" => check_ratio(cfg),
        "kw" => check_kw(cfg),
        _ => Err(Error::config(format!(
            "unknown check {name}; valid ids: {}",
            CHECK_IDS.join(", ")
        ))),
    }
}

pub fn run_all(cfg: &CheckConfig) -> Result<Vec<CheckReport>> {
    CHECK_IDS.iter().map(|id| run_check(id, cfg)).collect()
}

/// One representative per distinct supported system of rank <= 4.
pub const SUPPORTED_TYPES: &[(char, usize)] = &[
    ('A', 1),
    ('A', 2),
    ('A', 3),
    ('A', 4),
    ('B', 2),
    ('B', 3),
    ('B', 4),
    ('C', 2),
    ('C', 3),
    ('C', 4),
    ('D', 4),
    ('F', 4),
    ('G', 2),
];

/// String-combinatorics sweep list (C2 folds into B2).
const COMBINATORIAL_TYPES: &[(char, usize)] = &[
    ('A', 1),
    ('A', 2),
    ('A', 3),
    ('A', 4),
    ('B', 2),
    ('B', 3),
    ('B', 4),
    ('C', 3),
    ('C', 4),
    ('D', 4),
    ('G', 2),
];

/// Enveloping-algebra identity sweep list, ranks 2 and 3 plus G2.
const ENVALG_TYPES: &[(char, usize)] = &[('A', 2), ('A', 3), ('B', 2), ('B', 3), ('C', 3), ('G', 2)];

/// Module-oracle grid with per-type primes sized so the sweeps finish in
/// minutes; G2 stays formula-only because p^t is out of reach there.
const ORACLE_GRID: &[((char, usize), &[u32])] =
    &[(('A', 1), &[3, 5, 7]), (('A', 2), &[3, 5]), (('B', 2), &[3, 5]), (('G', 2), &[7])];

fn types_or(cfg: &CheckConfig, default: &[(char, usize)]) -> Vec<(char, usize)> {
    let cap = cfg.max_rank.unwrap_or(usize::MAX);
    cfg.types
        .clone()
        .unwrap_or_else(|| default.to_vec())
        .into_iter()
        .filter(|&(_, r)| r <= cap)
        .collect()
}

/// The configured primes if any, else the default (with the G2 default
/// substituted where the generic one is bad or undersized), filtered down
/// to the good primes of the type.
fn primes_for(
    cfg: &CheckConfig,
    kind: char,
    rank: usize,
    default: &[u32],
    g2_default: &[u32],
) -> Vec<u32> {
    let base: Vec<u32> = match &cfg.primes {
        Some(ps) => ps.clone(),
        None if kind == 'G' => g2_default.to_vec(),
        None => default.to_vec(),
    };
    base.into_iter().filter(|&p| good_prime(kind, rank, p).is_ok()).collect()
}

/// The module-oracle configurations: the override lists if given, the
/// per-type grid otherwise.
fn oracle_grid(cfg: &CheckConfig) -> Vec<(char, usize, u32)> {
    let cap = cfg.max_rank.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    match &cfg.types {
        Some(ts) => {
            let ps = cfg.primes.clone().unwrap_or_else(|| vec![3, 5, 7]);
            for &(k, r) in ts {
                for &p in &ps {
                    if r <= cap && good_prime(k, r, p).is_ok() {
                        out.push((k, r, p));
                    }
                }
            }
        }
        None => {
            for &((k, r), ps) in ORACLE_GRID {
                let ps = cfg.primes.clone().unwrap_or_else(|| ps.to_vec());
                for p in ps {
                    if r <= cap && good_prime(k, r, p).is_ok() {
                        out.push((k, r, p));
                    }
                }
            }
        }
    }
    out
}

fn proper_subsets(rank: usize) -> Vec<Vec<usize>> {
    (0..(1u32 << rank) - 1)
        .map(|mask| (0..rank).filter(|&i| mask & (1 << i) != 0).collect())
        .collect()
}

/// All length-`len` tuples over `values`, lexicographic in sweep order.
fn tuples(values: &[Fq], len: usize) -> Vec<Vec<Fq>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * values.len());
        for t in &out {
            for &v in values {
                let mut w = t.clone();
                w.push(v);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn prime_field_weights(p: u32, rank: usize) -> Vec<Weight> {
    let vals: Vec<Fq> = (0..p).collect();
    tuples(&vals, rank).into_iter().map(Weight::new).collect()
}

/// A falsified library error is a check failure; every other error aborts.
fn fail_or<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(Error::Falsified(m)) => Ok(Err(m)),
        Err(e) => Err(e),
    }
}

fn report(name: &str, cases: usize, failure: Option<String>) -> CheckReport {
    match failure {
        Some(detail) => CheckReport { name: name.into(), cases, passed: false, detail },
        None if cases == 0 => CheckReport {
            name: name.into(),
            cases: 0,
            passed: false,
            detail: "the sweep was empty".into(),
        },
        None => CheckReport {
            name: name.into(),
            cases,
            passed: true,
            detail: format!("{cases} cases"),
        },
    }
}

/// Plain and extended string shapes: the extension adds nothing or the
/// single root 2b - a outside G2, and one of the three G2 shapes there.
fn check_strings(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "strings";
    let mut cases = 0;
    for (kind, rank) in types_or(cfg, COMBINATORIAL_TYPES) {
        let sys = build_root_system(kind, rank)?;
        for ai in 0..rank {
            let alpha = sys.simple(ai).clone();
            for beta in &sys.positive_roots {
                if *beta == alpha {
                    continue;
                }
                let plain = sys.alpha_string(&alpha, beta)?;
                if plain.isolated {
                    continue;
                }
                cases += 1;
                let ext = sys.extended_alpha_string(&alpha, beta)?;
                let plain_set: HashSet<&Vec<i32>> =
                    plain.members.iter().map(|r| &r.coords).collect();
                if !plain.members.iter().all(|m| ext.members.contains(m)) {
                    return Ok(report(
                        name,
                        cases,
                        Some(format!(
                            "{kind}{rank}: the {alpha}-string through {beta} is not contained in its extension"
                        )),
                    ));
                }
                let comb = |cb: i32, ca: i32| -> Vec<i32> {
                    ext.base
                        .coords
                        .iter()
                        .zip(&alpha.coords)
                        .map(|(&b, &a)| cb * b + ca * a)
                        .collect()
                };
                let mut got: Vec<Vec<i32>> = ext
                    .members
                    .iter()
                    .filter(|m| !plain_set.contains(&m.coords))
                    .map(|m| m.coords.clone())
                    .collect();
                got.sort();
                let mut allowed: Vec<Vec<Vec<i32>>> = vec![vec![]];
                if kind == 'G' {
                    allowed.push(vec![comb(2, -3)]);
                    let mut triple = vec![comb(3, -1), comb(3, -2), comb(2, -1)];
                    triple.sort();
                    allowed.push(triple);
                } else {
                    allowed.push(vec![comb(2, -1)]);
                }
                if !allowed.contains(&got) {
                    return Ok(report(
                        name,
                        cases,
                        Some(format!(
                            "{kind}{rank}: the extended {alpha}-string through {beta} has an unclassified shape"
                        )),
                    ));
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

/// Antisymmetry, Jacobi, the |N| = r+1 law, and coroot expansions on the
/// full basis of every swept type.
fn check_chevalley(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "chevalley";
    let mut default: Vec<(char, usize)> = COMBINATORIAL_TYPES.to_vec();
    default.push(('F', 4));
    let mut cases = 0;
    for (kind, rank) in types_or(cfg, &default) {
        let sys = build_root_system(kind, rank)?;
        let sc = structure_constants(&sys);
        let rep = sc.verify(&sys);
        cases += rep.checked_triples;
        if !rep.ok {
            return Ok(report(name, cases, Some(format!("{kind}{rank}: {}", rep.failures.join("; ")))));
        }
    }
    Ok(report(name, cases, None))
}

/// The half-sum pairing restricted to a Levi agrees with the full one on
/// Phi_I^+, and pairs to one with every simple root.
fn check_rho(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "rho";
    let mut cases = 0;
    for (kind, rank) in types_or(cfg, SUPPORTED_TYPES) {
        let sys = build_root_system(kind, rank)?;
        for i in 0..rank {
            cases += 1;
            if sys.rho_pairing(sys.simple(i))? != 1 {
                return Ok(report(
                    name,
                    cases,
                    Some(format!("{kind}{rank}: rho does not pair to 1 with a{}", i + 1)),
                ));
            }
        }
        for i_set in proper_subsets(rank) {
            let pd = sys.parabolic_data(&i_set)?;
            for alpha in &pd.phi_i_plus {
                cases += 1;
                if sys.rho_i_pairing(&pd, alpha)? != sys.rho_pairing(alpha)? {
                    return Ok(report(
                        name,
                        cases,
                        Some(format!(
                            "{kind}{rank}, I = {}: rho and rho_I disagree on {alpha}",
                            modrep::describe_i(&pd)
                        )),
                    ));
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

/// Extended strings seeded in the nilradical stay inside it, and the
/// string order partitions the complement.
fn check_string_closure(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "string-closure";
    let mut cases = 0;
    for (kind, rank) in types_or(cfg, COMBINATORIAL_TYPES) {
        let sys = build_root_system(kind, rank)?;
        for i_set in proper_subsets(rank) {
            if i_set.is_empty() {
                continue;
            }
            let pd = sys.parabolic_data(&i_set)?;
            let comp: HashSet<&Vec<i32>> = pd.complement.iter().map(|r| &r.coords).collect();
            for &ai in &i_set {
                let alpha = sys.simple(ai).clone();
                for beta in &pd.complement {
                    let plain = sys.alpha_string(&alpha, beta)?;
                    if plain.isolated {
                        continue;
                    }
                    cases += 1;
                    let ext = sys.extended_alpha_string(&alpha, beta)?;
                    if let Some(outside) =
                        ext.members.iter().find(|m| !comp.contains(&m.coords))
                    {
                        return Ok(report(
                            name,
                            cases,
                            Some(format!(
                                "{kind}{rank}, I = {}: {outside} of the extended {alpha}-string through {beta} lies in the Levi",
                                modrep::describe_i(&pd)
                            )),
                        ));
                    }
                }
                cases += 1;
                let order = sys.alpha_order(&pd, ai)?;
                let got: HashSet<&Vec<i32>> = order.iter().map(|r| &r.coords).collect();
                if got != comp || order.len() != pd.complement.len() {
                    return Ok(report(
                        name,
                        cases,
                        Some(format!(
                            "{kind}{rank}, I = {}: the a{}-order does not enumerate the complement",
                            modrep::describe_i(&pd),
                            ai + 1
                        )),
                    ));
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

/// e_alpha commutes with the (p-1)-th power of every non-isolated extended
/// string product.
fn check_string_centralizer(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "string-centralizer";
    let mut cases = 0;
    for (kind, rank) in types_or(cfg, ENVALG_TYPES) {
        for p in primes_for(cfg, kind, rank, &[3, 5], &[7]) {
            let sys = build_root_system(kind, rank)?;
            let field = FiniteField::new(p, 1)?;
            let ctx = AlgebraContext::new(&sys, &field, Character::zero(rank), None)?;
            for ai in 0..rank {
                let alpha = sys.simple(ai).clone();
                for beta in sys.positive_roots.clone() {
                    if beta == alpha || sys.alpha_string(&alpha, &beta)?.isolated {
                        continue;
                    }
                    cases += 1;
                    match fail_or(ctx.check_string_centralizes(ai, &beta))? {
                        Ok(true) => {}
                        Ok(false) => {
                            return Ok(report(
                                name,
                                cases,
                                Some(format!(
                                    "{kind}{rank}, p = {p}: e[{alpha}] does not centralize the string power through {beta}"
                                )),
                            ));
                        }
                        Err(m) => return Ok(report(name, cases, Some(m))),
                    }
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

/// Reordering the full f-product only scales it, by a nonzero constant.
fn check_reorder(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "reorder";
    let mut cases = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.opts.seed);
    for (kind, rank) in types_or(cfg, ENVALG_TYPES) {
        for p in primes_for(cfg, kind, rank, &[3], &[7]) {
            let sys = build_root_system(kind, rank)?;
            let field = FiniteField::new(p, 1)?;
            let ctx = AlgebraContext::new(&sys, &field, Character::zero(rank), None)?;
            for i_set in proper_subsets(rank) {
                let pd = sys.parabolic_data(&i_set)?;
                let k = pd.complement.len();
                let mut perms: Vec<Vec<usize>> = vec![(0..k).collect(), (0..k).rev().collect()];
                for _ in 0..cfg.rand_perms {
                    let mut perm: Vec<usize> = (0..k).collect();
                    perm.shuffle(&mut rng);
                    perms.push(perm);
                }
                for perm in perms {
                    cases += 1;
                    match fail_or(ctx.reorder_constant(&pd, &perm))? {
                        Ok(_) => {}
                        Err(m) => {
                            return Ok(report(
                                name,
                                cases,
                                Some(format!(
                                    "{kind}{rank}, p = {p}, I = {}: {m}",
                                    modrep::describe_i(&pd)
                                )),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

/// Inserting one extra f into a saturated nilradical product kills it.
fn check_insertion(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "insertion";
    let mut cases = 0;
    for (kind, rank) in types_or(cfg, ENVALG_TYPES) {
        for p in primes_for(cfg, kind, rank, &[3], &[7]) {
            let sys = build_root_system(kind, rank)?;
            let field = FiniteField::new(p, 1)?;
            let ctx = AlgebraContext::new(&sys, &field, Character::zero(rank), None)?;
            for i_set in proper_subsets(rank) {
                let pd = sys.parabolic_data(&i_set)?;
                let subset: Vec<usize> = pd
                    .complement
                    .iter()
                    .map(|r| sys.root_index(r).unwrap())
                    .collect();
                let n = subset.len();
                let picks: BTreeSet<usize> = [0, n / 2, n - 1].into_iter().collect();
                for k_idx in picks {
                    let cutoff = sys.positive_roots[subset[k_idx]].height();
                    let exps: Vec<u8> = subset
                        .iter()
                        .map(|&i| {
                            if sys.positive_roots[i].height() >= cutoff {
                                (p - 1) as u8
                            } else {
                                1
                            }
                        })
                        .collect();
                    let wlen: usize = exps.iter().map(|&e| e as usize).sum();
                    let positions: BTreeSet<usize> = [0, wlen / 2, wlen].into_iter().collect();
                    for pos in positions {
                        cases += 1;
                        match fail_or(ctx.check_insertion_vanishes(&subset, &exps, k_idx, pos))? {
                            Ok(true) => {}
                            Ok(false) => {
                                return Ok(report(
                                    name,
                                    cases,
                                    Some(format!(
                                        "{kind}{rank}, p = {p}, I = {}: inserting f[{}] at {pos} does not vanish",
                                        modrep::describe_i(&pd),
                                        sys.positive_roots[subset[k_idx]]
                                    )),
                                ));
                            }
                            Err(m) => return Ok(report(name, cases, Some(m))),
                        }
                    }
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

/// Every Levi generator commutes with the full nilradical f-product.
fn check_levi_centralizer(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "levi-centralizer";
    let mut cases = 0;
    for (kind, rank) in types_or(cfg, ENVALG_TYPES) {
        for p in primes_for(cfg, kind, rank, &[3], &[7]) {
            let sys = build_root_system(kind, rank)?;
            let field = FiniteField::new(p, 1)?;
            let ctx = AlgebraContext::new(&sys, &field, Character::zero(rank), None)?;
            for i_set in proper_subsets(rank) {
                if i_set.is_empty() {
                    continue;
                }
                let pd = sys.parabolic_data(&i_set)?;
                cases += 1;
                match fail_or(ctx.check_levi_centralizes(&pd))? {
                    Ok(true) => {}
                    Ok(false) => {
                        return Ok(report(
                            name,
                            cases,
                            Some(format!(
                                "{kind}{rank}, p = {p}, I = {}: a Levi generator moves the full f-product",
                                modrep::describe_i(&pd)
                            )),
                        ));
                    }
                    Err(m) => return Ok(report(name, cases, Some(m))),
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

/// The e...f sweep of the generator stays proportional to it on explicitly
/// constructed modules.
fn check_r_scalar(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "r-scalar";
    let mut cases = 0;
    for (kind, rank, p) in oracle_grid(cfg) {
        let sys = build_root_system(kind, rank)?;
        if (p as u128).pow(sys.positive_roots.len() as u32) > cfg.oracle_dim_cap as u128 {
            continue;
        }
        let field = FiniteField::new(p, 1)?;
        let ctx = AlgebraContext::new(&sys, &field, Character::zero(rank), None)?;
        for i_set in proper_subsets(rank) {
            let pd = sys.parabolic_data(&i_set)?;
            let mut lams: BTreeSet<Vec<Fq>> = BTreeSet::new();
            lams.insert(vec![0; rank]);
            lams.insert(vec![p - 1; rank]);
            lams.insert((0..rank).map(|i| (i as u32 + 1) % p).collect());
            for x in lams {
                cases += 1;
                let lambda = Weight::new(x);
                let outcome = fail_or(
                    modrep::build_z(&ctx, &pd, &lambda, &cfg.opts)
                        .and_then(|(c2, z)| modrep::r_on_module(&c2, &pd, &z)),
                )?;
                if let Err(m) = outcome {
                    return Ok(report(
                        name,
                        cases,
                        Some(format!(
                            "{kind}{rank}, p = {p}, I = {}, lambda = {}: {m}",
                            modrep::describe_i(&pd),
                            lambda.describe(&field)
                        )),
                    ));
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

/// Closed-form verdict, module-oracle verdict, and straightening scalar
/// agree for every weight; oversized configurations run formula-only.
fn check_equivalence(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "equivalence";
    let mut cases = 0;
    let mut oracle_cases = 0;
    for (kind, rank, p) in oracle_grid(cfg) {
        let sys = build_root_system(kind, rank)?;
        let field = FiniteField::new(p, 1)?;
        let ctx = AlgebraContext::new(&sys, &field, Character::zero(rank), None)?;
        let oracle_fits =
            (p as u128).pow(sys.positive_roots.len() as u32) <= cfg.oracle_dim_cap as u128;
        for i_set in proper_subsets(rank) {
            let pd = sys.parabolic_data(&i_set)?;
            let lams = modrep::compatible_weights(&ctx);
            if oracle_fits {
                match fail_or(modrep::verify_equivalence(&ctx, &pd, &lams, &cfg.opts))? {
                    Ok(rep) => {
                        cases += rep.rows.len();
                        oracle_cases += rep.rows.len();
                        if !rep.ok() {
                            return Ok(report(
                                name,
                                cases,
                                Some(format!(
                                    "{kind}{rank}, p = {p}, I = {}: {}",
                                    modrep::describe_i(&pd),
                                    rep.mismatches[0]
                                )),
                            ));
                        }
                    }
                    Err(m) => return Ok(report(name, cases, Some(m))),
                }
            } else {
                // Formula-only: the factorization identity still ties the
                // criterion product to the two closed-form scalars.
                for lambda in &lams {
                    cases += 1;
                    let verdict = rcrit::r_product(&sys, &field, &pd, lambda)?;
                    if verdict.simple != (verdict.r_value != 0) {
                        return Ok(report(
                            name,
                            cases,
                            Some(format!(
                                "{kind}{rank}, p = {p}, I = {}: verdict disagrees with its own product",
                                modrep::describe_i(&pd)
                            )),
                        ));
                    }
                }
                if let Err(m) = fail_or(rcrit::factor_split_constant(&sys, &field, &pd, &lams))? {
                    return Ok(report(name, cases, Some(m)));
                }
            }
        }
    }
    let mut rep = report(name, cases, None);
    if rep.passed {
        rep.detail = format!("{cases} cases, {oracle_cases} with oracle");
    }
    Ok(rep)
}

/// Dropping the nilpotent part of chi changes neither the straightening
/// scalar nor the verdict agreement.
fn check_chi_split(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "chi-split";
    let mut cases = 0;
    for (kind, rank) in types_or(cfg, &[('A', 2), ('B', 2)]) {
        for p in primes_for(cfg, kind, rank, &[3], &[5]) {
            let sys = build_root_system(kind, rank)?;
            let field = FiniteField::new(p, 1)?;
            for i_set in proper_subsets(rank) {
                if i_set.is_empty() {
                    continue;
                }
                let pd = sys.parabolic_data(&i_set)?;
                for &ai in &i_set {
                    let mut chi = Character::zero(rank);
                    let idx = sys.root_index(sys.simple(ai)).unwrap();
                    chi.chi_f.insert(idx, 1);
                    let ctx = AlgebraContext::new(&sys, &field, chi.clone(), None)?;
                    let lams = modrep::compatible_weights(&ctx);
                    match fail_or(modrep::verify_equivalence(&ctx, &pd, &lams, &cfg.opts))? {
                        Ok(rep) if !rep.ok() => {
                            return Ok(report(
                                name,
                                cases + 1,
                                Some(format!(
                                    "{kind}{rank}, p = {p}, I = {}: {}",
                                    modrep::describe_i(&pd),
                                    rep.mismatches[0]
                                )),
                            ));
                        }
                        Ok(_) => {}
                        Err(m) => return Ok(report(name, cases + 1, Some(m))),
                    }
                    for lambda in &lams {
                        cases += 1;
                        match fail_or(rcrit::chi_split_consistency(
                            &sys, &field, &pd, &chi, lambda, &cfg.opts,
                        ))? {
                            Ok(true) => {}
                            Ok(false) => {
                                return Ok(report(
                                    name,
                                    cases,
                                    Some(format!(
                                        "{kind}{rank}, p = {p}, I = {}, lambda = {}: the scalar depends on the nilpotent part",
                                        modrep::describe_i(&pd),
                                        lambda.describe(&field)
                                    )),
                                ));
                            }
                            Err(m) => return Ok(report(name, cases, Some(m))),
                        }
                    }
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

/// The criterion product times the Levi scalar matches the full scalar up
/// to one constant, with equal zero loci.
fn check_factor_split(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "factor-split";
    let mut cases = 0;
    for (kind, rank) in types_or(cfg, SUPPORTED_TYPES) {
        for p in primes_for(cfg, kind, rank, &[3, 5], &[5, 7]) {
            let sys = build_root_system(kind, rank)?;
            let field = FiniteField::new(p, 1)?;
            let lams = prime_field_weights(p, rank);
            for i_set in proper_subsets(rank) {
                let pd = sys.parabolic_data(&i_set)?;
                cases += lams.len();
                match fail_or(rcrit::factor_split_constant(&sys, &field, &pd, &lams))? {
                    Ok(Some(_)) => {}
                    Ok(None) => {
                        return Ok(report(
                            name,
                            cases,
                            Some(format!(
                                "{kind}{rank}, p = {p}, I = {}: every weight vanished",
                                modrep::describe_i(&pd)
                            )),
                        ));
                    }
                    Err(m) => return Ok(report(name, cases, Some(m))),
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

/// The straightening scalar is one fixed nonzero multiple of the criterion
/// product across all weights of each configuration.
fn check_ratio(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "ratio";
    let mut cases = 0;
    for (kind, rank, p) in oracle_grid(cfg) {
        let sys = build_root_system(kind, rank)?;
        if (p as u128).pow(sys.positive_roots.len() as u32) > cfg.oracle_dim_cap as u128 {
            continue;
        }
        let field = FiniteField::new(p, 1)?;
        let ctx = AlgebraContext::new(&sys, &field, Character::zero(rank), None)?;
        for i_set in proper_subsets(rank) {
            let pd = sys.parabolic_data(&i_set)?;
            cases += modrep::compatible_weights(&ctx).len();
            match fail_or(rcrit::measured_constant(&ctx, &pd, &cfg.opts))? {
                Ok(Some(_)) => {}
                Ok(None) => {
                    return Ok(report(
                        name,
                        cases,
                        Some(format!(
                            "{kind}{rank}, p = {p}, I = {}: no weight produced a nonzero scalar",
                            modrep::describe_i(&pd)
                        )),
                    ));
                }
                Err(m) => {
                    return Ok(report(
                        name,
                        cases,
                        Some(format!(
                            "{kind}{rank}, p = {p}, I = {}: {m}",
                            modrep::describe_i(&pd)
                        )),
                    ));
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

/// A semisimple character nonzero on every complement coroot makes all
/// compatible weights simple, by formula and (where sized) by module.
fn check_kw(cfg: &CheckConfig) -> Result<CheckReport> {
    let name = "kw";
    let mut cases = 0;
    for (kind, rank) in types_or(cfg, &[('A', 1), ('A', 2)]) {
        for p in primes_for(cfg, kind, rank, &[3], &[5]) {
            let sys = build_root_system(kind, rank)?;
            let field = FiniteField::new(p, 2)?;
            // Coordinate values with compatible weights: zero plus the
            // nonzero part of the Artin-Schreier image of the extension.
            let mut cand: Vec<Fq> = vec![0];
            for d in field.elements() {
                if d < p {
                    continue;
                }
                let v = field.sub(field.pow(d, p as u64), d);
                if !cand.contains(&v) {
                    cand.push(v);
                }
            }
            cand.sort_unstable();
            let oracle_fits =
                (p as u128).pow(sys.positive_roots.len() as u32) <= cfg.oracle_dim_cap as u128;
            for chi_h in tuples(&cand, rank) {
                let chi = Character::with_h(chi_h);
                for i_set in proper_subsets(rank) {
                    let pd = sys.parabolic_data(&i_set)?;
                    if !rcrit::kw_sufficient(&sys, &field, &pd, &chi)? {
                        continue;
                    }
                    let ctx = AlgebraContext::new(&sys, &field, chi.clone(), None)?;
                    let lams = modrep::compatible_weights(&ctx);
                    for lambda in &lams {
                        cases += 1;
                        let verdict = rcrit::r_product(&sys, &field, &pd, lambda)?;
                        if !verdict.simple {
                            return Ok(report(
                                name,
                                cases,
                                Some(format!(
                                    "{kind}{rank}, GF({}), I = {}, chi {}: lambda = {} is not formula-simple",
                                    field.describe(),
                                    modrep::describe_i(&pd),
                                    chi.describe(&sys, &field),
                                    lambda.describe(&field)
                                )),
                            ));
                        }
                    }
                    if !oracle_fits {
                        continue;
                    }
                    match fail_or(modrep::verify_equivalence(&ctx, &pd, &lams, &cfg.opts))? {
                        Ok(rep) if !rep.ok() => {
                            return Ok(report(
                                name,
                                cases,
                                Some(format!(
                                    "{kind}{rank}, GF({}), I = {}: {}",
                                    field.describe(),
                                    modrep::describe_i(&pd),
                                    rep.mismatches[0]
                                )),
                            ));
                        }
                        Ok(_) => {}
                        Err(m) => return Ok(report(name, cases, Some(m))),
                    }
                }
            }
        }
    }
    Ok(report(name, cases, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(types: Vec<(char, usize)>, primes: Vec<u32>) -> CheckConfig {
        CheckConfig {
            types: Some(types),
            primes: Some(primes),
            rand_perms: 5,
            ..CheckConfig::default()
        }
    }

    #[test]
    fn unknown_check_is_rejected() {
        let err = run_check("no-such-check", &CheckConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn falsified_errors_become_failures_and_others_abort() {
        assert!(fail_or::<()>(Err(Error::falsified("x"))).unwrap().is_err());
        assert!(fail_or(Ok(7)).unwrap().is_ok());
        assert!(fail_or::<()>(Err(Error::config("x"))).is_err());
    }

    #[test]
    fn combinatorial_checks_pass_on_defaults() {
        for id in ["strings", "rho", "string-closure"] {
            let rep = run_check(id, &CheckConfig::default()).unwrap();
            assert!(rep.passed, "{id}: {}", rep.detail);
            assert!(rep.cases > 100, "{id} swept only {} cases", rep.cases);
        }
    }

    #[test]
    fn chevalley_check_passes_on_small_types() {
        let rep = run_check("chevalley", &quick(vec![('A', 2), ('B', 2), ('G', 2)], vec![]))
            .unwrap();
        assert!(rep.passed, "{}", rep.detail);
    }

    #[test]
    fn algebra_identity_checks_pass_on_a2() {
        for id in ["string-centralizer", "reorder", "insertion", "levi-centralizer"] {
            let rep = run_check(id, &quick(vec![('A', 2)], vec![3])).unwrap();
            assert!(rep.passed, "{id}: {}", rep.detail);
            assert!(rep.cases > 0, "{id} ran no cases");
        }
    }

    #[test]
    fn empty_sweeps_fail_loudly() {
        // A1 has no nonempty proper subset of simple roots.
        let rep = run_check("levi-centralizer", &quick(vec![('A', 1)], vec![3])).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.cases, 0);
    }

    #[test]
    fn module_checks_pass_on_a1() {
        for id in ["r-scalar", "equivalence", "ratio", "kw"] {
            let rep = run_check(id, &quick(vec![('A', 1)], vec![3, 5])).unwrap();
            assert!(rep.passed, "{id}: {}", rep.detail);
            assert!(rep.cases > 0, "{id} ran no cases");
        }
    }

    #[test]
    fn chi_split_check_passes_on_a2() {
        let rep = run_check("chi-split", &quick(vec![('A', 2)], vec![3])).unwrap();
        assert!(rep.passed, "{}", rep.detail);
        assert_eq!(rep.cases, 18);
    }

    #[test]
    fn factor_split_check_passes_broadly() {
        let rep = run_check("factor-split", &quick(vec![('A', 2), ('B', 2), ('G', 2)], vec![5]))
            .unwrap();
        assert!(rep.passed, "{}", rep.detail);
        // Three proper subsets per rank-2 type, 25 weights each.
        assert_eq!(rep.cases, 3 * 3 * 25);
    }

    #[test]
    fn report_lines_render() {
        let rep = report("rho", 12, None);
        assert!(rep.line().contains("pass"));
        let bad = report("rho", 12, Some("broken".into()));
        assert!(bad.line().contains("FAIL"));
    }
}
