//! Explicit matrix modules over GF(p^e) and an independent simplicity oracle.
//!
//! Matrices act on row vectors from the right, so rows hold images of basis
//! vectors and composition reverses order: the matrix of a product xy is
//! mat(y) * mat(x).

use std::collections::BTreeMap;
use std::io;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chevalley::p_power;
use crate::envalg::{complement_first_order, AlgebraContext, Gen};
use crate::err::{Error, Result};
use crate::gf::{FiniteField, Fq};
use crate::linalg::{
    left_nullspace, min_poly_on_vector, poly_roots, right_nullspace, DenseMat, Echelon, SparseMat,
};
use crate::roots::ParabolicData;

/// A highest weight given by its values x_i = lambda(h_{a_i}).
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    pub x: Vec<Fq>,
}

impl Weight {
    pub fn new(x: Vec<Fq>) -> Self {
        Weight { x }
    }

    /// x_i^p - x_i = chi(h_i)^p must hold for every simple index.
    pub fn compatible(&self, ctx: &AlgebraContext) -> Result<()> {
        let f = &ctx.field;
        if self.x.len() != ctx.sys.rank {
            return Err(Error::config(format!(
                "weight needs {} values, got {}",
                ctx.sys.rank,
                self.x.len()
            )));
        }
        let p = f.p() as u64;
        for (i, &xi) in self.x.iter().enumerate() {
            if xi >= f.q() {
                return Err(Error::config(format!("weight value {xi} outside GF({})", f.describe())));
            }
            let lhs = f.sub(f.pow(xi, p), xi);
            let rhs = f.pow(ctx.chi.chi_h[i], p);
            if lhs != rhs {
                return Err(Error::domain(format!(
                    "weight is incompatible with chi at index {}: x^p - x = {}, chi(h)^p = {}",
                    i + 1,
                    f.render(lhs),
                    f.render(rhs)
                )));
            }
        }
        Ok(())
    }

    /// lambda(h_alpha) = sum k_i x_i over the coroot expansion.
    pub fn pairing(&self, ctx: &AlgebraContext, alpha: &crate::roots::Root) -> Result<Fq> {
        let f = &ctx.field;
        let k = ctx.sys.coroot_coeffs(alpha)?;
        let mut acc = 0;
        for (i, &ki) in k.iter().enumerate() {
            acc = f.add(acc, f.mul(f.from_int(ki), self.x[i]));
        }
        Ok(acc)
    }

    pub fn describe(&self, f: &FiniteField) -> String {
        self.x.iter().map(|&v| f.render(v)).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Debug)]
pub struct OracleOpts {
    pub seed: u64,
    /// Refuse module constructions above this dimension.
    pub max_dim: usize,
    /// Random words tried before the weight-space fallback.
    pub word_cap: usize,
    /// Largest projective nullspace enumerated per word.
    pub direction_cap: u128,
    /// Largest projective weight-space enumerated in the fallback.
    pub weight_direction_cap: u128,
    /// Exact commutant computation limit (dimension).
    pub commutant_exact_bound: usize,
}

impl Default for OracleOpts {
    fn default() -> Self {
        OracleOpts {
            seed: 0x0e_1a7e,
            max_dim: 20_000,
            word_cap: 64,
            direction_cap: 40,
            weight_direction_cap: 100_000,
            commutant_exact_bound: 150,
        }
    }
}

/// A module given by its generator action matrices.
#[derive(Clone, Debug)]
pub struct ModuleRep {
    pub dim: usize,
    pub field: FiniteField,
    pub action: BTreeMap<Gen, SparseMat>,
    /// (exponent tuple over the complement roots, Levi-basis index) per row.
    pub basis_labels: Vec<(Vec<u8>, usize)>,
    pub highest_vector: usize,
}

impl ModuleRep {
    fn basis_vec(&self, i: usize) -> Vec<Fq> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    /// Apply gen^k to a row vector.
    pub fn apply_pow(&self, g: Gen, k: usize, mut v: Vec<Fq>) -> Vec<Fq> {
        let a = &self.action[&g];
        for _ in 0..k {
            v = a.apply(&self.field, &v);
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct SimplicityWitness {
    pub simple: bool,
    /// Rows span a proper nonzero invariant subspace when not simple.
    pub proper_submodule_basis: Option<DenseMat>,
    /// 1 when the commutant is certified to be the base field; a value d > 1
    /// certifies a commuting field extension of that degree; 0 when the run
    /// concluded simplicity without certifying the commutant.
    pub endomorphism_dim: usize,
}

/// Row i of a sparse product a*b accumulated exactly.
fn sparse_mul(f: &FiniteField, a: &SparseMat, b: &SparseMat) -> SparseMat {
    assert_eq!(a.n_cols, b.n_rows);
    let mut out = SparseMat::zero(a.n_rows, b.n_cols);
    for i in 0..a.n_rows {
        let mut acc: BTreeMap<u32, Fq> = BTreeMap::new();
        for &(k, c) in a.row(i) {
            for &(j, v) in b.row(k as usize) {
                let e = acc.entry(j).or_insert(0);
                *e = f.add(*e, f.mul(c, v));
            }
        }
        for (j, v) in acc {
            out.push(f, i, j as usize, v);
        }
    }
    out
}

/// Verifies the bracket relations and the p-power relations on the action.
pub fn verify_representation(m: &ModuleRep, ctx: &AlgebraContext) -> Result<()> {
    let f = &m.field;
    let keys: Vec<Gen> = m.action.keys().copied().collect();
    for &x in &keys {
        for &y in &keys {
            // Row convention: mat([x, y]) = mat(y) mat(x) - mat(x) mat(y).
            let ax = &m.action[&x];
            let ay = &m.action[&y];
            let mut lhs = sparse_mul(f, ay, ax);
            let neg = sparse_mul(f, ax, ay);
            for i in 0..m.dim {
                for &(j, c) in neg.row(i) {
                    lhs.push(f, i, j as usize, f.neg(c));
                }
            }
            for (z, c) in ctx.sc.bracket_labels(&ctx.sys, x, y) {
                let az = m.action.get(&z).ok_or_else(|| {
                    Error::falsified(format!(
                        "bracket lands outside the action domain: [{}, {}]",
                        x.render(&ctx.sys),
                        y.render(&ctx.sys)
                    ))
                })?;
                let cf = f.neg(f.from_int(c));
                for i in 0..m.dim {
                    for &(j, v) in az.row(i) {
                        lhs.push(f, i, j as usize, f.mul(cf, v));
                    }
                }
            }
            if lhs.nnz() != 0 {
                return Err(Error::falsified(format!(
                    "bracket relation fails for [{}, {}]",
                    x.render(&ctx.sys),
                    y.render(&ctx.sys)
                )));
            }
        }
    }
    // x^p = x^[p] + chi(x)^p.
    let p = f.p();
    for &x in &keys {
        let a = &m.action[&x];
        let mut xp = a.clone();
        for _ in 1..p {
            xp = sparse_mul(f, &xp, a);
        }
        let chi_p = match x {
            Gen::E(_) => 0,
            Gen::F(i) => f.pow(ctx.chi.chi_f(i), p as u64),
            Gen::H(i) => f.pow(ctx.chi.chi_h[i], p as u64),
        };
        for (z, c) in p_power(x) {
            let az = &m.action[&z];
            let cf = f.neg(f.from_int(c));
            for i in 0..m.dim {
                for &(j, v) in az.row(i) {
                    xp.push(f, i, j as usize, f.mul(cf, v));
                }
            }
        }
        for i in 0..m.dim {
            xp.push(f, i, i, f.neg(chi_p));
        }
        if xp.nnz() != 0 {
            return Err(Error::falsified(format!(
                "p-power relation fails for {}",
                x.render(&ctx.sys)
            )));
        }
    }
    Ok(())
}

/// Echelon basis kept over reversed coordinates, so pivots prefer the high
/// basis indices and the index-0 column stays outside the pivot set unless
/// the pure index-0 vector itself is inserted.
struct ReversedEchelon {
    dim: usize,
    ech: Echelon,
}

impl ReversedEchelon {
    fn new(dim: usize) -> Self {
        ReversedEchelon { dim, ech: Echelon::new(dim) }
    }

    fn rev(&self, v: &[Fq]) -> Vec<Fq> {
        v.iter().rev().copied().collect()
    }

    fn insert(&mut self, f: &FiniteField, v: &[Fq]) -> bool {
        self.ech.insert(f, self.rev(v))
    }

    fn contains(&self, f: &FiniteField, v: &[Fq]) -> bool {
        self.ech.contains(f, &self.rev(v))
    }

    /// Canonical representative with pivot coordinates eliminated.
    fn reduce(&self, f: &FiniteField, v: &[Fq]) -> Vec<Fq> {
        self.rev(&self.ech.reduce(f, self.rev(v)))
    }

    /// Natural columns that remain as quotient coordinates, ascending.
    fn kept_columns(&self) -> Vec<usize> {
        let pivots: std::collections::HashSet<usize> = self.ech.pivots().iter().copied().collect();
        (0..self.dim).filter(|j| !pivots.contains(&(self.dim - 1 - j))).collect()
    }
}

fn spin_closure(
    f: &FiniteField,
    dim: usize,
    mats: &[&SparseMat],
    seeds: &[Vec<Fq>],
    stop_at_full: bool,
) -> Echelon {
    let mut ech = Echelon::new(dim);
    let mut todo: Vec<Vec<Fq>> = Vec::new();
    for s in seeds {
        if ech.insert(f, s.clone()) {
            todo.push(s.clone());
        }
    }
    while let Some(v) = todo.pop() {
        if stop_at_full && ech.rank() == dim {
            break;
        }
        for a in mats {
            let w = a.apply(f, &v);
            if ech.insert(f, w.clone()) {
                todo.push(w);
            }
        }
    }
    ech
}

/// Builds the Levi baby Verma with basis f^b (b over Phi_I^+, all < p) acting
/// through straightening; index 0 is the generating vector.
fn levi_verma(
    ctx: &AlgebraContext,
    pd: &ParabolicData,
    lambda: &Weight,
) -> Result<(usize, BTreeMap<Gen, SparseMat>)> {
    let f = &ctx.field;
    let sys = &ctx.sys;
    let p = f.p() as usize;
    let t = ctx.t();
    let l = sys.rank;
    let levi_idx: Vec<usize> =
        pd.phi_i_plus.iter().map(|r| sys.root_index(r).unwrap()).collect();
    let s = levi_idx.len();
    let dim = p.pow(s as u32);

    // Positions of the Levi f generators inside canonical-order monomials.
    let fpos: Vec<usize> = levi_idx.iter().map(|&i| ctx.gen_pos(Gen::F(i))).collect();
    let decode = |mut v: usize| -> Vec<u8> {
        let mut b = vec![0u8; s];
        for d in b.iter_mut() {
            *d = (v % p) as u8;
            v /= p;
        }
        b
    };
    let encode = |b: &[u8]| -> usize {
        b.iter().rev().fold(0usize, |acc, &d| acc * p + d as usize)
    };

    let mut keys: Vec<Gen> = (0..l).map(Gen::H).collect();
    for &i in &levi_idx {
        keys.push(Gen::E(i));
        keys.push(Gen::F(i));
    }
    let mut action = BTreeMap::new();
    for &g in &keys {
        let mut a = SparseMat::zero(dim, dim);
        for row in 0..dim {
            let b = decode(row);
            let mut word = vec![g];
            for (j, &i) in levi_idx.iter().enumerate() {
                word.extend(std::iter::repeat(Gen::F(i)).take(b[j] as usize));
            }
            let elt = ctx.straighten(word, 1);
            for (m, &c) in &elt.terms {
                // e exponents kill the generating vector.
                if m[t + l..].iter().any(|&x| x != 0) {
                    continue;
                }
                let mut coeff = c;
                for i in 0..l {
                    coeff = f.mul(coeff, f.pow(lambda.x[i], m[t + i] as u64));
                }
                let mut target = vec![0u8; s];
                for (j, &pos) in fpos.iter().enumerate() {
                    target[j] = m[pos];
                }
                // Everything stays inside the Levi f block.
                let outside =
                    (0..t).any(|pos| m[pos] != 0 && !fpos.contains(&pos));
                assert!(!outside, "Levi straightening left the Levi subalgebra");
                a.push(f, row, encode(&target), coeff);
            }
        }
        action.insert(g, a);
    }
    Ok((dim, action))
}

/// The simple head L^chi_I(lambda) of the Levi baby Verma, with the verified
/// quotient and a certified trivial commutant; the complement e generators
/// act as zero. Returns the context actually used (the field may have been
/// extended to certify absolute simplicity).
pub fn levi_simple(
    ctx: &AlgebraContext,
    pd: &ParabolicData,
    lambda: &Weight,
    opts: &OracleOpts,
) -> Result<(AlgebraContext, ModuleRep)> {
    match levi_simple_at(ctx, pd, lambda, opts) {
        Ok(m) => Ok((ctx.clone(), m)),
        Err(Error::Domain(msg)) if msg.contains("commutant") && ctx.field.e() == 1 => {
            let field2 = FiniteField::new(ctx.field.p(), 2)?;
            let ctx2 = AlgebraContext::new(
                &ctx.sys,
                &field2,
                ctx.chi.clone(),
                Some(ctx.f_order().to_vec()),
            )?;
            let m = levi_simple_at(&ctx2, pd, lambda, opts)?;
            Ok((ctx2, m))
        }
        Err(e) => Err(e),
    }
}

fn levi_simple_at(
    ctx: &AlgebraContext,
    pd: &ParabolicData,
    lambda: &Weight,
    opts: &OracleOpts,
) -> Result<ModuleRep> {
    lambda.compatible(ctx)?;
    for r in &pd.complement {
        let idx = ctx.sys.root_index(r).unwrap();
        if ctx.chi.chi_f(idx) != 0 {
            return Err(Error::domain(format!("chi(f[{r}]) must vanish on the complement")));
        }
    }
    let f = &ctx.field;
    let (zdim, zaction) = levi_verma(ctx, pd, lambda)?;
    if zdim > opts.max_dim {
        return Err(Error::resource(format!(
            "Levi module dimension {zdim} exceeds the bound {}",
            opts.max_dim
        )));
    }
    let mats: Vec<&SparseMat> = zaction.values().collect();

    // Maximal submodule avoiding index 0: seed with basis spins, then refine
    // by pulling back witnesses from non-simple quotients.
    let mut sub = ReversedEchelon::new(zdim);
    let e0 = {
        let mut v = vec![0; zdim];
        v[0] = 1;
        v
    };
    for b in 1..zdim {
        let mut seed = vec![0; zdim];
        seed[b] = 1;
        if sub.contains(f, &seed) {
            continue;
        }
        let spin = spin_closure(f, zdim, &mats, &[seed], false);
        if !spin.contains(f, &e0) {
            for row in spin.basis_rows() {
                sub.insert(f, row);
            }
        }
    }

    let complement_idx: Vec<usize> =
        pd.complement.iter().map(|r| ctx.sys.root_index(r).unwrap()).collect();
    loop {
        let kept = sub.kept_columns();
        // A pivot at column 0 means the pure generator line entered the
        // candidate, which happens exactly when the submodules avoiding the
        // generator fail to have a common upper bound.
        if !kept.contains(&0) {
            return Err(Error::falsified(
                "the maximal submodule avoiding the generator is not unique",
            ));
        }
        let qdim = kept.len();
        let qpos: std::collections::HashMap<usize, usize> =
            kept.iter().enumerate().map(|(qi, &c)| (c, qi)).collect();
        let mut action = BTreeMap::new();
        for (&g, a) in &zaction {
            let mut q = SparseMat::zero(qdim, qdim);
            for (qi, &col) in kept.iter().enumerate() {
                let mut img = vec![0; zdim];
                for &(j, c) in a.row(col) {
                    img[j as usize] = c;
                }
                let red = sub.reduce(f, &img);
                for (j, &c) in red.iter().enumerate() {
                    if c != 0 {
                        q.push(f, qi, qpos[&j], c);
                    }
                }
            }
            action.insert(g, q);
        }
        for &i in &complement_idx {
            action.insert(Gen::E(i), SparseMat::zero(qdim, qdim));
        }
        let m = ModuleRep {
            dim: qdim,
            field: f.clone(),
            action,
            basis_labels: kept.iter().map(|&c| (vec![0u8; pd.k], c)).collect(),
            highest_vector: 0,
        };
        let w = is_simple(&m, opts)?;
        if w.simple {
            let endo = if qdim <= opts.commutant_exact_bound {
                commutant_dim(&m)?
            } else if w.endomorphism_dim == 1 {
                1
            } else {
                return Err(Error::domain(
                    "cannot certify the commutant at this dimension",
                ));
            };
            if endo != 1 {
                return Err(Error::domain(format!(
                    "Levi head has commutant of dimension {endo} over GF({})",
                    f.describe()
                )));
            }
            verify_representation(&m, ctx)?;
            return Ok(m);
        }
        // Pull the witness back and grow the submodule; a proper invariant
        // subspace of the cyclic quotient never contains the generator, so
        // the lifted rows keep the candidate away from the generator line.
        let wit = w.proper_submodule_basis.expect("non-simple verdict carries a witness");
        let mut grew = false;
        for i in 0..wit.rows {
            let qrow = wit.row(i);
            let mut lift = vec![0; zdim];
            for (j, &c) in qrow.iter().enumerate() {
                lift[kept[j]] = c;
            }
            if sub.insert(f, &lift) {
                grew = true;
            }
        }
        assert!(grew, "witness did not grow the maximal-submodule candidate");
    }
}

/// Z^chi_I(lambda): basis (f-exponents over the complement) x (basis of L),
/// with every generator acting through complement-first straightening.
pub fn induce(
    ctx: &AlgebraContext,
    pd: &ParabolicData,
    l_mod: &ModuleRep,
    opts: &OracleOpts,
) -> Result<ModuleRep> {
    if ctx.field.p() != l_mod.field.p() || ctx.field.e() != l_mod.field.e() {
        return Err(Error::config("context and Levi module fields differ"));
    }
    let f = &ctx.field;
    let sys = &ctx.sys;
    let p = f.p() as usize;
    let t = ctx.t();
    let l = sys.rank;
    let k = pd.k;
    let zdim = p.pow(k as u32) * l_mod.dim;
    if zdim > opts.max_dim {
        return Err(Error::resource(format!(
            "module dimension {zdim} exceeds the bound {}",
            opts.max_dim
        )));
    }
    let cf = AlgebraContext::new(sys, f, ctx.chi.clone(), Some(complement_first_order(sys, pd)))?;
    let a_count = p.pow(k as u32);
    let decode = |mut v: usize| -> Vec<u8> {
        let mut b = vec![0u8; k];
        for d in b.iter_mut() {
            *d = (v % p) as u8;
            v /= p;
        }
        b
    };
    let encode =
        |b: &[u8]| -> usize { b.iter().rev().fold(0usize, |acc, &d| acc * p + d as usize) };

    let mut basis_labels = Vec::with_capacity(zdim);
    for av in 0..a_count {
        let tup = decode(av);
        for j in 0..l_mod.dim {
            basis_labels.push((tup.clone(), j));
        }
    }

    let gens: Vec<Gen> = (0..t)
        .flat_map(|i| [Gen::F(i), Gen::E(i)])
        .chain((0..l).map(Gen::H))
        .collect();
    let comp_order = cf.f_order().to_vec();
    let mut action = BTreeMap::new();
    for &g in &gens {
        let mut a = SparseMat::zero(zdim, zdim);
        for av in 0..a_count {
            let exps = decode(av);
            // The basis monomial in canonical complement order is normal for
            // the complement-first context.
            let mut word = vec![g];
            for (pos, &e) in exps.iter().enumerate() {
                word.extend(std::iter::repeat(Gen::F(comp_order[pos])).take(e as usize));
            }
            let elt = cf.straighten(word, 1);
            for (m, &c) in &elt.terms {
                // Split: complement f block, Levi f block, h block, e block.
                let a_part = &m[..k];
                let target_a = encode(a_part);
                for j in 0..l_mod.dim {
                    let mut v = l_mod.basis_vec(j);
                    // Apply the residue right-to-left: e block first.
                    for pos in (k..2 * t + l).rev() {
                        if m[pos] == 0 {
                            continue;
                        }
                        let gen = cf.gen_at(pos);
                        v = l_mod.apply_pow(gen, m[pos] as usize, v);
                        if v.iter().all(|&x| x == 0) {
                            break;
                        }
                    }
                    let row = av * l_mod.dim + j;
                    for (jj, &val) in v.iter().enumerate() {
                        if val != 0 {
                            a.push(f, row, target_a * l_mod.dim + jj, f.mul(c, val));
                        }
                    }
                }
            }
        }
        action.insert(g, a);
    }
    let m = ModuleRep {
        dim: zdim,
        field: f.clone(),
        action,
        basis_labels,
        highest_vector: l_mod.highest_vector,
    };
    verify_representation(&m, ctx)?;
    Ok(m)
}

/// Convenience: simple Levi head plus induction, returning the context used.
pub fn build_z(
    ctx: &AlgebraContext,
    pd: &ParabolicData,
    lambda: &Weight,
    opts: &OracleOpts,
) -> Result<(AlgebraContext, ModuleRep)> {
    let (ctx2, l_mod) = levi_simple(ctx, pd, lambda, opts)?;
    let z = induce(&ctx2, pd, &l_mod, opts)?;
    Ok((ctx2, z))
}

/// The scalar of e_{b1}^{p-1}..e_{bk}^{p-1} f_{b1}^{p-1}..f_{bk}^{p-1} (1 x v)
/// on 1 x v, computed on the constructed module.
pub fn r_by_straightening(
    ctx: &AlgebraContext,
    pd: &ParabolicData,
    lambda: &Weight,
    opts: &OracleOpts,
) -> Result<Fq> {
    let (ctx2, z) = build_z(ctx, pd, lambda, opts)?;
    r_on_module(&ctx2, pd, &z)
}

/// The same scalar on an already built module.
pub fn r_on_module(ctx: &AlgebraContext, pd: &ParabolicData, z: &ModuleRep) -> Result<Fq> {
    let f = &z.field;
    let p1 = (f.p() - 1) as usize;
    let comp: Vec<usize> =
        pd.complement.iter().map(|r| ctx.sys.root_index(r).unwrap()).collect();
    let mut v = z.basis_vec(z.highest_vector);
    // Rightmost factor first: the f chain in reverse, then the e chain in
    // reverse.
    for &i in comp.iter().rev() {
        v = z.apply_pow(Gen::F(i), p1, v);
    }
    for &i in comp.iter().rev() {
        v = z.apply_pow(Gen::E(i), p1, v);
    }
    for (j, &c) in v.iter().enumerate() {
        if j != z.highest_vector && c != 0 {
            return Err(Error::falsified(
                "the e..f image of the generator is not proportional to it",
            ));
        }
    }
    Ok(v[z.highest_vector])
}

/// True iff the submodule generated by f^(p-1)...f^(p-1) x v_lambda is all of
/// the module; expected exactly when the module is simple.
pub fn bottom_spin_is_full(z: &ModuleRep) -> bool {
    let f = &z.field;
    let p1 = (f.p() - 1) as u8;
    let idx = z
        .basis_labels
        .iter()
        .position(|(tup, j)| tup.iter().all(|&d| d == p1) && *j == z.highest_vector)
        .expect("bottom basis vector exists");
    let mats: Vec<&SparseMat> = z.action.values().collect();
    let spin = spin_closure(f, z.dim, &mats, &[z.basis_vec(idx)], true);
    spin.rank() == z.dim
}

fn projective_count(q: u128, d: usize) -> u128 {
    let mut total = 0u128;
    let mut pw = 1u128;
    for _ in 0..d {
        total = total.saturating_add(pw);
        pw = pw.saturating_mul(q);
    }
    total
}

/// All directions (projective points) of the row space of basis.
fn directions(f: &FiniteField, basis: &[Vec<Fq>]) -> Vec<Vec<Fq>> {
    let d = basis.len();
    let q = f.q() as usize;
    let mut out = Vec::new();
    for lead in 0..d {
        let tail = d - lead - 1;
        let mut counter = vec![0u32; tail];
        loop {
            let mut v = basis[lead].clone();
            for (off, &c) in counter.iter().enumerate() {
                if c != 0 {
                    for (x, &b) in v.iter_mut().zip(&basis[lead + 1 + off]) {
                        *x = f.add(*x, f.mul(c, b));
                    }
                }
            }
            out.push(v);
            let mut pos = 0;
            loop {
                if pos == tail {
                    break;
                }
                counter[pos] += 1;
                if (counter[pos] as usize) < q {
                    break;
                }
                counter[pos] = 0;
                pos += 1;
            }
            if pos == tail {
                break;
            }
        }
    }
    out
}

/// Perp of a row space: all v with (row, v) = 0 for every basis row.
fn perp_space(f: &FiniteField, rows: &[Vec<Fq>], dim: usize) -> Vec<Vec<Fq>> {
    let m = DenseMat::from_rows(rows.to_vec());
    let _ = dim;
    right_nullspace(f, &m)
}

/// Deterministic-seeded irreducibility decision; never answers "unknown" at
/// supported sizes. Words with small nullspaces drive a two-sided spin test
/// (full enumeration of null directions makes the verdict definitive); the
/// fallback enumerates simultaneous h-eigenspace directions.
pub fn is_simple(m: &ModuleRep, opts: &OracleOpts) -> Result<SimplicityWitness> {
    let f = &m.field;
    let dim = m.dim;
    if dim == 0 {
        return Err(Error::config("zero module"));
    }
    if dim == 1 {
        return Ok(SimplicityWitness {
            simple: true,
            proper_submodule_basis: None,
            endomorphism_dim: 1,
        });
    }
    let mats: Vec<&SparseMat> = m.action.values().collect();

    // Cheap pre-pass: spins of a few standard vectors catch most reducible
    // modules immediately.
    for seed_idx in [m.highest_vector, dim - 1, 0] {
        let spin = spin_closure(f, dim, &mats, &[m.basis_vec(seed_idx)], true);
        if spin.rank() < dim && spin.rank() > 0 {
            return Ok(SimplicityWitness {
                simple: false,
                proper_submodule_basis: Some(DenseMat::from_rows(spin.basis_rows().to_vec())),
                endomorphism_dim: 0,
            });
        }
    }

    let keys: Vec<Gen> = m.action.keys().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let trans: Vec<SparseMat> = m.action.values().map(|a| a.transpose()).collect();
    let tmats: Vec<&SparseMat> = trans.iter().collect();

    for _ in 0..opts.word_cap {
        // A sum of scaled products: plain products are weight-homogeneous on
        // graded modules, so their eigenspaces are whole weight-space unions.
        let mut w = DenseMat::zero(dim, dim);
        for _ in 0..rng.random_range(2..=3) {
            let len = rng.random_range(2..=4);
            let mut part = DenseMat::identity(dim);
            for _ in 0..len {
                let g = keys[rng.random_range(0..keys.len())];
                part = m.action[&g].rmul_dense(f, &part);
            }
            let c = rng.random_range(1..f.q());
            for i in 0..dim {
                let wr = w.row_mut(i);
                for (x, &b) in wr.iter_mut().zip(part.row(i)) {
                    *x = f.add(*x, f.mul(c, b));
                }
            }
        }
        let v: Vec<Fq> = (0..dim).map(|_| rng.random_range(0..f.q())).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let mp = min_poly_on_vector(f, &w, &v);
        for theta in poly_roots(f, &mp) {
            let wd = DenseMat::sub_scalar_identity(f, &w, theta);
            let null = left_nullspace(f, &wd);
            let d = null.len();
            if d == 0 || projective_count(f.q() as u128, d) > opts.direction_cap {
                continue;
            }
            for dir in directions(f, &null) {
                let spin = spin_closure(f, dim, &mats, &[dir], true);
                if spin.rank() < dim {
                    return Ok(SimplicityWitness {
                        simple: false,
                        proper_submodule_basis: Some(DenseMat::from_rows(
                            spin.basis_rows().to_vec(),
                        )),
                        endomorphism_dim: 0,
                    });
                }
            }
            let dual_null = right_nullspace(f, &wd);
            assert_eq!(dual_null.len(), d, "rank-nullity on the transpose");
            for dir in directions(f, &dual_null) {
                let spin = spin_closure(f, dim, &tmats, &[dir], true);
                if spin.rank() < dim {
                    let perp = perp_space(f, spin.basis_rows(), dim);
                    assert!(!perp.is_empty() && perp.len() < dim);
                    return Ok(SimplicityWitness {
                        simple: false,
                        proper_submodule_basis: Some(DenseMat::from_rows(perp)),
                        endomorphism_dim: 0,
                    });
                }
            }
            // Every null direction and every dual-null direction spins to the
            // whole space: a proper submodule would either meet the nullspace
            // or have its annihilator meet the dual nullspace.
            let endo = if d == 1 {
                1
            } else if dim <= opts.commutant_exact_bound {
                commutant_dim(m)?
            } else {
                0
            };
            return Ok(SimplicityWitness {
                simple: true,
                proper_submodule_basis: None,
                endomorphism_dim: endo,
            });
        }
    }

    weight_space_fallback(m, opts)
}

/// Definitive fallback: every h generator acts separably, so every nonzero
/// submodule meets a simultaneous eigenspace; spinning every direction of
/// every eigenspace decides simplicity.
fn weight_space_fallback(m: &ModuleRep, opts: &OracleOpts) -> Result<SimplicityWitness> {
    let f = &m.field;
    let dim = m.dim;
    let mats: Vec<&SparseMat> = m.action.values().collect();
    let h_keys: Vec<Gen> =
        m.action.keys().copied().filter(|g| matches!(g, Gen::H(_))).collect();
    let full: Vec<Vec<Fq>> = (0..dim)
        .map(|i| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        })
        .collect();
    let mut spaces: Vec<Vec<Vec<Fq>>> = vec![full];
    for &h in &h_keys {
        let a = &m.action[&h];
        let mut next = Vec::new();
        for space in &spaces {
            let s = space.len();
            // Restricted operator in the coordinates of this basis.
            let big = DenseMat::from_rows(space.clone());
            let mapped = a.rmul_dense(f, &big);
            // Solve big * r = mapped row-wise via echelon representation.
            let mut ech = crate::linalg::TrackedEchelon::new(dim);
            for i in 0..s {
                match ech.insert(f, big.row(i).to_vec()) {
                    crate::linalg::Tracked::Added => {}
                    crate::linalg::Tracked::Dependent(_) => {
                        panic!("weight space basis must be independent")
                    }
                }
            }
            let mut r = DenseMat::zero(s, s);
            for i in 0..s {
                match ech.insert(f, mapped.row(i).to_vec()) {
                    crate::linalg::Tracked::Dependent(rep) => {
                        // Dependency coefficients index insertion attempts;
                        // the space basis occupies attempts 0..s, and later
                        // dependent attempts never carry weight.
                        for (j, &c) in rep.iter().enumerate().take(s) {
                            r.set(i, j, c);
                        }
                    }
                    crate::linalg::Tracked::Added => {
                        return Err(Error::falsified(
                            "h image left its invariant subspace in the fallback",
                        ))
                    }
                }
            }
            let mut covered = 0;
            for c in f.elements() {
                let rc = DenseMat::sub_scalar_identity(f, &r, c);
                let null = left_nullspace(f, &rc);
                if null.is_empty() {
                    continue;
                }
                covered += null.len();
                let rows: Vec<Vec<Fq>> =
                    null.iter().map(|x| crate::linalg::vec_mat(f, x, &big)).collect();
                next.push(rows);
            }
            if covered != s {
                // x^p - x - c is separable, so h acts diagonalizably; an
                // eigenvalue outside the base field would betray a module
                // that did not come from a compatible weight.
                return Err(Error::domain(
                    "an h eigenvalue lies outside the base field",
                ));
            }
        }
        spaces = next;
    }
    for space in &spaces {
        let count = projective_count(f.q() as u128, space.len());
        if count > opts.weight_direction_cap {
            return Err(Error::resource(format!(
                "weight space with {count} directions exceeds the enumeration bound"
            )));
        }
        for dir in directions(f, space) {
            let spin = spin_closure(f, dim, &mats, &[dir], true);
            if spin.rank() < dim {
                return Ok(SimplicityWitness {
                    simple: false,
                    proper_submodule_basis: Some(DenseMat::from_rows(
                        spin.basis_rows().to_vec(),
                    )),
                    endomorphism_dim: 0,
                });
            }
        }
    }
    let endo = if spaces.iter().all(|s| s.len() == 1) {
        1
    } else if dim <= opts.commutant_exact_bound {
        commutant_dim(m)?
    } else {
        0
    };
    Ok(SimplicityWitness { simple: true, proper_submodule_basis: None, endomorphism_dim: endo })
}

/// Exact commutant dimension by parallel transport along a spin schedule:
/// an endomorphism is determined by the image w of a cyclic vector, and each
/// linear dependency met while spinning imposes a linear condition on w.
pub fn commutant_dim(m: &ModuleRep) -> Result<usize> {
    let f = &m.field;
    let dim = m.dim;
    let keys: Vec<Gen> = m.action.keys().copied().collect();
    let v0 = m.basis_vec(m.highest_vector);
    let mut ech = crate::linalg::TrackedEchelon::new(dim);
    assert!(matches!(ech.insert(f, v0.clone()), crate::linalg::Tracked::Added));
    // Basis vectors as inserted, with their transport matrices D: the
    // parallel vector for basis i is w * D_i. Dependency coefficients index
    // insertion attempts, so remember which attempt each basis vector was.
    let mut basis: Vec<Vec<Fq>> = vec![v0];
    let mut transport: Vec<DenseMat> = vec![DenseMat::identity(dim)];
    let mut basis_attempt: Vec<usize> = vec![0];
    let mut attempts = 1;
    // Solution space for w, shrunk by each dependency condition; the
    // identity endomorphism (w = v0) always survives.
    let mut sol: Vec<Vec<Fq>> = (0..dim)
        .map(|i| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        })
        .collect();
    let mut head = 0;
    while head < basis.len() {
        let (v, d) = (basis[head].clone(), transport[head].clone());
        head += 1;
        for &g in &keys {
            let a = &m.action[&g];
            let v2 = a.apply(f, &v);
            let d2 = a.rmul_dense(f, &d);
            let verdict = ech.insert(f, v2.clone());
            let attempt_rep = match verdict {
                crate::linalg::Tracked::Added => {
                    basis.push(v2);
                    transport.push(d2);
                    basis_attempt.push(attempts);
                    attempts += 1;
                    continue;
                }
                crate::linalg::Tracked::Dependent(rep) => rep,
            };
            attempts += 1;
            if sol.len() <= 1 {
                continue;
            }
            // Condition: w (D2 - sum rep_i D_i) = 0, rep read off per basis
            // vector through its attempt index.
            let mut c = d2;
            for (i, &att) in basis_attempt.iter().enumerate() {
                let ci = if att < attempt_rep.len() { attempt_rep[att] } else { 0 };
                if ci != 0 {
                    let neg = f.neg(ci);
                    for r in 0..dim {
                        let src = transport[i].row(r).to_vec();
                        let dst = c.row_mut(r);
                        for (x, s) in dst.iter_mut().zip(src) {
                            *x = f.add(*x, f.mul(neg, s));
                        }
                    }
                }
            }
            if c.is_zero() {
                continue;
            }
            let sol_mat = DenseMat::from_rows(sol.clone());
            let sc = DenseMat::mul(f, &sol_mat, &c);
            let y = left_nullspace(f, &sc);
            sol = y.iter().map(|yy| crate::linalg::vec_mat(f, yy, &sol_mat)).collect();
            if sol.is_empty() {
                return Err(Error::falsified("commutant lost the identity endomorphism"));
            }
        }
    }
    if ech.rank() < dim {
        return Err(Error::config(
            "commutant computation requires a cyclic generating vector",
        ));
    }
    Ok(sol.len())
}

/// chi-compatible weights in deterministic order: the cartesian product of
/// the per-index solution sets of x^p - x = chi(h_i)^p.
pub fn compatible_weights(ctx: &AlgebraContext) -> Vec<Weight> {
    let f = &ctx.field;
    let p = f.p() as u64;
    let per: Vec<Vec<Fq>> = (0..ctx.sys.rank)
        .map(|i| f.artin_schreier_roots(f.pow(ctx.chi.chi_h[i], p)))
        .collect();
    let mut out = vec![Vec::new()];
    for roots in &per {
        let mut next = Vec::new();
        for partial in &out {
            for &r in roots {
                let mut w = partial.clone();
                w.push(r);
                next.push(w);
            }
        }
        out = next;
    }
    out.into_iter().map(Weight::new).collect()
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub kind: char,
    pub rank: usize,
    pub p: u32,
    pub e: u32,
    pub i_desc: String,
    pub chi_desc: String,
    pub lambda_desc: String,
    pub formula_simple: Option<bool>,
    pub oracle_simple: Option<bool>,
    pub r_value: String,
    pub ratio: String,
}

pub const CSV_HEADER: &str =
    "type,rank,p,e,I,chi,lambda,formula_verdict,oracle_verdict,R_value,ratio_to_product";

fn verdict_str(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "simple",
        Some(false) => "not_simple",
        None => "-",
    }
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.rank,
            self.p,
            self.e,
            self.i_desc,
            self.chi_desc,
            self.lambda_desc,
            verdict_str(self.formula_simple),
            verdict_str(self.oracle_simple),
            self.r_value,
            self.ratio
        )
    }
}

#[derive(Debug)]
pub struct EquivalenceReport {
    pub rows: Vec<SweepRow>,
    pub mismatches: Vec<String>,
}

impl EquivalenceReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// For each weight: the closed-form verdict against the constructed-module
/// verdict, with the straightening scalar and its ratio to the formula value.
pub fn verify_equivalence(
    ctx: &AlgebraContext,
    pd: &ParabolicData,
    lambdas: &[Weight],
    opts: &OracleOpts,
) -> Result<EquivalenceReport> {
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for lambda in lambdas {
        let verdict = crate::rcrit::r_product(&ctx.sys, &ctx.field, pd, lambda)?;
        let (ctx2, z) = build_z(ctx, pd, lambda, opts)?;
        let w = is_simple(&z, opts)?;
        let r = r_on_module(&ctx2, pd, &z)?;
        let f2 = &ctx2.field;
        let ratio = if r != 0 && verdict.r_value != 0 {
            f2.render(f2.mul(r, f2.inv(verdict.r_value)?))
        } else {
            "-".into()
        };
        if w.simple != verdict.simple || (r != 0) != verdict.simple {
            mismatches.push(format!(
                "lambda = {}: formula {}, oracle {}, straightening {}",
                lambda.describe(f2),
                verdict.simple,
                w.simple,
                f2.render(r)
            ));
        }
        rows.push(SweepRow {
            kind: ctx.sys.kind,
            rank: ctx.sys.rank,
            p: f2.p(),
            e: f2.e(),
            i_desc: describe_i(pd),
            chi_desc: ctx.chi.describe(&ctx.sys, &ctx.field),
            lambda_desc: lambda.describe(f2),
            formula_simple: Some(verdict.simple),
            oracle_simple: Some(w.simple),
            r_value: f2.render(r),
            ratio,
        });
    }
    Ok(EquivalenceReport { rows, mismatches })
}

pub fn describe_i(pd: &ParabolicData) -> String {
    if pd.i_set.is_empty() {
        "-".into()
    } else {
        pd.i_set.iter().map(|&i| format!("a{}", i + 1)).collect::<Vec<_>>().join(" ")
    }
}

/// Simple text dump: one header line then one line per nonzero entry.
pub fn write_matrix_dump<W: io::Write>(out: &mut W, name: &str, m: &SparseMat) -> io::Result<()> {
    writeln!(out, "%% {} {} {} {}", name, m.n_rows, m.n_cols, m.nnz())?;
    for i in 0..m.n_rows {
        let mut row = m.row(i).to_vec();
        row.sort_unstable_by_key(|&(j, _)| j);
        for (j, v) in row {
            writeln!(out, "{i} {j} {v}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envalg::Character;
    use crate::roots::build_root_system;

    fn ctx(kind: char, rank: usize, p: u32, e: u32, chi: Character) -> AlgebraContext {
        let sys = build_root_system(kind, rank).unwrap();
        let field = FiniteField::new(p, e).unwrap();
        AlgebraContext::new(&sys, &field, chi, None).unwrap()
    }

    #[test]
    fn weight_compatibility() {
        let c = ctx('A', 1, 3, 1, Character::zero(1));
        assert!(Weight::new(vec![2]).compatible(&c).is_ok());
        assert!(Weight::new(vec![5]).compatible(&c).is_err());
        // Nonzero chi_h over GF(3) has no compatible prime-field weight.
        let c = ctx('A', 1, 3, 1, Character::with_h(vec![1]));
        assert!(Weight::new(vec![0]).compatible(&c).is_err());
        assert!(compatible_weights(&c).is_empty());
        // Over GF(9): c = 2x+2 has c^3 = x+1 = x^3 - x, so x solves it.
        let c = ctx('A', 1, 3, 2, Character::with_h(vec![8]));
        let ws = compatible_weights(&c);
        assert_eq!(ws.len(), 3);
        for w in &ws {
            w.compatible(&c).unwrap();
        }
        // c = x is not in the image of y -> y^3 - y over GF(9).
        let c = ctx('A', 1, 3, 2, Character::with_h(vec![3]));
        assert!(compatible_weights(&c).is_empty());
    }

    #[test]
    fn empty_levi_is_one_dimensional() {
        let c = ctx('A', 2, 3, 1, Character::zero(2));
        let pd = c.sys.parabolic_data(&[]).unwrap();
        let lam = Weight::new(vec![1, 2]);
        let (_, l) = levi_simple(&c, &pd, &lam, &OracleOpts::default()).unwrap();
        assert_eq!(l.dim, 1);
        assert_eq!(l.action[&Gen::H(0)].row(0), &[(0, 1)]);
        assert_eq!(l.action[&Gen::H(1)].row(0), &[(0, 2)]);
        for i in 0..3 {
            assert_eq!(l.action[&Gen::E(i)].nnz(), 0);
        }
    }

    #[test]
    fn levi_head_dimensions_a2() {
        let c = ctx('A', 2, 3, 1, Character::zero(2));
        let pd = c.sys.parabolic_data(&[0]).unwrap();
        let opts = OracleOpts::default();
        let (_, l) = levi_simple(&c, &pd, &Weight::new(vec![2, 0]), &opts).unwrap();
        assert_eq!(l.dim, 3); // Steinberg weight of the sl2 Levi
        let (_, l) = levi_simple(&c, &pd, &Weight::new(vec![0, 1]), &opts).unwrap();
        assert_eq!(l.dim, 1); // trivial module of the derived part
        let (_, l) = levi_simple(&c, &pd, &Weight::new(vec![1, 0]), &opts).unwrap();
        assert_eq!(l.dim, 2);
    }

    #[test]
    fn induced_a1_shapes() {
        let c = ctx('A', 1, 3, 1, Character::zero(1));
        let pd = c.sys.parabolic_data(&[]).unwrap();
        let opts = OracleOpts::default();
        for x in 0..3u32 {
            let (_, z) = build_z(&c, &pd, &Weight::new(vec![x]), &opts).unwrap();
            assert_eq!(z.dim, 3);
            // f is the shift f^a -> f^(a+1) with f^3 = 0.
            let af = &z.action[&Gen::F(0)];
            assert_eq!(af.row(0), &[(1, 1)]);
            assert_eq!(af.row(1), &[(2, 1)]);
            assert_eq!(af.row(2), &[] as &[(u32, Fq)]);
            // h is diagonal with x, x-2, x-4.
            let f = &z.field;
            let ah = &z.action[&Gen::H(0)];
            for a in 0..3usize {
                let want = f.sub(x, f.from_int(2 * a as i64));
                if want == 0 {
                    assert!(ah.row(a).is_empty());
                } else {
                    assert_eq!(ah.row(a), &[(a as u32, want)]);
                }
            }
        }
    }

    #[test]
    fn induced_dimensions() {
        let opts = OracleOpts::default();
        let c = ctx('A', 2, 3, 1, Character::zero(2));
        let pd = c.sys.parabolic_data(&[]).unwrap();
        let (_, z) = build_z(&c, &pd, &Weight::new(vec![0, 0]), &opts).unwrap();
        assert_eq!(z.dim, 27);

        let c = ctx('B', 2, 3, 1, Character::zero(2));
        let pd = c.sys.parabolic_data(&[0]).unwrap();
        let (_, z) = build_z(&c, &pd, &Weight::new(vec![2, 1]), &opts).unwrap();
        assert_eq!(z.dim, 81); // 3^3 complement monomials times the dim-3 head
    }

    #[test]
    fn size_bound_is_enforced() {
        let c = ctx('A', 2, 5, 1, Character::zero(2));
        let pd = c.sys.parabolic_data(&[]).unwrap();
        let mut opts = OracleOpts::default();
        opts.max_dim = 100; // 5^3 = 125 exceeds it
        let err = build_z(&c, &pd, &Weight::new(vec![0, 0]), &opts).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn r_values_on_a1() {
        let c = ctx('A', 1, 3, 1, Character::zero(1));
        let pd = c.sys.parabolic_data(&[]).unwrap();
        let opts = OracleOpts::default();
        let r2 = r_by_straightening(&c, &pd, &Weight::new(vec![2]), &opts).unwrap();
        assert_ne!(r2, 0);
        let r0 = r_by_straightening(&c, &pd, &Weight::new(vec![0]), &opts).unwrap();
        assert_eq!(r0, 0);
    }

    #[test]
    fn oracle_on_a1() {
        let c = ctx('A', 1, 3, 1, Character::zero(1));
        let pd = c.sys.parabolic_data(&[]).unwrap();
        let opts = OracleOpts::default();
        let (_, z) = build_z(&c, &pd, &Weight::new(vec![2]), &opts).unwrap();
        let w = is_simple(&z, &opts).unwrap();
        assert!(w.simple);
        assert_eq!(w.endomorphism_dim, 1);
        assert!(bottom_spin_is_full(&z));

        let (_, z) = build_z(&c, &pd, &Weight::new(vec![0]), &opts).unwrap();
        let w = is_simple(&z, &opts).unwrap();
        assert!(!w.simple);
        assert!(!bottom_spin_is_full(&z));
        // The witness is invariant and proper.
        let wit = w.proper_submodule_basis.unwrap();
        assert!(wit.rows > 0 && wit.rows < z.dim);
        let f = &z.field;
        let mut ech = Echelon::new(z.dim);
        for i in 0..wit.rows {
            ech.insert(f, wit.row(i).to_vec());
        }
        for a in z.action.values() {
            for i in 0..wit.rows {
                assert!(ech.contains(f, &a.apply(f, wit.row(i))));
            }
        }
    }

    #[test]
    fn formula_oracle_equivalence_small_sweeps() {
        let opts = OracleOpts::default();
        // A2, p=3, I empty: all 9 weights.
        let c = ctx('A', 2, 3, 1, Character::zero(2));
        let pd = c.sys.parabolic_data(&[]).unwrap();
        let lams = compatible_weights(&c);
        assert_eq!(lams.len(), 9);
        let rep = verify_equivalence(&c, &pd, &lams, &opts).unwrap();
        assert!(rep.ok(), "{:?}", rep.mismatches);
        // Steinberg (2,2) is the unique simple one here.
        let simple: Vec<&SweepRow> =
            rep.rows.iter().filter(|r| r.formula_simple == Some(true)).collect();
        assert_eq!(simple.len(), 1);
        assert_eq!(simple[0].lambda_desc, "2 2");

        // B2, p=3, I={a2}: all weights.
        let c = ctx('B', 2, 3, 1, Character::zero(2));
        let pd = c.sys.parabolic_data(&[1]).unwrap();
        let rep = verify_equivalence(&c, &pd, &compatible_weights(&c), &opts).unwrap();
        assert!(rep.ok(), "{:?}", rep.mismatches);

        // A2, p=3, I={a1}, nilpotent chi on the Levi.
        let sys = build_root_system('A', 2).unwrap();
        let field = FiniteField::new(3, 1).unwrap();
        let mut chi = Character::zero(2);
        chi.chi_f.insert(0, 1);
        let c = AlgebraContext::new(&sys, &field, chi, None).unwrap();
        let pd = sys.parabolic_data(&[0]).unwrap();
        let lams = compatible_weights(&c);
        assert_eq!(lams.len(), 9);
        let rep = verify_equivalence(&c, &pd, &lams, &opts).unwrap();
        assert!(rep.ok(), "{:?}", rep.mismatches);
    }

    #[test]
    fn bottom_spin_matches_r() {
        let opts = OracleOpts::default();
        let c = ctx('A', 2, 3, 1, Character::zero(2));
        let pd = c.sys.parabolic_data(&[0]).unwrap();
        for lam in compatible_weights(&c) {
            let (ctx2, z) = build_z(&c, &pd, &lam, &opts).unwrap();
            let r = r_on_module(&ctx2, &pd, &z).unwrap();
            assert_eq!(bottom_spin_is_full(&z), r != 0, "lambda {:?}", lam.x);
        }
    }

    #[test]
    fn commutant_of_field_extension_scalars() {
        // A 1-generator module where h acts as a GF(9) scalar on a GF(3)
        // structure would not arise from our constructions; instead check the
        // exact commutant on a simple module: Steinberg for A1.
        let c = ctx('A', 1, 3, 1, Character::zero(1));
        let pd = c.sys.parabolic_data(&[]).unwrap();
        let opts = OracleOpts::default();
        let (_, z) = build_z(&c, &pd, &Weight::new(vec![2]), &opts).unwrap();
        assert_eq!(commutant_dim(&z).unwrap(), 1);
    }

    #[test]
    fn kw_modules_over_gf9() {
        // chi(h) != 0 over GF(9): every compatible weight gives a simple
        // module (sufficient condition sweep at A1).
        let sys = build_root_system('A', 1).unwrap();
        let field = FiniteField::new(3, 2).unwrap();
        let chi = Character::with_h(vec![8]); // 2x+2, outside the prime field
        let c = AlgebraContext::new(&sys, &field, chi, None).unwrap();
        let pd = sys.parabolic_data(&[]).unwrap();
        assert!(crate::rcrit::kw_sufficient(&sys, &field, &pd, &c.chi).unwrap());
        let opts = OracleOpts::default();
        let lams = compatible_weights(&c);
        assert_eq!(lams.len(), 3);
        for lam in &lams {
            let (ctx2, z) = build_z(&c, &pd, lam, &opts).unwrap();
            assert_eq!(z.dim, 3);
            assert!(is_simple(&z, &opts).unwrap().simple);
            assert_ne!(r_on_module(&ctx2, &pd, &z).unwrap(), 0);
        }
    }

    #[test]
    fn dump_format() {
        let f = FiniteField::new(3, 1).unwrap();
        let mut m = SparseMat::zero(2, 2);
        m.push(&f, 0, 1, 2);
        m.push(&f, 1, 0, 1);
        let mut out = Vec::new();
        write_matrix_dump(&mut out, "f[a1]", &m).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "%% f[a1] 2 2 2\n0 1 2\n1 0 1\n");
    }
}
