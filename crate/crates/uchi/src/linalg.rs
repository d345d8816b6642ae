//! Dense and sparse linear algebra over GF(p^e).
//!
//! Vectors are rows and matrices act on the right: applying A to v is v * A.
//! Prime fields take a Barrett-reduction fast path; extensions go through the
//! field's multiplication table.

use crate::gf::{FiniteField, Fq};

/// Barrett reduction for a fixed modulus below 2^16; exact for any 32-bit input.
#[derive(Clone, Copy)]
pub struct Reducer {
    p: u32,
    m: u64,
}

impl Reducer {
    pub fn new(p: u32) -> Self {
        assert!(p > 1 && p < (1 << 16));
        Reducer { p, m: u64::MAX / p as u64 + 1 }
    }

    #[inline]
    pub fn reduce(&self, n: u32) -> u32 {
        let lowbits = self.m.wrapping_mul(n as u64);
        ((lowbits as u128 * self.p as u128) >> 64) as u32
    }
}

fn fast_reducer(f: &FiniteField) -> Option<Reducer> {
    (f.e() == 1 && f.p() < (1 << 16)).then(|| Reducer::new(f.p()))
}

/// dst += c * src elementwise. Entries stay reduced; c*s + d < p(p+1) <= 2^32.
fn axpy(f: &FiniteField, red: Option<Reducer>, dst: &mut [Fq], c: Fq, src: &[Fq]) {
    debug_assert_eq!(dst.len(), src.len());
    if c == 0 {
        return;
    }
    match red {
        Some(r) => {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = r.reduce(*d + c * s);
            }
        }
        None => {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = f.add(*d, f.mul(c, s));
            }
        }
    }
}

fn scale_row(f: &FiniteField, red: Option<Reducer>, row: &mut [Fq], c: Fq) {
    match red {
        Some(r) => {
            for d in row.iter_mut() {
                *d = r.reduce(*d * c);
            }
        }
        None => {
            for d in row.iter_mut() {
                *d = f.mul(*d, c);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Fq>,
}

impl DenseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMat::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fq>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        DenseMat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Fq] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> DenseMat {
        let mut t = DenseMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.at(i, j);
            }
        }
        t
    }

    pub fn mul(f: &FiniteField, a: &DenseMat, b: &DenseMat) -> DenseMat {
        assert_eq!(a.cols, b.rows);
        let mut out = DenseMat::zero(a.rows, b.cols);
        if f.e() == 1 {
            // Accumulate whole rows in u64; every term is < p^2 < 2^32 so even
            // 2^32 terms cannot overflow.
            let p = f.p() as u64;
            let mut buf = vec![0u64; b.cols];
            for i in 0..a.rows {
                buf.iter_mut().for_each(|x| *x = 0);
                for k in 0..a.cols {
                    let v = a.at(i, k) as u64;
                    if v != 0 {
                        for (acc, &bkj) in buf.iter_mut().zip(b.row(k)) {
                            *acc += v * bkj as u64;
                        }
                    }
                }
                for (o, &acc) in out.row_mut(i).iter_mut().zip(buf.iter()) {
                    *o = (acc % p) as Fq;
                }
            }
        } else {
            for i in 0..a.rows {
                for k in 0..a.cols {
                    let v = a.at(i, k);
                    if v != 0 {
                        axpy(f, None, out.row_mut(i), v, b.row(k));
                    }
                }
            }
        }
        out
    }

    pub fn add(f: &FiniteField, a: &DenseMat, b: &DenseMat) -> DenseMat {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        let mut out = a.clone();
        for (o, &x) in out.data.iter_mut().zip(&b.data) {
            *o = f.add(*o, x);
        }
        out
    }

    /// a - c * identity.
    pub fn sub_scalar_identity(f: &FiniteField, a: &DenseMat, c: Fq) -> DenseMat {
        assert_eq!(a.rows, a.cols);
        let mut out = a.clone();
        for i in 0..a.rows {
            let v = f.sub(out.at(i, i), c);
            out.set(i, i, v);
        }
        out
    }
}

/// v * A for dense A, computed by row combinations.
pub fn vec_mat(f: &FiniteField, v: &[Fq], a: &DenseMat) -> Vec<Fq> {
    assert_eq!(v.len(), a.rows);
    let red = fast_reducer(f);
    let mut out = vec![0; a.cols];
    for (i, &c) in v.iter().enumerate() {
        if c != 0 {
            axpy(f, red, &mut out, c, a.row(i));
        }
    }
    out
}

/// Row-oriented sparse matrix; entry (i, j, c) means basis_i maps with
/// coefficient c onto basis_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    pub n_rows: usize,
    pub n_cols: usize,
    rows: Vec<Vec<(u32, Fq)>>,
}

impl SparseMat {
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        SparseMat { n_rows, n_cols, rows: vec![Vec::new(); n_rows] }
    }

    /// Accumulate c at (i, j), merging with an existing entry.
    pub fn push(&mut self, f: &FiniteField, i: usize, j: usize, c: Fq) {
        if c == 0 {
            return;
        }
        assert!(i < self.n_rows && j < self.n_cols);
        let row = &mut self.rows[i];
        match row.iter_mut().find(|(col, _)| *col as usize == j) {
            Some(entry) => {
                entry.1 = f.add(entry.1, c);
                if entry.1 == 0 {
                    row.retain(|&(_, v)| v != 0);
                }
            }
            None => row.push((j as u32, c)),
        }
    }

    pub fn row(&self, i: usize) -> &[(u32, Fq)] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> SparseMat {
        let mut t = SparseMat::zero(self.n_cols, self.n_rows);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, c) in row {
                t.rows[j as usize].push((i as u32, c));
            }
        }
        for row in &mut t.rows {
            row.sort_unstable_by_key(|&(j, _)| j);
        }
        t
    }

    pub fn to_dense(&self) -> DenseMat {
        let mut m = DenseMat::zero(self.n_rows, self.n_cols);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, c) in row {
                m.set(i, j as usize, c);
            }
        }
        m
    }

    /// v * A.
    pub fn apply(&self, f: &FiniteField, v: &[Fq]) -> Vec<Fq> {
        assert_eq!(v.len(), self.n_rows);
        let red = fast_reducer(f);
        let mut out = vec![0; self.n_cols];
        match red {
            Some(r) => {
                for (i, &c) in v.iter().enumerate() {
                    if c != 0 {
                        for &(j, a) in &self.rows[i] {
                            let t = out[j as usize] + c * a;
                            out[j as usize] = r.reduce(t);
                        }
                    }
                }
            }
            None => {
                for (i, &c) in v.iter().enumerate() {
                    if c != 0 {
                        for &(j, a) in &self.rows[i] {
                            out[j as usize] = f.add(out[j as usize], f.mul(c, a));
                        }
                    }
                }
            }
        }
        out
    }

    /// w * A for dense w: each row of w is applied independently.
    pub fn rmul_dense(&self, f: &FiniteField, w: &DenseMat) -> DenseMat {
        assert_eq!(w.cols, self.n_rows);
        let mut rows = Vec::with_capacity(w.rows);
        for i in 0..w.rows {
            rows.push(self.apply(f, w.row(i)));
        }
        DenseMat::from_rows(rows)
    }

    /// w += c * A.
    pub fn add_into_dense(&self, f: &FiniteField, w: &mut DenseMat, c: Fq) {
        assert_eq!((w.rows, w.cols), (self.n_rows, self.n_cols));
        if c == 0 {
            return;
        }
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, a) in row {
                let v = f.add(w.at(i, j as usize), f.mul(c, a));
                w.set(i, j as usize, v);
            }
        }
    }
}

/// A row basis kept in reduced echelon form: each stored row has 1 at its
/// pivot and 0 at every other pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<Vec<Fq>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> &[Vec<Fq>] {
        &self.rows
    }

    /// Residue of v modulo the current row space.
    pub fn reduce(&self, f: &FiniteField, mut v: Vec<Fq>) -> Vec<Fq> {
        assert_eq!(v.len(), self.cols);
        let red = fast_reducer(f);
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                axpy(f, red, &mut v, f.neg(c), row);
            }
        }
        v
    }

    pub fn contains(&self, f: &FiniteField, v: &[Fq]) -> bool {
        self.reduce(f, v.to_vec()).iter().all(|&x| x == 0)
    }

    /// Insert v if independent of the current rows; true when the rank grew.
    pub fn insert(&mut self, f: &FiniteField, v: Vec<Fq>) -> bool {
        let v = self.reduce(f, v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let mut v = v;
        let red = fast_reducer(f);
        let inv = f.inv(v[piv]).unwrap();
        scale_row(f, red, &mut v, inv);
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                axpy(f, red, row, f.neg(c), &v);
            }
        }
        self.rows.push(v);
        self.pivots.push(piv);
        true
    }
}

/// Echelon basis that remembers how each stored row combines the vectors fed
/// to insert, indexed by attempt order.
#[derive(Clone, Debug)]
pub struct TrackedEchelon {
    cols: usize,
    rows: Vec<Vec<Fq>>,
    pivots: Vec<usize>,
    reps: Vec<Vec<Fq>>,
    attempts: usize,
}

pub enum Tracked {
    Added,
    /// Coefficients over the previously inserted vectors summing to this one.
    Dependent(Vec<Fq>),
}

impl TrackedEchelon {
    pub fn new(cols: usize) -> Self {
        TrackedEchelon { cols, rows: Vec::new(), pivots: Vec::new(), reps: Vec::new(), attempts: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, f: &FiniteField, mut v: Vec<Fq>) -> Tracked {
        assert_eq!(v.len(), self.cols);
        let red = fast_reducer(f);
        let idx = self.attempts;
        self.attempts += 1;
        let mut rep = vec![0; idx + 1];
        rep[idx] = 1;
        for ((row, &piv), rrep) in self.rows.iter().zip(&self.pivots).zip(&self.reps) {
            let c = v[piv];
            if c != 0 {
                axpy(f, red, &mut v, f.neg(c), row);
                let nc = f.neg(c);
                for (k, &rc) in rrep.iter().enumerate() {
                    rep[k] = f.add(rep[k], f.mul(nc, rc));
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => {
                // v = sum of earlier inserts; move self coefficient across.
                rep.pop();
                for c in rep.iter_mut() {
                    *c = f.neg(*c);
                }
                Tracked::Dependent(rep)
            }
            Some(piv) => {
                let inv = f.inv(v[piv]).unwrap();
                scale_row(f, red, &mut v, inv);
                for c in rep.iter_mut() {
                    *c = f.mul(*c, inv);
                }
                for (row, rrep) in self.rows.iter_mut().zip(self.reps.iter_mut()) {
                    let c = row[piv];
                    if c != 0 {
                        axpy(f, red, row, f.neg(c), &v);
                        let nc = f.neg(c);
                        while rrep.len() < rep.len() {
                            rrep.push(0);
                        }
                        for (k, &rc) in rep.iter().enumerate() {
                            rrep[k] = f.add(rrep[k], f.mul(nc, rc));
                        }
                    }
                }
                self.rows.push(v);
                self.pivots.push(piv);
                self.reps.push(rep);
                Tracked::Added
            }
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(f: &FiniteField, m: &mut DenseMat) -> Vec<usize> {
    let red = fast_reducer(f);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m.cols {
        let Some(pr) = (r..m.rows).find(|&i| m.at(i, col) != 0) else {
            continue;
        };
        m.data.swap_ranges_rows(pr, r, m.cols);
        let inv = f.inv(m.at(r, col)).unwrap();
        scale_row(f, red, m.row_mut(r), inv);
        for i in 0..m.rows {
            if i != r {
                let c = m.at(i, col);
                if c != 0 {
                    let nc = f.neg(c);
                    let (ri, rr) = row_pair(m, i, r);
                    axpy(f, red, ri, nc, rr);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.rows {
            break;
        }
    }
    pivots
}

/// Two distinct rows of m, one mutable.
fn row_pair(m: &mut DenseMat, i: usize, r: usize) -> (&mut [Fq], &[Fq]) {
    let cols = m.cols;
    if i < r {
        let (a, b) = m.data.split_at_mut(r * cols);
        (&mut a[i * cols..(i + 1) * cols], &b[..cols])
    } else {
        let (a, b) = m.data.split_at_mut(i * cols);
        (&mut b[..cols], &a[r * cols..(r + 1) * cols])
    }
}

trait SwapRows {
    fn swap_ranges_rows(&mut self, a: usize, b: usize, cols: usize);
}

impl SwapRows for Vec<Fq> {
    fn swap_ranges_rows(&mut self, a: usize, b: usize, cols: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (lo, hi) = self.split_at_mut(b * cols);
        lo[a * cols..(a + 1) * cols].swap_with_slice(&mut hi[..cols]);
    }
}

pub fn rank(f: &FiniteField, m: &DenseMat) -> usize {
    let mut c = m.clone();
    rref(f, &mut c).len()
}

/// Basis of the right null space {x : A x = 0}, as rows.
pub fn right_nullspace(f: &FiniteField, m: &DenseMat) -> Vec<Vec<Fq>> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a);
    let mut out = Vec::new();
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; a.cols];
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = Some(r);
        }
        v
    };
    for j in 0..a.cols {
        if pivot_of_col[j].is_some() {
            continue;
        }
        let mut x = vec![0; a.cols];
        x[j] = 1;
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = f.neg(a.at(r, j));
        }
        out.push(x);
    }
    out
}

/// Basis of {v : v A = 0}, as rows.
pub fn left_nullspace(f: &FiniteField, m: &DenseMat) -> Vec<Vec<Fq>> {
    right_nullspace(f, &m.transpose())
}

/// Minimal monic polynomial m with v * m(W) = 0, coefficients constant-first.
pub fn min_poly_on_vector(f: &FiniteField, w: &DenseMat, v: &[Fq]) -> Vec<Fq> {
    assert_eq!(w.rows, w.cols);
    assert_eq!(v.len(), w.rows);
    let mut ech = TrackedEchelon::new(w.rows);
    let mut cur = v.to_vec();
    loop {
        match ech.insert(f, cur.clone()) {
            Tracked::Added => cur = vec_mat(f, &cur, w),
            Tracked::Dependent(rep) => {
                // cur = W^k v = sum rep[i] W^i v, so m = x^k - sum rep[i] x^i.
                let mut m: Vec<Fq> = rep.iter().map(|&c| f.neg(c)).collect();
                m.push(1);
                return m;
            }
        }
    }
}

/// Evaluate a constant-first polynomial at x.
pub fn poly_eval(f: &FiniteField, coeffs: &[Fq], x: Fq) -> Fq {
    let mut acc = 0;
    for &c in coeffs.iter().rev() {
        acc = f.add(f.mul(acc, x), c);
    }
    acc
}

/// All roots in the field, by scanning.
pub fn poly_roots(f: &FiniteField, coeffs: &[Fq]) -> Vec<Fq> {
    f.elements().filter(|&x| poly_eval(f, coeffs, x) == 0).collect()
}
