//! Chevalley basis with exact integer structure constants and bracket table.
//!
//! Basis labels are F(a), H(i), E(a) for positive roots a and simple indices
//! i, with [E(a), F(a)] = h_a the coroot and [E(a), E(b)] = N_{a,b} E(a+b).
//! Signs come from the extraspecial-pair construction over the deterministic
//! root order; everything else is forced by antisymmetry and Jacobi.

use std::collections::{BTreeMap, HashMap};

use crate::roots::{Root, RootSystem};

/// Basis element of g'. The enum order F < H < E is the normal order used
/// for straightening monomials.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum BasisLabel {
    /// f_a for the positive root with this index.
    F(usize),
    /// h_{a_{i+1}} for a simple index.
    H(usize),
    /// e_a for the positive root with this index.
    E(usize),
}

impl BasisLabel {
    pub fn render(&self, sys: &RootSystem) -> String {
        match self {
            BasisLabel::F(i) => format!("f[{}]", sys.positive_roots[*i]),
            BasisLabel::H(i) => format!("h[a{}]", i + 1),
            BasisLabel::E(i) => format!("e[{}]", sys.positive_roots[*i]),
        }
    }
}

/// Integer linear combination of basis labels, kept sorted and zero-free.
pub type LieElt = Vec<(BasisLabel, i64)>;

fn normalize(map: BTreeMap<BasisLabel, i64>) -> LieElt {
    map.into_iter().filter(|&(_, c)| c != 0).collect()
}

fn add_into(map: &mut BTreeMap<BasisLabel, i64>, label: BasisLabel, c: i64) {
    let e = map.entry(label).or_insert(0);
    *e += c;
    if *e == 0 {
        map.remove(&label);
    }
}

/// Largest r with beta - r*alpha a root of the whole system Phi, negatives
/// included. Distinct from the positive-string length used by the string
/// combinatorics: the magnitude law |N| = r + 1 counts descent through all
/// of Phi.
pub fn chain_r(sys: &RootSystem, alpha: &Root, beta: &Root) -> i64 {
    let mut r = 0i64;
    loop {
        let down: Vec<i32> = beta
            .coords
            .iter()
            .zip(&alpha.coords)
            .map(|(&b, &a)| b - (r as i32 + 1) * a)
            .collect();
        if sys.is_root(&down) {
            r += 1;
        } else {
            return r;
        }
    }
}

#[derive(Clone, Debug)]
pub struct StructureConstants {
    t: usize,
    rank: usize,
    /// N_{a,b} for ordered pairs of positive-root indices with a + b a
    /// positive root; antisymmetric. Public so tests can corrupt entries.
    pub n: HashMap<(usize, usize), i64>,
}

/// N_{x,-y} for positive roots x != y, from the positive-pair table.
fn n_mixed_from(
    n: &HashMap<(usize, usize), i64>,
    sys: &RootSystem,
    x: &Root,
    y: &Root,
) -> i64 {
    let diff: Vec<i32> = y.coords.iter().zip(&x.coords).map(|(&a, &b)| a - b).collect();
    if sys.is_positive(&diff) {
        // w = y - x, pair x + w = y: N_{x,-y} = -(w,w)/(y,y) N_{x,w}.
        let w = Root::new(diff);
        let c = n[&(sys.root_index(x).unwrap(), sys.root_index(&w).unwrap())];
        let num = -sys.norm(&w) * c;
        let den = sys.norm(y);
        assert_eq!(num % den, 0, "structure constants must be integers");
        return num / den;
    }
    let diff: Vec<i32> = x.coords.iter().zip(&y.coords).map(|(&a, &b)| a - b).collect();
    if sys.is_positive(&diff) {
        // v = x - y, pair y + v = x: N_{x,-y} = -(v,v)/(x,x) N_{y,v}.
        let v = Root::new(diff);
        let c = n[&(sys.root_index(y).unwrap(), sys.root_index(&v).unwrap())];
        let num = -sys.norm(&v) * c;
        let den = sys.norm(x);
        assert_eq!(num % den, 0, "structure constants must be integers");
        return num / den;
    }
    0
}

/// Build the integer structure constants for the system, with N on each
/// extraspecial pair set to +(r+1).
pub fn structure_constants(sys: &RootSystem) -> StructureConstants {
    let t = sys.positive_roots.len();
    let mut n: HashMap<(usize, usize), i64> = HashMap::new();
    // Roots come in ascending height, so every constant the recursion needs
    // is already present when gamma is processed.
    for (gi, gamma) in sys.positive_roots.iter().enumerate() {
        if gamma.height() == 1 {
            continue;
        }
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for a in 0..gi {
            for b in (a + 1)..gi {
                let sum: Vec<i32> = sys.positive_roots[a]
                    .coords
                    .iter()
                    .zip(&sys.positive_roots[b].coords)
                    .map(|(&x, &y)| x + y)
                    .collect();
                if sum == gamma.coords {
                    pairs.push((a, b));
                }
            }
        }
        assert!(!pairs.is_empty(), "every non-simple root is a sum of two positive roots");
        let (xi_i, eta_i) = pairs[0];
        let (xi, eta) = (&sys.positive_roots[xi_i], &sys.positive_roots[eta_i]);
        let r = chain_r(sys, xi, eta);
        n.insert((xi_i, eta_i), r + 1);
        n.insert((eta_i, xi_i), -(r + 1));
        for &(ai, bi) in &pairs[1..] {
            let (alpha, beta) = (&sys.positive_roots[ai], &sys.positive_roots[bi]);
            // Four-root relation on (xi, eta, -alpha, -beta):
            // N_{xi,eta} N_{-a,-b}/(g,g) + N_{eta,-a} N_{xi,-b}/(eta-a, eta-a)
            //   + N_{-a,xi} N_{eta,-b}/(xi-a, xi-a) = 0, with N_{-a,-b} = -N_{a,b}.
            let norm_diff = |u: &Root, v: &Root| -> Option<i64> {
                let d: Vec<i32> =
                    u.coords.iter().zip(&v.coords).map(|(&x, &y)| x - y).collect();
                if !sys.is_root(&d) {
                    return None;
                }
                let pos: Vec<i32> =
                    if sys.is_positive(&d) { d } else { d.iter().map(|&c| -c).collect() };
                Some(sys.norm(&Root::new(pos)))
            };
            let (t2_num, t2_den) = match norm_diff(eta, alpha) {
                Some(norm) => {
                    (n_mixed_from(&n, sys, eta, alpha) * n_mixed_from(&n, sys, xi, beta), norm)
                }
                None => (0, 1),
            };
            let (t3_num, t3_den) = match norm_diff(xi, alpha) {
                Some(norm) => {
                    (-n_mixed_from(&n, sys, xi, alpha) * n_mixed_from(&n, sys, eta, beta), norm)
                }
                None => (0, 1),
            };
            let num = sys.norm(gamma) * (t2_num * t3_den + t3_num * t2_den);
            let den = t2_den * t3_den * n[&(xi_i, eta_i)];
            assert_eq!(num % den, 0, "structure constants must be integers");
            let value = num / den;
            assert_ne!(value, 0, "special pairs have nonzero constants");
            n.insert((ai, bi), value);
            n.insert((bi, ai), -value);
        }
    }
    StructureConstants { t, rank: sys.rank, n }
}

pub struct ChevalleyReport {
    pub ok: bool,
    pub checked_triples: usize,
    pub failures: Vec<String>,
}

impl StructureConstants {
    pub fn labels(&self) -> Vec<BasisLabel> {
        let mut out: Vec<BasisLabel> = (0..self.t).map(BasisLabel::F).collect();
        out.extend((0..self.rank).map(BasisLabel::H));
        out.extend((0..self.t).map(BasisLabel::E));
        out
    }

    pub fn dim(&self) -> usize {
        2 * self.t + self.rank
    }

    fn n_pos(&self, a: usize, b: usize) -> i64 {
        self.n.get(&(a, b)).copied().unwrap_or(0)
    }

    fn sum_index(&self, sys: &RootSystem, a: usize, b: usize) -> Option<usize> {
        let sum: Vec<i32> = sys.positive_roots[a]
            .coords
            .iter()
            .zip(&sys.positive_roots[b].coords)
            .map(|(&x, &y)| x + y)
            .collect();
        sys.root_index(&Root::new(sum))
    }

    /// Bracket of two basis labels as an integer element.
    pub fn bracket_labels(&self, sys: &RootSystem, x: BasisLabel, y: BasisLabel) -> LieElt {
        use BasisLabel::*;
        match (x, y) {
            (E(a), E(b)) | (F(b), F(a)) if a == b => Vec::new(),
            (E(a), E(b)) => match self.sum_index(sys, a, b) {
                Some(s) => vec![(E(s), self.n_pos(a, b))],
                None => Vec::new(),
            },
            (F(a), F(b)) => match self.sum_index(sys, a, b) {
                Some(s) => vec![(F(s), -self.n_pos(a, b))],
                None => Vec::new(),
            },
            (E(a), F(b)) if a == b => {
                let k = sys.coroot_coeffs(&sys.positive_roots[a]).unwrap();
                (0..self.rank).filter(|&i| k[i] != 0).map(|i| (H(i), k[i])).collect()
            }
            (E(a), F(b)) => {
                let (ra, rb) = (&sys.positive_roots[a], &sys.positive_roots[b]);
                let c = n_mixed_from(&self.n, sys, ra, rb);
                if c == 0 {
                    return Vec::new();
                }
                let diff: Vec<i32> =
                    ra.coords.iter().zip(&rb.coords).map(|(&x, &y)| x - y).collect();
                if sys.is_positive(&diff) {
                    vec![(E(sys.root_index(&Root::new(diff)).unwrap()), c)]
                } else {
                    let neg: Vec<i32> = diff.iter().map(|&v| -v).collect();
                    vec![(F(sys.root_index(&Root::new(neg)).unwrap()), c)]
                }
            }
            (F(_), E(_)) => neg(self.bracket_labels(sys, y, x)),
            (H(i), E(a)) => {
                let c = sys.pairing(&sys.positive_roots[a], sys.simple(i));
                if c == 0 { Vec::new() } else { vec![(E(a), c)] }
            }
            (H(i), F(a)) => {
                let c = sys.pairing(&sys.positive_roots[a], sys.simple(i));
                if c == 0 { Vec::new() } else { vec![(F(a), -c)] }
            }
            (E(_), H(_)) | (F(_), H(_)) => neg(self.bracket_labels(sys, y, x)),
            (H(_), H(_)) => Vec::new(),
        }
    }

    /// Bilinear extension of the bracket to integer elements.
    pub fn bracket(&self, sys: &RootSystem, x: &LieElt, y: &LieElt) -> LieElt {
        let mut acc: BTreeMap<BasisLabel, i64> = BTreeMap::new();
        for &(lx, cx) in x {
            for &(ly, cy) in y {
                for (lz, cz) in self.bracket_labels(sys, lx, ly) {
                    add_into(&mut acc, lz, cx * cy * cz);
                }
            }
        }
        normalize(acc)
    }

    /// Report antisymmetry, Jacobi, the magnitude law, coroot consistency,
    /// and Cartan pairings; failures carry the first counterexample found.
    pub fn verify(&self, sys: &RootSystem) -> ChevalleyReport {
        let labels = self.labels();
        let mut failures = Vec::new();
        let mut checked = 0usize;
        'anti: for &x in &labels {
            for &y in &labels {
                let xy = self.bracket_labels(sys, x, y);
                let yx = neg(self.bracket_labels(sys, y, x));
                if xy != yx {
                    failures.push(format!(
                        "antisymmetry fails at [{}, {}]",
                        x.render(sys),
                        y.render(sys)
                    ));
                    break 'anti;
                }
            }
        }
        'jacobi: for &x in &labels {
            for &y in &labels {
                let xy = self.bracket_labels(sys, x, y);
                for &z in &labels {
                    checked += 1;
                    let yz = self.bracket_labels(sys, y, z);
                    let zx = self.bracket_labels(sys, z, x);
                    let mut acc: BTreeMap<BasisLabel, i64> = BTreeMap::new();
                    for (l, c) in self.bracket(sys, &vec![(x, 1)], &yz) {
                        add_into(&mut acc, l, c);
                    }
                    for (l, c) in self.bracket(sys, &vec![(y, 1)], &zx) {
                        add_into(&mut acc, l, c);
                    }
                    for (l, c) in self.bracket(sys, &vec![(z, 1)], &xy) {
                        add_into(&mut acc, l, c);
                    }
                    if !acc.is_empty() {
                        failures.push(format!(
                            "Jacobi fails at ({}, {}, {})",
                            x.render(sys),
                            y.render(sys),
                            z.render(sys)
                        ));
                        break 'jacobi;
                    }
                }
            }
        }
        for (&(a, b), &v) in &self.n {
            let r = chain_r(sys, &sys.positive_roots[a], &sys.positive_roots[b]);
            if v.abs() != r + 1 {
                failures.push(format!(
                    "magnitude law fails at [{}, {}]: |{}| != {}",
                    BasisLabel::E(a).render(sys),
                    BasisLabel::E(b).render(sys),
                    v,
                    r + 1
                ));
                break;
            }
        }
        for a in 0..self.t {
            let got = self.bracket_labels(sys, BasisLabel::E(a), BasisLabel::F(a));
            let k = sys.coroot_coeffs(&sys.positive_roots[a]).unwrap();
            let want: LieElt = (0..self.rank)
                .filter(|&i| k[i] != 0)
                .map(|i| (BasisLabel::H(i), k[i]))
                .collect();
            if got != want {
                failures.push(format!(
                    "[e, f] at {} does not match the coroot expansion",
                    sys.positive_roots[a]
                ));
                break;
            }
        }
        ChevalleyReport { ok: failures.is_empty(), checked_triples: checked, failures }
    }

    /// CSV rows (alpha, beta, target, coeff) over all stored pairs.
    pub fn to_csv(&self, sys: &RootSystem) -> String {
        let mut keys: Vec<&(usize, usize)> = self.n.keys().collect();
        keys.sort();
        let mut out = String::from("alpha,beta,target,coeff\n");
        for &&(a, b) in &keys {
            let s = self.sum_index(sys, a, b).unwrap();
            out.push_str(&format!(
                "{},{},{},{}\n",
                sys.positive_roots[a], sys.positive_roots[b], sys.positive_roots[s], self.n[&(a, b)]
            ));
        }
        out
    }
}

fn neg(e: LieElt) -> LieElt {
    e.into_iter().map(|(l, c)| (l, -c)).collect()
}

/// The restricted p-operation on basis labels: nilpotent generators vanish,
/// toral ones are fixed.
pub fn p_power(label: BasisLabel) -> LieElt {
    match label {
        BasisLabel::H(i) => vec![(BasisLabel::H(i), 1)],
        _ => Vec::new(),
    }
}
