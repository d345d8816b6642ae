//! Root-system combinatorics: positive roots, strings, parabolic subsets,
//! orderings, and coroot pairings.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::err::{Error, Result};

/// Rank cap for the default constructor; keeps induced modules at desk scale.
pub const DEFAULT_MAX_RANK: usize = 4;

/// A root written over the simple roots: coords[i] is the coefficient of a_{i+1}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Root {
    pub coords: Vec<i32>,
}

impl Root {
    pub fn new(coords: Vec<i32>) -> Self {
        Root { coords }
    }

    pub fn height(&self) -> i32 {
        self.coords.iter().sum()
    }

    /// Indices of the simple roots appearing in this root.
    pub fn support(&self) -> Vec<usize> {
        self.coords.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect()
    }

    fn combine(l: i32, a: &Root, m: i32, b: &Root) -> Root {
        Root::new(a.coords.iter().zip(&b.coords).map(|(&x, &y)| l * x + m * y).collect())
    }
}

impl std::fmt::Display for Root {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c > 0 && !first {
                write!(f, "+")?;
            }
            match c {
                1 => {}
                -1 => write!(f, "-")?,
                _ => write!(f, "{c}")?,
            }
            write!(f, "a{}", i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Total order on roots: ascending height, then descending lexicographic on
/// coords, so a1 sorts before a2 at equal height.
pub fn root_cmp(a: &Root, b: &Root) -> std::cmp::Ordering {
    a.height().cmp(&b.height()).then_with(|| b.coords.cmp(&a.coords))
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub kind: char,
    pub rank: usize,
    /// cartan[i][j] is the pairing of a_{i+1} with the coroot of a_{j+1}.
    pub cartan: Vec<Vec<i64>>,
    pub positive_roots: Vec<Root>,
    /// gram[i][j] = (a_{i+1}, a_{j+1}) in the normalization fixed per type.
    gram: Vec<Vec<i64>>,
    index: HashMap<Vec<i32>, usize>,
    /// coroot_coeffs[r] = k with h_root = sum k_i h_{a_i}, parallel to positive_roots.
    coroot: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct AlphaString {
    pub alpha: Root,
    pub base: Root,
    pub members: Vec<Root>,
    pub isolated: bool,
}

#[derive(Clone, Debug)]
pub struct ExtendedAlphaString {
    pub alpha: Root,
    pub base: Root,
    pub members: Vec<Root>,
}

#[derive(Clone, Debug)]
pub struct ParabolicData {
    /// Sorted simple-root indices (0-based).
    pub i_set: Vec<usize>,
    pub phi_i_plus: Vec<Root>,
    pub complement: Vec<Root>,
    pub t: usize,
    pub s: usize,
    pub k: usize,
}

/// Serializable snapshot for golden-file comparison.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RootSystemDoc {
    pub kind: String,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i32>>,
}

fn validate_kind_rank(kind: char, rank: usize) -> Result<()> {
    let ok = match kind {
        'A' => rank >= 1,
        'B' | 'C' => rank >= 2,
        'D' => rank >= 4,
        'E' => (6..=8).contains(&rank),
        'F' => rank == 4,
        'G' => rank == 2,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::config(format!("unsupported type {kind}{rank}")))
    }
}

/// Cartan matrix and simple-root norms for the standard numbering.
fn cartan_and_norms(kind: char, rank: usize) -> (Vec<Vec<i64>>, Vec<i64>) {
    let l = rank;
    let mut cartan = vec![vec![0i64; l]; l];
    for (i, row) in cartan.iter_mut().enumerate() {
        row[i] = 2;
    }
    let set_edge = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    let mut norms = vec![2i64; l];
    match kind {
        'A' => {
            for i in 0..l - 1 {
                set_edge(&mut cartan, i, i + 1);
            }
        }
        'B' => {
            for i in 0..l - 1 {
                set_edge(&mut cartan, i, i + 1);
            }
            cartan[l - 2][l - 1] = -2;
            norms[l - 1] = 1;
        }
        'C' => {
            for i in 0..l - 1 {
                set_edge(&mut cartan, i, i + 1);
            }
            cartan[l - 1][l - 2] = -2;
            norms[l - 1] = 4;
        }
        'D' => {
            for i in 0..l - 2 {
                set_edge(&mut cartan, i, i + 1);
            }
            set_edge(&mut cartan, l - 3, l - 1);
        }
        'E' => {
            // Chain 1-3-4-5-..., with node 2 hanging off node 4.
            set_edge(&mut cartan, 0, 2);
            set_edge(&mut cartan, 1, 3);
            for i in 2..l - 1 {
                set_edge(&mut cartan, i, i + 1);
            }
        }
        'F' => {
            for i in 0..3 {
                set_edge(&mut cartan, i, i + 1);
            }
            cartan[1][2] = -2;
            // Norm 4 long / 2 short keeps (a3, a4) integral.
            norms = vec![4, 4, 2, 2];
        }
        'G' => {
            cartan[0][1] = -1;
            cartan[1][0] = -3;
            norms[1] = 6;
        }
        _ => unreachable!(),
    }
    (cartan, norms)
}

fn classical_positive_count(kind: char, rank: usize) -> usize {
    match kind {
        'A' => rank * (rank + 1) / 2,
        'B' | 'C' => rank * rank,
        'D' => rank * (rank - 1),
        'G' => 6,
        'F' => 24,
        'E' => [36, 63, 120][rank - 6],
        _ => unreachable!(),
    }
}

pub fn build_root_system(kind: char, rank: usize) -> Result<RootSystem> {
    build_root_system_with_bound(kind, rank, DEFAULT_MAX_RANK)
}

pub fn build_root_system_with_bound(kind: char, rank: usize, max_rank: usize) -> Result<RootSystem> {
    validate_kind_rank(kind, rank)?;
    if rank > max_rank && kind != 'G' {
        return Err(Error::config(format!(
            "rank {rank} exceeds the configured bound {max_rank}"
        )));
    }
    let (cartan, norms) = cartan_and_norms(kind, rank);
    let mut gram = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            let num = cartan[i][j] * norms[j];
            assert_eq!(num % 2, 0, "inner products must be integers");
            gram[i][j] = num / 2;
        }
    }
    for i in 0..rank {
        for j in 0..rank {
            assert_eq!(gram[i][j], gram[j][i], "inner product must be symmetric");
        }
    }

    // Generate positive roots level by level; beta + a_i is a root iff
    // q = r - <beta, a_i^v> > 0 where r counts how far the string descends.
    let mut set: HashSet<Vec<i32>> = HashSet::new();
    let mut levels: Vec<Vec<Root>> = Vec::new();
    let simples: Vec<Root> = (0..rank)
        .map(|i| {
            let mut c = vec![0i32; rank];
            c[i] = 1;
            Root::new(c)
        })
        .collect();
    for s in &simples {
        set.insert(s.coords.clone());
    }
    levels.push(simples.clone());
    loop {
        let last = levels.last().unwrap();
        let mut next: Vec<Root> = Vec::new();
        for beta in last {
            for (i, alpha) in simples.iter().enumerate() {
                let mut r = 0i64;
                loop {
                    let down = Root::combine(1, beta, -(r as i32 + 1), alpha);
                    if set.contains(&down.coords) {
                        r += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 =
                    beta.coords.iter().enumerate().map(|(j, &c)| c as i64 * cartan[j][i]).sum();
                if r - pairing > 0 {
                    let up = Root::combine(1, beta, 1, alpha);
                    if !set.contains(&up.coords) {
                        set.insert(up.coords.clone());
                        next.push(up);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_by(root_cmp);
        next.dedup();
        levels.push(next);
    }
    let positive_roots: Vec<Root> = levels.into_iter().flatten().collect();
    assert_eq!(
        positive_roots.len(),
        classical_positive_count(kind, rank),
        "positive root count for {kind}{rank}"
    );
    let index: HashMap<Vec<i32>, usize> =
        positive_roots.iter().enumerate().map(|(i, r)| (r.coords.clone(), i)).collect();

    let norm_of = |root: &Root| -> i64 {
        let mut n = 0i64;
        for (i, &ci) in root.coords.iter().enumerate() {
            for (j, &cj) in root.coords.iter().enumerate() {
                n += ci as i64 * cj as i64 * gram[i][j];
            }
        }
        n
    };
    let coroot: Vec<Vec<i64>> = positive_roots
        .iter()
        .map(|root| {
            let n = norm_of(root);
            root.coords
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let num = c as i64 * norms[i];
                    assert_eq!(num % n, 0, "coroot coefficients must be integers");
                    num / n
                })
                .collect()
        })
        .collect();

    Ok(RootSystem { kind, rank, cartan, positive_roots, gram, index, coroot })
}

impl RootSystem {
    pub fn simple(&self, i: usize) -> &Root {
        &self.positive_roots[i]
    }

    pub fn is_positive(&self, coords: &[i32]) -> bool {
        self.index.contains_key(coords)
    }

    pub fn is_root(&self, coords: &[i32]) -> bool {
        if self.index.contains_key(coords) {
            return true;
        }
        let neg: Vec<i32> = coords.iter().map(|&c| -c).collect();
        self.index.contains_key(&neg)
    }

    pub fn root_index(&self, root: &Root) -> Option<usize> {
        self.index.get(&root.coords).copied()
    }

    pub fn max_height(&self) -> i32 {
        self.positive_roots.last().map_or(0, |r| r.height())
    }

    pub fn inner(&self, a: &Root, b: &Root) -> i64 {
        let mut n = 0i64;
        for (i, &ci) in a.coords.iter().enumerate() {
            for (j, &cj) in b.coords.iter().enumerate() {
                n += ci as i64 * cj as i64 * self.gram[i][j];
            }
        }
        n
    }

    pub fn norm(&self, a: &Root) -> i64 {
        self.inner(a, a)
    }

    /// <beta, alpha^v> = 2(beta, alpha)/(alpha, alpha), always an integer.
    pub fn pairing(&self, beta: &Root, alpha: &Root) -> i64 {
        let num = 2 * self.inner(beta, alpha);
        let den = self.norm(alpha);
        assert_eq!(num % den, 0, "coroot pairing must be an integer");
        num / den
    }

    pub fn coroot_coeffs(&self, root: &Root) -> Result<&[i64]> {
        let idx = self
            .root_index(root)
            .ok_or_else(|| Error::domain(format!("{root} is not a positive root")))?;
        Ok(&self.coroot[idx])
    }

    fn require_positive(&self, root: &Root) -> Result<()> {
        if self.is_positive(&root.coords) {
            Ok(())
        } else {
            Err(Error::domain(format!("{root} is not a positive root")))
        }
    }

    fn require_simple(&self, alpha: &Root) -> Result<()> {
        self.require_positive(alpha)?;
        if alpha.height() == 1 {
            Ok(())
        } else {
            Err(Error::domain(format!("{alpha} is not simple")))
        }
    }

    /// The alpha-string through beta inside the positive roots, listed from
    /// the top of the string downward.
    pub fn alpha_string(&self, alpha: &Root, beta: &Root) -> Result<AlphaString> {
        self.require_simple(alpha)?;
        self.require_positive(beta)?;
        if alpha == beta {
            return Err(Error::domain("the string through alpha itself is not defined"));
        }
        let mut base = beta.clone();
        loop {
            let up = Root::combine(1, &base, 1, alpha);
            if self.is_positive(&up.coords) {
                base = up;
            } else {
                break;
            }
        }
        let mut members = Vec::new();
        let mut j = 0;
        loop {
            let m = Root::combine(1, &base, -j, alpha);
            if self.is_positive(&m.coords) {
                members.push(m);
                j += 1;
            } else {
                break;
            }
        }
        let isolated = members.len() == 1;
        Ok(AlphaString { alpha: alpha.clone(), base, members, isolated })
    }

    /// Extended alpha-string: all l*base + m*alpha with l >= 1 that are
    /// positive roots, ordered by descending l, then descending m. Defined
    /// only when the plain string is non-isolated.
    pub fn extended_alpha_string(&self, alpha: &Root, beta: &Root) -> Result<ExtendedAlphaString> {
        let plain = self.alpha_string(alpha, beta)?;
        if plain.isolated {
            return Err(Error::domain(format!(
                "the {alpha}-string through {beta} is isolated"
            )));
        }
        let base = plain.base.clone();
        let h = self.max_height();
        let mut found: Vec<(i32, i32, Root)> = Vec::new();
        for l in 1..=h {
            for m in -h..=h {
                let cand = Root::combine(l, &base, m, alpha);
                if self.is_positive(&cand.coords) {
                    found.push((l, m, cand));
                }
            }
        }
        found.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
        let members: Vec<Root> = found.into_iter().map(|(_, _, r)| r).collect();
        // The plain string is the l = 1 suffix.
        assert!(members.len() >= plain.members.len());
        assert_eq!(
            &members[members.len() - plain.members.len()..],
            plain.members.as_slice(),
            "plain string must be a suffix of the extended string"
        );
        Ok(ExtendedAlphaString { alpha: alpha.clone(), base, members })
    }

    pub fn parabolic_data(&self, i_set: &[usize]) -> Result<ParabolicData> {
        let mut i_set = i_set.to_vec();
        i_set.sort_unstable();
        i_set.dedup();
        if i_set.iter().any(|&i| i >= self.rank) {
            return Err(Error::config(format!(
                "simple-root index out of range for rank {}",
                self.rank
            )));
        }
        if i_set.len() >= self.rank {
            return Err(Error::domain("I must be a proper subset of the simple roots"));
        }
        let in_i = |r: &Root| r.support().iter().all(|s| i_set.contains(s));
        let phi_i_plus: Vec<Root> =
            self.positive_roots.iter().filter(|r| in_i(r)).cloned().collect();
        let complement: Vec<Root> =
            self.positive_roots.iter().filter(|r| !in_i(r)).cloned().collect();
        assert!(self.is_closed_subset(&complement), "the complement must be closed");
        let t = self.positive_roots.len();
        let s = phi_i_plus.len();
        Ok(ParabolicData { i_set, phi_i_plus, complement, t, s, k: t - s })
    }

    /// An alpha-order on the complement: members of each maximal extended
    /// alpha-string appear adjacently in string order; roots in no string
    /// follow in ascending height.
    pub fn alpha_order(&self, pd: &ParabolicData, alpha_idx: usize) -> Result<Vec<Root>> {
        if !pd.i_set.contains(&alpha_idx) {
            return Err(Error::domain(format!("a{} is not in I", alpha_idx + 1)));
        }
        let alpha = self.simple(alpha_idx).clone();
        let mut strings: Vec<Vec<Root>> = Vec::new();
        let mut seen: HashSet<Vec<Vec<i32>>> = HashSet::new();
        for beta in &pd.complement {
            let plain = self.alpha_string(&alpha, beta)?;
            if plain.isolated {
                continue;
            }
            let ext = self.extended_alpha_string(&alpha, beta)?;
            let key: Vec<Vec<i32>> = ext.members.iter().map(|r| r.coords.clone()).collect();
            if seen.insert(key) {
                strings.push(ext.members);
            }
        }
        // Keep only maximal strings; nested ones are already covered.
        let as_set =
            |s: &[Root]| s.iter().map(|r| r.coords.clone()).collect::<HashSet<Vec<i32>>>();
        let sets: Vec<HashSet<Vec<i32>>> = strings.iter().map(|s| as_set(s)).collect();
        let maximal: Vec<Vec<Root>> = strings
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                !sets.iter().enumerate().any(|(j, other)| {
                    j != *i && sets[*i].len() < other.len() && sets[*i].is_subset(other)
                })
            })
            .map(|(_, s)| s.clone())
            .collect();
        // Maximal strings must tile their union disjointly.
        let mut covered: HashSet<Vec<i32>> = HashSet::new();
        for s in &maximal {
            for r in s {
                if !covered.insert(r.coords.clone()) {
                    return Err(Error::falsified(format!(
                        "maximal extended strings overlap at {r}"
                    )));
                }
                if self.root_index(r).map(|_| ()).is_none()
                    || !pd.complement.contains(r)
                {
                    return Err(Error::falsified(format!(
                        "extended string member {r} escapes the complement"
                    )));
                }
            }
        }
        let order_key = |r: &Root| self.root_index(r).unwrap();
        let mut blocks = maximal;
        blocks.sort_by_key(|s| order_key(&s[0]));
        let mut out: Vec<Root> = blocks.into_iter().flatten().collect();
        let mut rest: Vec<Root> = pd
            .complement
            .iter()
            .filter(|r| !covered.contains(&r.coords))
            .cloned()
            .collect();
        rest.sort_by(root_cmp);
        out.extend(rest);
        assert_eq!(out.len(), pd.complement.len());
        Ok(out)
    }

    pub fn is_closed_subset(&self, s: &[Root]) -> bool {
        let set: HashSet<&Vec<i32>> = s.iter().map(|r| &r.coords).collect();
        for a in s {
            for b in s {
                let sum = Root::combine(1, a, 1, b);
                if self.is_positive(&sum.coords) && !set.contains(&sum.coords) {
                    return false;
                }
            }
        }
        true
    }

    /// rho(h_alpha) where rho is half the sum of the positive roots.
    pub fn rho_pairing(&self, alpha: &Root) -> Result<i64> {
        Ok(self.coroot_coeffs(alpha)?.iter().sum())
    }

    /// rho_I(h_alpha) = half the sum over Phi_I^+ of the coroot pairings.
    pub fn rho_i_pairing(&self, pd: &ParabolicData, alpha: &Root) -> Result<i64> {
        self.require_positive(alpha)?;
        let sum: i64 = pd.phi_i_plus.iter().map(|beta| self.pairing(beta, alpha)).sum();
        if sum.rem_euclid(2) != 0 {
            return Err(Error::domain(format!(
                "rho_I pairing with {alpha} is not an integer"
            )));
        }
        Ok(sum / 2)
    }

    pub fn to_doc(&self) -> RootSystemDoc {
        RootSystemDoc {
            kind: self.kind.to_string(),
            rank: self.rank,
            cartan: self.cartan.clone(),
            positive_roots: self.positive_roots.iter().map(|r| r.coords.clone()).collect(),
        }
    }

    /// Rebuild from a snapshot, verifying it matches the fresh construction.
    pub fn from_doc(doc: &RootSystemDoc) -> Result<RootSystem> {
        let mut chars = doc.kind.chars();
        let kind = chars
            .next()
            .filter(|_| chars.next().is_none())
            .ok_or_else(|| Error::config(format!("bad type label {:?}", doc.kind)))?;
        let sys = build_root_system_with_bound(kind, doc.rank, usize::MAX)?;
        if sys.cartan != doc.cartan {
            return Err(Error::config("Cartan matrix does not match the standard one"));
        }
        let built: Vec<Vec<i32>> = sys.positive_roots.iter().map(|r| r.coords.clone()).collect();
        if built != doc.positive_roots {
            return Err(Error::config("positive roots do not match the standard construction"));
        }
        Ok(sys)
    }
}

/// Parse roots like "a1", "3a1+2a2", or coordinate form "3.2".
pub fn root_of_coords(sys: &RootSystem, coords: Vec<i32>) -> Result<Root> {
    if coords.len() != sys.rank {
        return Err(Error::config(format!(
            "expected {} coordinates, got {}",
            sys.rank,
            coords.len()
        )));
    }
    let r = Root::new(coords);
    if !sys.is_positive(&r.coords) {
        return Err(Error::domain(format!("{r} is not a positive root")));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(coords: &[i32]) -> Root {
        Root::new(coords.to_vec())
    }

    fn all_small_systems() -> Vec<RootSystem> {
        let mut out = Vec::new();
        for (k, ranks) in [
            ('A', vec![1, 2, 3, 4]),
            ('B', vec![2, 3, 4]),
            ('C', vec![2, 3, 4]),
            ('D', vec![4]),
            ('F', vec![4]),
            ('G', vec![2]),
        ] {
            for rank in ranks {
                out.push(build_root_system(k, rank).unwrap());
            }
        }
        out
    }

    #[test]
    fn counts_match_closed_forms() {
        // The classical counts double as an oracle for the generation loop.
        for sys in all_small_systems() {
            let expect = classical_positive_count(sys.kind, sys.rank);
            assert_eq!(sys.positive_roots.len(), expect, "{}{}", sys.kind, sys.rank);
        }
        for (rank, count) in [(6, 36), (7, 63), (8, 120)] {
            let sys = build_root_system_with_bound('E', rank, 8).unwrap();
            assert_eq!(sys.positive_roots.len(), count);
        }
        assert!(build_root_system('E', 6).is_err()); // above the default bound
        assert!(build_root_system('H', 2).is_err());
        assert!(build_root_system('D', 3).is_err());
    }

    #[test]
    fn g2_positive_roots_exact() {
        let g2 = build_root_system('G', 2).unwrap();
        let expect = vec![
            r(&[1, 0]),
            r(&[0, 1]),
            r(&[1, 1]),
            r(&[2, 1]),
            r(&[3, 1]),
            r(&[3, 2]),
        ];
        assert_eq!(g2.positive_roots, expect);
        // a1 short, a2 long.
        assert_eq!(g2.norm(&r(&[1, 0])), 2);
        assert_eq!(g2.norm(&r(&[0, 1])), 6);
    }

    #[test]
    fn b2_positive_roots_exact() {
        let b2 = build_root_system('B', 2).unwrap();
        let expect = vec![r(&[1, 0]), r(&[0, 1]), r(&[1, 1]), r(&[1, 2])];
        assert_eq!(b2.positive_roots, expect);
        assert_eq!(b2.norm(&r(&[0, 1])), 1); // a2 short
    }

    #[test]
    fn a1_positive_roots_exact() {
        let a1 = build_root_system('A', 1).unwrap();
        assert_eq!(a1.positive_roots, vec![r(&[1])]);
    }

    #[test]
    fn coroot_coeffs_against_pairing_oracle() {
        // h_alpha = sum k_i h_{a_i} iff <beta, alpha^v> = sum k_i <beta, a_i^v>
        // for every beta; check that identity over all positive beta.
        for sys in all_small_systems() {
            for alpha in &sys.positive_roots {
                let k = sys.coroot_coeffs(alpha).unwrap().to_vec();
                for beta in &sys.positive_roots {
                    let lhs = sys.pairing(beta, alpha);
                    let rhs: i64 = (0..sys.rank)
                        .map(|i| k[i] * sys.pairing(beta, sys.simple(i)))
                        .sum();
                    assert_eq!(lhs, rhs, "{}{} {} vs {}", sys.kind, sys.rank, alpha, beta);
                }
            }
            for i in 0..sys.rank {
                let k = sys.coroot_coeffs(sys.simple(i)).unwrap();
                let unit: Vec<i64> =
                    (0..sys.rank).map(|j| if i == j { 1 } else { 0 }).collect();
                assert_eq!(k, unit.as_slice());
            }
        }
    }

    #[test]
    fn rho_pairing_against_half_sum_oracle() {
        // rho is half the sum of positive roots, so rho(h_alpha) must equal
        // half the sum of all pairings <beta, alpha^v>.
        for sys in all_small_systems() {
            for alpha in &sys.positive_roots {
                let sum: i64 =
                    sys.positive_roots.iter().map(|b| sys.pairing(b, alpha)).sum();
                assert_eq!(sum % 2, 0);
                assert_eq!(sys.rho_pairing(alpha).unwrap(), sum / 2, "{alpha}");
            }
        }
    }

    #[test]
    fn g2_rho_values() {
        let g2 = build_root_system('G', 2).unwrap();
        let values: Vec<i64> = g2
            .positive_roots
            .iter()
            .map(|a| g2.rho_pairing(a).unwrap())
            .collect();
        // a1, a2, a1+a2, 2a1+a2, 3a1+a2, 3a1+2a2.
        assert_eq!(values, vec![1, 1, 4, 5, 2, 3]);
    }

    #[test]
    fn g2_case_one_string() {
        let g2 = build_root_system('G', 2).unwrap();
        let s = g2.alpha_string(&r(&[1, 0]), &r(&[3, 1])).unwrap();
        assert_eq!(s.members, vec![r(&[3, 1]), r(&[2, 1]), r(&[1, 1]), r(&[0, 1])]);
        assert!(!s.isolated);
        // Re-basing: feeding any member of the same string gives the same answer.
        let s2 = g2.alpha_string(&r(&[1, 0]), &r(&[0, 1])).unwrap();
        assert_eq!(s2.members, s.members);
        assert_eq!(s2.base, r(&[3, 1]));
    }

    #[test]
    fn g2_case_two_isolated() {
        let g2 = build_root_system('G', 2).unwrap();
        let s = g2.alpha_string(&r(&[0, 1]), &r(&[2, 1])).unwrap();
        assert_eq!(s.members, vec![r(&[2, 1])]);
        assert!(s.isolated);
        assert!(g2.extended_alpha_string(&r(&[0, 1]), &r(&[2, 1])).is_err());
    }

    #[test]
    fn b2_isolated_string() {
        let b2 = build_root_system('B', 2).unwrap();
        let s = b2.alpha_string(&r(&[1, 0]), &r(&[1, 2])).unwrap();
        assert_eq!(s.members, vec![r(&[1, 2])]);
        assert!(s.isolated);
    }

    #[test]
    fn string_domain_errors() {
        let b2 = build_root_system('B', 2).unwrap();
        assert!(b2.alpha_string(&r(&[1, 0]), &r(&[1, 0])).is_err());
        assert!(b2.alpha_string(&r(&[1, 1]), &r(&[1, 0])).is_err()); // alpha not simple
        assert!(b2.alpha_string(&r(&[1, 0]), &r(&[2, 1])).is_err()); // beta not a root
    }

    #[test]
    fn b2_extended_string() {
        let b2 = build_root_system('B', 2).unwrap();
        let e = b2.extended_alpha_string(&r(&[1, 0]), &r(&[1, 1])).unwrap();
        assert_eq!(e.members, vec![r(&[1, 2]), r(&[1, 1]), r(&[0, 1])]);
        assert_eq!(e.base, r(&[1, 1]));
    }

    #[test]
    fn a2_extended_equals_plain() {
        let a2 = build_root_system('A', 2).unwrap();
        let e = a2.extended_alpha_string(&r(&[1, 0]), &r(&[1, 1])).unwrap();
        assert_eq!(e.members, vec![r(&[1, 1]), r(&[0, 1])]);
    }

    #[test]
    fn g2_extended_strings_and_nesting() {
        let g2 = build_root_system('G', 2).unwrap();
        let big = g2.extended_alpha_string(&r(&[0, 1]), &r(&[1, 1])).unwrap();
        assert_eq!(
            big.members,
            vec![r(&[3, 2]), r(&[3, 1]), r(&[2, 1]), r(&[1, 1]), r(&[1, 0])]
        );
        let small = g2.extended_alpha_string(&r(&[0, 1]), &r(&[3, 2])).unwrap();
        assert_eq!(small.members, vec![r(&[3, 2]), r(&[3, 1])]);
        // The nesting the alpha-order construction must survive.
        let big_set: HashSet<_> = big.members.iter().collect();
        assert!(small.members.iter().all(|m| big_set.contains(m)));

        let a1_ext = g2.extended_alpha_string(&r(&[1, 0]), &r(&[0, 1])).unwrap();
        assert_eq!(
            a1_ext.members,
            vec![r(&[3, 2]), r(&[3, 1]), r(&[2, 1]), r(&[1, 1]), r(&[0, 1])]
        );
    }

    #[test]
    fn string_classification_outside_g2() {
        // Non-isolated strings outside G2: plain is {b, b-a} or {b, b-a, b-2a};
        // extended is plain or {2b-a} + plain.
        for sys in all_small_systems() {
            if sys.kind == 'G' {
                continue;
            }
            for i in 0..sys.rank {
                let alpha = sys.simple(i).clone();
                for beta in &sys.positive_roots {
                    if beta == &alpha {
                        continue;
                    }
                    let s = sys.alpha_string(&alpha, beta).unwrap();
                    if s.isolated {
                        continue;
                    }
                    assert!(s.members.len() == 2 || s.members.len() == 3);
                    for (j, m) in s.members.iter().enumerate() {
                        assert_eq!(*m, Root::combine(1, &s.base, -(j as i32), &alpha));
                    }
                    let e = sys.extended_alpha_string(&alpha, beta).unwrap();
                    let extra = e.members.len() - s.members.len();
                    assert!(extra == 0 || extra == 1);
                    if extra == 1 {
                        assert_eq!(e.members[0], Root::combine(2, &s.base, -1, &alpha));
                    }
                }
            }
        }
    }

    #[test]
    fn string_lengths_bounded_and_unbroken() {
        for sys in all_small_systems() {
            for i in 0..sys.rank {
                let alpha = sys.simple(i).clone();
                for beta in &sys.positive_roots {
                    if beta == &alpha {
                        continue;
                    }
                    let s = sys.alpha_string(&alpha, beta).unwrap();
                    assert!(s.members.len() <= 4);
                    // Unbroken: no j beyond the listed range keeps membership.
                    let below = Root::combine(1, s.members.last().unwrap(), -1, &alpha);
                    assert!(!sys.is_positive(&below.coords));
                    let above = Root::combine(1, &s.base, 1, &alpha);
                    assert!(!sys.is_positive(&above.coords));
                }
            }
        }
    }

    #[test]
    fn parabolic_examples() {
        let a2 = build_root_system('A', 2).unwrap();
        let pd = a2.parabolic_data(&[]).unwrap();
        assert_eq!(pd.complement, vec![r(&[1, 0]), r(&[0, 1]), r(&[1, 1])]);
        assert!(pd.phi_i_plus.is_empty());
        assert_eq!((pd.t, pd.s, pd.k), (3, 0, 3));

        let b2 = build_root_system('B', 2).unwrap();
        let pd = b2.parabolic_data(&[0]).unwrap();
        assert_eq!(pd.complement, vec![r(&[0, 1]), r(&[1, 1]), r(&[1, 2])]);
        assert_eq!(pd.phi_i_plus, vec![r(&[1, 0])]);

        let g2 = build_root_system('G', 2).unwrap();
        let pd = g2.parabolic_data(&[1]).unwrap();
        assert_eq!(
            pd.complement,
            vec![r(&[1, 0]), r(&[1, 1]), r(&[2, 1]), r(&[3, 1]), r(&[3, 2])]
        );

        assert!(a2.parabolic_data(&[0, 1]).is_err()); // not proper
        assert!(a2.parabolic_data(&[5]).is_err());
    }

    #[test]
    fn complements_are_closed_for_every_proper_subset() {
        for sys in all_small_systems() {
            for mask in 0..(1u32 << sys.rank) - 1 {
                let i_set: Vec<usize> =
                    (0..sys.rank).filter(|&i| mask & (1 << i) != 0).collect();
                let pd = sys.parabolic_data(&i_set).unwrap();
                assert!(sys.is_closed_subset(&pd.complement));
                assert_eq!(pd.s + pd.k, pd.t);
                // Invariant: extended strings rooted in the complement stay inside it.
                let comp: HashSet<_> = pd.complement.iter().cloned().collect();
                for &ai in &pd.i_set {
                    let alpha = sys.simple(ai).clone();
                    for beta in &pd.complement {
                        let s = sys.alpha_string(&alpha, beta).unwrap();
                        if s.isolated {
                            continue;
                        }
                        let e = sys.extended_alpha_string(&alpha, beta).unwrap();
                        for m in &e.members {
                            assert!(comp.contains(m), "{m} escaped the complement");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_subset_examples() {
        let a2 = build_root_system('A', 2).unwrap();
        assert!(a2.is_closed_subset(&[r(&[1, 0])]));
        assert!(!a2.is_closed_subset(&[r(&[1, 0]), r(&[0, 1])]));
        assert!(a2.is_closed_subset(&[r(&[1, 0]), r(&[0, 1]), r(&[1, 1])]));
    }

    #[test]
    fn alpha_order_examples() {
        let b2 = build_root_system('B', 2).unwrap();
        let pd = b2.parabolic_data(&[1]).unwrap();
        let order = b2.alpha_order(&pd, 1).unwrap();
        assert_eq!(order, vec![r(&[1, 2]), r(&[1, 1]), r(&[1, 0])]);

        let a2 = build_root_system('A', 2).unwrap();
        let pd = a2.parabolic_data(&[0]).unwrap();
        let order = a2.alpha_order(&pd, 0).unwrap();
        assert_eq!(order, vec![r(&[1, 1]), r(&[0, 1])]);
        assert!(a2.alpha_order(&pd, 1).is_err()); // alpha not in I
    }

    #[test]
    fn g2_alpha_orders_match_published_products() {
        let g2 = build_root_system('G', 2).unwrap();
        let pd1 = g2.parabolic_data(&[0]).unwrap();
        let order1 = g2.alpha_order(&pd1, 0).unwrap();
        assert_eq!(
            order1,
            vec![r(&[3, 2]), r(&[3, 1]), r(&[2, 1]), r(&[1, 1]), r(&[0, 1])]
        );
        let pd2 = g2.parabolic_data(&[1]).unwrap();
        let order2 = g2.alpha_order(&pd2, 1).unwrap();
        assert_eq!(
            order2,
            vec![r(&[3, 2]), r(&[3, 1]), r(&[2, 1]), r(&[1, 1]), r(&[1, 0])]
        );
    }

    #[test]
    fn alpha_order_with_isolated_leftovers() {
        let a3 = build_root_system('A', 3).unwrap();
        let pd = a3.parabolic_data(&[1]).unwrap();
        let order = a3.alpha_order(&pd, 1).unwrap();
        // Two two-element strings, then the isolated a1+a2+a3.
        assert_eq!(
            order,
            vec![
                r(&[1, 1, 0]),
                r(&[1, 0, 0]),
                r(&[0, 1, 1]),
                r(&[0, 0, 1]),
                r(&[1, 1, 1]),
            ]
        );
    }

    #[test]
    fn rho_equals_rho_i_on_phi_i() {
        for sys in all_small_systems() {
            for mask in 0..(1u32 << sys.rank) - 1 {
                let i_set: Vec<usize> =
                    (0..sys.rank).filter(|&i| mask & (1 << i) != 0).collect();
                let pd = sys.parabolic_data(&i_set).unwrap();
                for alpha in &pd.phi_i_plus {
                    assert_eq!(
                        sys.rho_pairing(alpha).unwrap(),
                        sys.rho_i_pairing(&pd, alpha).unwrap(),
                        "{}{} I={:?} {alpha}",
                        sys.kind,
                        sys.rank,
                        pd.i_set
                    );
                }
            }
        }
    }

    #[test]
    fn rho_i_example_b2() {
        let b2 = build_root_system('B', 2).unwrap();
        let pd = b2.parabolic_data(&[0]).unwrap();
        // Phi_I^+ = {a1}; rho_I(h_{a2}) = half of <a1, a2^v>.
        let sum = b2.pairing(&r(&[1, 0]), &r(&[0, 1]));
        assert_eq!(sum, -2);
        assert_eq!(b2.rho_i_pairing(&pd, &r(&[0, 1])).unwrap(), -1);
    }

    #[test]
    fn doc_roundtrip_and_validation() {
        let g2 = build_root_system('G', 2).unwrap();
        let doc = g2.to_doc();
        let back = RootSystem::from_doc(&doc).unwrap();
        assert_eq!(back.positive_roots, g2.positive_roots);

        let mut bad = doc.clone();
        bad.positive_roots.swap(0, 1);
        assert!(RootSystem::from_doc(&bad).is_err());
        let mut bad = doc.clone();
        bad.cartan[0][1] = -2;
        assert!(RootSystem::from_doc(&bad).is_err());
        let bad = RootSystemDoc { kind: "XY".into(), ..doc };
        assert!(RootSystem::from_doc(&bad).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(r(&[3, 2]).to_string(), "3a1+2a2");
        assert_eq!(r(&[1, 0]).to_string(), "a1");
        assert_eq!(r(&[1, 1, 1]).to_string(), "a1+a2+a3");
        assert_eq!(r(&[-1, -1]).to_string(), "-a1-a2");
    }
}
