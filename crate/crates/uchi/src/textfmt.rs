//! Panic-free parsers for the textual input formats of the command line.

use std::collections::HashMap;

use crate::err::{Error, Result};
use crate::gf::{FiniteField, Fq};
use crate::roots::{Root, RootSystem};

/// "A2" -> ('A', 2). Letter then decimal rank; structural bounds are the
/// root-system builder's job.
pub fn parse_type(s: &str) -> Result<(char, usize)> {
    let s = s.trim();
    let mut chars = s.chars();
    let kind = chars
        .next()
        .ok_or_else(|| Error::config("empty type"))?
        .to_ascii_uppercase();
    if !kind.is_ascii_uppercase() {
        return Err(Error::config(format!("type must start with a letter: {s:?}")));
    }
    let rest = chars.as_str();
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::config(format!("type needs a decimal rank: {s:?}")));
    }
    if rest.len() > 3 {
        return Err(Error::config(format!("rank out of range: {s:?}")));
    }
    let rank: usize = rest.parse().map_err(|_| Error::config(format!("bad rank in {s:?}")))?;
    Ok((kind, rank))
}

/// Comma-separated simple-root names ("a1,a3" or bare "1,3"), case
/// insensitive, empty for the empty set; 1-based names map to 0-based
/// indices, sorted and deduplicated.
pub fn parse_simple_set(s: &str, rank: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let digits = tok.strip_prefix('a').or_else(|| tok.strip_prefix('A')).unwrap_or(tok);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 3 {
            return Err(Error::config(format!("bad simple-root name {tok:?}")));
        }
        let n: usize =
            digits.parse().map_err(|_| Error::config(format!("bad simple-root name {tok:?}")))?;
        if n == 0 || n > rank {
            return Err(Error::config(format!(
                "simple root {tok:?} outside 1..={rank}"
            )));
        }
        out.push(n - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// A field element as dot-separated polynomial-basis coordinates, little
/// endian: "2" is the scalar 2, "1.2" is 1 + 2x.
pub fn parse_field_elem(s: &str, field: &FiniteField) -> Result<Fq> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::config("empty field element"));
    }
    let mut digits = Vec::new();
    for part in s.split('.') {
        if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) || part.len() > 9 {
            return Err(Error::config(format!("bad field coordinate {part:?} in {s:?}")));
        }
        let d: u32 =
            part.parse().map_err(|_| Error::config(format!("bad field coordinate {part:?}")))?;
        digits.push(d);
    }
    field.from_digits(&digits)
}

/// Comma-separated field elements of a fixed count.
pub fn parse_scalar_list(s: &str, field: &FiniteField, expect: usize) -> Result<Vec<Fq>> {
    let s = s.trim();
    let parts: Vec<&str> = if s.is_empty() { Vec::new() } else { s.split(',').collect() };
    if parts.len() != expect {
        return Err(Error::config(format!(
            "expected {expect} comma-separated values, got {}",
            parts.len()
        )));
    }
    parts.iter().map(|p| parse_field_elem(p, field)).collect()
}

/// A positive root by its display name: "a1", "a1+a2", "2a1+a2".
pub fn parse_root(s: &str, sys: &RootSystem) -> Result<Root> {
    let s = s.trim();
    let mut coords = vec![0i32; sys.rank];
    if s.is_empty() {
        return Err(Error::config("empty root"));
    }
    for term in s.split('+') {
        let term = term.trim();
        let (coeff_str, rest) = match term.find(['a', 'A']) {
            Some(pos) => term.split_at(pos),
            None => return Err(Error::config(format!("bad root term {term:?} in {s:?}"))),
        };
        let coeff: i32 = if coeff_str.is_empty() {
            1
        } else if coeff_str.bytes().all(|b| b.is_ascii_digit()) && coeff_str.len() <= 2 {
            coeff_str.parse().map_err(|_| Error::config(format!("bad coefficient {coeff_str:?}")))?
        } else {
            return Err(Error::config(format!("bad coefficient {coeff_str:?} in {s:?}")));
        };
        let digits = &rest[1..];
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 3 {
            return Err(Error::config(format!("bad root term {term:?} in {s:?}")));
        }
        let n: usize =
            digits.parse().map_err(|_| Error::config(format!("bad root term {term:?}")))?;
        if n == 0 || n > sys.rank {
            return Err(Error::config(format!("simple root a{n} outside 1..={}", sys.rank)));
        }
        coords[n - 1] = coords[n - 1]
            .checked_add(coeff)
            .ok_or_else(|| Error::config(format!("coefficient overflow in {s:?}")))?;
    }
    let root = Root::new(coords);
    if sys.root_index(&root).is_none() {
        return Err(Error::config(format!("{root} is not a positive root of this system")));
    }
    Ok(root)
}

/// Comma-separated "root:value" pairs, e.g. "a1:1,a1+a2:0.2", mapping
/// positive-root indices to field elements. Empty input means no values.
pub fn parse_chi_f(
    s: &str,
    sys: &RootSystem,
    field: &FiniteField,
) -> Result<HashMap<usize, Fq>> {
    let mut out = HashMap::new();
    let s = s.trim();
    if s.is_empty() {
        return Ok(out);
    }
    for entry in s.split(',') {
        let entry = entry.trim();
        let (root_str, val_str) = entry
            .split_once(':')
            .ok_or_else(|| Error::config(format!("chi-f entry {entry:?} needs root:value")))?;
        let root = parse_root(root_str, sys)?;
        let idx = sys.root_index(&root).expect("parse_root returned a positive root");
        let val = parse_field_elem(val_str, field)?;
        if out.insert(idx, val).is_some() {
            return Err(Error::config(format!("duplicate chi-f root {root}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::build_root_system;

    #[test]
    fn types() {
        assert_eq!(parse_type("A2").unwrap(), ('A', 2));
        assert_eq!(parse_type(" g2 ").unwrap(), ('G', 2));
        assert_eq!(parse_type("D10").unwrap(), ('D', 10));
        assert!(parse_type("").is_err());
        assert!(parse_type("2A").is_err());
        assert!(parse_type("A").is_err());
        assert!(parse_type("A-1").is_err());
        assert!(parse_type("A99999999999999999999").is_err());
    }

    #[test]
    fn simple_sets() {
        assert_eq!(parse_simple_set("", 3).unwrap(), Vec::<usize>::new());
        assert_eq!(parse_simple_set("a1,a3", 3).unwrap(), vec![0, 2]);
        assert_eq!(parse_simple_set("3,1,1", 3).unwrap(), vec![0, 2]);
        assert!(parse_simple_set("a0", 3).is_err());
        assert!(parse_simple_set("a4", 3).is_err());
        assert!(parse_simple_set("x", 3).is_err());
    }

    #[test]
    fn field_elems() {
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(parse_field_elem("2", &f3).unwrap(), 2);
        assert!(parse_field_elem("3", &f3).is_err());
        assert!(parse_field_elem("1.1", &f3).is_err()); // too many coordinates
        let f9 = FiniteField::new(3, 2).unwrap();
        assert_eq!(parse_field_elem("1.2", &f9).unwrap(), 7);
        assert_eq!(parse_field_elem("0.1", &f9).unwrap(), 3);
        assert!(parse_field_elem("", &f9).is_err());
        assert!(parse_field_elem(".", &f9).is_err());
        assert!(parse_field_elem("1.2.0", &f9).is_err());
        assert!(parse_field_elem("-1", &f9).is_err());
    }

    #[test]
    fn scalar_lists() {
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(parse_scalar_list("2,2", &f3, 2).unwrap(), vec![2, 2]);
        assert!(parse_scalar_list("2", &f3, 2).is_err());
        assert!(parse_scalar_list("", &f3, 1).is_err());
        assert_eq!(parse_scalar_list("", &f3, 0).unwrap(), Vec::<Fq>::new());
    }

    #[test]
    fn roots() {
        let b2 = build_root_system('B', 2).unwrap();
        assert_eq!(parse_root("a1", &b2).unwrap(), Root::new(vec![1, 0]));
        assert_eq!(parse_root("a1+a2", &b2).unwrap(), Root::new(vec![1, 1]));
        assert_eq!(parse_root("a1+2a2", &b2).unwrap(), Root::new(vec![1, 2]));
        assert_eq!(parse_root("a2+a2+a1", &b2).unwrap(), Root::new(vec![1, 2]));
        assert!(parse_root("2a1+a2", &b2).is_err()); // not a root of B2
        assert!(parse_root("a3", &b2).is_err());
        assert!(parse_root("", &b2).is_err());
        assert!(parse_root("+", &b2).is_err());
        assert!(parse_root("1", &b2).is_err());
    }

    #[test]
    fn chi_f_maps() {
        let a2 = build_root_system('A', 2).unwrap();
        let f3 = FiniteField::new(3, 1).unwrap();
        let m = parse_chi_f("a1:1,a1+a2:2", &a2, &f3).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[&0], 1);
        let idx = a2.root_index(&Root::new(vec![1, 1])).unwrap();
        assert_eq!(m[&idx], 2);
        assert_eq!(parse_chi_f("  ", &a2, &f3).unwrap().len(), 0);
        assert!(parse_chi_f("a1", &a2, &f3).is_err());
        assert!(parse_chi_f("a1:1,a1:2", &a2, &f3).is_err());
        assert!(parse_chi_f("a9:1", &a2, &f3).is_err());
    }

    #[test]
    fn round_trips_render() {
        // Parsing the renderer's output gives back the element.
        let f9 = FiniteField::new(3, 2).unwrap();
        for a in f9.elements() {
            assert_eq!(parse_field_elem(&f9.render(a), &f9).unwrap(), a);
        }
        let g2 = build_root_system('G', 2).unwrap();
        for alpha in &g2.positive_roots {
            assert_eq!(&parse_root(&alpha.to_string(), &g2).unwrap(), alpha);
        }
    }
}
