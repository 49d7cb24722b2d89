//! Orderly generation of caps by size, and the structural checks run over
//! the dimension-7 classes.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::capset::{extension_candidates, is_complete, Cap};
use crate::decomp::{census_of_set, ExtendedType, CENSUS_LIMIT};
use crate::equivalence::{canonical_form, CanonicalForm, CANONICAL_LIMIT};
use crate::error::{Error, Result};
use crate::gf2::{Frame, MAX_DIM};

/// Largest dimension accepted by [`classify`].
pub const CLASSIFY_MAX_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    /// The cap realizing `form` over the standard frame.
    pub rep: Cap,
    pub form: CanonicalForm,
    /// Extended types of all bases; `None` above [`CENSUS_LIMIT`].
    pub census: Option<BTreeSet<ExtendedType>>,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTable {
    pub dim: usize,
    /// Size → classes sorted by canonical form. The last row may be empty,
    /// which records that the search closed.
    pub rows: BTreeMap<usize, Vec<ClassEntry>>,
}

impl ClassTable {
    pub fn counts(&self) -> BTreeMap<usize, usize> {
        self.rows.iter().map(|(&k, v)| (k, v.len())).collect()
    }

    pub fn row(&self, size: usize) -> &[ClassEntry] {
        self.rows.get(&size).map_or(&[], |v| v.as_slice())
    }

    pub fn entries(&self) -> impl Iterator<Item = &ClassEntry> {
        self.rows.values().flatten()
    }

    /// Largest size with at least one class.
    pub fn max_size(&self) -> Option<usize> {
        self.rows.iter().rev().find(|(_, v)| !v.is_empty()).map(|(&k, _)| k)
    }
}

fn entry(form: CanonicalForm, n: usize) -> Result<ClassEntry> {
    let rep = form.representative(n)?;
    let census = if rep.len() <= CENSUS_LIMIT { Some(census_of_set(rep.points())?) } else { None };
    let complete = is_complete(&rep);
    Ok(ClassEntry { rep, form, census, complete })
}

/// All classes of full-dimensional caps in `Z_2^dim` up to `max_size` points.
///
/// Starts from the frame `{0, e_1, ..., e_dim}` and extends every
/// representative by every admissible point, keeping one cap per canonical
/// form. Stops after `max_size` or after the first empty size.
pub fn classify(dim: usize, max_size: usize) -> Result<ClassTable> {
    if dim > CLASSIFY_MAX_DIM {
        return Err(Error::Overflow(dim));
    }
    if dim == 0 {
        return Err(Error::BadDimension(0));
    }
    if max_size > CANONICAL_LIMIT {
        return Err(Error::TooLarge { size: max_size, limit: CANONICAL_LIMIT });
    }
    let mut table = ClassTable { dim, rows: BTreeMap::new() };
    if max_size < dim + 1 {
        return Ok(table);
    }
    let seed = Cap::from_masks(dim, std::iter::once(0).chain((0..dim).map(|i| 1 << i)))?;
    table.rows.insert(dim + 1, vec![entry(canonical_form(&seed)?, dim)?]);
    for size in dim + 2..=max_size {
        let children: Vec<Vec<CanonicalForm>> = table.rows[&(size - 1)]
            .par_iter()
            .map(|e| {
                extension_candidates(&e.rep)
                    .masks()
                    .iter()
                    .map(|&z| canonical_form(&e.rep.with_mask(z)?))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let forms: BTreeSet<CanonicalForm> = children.into_iter().flatten().collect();
        let next: Vec<ClassEntry> =
            forms.into_iter().collect::<Vec<_>>().into_par_iter().map(|f| entry(f, dim)).collect::<Result<_>>()?;
        let closed = next.is_empty();
        table.rows.insert(size, next);
        if closed {
            break;
        }
    }
    Ok(table)
}

/// Largest cap size in `Z_2^dim`, from `classify(dim, 14)`.
pub fn max_cap_size(dim: usize) -> Result<usize> {
    let table = classify(dim, CANONICAL_LIMIT)?;
    if !table.row(CANONICAL_LIMIT).is_empty() {
        return Err(Error::Truncated(CANONICAL_LIMIT));
    }
    Ok(table.max_size().expect("the seed row is non-empty"))
}

/// `(2^{n/2} / √2, 1 + √2 · 2^{n/2})`.
pub fn tait_won_bounds(n: u32) -> (f64, f64) {
    let h = 2f64.powf(n as f64 / 2.0);
    (h / std::f64::consts::SQRT_2, 1.0 + std::f64::consts::SQRT_2 * h)
}

/// A basis of a dimension-7 cap whose supports break one of the
/// structural lemmas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaViolation {
    pub lemma: &'static str,
    pub basis: Vec<u32>,
    pub supports: Vec<u32>,
}

fn check_supports(s: &[u32], mut report: impl FnMut(&'static str)) {
    let size = |i: usize| s[i].count_ones();
    let pair = |i: usize, j: usize| (s[i] & s[j]).count_ones();
    if s.iter().any(|b| !matches!(b.count_ones(), 5 | 7)) {
        report("support-size");
    }
    if s.iter().filter(|b| b.count_ones() == 7).count() > 1 {
        report("at-most-one-7");
    }
    for (i, j) in (0..s.len()).tuple_combinations() {
        match (size(i), size(j), pair(i, j)) {
            (5, 5, 2 | 3) | (7, 5, 4) | (5, 7, 4) => {}
            _ => report("pair-sizes"),
        }
    }
    for (i, j, k) in (0..s.len()).tuple_combinations() {
        if (s[i] | s[j] | s[k]).count_ones() != 8 {
            report("triple-union");
        }
        let mut pairs = [pair(i, j), pair(i, k), pair(j, k)];
        pairs.sort_unstable();
        match (size(i), size(j), size(k)) {
            (5, 5, 5) => {
                let sum: u32 = pairs.iter().sum();
                if (s[i] & s[j] & s[k]).count_ones() + 7 != sum {
                    report("triple-intersection");
                }
                if pairs[1] == 2 {
                    report("forbidden-triples");
                }
            }
            (7, 5, 5) | (5, 7, 5) | (5, 5, 7) if pairs != [3, 4, 4] => report("type-7-5-5"),
            _ => {}
        }
    }
    for q in (0..s.len()).combinations(4) {
        if q.iter().any(|&i| size(i) != 5) {
            continue;
        }
        let twos: Vec<(usize, usize)> =
            q.iter().copied().tuple_combinations().filter(|&(i, j)| pair(i, j) == 2).collect();
        let all = q.iter().fold(u32::MAX, |acc, &i| acc & s[i]).count_ones();
        match twos.as_slice() {
            [] => report("forbidden-quadruples"),
            [_] if all != 1 => report("quadruple-intersection"),
            [(a, b), (c, d)] if a == c || a == d || b == c || b == d => report("disjoint-pairs"),
            [_, _] if all != 0 => report("quadruple-intersection"),
            [_] | [_, _] => {}
            _ => report("disjoint-pairs"),
        }
    }
}

/// Every basis of a dimension-7 cap checked against the support lemmas:
/// sizes 5 or 7 with at most one 7; pair sizes 2 or 3 for 5-5 and 4 for
/// 7-5; triple unions of size 8; `|B_ijk| = Σ|B_ij| - 7` and at most one
/// 2-pair for 5-5-5; `(4,4,3)` for 7-5-5; and for 5-5-5-5 one or two
/// 2-pairs, disjoint, with `|B_1234|` equal to 1 or 0 respectively.
pub fn lemma_violations(cap: &Cap) -> Result<Vec<LemmaViolation>> {
    if cap.dim() != 7 {
        return Err(Error::WrongDimension { expected: 7, found: cap.dim() });
    }
    let masks = cap.masks();
    let mut out = Vec::new();
    for chosen in (0..masks.len()).combinations(8) {
        let basis: Vec<u32> = chosen.iter().map(|&i| masks[i]).collect();
        let Ok(frame) = Frame::new(&basis) else { continue };
        let supports: Vec<u32> = (0..masks.len())
            .filter(|i| !chosen.contains(i))
            .map(|i| frame.support(masks[i]).expect("a basis spans the cap"))
            .collect();
        check_supports(&supports, |lemma| {
            out.push(LemmaViolation { lemma, basis: basis.clone(), supports: supports.clone() })
        });
    }
    Ok(out)
}

/// Inclusion-exclusion on a hypothetical 13-cap of dimension 7.
///
/// Such a cap would have a 5-5-5-5-5 basis whose pair sizes are 2 on two
/// disjoint pairs and 3 elsewhere. The lemmas then fix every `|B_ijk|` and
/// `|B_ijkl|`, and the union of the supports is the whole basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThirteenCapCount {
    pub two_pairs: [(usize, usize); 2],
    pub singles: u32,
    pub pairs: u32,
    pub triples: u32,
    pub quadruples: u32,
    pub union: u32,
    /// `|B_12345|` from inclusion-exclusion.
    pub derived: i64,
    /// `|B_12345|` bounded by `|B_1234| = 0`.
    pub forced: i64,
}

/// One count per choice of the two disjoint 2-pairs among five dependents.
pub fn thirteen_cap_inclusion_exclusion() -> Vec<ThirteenCapCount> {
    let all_pairs: Vec<(usize, usize)> = (0..5).tuple_combinations().collect();
    let mut out = Vec::new();
    for (p, q) in all_pairs.iter().copied().tuple_combinations() {
        if p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1 {
            continue;
        }
        let pair = |i: usize, j: usize| if (i, j) == p || (i, j) == q { 2 } else { 3 };
        let triples = (0..5).tuple_combinations().map(|(i, j, k)| pair(i, j) + pair(i, k) + pair(j, k) - 7).sum();
        let quadruples = (0..5)
            .combinations(4)
            .map(|c| {
                let twos = c.iter().copied().tuple_combinations().filter(|&(i, j)| pair(i, j) == 2).count();
                if twos == 1 {
                    1
                } else {
                    0
                }
            })
            .sum();
        let singles = 25;
        let pairs = all_pairs.iter().map(|&(i, j)| pair(i, j)).sum();
        let union = 8;
        let derived = union as i64 - singles as i64 + pairs as i64 - triples as i64 + quadruples as i64;
        out.push(ThirteenCapCount {
            two_pairs: [p, q],
            singles,
            pairs,
            triples,
            quadruples,
            union,
            derived,
            forced: 0,
        });
    }
    out
}

const _: () = assert!(CLASSIFY_MAX_DIM <= MAX_DIM);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::are_equivalent;

    #[test]
    fn small_dimensions() {
        let t = classify(3, 6).unwrap();
        assert_eq!(t.counts(), BTreeMap::from([(4, 1), (5, 0)]));
        assert_eq!(max_cap_size(3).unwrap(), 4);
        assert_eq!(max_cap_size(2).unwrap(), 3);
        assert_eq!(max_cap_size(1).unwrap(), 2);
        let t = classify(5, 5).unwrap();
        assert!(t.rows.is_empty());
    }

    #[test]
    fn dimension_six() {
        let t = classify(6, 10).unwrap();
        assert_eq!(t.counts(), BTreeMap::from([(7, 1), (8, 2), (9, 1), (10, 0)]));
        assert_eq!(max_cap_size(6).unwrap(), 9);
    }

    #[test]
    fn representatives_are_distinct_caps() {
        let t = classify(5, 10).unwrap();
        for row in t.rows.values() {
            for e in row {
                assert_eq!(e.rep.dim(), 5);
                assert_eq!(canonical_form(&e.rep).unwrap(), e.form);
            }
            for (a, b) in row.iter().tuple_combinations() {
                assert!(!are_equivalent(&a.rep, &b.rep).unwrap());
                assert!(a.form < b.form);
            }
        }
    }

    #[test]
    fn limits() {
        assert_eq!(classify(9, 10), Err(Error::Overflow(9)));
        assert_eq!(classify(7, 15), Err(Error::TooLarge { size: 15, limit: 14 }));
        assert_eq!(max_cap_size(9), Err(Error::Overflow(9)));
    }

    #[test]
    fn bounds() {
        let (lo, hi) = tait_won_bounds(7);
        assert!((lo - 8.0).abs() < 1e-9 && (hi - 17.0).abs() < 1e-9);
        let (lo, hi) = tait_won_bounds(6);
        assert!((lo - 5.656854249).abs() < 1e-8 && (hi - 12.313708499).abs() < 1e-8);
    }

    #[test]
    fn lemma_checker_flags_bad_supports() {
        let mut seen = Vec::new();
        check_supports(&[0b0001_1111, 0b0011_1110], |l| seen.push(l));
        assert_eq!(seen, vec!["pair-sizes"]);
        seen.clear();
        check_supports(&[0b0111_1111, 0b1111_1110], |l| seen.push(l));
        assert!(seen.contains(&"at-most-one-7"));
        seen.clear();
        // 5-5-5-5 with all pair sizes 3.
        let t = crate::templates::instantiate(crate::templates::TemplateId::T12_5555_233333);
        assert!(lemma_violations(&t).unwrap().is_empty());
        let small = Cap::from_masks(7, [0, 1, 2, 4]).unwrap();
        assert_eq!(lemma_violations(&small), Err(Error::WrongDimension { expected: 7, found: 3 }));
    }

    #[test]
    fn thirteen_cap_contradiction() {
        let counts = thirteen_cap_inclusion_exclusion();
        assert_eq!(counts.len(), 15);
        for c in counts {
            assert_eq!((c.singles, c.pairs, c.triples, c.quadruples), (25, 28, 14, 4));
            assert_eq!(c.derived, 1);
            assert_ne!(c.derived, c.forced);
        }
    }
}
