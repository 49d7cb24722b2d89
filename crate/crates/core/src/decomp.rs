//! Basis/dependent decompositions and extended types.
//!
//! Given an ordered affine basis `B` of a set `S`, every other point `x`
//! is the sum of a unique odd subset `B_x` of `B`. Supports are stored as
//! subset masks over basis positions, so intersections `B_I` are ANDs and
//! their sizes are popcounts.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::capset::Cap;
use crate::error::{Error, Result};
use crate::gf2::{Frame, Point, PointSet};

/// Largest set handled by [`type_census`].
pub const CENSUS_LIMIT: usize = 13;

/// A point outside the basis together with its support `B_x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dependent {
    pub point: Point,
    /// Bit `i` set iff `basis[i]` is in `B_x`.
    pub support: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisDecomposition {
    set: PointSet,
    basis: Vec<Point>,
    dependents: Vec<Dependent>,
}

impl BasisDecomposition {
    pub fn set(&self) -> &PointSet {
        &self.set
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    pub fn dependents(&self) -> &[Dependent] {
        &self.dependents
    }

    pub fn supports(&self) -> Vec<u32> {
        self.dependents.iter().map(|d| d.support).collect()
    }

    pub fn support_of(&self, x: Point) -> Option<u32> {
        self.dependents.iter().find(|d| d.point == x).map(|d| d.support)
    }

    pub fn basis_position(&self, a: Point) -> Option<usize> {
        self.basis.iter().position(|&b| b == a)
    }

    /// Basis points selected by a subset mask.
    pub fn basis_subset(&self, mask: u32) -> Vec<Point> {
        (0..self.basis.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.basis[i]).collect()
    }
}

/// Decomposes a cap; see [`decompose_set`].
pub fn decompose(cap: &Cap, basis: Option<&[Point]>) -> Result<BasisDecomposition> {
    decompose_set(cap.points(), basis)
}

/// Splits `set` into an ordered basis and its dependents.
///
/// Without an explicit basis the greedy [`extract_basis`](crate::gf2::extract_basis)
/// is used. Dependents are listed in ascending mask order.
pub fn decompose_set(set: &PointSet, basis: Option<&[Point]>) -> Result<BasisDecomposition> {
    let basis = match basis {
        Some(b) => {
            if b.is_empty() {
                return Err(Error::InvalidBasis("empty"));
            }
            for (i, p) in b.iter().enumerate() {
                if !set.contains(*p) {
                    return Err(Error::InvalidBasis("not contained in the set"));
                }
                if b[..i].contains(p) {
                    return Err(Error::InvalidBasis("repeated point"));
                }
            }
            b.to_vec()
        }
        None => crate::gf2::extract_basis(set)?,
    };
    let masks: Vec<u32> = basis.iter().map(|p| p.mask()).collect();
    let frame = Frame::new(&masks).map_err(|_| Error::InvalidBasis("not affinely independent"))?;
    let mut dependents = Vec::with_capacity(set.len() - basis.len());
    for p in set.iter() {
        if basis.contains(&p) {
            continue;
        }
        let support = frame.support(p.mask()).ok_or(Error::InvalidBasis("does not span the set"))?;
        dependents.push(Dependent { point: p, support });
    }
    Ok(BasisDecomposition { set: set.clone(), basis, dependents })
}

/// `B_I`: the AND of the supports of the dependents indexed by `indices`.
pub fn support_intersection(dec: &BasisDecomposition, indices: &[usize]) -> Result<u32> {
    if indices.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut acc = u32::MAX;
    for &i in indices {
        acc &= dec.dependents.get(i).ok_or(Error::BadIndex(i))?.support;
    }
    Ok(acc)
}

/// Support sizes in non-increasing order plus pairwise intersection sizes.
///
/// Dependents with equal support sizes may be listed in any order; the
/// stored pair list is the lexicographically smallest over those orders,
/// so two values are equal exactly when the types agree up to relabelling
/// the dependents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtendedType {
    sizes: Vec<u8>,
    pair_sizes: Vec<u8>,
}

impl ExtendedType {
    pub fn from_supports(supports: &[u32]) -> Self {
        let sizes: Vec<u8> = supports.iter().map(|s| s.count_ones() as u8).collect();
        ExtendedType::canonical(&sizes, |i, j| (supports[i] & supports[j]).count_ones() as u8)
    }

    /// From sizes and pair sizes in the given (lexicographic pair) order.
    pub fn from_labelled(sizes: &[u8], pairs: &[u8]) -> Result<Self> {
        let r = sizes.len();
        if pairs.len() != r * r.saturating_sub(1) / 2 {
            return Err(Error::BadExtendedType(format!("{sizes:?} / {pairs:?}")));
        }
        let mut matrix = vec![vec![0u8; r]; r];
        for ((i, j), &v) in (0..r).tuple_combinations().zip(pairs) {
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
        Ok(ExtendedType::canonical(sizes, |i, j| matrix[i][j]))
    }

    fn canonical(sizes: &[u8], pair: impl Fn(usize, usize) -> u8) -> Self {
        let r = sizes.len();
        let mut sorted_sizes = sizes.to_vec();
        sorted_sizes.sort_unstable_by(|a, b| b.cmp(a));
        let mut best: Option<Vec<u8>> = None;
        for perm in (0..r).permutations(r) {
            if perm.windows(2).any(|w| sizes[w[0]] < sizes[w[1]]) {
                continue;
            }
            let pairs: Vec<u8> = (0..r).tuple_combinations().map(|(i, j)| pair(perm[i], perm[j])).collect();
            if best.as_ref().is_none_or(|b| pairs < *b) {
                best = Some(pairs);
            }
        }
        ExtendedType { sizes: sorted_sizes, pair_sizes: best.unwrap_or_default() }
    }

    pub fn sizes(&self) -> &[u8] {
        &self.sizes
    }

    pub fn pair_sizes(&self) -> &[u8] {
        &self.pair_sizes
    }

    /// Number of dependents.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// `|B_ij|` in the canonical order, `i < j`.
    pub fn pair(&self, i: usize, j: usize) -> u8 {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let r = self.sizes.len();
        // Offset of row i in the upper triangle.
        let idx = i * (2 * r - i - 1) / 2 + (j - i - 1);
        self.pair_sizes[idx]
    }
}

impl fmt::Display for ExtendedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sizes.is_empty() {
            return f.write_str("()");
        }
        f.write_str(&self.sizes.iter().join("-"))?;
        if self.sizes.len() >= 2 {
            write!(f, "-({})", self.pair_sizes.iter().join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExtendedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtendedType({self})")
    }
}

impl FromStr for ExtendedType {
    type Err = Error;

    /// Parses the hyphenated notation, e.g. `5-5-5-(3,3,2)`, `7` or `()`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadExtendedType(s.to_string());
        let s = s.trim();
        if s == "()" {
            return Ok(ExtendedType { sizes: vec![], pair_sizes: vec![] });
        }
        let (head, pairs) = match s.find('(') {
            Some(open) => {
                let inner = s[open..].strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
                let pairs =
                    inner.split(',').map(|t| t.trim().parse::<u8>().map_err(|_| bad())).collect::<Result<Vec<u8>>>()?;
                (s[..open].strip_suffix('-').ok_or_else(bad)?, pairs)
            }
            None => (s, vec![]),
        };
        let sizes = head.split('-').map(|t| t.trim().parse::<u8>().map_err(|_| bad())).collect::<Result<Vec<u8>>>()?;
        ExtendedType::from_labelled(&sizes, &pairs).map_err(|_| bad())
    }
}

pub fn extended_type(dec: &BasisDecomposition) -> ExtendedType {
    ExtendedType::from_supports(&dec.supports())
}

/// Swaps basis point `a` with dependent `x`, where `a ∈ B_x`.
///
/// `a` may lie in the support of at most one other dependent `y`. The new
/// basis has `x` at the position `a` held; `a` takes the slot `x` held in
/// the dependent list. Supports are recomputed from scratch and then
/// checked against the closed forms
/// `B'_a = (B_x \ {a}) ∪ {x}`, `B'_y = (B_y △ B_x) ∪ {x}` and
/// `B'_z = B_z` for every other dependent `z`.
pub fn exchange_basis(dec: &BasisDecomposition, a: Point, x: Point) -> Result<BasisDecomposition> {
    let pos = dec.basis_position(a).ok_or(Error::ExchangeHypothesisViolated("a is not a basis point"))?;
    let slot = dec
        .dependents
        .iter()
        .position(|d| d.point == x)
        .ok_or(Error::ExchangeHypothesisViolated("x is not a dependent"))?;
    let a_bit = 1u32 << pos;
    let x_support = dec.dependents[slot].support;
    if x_support & a_bit == 0 {
        return Err(Error::ExchangeHypothesisViolated("a is not in B_x"));
    }
    let partners = dec.dependents.iter().enumerate().filter(|&(i, d)| i != slot && d.support & a_bit != 0).count();
    if partners > 1 {
        return Err(Error::ExchangeHypothesisViolated("a lies in two or more other supports"));
    }

    let mut basis = dec.basis.clone();
    basis[pos] = x;
    let mut dependents = dec.dependents.clone();
    dependents[slot].point = a;
    let masks: Vec<u32> = basis.iter().map(|p| p.mask()).collect();
    let frame = Frame::new(&masks)?;
    for d in dependents.iter_mut() {
        d.support = frame.support(d.point.mask()).ok_or(Error::NotInSpan(d.point.mask()))?;
    }

    // Position `pos` now holds x, so adding x and removing a are the same bit.
    for (i, (old, new)) in dec.dependents.iter().zip(&dependents).enumerate() {
        let predicted = if i == slot {
            x_support
        } else if old.support & a_bit != 0 {
            (old.support ^ x_support) | a_bit
        } else {
            old.support
        };
        if new.support != predicted {
            return Err(Error::ExchangePrediction(new.point.mask()));
        }
    }
    Ok(BasisDecomposition { set: dec.set.clone(), basis, dependents })
}

/// Every ordered-by-mask basis of `set` drawn from its own points.
pub fn all_bases(set: &PointSet) -> Result<Vec<Vec<Point>>> {
    let dim = crate::gf2::affine_dim(set)?;
    let points = set.points();
    Ok(points
        .into_iter()
        .combinations(dim + 1)
        .filter(|c| Frame::new(&c.iter().map(|p| p.mask()).collect::<Vec<_>>()).is_ok())
        .collect())
}

/// Extended types of all bases of a cap.
pub fn type_census(cap: &Cap) -> Result<BTreeSet<ExtendedType>> {
    census_of_set(cap.points())
}

pub(crate) fn census_of_set(set: &PointSet) -> Result<BTreeSet<ExtendedType>> {
    if set.len() > CENSUS_LIMIT {
        return Err(Error::TooLarge { size: set.len(), limit: CENSUS_LIMIT });
    }
    let dim = crate::gf2::affine_dim(set)?;
    let masks = set.masks();
    let mut out = BTreeSet::new();
    for chosen in (0..masks.len()).combinations(dim + 1) {
        let basis: Vec<u32> = chosen.iter().map(|&i| masks[i]).collect();
        let Ok(frame) = Frame::new(&basis) else { continue };
        let supports: Vec<u32> = (0..masks.len())
            .filter(|i| !chosen.contains(i))
            .map(|i| frame.support(masks[i]).expect("a basis spans the set"))
            .collect();
        out.insert(ExtendedType::from_supports(&supports));
    }
    debug_assert!(out.iter().all(|t| t.len() == set.len() - dim - 1));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FRAME7: [u32; 8] = [0, 1, 2, 4, 8, 16, 32, 64];

    /// a_1 -> 0, a_i -> bit i-2.
    fn gen(idx: &[usize]) -> u32 {
        idx.iter().fold(0, |acc, &i| if i == 1 { acc } else { acc ^ (1 << (i - 2)) })
    }

    fn set_with(deps: &[u32]) -> PointSet {
        PointSet::from_masks(7, FRAME7.iter().copied().chain(deps.iter().copied())).unwrap()
    }

    fn frame_points() -> Vec<Point> {
        FRAME7.iter().map(|&m| Point::new(m, 7).unwrap()).collect()
    }

    fn ty(s: &str) -> ExtendedType {
        s.parse().unwrap()
    }

    #[test]
    fn example_five_five_three() {
        let x1 = gen(&[1, 2, 3, 4, 5]);
        let x2 = gen(&[3, 4, 5, 6, 7]);
        let dec = decompose_set(&set_with(&[x1, x2]), Some(&frame_points())).unwrap();
        assert_eq!(dec.supports(), vec![0b0001_1111, 0b0111_1100]);
        let b12 = support_intersection(&dec, &[0, 1]).unwrap();
        assert_eq!(dec.basis_subset(b12).iter().map(|p| p.mask()).collect::<Vec<_>>(), vec![2, 4, 8]);
        assert_eq!(extended_type(&dec), ty("5-5-(3)"));
        assert_eq!(extended_type(&dec).to_string(), "5-5-(3)");
    }

    #[test]
    fn default_basis_for_five_five_two() {
        let dec = decompose_set(&set_with(&[15, 124]), None).unwrap();
        assert_eq!(dec.basis().len(), 8);
        let s = dec.supports();
        assert_eq!(s.iter().map(|m| m.count_ones()).collect::<Vec<_>>(), vec![5, 5]);
        assert_eq!((s[0] & s[1]).count_ones(), 2);
    }

    #[test]
    fn independent_set_has_no_dependents() {
        let dec = decompose_set(&set_with(&[]), None).unwrap();
        assert!(dec.dependents().is_empty());
        assert_eq!(extended_type(&dec), ty("()"));
        assert!(extended_type(&dec).is_empty());
    }

    #[test]
    fn invalid_bases_are_rejected() {
        let s = set_with(&[15, 124]);
        let mut b = frame_points();
        b[7] = Point::new(3, 7).unwrap();
        assert_eq!(decompose_set(&s, Some(&b)), Err(Error::InvalidBasis("not contained in the set")));
        let b: Vec<Point> = [0, 1, 2, 4, 8, 16, 32].iter().map(|&m| Point::new(m, 7).unwrap()).collect();
        assert_eq!(decompose_set(&s, Some(&b)), Err(Error::InvalidBasis("does not span the set")));
        let b: Vec<Point> = [0, 1, 2, 4, 8, 16, 32, 64, 15].iter().map(|&m| Point::new(m, 7).unwrap()).collect();
        assert_eq!(decompose_set(&s, Some(&b)), Err(Error::InvalidBasis("not affinely independent")));
    }

    #[test]
    fn support_intersection_errors() {
        let dec = decompose_set(&set_with(&[15, 124]), None).unwrap();
        assert_eq!(support_intersection(&dec, &[2]), Err(Error::BadIndex(2)));
        assert_eq!(support_intersection(&dec, &[]), Err(Error::EmptyInput));
        assert_eq!(support_intersection(&dec, &[1]).unwrap(), dec.supports()[1]);
    }

    #[test]
    fn extended_type_parsing_and_canonical_order() {
        let t = ty("5-5-5-(3,3,2)");
        assert_eq!(t, ty("5-5-5-(2,3,3)"));
        assert_eq!(t, ty("5-5-5-(3,2,3)"));
        assert_eq!(t.to_string(), "5-5-5-(2,3,3)");
        assert_eq!(ty("7-5-5-(4,4,3)").to_string(), "7-5-5-(4,4,3)");
        assert_eq!(ty("7").to_string(), "7");
        assert_eq!(ty("5-5-5-5-(2,3,3,3,3,2)").to_string(), "5-5-5-5-(2,3,3,3,3,2)");
        assert_eq!(ty("5-5-5-5-(3,3,2,2,3,3)"), ty("5-5-5-5-(2,3,3,3,3,2)"));
        assert!("5-5-(3,3)".parse::<ExtendedType>().is_err());
        assert!("5-x".parse::<ExtendedType>().is_err());
        assert_eq!(t.pair(0, 1), 2);
        assert_eq!(t.pair(2, 1), 3);
    }

    #[test]
    fn exchange_worked_example() {
        let x = gen(&[1, 2, 3, 4, 5, 6, 7]);
        let y = gen(&[1, 2, 3, 4, 8]);
        let z = gen(&[1, 2, 5, 6, 8]);
        let dec = decompose_set(&set_with(&[x, y, z]), Some(&frame_points())).unwrap();
        assert_eq!(extended_type(&dec), ty("7-5-5-(4,4,3)"));
        let a3 = Point::new(gen(&[3]), 7).unwrap();
        let y = Point::new(y, 7).unwrap();
        let out = exchange_basis(&dec, a3, y).unwrap();
        assert_eq!(extended_type(&out), ty("5-5-5-(2,3,3)"));
        assert!(out.basis().contains(&y));
        assert_eq!(out.support_of(a3).map(|s| out.basis_subset(s).len()), Some(5));
    }

    #[test]
    fn exchange_seven_five_four_to_five_five_two() {
        let x1 = gen(&[1, 2, 3, 4, 5, 6, 7]);
        let x2 = gen(&[4, 5, 6, 7, 8]);
        let dec = decompose_set(&set_with(&[x1, x2]), Some(&frame_points())).unwrap();
        assert_eq!(extended_type(&dec), ty("7-5-(4)"));
        let a4 = Point::new(gen(&[4]), 7).unwrap();
        let out = exchange_basis(&dec, a4, Point::new(x2, 7).unwrap()).unwrap();
        assert_eq!(extended_type(&out), ty("5-5-(2)"));
        let back = exchange_basis(&out, Point::new(x2, 7).unwrap(), a4).unwrap();
        let mut b0 = dec.basis().to_vec();
        let mut b1 = back.basis().to_vec();
        b0.sort();
        b1.sort();
        assert_eq!(b0, b1);
        assert_eq!(back, dec);
    }

    #[test]
    fn exchange_hypothesis_violations() {
        let x = gen(&[1, 2, 3, 4, 5, 6, 7]);
        let y = gen(&[1, 2, 3, 4, 8]);
        let z = gen(&[1, 2, 5, 6, 8]);
        let dec = decompose_set(&set_with(&[x, y, z]), Some(&frame_points())).unwrap();
        let a1 = Point::new(0, 7).unwrap();
        // a_1 is in all three supports.
        assert!(matches!(
            exchange_basis(&dec, a1, Point::new(y, 7).unwrap()),
            Err(Error::ExchangeHypothesisViolated(_))
        ));
        let a8 = Point::new(gen(&[8]), 7).unwrap();
        assert!(matches!(
            exchange_basis(&dec, a8, Point::new(x, 7).unwrap()),
            Err(Error::ExchangeHypothesisViolated("a is not in B_x"))
        ));
        assert!(matches!(
            exchange_basis(&dec, Point::new(x, 7).unwrap(), Point::new(y, 7).unwrap()),
            Err(Error::ExchangeHypothesisViolated("a is not a basis point"))
        ));
    }

    #[test]
    fn census_of_the_two_ten_caps() {
        let c552 = Cap::from_masks(7, FRAME7.iter().copied().chain([15, 124])).unwrap();
        let census = type_census(&c552).unwrap();
        assert!(census.contains(&ty("5-5-(2)")));
        assert!(census.contains(&ty("7-5-(4)")));
        let c553 = Cap::from_masks(7, FRAME7.iter().copied().chain([15, 62])).unwrap();
        assert_eq!(type_census(&c553).unwrap(), BTreeSet::from([ty("5-5-(3)")]));
    }

    #[test]
    fn census_limit() {
        // Greedily grow a 14-cap in dimension 8.
        let mut cap = Cap::from_masks(8, [0, 1, 2, 4, 8, 16, 32, 64, 128]).unwrap();
        while cap.len() < 14 {
            let z = crate::capset::extension_candidates(&cap).masks()[0];
            cap = cap.with_mask(z).unwrap();
        }
        assert_eq!(type_census(&cap), Err(Error::TooLarge { size: 14, limit: CENSUS_LIMIT }));
    }
}
