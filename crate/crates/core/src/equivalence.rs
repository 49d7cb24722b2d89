//! Canonical forms and affine equivalence of caps.
//!
//! An affine isomorphism carries bases drawn from one cap onto bases drawn
//! from the other and preserves every support `B_x`. Conversely two caps
//! whose dependents have the same supports over some ordered internal bases
//! are equivalent through the map sending one basis onto the other. So the
//! smallest sorted list of support masks over all ordered internal bases is
//! a complete invariant.
//!
//! The minimum is computed per unordered basis. Fixing the basis fixes the
//! supports as column subsets; ordering the basis permutes columns. The
//! smallest mask list over column orders is built one mask at a time: the
//! columns are kept as an ordered partition into cells with fixed position
//! ranges, the next mask is the smallest value any unused support can take
//! (its columns packed at the bottom of each cell), and the partition is
//! then split by that support. Ties branch; prefixes larger than the best
//! list found so far are cut.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::capset::Cap;
use crate::error::{Error, Result};
use crate::gf2::{self, AffineMap, Echelon, Frame, Point, PointSet};

/// Largest cap accepted by the canonical-form search.
pub const CANONICAL_LIMIT: usize = 14;

/// Complete affine-equivalence invariant of a cap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    /// Affine dimension of the cap.
    pub dim: usize,
    pub size: usize,
    /// Sorted support masks; bit `i` is basis position `i`.
    pub dep_masks: Vec<u32>,
}

impl CanonicalForm {
    /// The cap realizing this form over the frame `0, e_1, ..., e_dim` of `Z_2^n`.
    pub fn representative(&self, n: usize) -> Result<Cap> {
        if n < self.dim {
            return Err(Error::DimensionMismatch { map: n, set: self.dim });
        }
        let frame = std::iter::once(0).chain((0..self.dim).map(|i| 1 << i));
        Cap::from_masks(n, frame.chain(self.dep_masks.iter().map(|m| m >> 1)))
    }
}

struct Best {
    masks: Vec<u32>,
    basis: Vec<u32>,
}

struct Search<'a> {
    basis: &'a [u32],
    rows: &'a [u32],
    best: &'a mut Option<Best>,
}

#[inline]
fn packed_value(cells: &[u32], row: u32) -> u32 {
    let mut value = 0;
    let mut offset = 0;
    for &cell in cells {
        let k = (row & cell).count_ones();
        value |= ((1u32 << k) - 1) << offset;
        offset += cell.count_ones();
    }
    value
}

fn refine(cells: &[u32], row: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(cells.len() * 2);
    for &cell in cells {
        for part in [cell & row, cell & !row] {
            if part != 0 {
                out.push(part);
            }
        }
    }
    out
}

impl Search<'_> {
    fn descend(&mut self, cells: &[u32], used: u32, prefix: &mut Vec<u32>) {
        let depth = prefix.len();
        if depth == self.rows.len() {
            if self.best.as_ref().is_none_or(|b| prefix[..] < b.masks[..]) {
                let basis = cells
                    .iter()
                    .flat_map(|&cell| (0..32).filter(move |c| cell >> c & 1 == 1))
                    .map(|c| self.basis[c as usize])
                    .collect();
                *self.best = Some(Best { masks: prefix.clone(), basis });
            }
            return;
        }
        let mut min = u32::MAX;
        let mut ties: Vec<usize> = Vec::new();
        for (r, &row) in self.rows.iter().enumerate() {
            if used >> r & 1 == 1 {
                continue;
            }
            let v = packed_value(cells, row);
            if v < min {
                min = v;
                ties.clear();
            }
            if v == min {
                ties.push(r);
            }
        }
        prefix.push(min);
        let worse = self.best.as_ref().is_some_and(|b| prefix[..] > b.masks[..=depth]);
        if !worse {
            for r in ties {
                let refined = refine(cells, self.rows[r]);
                self.descend(&refined, used | 1 << r, prefix);
            }
        }
        prefix.pop();
    }
}

/// Canonical form together with an ordered basis that realizes it.
pub fn canonical_form_with_basis(cap: &Cap) -> Result<(CanonicalForm, Vec<Point>)> {
    canonical_search(cap.points())
}

pub(crate) fn canonical_search(set: &PointSet) -> Result<(CanonicalForm, Vec<Point>)> {
    if set.len() > CANONICAL_LIMIT {
        return Err(Error::TooLarge { size: set.len(), limit: CANONICAL_LIMIT });
    }
    let dim = gf2::affine_dim(set)?;
    let masks = set.masks();
    let mut best = None;
    for chosen in (0..masks.len()).combinations(dim + 1) {
        let basis: Vec<u32> = chosen.iter().map(|&i| masks[i]).collect();
        let Ok(frame) = Frame::new(&basis) else { continue };
        let rows: Vec<u32> = (0..masks.len())
            .filter(|i| !chosen.contains(i))
            .map(|i| frame.support(masks[i]).expect("a basis spans the set"))
            .collect();
        let all = ((1u64 << basis.len()) - 1) as u32;
        let mut search = Search { basis: &basis, rows: &rows, best: &mut best };
        search.descend(&[all], 0, &mut Vec::with_capacity(rows.len()));
    }
    let best = best.expect("every non-empty set has a basis");
    let form = CanonicalForm { dim, size: set.len(), dep_masks: best.masks };
    let basis = best.basis.iter().map(|&m| Point::new(m, set.n()).expect("member")).collect();
    Ok((form, basis))
}

pub fn canonical_form(cap: &Cap) -> Result<CanonicalForm> {
    Ok(canonical_search(cap.points())?.0)
}

pub fn are_equivalent(a: &Cap, b: &Cap) -> Result<bool> {
    let fa = canonical_form(a)?;
    let fb = canonical_form(b)?;
    Ok(a.len() == b.len() && a.dim() == b.dim() && fa == fb)
}

/// Columns of a linear map sending `from[i]` to `to[i]`, after completing
/// both independent lists to bases of `Z_2^n` with unit vectors.
fn complete_to_basis(vectors: &[u32], n: usize) -> Vec<u32> {
    let mut ech = Echelon::new();
    let mut out = Vec::with_capacity(n);
    for &v in vectors {
        let fresh = ech.insert(v, 0);
        debug_assert!(fresh);
        out.push(v);
    }
    for j in 0..n {
        if out.len() == n {
            break;
        }
        if ech.insert(1 << j, 0) {
            out.push(1 << j);
        }
    }
    out
}

/// Affine map sending the ordered basis `from` onto `to`, extended
/// linearly after translating by the first points.
pub(crate) fn map_between_bases(from: &[Point], to: &[Point], n: usize) -> Result<AffineMap> {
    let diffs = |b: &[Point]| b[1..].iter().map(|p| p.mask() ^ b[0].mask()).collect::<Vec<_>>();
    let src = AffineMap::from_columns(&complete_to_basis(&diffs(from), n), 0)?;
    let dst = AffineMap::from_columns(&complete_to_basis(&diffs(to), n), 0)?;
    let linear = dst.compose(&src.inverse().ok_or(Error::DependentBasis)?)?;
    let t = to[0].mask() ^ linear.apply_mask(from[0].mask());
    AffineMap::new(linear.rows().to_vec(), t)
}

/// An invertible affine map carrying `a` onto `b`, if the caps are equivalent.
pub fn find_isomorphism(a: &Cap, b: &Cap) -> Result<Option<AffineMap>> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { map: a.n(), set: b.n() });
    }
    let (fa, basis_a) = canonical_search(a.points())?;
    let (fb, basis_b) = canonical_search(b.points())?;
    if fa != fb || a.len() != b.len() {
        return Ok(None);
    }
    let map = map_between_bases(&basis_a, &basis_b, a.n())?;
    debug_assert!(verify_map(&map, a, b));
    Ok(Some(map))
}

/// `map` is invertible and `map(a) = b` as sets.
pub fn verify_map(map: &AffineMap, a: &Cap, b: &Cap) -> bool {
    map.n() == a.n()
        && map.n() == b.n()
        && map.is_invertible()
        && gf2::apply_affine_map(map, a.points()).is_ok_and(|img| img == *b.points())
}
