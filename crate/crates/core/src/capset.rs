//! Quads, caps, and the first quad closure.
//!
//! A quad is four distinct points with zero sum; a cap is a quad-free set.
//!
//! The cap test used here is the Sidon form: `S` is a cap iff the XORs of
//! its unordered pairs of distinct points are pairwise distinct. If
//! `a ^ b == c ^ d` for two different pairs, the pairs cannot share a point
//! (`a ^ b == a ^ d` forces `b == d`), so `{a, b, c, d}` are four distinct
//! points summing to zero. Conversely a quad `{a, b, c, d}` gives the
//! repeated pair sum `a ^ b == c ^ d`. The O(k⁴) definition is kept as
//! [`is_cap_by_quads`] and both are cross-checked in the tests.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{self, Point, PointSet};

/// A quad-free point set with its affine dimension cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cap {
    points: PointSet,
    dim: usize,
}

impl Cap {
    /// Validates `points` eagerly; a quad is reported as [`Error::NotACap`].
    pub fn new(points: PointSet) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(q) = find_quad(&points) {
            return Err(Error::NotACap(q.map(|p| p.mask())));
        }
        let dim = gf2::affine_dim(&points)?;
        Ok(Cap { points, dim })
    }

    pub fn from_masks<I: IntoIterator<Item = u32>>(n: usize, masks: I) -> Result<Self> {
        Cap::new(PointSet::from_masks(n, masks)?)
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn masks(&self) -> &[u32] {
        self.points.masks()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.points.n()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `self ∪ {mask}`, re-validated.
    pub fn with_mask(&self, mask: u32) -> Result<Cap> {
        Cap::new(self.points.with_mask(mask)?)
    }

    pub fn into_points(self) -> PointSet {
        self.points
    }
}

impl fmt::Debug for Cap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cap(n={}, dim={}, {:?})", self.n(), self.dim, self.points)
    }
}

pub fn is_quad(a: Point, b: Point, c: Point, d: Point) -> Result<bool> {
    let n = a.n();
    for p in [b, c, d] {
        if p.n() != n {
            return Err(Error::MixedDimension(n, p.n()));
        }
    }
    let [a, b, c, d] = [a, b, c, d].map(|p| p.mask());
    let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
    Ok(distinct && a ^ b ^ c ^ d == 0)
}

pub fn is_cap(set: &PointSet) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::EmptyInput);
    }
    let masks = set.masks();
    let mut seen = vec![0u64; (1usize << set.n()).div_ceil(64)];
    for (i, &a) in masks.iter().enumerate() {
        for &b in &masks[i + 1..] {
            let s = (a ^ b) as usize;
            let bit = 1u64 << (s % 64);
            if seen[s / 64] & bit != 0 {
                return Ok(false);
            }
            seen[s / 64] |= bit;
        }
    }
    Ok(true)
}

/// Some quad inside `set`, if there is one.
pub fn find_quad(set: &PointSet) -> Option<[Point; 4]> {
    let masks = set.masks();
    // Pair sum -> (i, j) + 1, zero meaning unseen.
    let mut first = vec![0u32; 1usize << set.n()];
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate().skip(i + 1) {
            let s = (a ^ b) as usize;
            if first[s] != 0 {
                let k = ((first[s] - 1) >> 16) as usize;
                let l = ((first[s] - 1) & 0xffff) as usize;
                let mut q = [masks[k], masks[l], a, b];
                q.sort_unstable();
                return Some(q.map(|m| set.iter().find(|p| p.mask() == m).expect("member")));
            }
            first[s] = ((i as u32) << 16 | j as u32) + 1;
        }
    }
    None
}

/// Reference cap test straight from the definition: no four distinct
/// members sum to zero. O(k⁴); used as a test oracle.
pub fn is_cap_by_quads(set: &PointSet) -> bool {
    let m = set.masks();
    let k = m.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let abc = m[a] ^ m[b] ^ m[c];
                if m[c + 1..].contains(&abc) {
                    return false;
                }
            }
        }
    }
    true
}

/// `S` together with every sum of three distinct members of `S`.
pub fn quad_closure_1(set: &PointSet) -> Result<PointSet> {
    if set.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = set.clone();
    let m = set.masks();
    for a in 0..m.len() {
        for b in a + 1..m.len() {
            let ab = m[a] ^ m[b];
            for &c in &m[b + 1..] {
                out.insert_mask(ab ^ c)?;
            }
        }
    }
    Ok(out)
}

pub fn is_complete(cap: &Cap) -> bool {
    extension_candidates(cap).is_empty()
}

/// Points of `aff(C)` outside `qc_1(C)`: exactly the points `z` of the span
/// for which `C ∪ {z}` is still a cap.
pub fn extension_candidates(cap: &Cap) -> PointSet {
    let span = gf2::affine_span(cap.points()).expect("caps are non-empty");
    let closure = quad_closure_1(cap.points()).expect("caps are non-empty");
    span.difference(&closure)
}
