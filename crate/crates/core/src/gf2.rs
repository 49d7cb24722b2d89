//! Points of AG(n,2) as bit vectors.
//!
//! A point of `Z_2^n` is an `n`-bit mask: bit `j-1` holds coordinate `j`.
//! Addition is XOR. Over GF(2) the only affine combinations are sums of an
//! odd number of points, so every affine question here is reduced to a
//! linear one by translating with a fixed base point (the smallest basis
//! element) and running Gaussian elimination on the translated masks.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 16;

fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::BadDimension(n))
    }
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    ((1u64 << n) - 1) as u32
}

/// A point of `Z_2^n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    mask: u32,
    n: u8,
}

impl Point {
    pub fn new(mask: u32, n: usize) -> Result<Self> {
        check_dim(n)?;
        if mask > full_mask(n) {
            return Err(Error::MaskOutOfRange { mask, n });
        }
        Ok(Point { mask, n: n as u8 })
    }

    /// The origin of `Z_2^n`.
    pub fn zero(n: usize) -> Result<Self> {
        Point::new(0, n)
    }

    /// The unit vector `e_i` (bit `i`, zero-based).
    pub fn unit(i: usize, n: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::MaskOutOfRange { mask: 1 << i.min(31), n });
        }
        Point::new(1 << i, n)
    }

    #[inline]
    pub fn mask(self) -> u32 {
        self.mask
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n as usize
    }

    /// Sum of two points; fails when the ambient dimensions differ.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Point) -> Result<Point> {
        if self.n != other.n {
            return Err(Error::MixedDimension(self.n(), other.n()));
        }
        Ok(Point { mask: self.mask ^ other.mask, n: self.n })
    }

    #[inline]
    pub(crate) fn from_raw(mask: u32, n: usize) -> Self {
        debug_assert!(n <= MAX_DIM && mask <= full_mask(n));
        Point { mask, n: n as u8 }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.mask, width = self.n())
    }
}

/// A set of distinct points sharing one ambient dimension.
///
/// Members are kept as sorted masks next to a `2^n`-bit occupancy vector,
/// so membership is a single bit probe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: usize,
    masks: Vec<u32>,
    occupancy: Vec<u64>,
}

impl PointSet {
    pub fn empty(n: usize) -> Result<Self> {
        check_dim(n)?;
        let words = (1usize << n).div_ceil(64);
        Ok(PointSet { n, masks: Vec::new(), occupancy: vec![0; words] })
    }

    /// Builds a set from raw masks, rejecting duplicates and out-of-range masks.
    pub fn from_masks<I: IntoIterator<Item = u32>>(n: usize, masks: I) -> Result<Self> {
        let mut set = PointSet::empty(n)?;
        for m in masks {
            if !set.insert_mask(m)? {
                return Err(Error::DuplicatePoint(m));
            }
        }
        Ok(set)
    }

    pub fn from_points(points: &[Point]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let mut set = PointSet::empty(first.n())?;
        for p in points {
            if !set.insert(*p)? {
                return Err(Error::DuplicatePoint(p.mask()));
            }
        }
        Ok(set)
    }

    /// The whole space `Z_2^n`.
    pub fn full(n: usize) -> Result<Self> {
        check_dim(n)?;
        PointSet::from_masks(n, 0..=full_mask(n))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Member masks in ascending order.
    #[inline]
    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.masks.iter().map(move |&m| Point::from_raw(m, self.n))
    }

    pub fn points(&self) -> Vec<Point> {
        self.iter().collect()
    }

    #[inline]
    pub fn contains_mask(&self, mask: u32) -> bool {
        let m = mask as usize;
        m < (1 << self.n) && (self.occupancy[m / 64] >> (m % 64)) & 1 == 1
    }

    pub fn contains(&self, p: Point) -> bool {
        p.n() == self.n && self.contains_mask(p.mask())
    }

    /// Inserts a mask; returns `false` if it was already present.
    pub fn insert_mask(&mut self, mask: u32) -> Result<bool> {
        if mask > full_mask(self.n) {
            return Err(Error::MaskOutOfRange { mask, n: self.n });
        }
        if self.contains_mask(mask) {
            return Ok(false);
        }
        let m = mask as usize;
        self.occupancy[m / 64] |= 1 << (m % 64);
        let at = self.masks.partition_point(|&x| x < mask);
        self.masks.insert(at, mask);
        Ok(true)
    }

    pub fn insert(&mut self, p: Point) -> Result<bool> {
        if p.n() != self.n {
            return Err(Error::MixedDimension(self.n, p.n()));
        }
        self.insert_mask(p.mask())
    }

    /// A copy of `self` with one more point.
    pub fn with_mask(&self, mask: u32) -> Result<Self> {
        let mut out = self.clone();
        if !out.insert_mask(mask)? {
            return Err(Error::DuplicatePoint(mask));
        }
        Ok(out)
    }

    /// Points of `self` that are not in `other`.
    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut out = PointSet::empty(self.n).expect("dimension already validated");
        for &m in &self.masks {
            if !other.contains_mask(m) {
                out.insert_mask(m).expect("mask in range");
            }
        }
        out
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.n == other.n && self.masks.iter().all(|&m| other.contains_mask(m))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.masks.iter()).finish()
    }
}

/// `n` characters, the first being coordinate 1 (bit 0).
pub fn bit_string(mask: u32, n: usize) -> String {
    (0..n).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// Inverse of [`bit_string`]; the length gives the dimension.
pub fn parse_bit_string(s: &str) -> Option<(u32, usize)> {
    let n = s.len();
    if n == 0 || n > MAX_DIM {
        return None;
    }
    s.bytes()
        .enumerate()
        .try_fold(0u32, |acc, (i, b)| match b {
            b'0' => Some(acc),
            b'1' => Some(acc | 1 << i),
            _ => None,
        })
        .map(|m| (m, n))
}

/// Row-echelon accumulator for GF(2) vectors.
///
/// Each stored row carries a tag mask recording which inserted vectors were
/// combined into it. Pivots are the lowest set bit of each row.
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon {
    rows: Vec<(u32, u32)>,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Echelon { rows: Vec::with_capacity(MAX_DIM) }
    }

    #[inline]
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v`, returning the residual and the tag combination used.
    #[inline]
    pub(crate) fn reduce(&self, mut v: u32) -> (u32, u32) {
        let mut tag = 0;
        for &(row, row_tag) in &self.rows {
            let pivot = row & row.wrapping_neg();
            if v & pivot != 0 {
                v ^= row;
                tag ^= row_tag;
            }
        }
        (v, tag)
    }

    /// Inserts `v` with the given tag; returns `false` if `v` was dependent.
    #[inline]
    pub(crate) fn insert(&mut self, v: u32, tag: u32) -> bool {
        let (r, t) = self.reduce(v);
        if r == 0 {
            return false;
        }
        self.rows.push((r, t ^ tag));
        true
    }
}

fn shared_dim(points: &[Point]) -> Result<usize> {
    let n = points.first().ok_or(Error::EmptyInput)?.n();
    for p in points {
        if p.n() != n {
            return Err(Error::MixedDimension(n, p.n()));
        }
    }
    Ok(n)
}

/// XOR of all points. An odd number of summands gives an affine combination.
pub fn xor_sum(points: &[Point]) -> Result<Point> {
    let n = shared_dim(points)?;
    let mask = points.iter().fold(0, |acc, p| acc ^ p.mask());
    Ok(Point::from_raw(mask, n))
}

/// Linear echelon of `{s ^ t}` for the smallest member `t`.
fn translated_echelon(set: &PointSet) -> Result<(u32, Echelon)> {
    let base = *set.masks().first().ok_or(Error::EmptyInput)?;
    let mut ech = Echelon::new();
    for &m in &set.masks()[1..] {
        ech.insert(m ^ base, 0);
        if ech.rank() == set.n() {
            break;
        }
    }
    Ok((base, ech))
}

/// The flat spanned by `set`: the smallest superset closed under odd sums.
pub fn affine_span(set: &PointSet) -> Result<PointSet> {
    let (base, ech) = translated_echelon(set)?;
    let mut masks = vec![base];
    for &(row, _) in &ech.rows {
        let doubled: Vec<u32> = masks.iter().map(|m| m ^ row).collect();
        masks.extend(doubled);
    }
    PointSet::from_masks(set.n(), masks)
}

pub fn affine_dim(set: &PointSet) -> Result<usize> {
    Ok(translated_echelon(set)?.1.rank())
}

pub fn is_affinely_independent(set: &PointSet) -> Result<bool> {
    Ok(affine_dim(set)? + 1 == set.len())
}

/// Greedy basis: scans members in ascending mask order and keeps every
/// point that raises the affine rank.
pub fn extract_basis(set: &PointSet) -> Result<Vec<Point>> {
    let base = *set.masks().first().ok_or(Error::EmptyInput)?;
    let mut ech = Echelon::new();
    let mut basis = vec![Point::from_raw(base, set.n())];
    for &m in &set.masks()[1..] {
        if ech.insert(m ^ base, 0) {
            basis.push(Point::from_raw(m, set.n()));
        }
    }
    Ok(basis)
}

/// Precomputed elimination for repeated coordinate queries against one basis.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    base: u32,
    ech: Echelon,
}

impl Frame {
    pub(crate) fn new(basis_masks: &[u32]) -> Result<Self> {
        let base = *basis_masks.first().ok_or(Error::EmptyInput)?;
        let mut ech = Echelon::new();
        for (i, &m) in basis_masks.iter().enumerate().skip(1) {
            if !ech.insert(m ^ base, 1 << i) {
                return Err(Error::DependentBasis);
            }
        }
        Ok(Frame { base, ech })
    }

    /// Odd support of `x` over the basis, as a subset mask.
    #[inline]
    pub(crate) fn support(&self, x: u32) -> Option<u32> {
        let (residual, tag) = self.ech.reduce(x ^ self.base);
        if residual != 0 {
            return None;
        }
        Some(if tag.count_ones() % 2 == 0 { tag | 1 } else { tag })
    }
}

/// The unique odd subset of `basis` summing to `x`, as a subset mask
/// (bit `i` selects `basis[i]`).
pub fn coordinates(basis: &[Point], x: Point) -> Result<u32> {
    let n = shared_dim(basis)?;
    if x.n() != n {
        return Err(Error::MixedDimension(n, x.n()));
    }
    let masks: Vec<u32> = basis.iter().map(|p| p.mask()).collect();
    let frame = Frame::new(&masks)?;
    frame.support(x.mask()).ok_or(Error::NotInSpan(x.mask()))
}

/// An affine map `x ↦ L·x + b` on `Z_2^n`.
///
/// `rows[i]` is row `i` of `L`; bit `j` of the row is the entry `L[i][j]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    n: usize,
    rows: Vec<u32>,
    translation: u32,
}

impl AffineMap {
    pub fn new(rows: Vec<u32>, translation: u32) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        for &r in rows.iter().chain(std::iter::once(&translation)) {
            if r > full_mask(n) {
                return Err(Error::MaskOutOfRange { mask: r, n });
            }
        }
        Ok(AffineMap { n, rows, translation })
    }

    pub fn identity(n: usize) -> Result<Self> {
        AffineMap::new((0..n).map(|i| 1 << i).collect(), 0)
    }

    pub fn translation_by(n: usize, v: u32) -> Result<Self> {
        AffineMap::new((0..n).map(|i| 1 << i).collect(), v)
    }

    /// Builds `L` from its columns: `cols[j] = L·e_j`.
    pub fn from_columns(cols: &[u32], translation: u32) -> Result<Self> {
        let n = cols.len();
        let rows =
            (0..n).map(|i| cols.iter().enumerate().fold(0, |acc, (j, &c)| acc | (((c >> i) & 1) << j))).collect();
        AffineMap::new(rows, translation)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn translation(&self) -> u32 {
        self.translation
    }

    #[inline]
    pub fn apply_mask(&self, x: u32) -> u32 {
        let mut y = self.translation;
        for (i, &r) in self.rows.iter().enumerate() {
            y ^= ((r & x).count_ones() & 1) << i;
        }
        y
    }

    pub fn apply(&self, p: Point) -> Result<Point> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch { map: self.n, set: p.n() });
        }
        Ok(Point::from_raw(self.apply_mask(p.mask()), self.n))
    }

    pub fn is_invertible(&self) -> bool {
        let mut ech = Echelon::new();
        self.rows.iter().all(|&r| ech.insert(r, 0))
    }

    /// Gauss-Jordan inverse; `None` when `L` is singular.
    pub fn inverse(&self) -> Option<AffineMap> {
        let n = self.n;
        // Augmented rows: L in the low 32 bits, identity above.
        let mut aug: Vec<u64> = self.rows.iter().enumerate().map(|(i, &r)| r as u64 | (1u64 << (32 + i))).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| (aug[r] >> col) & 1 == 1)?;
            aug.swap(col, pivot);
            for r in 0..n {
                if r != col && (aug[r] >> col) & 1 == 1 {
                    aug[r] ^= aug[col];
                }
            }
        }
        let rows: Vec<u32> = aug.iter().map(|&a| (a >> 32) as u32).collect();
        let linear = AffineMap { n, rows, translation: 0 };
        let translation = linear.apply_mask(self.translation);
        Some(AffineMap { translation, ..linear })
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { map: self.n, set: other.n });
        }
        let lin = |x: u32| self.apply_mask(x) ^ self.translation;
        let cols: Vec<u32> = (0..self.n).map(|j| lin(other.apply_mask(1 << j) ^ other.translation)).collect();
        AffineMap::from_columns(&cols, self.apply_mask(other.translation))
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.n;
        let rows: Vec<String> = self.rows.iter().map(|r| format!("{r:0w$b}")).collect();
        write!(f, "AffineMap {{ rows: {rows:?}, b: {:0w$b} }}", self.translation)
    }
}

/// Image of `set` under `map`. Collisions collapse, so the size is kept
/// exactly when the map is injective on `set`.
pub fn apply_affine_map(map: &AffineMap, set: &PointSet) -> Result<PointSet> {
    if map.n() != set.n() {
        return Err(Error::DimensionMismatch { map: map.n(), set: set.n() });
    }
    let mut out = PointSet::empty(set.n())?;
    for &m in set.masks() {
        out.insert_mask(map.apply_mask(m))?;
    }
    Ok(out)
}

/// A uniformly random invertible affine map, reproducible from `seed`.
///
/// Uses ChaCha8 seeded through `seed_from_u64`; rows of `L` are drawn in
/// order and redrawn until independent of the rows before them, then the
/// translation is drawn.
pub fn random_invertible_affine(n: usize, seed: u64) -> Result<AffineMap> {
    check_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = full_mask(n);
    let mut ech = Echelon::new();
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let r = rng.gen::<u32>() & mask;
        if ech.insert(r, 0) {
            rows.push(r);
        }
    }
    let translation = rng.gen::<u32>() & mask;
    AffineMap::new(rows, translation)
}
