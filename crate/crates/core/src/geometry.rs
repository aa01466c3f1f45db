//! Projective spaces PG(n, Q) over a [`FieldHandle`].
//!
//! Points and hyperplanes are normalized coordinate vectors whose first
//! non-zero entry is 1. Both are index-addressable: the canonical order is
//! lexicographic on element codes (zero first, then by exponent), which puts
//! `(0,..,0,1)` at index 0 and the `(1,*,..,*)` block last. Hyperplane `#i`
//! has the dual coordinates of point `#i`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldDescription, FieldElem, FieldHandle};

/// A normalized point of PG(n, Q).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(Box<[FieldElem]>);

impl ProjPoint {
    pub fn coords(&self) -> &[FieldElem] {
        &self.0
    }

    /// Number of non-zero coordinates.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|c| !c.is_zero()).count()
    }

    pub(crate) fn from_normalized(v: Vec<FieldElem>) -> Self {
        debug_assert!(v.iter().find(|c| !c.is_zero()) == Some(&FieldElem::ONE));
        ProjPoint(v.into_boxed_slice())
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// A hyperplane, given by normalized dual coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane(Box<[FieldElem]>);

impl Hyperplane {
    pub fn dual(&self) -> &[FieldElem] {
        &self.0
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Hyperplane {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// PG(dim, Q) where Q is the order of `field`.
#[derive(Clone)]
pub struct ProjSpace {
    field: Arc<FieldHandle>,
    dim: usize,
    num_points: u64,
}

impl fmt::Debug for ProjSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PG({}, {})", self.dim, self.field.order())
    }
}

impl ProjSpace {
    pub fn new(field: Arc<FieldHandle>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Unsupported("projective dimension must be at least 1".into()));
        }
        let q = field.order() as u128;
        let total = q
            .checked_pow(dim as u32 + 1)
            .map(|v| (v - 1) / (q - 1))
            .filter(|&v| v <= u64::MAX as u128)
            .ok_or_else(|| Error::Unsupported(format!("PG({dim}, {q}) is too large to index")))?;
        Ok(ProjSpace {
            field,
            dim,
            num_points: total as u64,
        })
    }

    pub fn field(&self) -> &Arc<FieldHandle> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length of coordinate vectors, `dim + 1`.
    pub fn coord_len(&self) -> usize {
        self.dim + 1
    }

    /// Number of points (equivalently, of hyperplanes).
    pub fn num_points(&self) -> u64 {
        self.num_points
    }

    pub fn num_hyperplanes(&self) -> u64 {
        self.num_points
    }

    fn check_len(&self, v: &[FieldElem]) -> Result<()> {
        if v.len() != self.coord_len() {
            return Err(Error::DimensionMismatch {
                expected: self.coord_len(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Scales `v` so its first non-zero entry is 1. Returns `false` for the
    /// zero vector.
    #[inline]
    pub fn normalize_in_place(&self, v: &mut [FieldElem]) -> bool {
        let Some(lead) = v.iter().find_map(|c| c.exponent()) else {
            return false;
        };
        if lead != 0 {
            let shift = self.field.group_order() - lead;
            for c in v.iter_mut() {
                *c = self.field.mul_exp(*c, shift);
            }
        }
        true
    }

    pub fn normalize(&self, v: &[FieldElem]) -> Result<ProjPoint> {
        self.check_len(v)?;
        for &c in v {
            self.field.validate(c)?;
        }
        let mut v = v.to_vec();
        if !self.normalize_in_place(&mut v) {
            return Err(Error::ZeroVector);
        }
        Ok(ProjPoint(v.into_boxed_slice()))
    }

    pub fn hyperplane(&self, dual: &[FieldElem]) -> Result<Hyperplane> {
        self.normalize(dual).map(|p| Hyperplane(p.0))
    }

    /// Canonical index of a normalized coordinate vector.
    #[inline]
    pub fn index_of_coords(&self, v: &[FieldElem]) -> u64 {
        let q = self.field.order() as u64;
        let lead = v.iter().position(|c| !c.is_zero()).expect("non-zero vector");
        let tail_len = (v.len() - 1 - lead) as u32;
        let base = (q.pow(tail_len) - 1) / (q - 1);
        let tail = v[lead + 1..]
            .iter()
            .fold(0u64, |acc, c| acc * q + c.code() as u64);
        base + tail
    }

    pub fn index_of(&self, p: &ProjPoint) -> u64 {
        self.index_of_coords(&p.0)
    }

    pub fn hyperplane_index(&self, h: &Hyperplane) -> u64 {
        self.index_of_coords(&h.0)
    }

    /// Writes the normalized coordinates of point `#index` into `out`.
    pub fn coords_at(&self, index: u64, out: &mut [FieldElem]) {
        debug_assert!(index < self.num_points);
        let q = self.field.order() as u64;
        let len = out.len();
        // block with tail length t holds q^t points starting at (q^t - 1)/(q - 1)
        let mut t = 0u32;
        let mut block = 1u64;
        let mut start = 0u64;
        while index >= start + block {
            start += block;
            block *= q;
            t += 1;
        }
        let lead = len - 1 - t as usize;
        out[..lead].fill(FieldElem::ZERO);
        out[lead] = FieldElem::ONE;
        let mut tail = index - start;
        for slot in out[lead + 1..].iter_mut().rev() {
            *slot = FieldElem::from_code((tail % q) as u32);
            tail /= q;
        }
    }

    pub fn point_at(&self, index: u64) -> ProjPoint {
        let mut v = vec![FieldElem::ZERO; self.coord_len()];
        self.coords_at(index, &mut v);
        ProjPoint(v.into_boxed_slice())
    }

    pub fn hyperplane_at(&self, index: u64) -> Hyperplane {
        Hyperplane(self.point_at(index).0)
    }

    /// All points in canonical order.
    pub fn points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.num_points).map(move |i| self.point_at(i))
    }

    pub fn hyperplanes(&self) -> impl Iterator<Item = Hyperplane> + '_ {
        (0..self.num_points).map(move |i| self.hyperplane_at(i))
    }

    #[inline]
    pub fn dot(&self, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
        let f = &self.field;
        a.iter()
            .zip(b)
            .fold(FieldElem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
    }

    pub fn incidence(&self, p: &ProjPoint, h: &Hyperplane) -> Result<bool> {
        self.check_len(&p.0)?;
        self.check_len(&h.0)?;
        Ok(self.dot(&p.0, &h.0).is_zero())
    }

    /// Rank of the coordinate matrix of `points`; 0 for an empty slice.
    pub fn rank<'a>(&self, points: impl IntoIterator<Item = &'a ProjPoint>) -> usize {
        let mut acc = RankAccumulator::new(&self.field, self.coord_len());
        for p in points {
            acc.push(&p.0);
        }
        acc.rank()
    }

    /// The Q + 1 points of the line through two distinct points, starting
    /// with `a`.
    pub fn line_through(&self, a: &ProjPoint, b: &ProjPoint) -> Vec<ProjPoint> {
        let f = &self.field;
        let mut out = vec![a.clone()];
        for t in f.elements() {
            let mut v: Vec<FieldElem> =
                a.0.iter().zip(b.0.iter()).map(|(&x, &y)| f.add(f.mul(t, x), y)).collect();
            let nonzero = self.normalize_in_place(&mut v);
            debug_assert!(nonzero, "points must be distinct");
            out.push(ProjPoint(v.into_boxed_slice()));
        }
        out
    }

    /// Every line through `p`, each as its Q + 1 points with `p` first.
    ///
    /// Lines are parametrized by the points `y` of the coordinate hyperplane
    /// `X_j = 0`, where `j` is the leading position of `p`.
    pub fn lines_through_point<'a>(&'a self, p: &'a ProjPoint) -> impl Iterator<Item = Vec<ProjPoint>> + 'a {
        let lead = p.0.iter().position(|c| !c.is_zero()).expect("normalized point");
        let sub = ProjSpace::new(self.field.clone(), self.dim.max(2) - 1).ok();
        let count = if self.dim == 1 { 1 } else { sub.as_ref().unwrap().num_points() };
        (0..count).map(move |i| {
            let mut y = vec![FieldElem::ZERO; self.coord_len()];
            if self.dim == 1 {
                y[1 - lead] = FieldElem::ONE;
            } else {
                let mut s = vec![FieldElem::ZERO; self.dim];
                sub.as_ref().unwrap().coords_at(i, &mut s);
                let mut it = s.into_iter();
                for (pos, slot) in y.iter_mut().enumerate() {
                    if pos != lead {
                        *slot = it.next().unwrap();
                    }
                }
            }
            self.line_through(p, &ProjPoint(y.into_boxed_slice()))
        })
    }

    /// Calls `visit` with the index of every hyperplane containing the point
    /// with normalized coordinates `p`.
    ///
    /// Hyperplanes through `p` are `h` with `h_i = c_i` for `i != j` and
    /// `h_j = -sum c_i p_i`, where `j` is the leading position of `p` and `c`
    /// ranges over the points of PG(dim - 1, Q).
    pub fn for_each_hyperplane_through(&self, p: &[FieldElem], mut visit: impl FnMut(u64)) {
        let f = &self.field;
        let len = self.coord_len();
        let lead = p.iter().position(|c| !c.is_zero()).expect("normalized point");
        let mut c = vec![FieldElem::ZERO; len - 1];
        let mut h = vec![FieldElem::ZERO; len];
        for_each_normalized(f.order(), &mut c, |c| {
            let mut s = FieldElem::ZERO;
            let mut k = 0;
            for (pos, slot) in h.iter_mut().enumerate() {
                if pos != lead {
                    *slot = c[k];
                    s = f.add(s, f.mul(c[k], p[pos]));
                    k += 1;
                }
            }
            h[lead] = f.neg(s);
            self.normalize_in_place(&mut h);
            visit(self.index_of_coords(&h));
        });
    }
}

/// Visits every normalized vector of length `buf.len()` over a field of
/// order `q` in canonical order, reusing `buf`.
pub fn for_each_normalized(q: u32, buf: &mut [FieldElem], mut visit: impl FnMut(&[FieldElem])) {
    let len = buf.len();
    for lead in (0..len).rev() {
        buf[..lead].fill(FieldElem::ZERO);
        buf[lead] = FieldElem::ONE;
        buf[lead + 1..].fill(FieldElem::ZERO);
        'odometer: loop {
            visit(buf);
            for pos in (lead + 1..len).rev() {
                let next = buf[pos].code() + 1;
                if next < q {
                    buf[pos] = FieldElem::from_code(next);
                    continue 'odometer;
                }
                buf[pos] = FieldElem::ZERO;
            }
            break;
        }
    }
}

/// Incremental row-echelon basis for rank computations.
pub struct RankAccumulator<'a> {
    field: &'a FieldHandle,
    len: usize,
    rows: Vec<(usize, Vec<FieldElem>)>,
}

impl<'a> RankAccumulator<'a> {
    pub fn new(field: &'a FieldHandle, len: usize) -> Self {
        RankAccumulator {
            field,
            len,
            rows: Vec::with_capacity(len),
        }
    }

    /// Adds a vector; returns whether the rank grew.
    pub fn push(&mut self, v: &[FieldElem]) -> bool {
        if self.rows.len() == self.len {
            return false;
        }
        let f = self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, r));
            }
        }
        let Some(pivot) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = f.inv(v[pivot]).unwrap();
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push((pivot, v));
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Provenance labels attached to the points of a [`PointSet`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    /// What the tags mean, e.g. `"coset"` or `"weight"`.
    pub kind: String,
    /// One tag per point, in point order.
    pub tags: Vec<u32>,
}

/// An ordered, duplicate-free set of points of one space.
#[derive(Clone, Debug)]
pub struct PointSet {
    space: ProjSpace,
    points: Vec<ProjPoint>,
    position: HashMap<ProjPoint, usize>,
    labels: Option<Labels>,
}

impl PointSet {
    pub fn new(space: ProjSpace) -> Self {
        PointSet {
            space,
            points: Vec::new(),
            position: HashMap::new(),
            labels: None,
        }
    }

    /// Builds a set from points, dropping repeats (first occurrence wins).
    pub fn from_points(space: ProjSpace, points: impl IntoIterator<Item = ProjPoint>) -> Self {
        let mut s = PointSet::new(space);
        for p in points {
            s.insert(p);
        }
        s
    }

    pub fn with_label_kind(space: ProjSpace, kind: &str) -> Self {
        let mut s = PointSet::new(space);
        s.labels = Some(Labels {
            kind: kind.to_string(),
            tags: Vec::new(),
        });
        s
    }

    /// Inserts an unlabelled point. Returns `false` if already present.
    pub fn insert(&mut self, p: ProjPoint) -> bool {
        self.insert_tagged(p, 0)
    }

    /// Inserts a point with a provenance tag (ignored when the set carries
    /// no labels).
    pub fn insert_tagged(&mut self, p: ProjPoint, tag: u32) -> bool {
        debug_assert_eq!(p.0.len(), self.space.coord_len());
        if self.position.contains_key(&p) {
            return false;
        }
        self.position.insert(p.clone(), self.points.len());
        self.points.push(p);
        if let Some(l) = self.labels.as_mut() {
            l.tags.push(tag);
        }
        true
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.position.contains_key(p)
    }

    pub fn position(&self, p: &ProjPoint) -> Option<usize> {
        self.position.get(p).copied()
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn tag(&self, i: usize) -> Option<u32> {
        self.labels.as_ref().map(|l| l.tags[i])
    }

    pub fn rank(&self) -> usize {
        self.space.rank(&self.points)
    }

    /// Points of the set lying on `h`, in set order.
    pub fn meet(&self, h: &Hyperplane) -> Vec<&ProjPoint> {
        self.points
            .iter()
            .filter(|p| self.space.dot(&p.0, &h.0).is_zero())
            .collect()
    }

    pub fn to_json(&self) -> PointSetJson {
        PointSetJson {
            field: self.space.field.describe(),
            n: self.space.dim,
            points: self.points.iter().map(|p| p.0.to_vec()).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(j: &PointSetJson) -> Result<Self> {
        let field = Arc::new(FieldHandle::from_description(&j.field)?);
        Self::from_json_in(ProjSpace::new(field, j.n)?, j)
    }

    /// Reads the points of `j` into an existing space with the same field.
    pub fn from_json_in(space: ProjSpace, j: &PointSetJson) -> Result<Self> {
        if space.field.describe() != j.field || space.dim != j.n {
            return Err(Error::Parse("point set field or dimension does not match".into()));
        }
        let mut s = PointSet::new(space);
        if let Some(l) = &j.labels {
            if l.tags.len() != j.points.len() {
                return Err(Error::Parse("label count differs from point count".into()));
            }
            s.labels = Some(Labels {
                kind: l.kind.clone(),
                tags: Vec::new(),
            });
        }
        for (i, v) in j.points.iter().enumerate() {
            let p = s.space.normalize(v)?;
            let tag = j.labels.as_ref().map_or(0, |l| l.tags[i]);
            s.insert_tagged(p, tag);
        }
        Ok(s)
    }
}

/// On-disk form of a [`PointSet`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetJson {
    pub field: FieldDescription,
    pub n: usize,
    pub points: Vec<Vec<FieldElem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Labels>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(p: u32, m: u32, n: usize) -> ProjSpace {
        ProjSpace::new(Arc::new(FieldHandle::new(p, m, None).unwrap()), n).unwrap()
    }

    fn pt(s: &ProjSpace, v: &[u32]) -> ProjPoint {
        let v: Vec<FieldElem> = v.iter().map(|&c| FieldElem::from_code(c)).collect();
        s.normalize(&v).unwrap()
    }

    #[test]
    fn point_counts() {
        assert_eq!(space(2, 3, 3).num_points(), 585);
        assert_eq!(space(2, 6, 1).num_points(), 65);
        assert_eq!(space(2, 12, 2).num_points(), 16_781_313);
    }

    #[test]
    fn enumeration_is_canonical_and_indexable() {
        let s = space(3, 1, 3);
        let pts: Vec<ProjPoint> = s.points().collect();
        assert_eq!(pts.len(), 40);
        assert!(pts.windows(2).all(|w| w[0] < w[1]), "lexicographic order");
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(s.index_of(p), i as u64);
        }
        let mut buf = vec![FieldElem::ZERO; 4];
        let mut walked = Vec::new();
        for_each_normalized(3, &mut buf, |v| walked.push(v.to_vec()));
        let expected: Vec<Vec<FieldElem>> = pts.iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(walked, expected);
    }

    #[test]
    fn incidence_examples() {
        let s = space(2, 3, 3);
        let p = pt(&s, &[1, 0, 0, 0]);
        let h = s.hyperplane(&p.coords()[..].iter().rev().copied().collect::<Vec<_>>()).unwrap();
        assert!(s.incidence(&p, &h).unwrap());
        let h = s.hyperplane(&[FieldElem::ZERO, FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO]).unwrap();
        assert!(s.incidence(&p, &h).unwrap());
        let h = Hyperplane(p.0.clone());
        assert!(!s.incidence(&p, &h).unwrap());
        let other = space(2, 3, 2);
        let q = pt(&other, &[1, 0, 0]);
        assert!(matches!(s.incidence(&q, &h), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn normalize_rejects_zero_vector() {
        let s = space(2, 2, 2);
        assert!(matches!(s.normalize(&[FieldElem::ZERO; 3]), Err(Error::ZeroVector)));
    }

    #[test]
    fn rank_examples() {
        let s = space(2, 3, 3);
        let a = pt(&s, &[1, 0, 0, 0]);
        let b = pt(&s, &[0, 1, 0, 0]);
        let c = pt(&s, &[0, 0, 1, 0]);
        assert_eq!(s.rank([&a, &b, &c]), 3);
        assert_eq!(s.rank([&a, &a]), 1);
        assert_eq!(s.rank(std::iter::empty()), 0);
    }

    #[test]
    fn lines_in_pg2_4() {
        let s = space(2, 2, 2);
        for p in s.points() {
            let lines: Vec<Vec<ProjPoint>> = s.lines_through_point(&p).collect();
            assert_eq!(lines.len(), 5);
            let mut covered = std::collections::HashSet::new();
            for (i, l) in lines.iter().enumerate() {
                assert_eq!(l.len(), 5);
                assert_eq!(l.iter().collect::<std::collections::HashSet<_>>().len(), 5);
                for (j, m) in lines.iter().enumerate().skip(i + 1) {
                    let common: Vec<_> = l.iter().filter(|x| m.contains(x)).collect();
                    assert_eq!(common, vec![&p], "lines {i} and {j}");
                }
                covered.extend(l.iter().cloned());
            }
            assert_eq!(covered.len() as u64, s.num_points());
        }
    }

    #[test]
    fn hyperplanes_through_point_match_incidence() {
        for (p, m, n) in [(2, 2, 2), (3, 1, 3), (2, 1, 1), (2, 2, 3)] {
            let s = space(p, m, n);
            for pt in s.points() {
                let mut through = Vec::new();
                s.for_each_hyperplane_through(pt.coords(), |h| through.push(h));
                through.sort_unstable();
                let expected: Vec<u64> = (0..s.num_hyperplanes())
                    .filter(|&i| s.incidence(&pt, &s.hyperplane_at(i)).unwrap())
                    .collect();
                assert_eq!(through, expected);
            }
        }
    }

    #[test]
    fn point_set_dedupes_and_round_trips() {
        let s = space(2, 3, 3);
        let a = pt(&s, &[1, 2, 0, 0]);
        let b = s.normalize(&[FieldElem::from_code(3), FieldElem::from_code(4), FieldElem::ZERO, FieldElem::ZERO]).unwrap();
        assert_eq!(a, b);
        let mut set = PointSet::with_label_kind(s.clone(), "coset");
        assert!(set.insert_tagged(a.clone(), 7));
        assert!(!set.insert_tagged(b, 8));
        assert!(set.insert_tagged(pt(&s, &[0, 0, 1, 5]), 2));
        assert_eq!(set.len(), 2);
        let json = serde_json::to_string(&set.to_json()).unwrap();
        let back = PointSet::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.points(), set.points());
        assert_eq!(back.labels(), set.labels());
    }
}
