//! The subgroup R* = GF(q^(k-1))* . GF(q^k)* of GF(q^(k(k-1)))*, its cosets as
//! GF(q)-subgeometries of PG(k-1, q^(k-1)), and the point set B(k, q) of
//! PG(k-2, q^(k(k-1))) with all coordinates in R = R* + {0}.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{poly, CoordinateMap, FieldElem, FieldHandle};
use crate::geometry::{for_each_normalized, PointSet, ProjPoint, ProjSpace};

/// R* as an exponent stride in the ambient field GF(q^(k(k-1))).
#[derive(Debug, Clone)]
pub struct RGroup {
    q: u64,
    k: u32,
    p: u32,
    h: u32,
    ambient: Arc<FieldHandle>,
    r: u32,
    stride: u32,
}

impl RGroup {
    /// Builds the ambient field with its default modulus and the group R*.
    pub fn build(q: u64, k: u32) -> Result<Self> {
        let (p, _, m) = Self::ambient_params(q, k)?;
        let ambient = Arc::new(FieldHandle::new(p, m, None)?);
        Self::with_field(q, k, ambient)
    }

    /// `(p, h, m)` with `q = p^h` and ambient degree `m = h k (k-1)`.
    pub fn ambient_params(q: u64, k: u32) -> Result<(u32, u32, u32)> {
        let (p, h) = poly::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if k < 3 {
            return Err(Error::Unsupported(format!("k = {k}; the construction needs k >= 3")));
        }
        let m = h
            .checked_mul(k * (k - 1))
            .ok_or_else(|| Error::Unsupported("ambient degree overflows".into()))?;
        let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        if order > crate::field::DEFAULT_FIELD_CAP as u128 {
            return Err(Error::FieldTooLarge {
                order,
                cap: crate::field::DEFAULT_FIELD_CAP,
            });
        }
        Ok((p as u32, h, m))
    }

    /// Uses an already built ambient field (any primitive modulus).
    pub fn with_field(q: u64, k: u32, ambient: Arc<FieldHandle>) -> Result<Self> {
        let (p, h, m) = Self::ambient_params(q, k)?;
        if ambient.p() != p || ambient.m() != m {
            return Err(Error::Unsupported(format!(
                "ambient field must be GF({p}^{m}), got GF({}^{})",
                ambient.p(),
                ambient.m()
            )));
        }
        let qq = q as u128;
        let r = (qq.pow(k - 1) - 1) * (qq.pow(k) - 1) / (qq - 1);
        let n = ambient.group_order() as u128;
        if n % r != 0 {
            return Err(Error::Unsupported(format!("|R*| = {r} does not divide {n}")));
        }
        let stride = (n / r) as u32;
        Ok(RGroup {
            q,
            k,
            p,
            h,
            ambient,
            r: r as u32,
            stride,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn ambient(&self) -> &Arc<FieldHandle> {
        &self.ambient
    }

    /// |R*|.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Number of cosets of R*, and the exponent stride of R*.
    pub fn stride(&self) -> u32 {
        self.stride
    }

    #[inline]
    pub fn contains(&self, x: FieldElem) -> bool {
        matches!(x.exponent(), Some(e) if e % self.stride == 0)
    }

    /// Membership in R = R* + {0}.
    #[inline]
    pub fn in_r(&self, x: FieldElem) -> bool {
        x.exponent().is_none_or(|e| e % self.stride == 0)
    }

    /// Index of the coset `x R*`, i.e. the exponent of `x` modulo the stride.
    #[inline]
    pub fn coset_of(&self, x: FieldElem) -> Option<u32> {
        x.exponent().map(|e| e % self.stride)
    }

    /// Smallest-exponent representative `g^c` of coset `c`.
    pub fn coset_rep(&self, c: u32) -> FieldElem {
        FieldElem::from_exponent(c % self.stride)
    }

    /// The elements of R* in exponent order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.r).map(move |j| FieldElem::from_exponent(j * self.stride))
    }

    /// Elements of R = {0} + R*, zero first.
    pub fn elements_with_zero(&self) -> impl Iterator<Item = FieldElem> + '_ {
        std::iter::once(FieldElem::ZERO).chain(self.elements())
    }

    /// Size of B(k, q): ((r + 1)^(k-1) - 1) / r.
    pub fn bset_size(&self) -> u128 {
        let r = self.r as u128;
        ((r + 1).pow(self.k - 1) - 1) / r
    }

    /// Size of each subgeometry: (q^k - 1) / (q - 1).
    pub fn subgeometry_size(&self) -> u64 {
        (self.q.pow(self.k) - 1) / (self.q - 1)
    }
}

/// PG(k-1, q^(k-1)) realized as GF(q^(k(k-1))) over its subfield
/// GF(q^(k-1)), partitioned into the coset subgeometries of R*.
#[derive(Debug, Clone)]
pub struct SubgeometryPartition {
    rgroup: Arc<RGroup>,
    coords: CoordinateMap,
    space: ProjSpace,
    /// exponent stride of GF(q^(k-1))* in the ambient field
    point_stride: u32,
}

impl SubgeometryPartition {
    /// Uses the polynomial basis `1, g, ..., g^(k-1)` for coordinates.
    pub fn new(rgroup: Arc<RGroup>) -> Result<Self> {
        let sub = rgroup.ambient.subfield(rgroup.h * (rgroup.k - 1))?;
        let coords = CoordinateMap::polynomial_basis(sub)?;
        Self::with_coords(rgroup, coords)
    }

    pub fn with_coords(rgroup: Arc<RGroup>, coords: CoordinateMap) -> Result<Self> {
        let d = rgroup.h * (rgroup.k - 1);
        if coords.subfield().degree() != d || !Arc::ptr_eq(coords.subfield().ambient(), &rgroup.ambient) {
            return Err(Error::Unsupported("coordinate map does not match the R-group".into()));
        }
        let point_stride = coords.subfield().stride();
        let space = ProjSpace::new(coords.subfield().handle().clone(), rgroup.k as usize - 1)?;
        Ok(SubgeometryPartition {
            rgroup,
            coords,
            space,
            point_stride,
        })
    }

    pub fn rgroup(&self) -> &Arc<RGroup> {
        &self.rgroup
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn coords(&self) -> &CoordinateMap {
        &self.coords
    }

    /// The projective point spanned by the ambient element `x != 0`.
    pub fn point_of(&self, x: FieldElem) -> ProjPoint {
        let v = self.coords.coords(x);
        self.space.normalize(&v).expect("non-zero element")
    }

    /// Points of the subgeometry `g^c R*`, labelled with `c`.
    pub fn subgeometry_points(&self, coset: u32) -> PointSet {
        let rg = &self.rgroup;
        let c = coset % rg.stride;
        let mut set = PointSet::with_label_kind(self.space.clone(), "coset");
        // one element per GF(q^(k-1))* class is enough
        let mut seen = HashSet::new();
        for j in 0..rg.r {
            let e = c + j * rg.stride;
            if seen.insert(e % self.point_stride) {
                set.insert_tagged(self.point_of(FieldElem::from_exponent(e)), c);
            }
        }
        set
    }

    /// All coset subgeometries, in coset order.
    pub fn all_subgeometries(&self) -> Vec<PointSet> {
        (0..self.rgroup.stride).map(|c| self.subgeometry_points(c)).collect()
    }
}

/// Summary of a partition check.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub cosets: u32,
    pub coset_sizes: Vec<usize>,
    pub total_points: u64,
    pub covered: u64,
    pub disjoint: bool,
    pub covers_space: bool,
}

/// Checks that the coset subgeometries are pairwise disjoint and cover
/// PG(k-1, q^(k-1)).
pub fn check_partition(part: &SubgeometryPartition, budget: &Budget) -> Result<PartitionReport> {
    let space = part.space();
    budget.check_points("points of PG(k-1, q^(k-1))", space.num_points() as u128)?;
    let mut owner = vec![u32::MAX; space.num_points() as usize];
    let mut disjoint = true;
    let mut coset_sizes = Vec::with_capacity(part.rgroup.stride as usize);
    for c in 0..part.rgroup.stride {
        let set = part.subgeometry_points(c);
        coset_sizes.push(set.len());
        for p in set.points() {
            let slot = &mut owner[space.index_of(p) as usize];
            if *slot != u32::MAX {
                disjoint = false;
            }
            *slot = c;
        }
    }
    let covered = owner.iter().filter(|&&o| o != u32::MAX).count() as u64;
    Ok(PartitionReport {
        cosets: part.rgroup.stride,
        coset_sizes,
        total_points: space.num_points(),
        covered,
        disjoint,
        covers_space: covered == space.num_points(),
    })
}

/// B(k, q): points of PG(k-2, q^(k(k-1))) having a coordinate vector in R^(k-1).
///
/// Small instances are materialized with weight labels; larger ones are kept
/// as a membership predicate.
#[derive(Debug, Clone)]
pub struct BSet {
    rgroup: Arc<RGroup>,
    space: ProjSpace,
    points: Option<PointSet>,
}

impl BSet {
    /// Enumerates B(k, q) in canonical order. Fails if it exceeds the point
    /// budget.
    pub fn build(rgroup: Arc<RGroup>, budget: &Budget) -> Result<Self> {
        budget.check_points("points of B(k,q)", rgroup.bset_size())?;
        let space = ProjSpace::new(rgroup.ambient.clone(), rgroup.k as usize - 2)?;
        let len = rgroup.k as usize - 1;
        let mut set = PointSet::with_label_kind(space.clone(), "weight");
        // odometer over R-digits: digit 0 is zero, digit j >= 1 is g^((j-1) stride)
        let digit = |d: u32| {
            if d == 0 {
                FieldElem::ZERO
            } else {
                FieldElem::from_exponent((d - 1) * rgroup.stride)
            }
        };
        let mut digits = vec![FieldElem::ZERO; len];
        let mut v = vec![FieldElem::ZERO; len];
        for_each_normalized(rgroup.r + 1, &mut digits, |c| {
            for (slot, code) in v.iter_mut().zip(c) {
                *slot = digit(code.code());
            }
            let p = ProjPoint::from_normalized(v.clone());
            let w = p.weight() as u32;
            set.insert_tagged(p, w);
        });
        Ok(BSet {
            rgroup,
            space,
            points: Some(set),
        })
    }

    /// B(k, q) as a membership predicate only.
    pub fn predicate(rgroup: Arc<RGroup>) -> Result<Self> {
        let space = ProjSpace::new(rgroup.ambient.clone(), rgroup.k as usize - 2)?;
        Ok(BSet {
            rgroup,
            space,
            points: None,
        })
    }

    /// Materializes when within budget, otherwise falls back to the predicate.
    pub fn build_or_predicate(rgroup: Arc<RGroup>, budget: &Budget) -> Result<Self> {
        if rgroup.bset_size() <= budget.max_points as u128 {
            Self::build(rgroup, budget)
        } else {
            Self::predicate(rgroup)
        }
    }

    pub fn rgroup(&self) -> &Arc<RGroup> {
        &self.rgroup
    }

    /// PG(k-2, q^(k(k-1))).
    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn points(&self) -> Option<&PointSet> {
        self.points.as_ref()
    }

    pub fn is_materialized(&self) -> bool {
        self.points.is_some()
    }

    pub fn size(&self) -> u128 {
        self.rgroup.bset_size()
    }

    /// Membership of a normalized coordinate vector: every entry in R.
    #[inline]
    pub fn contains_coords(&self, v: &[FieldElem]) -> bool {
        v.iter().all(|&c| self.rgroup.in_r(c))
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.contains_coords(p.coords())
    }

    /// Number of points of each weight 1..=k-1 (index 0 unused).
    pub fn weight_census(&self) -> Vec<u64> {
        let mut census = vec![0u64; self.rgroup.k as usize];
        match &self.points {
            Some(set) => {
                for &w in &set.labels().expect("weight labels").tags {
                    census[w as usize] += 1;
                }
            }
            None => {
                for (w, slot) in census.iter_mut().enumerate().skip(1) {
                    *slot = expected_weight_count(&self.rgroup, w as u32) as u64;
                }
            }
        }
        census
    }

    /// A uniformly random vector of R^(k-1) with the given support size,
    /// normalized.
    pub fn random_point_of_weight(&self, weight: usize, rng: &mut impl Rng) -> ProjPoint {
        let len = self.space.coord_len();
        let mut positions: Vec<usize> = (0..len).collect();
        for i in 0..weight {
            let j = rng.gen_range(i..len);
            positions.swap(i, j);
        }
        let mut v = vec![FieldElem::ZERO; len];
        for &pos in &positions[..weight] {
            v[pos] = FieldElem::from_exponent(rng.gen_range(0..self.rgroup.r) * self.rgroup.stride);
        }
        self.space.normalize(&v).expect("weight >= 1")
    }
}

/// C(k-1, w) r^(w-1).
pub fn expected_weight_count(rgroup: &RGroup, w: u32) -> u128 {
    let n = rgroup.k - 1;
    let binom = (0..w).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128);
    binom * (rgroup.r as u128).pow(w - 1)
}

/// A monomial map `v -> (rho_1 v_sigma(1), ..., rho_n v_sigma(n))` carrying
/// one point of B(k, q) to another.
#[derive(Debug, Clone, Serialize)]
pub struct StabiliserWitness {
    pub from: ProjPoint,
    pub to: ProjPoint,
    /// sigma, 0-based
    pub permutation: Vec<usize>,
    pub scalars: Vec<FieldElem>,
}

impl StabiliserWitness {
    pub fn apply(&self, field: &FieldHandle, v: &[FieldElem]) -> Vec<FieldElem> {
        self.permutation
            .iter()
            .zip(&self.scalars)
            .map(|(&s, &rho)| field.mul(rho, v[s]))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub weight: usize,
    pub pairs_checked: usize,
    pub setwise_samples: usize,
    pub witnesses: Vec<StabiliserWitness>,
}

/// Builds the monomial map carrying `from` to `to` (same weight), or `None`
/// when some required scalar falls outside R*.
pub fn stabiliser_witness(b: &BSet, from: &ProjPoint, to: &ProjPoint) -> Option<StabiliserWitness> {
    let f = b.rgroup.ambient();
    let supp = |p: &ProjPoint| -> (Vec<usize>, Vec<usize>) {
        (0..p.coords().len()).partition(|&i| !p.coords()[i].is_zero())
    };
    let (sf, zf) = supp(from);
    let (st, zt) = supp(to);
    if sf.len() != st.len() {
        return None;
    }
    let len = from.coords().len();
    let mut permutation = vec![0usize; len];
    let mut scalars = vec![FieldElem::ONE; len];
    for (&i, &j) in st.iter().zip(&sf) {
        permutation[i] = j;
        scalars[i] = f.div(to.coords()[i], from.coords()[j])?;
    }
    for (&i, &j) in zt.iter().zip(&zf) {
        permutation[i] = j;
    }
    if !scalars.iter().all(|&s| b.rgroup.contains(s)) {
        return None;
    }
    let w = StabiliserWitness {
        from: from.clone(),
        to: to.clone(),
        permutation,
        scalars,
    };
    let image = b.space.normalize(&w.apply(f, from.coords())).ok()?;
    (image == *to).then_some(w)
}

/// Exhibits stabiliser maps between sampled pairs of B-points of one weight,
/// and checks on a sample that each map keeps B inside B.
pub fn orbit_transitivity_check(b: &BSet, weight: usize, samples: usize, seed: u64) -> Result<OrbitReport> {
    let len = b.space.coord_len();
    if weight == 0 || weight > len {
        return Err(Error::Unsupported(format!("weight must be in [1, {len}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Option<Vec<&ProjPoint>> = b.points.as_ref().map(|s| {
        s.points().iter().filter(|p| p.weight() == weight).collect()
    });
    let pairs: Vec<(ProjPoint, ProjPoint)> = match pool {
        Some(pool) if pool.len() * pool.len() <= samples => pool
            .iter()
            .flat_map(|a| pool.iter().map(move |c| ((*a).clone(), (*c).clone())))
            .collect(),
        _ => (0..samples)
            .map(|_| {
                (
                    b.random_point_of_weight(weight, &mut rng),
                    b.random_point_of_weight(weight, &mut rng),
                )
            })
            .collect(),
    };
    let setwise_samples = 64;
    let mut witnesses = Vec::with_capacity(pairs.len());
    for (from, to) in &pairs {
        let w = stabiliser_witness(b, from, to).ok_or_else(|| Error::NoWitnessFound {
            from: from.to_string(),
            to: to.to_string(),
        })?;
        for _ in 0..setwise_samples {
            let wt = rng.gen_range(1..=len);
            let v = b.random_point_of_weight(wt, &mut rng);
            let image = w.apply(b.rgroup.ambient(), v.coords());
            if !b.contains_coords(&image) {
                return Err(Error::NoWitnessFound {
                    from: from.to_string(),
                    to: to.to_string(),
                });
            }
        }
        witnesses.push(w);
    }
    Ok(OrbitReport {
        weight,
        pairs_checked: pairs.len(),
        setwise_samples,
        witnesses,
    })
}
