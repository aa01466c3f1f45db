//! Exact arithmetic around the small-blocking-set bounds in planes of order
//! Q = q^12, used to show B(4, q) cannot be a blocking set for odd q.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::poly::prime_power;
use crate::geometry::PointSet;

/// |B(4, q)| as the degree-12 polynomial in q.
pub fn bset_size_poly(q: u64) -> BigInt {
    const COEFFS: [i64; 13] = [1, -1, 0, 2, 2, -1, -3, -4, -1, 2, 3, 2, 1];
    let q = BigInt::from(q);
    COEFFS
        .iter()
        .rev()
        .fold(BigInt::from(0), |acc, &c| acc * &q + c)
}

/// Order of R* for k = 4: (q^3 - 1)(q^4 - 1)/(q - 1).
pub fn r_size(q: u64) -> BigInt {
    let q = BigInt::from(q);
    (q.pow(3) - 1u32) * (q.pow(4) - 1u32) / (&q - 1u32)
}

/// Shortest possible minimal code length bound m(k, q) >= (k-1)(q+1).
pub fn lower_bound_m(k: u64, q: u64) -> u128 {
    (k as u128 - 1) * (q as u128 + 1)
}

/// Whether `size < 3/2 (plane + 1)`.
pub fn is_small(plane: &BigInt, size: &BigInt) -> bool {
    size * 2u32 < (plane + 1u32) * 3u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    /// Smaller than the lower end of the interval.
    Below,
    Inside,
    /// Larger than the upper end of the interval.
    Above,
}

/// Places `size` relative to the interval
/// `Q + 1 + Q/(p^e + 2) <= size <= (A - sqrt(D)) / 2`, with
/// `A = Q p^e + 1` and `D = A^2 - 4 Q^2 p^e`, without evaluating the root.
///
/// The lower end is tested first. Once `size` clears it, a negative
/// discriminant means the interval is undefined for this `e`.
pub fn szonyi_membership(plane: &BigInt, pe: &BigInt, size: &BigInt) -> Result<Membership> {
    if (plane + 1u32) * (pe + 2u32) + plane > size * (pe + 2u32) {
        return Ok(Membership::Below);
    }
    let a = plane * pe + 1u32;
    let d = &a * &a - plane * plane * pe * 4u32;
    if d < BigInt::from(0) {
        return Err(Error::NegativeDiscriminant(format!("Q = {plane}, p^e = {pe}")));
    }
    let slack = a - size * 2u32;
    if slack >= BigInt::from(0) && &slack * &slack >= d {
        Ok(Membership::Inside)
    } else {
        Ok(Membership::Above)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EVerdict {
    Below,
    Inside,
    Above,
    /// The discriminant is negative, so this `e` rules nothing out.
    Undefined,
}

#[derive(Debug, Clone, Serialize)]
pub struct EEntry {
    pub e: u32,
    pub pe: String,
    pub verdict: EVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalReport {
    pub q: u64,
    pub p: u64,
    pub h: u32,
    pub plane_order: String,
    pub size: String,
    pub small: bool,
    pub per_e: Vec<EEntry>,
    /// Values of `e` that do not exclude `size`.
    pub inconclusive: Vec<u32>,
    pub certified: bool,
}

/// Sweeps every `e` with `p^e <= q^12` and reports whether |B(4, q)| is
/// small yet outside every interval.
pub fn interval_violation_report(q: u64) -> Result<IntervalReport> {
    let (p, h) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if p == 2 {
        return Err(Error::Unsupported(format!("q = {q} is even")));
    }
    let plane = BigInt::from(q).pow(12);
    let size = bset_size_poly(q);
    let small = is_small(&plane, &size);
    let mut per_e = Vec::new();
    let mut inconclusive = Vec::new();
    let mut pe = BigInt::from(1);
    for e in 1..=12 * h {
        pe *= p;
        let verdict = match szonyi_membership(&plane, &pe, &size) {
            Ok(Membership::Below) => EVerdict::Below,
            Ok(Membership::Inside) => EVerdict::Inside,
            Ok(Membership::Above) => EVerdict::Above,
            Err(Error::NegativeDiscriminant(_)) => EVerdict::Undefined,
            Err(err) => return Err(err),
        };
        if matches!(verdict, EVerdict::Inside | EVerdict::Undefined) {
            inconclusive.push(e);
        }
        per_e.push(EEntry {
            e,
            pe: pe.to_string(),
            verdict,
        });
    }
    Ok(IntervalReport {
        q,
        p,
        h,
        plane_order: plane.to_string(),
        size: size.to_string(),
        small,
        certified: small && inconclusive.is_empty(),
        per_e,
        inconclusive,
    })
}

/// Like [`interval_violation_report`], but an uncertified `q` is an error.
pub fn certify(q: u64) -> Result<IntervalReport> {
    let report = interval_violation_report(q)?;
    match report.inconclusive.first() {
        Some(&e) => Err(Error::InconclusiveE { q, e }),
        None if !report.small => Err(Error::Unsupported(format!("|B(4,{q})| is not small"))),
        None => Ok(report),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OneModPReport {
    pub p: u64,
    pub lines: u64,
    /// Intersection size -> number of lines.
    pub census: BTreeMap<usize, u64>,
    pub holds: bool,
    /// First line (by index) whose intersection size is not 1 mod p.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_line: Option<u64>,
}

/// Intersection sizes of a planar set with every line.
pub fn one_mod_p_profile(set: &PointSet, p: u64, budget: &Budget) -> Result<OneModPReport> {
    let space = set.space();
    if space.dim() != 2 {
        return Err(Error::Unsupported(format!("expected a plane, got PG({}, Q)", space.dim())));
    }
    let lines = space.num_hyperplanes();
    let ops = lines as u128 * set.len() as u128;
    if ops > budget.max_pair_ops {
        return Err(Error::BudgetExceeded {
            what: "line-point incidences",
            needed: ops,
            budget: budget.max_pair_ops,
        });
    }
    let mut census = BTreeMap::new();
    let mut witness_line = None;
    for i in 0..lines {
        let size = set.meet(&space.hyperplane_at(i)).len();
        *census.entry(size).or_insert(0) += 1;
        if witness_line.is_none() && size as u64 % p != 1 % p {
            witness_line = Some(i);
        }
    }
    Ok(OneModPReport {
        p,
        lines,
        census,
        holds: witness_line.is_none(),
        witness_line,
    })
}
