//! Unions of coset subgeometries and exhaustive (strong) blocking checks.

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::geometry::{Hyperplane, PointSet, ProjPoint, RankAccumulator};
use crate::partition::SubgeometryPartition;

/// The union of the subgeometries `a_i R*`, labelled by coset.
pub fn union_subgeometries(alphas: &[FieldElem], part: &SubgeometryPartition) -> Result<PointSet> {
    let rg = part.rgroup();
    let mut cosets = Vec::with_capacity(alphas.len());
    for &a in alphas {
        rg.ambient().validate(a)?;
        let c = rg
            .coset_of(a)
            .ok_or_else(|| Error::InvalidElement("zero has no coset".into()))?;
        if cosets.contains(&c) {
            return Err(Error::RepeatedCoset(c));
        }
        cosets.push(c);
    }
    let mut set = PointSet::with_label_kind(part.space().clone(), "coset");
    for c in cosets {
        let sub = part.subgeometry_points(c);
        for p in sub.points() {
            set.insert_tagged(p.clone(), c);
        }
    }
    Ok(set)
}

/// (k - 1)(q^k - 1)/(q - 1); equals 3(q^2 + 1)(q + 1) for k = 4.
pub fn expected_size(q: u64, k: u32) -> u64 {
    (k as u64 - 1) * (q.pow(k) - 1) / (q - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StrongStatus {
    Strong,
    NotStrong,
    NotBlocking,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeetPoint {
    pub point: ProjPoint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tag: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrongVerdict {
    pub status: StrongStatus,
    pub hyperplanes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Hyperplane>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_index: Option<u64>,
    /// Rank of the witness hyperplane's intersection with the set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_rank: Option<usize>,
    /// The points of the set on the witness, with their provenance tags.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness_meet: Vec<MeetPoint>,
}

/// Rank of `set ∩ H` for hyperplane `#index`, stopping at `cap`.
fn meet_rank(set: &PointSet, h: &Hyperplane, cap: usize) -> usize {
    let space = set.space();
    let mut acc = RankAccumulator::new(space.field(), space.coord_len());
    for p in set.points() {
        if space.dot(p.coords(), h.dual()).is_zero() {
            acc.push(p.coords());
            if acc.rank() >= cap {
                break;
            }
        }
    }
    acc.rank()
}

fn witness_verdict(set: &PointSet, status: StrongStatus, index: u64, total: u64) -> StrongVerdict {
    let space = set.space();
    let h = space.hyperplane_at(index);
    let meet: Vec<MeetPoint> = set
        .points()
        .iter()
        .enumerate()
        .filter(|(_, p)| space.dot(p.coords(), h.dual()).is_zero())
        .map(|(i, p)| MeetPoint {
            point: p.clone(),
            tag: set.tag(i),
        })
        .collect();
    let rank = space.rank(meet.iter().map(|m| &m.point));
    StrongVerdict {
        status,
        hyperplanes: total,
        witness: Some(h),
        witness_index: Some(index),
        witness_rank: Some(rank),
        witness_meet: meet,
    }
}

/// Checks every hyperplane: `Strong` iff each meets the set in rank
/// `dim` (= k - 1). A hyperplane missing the set makes the verdict
/// `NotBlocking`; otherwise the first rank-deficient one gives `NotStrong`.
/// Witnesses are the lowest canonical index of their kind.
pub fn verify_strong_blocking(set: &PointSet, budget: &Budget) -> Result<StrongVerdict> {
    let space = set.space();
    let total = space.num_hyperplanes();
    budget.check_points("hyperplanes in strong blocking scan", total as u128)?;
    let full = space.dim();
    let (first_empty, first_deficient) = (0..total)
        .into_par_iter()
        .map(|i| {
            let rank = meet_rank(set, &space.hyperplane_at(i), full);
            match rank {
                0 => (Some(i), None),
                r if r < full => (None, Some(i)),
                _ => (None, None),
            }
        })
        .reduce(
            || (None, None),
            |a, b| (min_opt(a.0, b.0), min_opt(a.1, b.1)),
        );
    Ok(match (first_empty, first_deficient) {
        (Some(i), _) => witness_verdict(set, StrongStatus::NotBlocking, i, total),
        (None, Some(i)) => witness_verdict(set, StrongStatus::NotStrong, i, total),
        (None, None) => StrongVerdict {
            status: StrongStatus::Strong,
            hyperplanes: total,
            witness: None,
            witness_index: None,
            witness_rank: None,
            witness_meet: Vec::new(),
        },
    })
}

fn min_opt(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockingCheck {
    pub blocking: bool,
    pub hyperplanes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Hyperplane>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_index: Option<u64>,
}

/// Checks that every hyperplane meets the set; the witness is the first
/// hyperplane (canonical order) that does not.
pub fn verify_blocking(set: &PointSet, budget: &Budget) -> Result<BlockingCheck> {
    let space = set.space();
    let total = space.num_hyperplanes();
    budget.check_points("hyperplanes in blocking scan", total as u128)?;
    let miss = (0..total).into_par_iter().find_first(|&i| {
        let h = space.hyperplane_at(i);
        !set.points().iter().any(|p| space.dot(p.coords(), h.dual()).is_zero())
    });
    Ok(BlockingCheck {
        blocking: miss.is_none(),
        hyperplanes: total,
        witness: miss.map(|i| space.hyperplane_at(i)),
        witness_index: miss,
    })
}
