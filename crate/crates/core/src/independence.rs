//! R-independence of tuples, the search for hyperplanes missing B(k, q), and
//! the pencil statistics through weight-one points.
//!
//! A tuple `(a_1, .., a_m)` is R-independent iff the hyperplane with dual
//! coordinates `a` misses B(k, q) when `m = k - 1`; both the search and the
//! dual-marking scan rely on that equivalence.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::geometry::{for_each_normalized, Hyperplane, ProjPoint, ProjSpace};
use crate::partition::{BSet, RGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IndependenceStatus {
    Independent,
    Dependent,
    /// Only produced when no exhaustive certification fits the budget.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Certification {
    /// Incidence of the dual hyperplane with every point of B(k, q).
    BsetIncidenceScan,
    /// Enumeration of normalized `(rho_1..rho_(m-1))` with `rho_m` solved for.
    AlgebraicEnumeration,
    /// Random relations tried; can refute independence but never certify it.
    RandomizedRefutation { trials: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceVerdict {
    pub status: IndependenceStatus,
    /// For `Dependent`: non-zero `rho` in R^m with `sum rho_i a_i = 0`.
    pub witness: Option<Vec<FieldElem>>,
    pub certification: Certification,
}

fn check_relation(rg: &RGroup, alphas: &[FieldElem], rho: &[FieldElem]) -> bool {
    let f = rg.ambient();
    rho.iter().all(|&r| rg.in_r(r))
        && rho.iter().any(|r| !r.is_zero())
        && rho
            .iter()
            .zip(alphas)
            .fold(FieldElem::ZERO, |acc, (&r, &a)| f.add(acc, f.mul(r, a)))
            .is_zero()
}

/// Searches the definition directly: some non-zero `rho` in R^m with
/// `sum rho_i a_i = 0`. Up to a factor in R*, the first non-zero entry among
/// `rho_1..rho_(m-1)` is 1, and `rho_m` is then forced.
pub fn dependence_witness_algebraic(alphas: &[FieldElem], rg: &RGroup) -> Option<Vec<FieldElem>> {
    let f = rg.ambient();
    let m = alphas.len();
    if let Some(i) = alphas.iter().position(|a| a.is_zero()) {
        let mut w = vec![FieldElem::ZERO; m];
        w[i] = FieldElem::ONE;
        return Some(w);
    }
    if m == 1 {
        return None;
    }
    let last = alphas[m - 1];
    let neg_last = f.neg(last);
    let mut digits = vec![FieldElem::ZERO; m - 1];
    let mut found = None;
    // digits encode R: code 0 is zero, code j >= 1 is g^((j-1) stride)
    let to_r = |d: FieldElem| match d.exponent() {
        None => FieldElem::ZERO,
        Some(j) => FieldElem::from_exponent(j * rg.stride()),
    };
    for_each_normalized(rg.r() + 1, &mut digits, |d| {
        if found.is_some() {
            return;
        }
        let s = d
            .iter()
            .zip(alphas)
            .fold(FieldElem::ZERO, |acc, (&d, &a)| f.add(acc, f.mul(to_r(d), a)));
        // rho_m a_m = -s
        let rho_m = f.div(s, neg_last).expect("a_m != 0");
        if rg.in_r(rho_m) {
            let mut w: Vec<FieldElem> = d.iter().map(|&d| to_r(d)).collect();
            w.push(rho_m);
            found = Some(w);
        }
    });
    found
}

/// Decides R-independence of `alphas`.
///
/// With a materialized B(k, q) of matching dimension the verdict comes from an
/// incidence scan; otherwise from the algebraic enumeration when it fits the
/// budget, and only as a last resort from random refutation.
pub fn is_r_independent(
    alphas: &[FieldElem],
    rg: &RGroup,
    bset: Option<&BSet>,
    budget: &Budget,
) -> Result<IndependenceVerdict> {
    let m = alphas.len();
    if m < 2 {
        return Err(Error::Unsupported("R-independence needs at least two elements".into()));
    }
    for &a in alphas {
        rg.ambient().validate(a)?;
    }
    if let Some(b) = bset.filter(|b| b.space().coord_len() == m) {
        if let Some(points) = b.points() {
            let space = b.space();
            let hit = points
                .points()
                .par_iter()
                .find_first(|p| space.dot(p.coords(), alphas).is_zero());
            return Ok(match hit {
                Some(p) => IndependenceVerdict {
                    status: IndependenceStatus::Dependent,
                    witness: Some(p.coords().to_vec()),
                    certification: Certification::BsetIncidenceScan,
                },
                None => IndependenceVerdict {
                    status: IndependenceStatus::Independent,
                    witness: None,
                    certification: Certification::BsetIncidenceScan,
                },
            });
        }
    }
    let r = rg.r() as u128;
    let candidates = ((r + 1).pow(m as u32 - 1) - 1) / r;
    if candidates <= budget.max_points as u128 {
        let witness = dependence_witness_algebraic(alphas, rg);
        return Ok(IndependenceVerdict {
            status: if witness.is_some() {
                IndependenceStatus::Dependent
            } else {
                IndependenceStatus::Independent
            },
            witness,
            certification: Certification::AlgebraicEnumeration,
        });
    }
    let trials = budget.max_points;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..trials {
        let mut rho: Vec<FieldElem> = (0..m - 1)
            .map(|_| {
                let j = rng.gen_range(0..=rg.r());
                if j == 0 {
                    FieldElem::ZERO
                } else {
                    FieldElem::from_exponent((j - 1) * rg.stride())
                }
            })
            .collect();
        let f = rg.ambient();
        let s = rho
            .iter()
            .zip(alphas)
            .fold(FieldElem::ZERO, |acc, (&x, &a)| f.add(acc, f.mul(x, a)));
        if let Some(rho_m) = f.div(f.neg(s), alphas[m - 1]) {
            if rg.in_r(rho_m) {
                rho.push(rho_m);
                if check_relation(rg, alphas, &rho) {
                    return Ok(IndependenceVerdict {
                        status: IndependenceStatus::Dependent,
                        witness: Some(rho),
                        certification: Certification::RandomizedRefutation { trials },
                    });
                }
            }
        }
    }
    Ok(IndependenceVerdict {
        status: IndependenceStatus::Unknown,
        witness: None,
        certification: Certification::RandomizedRefutation { trials },
    })
}

/// Re-evaluates a dependence witness.
pub fn verify_dependence_witness(alphas: &[FieldElem], rg: &RGroup, rho: &[FieldElem]) -> bool {
    rho.len() == alphas.len() && check_relation(rg, alphas, rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SearchStrategy {
    Exhaustive,
    Random { seed: u64, max_iters: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub strategy: SearchStrategy,
    /// `None` means no independent tuple exists (exhaustive) or none was hit
    /// within the iteration cap (random).
    pub alphas: Option<Vec<FieldElem>>,
    /// Canonical hyperplane index of the found tuple (normalized).
    pub hyperplane_index: Option<u64>,
    pub verdict: Option<IndependenceVerdict>,
    pub iterations: u64,
}

/// Whether all entries are non-zero and lie in pairwise distinct cosets.
fn distinct_cosets(rg: &RGroup, alphas: &[FieldElem]) -> bool {
    let mut cosets: Vec<u32> = Vec::with_capacity(alphas.len());
    for &a in alphas {
        match rg.coset_of(a) {
            None => return false,
            Some(c) if cosets.contains(&c) => return false,
            Some(c) => cosets.push(c),
        }
    }
    true
}

/// Looks for an R-independent `m`-tuple.
///
/// `Exhaustive` walks the hyperplanes of PG(m-1, q^(k(k-1))) in canonical
/// order and returns the first independent one. `Random` samples normalized
/// tuples with distinct cosets from a seeded generator. A found tuple is
/// certified with [`is_r_independent`].
pub fn find_independent_tuple(
    rg: &RGroup,
    bset: Option<&BSet>,
    m: usize,
    strategy: SearchStrategy,
    budget: &Budget,
) -> Result<SearchOutcome> {
    if m < 2 {
        return Err(Error::Unsupported("tuples need at least two elements".into()));
    }
    let space = ProjSpace::new(rg.ambient().clone(), m - 1)?;
    let (alphas, iterations) = match strategy {
        SearchStrategy::Exhaustive => {
            budget.check_points("hyperplanes in exhaustive search", space.num_hyperplanes() as u128)?;
            let found = (0..space.num_hyperplanes()).into_par_iter().find_first(|&i| {
                let h = space.hyperplane_at(i);
                distinct_cosets(rg, h.dual()) && dependence_witness_algebraic(h.dual(), rg).is_none()
            });
            let iterations = found.map_or(space.num_hyperplanes(), |i| i + 1);
            (found.map(|i| space.hyperplane_at(i).dual().to_vec()), iterations)
        }
        SearchStrategy::Random { seed, max_iters } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rg.ambient().group_order();
            let mut hit = None;
            let mut iters = 0;
            while iters < max_iters {
                iters += 1;
                let mut alphas = vec![FieldElem::ONE];
                alphas.extend((1..m).map(|_| FieldElem::from_exponent(rng.gen_range(0..n))));
                if !distinct_cosets(rg, &alphas) {
                    continue;
                }
                if dependence_witness_algebraic(&alphas, rg).is_none() {
                    hit = Some(alphas);
                    break;
                }
            }
            (hit, iters)
        }
    };
    let Some(alphas) = alphas else {
        return Ok(SearchOutcome {
            strategy,
            alphas: None,
            hyperplane_index: None,
            verdict: None,
            iterations,
        });
    };
    let verdict = is_r_independent(&alphas, rg, bset, budget)?;
    if verdict.status == IndependenceStatus::Dependent {
        return Err(Error::Unsupported(format!(
            "search and certification disagree on {alphas:?}"
        )));
    }
    let h = space.hyperplane(&alphas)?;
    Ok(SearchOutcome {
        strategy,
        hyperplane_index: Some(space.hyperplane_index(&h)),
        alphas: Some(alphas),
        verdict: Some(verdict),
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BlockingStatus {
    Blocking,
    NotBlocking,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockingVerdict {
    pub status: BlockingStatus,
    /// For `NotBlocking`: the first hyperplane (canonical order) missing B.
    pub witness: Option<Hyperplane>,
    pub witness_index: Option<u64>,
    pub hyperplanes: u64,
    pub unmarked: u64,
    pub marks: u64,
}

/// Dual-marking scan: every point of B marks the hyperplanes through it in a
/// bitset; an unmarked hyperplane misses B.
pub fn blocking_status(b: &BSet, budget: &Budget) -> Result<BlockingVerdict> {
    let space = b.space();
    let total = space.num_hyperplanes();
    budget.check_points("hyperplanes in blocking scan", total as u128)?;
    let points = b.points().ok_or(Error::BudgetExceeded {
        what: "points of B(k,q) for the blocking scan",
        needed: b.size(),
        budget: budget.max_points as u128,
    })?;
    let words = total.div_ceil(64) as usize;
    let chunk = (points.len() / rayon::current_num_threads().max(1)).max(1024);
    let (marked, marks) = points
        .points()
        .par_chunks(chunk)
        .map(|pts| {
            let mut bits = vec![0u64; words];
            let mut marks = 0u64;
            for p in pts {
                space.for_each_hyperplane_through(p.coords(), |h| {
                    bits[(h >> 6) as usize] |= 1 << (h & 63);
                    marks += 1;
                });
            }
            (bits, marks)
        })
        .reduce(
            || (vec![0u64; words], 0),
            |(mut a, ma), (b, mb)| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x |= *y;
                }
                (a, ma + mb)
            },
        );
    let mut unmarked = 0u64;
    let mut first = None;
    for (w, &word) in marked.iter().enumerate() {
        let mut free = !word;
        if w == words - 1 && total % 64 != 0 {
            free &= (1u64 << (total % 64)) - 1;
        }
        if free != 0 && first.is_none() {
            first = Some(w as u64 * 64 + free.trailing_zeros() as u64);
        }
        unmarked += free.count_ones() as u64;
    }
    let witness = first.map(|i| space.hyperplane_at(i));
    if let Some(h) = &witness {
        let hits = points.points().iter().filter(|p| space.dot(p.coords(), h.dual()).is_zero()).count();
        if hits != 0 {
            return Err(Error::Unsupported(format!("scan witness {h} meets B in {hits} points")));
        }
    }
    Ok(BlockingVerdict {
        status: if witness.is_some() {
            BlockingStatus::NotBlocking
        } else {
            BlockingStatus::Blocking
        },
        witness_index: first,
        witness,
        hyperplanes: total,
        unmarked,
        marks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PencilStats {
    pub point: ProjPoint,
    pub lines: u64,
    pub secant_count: u64,
    /// |l ∩ B| -> number of secant lines l
    pub secant_sizes: BTreeMap<u64, u64>,
    pub tangent_count: u64,
    /// 1 + sum over secants of (|l ∩ B| - 1)
    pub points_via_pencil: u64,
}

/// Classifies the lines of PG(k-2, q^(k(k-1))) through `p` by how many
/// points of B they contain.
pub fn pencil_stats(b: &BSet, p: &ProjPoint, budget: &Budget) -> Result<PencilStats> {
    let space = b.space();
    let q = space.field().order() as u128;
    budget.check_points("points on lines through P", (q + 1) * (q + 1))?;
    if !b.contains(p) {
        return Err(Error::Unsupported(format!("{p} is not a point of B(k,q)")));
    }
    let f = space.field();
    let len = space.coord_len();
    let lead = p.coords().iter().position(|c| !c.is_zero()).unwrap();
    let sub_len = len - 1;
    let mut y_sub = vec![FieldElem::ZERO; sub_len];
    let mut y = vec![FieldElem::ZERO; len];
    let mut v = vec![FieldElem::ZERO; len];
    let mut stats = PencilStats {
        point: p.clone(),
        lines: 0,
        secant_count: 0,
        secant_sizes: BTreeMap::new(),
        tangent_count: 0,
        points_via_pencil: 1,
    };
    for_each_normalized(f.order(), &mut y_sub, |ys| {
        let mut k = 0;
        for (pos, slot) in y.iter_mut().enumerate() {
            *slot = if pos == lead {
                FieldElem::ZERO
            } else {
                k += 1;
                ys[k - 1]
            };
        }
        // line = {p} + {y + t p}
        let mut on_b = 1u64;
        for t in f.elements() {
            for i in 0..len {
                v[i] = f.add(y[i], f.mul(t, p.coords()[i]));
            }
            space.normalize_in_place(&mut v);
            if b.contains_coords(&v) {
                on_b += 1;
            }
        }
        stats.lines += 1;
        if on_b > 1 {
            stats.secant_count += 1;
            *stats.secant_sizes.entry(on_b).or_default() += 1;
            stats.points_via_pencil += on_b - 1;
        } else {
            stats.tangent_count += 1;
        }
    });
    Ok(stats)
}

/// [`pencil_stats`] for a weight-one point of B (k = 4 in the headline case).
pub fn line_stats_weight1(b: &BSet, p: &ProjPoint, budget: &Budget) -> Result<PencilStats> {
    if p.weight() != 1 {
        return Err(Error::Unsupported(format!("{p} does not have weight 1")));
    }
    pencil_stats(b, p, budget)
}
