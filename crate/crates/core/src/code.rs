//! Linear codes from projective systems: generator matrices, codeword
//! supports per projective message class, and minimality.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{FieldDescription, FieldElem, FieldHandle};
use crate::geometry::{PointSet, ProjSpace, RankAccumulator};

/// A k x n generator matrix, row-major, without zero columns and of full
/// row rank.
#[derive(Clone, Debug)]
pub struct GeneratorMatrix {
    field: Arc<FieldHandle>,
    k: usize,
    n: usize,
    entries: Vec<FieldElem>,
}

impl PartialEq for GeneratorMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.field.describe() == other.field.describe()
            && self.k == other.k
            && self.n == other.n
            && self.entries == other.entries
    }
}

impl GeneratorMatrix {
    pub fn new(field: Arc<FieldHandle>, k: usize, n: usize, entries: Vec<FieldElem>) -> Result<Self> {
        if entries.len() != k * n || k == 0 {
            return Err(Error::DimensionMismatch {
                expected: k * n,
                got: entries.len(),
            });
        }
        for &e in &entries {
            field.validate(e)?;
        }
        let g = GeneratorMatrix { field, k, n, entries };
        if let Some(j) = (0..n).find(|&j| g.column(j).iter().all(|c| c.is_zero())) {
            return Err(Error::ZeroColumn(j));
        }
        let mut acc = RankAccumulator::new(&g.field, n);
        for i in 0..k {
            acc.push(g.row(i));
        }
        if acc.rank() != k {
            return Err(Error::RankDeficient {
                rank: acc.rank(),
                expected: k,
            });
        }
        Ok(g)
    }

    /// Columns are the points of `set`, in set order.
    pub fn from_points(set: &PointSet) -> Result<Self> {
        let space = set.space();
        let (k, n) = (space.coord_len(), set.len());
        if n == 0 {
            return Err(Error::RankDeficient { rank: 0, expected: k });
        }
        let mut entries = vec![FieldElem::ZERO; k * n];
        for (j, p) in set.points().iter().enumerate() {
            for (i, &c) in p.coords().iter().enumerate() {
                entries[i * n + j] = c;
            }
        }
        Self::new(space.field().clone(), k, n, entries)
    }

    pub fn field(&self) -> &Arc<FieldHandle> {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.k).map(|i| self.get(i, j)).collect()
    }

    /// `M G` for a k x k matrix `M` (row-major).
    pub fn left_multiply(&self, m: &[FieldElem]) -> Result<Self> {
        if m.len() != self.k * self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k * self.k,
                got: m.len(),
            });
        }
        let f = &self.field;
        let mut entries = vec![FieldElem::ZERO; self.k * self.n];
        for i in 0..self.k {
            for l in 0..self.k {
                let c = m[i * self.k + l];
                if c.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let e = &mut entries[i * self.n + j];
                    *e = f.add(*e, f.mul(c, self.get(l, j)));
                }
            }
        }
        Self::new(f.clone(), self.k, self.n, entries)
    }

    /// The space whose points index the message classes, PG(k-1, Q).
    pub fn message_space(&self) -> Result<ProjSpace> {
        ProjSpace::new(self.field.clone(), self.k - 1)
    }
}

/// Supports of one codeword per projective message class. Class `i` is the
/// message with the normalized coordinates of point `#i` of PG(k-1, Q).
#[derive(Debug, Clone)]
pub struct SupportProfile {
    classes: usize,
    words: usize,
    bits: Vec<u64>,
    weights: Vec<u32>,
}

impl SupportProfile {
    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn support(&self, class: usize) -> &[u64] {
        &self.bits[class * self.words..(class + 1) * self.words]
    }

    pub fn weight(&self, class: usize) -> u32 {
        self.weights[class]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Whether the support of `a` is contained in the support of `b`.
    #[inline]
    pub fn contained_in(&self, a: usize, b: usize) -> bool {
        self.support(a)
            .iter()
            .zip(self.support(b))
            .all(|(&x, &y)| x & !y == 0)
    }

    /// The support of a class as a list of column positions.
    pub fn positions(&self, class: usize) -> Vec<usize> {
        self.support(class)
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b))
            .collect()
    }
}

pub fn support_profiles(g: &GeneratorMatrix, budget: &Budget) -> Result<SupportProfile> {
    let space = g.message_space()?;
    budget.check_points("codeword classes", space.num_points() as u128)?;
    let classes = space.num_points() as usize;
    let words = g.n.div_ceil(64);
    let columns: Vec<Vec<FieldElem>> = (0..g.n).map(|j| g.column(j)).collect();
    let mut bits = vec![0u64; classes * words];
    let mut weights = vec![0u32; classes];
    bits.par_chunks_mut(words)
        .zip(weights.par_iter_mut())
        .enumerate()
        .for_each_init(
            || vec![FieldElem::ZERO; g.k],
            |msg, (i, (row, weight))| {
                space.coords_at(i as u64, msg);
                for (j, col) in columns.iter().enumerate() {
                    if !space.dot(msg, col).is_zero() {
                        row[j / 64] |= 1 << (j % 64);
                        *weight += 1;
                    }
                }
            },
        );
    Ok(SupportProfile {
        classes,
        words,
        bits,
        weights,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MinimalStatus {
    Minimal,
    NotMinimal,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentWitness {
    /// Class whose support lies inside the other's.
    pub contained: u64,
    pub container: u64,
    pub contained_message: Vec<FieldElem>,
    pub container_message: Vec<FieldElem>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalityVerdict {
    pub status: MinimalStatus,
    pub classes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ContainmentWitness>,
}

/// Minimal iff no class's support lies inside a different class's support.
///
/// A support can only sit inside one of at least its own weight, and
/// inside one of equal weight only if the two coincide. So each class is
/// compared against strictly heavier classes, and coinciding supports are
/// found by hashing. The witness is found for the lowest contained class
/// index.
pub fn check_minimal(g: &GeneratorMatrix, budget: &Budget) -> Result<MinimalityVerdict> {
    let space = g.message_space()?;
    let c = space.num_points() as u128;
    let words = g.n.div_ceil(64) as u128;
    let ops = c * c * words;
    if ops > budget.max_pair_ops {
        return Err(Error::BudgetExceeded {
            what: "support containment word operations",
            needed: ops,
            budget: budget.max_pair_ops,
        });
    }
    let prof = support_profiles(g, budget)?;
    Ok(check_minimal_profile(&prof, &space))
}

pub fn check_minimal_profile(prof: &SupportProfile, space: &ProjSpace) -> MinimalityVerdict {
    let mut order: Vec<usize> = (0..prof.classes).collect();
    order.sort_by_key(|&i| (prof.weights[i], i));
    let sorted_weights: Vec<u32> = order.iter().map(|&i| prof.weights[i]).collect();
    // equal weights nest only when the supports coincide
    let mut first_with: HashMap<&[u64], usize> = HashMap::with_capacity(prof.classes);
    let mut twin = vec![None; prof.classes];
    for i in 0..prof.classes {
        match first_with.entry(prof.support(i)) {
            Entry::Occupied(e) => {
                let j = *e.get();
                twin[i] = Some(j);
                twin[j].get_or_insert(i);
            }
            Entry::Vacant(e) => {
                e.insert(i);
            }
        }
    }
    let hit = (0..prof.classes).into_par_iter().find_map_first(|a| {
        let start = sorted_weights.partition_point(|&w| w <= prof.weights[a]);
        order[start..]
            .iter()
            .find(|&&b| prof.contained_in(a, b))
            .copied()
            .or(twin[a])
            .map(|b| (a, b))
    });
    MinimalityVerdict {
        status: if hit.is_some() {
            MinimalStatus::NotMinimal
        } else {
            MinimalStatus::Minimal
        },
        classes: prof.classes as u64,
        witness: hit.map(|(a, b)| ContainmentWitness {
            contained: a as u64,
            container: b as u64,
            contained_message: space.point_at(a as u64).coords().to_vec(),
            container_message: space.point_at(b as u64).coords().to_vec(),
        }),
    }
}

/// Weight -> number of codeword classes of that weight.
pub fn weight_distribution(g: &GeneratorMatrix, budget: &Budget) -> Result<BTreeMap<u32, u64>> {
    let prof = support_profiles(g, budget)?;
    let mut dist = BTreeMap::new();
    for &w in prof.weights() {
        *dist.entry(w).or_insert(0) += 1;
    }
    Ok(dist)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeFormat {
    Json,
    PlainText,
}

/// JSON form of a generator matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub field: FieldDescription,
    pub k: usize,
    pub n: usize,
    /// Row-major entries, one array per row.
    pub rows: Vec<Vec<FieldElem>>,
}

pub fn export_code(g: &GeneratorMatrix, format: CodeFormat) -> Result<String> {
    match format {
        CodeFormat::Json => {
            let j = CodeJson {
                field: g.field.describe(),
                k: g.k,
                n: g.n,
                rows: (0..g.k).map(|i| g.row(i).to_vec()).collect(),
            };
            Ok(serde_json::to_string_pretty(&j)? + "\n")
        }
        CodeFormat::PlainText => {
            let d = g.field.describe();
            let modulus: Vec<String> = d.modulus.iter().map(u32::to_string).collect();
            let mut out = format!("{} {} {} {} {}\n", d.p, d.m, modulus.join(","), g.k, g.n);
            for i in 0..g.k {
                let row: Vec<String> = g.row(i).iter().map(FieldElem::to_string).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
            Ok(out)
        }
    }
}

pub fn import_code(text: &str, format: CodeFormat) -> Result<GeneratorMatrix> {
    match format {
        CodeFormat::Json => {
            let j: CodeJson = serde_json::from_str(text)?;
            let field = Arc::new(FieldHandle::from_description(&j.field)?);
            if j.rows.len() != j.k || j.rows.iter().any(|r| r.len() != j.n) {
                return Err(Error::Parse("row shape does not match k x n".into()));
            }
            GeneratorMatrix::new(field, j.k, j.n, j.rows.concat())
        }
        CodeFormat::PlainText => {
            let mut lines = text.lines().filter(|l| !l.trim().is_empty());
            let header: Vec<&str> = lines
                .next()
                .ok_or_else(|| Error::Parse("missing header".into()))?
                .split_whitespace()
                .collect();
            let [p, m, modulus, k, n] = header[..] else {
                return Err(Error::Parse("header must be `p m modulus k n`".into()));
            };
            let num = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
            let modulus = modulus
                .split(',')
                .map(|c| c.parse::<u32>().map_err(|e| Error::Parse(format!("{c:?}: {e}"))))
                .collect::<Result<Vec<u32>>>()?;
            let field = Arc::new(FieldHandle::new(num(p)? as u32, num(m)? as u32, Some(&modulus))?);
            let (k, n) = (num(k)?, num(n)?);
            let mut entries = Vec::with_capacity(k * n);
            for _ in 0..k {
                let line = lines.next().ok_or_else(|| Error::Parse("missing row".into()))?;
                let row = line
                    .split_whitespace()
                    .map(str::parse::<FieldElem>)
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != n {
                    return Err(Error::Parse(format!("row has {} entries, expected {n}", row.len())));
                }
                entries.extend(row);
            }
            GeneratorMatrix::new(field, k, n, entries)
        }
    }
}
