//! Reference implementations used as oracles by the integration tests.
//! They avoid the library's Zech and rank code paths on purpose.
#![allow(dead_code)]

use std::collections::HashMap;

use strongblock::{FieldElem, FieldHandle, ProjPoint, RGroup};

/// Powers of the generator as coefficient vectors, computed by repeated
/// multiplication by x modulo the field's modulus.
pub struct PowerTable {
    pub p: u32,
    pub m: usize,
    pub powers: Vec<Vec<u32>>,
    pub log: HashMap<Vec<u32>, u32>,
}

impl PowerTable {
    pub fn new(f: &FieldHandle) -> Self {
        let (p, m) = (f.p(), f.m() as usize);
        let modulus = f.modulus().to_vec();
        let n = f.group_order() as usize;
        let mut cur = vec![0u32; m];
        cur[0] = 1;
        let mut powers = Vec::with_capacity(n);
        let mut log = HashMap::with_capacity(n);
        for i in 0..n {
            log.insert(cur.clone(), i as u32);
            powers.push(cur.clone());
            // multiply by x and reduce x^m = -(c_0 + ... + c_(m-1) x^(m-1))
            let top = cur[m - 1];
            for j in (1..m).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            for j in 0..m {
                cur[j] = (cur[j] + (p - modulus[j] % p) * top) % p;
            }
        }
        assert_eq!(log.len(), n, "modulus is not primitive");
        PowerTable { p, m, powers, log }
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        match a.exponent() {
            None => vec![0; self.m],
            Some(i) => self.powers[i as usize].clone(),
        }
    }

    pub fn elem(&self, c: &[u32]) -> FieldElem {
        if c.iter().all(|&x| x == 0) {
            FieldElem::ZERO
        } else {
            FieldElem::from_exponent(self.log[c])
        }
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.elem(&s)
    }
}

/// Rank by plain row reduction on a copy, picking the leftmost pivot.
pub fn rank_oracle(f: &FieldHandle, rows: &[Vec<FieldElem>]) -> usize {
    let mut m: Vec<Vec<FieldElem>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = f.inv(m[rank][c]).unwrap();
        let pivot_row: Vec<FieldElem> = m[rank].iter().map(|&x| f.mul(x, inv)).collect();
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let factor = m[i][c];
                for j in 0..cols {
                    m[i][j] = f.sub(m[i][j], f.mul(factor, pivot_row[j]));
                }
            }
        }
        m[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Membership in R = R* + {0} from the exponent: R* has index
/// (|F| - 1) / r in the multiplicative group.
pub fn in_r(rg: &RGroup, x: FieldElem) -> bool {
    let index = rg.ambient().group_order() / rg.r();
    x.exponent().map_or(true, |e| e % index == 0)
}

/// A vector spans a point of B(k, q) iff all ratios of its non-zero
/// entries lie in R*.
pub fn in_bset(rg: &RGroup, v: &[FieldElem]) -> bool {
    let f = rg.ambient();
    let Some(&lead) = v.iter().find(|x| !x.is_zero()) else {
        return false;
    };
    v.iter().all(|&x| x.is_zero() || in_r(rg, f.div(x, lead).unwrap()))
}

pub fn rows(points: &[&ProjPoint]) -> Vec<Vec<FieldElem>> {
    points.iter().map(|p| p.coords().to_vec()).collect()
}

/// Exhaustive per-element checks, exhaustive pair checks for orders up to
/// `pair_cap`, and `samples` random triples. Returns the number of checks.
pub fn field_suite(f: &FieldHandle, pair_cap: u32, samples: usize, seed: u64) -> Result<u64, String> {
    use rand::{Rng, SeedableRng};
    let t = PowerTable::new(f);
    let n = f.group_order();
    let p = f.p() as u64;
    let mut checks = 0u64;
    let fail = |what: &str, detail: String| Err(format!("GF({}^{}): {what}: {detail}", f.p(), f.m()));

    let mut zech_seen = vec![false; n as usize];
    for a in f.elements() {
        checks += 1;
        if !f.add(a, f.neg(a)).is_zero() || f.add(a, FieldElem::ZERO) != a {
            return fail("additive inverse", a.to_string());
        }
        if f.coefficients(a) != t.coeffs(a) || f.from_coefficients(&t.coeffs(a)).ok() != Some(a) {
            return fail("coefficients", a.to_string());
        }
        if f.frobenius(a) != f.pow(a, p) {
            return fail("frobenius", a.to_string());
        }
        if let Some(i) = a.exponent() {
            if f.mul(a, f.inv(a).unwrap()) != FieldElem::ONE {
                return fail("inverse", a.to_string());
            }
            let expected = t.add(FieldElem::ONE, a).exponent();
            if f.zech(i) != expected {
                return fail("zech", format!("i = {i}"));
            }
            if let Some(z) = f.zech(i) {
                if std::mem::replace(&mut zech_seen[z as usize], true) {
                    return fail("zech not injective", format!("z = {z}"));
                }
            }
        }
    }
    // Zech is a bijection onto the non-zero exponents except 0 (1 + x = 1
    // forces x = 0); the missing preimage is -1.
    let hit = zech_seen.iter().filter(|&&s| s).count() as u32;
    if hit != n - 1 || zech_seen[0] {
        return fail("zech image", format!("{hit} values"));
    }

    if f.order() <= pair_cap {
        for a in f.elements() {
            for b in f.elements() {
                checks += 1;
                let s = f.add(a, b);
                if s != t.add(a, b) || s != f.add(b, a) {
                    return fail("addition", format!("{a} + {b}"));
                }
                if f.frobenius(s) != f.add(f.frobenius(a), f.frobenius(b)) {
                    return fail("frobenius additive", format!("{a}, {b}"));
                }
            }
        }
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let pick = |rng: &mut rand_chacha::ChaCha8Rng| FieldElem::from_code(rng.gen_range(0..=n));
    for _ in 0..samples {
        checks += 1;
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        if f.add(a, b) != t.add(a, b) {
            return fail("addition", format!("{a} + {b}"));
        }
        if f.add(f.add(a, b), c) != f.add(a, f.add(b, c)) || f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c)) {
            return fail("associativity", format!("{a}, {b}, {c}"));
        }
        if f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c)) {
            return fail("distributivity", format!("{a}, {b}, {c}"));
        }
        if f.frobenius(f.mul(a, b)) != f.mul(f.frobenius(a), f.frobenius(b))
            || f.frobenius(f.add(a, b)) != f.add(f.frobenius(a), f.frobenius(b))
        {
            return fail("frobenius", format!("{a}, {b}"));
        }
    }
    Ok(checks)
}

/// Point and hyperplane counts, index round trips and incidence counts of
/// PG(dim, Q), all exhaustive.
pub fn geometry_suite(space: &strongblock::ProjSpace) -> Result<u64, String> {
    let q = space.field().order() as u64;
    let dim = space.dim() as u32;
    let expected = (q.pow(dim + 1) - 1) / (q - 1);
    let hyper_size = (q.pow(dim) - 1) / (q - 1);
    let fail = |what: &str| Err(format!("PG({dim}, {q}): {what}"));
    if space.num_points() != expected || space.num_hyperplanes() != expected {
        return fail("counts");
    }
    let mut n = 0u64;
    for (i, pt) in space.points().enumerate() {
        if space.index_of(&pt) != i as u64 || space.normalize(pt.coords()).ok().as_ref() != Some(&pt) {
            return fail("point index round trip");
        }
        let mut through = 0u64;
        space.for_each_hyperplane_through(pt.coords(), |_| through += 1);
        if through != hyper_size {
            return fail("hyperplanes through a point");
        }
        n += 1;
    }
    if n != expected {
        return fail("enumeration");
    }
    for (i, h) in space.hyperplanes().enumerate() {
        if space.hyperplane_index(&h) != i as u64 {
            return fail("hyperplane index round trip");
        }
        let on = space.points().filter(|pt| space.incidence(pt, &h).unwrap()).count() as u64;
        if on != hyper_size {
            return fail("points on a hyperplane");
        }
    }
    Ok(2 * expected)
}

/// Ranks of random point sets agree with the oracle and are unchanged by
/// random invertible coordinate changes.
pub fn rank_invariance_suite(space: &strongblock::ProjSpace, trials: usize, seed: u64) -> Result<u64, String> {
    use rand::{Rng, SeedableRng};
    let f = space.field();
    let len = space.coord_len();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut mat: Vec<Vec<FieldElem>>;
        loop {
            mat = (0..len)
                .map(|_| (0..len).map(|_| FieldElem::from_code(rng.gen_range(0..=f.group_order()))).collect())
                .collect();
            if rank_oracle(f, &mat) == len {
                break;
            }
        }
        let count = rng.gen_range(1..=len + 2);
        let pts: Vec<ProjPoint> = (0..count)
            .map(|_| space.point_at(rng.gen_range(0..space.num_points())))
            .collect();
        let moved: Vec<ProjPoint> = pts
            .iter()
            .map(|pt| {
                let v: Vec<FieldElem> = (0..len)
                    .map(|i| {
                        (0..len).fold(FieldElem::ZERO, |acc, j| f.add(acc, f.mul(mat[i][j], pt.coords()[j])))
                    })
                    .collect();
                space.normalize(&v).unwrap()
            })
            .collect();
        let r = space.rank(&pts);
        let refs: Vec<&ProjPoint> = pts.iter().collect();
        if r != rank_oracle(f, &rows(&refs)) || r != space.rank(&moved) {
            return Err(format!("rank mismatch on {pts:?}"));
        }
    }
    Ok(trials as u64)
}
