//! Finite fields GF(p^m) in exponent representation.
//!
//! Every non-zero element is stored as its discrete logarithm with respect to a
//! fixed primitive element `g` (a root of the field's modulus). Multiplication
//! is exponent addition; addition goes through a Zech logarithm table, so
//! `g^i + g^j = g^i * (1 + g^(j-i)) = g^(i + z(j-i))`.
//!
//! Internally an element is also addressable by its *packed* coefficient
//! vector in the polynomial basis `1, g, ..., g^(m-1)`, read as a base-p
//! integer. The packed form is only used for table construction and for
//! linear algebra over the prime field.

mod coords;
pub(crate) mod poly;

pub use poly::{is_prime, prime_power};

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use coords::{CoordinateMap, Subfield};

/// Default cap on the field order, bounding the size of the lookup tables.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 25;

const NO_ZECH: u32 = u32::MAX;

/// A field element: zero, or `g^i` with `i` reduced modulo the group order.
///
/// The in-memory code is `0` for zero and `i + 1` for `g^i`, so the derived
/// ordering puts zero first and then sorts by exponent.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// `g^i`. The caller is responsible for `i` being reduced.
    #[inline]
    pub const fn from_exponent(i: u32) -> Self {
        FieldElem(i + 1)
    }

    #[inline]
    pub const fn exponent(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0 - 1)
        }
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The ordering code: 0 for zero, `i + 1` for `g^i`.
    #[inline]
    pub const fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn from_code(code: u32) -> Self {
        FieldElem(code)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent() {
            None => f.write_str("0"),
            Some(i) => write!(f, "g^{i}"),
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FieldElem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(FieldElem::ZERO);
        }
        let exp = s
            .strip_prefix("g^")
            .and_then(|e| e.parse::<u32>().ok())
            .filter(|&e| e < u32::MAX - 1)
            .ok_or_else(|| Error::Parse(format!("bad field element {s:?}")))?;
        Ok(FieldElem::from_exponent(exp))
    }
}

impl Serialize for FieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serialized description of a field: enough to rebuild it bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescription {
    pub p: u32,
    pub m: u32,
    /// Monic modulus, coefficients low-to-high (leading 1 included).
    pub modulus: Vec<u32>,
}

/// GF(p^m) with exponent/packed conversion tables and a Zech logarithm table.
///
/// Immutable after construction; share it behind an [`Arc`].
pub struct FieldHandle {
    p: u32,
    m: u32,
    modulus: Vec<u32>,
    order: u32,
    /// p^i for i in 0..=m
    powers: Vec<u32>,
    /// exponent -> packed
    exp: Vec<u32>,
    /// packed -> exponent (entry 0 unused)
    log: Vec<u32>,
    /// i -> z(i) with g^z(i) = 1 + g^i, NO_ZECH where 1 + g^i = 0
    zech: Vec<u32>,
    /// exponent of -1
    neg_one: u32,
}

impl fmt::Debug for FieldHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldHandle")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FieldHandle {
    /// Builds GF(p^m) with the default order cap. Without an explicit modulus
    /// the smallest primitive polynomial is used.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Self> {
        Self::with_cap(p, m, modulus, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u32, m: u32, modulus: Option<&[u32]>, cap: u64) -> Result<Self> {
        let modulus = Self::checked_modulus(p, m, modulus, cap)?;
        Ok(Self::from_exp_table(p, m, modulus, None))
    }

    /// Like [`FieldHandle::new`], but keeps the exponent table in `dir` so
    /// large fields are only generated once.
    pub fn new_cached(p: u32, m: u32, modulus: Option<&[u32]>, dir: &Path) -> Result<Self> {
        let modulus = Self::checked_modulus(p, m, modulus, DEFAULT_FIELD_CAP)?;
        let name = format!(
            "gf{}_{}_{}.exp",
            p,
            m,
            modulus.iter().map(u32::to_string).collect::<Vec<_>>().join("-")
        );
        let path = dir.join(name);
        let order = (p as u64).pow(m) as usize;
        if let Ok(bytes) = std::fs::read(&path) {
            if bytes.len() == 4 * (order - 1) {
                let exp: Vec<u32> = bytes
                    .chunks_exact(4)
                    .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                    .collect();
                if exp[0] == 1 && exp.iter().all(|&v| (v as usize) < order) {
                    let f = Self::from_exp_table(p, m, modulus.clone(), Some(exp));
                    if f.verify_tables() {
                        return Ok(f);
                    }
                }
            }
        }
        let f = Self::from_exp_table(p, m, modulus, None);
        std::fs::create_dir_all(dir)?;
        let bytes: Vec<u8> = f.exp.iter().flat_map(|v| v.to_le_bytes()).collect();
        std::fs::write(&path, bytes)?;
        Ok(f)
    }

    pub fn from_description(d: &FieldDescription) -> Result<Self> {
        Self::new(d.p, d.m, Some(&d.modulus))
    }

    fn checked_modulus(p: u32, m: u32, modulus: Option<&[u32]>, cap: u64) -> Result<Vec<u32>> {
        if !poly::is_prime(p as u64) {
            return Err(Error::NonPrimeP(p as u64));
        }
        if m == 0 {
            return Err(Error::InvalidModulus("extension degree must be positive".into()));
        }
        let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        if order > cap as u128 {
            return Err(Error::FieldTooLarge { order, cap });
        }
        match modulus {
            None => Ok(poly::smallest_primitive(p, m)),
            Some(f) => {
                if f.len() != m as usize + 1 || f[m as usize] != 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected a monic polynomial of degree {m} (coefficients low-to-high)"
                    )));
                }
                if f.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus(format!("coefficient not reduced mod {p}")));
                }
                if !poly::is_irreducible(f, p) {
                    return Err(Error::ReducibleModulus { p });
                }
                if !poly::root_is_primitive(f, p) {
                    return Err(Error::NonPrimitiveModulus);
                }
                Ok(f.to_vec())
            }
        }
    }

    fn from_exp_table(p: u32, m: u32, modulus: Vec<u32>, exp: Option<Vec<u32>>) -> Self {
        let powers: Vec<u32> = (0..=m).map(|i| p.pow(i)).collect();
        let order = powers[m as usize];
        let n = (order - 1) as usize;
        let mut f = FieldHandle {
            p,
            m,
            modulus,
            order,
            powers,
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
            neg_one: if p == 2 { 0 } else { (order - 1) / 2 },
        };
        let exp = exp.unwrap_or_else(|| {
            // packed value of -t * (low part of modulus), for the reduction x^m = -(low part)
            let reduce: Vec<u32> = (0..p)
                .map(|t| {
                    let mut acc = 0u32;
                    for i in 0..m as usize {
                        let c = (p - (t * f.modulus[i]) % p) % p;
                        acc += c * f.powers[i];
                    }
                    acc
                })
                .collect();
            let top_pow = f.powers[m as usize - 1];
            let mut exp = Vec::with_capacity(n);
            let mut cur = 1u32;
            for _ in 0..n {
                exp.push(cur);
                let top = cur / top_pow;
                let shifted = (cur % top_pow) * p;
                cur = f.packed_add(shifted, reduce[top as usize]);
            }
            exp
        });
        let mut log = vec![NO_ZECH; order as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        let zech = exp
            .iter()
            .map(|&v| {
                let s = f.packed_add(v, 1);
                if s == 0 {
                    NO_ZECH
                } else {
                    log[s as usize]
                }
            })
            .collect();
        f.exp = exp;
        f.log = log;
        f.zech = zech;
        f
    }

    /// Cheap structural check of the tables (used after loading a cache).
    fn verify_tables(&self) -> bool {
        self.log[0] == NO_ZECH
            && self.log[1..].iter().all(|&l| l != NO_ZECH)
            && self.zech.iter().filter(|&&z| z == NO_ZECH).count() == 1
    }

    #[inline]
    fn packed_add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 || b > 0 {
            let d = (a % p + b % p) % p;
            out += d * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Number of elements, p^m.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Order of the multiplicative group, p^m - 1.
    pub fn group_order(&self) -> u32 {
        self.order - 1
    }

    pub fn describe(&self) -> FieldDescription {
        FieldDescription {
            p: self.p,
            m: self.m,
            modulus: self.modulus.clone(),
        }
    }

    /// `g^i` with `i` reduced modulo the group order.
    #[inline]
    pub fn g_pow(&self, i: u64) -> FieldElem {
        FieldElem::from_exponent((i % self.group_order() as u64) as u32)
    }

    /// The primitive element `g`.
    pub fn generator(&self) -> FieldElem {
        self.g_pow(1)
    }

    pub fn is_valid(&self, a: FieldElem) -> bool {
        a.code() <= self.group_order()
    }

    pub fn validate(&self, a: FieldElem) -> Result<FieldElem> {
        if self.is_valid(a) {
            Ok(a)
        } else {
            Err(Error::InvalidElement(a.to_string()))
        }
    }

    /// Zech logarithm z(i), `None` where 1 + g^i = 0.
    #[inline]
    pub fn zech(&self, i: u32) -> Option<u32> {
        match self.zech[i as usize] {
            NO_ZECH => None,
            z => Some(z),
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (i, j) = match (a.exponent(), b.exponent()) {
            (None, _) => return b,
            (_, None) => return a,
            (Some(i), Some(j)) => (i, j),
        };
        let n = self.order - 1;
        let d = if j >= i { j - i } else { j + n - i };
        match self.zech[d as usize] {
            NO_ZECH => FieldElem::ZERO,
            z => {
                let e = i + z;
                FieldElem::from_exponent(if e >= n { e - n } else { e })
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.mul_exp(a, self.neg_one)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match (a.exponent(), b.exponent()) {
            (Some(i), Some(j)) => {
                let n = self.order - 1;
                let e = i + j;
                FieldElem::from_exponent(if e >= n { e - n } else { e })
            }
            _ => FieldElem::ZERO,
        }
    }

    /// `a * g^e`.
    #[inline]
    pub fn mul_exp(&self, a: FieldElem, e: u32) -> FieldElem {
        match a.exponent() {
            None => FieldElem::ZERO,
            Some(i) => {
                let n = (self.order - 1) as u64;
                FieldElem::from_exponent(((i as u64 + e as u64) % n) as u32)
            }
        }
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        let i = a.exponent()?;
        let n = self.order - 1;
        Some(FieldElem::from_exponent((n - i) % n))
    }

    /// `a / b`, `None` when `b` is zero.
    #[inline]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        let j = b.exponent()?;
        Some(match a.exponent() {
            None => FieldElem::ZERO,
            Some(i) => {
                let n = self.order - 1;
                FieldElem::from_exponent(if i >= j { i - j } else { i + n - j })
            }
        })
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        match a.exponent() {
            None if e == 0 => FieldElem::ONE,
            None => FieldElem::ZERO,
            Some(i) => {
                let n = (self.order - 1) as u128;
                FieldElem::from_exponent((i as u128 * e as u128 % n) as u32)
            }
        }
    }

    /// x -> x^p.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p as u64)
    }

    /// Coefficients of `a` in the polynomial basis, low-to-high.
    pub fn coefficients(&self, a: FieldElem) -> Vec<u32> {
        let mut v = self.to_packed(a);
        (0..self.m)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Result<FieldElem> {
        if c.len() != self.m as usize || c.iter().any(|&d| d >= self.p) {
            return Err(Error::InvalidElement(format!("{c:?}")));
        }
        let packed = c
            .iter()
            .zip(&self.powers)
            .map(|(&d, &pw)| d * pw)
            .sum::<u32>();
        Ok(self.from_packed(packed))
    }

    #[inline]
    pub(crate) fn to_packed(&self, a: FieldElem) -> u32 {
        match a.exponent() {
            None => 0,
            Some(i) => self.exp[i as usize],
        }
    }

    #[inline]
    pub(crate) fn from_packed(&self, v: u32) -> FieldElem {
        if v == 0 {
            FieldElem::ZERO
        } else {
            FieldElem::from_exponent(self.log[v as usize])
        }
    }

    /// The prime-field value of `a` if `a` lies in GF(p).
    pub fn prime_field_value(&self, a: FieldElem) -> Option<u32> {
        let v = self.to_packed(a);
        (v < self.p).then_some(v)
    }

    /// The element `c * 1` of the prime field.
    pub fn from_prime_field(&self, c: u32) -> FieldElem {
        self.from_packed(c % self.p)
    }

    /// All elements: zero first, then `g^0, g^1, ...`.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(FieldElem::from_code)
    }

    /// Exponent stride `(p^m - 1) / (p^d - 1)` of the subfield GF(p^d): its
    /// non-zero elements are exactly the powers `g^(j*stride)`.
    pub fn subfield_stride(&self, d: u32) -> Result<u32> {
        if d == 0 || self.m % d != 0 {
            return Err(Error::NotADivisor { d, m: self.m });
        }
        Ok((self.order - 1) / (self.p.pow(d) - 1))
    }

    /// Frobenius membership test for GF(p^d): a^(p^d) = a.
    pub fn in_subfield(&self, a: FieldElem, d: u32) -> bool {
        self.pow(a, (self.p as u64).pow(d)) == a
    }

    /// Minimal polynomial of `a` over GF(p), monic, coefficients low-to-high.
    pub fn minimal_polynomial(&self, a: FieldElem) -> Vec<u32> {
        let mut conjugates = vec![a];
        let mut c = self.frobenius(a);
        while c != a {
            conjugates.push(c);
            c = self.frobenius(c);
        }
        // product of (X - c) over the conjugates
        let mut coeffs = vec![FieldElem::ONE];
        for &c in &conjugates {
            let neg_c = self.neg(c);
            let mut next = vec![FieldElem::ZERO; coeffs.len() + 1];
            for (i, &k) in coeffs.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], k);
                next[i] = self.add(next[i], self.mul(k, neg_c));
            }
            coeffs = next;
        }
        coeffs
            .into_iter()
            .map(|k| {
                self.prime_field_value(k)
                    .expect("minimal polynomial coefficients lie in the prime field")
            })
            .collect()
    }

    /// GF(p^d) as a sub-structure of this field, with its own handle whose
    /// generator is `g^stride`.
    pub fn subfield(self: &Arc<Self>, d: u32) -> Result<Subfield> {
        Subfield::new(self.clone(), d)
    }
}

/// Coefficient-vector addition, independent of the Zech table.
#[cfg(test)]
pub(crate) fn add_by_coefficients(f: &FieldHandle, a: FieldElem, b: FieldElem) -> FieldElem {
    let ca = f.coefficients(a);
    let cb = f.coefficients(b);
    let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % f.p()).collect();
    f.from_coefficients(&sum).unwrap()
}

#[cfg(test)]
mod tests;
