use std::sync::Arc;

use super::{FieldElem, FieldHandle};
use crate::error::{Error, Result};

/// GF(p^d) inside an ambient GF(p^m).
///
/// The subfield gets its own [`FieldHandle`] whose modulus is the minimal
/// polynomial of `g^stride`, so the embedding is `h^j -> g^(j * stride)` on
/// exponents.
#[derive(Debug, Clone)]
pub struct Subfield {
    ambient: Arc<FieldHandle>,
    handle: Arc<FieldHandle>,
    degree: u32,
    stride: u32,
}

impl Subfield {
    pub fn new(ambient: Arc<FieldHandle>, d: u32) -> Result<Self> {
        let stride = ambient.subfield_stride(d)?;
        let beta = ambient.g_pow(stride as u64);
        let minpoly = ambient.minimal_polynomial(beta);
        debug_assert_eq!(minpoly.len(), d as usize + 1);
        let handle = Arc::new(FieldHandle::new(ambient.p(), d, Some(&minpoly))?);
        Ok(Subfield {
            ambient,
            handle,
            degree: d,
            stride,
        })
    }

    pub fn ambient(&self) -> &Arc<FieldHandle> {
        &self.ambient
    }

    pub fn handle(&self) -> &Arc<FieldHandle> {
        &self.handle
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn stride(&self) -> u32 {
        self.stride
    }

    #[inline]
    pub fn embed(&self, a: FieldElem) -> FieldElem {
        match a.exponent() {
            None => FieldElem::ZERO,
            Some(j) => FieldElem::from_exponent(j * self.stride),
        }
    }

    /// The subfield element equal to `a`, if `a` lies in the subfield.
    #[inline]
    pub fn restrict(&self, a: FieldElem) -> Option<FieldElem> {
        match a.exponent() {
            None => Some(FieldElem::ZERO),
            Some(i) if i % self.stride == 0 => Some(FieldElem::from_exponent(i / self.stride)),
            Some(_) => None,
        }
    }
}

/// Coordinates of ambient elements with respect to a basis of GF(p^m) over
/// the subfield GF(p^d).
#[derive(Debug, Clone)]
pub struct CoordinateMap {
    sub: Subfield,
    basis: Vec<FieldElem>,
    /// inverse of the GF(p)-matrix whose column `i*d + j` holds the
    /// coefficients of `beta^j * basis[i]`
    inverse: Vec<Vec<u32>>,
}

impl CoordinateMap {
    pub fn new(sub: Subfield, basis: Vec<FieldElem>) -> Result<Self> {
        let amb = sub.ambient.clone();
        let (m, d) = (amb.m() as usize, sub.degree as usize);
        let t = m / d;
        if basis.len() != t {
            return Err(Error::BasisLength {
                got: basis.len(),
                expected: t,
            });
        }
        for &b in &basis {
            amb.validate(b)?;
        }
        let mut matrix = vec![vec![0u32; m]; m];
        for (i, &b) in basis.iter().enumerate() {
            for j in 0..d {
                let e = amb.mul_exp(b, j as u32 * sub.stride);
                for (row, c) in amb.coefficients(e).into_iter().enumerate() {
                    matrix[row][i * d + j] = c;
                }
            }
        }
        let inverse = invert_mod_p(matrix, amb.p()).ok_or(Error::DependentBasis)?;
        Ok(CoordinateMap {
            sub,
            basis,
            inverse,
        })
    }

    /// The polynomial basis `1, g, ..., g^(t-1)`; `g` generates the ambient
    /// field over every subfield, so this basis is always independent.
    pub fn polynomial_basis(sub: Subfield) -> Result<Self> {
        let t = sub.ambient.m() / sub.degree;
        let basis = (0..t as u64).map(|i| sub.ambient.g_pow(i)).collect();
        Self::new(sub, basis)
    }

    pub fn subfield(&self) -> &Subfield {
        &self.sub
    }

    pub fn basis(&self) -> &[FieldElem] {
        &self.basis
    }

    /// Number of coordinates, m / d.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// The unique subfield coordinates `c` with `sum c_i * basis_i = a`,
    /// as elements of the subfield handle.
    pub fn coords(&self, a: FieldElem) -> Vec<FieldElem> {
        let amb = &self.sub.ambient;
        let p = amb.p() as u64;
        let v = amb.coefficients(a);
        let d = self.sub.degree as usize;
        let x: Vec<u32> = self
            .inverse
            .iter()
            .map(|row| {
                (row.iter().zip(&v).map(|(&r, &c)| r as u64 * c as u64).sum::<u64>() % p) as u32
            })
            .collect();
        x.chunks_exact(d)
            .map(|chunk| {
                self.sub
                    .handle
                    .from_coefficients(chunk)
                    .expect("chunk has subfield degree")
            })
            .collect()
    }

    /// Inverse of [`CoordinateMap::coords`].
    pub fn compose(&self, coords: &[FieldElem]) -> FieldElem {
        let amb = &self.sub.ambient;
        coords
            .iter()
            .zip(&self.basis)
            .fold(FieldElem::ZERO, |acc, (&c, &b)| {
                amb.add(acc, amb.mul(self.sub.embed(c), b))
            })
    }
}

fn invert_mod_p(mut a: Vec<Vec<u32>>, p: u32) -> Option<Vec<Vec<u32>>> {
    let n = a.len();
    let p64 = p as u64;
    let mut inv: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = pow_mod(a[col][col] as u64, p64 - 2, p64);
        for j in 0..n {
            a[col][j] = (a[col][j] as u64 * scale % p64) as u32;
            inv[col][j] = (inv[col][j] as u64 * scale % p64) as u32;
        }
        for r in 0..n {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col] as u64;
            for j in 0..n {
                a[r][j] = ((a[r][j] as u64 + p64 * p64 - f * a[col][j] as u64) % p64) as u32;
                inv[r][j] = ((inv[r][j] as u64 + p64 * p64 - f * inv[col][j] as u64) % p64) as u32;
            }
        }
    }
    Some(inv)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}
