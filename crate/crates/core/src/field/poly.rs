//! Dense polynomials over GF(p), coefficients low-to-high.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns `(p, h)` with `q = p^h`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut h = 0;
    let mut t = q;
    while t > 1 {
        t /= p;
        h += 1;
    }
    Some((p, h))
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime and small; Fermat.
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo the non-zero polynomial `f`.
fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let f = trim(f.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p) as u64;
    while a.len() > df {
        let da = a.len() - 1;
        let c = a[da] as u64 * lead_inv % p as u64;
        if c != 0 {
            for i in 0..=df {
                let idx = da - df + i;
                let sub = c * f[i] as u64 % p as u64;
                a[idx] = ((a[idx] as u64 + p as u64 - sub) % p as u64) as u32;
            }
        }
        a.pop();
        a = trim(a);
    }
    a
}

fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    rem(&prod, f, p)
}

pub(crate) fn pow_mod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut result = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        e >>= 1;
    }
    result
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// x^(p^j) mod f.
fn frobenius_power_of_x(j: u32, f: &[u32], p: u32) -> Vec<u32> {
    let mut h = rem(&[0, 1], f, p);
    for _ in 0..j {
        h = pow_mod(&h, p as u64, f, p);
    }
    h
}

/// Rabin's irreducibility test for a monic `f` of degree `m >= 1`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = (f.len() - 1) as u32;
    if m == 1 {
        return true;
    }
    let x = rem(&[0, 1], f, p);
    if frobenius_power_of_x(m, f, p) != x {
        return false;
    }
    for l in prime_factors(m as u64) {
        let h = frobenius_power_of_x(m / l as u32, f, p);
        let g = gcd(f, &sub(&h, &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Whether the residue class of x has multiplicative order exactly p^m - 1.
pub(crate) fn root_is_primitive(f: &[u32], p: u32) -> bool {
    let m = (f.len() - 1) as u32;
    let n = (p as u64).pow(m) - 1;
    let x = [0u32, 1];
    let one = rem(&[1], f, p);
    if pow_mod(&x, n, f, p) != one {
        return false;
    }
    prime_factors(n)
        .into_iter()
        .all(|l| pow_mod(&x, n / l, f, p) != one)
}

/// Smallest monic primitive polynomial of degree `m`, ordering candidates by
/// the base-p integer of their low coefficients (c_{m-1} most significant).
pub(crate) fn smallest_primitive(p: u32, m: u32) -> Vec<u32> {
    let total = (p as u64).pow(m);
    for code in 0..total {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut c = code;
        for _ in 0..m {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        if f[0] == 0 && m > 1 {
            continue;
        }
        if is_irreducible(&f, p) && root_is_primitive(&f, p) {
            return f;
        }
    }
    unreachable!("a primitive polynomial exists for every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf8_default_modulus_is_x3_x_1() {
        assert_eq!(smallest_primitive(2, 3), vec![1, 1, 0, 1]);
    }

    #[test]
    fn irreducibility_examples() {
        // x^2 + 1 = (x+1)^2 over GF(2)
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 1], 2));
        // x^4 + x^3 + x^2 + x + 1 is irreducible over GF(2) but its root has order 5
        assert!(is_irreducible(&[1, 1, 1, 1, 1], 2));
        assert!(!root_is_primitive(&[1, 1, 1, 1, 1], 2));
        // x^2 + 1 over GF(3) is irreducible, root has order 4 != 8
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!root_is_primitive(&[1, 0, 1], 3));
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(729), Some((3, 6)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_factors(4095), vec![3, 5, 7, 13]);
    }
}
