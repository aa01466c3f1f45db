use std::sync::Arc;

use super::*;

fn gf(p: u32, m: u32) -> Arc<FieldHandle> {
    Arc::new(FieldHandle::new(p, m, None).unwrap())
}

#[test]
fn builds_gf8_with_expected_orders() {
    let f = gf(2, 3);
    assert_eq!(f.order(), 8);
    assert_eq!(f.group_order(), 7);
    assert_eq!(f.modulus(), &[1, 1, 0, 1]);
}

#[test]
fn gf4096_generator_is_primitive() {
    let f = gf(2, 12);
    let g = f.generator();
    assert_eq!(f.pow(g, 4095), FieldElem::ONE);
    for d in [1365, 819, 585, 315] {
        assert_ne!(f.pow(g, d), FieldElem::ONE, "g^{d}");
    }
}

#[test]
fn rejects_bad_parameters() {
    assert!(matches!(FieldHandle::new(4, 3, None), Err(Error::NonPrimeP(4))));
    assert!(matches!(
        FieldHandle::new(2, 2, Some(&[1, 0, 1])),
        Err(Error::ReducibleModulus { p: 2 })
    ));
    assert!(matches!(
        FieldHandle::new(2, 4, Some(&[1, 1, 1, 1, 1])),
        Err(Error::NonPrimitiveModulus)
    ));
    assert!(matches!(
        FieldHandle::new(2, 3, Some(&[1, 1, 1])),
        Err(Error::InvalidModulus(_))
    ));
    assert!(matches!(
        FieldHandle::new(2, 26, None),
        Err(Error::FieldTooLarge { .. })
    ));
}

#[test]
fn zero_is_additive_identity() {
    let f = gf(2, 3);
    let g5 = f.g_pow(5);
    assert_eq!(f.add(FieldElem::ZERO, g5), g5);
    assert_eq!(f.add(g5, FieldElem::ZERO), g5);
}

#[test]
fn characteristic_two_self_cancels() {
    let f = gf(2, 5);
    for i in 0..f.group_order() as u64 {
        let a = f.g_pow(i);
        assert_eq!(f.add(a, a), FieldElem::ZERO);
    }
}

#[test]
fn gf8_g_plus_g2_is_g4() {
    let f = gf(2, 3);
    let (g1, g2) = (f.g_pow(1), f.g_pow(2));
    // oracle: coefficient vectors x and x^2 added by hand
    assert_eq!(f.coefficients(g1), vec![0, 1, 0]);
    assert_eq!(f.coefficients(g2), vec![0, 0, 1]);
    assert_eq!(f.from_coefficients(&[0, 1, 1]).unwrap(), f.g_pow(4));
    assert_eq!(add_by_coefficients(&f, g1, g2), f.g_pow(4));
    assert_eq!(f.add(g1, g2), f.g_pow(4));
}

#[test]
fn zech_addition_matches_coefficient_addition_exhaustively() {
    for (p, m) in [(2, 4), (3, 3), (5, 2), (7, 2)] {
        let f = gf(p, m);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), add_by_coefficients(&f, a, b), "GF({p}^{m}) {a}+{b}");
            }
        }
    }
}

#[test]
fn zech_is_a_bijection_off_the_sentinel() {
    for (p, m) in [(2, 8), (3, 5), (5, 3)] {
        let f = gf(p, m);
        let n = f.group_order();
        let mut seen = vec![false; n as usize];
        let mut sentinels = 0;
        for i in 0..n {
            match f.zech(i) {
                None => sentinels += 1,
                Some(z) => {
                    assert!(!seen[z as usize]);
                    seen[z as usize] = true;
                }
            }
        }
        assert_eq!(sentinels, 1);
        // 1 + g^i = 1 would need g^i = 0, so exponent 0 is never hit
        assert_eq!(seen.iter().filter(|&&s| !s).count(), 1);
        assert!(!seen[0]);
    }
}

#[test]
fn negation_and_subtraction() {
    let f = gf(3, 4);
    for a in f.elements() {
        assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
        assert_eq!(f.sub(a, a), FieldElem::ZERO);
    }
}

#[test]
fn division_and_inverse() {
    let f = gf(5, 2);
    for a in f.elements().skip(1) {
        assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
        for b in f.elements() {
            let q = f.div(b, a).unwrap();
            assert_eq!(f.mul(q, a), b);
        }
    }
    assert_eq!(f.div(FieldElem::ONE, FieldElem::ZERO), None);
    assert_eq!(f.inv(FieldElem::ZERO), None);
}

#[test]
fn subfield_strides() {
    let f = gf(2, 12);
    assert_eq!(f.subfield_stride(4).unwrap(), 273);
    assert_eq!(f.subfield_stride(12).unwrap(), 1);
    assert_eq!(f.subfield_stride(3).unwrap(), 585);
    assert!(matches!(f.subfield_stride(5), Err(Error::NotADivisor { d: 5, m: 12 })));
    for (d, s) in [(4u32, 273u64), (3, 585)] {
        let q = 1u64 << d;
        for j in 0..q - 1 {
            let x = f.g_pow(j * s);
            assert_eq!(f.pow(x, q), x, "Frobenius x^{q} = x");
            assert!(f.in_subfield(x, d));
        }
        // nothing else is fixed
        let fixed = f.elements().filter(|&x| f.in_subfield(x, d)).count() as u64;
        assert_eq!(fixed, q);
    }
}

#[test]
fn subfield_handle_embedding_is_a_homomorphism() {
    let f = gf(3, 6);
    let sub = f.subfield(2).unwrap();
    let h = sub.handle().clone();
    assert_eq!(h.order(), 9);
    for a in h.elements() {
        for b in h.elements() {
            assert_eq!(sub.embed(h.add(a, b)), f.add(sub.embed(a), sub.embed(b)));
            assert_eq!(sub.embed(h.mul(a, b)), f.mul(sub.embed(a), sub.embed(b)));
        }
        assert_eq!(sub.restrict(sub.embed(a)), Some(a));
    }
    assert_eq!(sub.restrict(f.g_pow(1)), None);
}

#[test]
fn coordinates_of_basis_vectors_and_zero() {
    let f = gf(2, 12);
    let map = CoordinateMap::polynomial_basis(f.subfield(4).unwrap()).unwrap();
    assert_eq!(map.len(), 3);
    assert_eq!(map.coords(FieldElem::ONE), vec![FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO]);
    assert_eq!(map.coords(FieldElem::ZERO), vec![FieldElem::ZERO; 3]);
    assert_eq!(map.coords(f.g_pow(2)), vec![FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE]);
}

#[test]
fn coordinates_round_trip_gf4096_over_gf16() {
    let f = gf(2, 12);
    let map = CoordinateMap::polynomial_basis(f.subfield(4).unwrap()).unwrap();
    let mut seen = std::collections::HashSet::new();
    for a in f.elements() {
        let c = map.coords(a);
        assert_eq!(map.compose(&c), a);
        assert!(seen.insert(c));
    }
    assert_eq!(seen.len(), 4096);
}

#[test]
fn dependent_basis_is_rejected() {
    let f = gf(2, 12);
    let sub = f.subfield(4).unwrap();
    // g^273 lies in GF(16), so {1, g^273, g} is dependent over GF(16)
    let basis = vec![FieldElem::ONE, f.g_pow(273), f.g_pow(1)];
    assert!(matches!(CoordinateMap::new(sub.clone(), basis), Err(Error::DependentBasis)));
    assert!(matches!(
        CoordinateMap::new(sub, vec![FieldElem::ONE]),
        Err(Error::BasisLength { got: 1, expected: 3 })
    ));
}

#[test]
fn minimal_polynomial_of_generator_is_modulus() {
    let f = gf(3, 5);
    assert_eq!(f.minimal_polynomial(f.generator()), f.modulus().to_vec());
    assert_eq!(f.minimal_polynomial(FieldElem::ONE), vec![2, 1]);
}

#[test]
fn element_strings() {
    assert_eq!(FieldElem::ZERO.to_string(), "0");
    assert_eq!(FieldElem::from_exponent(17).to_string(), "g^17");
    assert_eq!("g^17".parse::<FieldElem>().unwrap(), FieldElem::from_exponent(17));
    assert_eq!("0".parse::<FieldElem>().unwrap(), FieldElem::ZERO);
    assert!("x".parse::<FieldElem>().is_err());
    assert!("g^-1".parse::<FieldElem>().is_err());
}

#[test]
fn cached_tables_match_fresh_ones() {
    let dir = tempfile::tempdir().unwrap();
    let a = FieldHandle::new_cached(3, 4, None, dir.path()).unwrap();
    let b = FieldHandle::new_cached(3, 4, None, dir.path()).unwrap();
    let c = FieldHandle::new(3, 4, None).unwrap();
    for x in c.elements() {
        for y in c.elements().step_by(7) {
            assert_eq!(a.add(x, y), c.add(x, y));
            assert_eq!(b.add(x, y), c.add(x, y));
        }
    }
}
