mod common;

use proptest::prelude::*;
use strongblock::{FieldElem, FieldHandle};

use common::{field_suite, PowerTable};

#[test]
fn small_fields_exhaustively() {
    for (p, m) in [(2, 1), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2), (2, 8), (3, 5), (13, 2)] {
        let f = FieldHandle::new(p, m, None).unwrap();
        field_suite(&f, 256, 2_000, 7).unwrap();
    }
}

#[test]
fn fields_up_to_two_to_the_sixteen() {
    for (p, m) in [(2, 12), (2, 16), (3, 10), (5, 6), (7, 5), (251, 2)] {
        let f = FieldHandle::new(p, m, None).unwrap();
        field_suite(&f, 0, 20_000, 11).unwrap();
    }
}

#[test]
fn default_moduli_are_the_smallest_primitive_ones() {
    // brute force over all monic degree-m polynomials in the stated order
    for (p, m) in [(2u32, 3u32), (2, 4), (3, 2), (2, 6), (5, 2)] {
        let f = FieldHandle::new(p, m, None).unwrap();
        let first = (0..p.pow(m))
            .map(|code| {
                let mut c: Vec<u32> = (0..m).map(|i| code / p.pow(i) % p).collect();
                c.push(1);
                c
            })
            .find(|c| FieldHandle::new(p, m, Some(c)).is_ok())
            .unwrap();
        assert_eq!(f.modulus(), &first[..], "GF({p}^{m})");
    }
}

fn big_field() -> &'static FieldHandle {
    use std::sync::OnceLock;
    static F: OnceLock<FieldHandle> = OnceLock::new();
    F.get_or_init(|| FieldHandle::new(2, 20, None).unwrap())
}

fn oracle() -> &'static PowerTable {
    use std::sync::OnceLock;
    static T: OnceLock<PowerTable> = OnceLock::new();
    T.get_or_init(|| PowerTable::new(big_field()))
}

fn elem() -> impl Strategy<Value = FieldElem> {
    (0..=big_field().group_order()).prop_map(FieldElem::from_code)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn addition_matches_coefficients(a in elem(), b in elem()) {
        prop_assert_eq!(big_field().add(a, b), oracle().add(a, b));
    }

    #[test]
    fn ring_axioms(a in elem(), b in elem(), c in elem()) {
        let f = big_field();
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
    }

    #[test]
    fn division_inverts_multiplication(a in elem(), b in elem()) {
        let f = big_field();
        prop_assume!(!b.is_zero());
        prop_assert_eq!(f.div(f.mul(a, b), b), Some(a));
    }

    #[test]
    fn element_strings_round_trip(a in elem()) {
        prop_assert_eq!(a.to_string().parse::<FieldElem>().unwrap(), a);
    }
}
