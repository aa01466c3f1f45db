mod common;

use std::sync::Arc;

use proptest::prelude::*;
use strongblock::{FieldElem, FieldHandle, ProjSpace};

use common::{geometry_suite, rank_invariance_suite, rank_oracle};

fn space(p: u32, m: u32, dim: usize) -> ProjSpace {
    ProjSpace::new(Arc::new(FieldHandle::new(p, m, None).unwrap()), dim).unwrap()
}

#[test]
fn planes_and_solids_exhaustively() {
    for (p, m, dim) in [(2, 1, 2), (3, 1, 2), (2, 2, 2), (2, 3, 2), (3, 2, 2), (2, 1, 3), (3, 1, 3), (2, 2, 3)] {
        geometry_suite(&space(p, m, dim)).unwrap();
    }
}

#[test]
fn ranks_are_invariant_under_coordinate_changes() {
    rank_invariance_suite(&space(2, 3, 3), 300, 1).unwrap();
    rank_invariance_suite(&space(3, 3, 3), 300, 2).unwrap();
    rank_invariance_suite(&space(2, 6, 2), 300, 3).unwrap();
}

#[test]
fn a_line_has_q_plus_one_points() {
    let s = space(2, 3, 3);
    let (a, b) = (s.point_at(3), s.point_at(100));
    let line = s.line_through(&a, &b);
    assert_eq!(line.len(), 9);
    assert!(line.contains(&a) && line.contains(&b));
    assert_eq!(s.rank(&line), 2);
    let pencil: Vec<_> = s.lines_through_point(&a).collect();
    assert_eq!(pencil.len(), 73);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normalization_is_scalar_invariant(idx in 0u64..4161, scalar in 1u32..=63) {
        let s = space(2, 6, 2);
        let p = s.point_at(idx);
        let f = s.field();
        let v: Vec<FieldElem> = p.coords().iter().map(|&c| f.mul(c, FieldElem::from_code(scalar))).collect();
        prop_assert_eq!(s.normalize(&v).unwrap(), p.clone());
        prop_assert_eq!(s.index_of(&p), idx);
    }

    #[test]
    fn rank_matches_oracle(idx in proptest::collection::vec(0u64..585, 1..7)) {
        let s = space(2, 3, 3);
        let pts: Vec<_> = idx.iter().map(|&i| s.point_at(i)).collect();
        let rows: Vec<Vec<FieldElem>> = pts.iter().map(|p| p.coords().to_vec()).collect();
        prop_assert_eq!(s.rank(&pts), rank_oracle(s.field(), &rows));
    }
}
