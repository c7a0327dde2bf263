//! Exhaustive sum-constellation checks: the codebook is small enough to
//! enumerate completely for up to four users, so these are exact oracles.

use nclink_core::udcg::{BitWord, SubConstellationSet};
use proptest::prelude::*;

/// With `d = 2` every sum point has integer coordinates, so set membership
/// and distances are exact in floating point.
#[test]
fn sum_constellation_is_a_bijection_with_min_distance_d() {
    for users in 1..=4 {
        let set = SubConstellationSet::new(users, 2.0).unwrap();
        let points = set.sum_points();
        assert_eq!(points.len(), 1 << (2 * users));

        let mut seen: Vec<(f64, f64)> = points.iter().map(|p| (p.re, p.im)).collect();
        seen.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for pair in seen.windows(2) {
            assert_ne!(pair[0], pair[1], "duplicate sum point for {users} users");
        }

        let mut min_sq = f64::INFINITY;
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                min_sq = min_sq.min((a - b).norm_sqr());
            }
        }
        assert_eq!(min_sq, 4.0, "min distance must be exactly d for {users} users");

        for index in 0..points.len() {
            let word = BitWord::from_index(index, 2 * users);
            assert_eq!(word.to_index(), index);
            let parts = set.decompose(points[index]).unwrap();
            let rebuilt: nclink_core::Complex64 = parts.iter().sum();
            assert_eq!(rebuilt, points[index]);
            assert_eq!(set.decompose_index(points[index]).unwrap(), index);
        }
    }
}

#[test]
fn points_off_the_grid_are_rejected() {
    let set = SubConstellationSet::new(2, 2.0).unwrap();
    let p = set.sum_points()[5];
    assert!(set.decompose(p + nclink_core::Complex64::new(0.5, 0.0)).is_err());
    assert!(set.decompose(p * 100.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Decomposition inverts summation for arbitrary positive spacing.
    #[test]
    fn decompose_inverts_sum(users in 1usize..=4, index in 0usize..256, d in 0.01f64..100.0) {
        let index = index % (1 << (2 * users));
        let set = SubConstellationSet::new(users, d).unwrap();
        prop_assert_eq!(set.decompose_index(set.sum_points()[index]).unwrap(), index);
    }
}
