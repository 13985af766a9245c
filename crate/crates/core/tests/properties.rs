use proptest::prelude::*;

use medlab_core::constructions::{cyclic_config, radial_project, sphere_lift, Hyperplane};
use medlab_core::optimizer::centroid_hinge_loss_mode;
use medlab_core::{
    enumerate_subsets, enumerate_subsets_mode, separable_linear, verify_k_centroid_shatter,
    verify_k_shatter, PointSet, Scoring, SubsetMode, SubsetQuery,
};

fn points(
    m: std::ops::RangeInclusive<usize>,
    d: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = PointSet> {
    (m, d).prop_flat_map(|(m, d)| {
        prop::collection::vec(-3.0f64..3.0, m * d)
            .prop_map(move |coords| PointSet::from_flat(d, coords).unwrap())
    })
}

fn shatters(x: &PointSet, k: usize, s: Scoring) -> bool {
    verify_k_shatter(x, k, s, SubsetMode::AtMost)
        .unwrap()
        .passed
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_bitmask_count(m in 1usize..=12, k in 1usize..=12, exact in any::<bool>()) {
        prop_assume!(k <= m);
        let mode = if exact { SubsetMode::Exactly } else { SubsetMode::AtMost };
        let got: Vec<Vec<usize>> = enumerate_subsets_mode(m, k, mode)
            .unwrap()
            .map(|s| s.indices().to_vec())
            .collect();
        let expected = (1u32..1 << m)
            .filter(|b| {
                let c = b.count_ones() as usize;
                if exact { c == k } else { c <= k }
            })
            .count();
        prop_assert_eq!(got.len(), expected);
        let mut dedup = got.clone();
        dedup.sort();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), got.len());
        prop_assert!(got.windows(2).all(|w| w[0].len() < w[1].len() || (w[0].len() == w[1].len() && w[0] < w[1])));
    }

    #[test]
    fn complement_is_separable_too(x in points(2..=8, 1..=4), mask in any::<u16>()) {
        let m = x.len();
        let idx: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!idx.is_empty() && idx.len() < m);
        let s = SubsetQuery::new(idx, m).unwrap();
        let c = SubsetQuery::new(s.complement(m), m).unwrap();
        prop_assert_eq!(
            separable_linear(&x, &s).unwrap().is_some(),
            separable_linear(&x, &c).unwrap().is_some()
        );
    }

    #[test]
    fn shattering_is_monotone_in_k(x in points(3..=7, 1..=5), k in 2usize..=3) {
        prop_assume!(k <= x.len());
        for s in Scoring::ALL {
            if shatters(&x, k, s) {
                prop_assert!(shatters(&x, k - 1, s), "{s} shattered at k={k} but not k-1");
            }
        }
    }

    #[test]
    fn centroid_shattering_implies_free_shattering(x in points(3..=7, 1..=6), k in 1usize..=2) {
        for s in Scoring::ALL {
            let r = verify_k_centroid_shatter(&x, k, s, SubsetMode::AtMost);
            if r.is_ok_and(|r| r.passed) {
                prop_assert!(shatters(&x, k, s), "{s}");
            }
        }
    }

    #[test]
    fn separating_witness_has_unit_margin(x in points(2..=8, 1..=5), mask in any::<u16>()) {
        let m = x.len();
        let idx: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!idx.is_empty());
        let s = SubsetQuery::new(idx, m).unwrap();
        if let Some(h) = separable_linear(&x, &s).unwrap() {
            let min = (0..m)
                .map(|i| {
                    let v = h.signed_value(x.point(i));
                    if s.contains(i) { v } else { -v }
                })
                .fold(f64::INFINITY, f64::min);
            prop_assert!((min - 1.0).abs() <= 1e-7, "min margin {min}");
        }
    }

    #[test]
    fn equal_norms_make_linear_and_euclidean_agree(raw in points(3..=7, 2..=4), k in 1usize..=2) {
        let x = radial_project(&raw).unwrap();
        prop_assert_eq!(shatters(&x, k, Scoring::Linear), shatters(&x, k, Scoring::Euclidean));
    }

    #[test]
    fn radial_projection_preserves_cosine_verdicts(x in points(2..=8, 2..=4), k in 1usize..=2) {
        prop_assume!(k <= x.len());
        prop_assume!(x.iter().all(|p| p.iter().map(|v| v * v).sum::<f64>() > 1e-6));
        let p = radial_project(&x).unwrap();
        prop_assert_eq!(shatters(&x, k, Scoring::Cosine), shatters(&p, k, Scoring::Cosine));
    }

    #[test]
    fn zero_loss_iff_zero_violations(x in points(2..=7, 1..=6), k in 1usize..=3, scale in 0.1f64..10.0) {
        prop_assume!(k <= x.len());
        let (loss, v) = centroid_hinge_loss_mode(&x, k, SubsetMode::Exactly).unwrap();
        prop_assert_eq!(loss == 0.0, v == 0);
        // Scaled orthonormal frames always have zero loss.
        let m = x.len();
        let frame = PointSet::from_flat(
            m,
            (0..m * m).map(|i| if i / m == i % m { scale } else { 0.0 }).collect(),
        )
        .unwrap();
        let (loss, v) = centroid_hinge_loss_mode(&frame, k, SubsetMode::Exactly).unwrap();
        prop_assert_eq!((loss, v), (0.0, 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lift_preserves_hyperplane_signs(
        x in points(1..=6, 1..=5),
        w_seed in prop::collection::vec(-2.0f64..2.0, 5),
        b in -2.0f64..2.0,
    ) {
        let d = x.dim();
        let w = &w_seed[..d];
        prop_assume!(w.iter().any(|v| *v != 0.0));
        let h = Hyperplane::new(w.to_vec(), b).unwrap();
        let lifted = sphere_lift(&x).unwrap();
        let mut wl = w.to_vec();
        wl.push(-b);
        for i in 0..x.len() {
            let v = h.signed_value(x.point(i));
            let lv: f64 = wl.iter().zip(lifted.point(i)).map(|(a, c)| a * c).sum();
            prop_assume!(v.abs() > 1e-12);
            prop_assert_eq!(v > 0.0, lv > 0.0);
        }
    }
}

#[test]
fn cyclic_polytopes_are_neighborly() {
    for k in 1..=3 {
        for m in (k + 1)..=10 {
            let x = cyclic_config(m, 2 * k).unwrap();
            for s in enumerate_subsets(m, k).unwrap() {
                assert!(
                    separable_linear(&x, &s).unwrap().is_some(),
                    "cyclic({m},{}) fails on {s}",
                    2 * k
                );
            }
        }
    }
}
