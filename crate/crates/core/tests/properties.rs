use proptest::prelude::*;
use repeller_core::bounds::{count_patterns, delta_bound, stirling_binomial_bound};
use repeller_core::families::{build_phi, HopfModel2D, TriplingMap};
use repeller_core::geometry::{lebesgue_estimate, Ball, CoverSampler, GridCover, PointCloud, Region, Scale, TorusPoint};
use repeller_core::holes::{
    bad_volume, itinerary, phi_profile, sn_partition, CylinderRefiner, CylinderWord, EnumerationConfig, MapWithHoles,
    RefineConfig,
};

fn cloud(raw: &[(f64, f64)]) -> Vec<TorusPoint<2>> {
    raw.iter().map(|&(x, y)| TorusPoint::new([x, y])).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn box_counts_grow_as_boxes_shrink(raw in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 1..300)) {
        let pts = cloud(&raw);
        let ladder: Vec<Scale> = (1..=8).map(Scale::dyadic).collect();
        let covers = PointCloud(&pts).cover_ladder(&ladder).unwrap();
        for w in covers.windows(2) {
            prop_assert!(w[1].count() >= w[0].count());
            prop_assert!(w[1].count() <= 4 * w[0].count());
        }
    }

    #[test]
    fn grid_cover_roundtrip(cells in prop::collection::btree_set(0usize..4096, 0..200)) {
        let mut g = GridCover::<2>::new(Scale::dyadic(6)).unwrap();
        for &c in &cells {
            g.insert(c);
        }
        let back = GridCover::<2>::decode(&g.encode()).unwrap();
        prop_assert_eq!(back.iter().collect::<Vec<_>>(), cells.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn ball_volume_within_interval(r in 0.02..0.45f64, cx in 0.0..1.0f64, seed in any::<u64>()) {
        let ball = Ball::new(TorusPoint::new([cx, 0.3]), r);
        let est = lebesgue_estimate(&ball, 20_000, seed).unwrap();
        let exact = ball.exact_volume().unwrap();
        prop_assert!((est.value - exact).abs() <= 1.5 * est.half_width, "{est:?} vs {exact}");
    }

    #[test]
    fn pattern_count_below_bound(n in 2usize..40, l_frac in 0.0..1.0f64, t_frac in 0.0..1.0f64, m in 1usize..12) {
        let l = 1 + ((n - 2) as f64 * l_frac) as usize;
        let t_max = l.min(n - l);
        let t = 1 + ((t_max - 1) as f64 * t_frac) as usize;
        let c = count_patterns(n, l, t, m).unwrap();
        prop_assert!(c.exact <= c.bound);
    }

    #[test]
    fn stirling_holds(l in 3usize..400, frac in 0.0..1.0f64) {
        let t = 1 + (((l - 1) / 2 - 1) as f64 * frac) as usize;
        prop_assert!(stirling_binomial_bound(l, t).unwrap().pass());
    }

    #[test]
    fn delta_is_positive_and_vanishes(mu in 0.001..0.99f64, n in 1usize..200) {
        let d = delta_bound(n, mu).unwrap();
        prop_assert!(d > 0.0);
        let past = n + (8.0 / mu).ceil() as usize;
        prop_assert!(delta_bound(past + 1, mu).unwrap() < delta_bound(past, mu).unwrap());
        prop_assert!(delta_bound(past + (200.0 / mu) as usize, mu).unwrap() < 1e-6);
    }

    #[test]
    fn profile_conditions(mu in -0.5..0.5f64, w in 0.0..0.05f64) {
        let phi = build_phi(mu, 10f64.sqrt(), 0.01, 0.005, 1.5).unwrap();
        let v = phi.eval(w);
        prop_assert!(v >= 1.0 - mu - 1e-12);
        if w >= 0.01 {
            prop_assert_eq!(v, 10f64.sqrt());
        } else {
            prop_assert!(phi.derivative(w) > 0.0);
            prop_assert!(phi.derivative(w) <= phi.c0 / 0.01 + 1e-9);
        }
        if w <= 0.005 {
            prop_assert!(phi.derivative(w) >= phi.derivative(0.0) - 1e-12);
        } else {
            prop_assert!(v > 1.5);
        }
    }

    #[test]
    fn tripling_cylinders_nest(word in prop::collection::vec(0u8..2, 1..12)) {
        let (lo, hi) = TriplingMap::cylinder_interval(&word);
        let (plo, phi) = TriplingMap::cylinder_interval(&word[..word.len() - 1]);
        prop_assert!(plo <= lo && hi <= phi);
        prop_assert!(((hi - lo) - 3f64.powi(-(word.len() as i32))).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn census_is_consistent(mu in 0.02..0.2f64, n in 2usize..8, seed in 0u64..1000) {
        let m = HopfModel2D::new(mu).unwrap();
        let b = bad_volume(&m, n, m.threshold(), EnumerationConfig::new(RefineConfig::for_dimension(2, seed))).unwrap();
        prop_assert!(b.census.consistent());
        prop_assert!(b.volume_lower() <= b.volume_upper);
    }

    #[test]
    fn hopf_covers_nest(word in prop::collection::vec(0u8..10, 2..5), seed in 0u64..1000) {
        let m = HopfModel2D::new(0.1).unwrap();
        let mut r = CylinderRefiner::new(&m, RefineConfig::for_dimension(2, seed));
        let child = r.outer_cover(&word).unwrap();
        let parent = r.outer_cover(&word[..word.len() - 1]).unwrap();
        let side = child.scale().side();
        for cell in child.iter() {
            let c = child.cell_center(cell);
            let near = parent.contains(cell) || (-1i32..=1).any(|dx| (-1i32..=1).any(|dy| {
                parent.contains_point(&TorusPoint::new([c.0[0] + dx as f64 * side, c.0[1] + dy as f64 * side]))
            }));
            prop_assert!(near, "cell {cell} of {word:?} outside its prefix cover");
        }
    }

    #[test]
    fn expansion_chain_at_witnesses(word in prop::collection::vec(0u8..10, 1..5), seed in 0u64..1000) {
        let m = HopfModel2D::new(0.1).unwrap();
        let w = CylinderWord::new(word, 10).unwrap();
        if let Some(p) = phi_profile(&m, &w, RefineConfig::for_dimension(2, seed)).unwrap() {
            prop_assert!(p.product_check);
        }
    }

    #[test]
    fn first_good_sets_are_disjoint(raw in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 50)) {
        let m = HopfModel2D::new(0.1).unwrap();
        let p = sn_partition(&m, 5, m.threshold(), EnumerationConfig::new(RefineConfig::for_dimension(2, 3))).unwrap();
        for x in cloud(&raw) {
            let (it, _) = itinerary(&m, &x, 5);
            let hits = p.levels.iter().flatten().filter(|w| it.starts_with(w.symbols())).count();
            prop_assert!(hits <= 1);
            prop_assert_eq!(hits == 1, p.return_time(&m, &x).is_some());
        }
    }
}

#[test]
fn pullback_of_hole_scales_with_inverse_norm() {
    let m = HopfModel2D::new(0.1).unwrap();
    let s = m.inverse_derivative_sup();
    let mu_f = m.hole_volume();
    for j in 1..=3 {
        let region = repeller_core::geometry::FnRegion::new(
            |x: &TorusPoint<2>| {
                let mut y = *x;
                for _ in 0..j {
                    y = m.step(&y);
                }
                m.in_hole(&y)
            },
            repeller_core::geometry::BoundingBox::<2>::unit(),
            "pullback",
        );
        let est = lebesgue_estimate(&region, 40_000, j as u64).unwrap();
        let bound = s.powi(j) * mu_f * (m.symbol_count() as f64).powi(j);
        assert!(est.lower() <= bound, "j={j}: {est:?} vs {bound}");
    }
}
