use pcrc_core::mcsim::{simulate_signals, SimConfig};
use pcrc_core::optimize::{check_lemma6, check_lemma7, maximize_weighted, GAP_TOLERANCE};
use pcrc_core::regions::{
    inner_bounds, outer_bounds, polytope_vertices, support, union_support, BoundKind, RegionBounds,
    SplitGrid,
};
use pcrc_core::{ChannelParams, PowerSplit, RateTriple, Weights};
use proptest::prelude::*;

fn weak_channel() -> impl Strategy<Value = ChannelParams> {
    (
        -5.0f64..5.0,
        -0.999f64..0.999,
        0.0f64..20.0,
        0.0f64..20.0,
        0.05f64..4.0,
    )
        .prop_map(|(a, b, p1, p2, mu)| ChannelParams::new(a, b, p1, p2, mu).unwrap())
}

/// b >= 0: the regime where the outer caps grow with beta.
fn weak_nonneg_channel() -> impl Strategy<Value = ChannelParams> {
    (
        -5.0f64..5.0,
        0.0f64..0.999,
        0.0f64..20.0,
        0.0f64..20.0,
        0.05f64..4.0,
    )
        .prop_map(|(a, b, p1, p2, mu)| ChannelParams::new(a, b, p1, p2, mu).unwrap())
}

fn split() -> impl Strategy<Value = PowerSplit> {
    (0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(a, b)| PowerSplit::new(a, b).unwrap())
}

fn weights() -> impl Strategy<Value = Weights> {
    (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0usize..3).prop_map(|(x, y, z, boost)| {
        let mut v = [x, y, z];
        v[boost] += 0.01;
        Weights::new(v[0], v[1], v[2]).unwrap()
    })
}

/// Oracle for a per-split support: scan a dense grid of feasible (R0, R1)
/// points directly from the constraint list.
fn dense_scan(rb: &RegionBounds, w: &Weights, step: f64) -> f64 {
    let r1_top = match rb.shape {
        pcrc_core::RegionShape::Outer { sum_cap } => sum_cap,
        pcrc_core::RegionShape::Inner { .. } => rb.r1_cap().unwrap(),
    };
    let mut best = f64::NEG_INFINITY;
    let n0 = (rb.r0_cap / step).ceil() as usize + 1;
    let n1 = (r1_top / step).ceil() as usize + 1;
    for i in 0..=n0 {
        let r0 = (i as f64 * step).min(rb.r0_cap);
        for j in 0..=n1 {
            let r1 = (j as f64 * step).min(r1_top);
            let pt = RateTriple {
                r0,
                r1,
                r2: rb.r2_cap,
            };
            let ratio_ok = r1 >= rb.mu * r0;
            if ratio_ok && rb.contains_point(&pt, 0.0) {
                best = best.max(w.dot(&pt));
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn telescoping_sum_identity(ch in weak_channel(), sp in split()) {
        let inner = inner_bounds(&ch, sp);
        let outer = outer_bounds(&ch, sp).unwrap();
        let pcrc_core::RegionShape::Inner { r1_cap_legitimate, .. } = inner.shape else { unreachable!() };
        let diff = inner.r0_cap + r1_cap_legitimate - outer.sum_cap().unwrap();
        prop_assert!(diff.abs() <= 1e-12, "{diff}");
    }

    #[test]
    fn caps_are_finite_and_ordered(ch in weak_channel(), sp in split()) {
        let outer = outer_bounds(&ch, sp).unwrap();
        let inner = inner_bounds(&ch, sp);
        for v in [outer.r0_cap, outer.sum_cap().unwrap(), outer.r2_cap, inner.r0_cap, inner.r1_cap().unwrap()] {
            prop_assert!(v.is_finite() && v >= 0.0);
        }
        prop_assert!(outer.sum_cap().unwrap() >= outer.r0_cap);
        prop_assert_eq!(outer.r2_cap, inner.r2_cap);
    }

    #[test]
    fn inner_vertices_inside_outer(ch in weak_channel(), sp in split()) {
        let outer = outer_bounds(&ch, sp).unwrap();
        for v in polytope_vertices(&inner_bounds(&ch, sp)) {
            prop_assert!(v.r0 <= outer.r0_cap + 1e-12);
            prop_assert!(v.r0 + v.r1 <= outer.sum_cap().unwrap() + 1e-12);
            prop_assert!(v.r2 <= outer.r2_cap + 1e-12);
        }
    }

    #[test]
    fn vertices_respect_ratio(ch in weak_channel(), sp in split()) {
        for rb in [outer_bounds(&ch, sp).unwrap(), inner_bounds(&ch, sp)] {
            for v in polytope_vertices(&rb) {
                prop_assert!(pcrc_core::model::ratio_constraint_satisfied(&v, &ch));
                prop_assert!(rb.contains_point(&v, 1e-12));
            }
        }
    }

    #[test]
    fn outer_caps_grow_with_beta(ch in weak_nonneg_channel(), alpha in 0.0f64..=1.0, b0 in 0.0f64..=1.0, b1 in 0.0f64..=1.0, w in weights()) {
        let (lo, hi) = if b0 <= b1 { (b0, b1) } else { (b1, b0) };
        let low = outer_bounds(&ch, PowerSplit::new(alpha, lo).unwrap()).unwrap();
        let high = outer_bounds(&ch, PowerSplit::new(alpha, hi).unwrap()).unwrap();
        prop_assert!(high.r0_cap >= low.r0_cap - 1e-12);
        prop_assert!(high.sum_cap().unwrap() >= low.sum_cap().unwrap() - 1e-12);
        let top = outer_bounds(&ch, PowerSplit::new(alpha, 1.0).unwrap()).unwrap();
        prop_assert!(support(&top, &w).value >= support(&low, &w).value - 1e-12);
    }

    #[test]
    fn support_is_positively_homogeneous(ch in weak_channel(), sp in split(), w in weights(), c in 0.01f64..100.0) {
        for rb in [outer_bounds(&ch, sp).unwrap(), inner_bounds(&ch, sp)] {
            let s = support(&rb, &w);
            let sc = support(&rb, &w.scaled(c).unwrap());
            prop_assert!((sc.value - c * s.value).abs() <= 1e-10 * (1.0 + sc.value.abs()));
            prop_assert_eq!(sc.maximizer, s.maximizer);
        }
    }

    #[test]
    fn support_matches_dense_scan(
        a in 0.0f64..2.0, extra in 0.0f64..2.0, c in 0.0f64..2.0, mu in 0.1f64..3.0, w in weights(),
    ) {
        let sp = PowerSplit::new(0.5, 0.5).unwrap();
        let rb = RegionBounds::from_outer_caps(sp, mu, a, a + extra, c);
        let s = support(&rb, &w);
        let scan = dense_scan(&rb, &w, 1e-2);
        let lip = w.mu0() + w.mu1();
        prop_assert!(s.value >= scan - 1e-12);
        prop_assert!(s.value - scan <= 2e-2 * lip + 1e-12, "{} vs {}", s.value, scan);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inner_hull_never_beats_outer(ch in weak_channel(), w in weights()) {
        let grid = SplitGrid::new(21, 21, 60).unwrap();
        let outer = union_support(&ch, &w, BoundKind::Outer, grid).unwrap();
        let inner = union_support(&ch, &w, BoundKind::Inner, grid).unwrap();
        prop_assert!(inner.value <= outer.value + 1e-9, "{} > {}", inner.value, outer.value);
    }

    #[test]
    fn reports_are_deterministic(ch in weak_channel(), w in weights()) {
        let grid = SplitGrid::new(11, 11, 30).unwrap();
        if w.mu0() >= w.mu1() {
            let r = check_lemma6(&ch, &w, grid).unwrap();
            prop_assert_eq!(&r, &check_lemma6(&ch, &w, grid).unwrap());
            prop_assert!(r.gap >= -GAP_TOLERANCE);
        } else {
            let r = check_lemma7(&ch, &w, grid).unwrap();
            prop_assert_eq!(&r, &check_lemma7(&ch, &w, grid).unwrap());
            prop_assert!(r.gap >= -GAP_TOLERANCE);
        }
    }

    #[test]
    fn maximizer_lies_in_its_split_region(ch in weak_channel(), w in weights()) {
        let grid = SplitGrid::new(11, 11, 30).unwrap();
        for kind in [BoundKind::Outer, BoundKind::Inner] {
            let s = maximize_weighted(&ch, &w, kind, grid).unwrap();
            let rb = pcrc_core::regions::bounds(&ch, kind, s.split).unwrap();
            prop_assert!(rb.contains_point(&s.maximizer, 1e-12));
            prop_assert!((w.dot(&s.maximizer) - s.value).abs() <= 1e-12 * (1.0 + s.value));
        }
    }
}

#[test]
fn simulation_invariants_hold_for_random_seeds() {
    let ch = ChannelParams::new(1.3, 0.4, 5.0, 8.0, 1.0).unwrap();
    let sp = PowerSplit::new(0.35, 0.6).unwrap();
    for seed in 0..4 {
        let cfg = SimConfig::new(ch, sp, 100_000, seed).unwrap();
        let st = simulate_signals(&cfg);
        assert!(st.var_x1.value >= 0.0 && st.var_x1.std_err > 0.0);
        let report = pcrc_core::mcsim::verify_all(&st, &ch, &sp);
        assert!(report.passed(), "seed {seed}: {report:?}");
    }
}
