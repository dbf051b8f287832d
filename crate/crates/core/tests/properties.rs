use num_bigint::BigUint;
use proptest::prelude::*;

use flipgraph::bounds;
use flipgraph::explore::{self, sample_roots, Budget};
use flipgraph::{classify_regime, star_reduction, validate_signature, ContractionContext, Frame, Regime, SurfaceSig, Triangulation};

const SURFACES: [&str; 9] = ["disk:7", "pdisk:1,3", "pdisk:2,1", "pdisk:2,2", "cyl:1,1", "cyl:2,1", "cyl:2,2", "sphere:4", "sphere:5"];

fn walked(sig: &str, walk: u32, seed: u64) -> Triangulation {
    let t = Triangulation::base(&sig.parse::<SurfaceSig>().unwrap()).unwrap();
    sample_roots(&t, 1, walk, seed).pop().unwrap()
}

fn any_triangulation() -> impl Strategy<Value = (&'static str, Triangulation)> {
    (0..SURFACES.len(), 0u32..14, any::<u64>()).prop_map(|(i, w, seed)| (SURFACES[i], walked(SURFACES[i], w, seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flip_is_an_involution((_, t) in any_triangulation()) {
        for a in t.flippable_arcs() {
            let (u, b) = t.flip(&a).unwrap();
            prop_assert_ne!(u.key(), t.key());
            let (back, c) = u.flip(&b).unwrap();
            prop_assert_eq!(back.key(), t.key());
            prop_assert_eq!(c, a);
        }
    }

    #[test]
    fn degree_handshake((sig, t) in any_triangulation()) {
        let s: SurfaceSig = sig.parse().unwrap();
        let total: u32 = (0..s.num_marks()).map(|x| t.degree(x).unwrap()).sum();
        prop_assert_eq!(total, 2 * s.kappa());
        prop_assert_eq!(t.num_arcs() as u32, s.kappa());
        prop_assert!(t.flippable_arcs().len() as u32 <= s.kappa() - s.n());
    }

    #[test]
    fn keys_are_canonical((_, t) in any_triangulation()) {
        prop_assert_eq!(t.rebuilt().unwrap().key(), t.key());
        let back = Triangulation::from_json_str(&t.to_json_string()).unwrap();
        prop_assert_eq!(back.key(), t.key());
        let mut arcs = t.arcs();
        arcs.reverse();
        prop_assert_eq!(Triangulation::from_arcs(t.frame().clone(), &arcs).unwrap().key(), t.key());
    }

    #[test]
    fn distinct_neighbors_have_distinct_arcs((_, t) in any_triangulation()) {
        let ns = t.neighbors();
        for (i, (_, a)) in ns.iter().enumerate() {
            for (_, b) in &ns[i + 1..] {
                prop_assert_ne!(a.key(), b.key());
                prop_assert_ne!(a.arcs(), b.arcs());
            }
        }
    }

    #[test]
    fn balls_grow_and_respect_the_flip_bound((sig, t) in any_triangulation(), k in 0u32..5) {
        let s: SurfaceSig = sig.parse().unwrap();
        let r = explore::explore(&t, k, &Budget::default(), false, None);
        let sizes = r.ball_sizes();
        prop_assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        let kappa = BigUint::from(s.kappa());
        for (j, &size) in sizes.iter().enumerate() {
            // Closed surfaces can have all κ arcs flippable, so the κ^k
            // bound only holds with boundary arcs present.
            if s.n() > 0 {
                prop_assert!(BigUint::from(size) <= kappa.pow(j as u32));
            }
            let flips = BigUint::from(s.kappa() - s.n());
            let geometric: BigUint = (0..=j as u32).map(|i| flips.pow(i)).sum();
            prop_assert!(BigUint::from(size) <= geometric);
        }
    }

    #[test]
    fn explored_regions_are_consistent((_, t) in any_triangulation(), k in 1u32..4) {
        let r = explore::explore(&t, k, &Budget::default(), false, None);
        for u in 0..r.len() {
            for &(v, _) in &r.adj[u] {
                prop_assert!(r.depth[u].abs_diff(r.depth[v as usize]) <= 1);
                prop_assert!(r.adj[v as usize].iter().any(|&(w, _)| w as usize == u));
            }
            if r.depth[u] <= 1 {
                prop_assert!(r.count[u] == BigUint::from(1u32));
            }
            // Counting recurrence through the previous layer.
            if r.depth[u] > 0 {
                let sum: BigUint = r.adj[u].iter().filter(|&&(v, _)| r.depth[v as usize] + 1 == r.depth[u]).map(|&(v, _)| r.count[v as usize].clone()).sum();
                prop_assert_eq!(&sum, &r.count[u]);
            }
        }
    }

    #[test]
    fn meeting_counts_are_symmetric((sig, s) in any_triangulation(), walk in 0u32..6, seed in any::<u64>()) {
        let t = sample_roots(&s, 1, walk, seed).pop().unwrap();
        let b = Budget::default();
        let st = explore::meet(&s, &t, &b, None).unwrap();
        let ts = explore::meet(&t, &s, &b, None).unwrap();
        prop_assert_eq!(&st, &ts);
        prop_assert!(st.distance <= walk, "{}", sig);
        let r = explore::explore(&s, st.distance, &b, false, None);
        let i = r.index[&t.key()] as usize;
        prop_assert_eq!(r.depth[i], st.distance);
        prop_assert_eq!(&r.count[i], &st.count);
    }

    #[test]
    fn gamma_balls_are_paths(k in 0u32..60, at in -200i64..200) {
        let r = explore::explore(&bounds::gamma_position(at).unwrap(), k, &Budget::default(), false, None);
        prop_assert_eq!(r.len() as u32, 2 * k + 1);
        prop_assert!(r.adj.iter().all(|a| a.len() <= 2));
    }

    #[test]
    fn regimes_are_total(g in 0u32..4, p in 0u32..8, b in 0u32..4, marked in any::<bool>()) {
        let r = classify_regime(g, p, b, marked);
        prop_assert_eq!(r, classify_regime(g, p, b, marked));
    }

    #[test]
    fn star_reduction_is_idempotent(p in 0u32..5, bs in proptest::collection::vec(1u32..6, 0..4)) {
        let s = SurfaceSig { genus: 0, punctures: p, boundary: bs };
        prop_assert_eq!(star_reduction(&star_reduction(&s)), star_reduction(&s));
    }

    #[test]
    fn contraction_drops_kappa_by_two(p in 0u32..3, bs in proptest::collection::vec(1u32..6, 1..3)) {
        if let Ok(s) = validate_signature(0, p, &bs) {
            let f = Frame::standard(&s).unwrap();
            for ctx in ContractionContext::all(&f) {
                prop_assert_eq!(ctx.target.sig.kappa() + 2, s.kappa());
            }
        }
    }
}

#[test]
fn exceptional_types() {
    assert_eq!(classify_regime(0, 4, 0, true), Regime::Unknown);
    assert_eq!(classify_regime(1, 0, 1, true), Regime::Unknown);
    assert_eq!(classify_regime(0, 0, 2, true), Regime::GrowthPolynomial);
    assert_eq!(classify_regime(0, 2, 1, true), Regime::GrowthPolynomial);
}

#[test]
fn closed_surfaces_exceed_kappa_at_radius_one() {
    for (sig, ball) in [("sphere:3", 4), ("sphere:5", 10)] {
        let s: SurfaceSig = sig.parse().unwrap();
        let r = explore::explore(&Triangulation::base(&s).unwrap(), 1, &Budget::default(), false, None);
        assert_eq!(r.ball_sizes()[1], ball);
        assert!(ball as u32 > s.kappa());
    }
}
