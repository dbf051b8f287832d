use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flipgraph::bounds::naive_upper_bound;
use flipgraph::explore::{self, Budget, FiniteGraph};
use flipgraph::mesh::Mesh;
use flipgraph::{ArcClass, ArcPath, ContractionContext, Exec, Frame, SurfaceSig, Triangulation};

fn frame(s: &str) -> Arc<Frame> {
    Frame::standard(&s.parse::<SurfaceSig>().unwrap()).unwrap()
}

fn graph(f: &Arc<Frame>) -> FiniteGraph {
    FiniteGraph::new(&Triangulation::frame_base(f.clone()), &Budget::default()).unwrap()
}

fn boundary_arcs(m: &Mesh) -> Vec<ArcClass> {
    m.arcs.iter().enumerate().filter(|(_, a)| a.boundary).map(|(b, _)| ArcClass::new(m, &ArcPath::Base(b as u32))).collect()
}

#[test]
fn polygon_flips() {
    for n in 4..=8u32 {
        let g = graph(&frame(&format!("disk:{n}")));
        for i in 0..g.len() as u32 {
            let t = g.state(i);
            let flippable = t.flippable_arcs();
            assert_eq!(flippable.len() as u32, n - 3);
            for a in flippable {
                let (u, b) = t.flip(&a).unwrap();
                assert_eq!(u.flip(&b).unwrap().0.key(), t.key());
            }
        }
        assert_eq!(g.edges() as u32, g.len() as u32 * (n - 3) / 2);
    }
}

#[test]
fn hexagon_metric() {
    let g = graph(&frame("disk:6"));
    let n = g.len();
    for a in 0..n {
        assert_eq!(g.dist[a][a], 0);
        for b in 0..n {
            assert_eq!(g.dist[a][b], g.dist[b][a]);
            for c in 0..n {
                assert!(g.dist[a][c] <= g.dist[a][b] + g.dist[b][c]);
            }
        }
    }
}

#[test]
fn sampled_metric_on_infinite_balls() {
    let budget = Budget::default();
    for sig in ["cyl:2,1", "cyl:2,2", "pdisk:2,2"] {
        let t = Triangulation::base(&sig.parse().unwrap()).unwrap();
        let r = explore::explore(&t, 6, &budget, true, None);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let [a, b, c] = [0; 3].map(|_| r.state(rng.gen_range(0..r.len() as u32)));
            let ab = explore::distance(a, b, &budget).unwrap();
            let bc = explore::distance(b, c, &budget).unwrap();
            let ac = explore::distance(a, c, &budget).unwrap();
            assert_eq!(ab, explore::distance(b, a, &budget).unwrap());
            assert!(ac <= ab + bc, "{sig}");
        }
    }
}

#[test]
fn counting_recurrence_from_both_ends() {
    let g = graph(&frame("disk:7"));
    let s = 0u32;
    let from_s = g.counts_from(s);
    for t in 0..g.len() as u32 {
        let from_t = g.counts_from(t);
        assert_eq!(from_t[s as usize], from_s[t as usize]);
        if t != s {
            let d = g.dist[s as usize][t as usize];
            let sum: BigUint = g.region.adj[t as usize].iter().filter(|&&(v, _)| g.dist[s as usize][v as usize] + 1 == d).map(|&(v, _)| from_s[v as usize].clone()).sum();
            assert_eq!(sum, from_s[t as usize]);
        }
    }
}

#[test]
fn finite_delta_below_naive_bound() {
    for sig in ["disk:5", "disk:6", "disk:7", "disk:8", "pdisk:1,3", "pdisk:1,4", "sphere:3"] {
        let f = frame(sig);
        let g = graph(&f);
        let table = g.delta_table(Exec::Parallel);
        assert_eq!(table, g.delta_table(Exec::Sequential));
        for (k, v) in table.values.iter().enumerate() {
            assert!(*v <= naive_upper_bound(f.sig.kappa(), k as u32), "{sig} k={k}");
        }
    }
}

#[test]
fn commutation_on_polygons() {
    for n in 4..=8u32 {
        check_commutation(&frame(&format!("disk:{n}")), None);
    }
}

#[test]
fn commutation_on_two_punctured_disk() {
    // The disk needs two boundary points for a contractible boundary arc.
    check_commutation(&frame("pdisk:2,2"), Some(6));
}

fn check_commutation(f: &Arc<Frame>, radius: Option<u32>) {
    let r = match radius {
        Some(k) => explore::explore(&Triangulation::frame_base(f.clone()), k, &Budget::default(), true, None),
        None => graph(f).region,
    };
    for ctx in ContractionContext::all(f) {
        let images: Vec<Triangulation> = (0..r.len() as u32).map(|i| ctx.contract(r.state(i)).unwrap()).collect();
        for u in 0..r.len() {
            let tu = r.state(u as u32);
            let a = tu.slot_of(&ctx.alpha).unwrap();
            for &(v, slot) in &r.adj[u] {
                let same = images[u].key() == images[v as usize].key();
                assert_eq!(same, tu.flip_is_incident(slot as usize, a));
                if !same {
                    assert!(images[u].neighbors().iter().any(|(_, w)| w.key() == images[v as usize].key()));
                }
            }
        }
    }
}

#[test]
fn section_is_a_right_inverse_on_balls() {
    let f = frame("pdisk:2,2");
    for ctx in ContractionContext::all(&f) {
        let r = explore::explore(&Triangulation::frame_base(ctx.target.clone()), 5, &Budget::default(), true, None);
        for i in 0..r.len() as u32 {
            let lift = ctx.section(r.state(i)).unwrap();
            assert_eq!(lift.degree(ctx.removed).unwrap(), 2);
            assert_eq!(ctx.contract(&lift).unwrap().key(), r.keys[i as usize]);
        }
    }
}

#[test]
fn section_walk_stays_within_degree() {
    for n in 4..=8u32 {
        let f = frame(&format!("disk:{n}"));
        let g = graph(&f);
        for ctx in ContractionContext::all(&f) {
            for i in 0..g.len() as u32 {
                let t = g.state(i);
                let w = ctx.section_distance_walk(t).unwrap();
                assert!(w.steps.len() as u32 + 2 <= w.degree);
                assert_eq!(w.end.key(), ctx.section(&ctx.contract(t).unwrap()).unwrap().key());
            }
        }
    }
}

#[test]
fn incident_flips_on_small_surfaces() {
    for sig in ["disk:6", "disk:7", "pdisk:1,5"] {
        let f = frame(sig);
        let g = graph(&f);
        let bound = 2 * f.sig.kappa() - 4;
        for alpha in boundary_arcs(&f.mesh).into_iter().filter(|a| !a.is_loop()) {
            for s in 0..g.len() as u32 {
                assert!(g.max_incident_from(s, &alpha).into_iter().all(|m| m <= bound), "{sig}");
            }
        }
    }
}

#[test]
fn contraction_gap_on_punctured_pentagon() {
    let f = frame("pdisk:1,5");
    let g = graph(&f);
    let ctx = &ContractionContext::all(&f)[0];
    let budget = Budget::default();
    for (s, t) in [(0u32, 7u32), (3, 40), (11, 90)] {
        let (nu, holds) = ctx.projected_distance_gap(g.state(s), g.state(t % g.len() as u32), &budget).unwrap();
        assert!(holds, "nu={nu}");
    }
}
