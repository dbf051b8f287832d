use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use flipgraph::explore::{self, Budget, FiniteGraph};
use flipgraph::{Exec, SurfaceSig, Triangulation};

fn base(s: &str) -> Triangulation {
    Triangulation::base(&s.parse::<SurfaceSig>().unwrap()).unwrap()
}

fn ball(c: &mut Criterion) {
    let mut g = c.benchmark_group("ball");
    g.sample_size(10);
    for (sig, radius) in [("sphere:5", 3), ("cyl:3,2", 5), ("disk:9", 7)] {
        let t = base(sig);
        for exec in [Exec::Sequential, Exec::Parallel] {
            let budget = Budget::default().with_exec(exec);
            g.bench_with_input(BenchmarkId::new(format!("{exec:?}"), format!("{sig}/r{radius}")), &t, |b, t| {
                b.iter(|| explore::explore(t, radius, &budget, false, None).len())
            });
        }
    }
    g.finish();
}

fn delta(c: &mut Criterion) {
    let mut g = c.benchmark_group("delta_table");
    g.sample_size(10);
    let fg = FiniteGraph::new(&base("disk:8"), &Budget::default()).unwrap();
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_function(BenchmarkId::new(format!("{exec:?}"), "disk:8"), |b| b.iter(|| fg.delta_table(exec).values.len()));
    }
    g.finish();
}

fn meet(c: &mut Criterion) {
    let mut g = c.benchmark_group("meet");
    g.sample_size(10);
    let s = base("sphere:5");
    let t = explore::sample_roots(&s, 1, 12, 7).pop().unwrap();
    for exec in [Exec::Sequential, Exec::Parallel] {
        let budget = Budget::default().with_exec(exec);
        g.bench_function(BenchmarkId::new(format!("{exec:?}"), "sphere:5"), |b| b.iter(|| explore::meet(&s, &t, &budget, None).unwrap().distance));
    }
    g.finish();
}

criterion_group!(benches, ball, delta, meet);
criterion_main!(benches);
