//! Acceptance gate: one PASS/FAIL line per criterion, each with a pinned
//! wall-clock limit.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use flipgraph::explore::{self, Budget};
use flipgraph::harness::{self, Check, VerifyOptions, CATALAN, SPHERE3_VERTICES, SUITES};
use flipgraph::par::{self, Exec};
use flipgraph::{bounds, ExplorationCache, SurfaceSig, Triangulation};

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_checks(checks: &[Check]) -> Outcome {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} {} {}", c.id, c.params, c.error.clone().unwrap_or_else(|| c.measured.to_string())))
        .collect();
    Outcome {
        pass: !checks.is_empty() && failed.is_empty(),
        detail: if failed.is_empty() { format!("{} checks", checks.len()) } else { failed.join("; ") },
    }
}

/// Triangulations of the convex polygon on `lo..=hi` as sets of diagonals.
fn polygon_triangulations(lo: u32, hi: u32) -> Vec<BTreeSet<(u32, u32)>> {
    if hi - lo < 2 {
        return vec![BTreeSet::new()];
    }
    let mut out = Vec::new();
    for apex in lo + 1..hi {
        for left in polygon_triangulations(lo, apex) {
            for right in polygon_triangulations(apex, hi) {
                let mut s: BTreeSet<(u32, u32)> = left.union(&right).copied().collect();
                if apex - lo > 1 {
                    s.insert((lo, apex));
                }
                if hi - apex > 1 {
                    s.insert((apex, hi));
                }
                out.push(s);
            }
        }
    }
    out
}

fn opts() -> VerifyOptions {
    VerifyOptions { max_states: 10_000_000, ..VerifyOptions::default() }
}

fn catalan() -> Outcome {
    let oracle: Vec<u64> = (4..=9u32)
        .map(|n| polygon_triangulations(0, n - 1).into_iter().collect::<BTreeSet<_>>().len() as u64)
        .collect();
    if oracle != CATALAN {
        return Outcome { pass: false, detail: format!("oracle {oracle:?} disagrees with {CATALAN:?}") };
    }
    from_checks(&harness::catalan_counts(&opts()))
}

fn sphere3() -> Outcome {
    let checks = harness::finite_sphere(&opts());
    let mut o = from_checks(&checks);
    o.detail = format!("{} vertices (frozen {SPHERE3_VERTICES})", checks[0].measured["vertices"]);
    o
}

fn master() -> Outcome {
    let checks: Vec<Check> = harness::transfer(&opts()).into_iter().filter(|c| c.id == "master-inequality").collect();
    if checks.len() != 2 {
        return Outcome { pass: false, detail: format!("expected two cylinders, got {}", checks.len()) };
    }
    from_checks(&checks)
}

fn caches(exec: Exec) -> Vec<Vec<u8>> {
    let budget = Budget::default().with_exec(exec);
    let cases: [(&str, u32); 5] = [("cyl:1,1", 10), ("disk:6", 9), ("sphere:3", 20), ("pdisk:2,1", 10), ("sphere:5", 3)];
    cases
        .iter()
        .map(|&(s, r)| {
            let t = Triangulation::base(&s.parse::<SurfaceSig>().unwrap()).unwrap();
            ExplorationCache::from_region(&t, &explore::explore(&t, r, &budget, false, None)).to_bytes()
        })
        .collect()
}

fn reports() -> Vec<String> {
    SUITES.iter().map(|s| harness::verify(s, &opts()).unwrap().canonical_json()).collect()
}

fn determinism() -> Outcome {
    let n = std::thread::available_parallelism().map_or(4, |n| n.get()).max(4);
    let one = par::with_threads(1, || (reports(), caches(Exec::Parallel)));
    let many = par::with_threads(n, || (reports(), caches(Exec::Parallel)));
    let seq = caches(Exec::Sequential);
    let again = par::with_threads(n, reports);
    let mut diffs = Vec::new();
    for (i, s) in SUITES.iter().enumerate() {
        if one.0[i] != many.0[i] || many.0[i] != again[i] {
            diffs.push(format!("report {s}"));
        }
    }
    for (i, bytes) in seq.iter().enumerate() {
        if &one.1[i] != bytes || &many.1[i] != bytes {
            diffs.push(format!("cache {i}"));
        }
    }
    Outcome {
        pass: diffs.is_empty(),
        detail: if diffs.is_empty() { format!("1 vs {n} threads and sequential: identical") } else { diffs.join(", ") },
    }
}

#[test]
fn acceptance() {
    type Run = fn() -> Outcome;
    let criteria: [(u32, &str, u64, Run); 10] = [
        (1, "disk flip-graphs have Catalan many vertices", 10, catalan),
        (2, "F(Gamma) balls are 2k+1 with unique geodesics, k <= 50", 5, || from_checks(&harness::gamma_path(&opts()))),
        (3, "3-punctured sphere closure is finite", 5, sphere3),
        (4, "contraction lowers distance by the incident flips", 60, || from_checks(&harness::contraction_gap(&opts()))),
        (5, "section within deg(x) - 2 flips", 60, || from_checks(&harness::section_distance(&opts()))),
        (6, "at most 2kappa - 4 incident flips per geodesic", 120, || from_checks(&harness::incident_flips(&opts()))),
        (7, "master inequality on cylinders [2,1] and [3,1]", 600, master),
        (8, "2-punctured disk: ball bound and confined geodesics", 60, || {
            from_checks(&harness::polynomial(&opts()).into_iter().filter(|c| c.id != "cylinder-bound").collect::<Vec<_>>())
        }),
        (9, "exponential witnesses on the 5-punctured sphere", 600, || from_checks(&harness::exponential(&opts()))),
        (10, "determinism across thread counts", 1200, determinism),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let pass = out.pass && in_time;
        println!(
            "criterion {id:>2}: {} {name} [{:.2}s / {limit}s] {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
        if !pass {
            failed.push(id);
        }
    }
    // The float bound must sit strictly below the binomial count.
    for k in [2u32, 4, 6] {
        let (binom, lower) = bounds::witness_expectation(k).unwrap();
        assert!(bounds::exceeds(&binom, lower));
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
