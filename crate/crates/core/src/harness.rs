//! Verification suites: measurements on concrete surfaces compared against
//! exact values and the closed-form bounds.
//!
//! A check that errors or panics is recorded as failed and the remaining
//! checks still run. [`VerifyReport::canonical_json`] drops runtimes, so two
//! runs with the same options produce identical bytes.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{self, BoundParams};
use crate::contraction::ContractionContext;
use crate::error::{Error, Result};
use crate::explore::{self, Budget, FiniteGraph};
use crate::frame::Frame;
use crate::par;
use crate::path::ArcPath;
use crate::surface::SurfaceSig;
use crate::triangulation::{ArcClass, Triangulation};

pub const SUITES: [&str; 6] = ["catalan", "gamma", "contraction", "transfer", "polynomial", "exponential"];

/// Vertex counts of the disk flip-graphs for 4..=9 marked points.
pub const CATALAN: [u64; 6] = [2, 5, 14, 42, 132, 429];

/// Vertex count of the flip-graph of the sphere with three punctures.
pub const SPHERE3_VERTICES: u64 = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub params: Value,
    pub measured: Value,
    pub expected: Value,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default)]
    pub budget_exceeded: bool,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub options: VerifyOptions,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl VerifyReport {
    fn new(suite: &str, options: &VerifyOptions, checks: Vec<Check>) -> VerifyReport {
        let pass = checks.iter().all(|c| c.pass);
        VerifyReport { suite: suite.into(), options: options.clone(), checks, pass }
    }

    pub fn budget_exceeded(&self) -> bool {
        self.checks.iter().any(|c| c.budget_exceeded)
    }

    /// Report JSON without runtimes, keys sorted.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("serializable");
        if let Some(cs) = v.get_mut("checks").and_then(Value::as_array_mut) {
            for c in cs {
                if let Some(o) = c.as_object_mut() {
                    o.remove("runtime_ms");
                }
            }
        }
        serde_json::to_string(&v).expect("serializable")
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            s.push_str(&format!("{mark} {:<28} measured={} expected={}", c.id, short(&c.measured), short(&c.expected)));
            if let Some(e) = &c.error {
                s.push_str(&format!(" error={e}"));
            }
            s.push('\n');
        }
        s.push_str(&format!("{}: {}\n", self.suite, if self.pass { "PASS" } else { "FAIL" }));
        s
    }
}

fn short(v: &Value) -> String {
    let s = v.to_string();
    if s.len() > 120 {
        format!("{}...", &s[..117])
    } else {
        s
    }
}

/// Options shared by every suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub max_states: usize,
    pub max_bytes: usize,
    /// Overrides the suite's default radius or distance range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
    /// Overrides the suite's default surface where one applies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSig>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        let b = Budget::default();
        VerifyOptions { seed: 0, max_states: b.max_states, max_bytes: b.max_bytes, radius: None, surface: None }
    }
}

impl VerifyOptions {
    pub fn budget(&self) -> Budget {
        Budget { max_states: self.max_states, max_bytes: self.max_bytes, ..Budget::default() }
    }
}

/// Runs `f` as one check; errors and panics become failures.
pub fn run_check(id: &str, params: Value, f: impl FnOnce() -> Result<(Value, Value, bool)>) -> Check {
    let start = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f));
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let (measured, expected, pass, error, budget_exceeded) = match out {
        Ok(Ok((m, e, p))) => (m, e, p, None, false),
        Ok(Err(e)) => (Value::Null, Value::Null, false, Some(e.to_string()), matches!(e, Error::BudgetExceeded { .. })),
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            (Value::Null, Value::Null, false, Some(format!("panic: {}", msg.unwrap_or_default())), false)
        }
    };
    Check { id: id.into(), params, measured, expected, pass, error, budget_exceeded, runtime_ms }
}

/// Runs a suite by name.
pub fn verify(suite: &str, opts: &VerifyOptions) -> Result<VerifyReport> {
    let checks = match suite {
        "catalan" => [catalan_counts(opts), finite_sphere(opts)].concat(),
        "gamma" => gamma_path(opts),
        "contraction" => [contraction_gap(opts), section_distance(opts), incident_flips(opts)].concat(),
        "transfer" => transfer(opts),
        "polynomial" => polynomial(opts),
        "exponential" => exponential(opts),
        _ => return Err(Error::UnknownSuite(suite.into())),
    };
    Ok(VerifyReport::new(suite, opts, checks))
}

fn base(s: &str) -> Triangulation {
    Triangulation::base(&s.parse::<SurfaceSig>().expect("valid shorthand")).expect("triangulable")
}

fn big(v: &BigUint) -> Value {
    Value::String(v.to_string())
}

/// Disk flip-graph sizes against the Catalan numbers.
pub fn catalan_counts(opts: &VerifyOptions) -> Vec<Check> {
    (4u32..=9)
        .map(|n| {
            let sig = format!("disk:{n}");
            run_check("catalan", json!({ "surface": sig }), || {
                let r = explore::closure(&base(&sig), &opts.budget(), false)?;
                let want = CATALAN[n as usize - 4];
                Ok((json!(r.len()), json!(want), r.closed && r.len() as u64 == want))
            })
        })
        .collect()
}

/// The three-punctured sphere has a finite flip-graph.
pub fn finite_sphere(opts: &VerifyOptions) -> Vec<Check> {
    vec![run_check("finite-sphere", json!({ "surface": "sphere:3" }), || {
        let r = explore::closure(&base("sphere:3"), &opts.budget(), false)?;
        Ok((json!({ "vertices": r.len(), "closed": r.closed }), json!({ "vertices": SPHERE3_VERTICES, "closed": true }), r.closed && r.len() as u64 == SPHERE3_VERTICES))
    })]
}

/// F(Γ): balls of size 2k+1 and unique geodesics up to distance `radius`.
pub fn gamma_path(opts: &VerifyOptions) -> Vec<Check> {
    let k = opts.radius.unwrap_or(50);
    let budget = opts.budget();
    let positions = [-(k as i64), 0, k as i64];
    let mut out = vec![run_check("gamma-ball-sizes", json!({ "radius": k, "centers": positions }), || {
        let mut measured = Vec::new();
        let mut pass = true;
        for &i in &positions {
            let r = explore::explore(&bounds::gamma_position(i)?, k, &budget, false, None);
            let sizes = r.ball_sizes();
            pass &= !r.exceeded && sizes.len() == k as usize + 1 && sizes.iter().enumerate().all(|(j, &s)| s == 2 * j + 1);
            pass &= r.adj.iter().enumerate().all(|(v, a)| a.len() == 2 || (a.len() == 1 && r.depth[v] == k));
            measured.push(json!({ "center": i, "last": sizes.last(), "max_degree": r.adj.iter().map(Vec::len).max() }));
        }
        Ok((json!(measured), json!({ "ball": "2k+1", "last": 2 * k + 1, "max_degree": 2 }), pass))
    })];
    out.push(run_check("gamma-unique-geodesics", json!({ "radius": k, "centers": positions }), || {
        let roots = positions.iter().map(|&i| bounds::gamma_position(i)).collect::<Result<Vec<_>>>()?;
        let t = explore::delta_table(&roots, k, &budget, false)?;
        let max = t.values.iter().skip(1).max().cloned().unwrap_or_default();
        let pass = t.values.len() == k as usize + 1 && t.values.iter().all(|v| *v == BigUint::from(1u32));
        Ok((json!({ "max_count": big(&max), "distances": t.values.len() - 1 }), json!({ "max_count": "1", "distances": k }), pass))
    }));
    out.push(run_check("gamma-distances", json!({ "pairs": [[-7, 5], [0, k], [3, -(k as i64) + 3]] }), || {
        let mut pass = true;
        let mut measured = Vec::new();
        for (i, j) in [(-7i64, 5i64), (0, k as i64), (3, 3 - k as i64)] {
            let m = explore::meet(&bounds::gamma_position(i)?, &bounds::gamma_position(j)?, &budget, None)?;
            pass &= m.distance as i64 == (i - j).abs() && m.count == BigUint::from(1u32);
            measured.push(json!([m.distance, big(&m.count)]));
        }
        Ok((json!(measured), json!("distance |i-j| with one geodesic"), pass))
    }));
    out
}

/// Contraction and the finite flip-graph of its target, with every source
/// vertex mapped to its image index.
struct Contracted {
    ctx: ContractionContext,
    target: FiniteGraph,
    image: Vec<u32>,
}

fn contracted(g: &FiniteGraph, frame: &Arc<Frame>, budget: &Budget) -> Result<Vec<Contracted>> {
    ContractionContext::all(frame)
        .into_iter()
        .map(|ctx| {
            let target = FiniteGraph::new(&Triangulation::frame_base(ctx.target.clone()), budget)?;
            let image = (0..g.len() as u32)
                .map(|i| {
                    let c = ctx.contract(g.state(i))?;
                    target.index_of(&c).ok_or_else(|| Error::InvalidTriangulation("contraction left the target graph".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Contracted { ctx, target, image })
        })
        .collect()
}

fn finite(sig: &str, budget: &Budget) -> Result<(Arc<Frame>, FiniteGraph)> {
    let frame = Frame::standard(&sig.parse()?)?;
    let g = FiniteGraph::new(&Triangulation::frame_base(frame.clone()), budget)?;
    Ok((frame, g))
}

/// d(T,T′) ≥ d(T∖α,T′∖α) + ν over all pairs and all contractible boundary arcs.
pub fn contraction_gap(opts: &VerifyOptions) -> Vec<Check> {
    let budget = opts.budget();
    ["disk:4", "disk:5", "disk:6", "disk:7", "pdisk:1,4"]
        .iter()
        .map(|&sig| {
            run_check("contraction-gap", json!({ "surface": sig, "pairs": "all", "arcs": "all boundary, both ends" }), || {
                let (frame, g) = finite(sig, &budget)?;
                let mut pairs = 0u64;
                let mut violations = 0u64;
                let mut min_slack = i64::MAX;
                for c in contracted(&g, &frame, &budget)? {
                    let idx: Vec<u32> = (0..g.len() as u32).collect();
                    let per = par::map(budget.exec, &idx, |&s| {
                        let nu = g.max_incident_from(s, &c.ctx.alpha);
                        let mut worst = i64::MAX;
                        let mut bad = 0u64;
                        for v in 0..g.len() {
                            let d = g.dist[s as usize][v] as i64;
                            let dc = c.target.dist[c.image[s as usize] as usize][c.image[v] as usize] as i64;
                            let slack = d - dc - nu[v] as i64;
                            worst = worst.min(slack);
                            bad += (slack < 0) as u64;
                        }
                        (worst, bad)
                    });
                    for (w, b) in per {
                        min_slack = min_slack.min(w);
                        violations += b;
                    }
                    pairs += (g.len() * g.len()) as u64;
                }
                Ok((json!({ "pairs": pairs, "violations": violations, "min_slack": min_slack }), json!({ "violations": 0, "min_slack": ">= 0" }), violations == 0))
            })
        })
        .collect()
}

/// d(T, section(T∖α)) ≤ deg_T(x) − 2 on every triangulation.
pub fn section_distance(opts: &VerifyOptions) -> Vec<Check> {
    let budget = opts.budget();
    (4u32..=8)
        .map(|n| {
            let sig = format!("disk:{n}");
            run_check("section-distance", json!({ "surface": sig, "triangulations": "all", "arcs": "all boundary, both ends" }), || {
                let (frame, g) = finite(&sig, &budget)?;
                let mut cases = 0u64;
                let mut violations = 0u64;
                let mut max_excess = i64::MIN;
                for ctx in ContractionContext::all(&frame) {
                    let idx: Vec<u32> = (0..g.len() as u32).collect();
                    let per = par::map(budget.exec, &idx, |&i| -> Result<i64> {
                        let t = g.state(i);
                        let lift = ctx.section(&ctx.contract(t)?)?;
                        let j = g.index_of(&lift).ok_or_else(|| Error::InvalidTriangulation("section left the graph".into()))?;
                        Ok(g.dist[i as usize][j as usize] as i64 - (t.degree(ctx.removed)? as i64 - 2))
                    });
                    for e in per {
                        let e = e?;
                        cases += 1;
                        max_excess = max_excess.max(e);
                        violations += (e > 0) as u64;
                    }
                }
                Ok((json!({ "cases": cases, "violations": violations, "max_excess": max_excess }), json!({ "violations": 0, "max_excess": "<= 0" }), violations == 0))
            })
        })
        .collect()
}

/// At most 2κ−4 flips incident to a boundary arc along any geodesic.
pub fn incident_flips(opts: &VerifyOptions) -> Vec<Check> {
    let budget = opts.budget();
    (4u32..=7)
        .map(|n| {
            let sig = format!("disk:{n}");
            let kappa = 2 * n - 3;
            run_check("incident-flips", json!({ "surface": sig, "pairs": "all", "geodesics": "all" }), || {
                let (frame, g) = finite(&sig, &budget)?;
                let mut max = 0u32;
                for (b, _) in frame.mesh.arcs.iter().enumerate().filter(|(_, a)| a.boundary) {
                    let alpha = ArcClass::new(&frame.mesh, &ArcPath::Base(b as u32));
                    let idx: Vec<u32> = (0..g.len() as u32).collect();
                    let per = par::map(budget.exec, &idx, |&s| g.max_incident_from(s, &alpha).into_iter().max().unwrap_or(0));
                    max = max.max(per.into_iter().max().unwrap_or(0));
                }
                let bound = 2 * kappa - 4;
                Ok((json!({ "max_incident": max }), json!({ "at_most": bound }), max <= bound))
            })
        })
        .collect()
}

/// Largest ball size per radius over `roots`.
fn lambda_table(roots: &[Triangulation], k: u32, budget: &Budget) -> Result<Vec<BigUint>> {
    let per = par::map(budget.exec, roots, |t| {
        let r = explore::explore(t, k, &Budget { exec: par::Exec::Sequential, ..*budget }, false, None);
        if r.exceeded {
            return Err(Error::BudgetExceeded { reached_radius: r.reached, states: r.len() });
        }
        Ok(r.ball_sizes())
    });
    let mut best = vec![0usize; k as usize + 1];
    for sizes in per {
        for (j, s) in sizes?.into_iter().enumerate() {
            best[j] = best[j].max(s);
        }
    }
    Ok(best.into_iter().map(BigUint::from).collect())
}

/// The base triangulation and seeded random-walk roots around it.
fn roots_for(sig: &SurfaceSig, seed: u64) -> Result<Vec<Triangulation>> {
    let t = Triangulation::base(sig)?;
    let mut roots = vec![t.clone()];
    roots.extend(explore::sample_roots(&t, 8, 6, seed));
    Ok(roots)
}

fn at(v: &[BigUint], k: usize) -> BigUint {
    v.get(k).cloned().unwrap_or_default()
}

/// Measured Λ_k and Δ̃_k for a surface: exact for Γ and finite graphs,
/// sampled over seeded roots otherwise.
struct Measured {
    lambda: Vec<BigUint>,
    delta: Vec<BigUint>,
    delta_tilde: Vec<BigUint>,
    centers: &'static str,
}

fn measure(sig: &SurfaceSig, k: u32, seed: u64, budget: &Budget) -> Result<Measured> {
    let exact = *sig == bounds::gamma_sig();
    let roots = if exact { vec![Triangulation::base(sig)?] } else { roots_for(sig, seed)? };
    let lambda = lambda_table(&roots, k, budget)?;
    let t = explore::delta_table(&roots, k, budget, exact)?;
    let mut delta = t.values.clone();
    delta.resize(k as usize + 1, BigUint::default());
    let mut delta_tilde = t.tilde();
    let last = delta_tilde.last().cloned().unwrap_or_default();
    delta_tilde.resize(k as usize + 1, last);
    Ok(Measured { lambda, delta, delta_tilde, centers: if exact { "path graph (vertex-transitive)" } else { "base plus 8 seeded walks of length 6" } })
}

/// Master inequality and both transfer lemmas on cylinders.
pub fn transfer(opts: &VerifyOptions) -> Vec<Check> {
    let k = opts.radius.unwrap_or(5);
    let budget = opts.budget();
    let sigs: Vec<SurfaceSig> = match &opts.surface {
        Some(s) => vec![s.clone()],
        None => vec!["cyl:2,1".parse().unwrap(), "cyl:3,1".parse().unwrap()],
    };
    let mut out = Vec::new();
    for sig in sigs {
        let star = sig.star();
        let (kappa, n, b) = (sig.kappa(), sig.n(), sig.b());
        let params = json!({ "surface": sig.shorthand(), "star": star.shorthand(), "k_max": k, "seed": opts.seed });
        let measured = (|| -> Result<(Measured, Measured)> { Ok((measure(&sig, k, opts.seed, &budget)?, measure(&star, k, opts.seed, &budget)?)) })();
        let (m, ms) = match measured {
            Ok(x) => x,
            Err(e) => {
                out.push(run_check("transfer-measure", params, || Err(e)));
                continue;
            }
        };
        out.push(run_check("master-inequality", json!({ "centers": m.centers, "star_centers": ms.centers, "params": params }), || {
            let mut rows = Vec::new();
            let mut pass = true;
            for j in 1..=k as usize {
                let bp = BoundParams { kappa, n, b, k: j as u32, lambda_star_k: at(&ms.lambda, j), delta_tilde_star_k: at(&ms.delta_tilde, j) };
                let bound = bounds::master_upper_bound(&bp)?;
                pass &= at(&m.delta, j) <= bound;
                rows.push(json!({ "k": j, "delta": big(&at(&m.delta, j)), "lambda_star": big(&bp.lambda_star_k), "delta_tilde_star": big(&bp.delta_tilde_star_k), "bound_digits": bound.to_string().len() }));
            }
            Ok((json!(rows), json!("delta <= master bound"), pass))
        }));
        out.push(run_check("lambda-transfer", json!({ "centers": m.centers, "params": params }), || {
            let mut rows = Vec::new();
            let mut pass = true;
            for j in 0..=k as usize {
                let bound = bounds::lambda_transfer_bound(kappa, n, b, &at(&ms.lambda, j))?;
                pass &= at(&m.lambda, j) <= bound;
                rows.push(json!({ "k": j, "lambda": big(&at(&m.lambda, j)), "bound": big(&bound) }));
            }
            Ok((json!(rows), json!("lambda <= (2kappa-4)^(n-b) lambda_star"), pass))
        }));
        out.push(run_check("delta-transfer", json!({ "centers": m.centers, "params": params }), || {
            let frame = Frame::standard(&sig)?;
            let ctx = ContractionContext::all(&frame).into_iter().next().ok_or_else(|| Error::DomainError("no contractible boundary arc".into()))?;
            let contracted_sig = ctx.target.sig.clone();
            let mc = measure(&contracted_sig, k, opts.seed, &budget)?;
            let mut rows = Vec::new();
            let mut pass = true;
            for j in 1..=k as usize {
                let bound = bounds::delta_transfer_bound(kappa, &at(&m.lambda, j), &at(&mc.delta_tilde, j))?;
                pass &= at(&m.delta, j) <= bound;
                rows.push(json!({ "k": j, "delta": big(&at(&m.delta, j)), "contracted": contracted_sig.shorthand(), "bound_digits": bound.to_string().len() }));
            }
            Ok((json!(rows), json!("delta <= tilde_delta(contracted)^(2kappa) lambda^(2kappa)"), pass))
        }));
    }
    out
}

/// The arc between the two punctures of the 2-punctured disk.
fn avoids_epsilon(sig: &SurfaceSig) -> impl Fn(&Triangulation) -> bool + Sync {
    let n = sig.n();
    let ends = [n, n + 1];
    move |t: &Triangulation| !t.arcs().iter().any(|a| a.endpoints == ends)
}

/// Ball growth of the 2-punctured disk, confined geodesics in G′, and the
/// cylinder bound.
pub fn polynomial(opts: &VerifyOptions) -> Vec<Check> {
    let budget = opts.budget();
    let k = opts.radius.unwrap_or(10);
    let given = opts.surface.clone().unwrap_or_else(|| "pdisk:2,1".parse().unwrap());
    let sig = given.star();
    let mut out = Vec::new();
    if sig.punctures != 2 || sig.b() != 1 {
        out.push(run_check("polynomial-surface", json!({ "surface": given.shorthand() }), || {
            Err(Error::DomainError("the polynomial suite needs a 2-punctured disk".into()))
        }));
        return out;
    }
    out.push(run_check("star-ball-bound", json!({ "surface": sig.shorthand(), "k_max": k, "seed": opts.seed, "centers": "base plus 8 seeded walks of length 6" }), || {
        let lam = lambda_table(&roots_for(&sig, opts.seed)?, k, &budget)?;
        let pass = lam.iter().enumerate().all(|(j, l)| *l <= BigUint::from(8 * (2 * j + 1)));
        Ok((json!(lam.iter().map(big).collect::<Vec<_>>()), json!("8(2k+1)"), pass))
    }));
    out.push(run_check("confined-geodesics", json!({ "surface": sig.shorthand(), "window": 12, "max_pair_distance": 7 }), || confined_geodesics(&sig, 12, &budget)));
    out.push(run_check("cylinder-bound", json!({ "surface": "cyl:2,1", "k_max": 5, "seed": opts.seed }), || {
        let cyl: SurfaceSig = "cyl:2,1".parse()?;
        let m = measure(&cyl, 5, opts.seed, &budget)?;
        let mut pass = true;
        let mut rows = Vec::new();
        for j in 1..=5usize {
            let bound = bounds::cylinder_upper_bound(cyl.kappa(), cyl.n(), cyl.b(), j as u32)?;
            pass &= at(&m.delta, j) <= bound;
            rows.push(json!({ "k": j, "delta": big(&at(&m.delta, j)), "bound_digits": bound.to_string().len() }));
        }
        Ok((json!(rows), json!("delta <= (2kappa-4)^((n-b)r) (2k+1)^(2(r-1))"), pass))
    }));
    out
}

/// Longest geodesic of F whose vertices all avoid ε, among pairs of G′ at
/// G′-distance at most 7 around a G′ root. A confined geodesic of length 7
/// or more would contain one of length exactly 7, so this window decides
/// the bound of 6 up to the symmetry of G′.
fn confined_geodesics(sig: &SurfaceSig, window: u32, budget: &Budget) -> Result<(Value, Value, bool)> {
    let keep = avoids_epsilon(sig);
    let start = explore::explore(&Triangulation::base(sig)?, 4, budget, true, None);
    let root = (0..start.len() as u32)
        .map(|i| start.state(i))
        .find(|t| keep(t))
        .ok_or_else(|| Error::DomainError("no triangulation avoiding epsilon near the base".into()))?
        .clone();
    let line = explore::explore(&root, window, budget, true, Some(&keep));
    let max_degree = line.adj.iter().map(Vec::len).max().unwrap_or(0);
    let idx: Vec<u32> = (0..line.len() as u32).collect();
    let per = par::map(budget.exec, &idx, |&u| -> Result<(u32, u64)> {
        let inner = Budget { exec: par::Exec::Sequential, ..*budget };
        let near = explore::explore(line.state(u), 7, &inner, true, Some(&keep));
        let mut longest = 0;
        let mut pairs = 0;
        for v in 1..near.len() as u32 {
            let d = explore::distance(near.state(0), near.state(v), &inner)?;
            pairs += 1;
            if d == near.depth[v as usize] {
                longest = longest.max(d);
            }
        }
        Ok((longest, pairs))
    });
    let mut longest = 0;
    let mut pairs = 0;
    for r in per {
        let (l, p) = r?;
        longest = longest.max(l);
        pairs += p;
    }
    let pass = longest <= 6 && max_degree <= 2;
    Ok((json!({ "longest_confined": longest, "pairs": pairs, "g_prime_vertices": line.len(), "g_prime_max_degree": max_degree }), json!({ "longest_confined": "<= 6", "g_prime_max_degree": 2 }), pass))
}

/// Product witnesses at even distances, against the binomial and the
/// closed-form lower bound.
pub fn exponential(opts: &VerifyOptions) -> Vec<Check> {
    let budget = opts.budget();
    let sig = opts.surface.clone().unwrap_or_else(|| "sphere:5".parse().unwrap());
    let ks: Vec<u32> = match opts.radius {
        Some(r) => (2..=r).step_by(2).collect(),
        None => vec![2, 4, 6],
    };
    ks.into_iter()
        .map(|k| {
            run_check("product-witness", json!({ "surface": sig.shorthand(), "k": k }), || {
                let w = bounds::product_witness(&sig, k, &budget)?;
                let rep = explore::meet(&w.source, &w.target, &budget, None)?;
                let convex = explore::convexity_check(&w.source, &w.target, &w.required, &budget)?;
                let (binom, lower) = bounds::witness_expectation(k)?;
                let pass = rep.distance == k && rep.count >= binom && bounds::exceeds(&rep.count, lower) && convex;
                Ok((
                    json!({ "distance": rep.distance, "count": big(&rep.count), "geodesics_keep_required_arcs": convex, "grid": [w.grid.0, w.grid.1] }),
                    json!({ "distance": k, "count_at_least": big(&binom), "count_above": format!("{lower:.6}") }),
                    pass,
                ))
            })
        })
        .collect()
}
