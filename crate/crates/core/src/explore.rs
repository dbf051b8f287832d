//! Breadth-first exploration of flip-graphs.
//!
//! Vertices are identified by canonical keys. Each BFS layer is expanded with
//! [`par::map`], which preserves frontier order, and merged sequentially, so
//! node numbering, depths and counts do not depend on the thread count.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cache::ExplorationCache;
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::triangulation::{ArcClass, CanonicalKey, Triangulation};

/// Resource limits and scheduling for an exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_states: usize,
    pub max_bytes: usize,
    pub exec: Exec,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_states: 10_000_000, max_bytes: 8 << 30, exec: Exec::Parallel }
    }
}

impl Budget {
    pub fn states(max_states: usize) -> Self {
        Budget { max_states, ..Budget::default() }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

/// Predicate restricting exploration to an induced subgraph.
pub type Filter<'a> = &'a (dyn Fn(&Triangulation) -> bool + Sync);

/// An explored region of a flip-graph around a root.
#[derive(Debug, Clone)]
pub struct Region {
    pub keys: Vec<CanonicalKey>,
    pub index: HashMap<CanonicalKey, u32>,
    pub depth: Vec<u32>,
    /// Geodesic counts from the root.
    pub count: Vec<BigUint>,
    /// Per node: (neighbor, slot flipped in this node), sorted by neighbor key.
    pub adj: Vec<Vec<(u32, u32)>>,
    /// Triangulations, when requested.
    pub states: Vec<Option<Triangulation>>,
    pub radius: u32,
    /// Largest radius whose ball, with all its edges, is fully explored.
    pub reached: u32,
    /// The whole connected component was explored.
    pub closed: bool,
    pub exceeded: bool,
}

impl Region {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Number of vertices at each depth.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let top = self.depth.iter().copied().max().unwrap_or(0) as usize;
        let mut v = vec![0; top + 1];
        for &d in &self.depth {
            v[d as usize] += 1;
        }
        v
    }

    /// Ball sizes |B(root, k)| for k = 0..=reached.
    pub fn ball_sizes(&self) -> Vec<usize> {
        let mut acc = 0;
        self.layer_sizes()
            .into_iter()
            .take(self.reached as usize + 1)
            .map(|s| {
                acc += s;
                acc
            })
            .collect()
    }

    pub fn state(&self, i: u32) -> &Triangulation {
        self.states[i as usize].as_ref().expect("states were kept")
    }

    fn budget_err(&self) -> Error {
        Error::BudgetExceeded { reached_radius: self.reached, states: self.keys.len() }
    }

    pub fn into_cache(self, root: &Triangulation) -> ExplorationCache {
        ExplorationCache::from_region(root, &self)
    }
}

fn approx_bytes(key: &CanonicalKey, arcs: usize, keep: bool) -> usize {
    key.0.len() + 96 + if keep { 48 * arcs } else { 0 }
}

/// Explores vertices at distance at most `radius` from `root` (within the
/// subgraph selected by `filter`). Stops at the budget, flagging the region.
pub fn explore(root: &Triangulation, radius: u32, budget: &Budget, keep_states: bool, filter: Option<Filter>) -> Region {
    let arcs = root.num_arcs();
    let rk = root.key();
    let mut bytes = approx_bytes(&rk, arcs, keep_states);
    let mut r = Region {
        keys: vec![rk.clone()],
        index: HashMap::from([(rk, 0)]),
        depth: vec![0],
        count: vec![BigUint::one()],
        adj: vec![Vec::new()],
        states: vec![None],
        radius,
        reached: 0,
        closed: false,
        exceeded: false,
    };
    let mut frontier: Vec<(u32, Triangulation)> = vec![(0, root.clone())];
    let mut d = 0u32;
    let mut saw_outside = false;
    loop {
        let expanded = par::map(budget.exec, &frontier, |(_, t)| {
            t.neighbors()
                .into_iter()
                .filter(|(_, n)| filter.is_none_or(|f| f(n)))
                .map(|(s, n)| {
                    let k = n.key();
                    (s as u32, k, n)
                })
                .collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        for ((u, _), nbrs) in frontier.iter().zip(expanded) {
            for (s, k, n) in nbrs {
                let v = match r.index.get(&k) {
                    Some(&v) => v,
                    None if d < radius => {
                        let v = r.keys.len() as u32;
                        bytes += approx_bytes(&k, arcs, keep_states);
                        r.index.insert(k.clone(), v);
                        r.keys.push(k);
                        r.depth.push(d + 1);
                        r.count.push(BigUint::zero());
                        r.adj.push(Vec::new());
                        r.states.push(None);
                        next.push((v, n));
                        v
                    }
                    None => {
                        saw_outside = true;
                        continue;
                    }
                };
                if r.depth[v as usize] == d + 1 {
                    let c = r.count[*u as usize].clone();
                    r.count[v as usize] += c;
                }
                r.adj[*u as usize].push((v, s));
                bytes += 8;
            }
        }
        if keep_states {
            for (u, t) in frontier {
                r.states[u as usize] = Some(t);
            }
        }
        r.reached = d;
        if next.is_empty() {
            r.closed = !saw_outside;
            break;
        }
        if d == radius {
            break;
        }
        if r.keys.len() > budget.max_states || bytes > budget.max_bytes {
            r.exceeded = true;
            break;
        }
        d += 1;
        frontier = next;
    }
    for list in r.adj.iter_mut() {
        list.sort_by(|a, b| r.keys[a.0 as usize].cmp(&r.keys[b.0 as usize]));
    }
    r
}

/// The ball of radius `k` around `t`, as a cache.
pub fn ball(t: &Triangulation, k: u32, budget: &Budget) -> Result<ExplorationCache> {
    let r = explore(t, k, budget, false, None);
    if r.exceeded {
        return Err(r.budget_err());
    }
    Ok(r.into_cache(t))
}

/// The whole flip-graph component of `t`, which must be finite.
pub fn closure(t: &Triangulation, budget: &Budget, keep_states: bool) -> Result<Region> {
    let r = explore(t, u32::MAX, budget, keep_states, None);
    if r.exceeded {
        return Err(r.budget_err());
    }
    Ok(r)
}

/// |B(t, k)|.
pub fn lambda_k(t: &Triangulation, k: u32, budget: &Budget) -> Result<usize> {
    let r = explore(t, k, budget, false, None);
    if r.exceeded {
        return Err(r.budget_err());
    }
    Ok(r.len())
}

/// Result of a bidirectional search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meeting {
    pub distance: u32,
    pub count: BigUint,
}

struct Side {
    map: HashMap<CanonicalKey, (u32, BigUint)>,
    frontier: Vec<(CanonicalKey, Triangulation)>,
    radius: u32,
}

impl Side {
    fn new(t: &Triangulation) -> Side {
        let k = t.key();
        Side { map: HashMap::from([(k.clone(), (0, BigUint::one()))]), frontier: vec![(k, t.clone())], radius: 0 }
    }

    /// Adds the next layer and returns its keys in discovery order.
    fn step(&mut self, exec: Exec, filter: Option<Filter>) -> Vec<CanonicalKey> {
        let expanded = par::map(exec, &self.frontier, |(_, t)| {
            t.neighbors()
                .into_iter()
                .filter(|(_, n)| filter.is_none_or(|f| f(n)))
                .map(|(_, n)| (n.key(), n))
                .collect::<Vec<_>>()
        });
        let d = self.radius + 1;
        let mut layer = Vec::new();
        let mut next = Vec::new();
        for ((uk, _), nbrs) in self.frontier.iter().zip(expanded) {
            let cu = self.map[uk].1.clone();
            for (k, n) in nbrs {
                match self.map.get_mut(&k) {
                    Some((dv, c)) => {
                        if *dv == d {
                            *c += &cu;
                        }
                    }
                    None => {
                        self.map.insert(k.clone(), (d, cu.clone()));
                        layer.push(k.clone());
                        next.push((k, n));
                    }
                }
            }
        }
        self.frontier = next;
        self.radius = d;
        layer
    }
}

/// Distance and geodesic count between `s` and `t`, by bidirectional BFS.
/// With a filter, both are taken in the induced subgraph.
pub fn meet(s: &Triangulation, t: &Triangulation, budget: &Budget, filter: Option<Filter>) -> Result<Meeting> {
    if !s.same_frame(t) {
        return Err(Error::WrongSurface);
    }
    if s.key() == t.key() {
        return Ok(Meeting { distance: 0, count: BigUint::one() });
    }
    let mut a = Side::new(s);
    let mut b = Side::new(t);
    loop {
        let (grow, other) = if a.frontier.len() <= b.frontier.len() { (&mut a, &b) } else { (&mut b, &a) };
        if grow.frontier.is_empty() {
            return Err(Error::DomainError("the two triangulations are not connected".into()));
        }
        let layer = grow.step(budget.exec, filter);
        let mut count = BigUint::zero();
        let mut hit = false;
        for k in &layer {
            if let Some((dv, c)) = other.map.get(k) {
                debug_assert_eq!(*dv, other.radius);
                count += c * &grow.map[k].1;
                hit = true;
            }
        }
        if hit {
            return Ok(Meeting { distance: grow.radius + other.radius, count });
        }
        let states = grow.map.len() + other.map.len();
        if states > budget.max_states || states.saturating_mul(s.num_arcs() * 8 + 96) > budget.max_bytes {
            return Err(Error::BudgetExceeded { reached_radius: grow.radius.min(other.radius), states });
        }
        if layer.is_empty() && grow.frontier.is_empty() {
            return Err(Error::DomainError("the two triangulations are not connected".into()));
        }
    }
}

/// Flip distance.
pub fn distance(s: &Triangulation, t: &Triangulation, budget: &Budget) -> Result<u32> {
    Ok(meet(s, t, budget, None)?.distance)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicReport {
    pub distance: u32,
    #[serde(with = "crate::bigint_dec")]
    pub count: BigUint,
    /// Enumerated geodesics as key sequences, when requested (at most the cap).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geodesics: Option<Vec<Vec<String>>>,
}

/// Number of geodesics between `s` and `t`, optionally listing up to `cap`.
pub fn count_geodesics(s: &Triangulation, t: &Triangulation, budget: &Budget, cap: Option<usize>) -> Result<GeodesicReport> {
    let m = meet(s, t, budget, None)?;
    let geodesics = match cap {
        Some(cap) => {
            let iv = Interval::new(s, t, budget)?;
            Some(iv.enumerate(cap).into_iter().map(|p| p.into_iter().map(|i| iv.keys[i as usize].to_hex()).collect()).collect())
        }
        None => None,
    };
    Ok(GeodesicReport { distance: m.distance, count: m.count, geodesics })
}

/// Whether every geodesic from `s` to `t` stays among triangulations that
/// contain all `required` arcs.
pub fn convexity_check(s: &Triangulation, t: &Triangulation, required: &[ArcClass], budget: &Budget) -> Result<bool> {
    if !s.contains_arcs(required) || !t.contains_arcs(required) {
        return Err(Error::InvalidArc("endpoints must contain the required arcs".into()));
    }
    if required.is_empty() {
        return Ok(true);
    }
    let full = meet(s, t, budget, None)?;
    let f = |x: &Triangulation| x.contains_arcs(required);
    let inside = match meet(s, t, budget, Some(&f)) {
        Ok(m) => m,
        Err(Error::DomainError(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(inside == full)
}

/// The union of all geodesics between two triangulations.
#[derive(Debug, Clone)]
pub struct Interval {
    pub distance: u32,
    pub keys: Vec<CanonicalKey>,
    pub states: Vec<Triangulation>,
    /// Distance from the source.
    pub depth: Vec<u32>,
    /// Per node: (successor one step closer to the target, slot flipped).
    pub succ: Vec<Vec<(u32, u32)>>,
}

impl Interval {
    pub fn new(s: &Triangulation, t: &Triangulation, budget: &Budget) -> Result<Interval> {
        let d = distance(s, t, budget)?;
        let back = explore(t, d, budget, false, None);
        if back.exceeded {
            return Err(back.budget_err());
        }
        let dt = |k: &CanonicalKey| back.index.get(k).map(|&i| back.depth[i as usize]);
        let sk = s.key();
        let mut iv = Interval {
            distance: d,
            keys: vec![sk.clone()],
            states: vec![s.clone()],
            depth: vec![0],
            succ: vec![Vec::new()],
        };
        let mut index = HashMap::from([(sk, 0u32)]);
        let mut frontier = vec![0u32];
        for ds in 0..d {
            let expanded = par::map(budget.exec, &frontier, |&u| {
                iv.states[u as usize]
                    .neighbors()
                    .into_iter()
                    .filter_map(|(slot, n)| {
                        let k = n.key();
                        (dt(&k) == Some(d - ds - 1)).then_some((slot as u32, k, n))
                    })
                    .collect::<Vec<_>>()
            });
            let mut next = Vec::new();
            for (&u, nbrs) in frontier.iter().zip(expanded) {
                for (slot, k, n) in nbrs {
                    let v = *index.entry(k.clone()).or_insert_with(|| {
                        iv.keys.push(k);
                        iv.states.push(n);
                        iv.depth.push(ds + 1);
                        iv.succ.push(Vec::new());
                        next.push(iv.keys.len() as u32 - 1);
                        iv.keys.len() as u32 - 1
                    });
                    iv.succ[u as usize].push((v, slot));
                }
            }
            frontier = next;
        }
        Ok(iv)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Geodesics as node sequences, at most `cap` of them, in lexicographic
    /// order of successor keys.
    pub fn enumerate(&self, cap: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut path = vec![0u32];
        self.dfs(&mut path, cap, &mut out);
        out
    }

    fn dfs(&self, path: &mut Vec<u32>, cap: usize, out: &mut Vec<Vec<u32>>) {
        if out.len() >= cap {
            return;
        }
        let u = *path.last().unwrap();
        if self.depth[u as usize] == self.distance {
            out.push(path.clone());
            return;
        }
        let mut succ = self.succ[u as usize].clone();
        succ.sort_by(|a, b| self.keys[a.0 as usize].cmp(&self.keys[b.0 as usize]));
        for (v, _) in succ {
            path.push(v);
            self.dfs(path, cap, out);
            path.pop();
        }
    }
}

/// Largest number of flips incident to the boundary arc `alpha` along a
/// geodesic from `s` to `t`.
pub fn max_incident_flips(s: &Triangulation, t: &Triangulation, alpha: &ArcClass, budget: &Budget) -> Result<u32> {
    if !alpha.boundary || alpha.is_loop() {
        return Err(Error::InvalidArc("expected a boundary arc that is not a loop".into()));
    }
    let iv = Interval::new(s, t, budget)?;
    let mut best: Vec<Option<u32>> = vec![None; iv.len()];
    best[0] = Some(0);
    let mut order: Vec<u32> = (0..iv.len() as u32).collect();
    order.sort_by_key(|&i| iv.depth[i as usize]);
    for u in order {
        let Some(bu) = best[u as usize] else { continue };
        let st = &iv.states[u as usize];
        let a = st.slot_of(alpha).ok_or_else(|| Error::InvalidArc("alpha is not an arc of this surface".into()))?;
        for &(v, slot) in &iv.succ[u as usize] {
            let c = bu + st.flip_is_incident(slot as usize, a) as u32;
            let b = &mut best[v as usize];
            *b = Some(b.map_or(c, |x| x.max(c)));
        }
    }
    let target = (0..iv.len()).find(|&i| iv.depth[i] == iv.distance).unwrap();
    Ok(best[target].unwrap())
}

/// Per-distance maximum of geodesic counts from a set of roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaTable {
    /// `values[k]` is the largest count seen at distance `k` (0 if none).
    #[serde(with = "crate::bigint_dec::vec")]
    pub values: Vec<BigUint>,
    /// Witness pair per distance, as hex keys.
    pub witnesses: Vec<Option<(String, String)>>,
    pub roots: usize,
    /// True when every pair of the graph was examined.
    pub exact: bool,
}

impl DeltaTable {
    /// Running maximum over distances 1..=k.
    pub fn tilde(&self) -> Vec<BigUint> {
        let mut acc = BigUint::zero();
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if k > 0 && *v > acc {
                    acc = v.clone();
                }
                acc.clone()
            })
            .collect()
    }
}

/// Maximum geodesic count at each distance up to `radius`, over pairs with
/// one end in `roots`. A lower bound for Δ_k unless the roots cover a finite
/// graph and the radius reaches its diameter.
pub fn delta_table(roots: &[Triangulation], radius: u32, budget: &Budget, exact: bool) -> Result<DeltaTable> {
    let per_root = par::map(budget.exec, roots, |t| {
        let inner = Budget { exec: Exec::Sequential, ..*budget };
        let r = explore(t, radius, &inner, false, None);
        if r.exceeded {
            return Err(r.budget_err());
        }
        let mut best: Vec<(BigUint, Option<u32>)> = vec![(BigUint::zero(), None); radius as usize + 1];
        for i in 0..r.len() {
            let d = r.depth[i] as usize;
            if r.count[i] > best[d].0 {
                best[d] = (r.count[i].clone(), Some(i as u32));
            }
        }
        let root = r.keys[0].to_hex();
        Ok(best.into_iter().map(|(c, w)| (c, w.map(|i| (root.clone(), r.keys[i as usize].to_hex())))).collect::<Vec<_>>())
    });
    let mut values = vec![BigUint::zero(); radius as usize + 1];
    let mut witnesses = vec![None; radius as usize + 1];
    for res in per_root {
        for (k, (c, w)) in res?.into_iter().enumerate() {
            if c > values[k] {
                values[k] = c;
                witnesses[k] = w;
            }
        }
    }
    let top = values.iter().rposition(|v| !v.is_zero()).unwrap_or(0);
    values.truncate(top + 1);
    witnesses.truncate(top + 1);
    Ok(DeltaTable { values, witnesses, roots: roots.len(), exact })
}

/// Endpoints of `count` seeded random walks of length `walk` from `center`.
pub fn sample_roots(center: &Triangulation, count: usize, walk: u32, seed: u64) -> Vec<Triangulation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut t = center.clone();
            for _ in 0..walk {
                let slots = t.flippable_slots();
                if slots.is_empty() {
                    break;
                }
                let s = slots[rng.gen_range(0..slots.len())];
                t = t.flip_slot(s).expect("flippable");
            }
            t
        })
        .collect()
}

/// A finite flip-graph held in memory, with all-pairs distances.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    pub region: Region,
    /// `dist[u][v]`.
    pub dist: Vec<Vec<u16>>,
}

impl FiniteGraph {
    pub fn new(root: &Triangulation, budget: &Budget) -> Result<FiniteGraph> {
        let region = closure(root, budget, true)?;
        if !region.closed {
            return Err(Error::DomainError("flip-graph is not finite".into()));
        }
        let n = region.len();
        let idx: Vec<u32> = (0..n as u32).collect();
        let dist = par::map(budget.exec, &idx, |&s| {
            let mut d = vec![u16::MAX; n];
            d[s as usize] = 0;
            let mut q = std::collections::VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &(v, _) in &region.adj[u as usize] {
                    if d[v as usize] == u16::MAX {
                        d[v as usize] = d[u as usize] + 1;
                        q.push_back(v);
                    }
                }
            }
            d
        });
        Ok(FiniteGraph { region, dist })
    }

    pub fn len(&self) -> usize {
        self.region.len()
    }

    pub fn is_empty(&self) -> bool {
        self.region.is_empty()
    }

    pub fn state(&self, i: u32) -> &Triangulation {
        self.region.state(i)
    }

    pub fn index_of(&self, t: &Triangulation) -> Option<u32> {
        self.region.index.get(&t.key()).copied()
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().flatten().copied().max().unwrap_or(0) as u32
    }

    pub fn edges(&self) -> usize {
        self.region.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Orders nodes by distance from `s`.
    fn by_distance(&self, s: u32) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.len() as u32).collect();
        order.sort_by_key(|&v| self.dist[s as usize][v as usize]);
        order
    }

    /// Geodesic counts from `s` to every node.
    pub fn counts_from(&self, s: u32) -> Vec<BigUint> {
        let ds = &self.dist[s as usize];
        let mut c = vec![BigUint::zero(); self.len()];
        c[s as usize] = BigUint::one();
        for u in self.by_distance(s) {
            if c[u as usize].is_zero() {
                continue;
            }
            let cu = c[u as usize].clone();
            for &(v, _) in &self.region.adj[u as usize] {
                if ds[v as usize] == ds[u as usize] + 1 {
                    c[v as usize] += &cu;
                }
            }
        }
        c
    }

    /// Exact Δ_k for every k up to the diameter.
    pub fn delta_table(&self, exec: Exec) -> DeltaTable {
        let idx: Vec<u32> = (0..self.len() as u32).collect();
        let diam = self.diameter() as usize;
        let per = par::map(exec, &idx, |&s| {
            let c = self.counts_from(s);
            let mut best: Vec<(BigUint, Option<u32>)> = vec![(BigUint::zero(), None); diam + 1];
            for (v, cv) in c.into_iter().enumerate() {
                let d = self.dist[s as usize][v] as usize;
                if cv > best[d].0 {
                    best[d] = (cv, Some(v as u32));
                }
            }
            best
        });
        let mut values = vec![BigUint::zero(); diam + 1];
        let mut witnesses = vec![None; diam + 1];
        for (s, best) in per.into_iter().enumerate() {
            for (k, (c, w)) in best.into_iter().enumerate() {
                if c > values[k] {
                    values[k] = c;
                    witnesses[k] = w.map(|v| (self.region.keys[s].to_hex(), self.region.keys[v as usize].to_hex()));
                }
            }
        }
        DeltaTable { values, witnesses, roots: self.len(), exact: true }
    }

    /// For each node `v`, the largest number of flips incident to the
    /// boundary arc `alpha` along a geodesic from `s` to `v`.
    pub fn max_incident_from(&self, s: u32, alpha: &ArcClass) -> Vec<u32> {
        let ds = &self.dist[s as usize];
        let mut best = vec![0u32; self.len()];
        for u in self.by_distance(s) {
            let st = self.state(u);
            let a = st.slot_of(alpha).expect("boundary arc present");
            for &(v, slot) in &self.region.adj[u as usize] {
                if ds[v as usize] == ds[u as usize] + 1 {
                    let c = best[u as usize] + st.flip_is_incident(slot as usize, a) as u32;
                    if c > best[v as usize] {
                        best[v as usize] = c;
                    }
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::SurfaceSig;

    fn base(s: &str) -> Triangulation {
        Triangulation::base(&s.parse::<SurfaceSig>().unwrap()).unwrap()
    }

    #[test]
    fn hexagon_closure() {
        let g = FiniteGraph::new(&base("disk:6"), &Budget::default()).unwrap();
        assert_eq!(g.len(), 14);
        assert_eq!(g.edges(), 21);
        assert_eq!(g.diameter(), 4);
    }

    #[test]
    fn gamma_ball_is_a_path() {
        let t = base("cyl:1,1");
        let r = explore(&t, 3, &Budget::default(), false, None);
        assert_eq!(r.len(), 7);
        assert!(r.adj.iter().all(|a| a.len() <= 2));
        assert!(r.count.iter().all(|c| c.is_one()));
    }

    #[test]
    fn bidirectional_agrees_with_finite_graph() {
        let g = FiniteGraph::new(&base("disk:7"), &Budget::default()).unwrap();
        for (s, t) in [(0u32, 41u32), (3, 17), (10, 10), (5, 30)] {
            let m = meet(g.state(s), g.state(t), &Budget::default(), None).unwrap();
            assert_eq!(m.distance, g.dist[s as usize][t as usize] as u32);
            assert_eq!(m.count, g.counts_from(s)[t as usize]);
        }
    }

    #[test]
    fn interval_enumeration_matches_count() {
        let g = FiniteGraph::new(&base("disk:7"), &Budget::default()).unwrap();
        let (s, t) = (0u32, (0..g.len() as u32).max_by_key(|&v| g.dist[0][v as usize]).unwrap());
        let rep = count_geodesics(g.state(s), g.state(t), &Budget::default(), Some(10_000)).unwrap();
        assert_eq!(rep.geodesics.unwrap().len() as u64, rep.count.to_u64_digits().first().copied().unwrap_or(0));
    }
}
