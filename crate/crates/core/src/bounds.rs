//! Closed-form bounds on Δ_k and Λ_k, and explicit product witnesses.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explore::Budget;
use crate::mesh::arc_of;
use crate::par;
use crate::surface::SurfaceSig;
use crate::triangulation::{ArcClass, Triangulation};

/// Inputs of the transfer inequalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    pub kappa: u32,
    pub n: u32,
    pub b: u32,
    pub k: u32,
    #[serde(with = "crate::bigint_dec")]
    pub lambda_star_k: BigUint,
    #[serde(with = "crate::bigint_dec")]
    pub delta_tilde_star_k: BigUint,
}

fn pow(base: u64, e: u64) -> Result<BigUint> {
    let e = u32::try_from(e).map_err(|_| Error::DomainError("exponent too large".into()))?;
    Ok(BigUint::from(base).pow(e))
}

fn bpow(base: &BigUint, e: u64) -> Result<BigUint> {
    let e = u32::try_from(e).map_err(|_| Error::DomainError("exponent too large".into()))?;
    Ok(base.pow(e))
}

/// κ(κ−1)^(k−1).
pub fn naive_upper_bound(kappa: u32, k: u32) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    BigUint::from(kappa) * BigUint::from(kappa.saturating_sub(1)).pow(k - 1)
}

/// Binomial (i+j choose i): the number of monotone lattice paths.
pub fn product_geodesic_count(i: u32, j: u32) -> BigUint {
    let mut acc = BigUint::one();
    for t in 1..=i.min(j) as u64 {
        acc = acc * BigUint::from(i as u64 + j as u64 + 1 - t) / BigUint::from(t);
    }
    acc
}

/// (1 − 1/k)·sqrt(2/(kπ))·2^k·e^(−1/(4(k−1))).
pub fn exp_lower_bound(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::DomainError("the exponential bound needs k >= 2".into()));
    }
    let kf = k as f64;
    let log = (1.0 - 1.0 / kf).ln() + 0.5 * (2.0 / (kf * std::f64::consts::PI)).ln() + kf * std::f64::consts::LN_2
        - 1.0 / (4.0 * (kf - 1.0));
    Ok(log.exp())
}

/// r = (2κ)^(n−b).
pub fn r_exponent(kappa: u32, n: u32, b: u32) -> Result<BigUint> {
    if n < b {
        return Err(Error::DomainError("n must be at least b".into()));
    }
    pow(2 * kappa as u64, (n - b) as u64)
}

fn r_small(kappa: u32, n: u32, b: u32) -> Result<u64> {
    let r = r_exponent(kappa, n, b)?;
    u64::try_from(&r).ok().filter(|&r| r <= u32::MAX as u64).ok_or_else(|| Error::DomainError("r is too large to evaluate".into()))
}

/// (2κ−4)^((n−b)r) · Λ⋆^(2(r−1)) · Δ̃⋆^r.
pub fn master_upper_bound(p: &BoundParams) -> Result<BigUint> {
    let r = r_small(p.kappa, p.n, p.b)?;
    let c = (2 * p.kappa as u64).saturating_sub(4);
    Ok(pow(c, (p.n - p.b) as u64 * r)? * bpow(&p.lambda_star_k, 2 * (r - 1))? * bpow(&p.delta_tilde_star_k, r)?)
}

/// (2κ−4)^(n−b) · Λ_k(Σ⋆).
pub fn lambda_transfer_bound(kappa: u32, n: u32, b: u32, lambda_star_k: &BigUint) -> Result<BigUint> {
    if n < b {
        return Err(Error::DomainError("n must be at least b".into()));
    }
    Ok(pow((2 * kappa as u64).saturating_sub(4), (n - b) as u64)? * lambda_star_k)
}

/// Δ̃_k(Σ∖α)^(2κ) · Λ_k(Σ)^(2κ).
pub fn delta_transfer_bound(kappa: u32, lambda_k: &BigUint, delta_tilde_contracted: &BigUint) -> Result<BigUint> {
    let e = 2 * kappa as u64;
    Ok(bpow(delta_tilde_contracted, e)? * bpow(lambda_k, e)?)
}

/// (2κ−4)^((n−b)r) · (2k+1)^(2(r−1)), for unpunctured cylinders.
pub fn cylinder_upper_bound(kappa: u32, n: u32, b: u32, k: u32) -> Result<BigUint> {
    master_upper_bound(&BoundParams {
        kappa,
        n,
        b,
        k,
        lambda_star_k: BigUint::from(2 * k as u64 + 1),
        delta_tilde_star_k: BigUint::one(),
    })
}

/// Largest |i| accepted by [`gamma_position`].
pub const GAMMA_MAX: u64 = 20_000;

/// Γ: the cylinder with one marked point per boundary curve.
pub fn gamma_sig() -> SurfaceSig {
    SurfaceSig::cylinder(1, 1).expect("valid signature")
}

/// The triangulation at position `i` of the bi-infinite path F(Γ).
pub fn gamma_position(i: i64) -> Result<Triangulation> {
    if i.unsigned_abs() > GAMMA_MAX {
        return Err(Error::BudgetExceeded { reached_radius: GAMMA_MAX as u32, states: 0 });
    }
    let t = Triangulation::base(&gamma_sig())?;
    let slots = t.flippable_slots();
    let (a, b) = if i >= 0 { (slots[0], slots[1]) } else { (slots[1], slots[0]) };
    walk(&t, a, b, i.unsigned_abs() as u32)
}

fn walk(t: &Triangulation, a: usize, b: usize, steps: u32) -> Result<Triangulation> {
    let mut cur = t.clone();
    for s in 0..steps {
        cur = cur.flip_slot(if s % 2 == 0 { a } else { b })?;
    }
    Ok(cur)
}

/// Two triangles glued along two arcs `a`, `b`, whose third sides are loops
/// at the two distinct ends of `a`. The triangulations keeping every other
/// arc form a copy of F(Γ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaPattern {
    pub a: usize,
    pub b: usize,
    pub tris: [u32; 2],
}

/// All Γ patterns of a triangulation, by slot.
pub fn gamma_patterns(t: &Triangulation) -> Vec<GammaPattern> {
    let m = t.mesh();
    let mut out = Vec::new();
    for a in t.flippable_slots() {
        let arc = &m.arcs[a];
        if arc.is_loop() {
            continue;
        }
        let (t1, t2) = (arc.left.unwrap(), arc.right.unwrap());
        let s1: Vec<usize> = m.tris[t1 as usize].iter().map(|&h| arc_of(h) as usize).collect();
        let s2: Vec<usize> = m.tris[t2 as usize].iter().map(|&h| arc_of(h) as usize).collect();
        for &b in &s1 {
            if b <= a || !s2.contains(&b) || m.arcs[b].boundary || m.arcs[b].is_loop() {
                continue;
            }
            let third = |s: &[usize]| s.iter().copied().find(|&c| c != a && c != b);
            let (Some(l1), Some(l2)) = (third(&s1), third(&s2)) else { continue };
            let (u, v) = (arc.tail, arc.head);
            let bb = (m.arcs[b].tail.min(m.arcs[b].head), m.arcs[b].tail.max(m.arcs[b].head));
            if bb != (u.min(v), u.max(v)) || l1 == l2 {
                continue;
            }
            let (x1, x2) = (&m.arcs[l1], &m.arcs[l2]);
            if !x1.is_loop() || !x2.is_loop() || x1.tail == x2.tail {
                continue;
            }
            out.push(GammaPattern { a, b, tris: [t1, t2] });
        }
    }
    out
}

/// Two Γ patterns on four distinct triangles, if any.
pub fn disjoint_pair(t: &Triangulation) -> Option<(GammaPattern, GammaPattern)> {
    let ps = gamma_patterns(t);
    for (i, p) in ps.iter().enumerate() {
        for q in &ps[i + 1..] {
            let tris: HashSet<u32> = p.tris.iter().chain(&q.tris).copied().collect();
            let slots: HashSet<usize> = [p.a, p.b, q.a, q.b].into_iter().collect();
            if tris.len() == 4 && slots.len() == 4 {
                return Some((*p, *q));
            }
        }
    }
    None
}

/// Whether a genus-0 signature carries a product of two copies of F(Γ) as
/// used by the exponential lower bound.
pub fn qualifies(sig: &SurfaceSig) -> bool {
    let (p, b) = (sig.punctures, sig.b());
    sig.genus == 0 && (p >= 5 || b >= 3 || (b == 2 && p >= 1) || (b == 1 && p >= 3))
}

/// A pair of triangulations in a convex F(Γ)×F(Γ) at grid offset (i, j).
#[derive(Debug, Clone)]
pub struct WitnessPair {
    pub surface: SurfaceSig,
    pub source: Triangulation,
    pub target: Triangulation,
    pub grid: (u32, u32),
    /// Arcs shared by every triangulation of the product.
    pub required: Vec<ArcClass>,
}

/// A triangulation carrying two disjoint Γ patterns, found breadth-first
/// from the base triangulation.
pub fn product_root(sig: &SurfaceSig, budget: &Budget) -> Result<(Triangulation, GammaPattern, GammaPattern)> {
    if !qualifies(sig) {
        return Err(Error::NotQualifying(format!("{sig}")));
    }
    let base = Triangulation::base(sig)?;
    let mut seen: HashSet<_> = HashSet::from([base.key()]);
    let mut frontier = vec![base];
    let mut depth = 0;
    while !frontier.is_empty() {
        let found = par::map(budget.exec, &frontier, disjoint_pair);
        if let Some((t, Some((p, q)))) = frontier.iter().zip(found).find(|(_, f)| f.is_some()) {
            return Ok((t.clone(), p, q));
        }
        let expanded = par::map(budget.exec, &frontier, |t| t.neighbors().into_iter().map(|(_, n)| (n.key(), n)).collect::<Vec<_>>());
        let mut next = Vec::new();
        for (k, n) in expanded.into_iter().flatten() {
            if seen.insert(k) {
                next.push(n);
            }
        }
        if seen.len() > budget.max_states {
            return Err(Error::BudgetExceeded { reached_radius: depth, states: seen.len() });
        }
        frontier = next;
        depth += 1;
    }
    Err(Error::NotQualifying(format!("{sig}: no product pattern found")))
}

/// Two triangulations at grid offset (⌊k/2⌋, ⌈k/2⌉) inside a convex copy of
/// F(Γ)×F(Γ).
pub fn product_witness(sig: &SurfaceSig, k: u32, budget: &Budget) -> Result<WitnessPair> {
    if k < 2 {
        return Err(Error::DomainError("witnesses need k >= 2".into()));
    }
    let (t0, p, q) = product_root(sig, budget)?;
    let (i, j) = (k / 2, k - k / 2);
    let mid = walk(&t0, p.a, p.b, i)?;
    let target = walk(&mid, q.a, q.b, j)?;
    let skip = [p.a, p.b, q.a, q.b];
    let mut required: Vec<ArcClass> = (0..t0.num_arcs()).filter(|s| !skip.contains(s)).map(|s| t0.arc(s)).collect();
    required.sort();
    Ok(WitnessPair { surface: sig.clone(), source: t0, target, grid: (i, j), required })
}

/// Binomial lower bound and the float bound for the witness at `k`.
pub fn witness_expectation(k: u32) -> Result<(BigUint, f64)> {
    Ok((product_geodesic_count(k / 2, k - k / 2), exp_lower_bound(k)?))
}

/// Whether a big integer exceeds a float.
pub fn exceeds(v: &BigUint, bound: f64) -> bool {
    if v.is_zero() {
        return bound < 0.0;
    }
    let bits = v.bits();
    if bits > 1000 {
        return true;
    }
    let f: f64 = v.to_string().parse().unwrap_or(f64::INFINITY);
    f > bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::{count_geodesics, distance};

    #[test]
    fn closed_forms() {
        assert_eq!(naive_upper_bound(9, 2), BigUint::from(72u32));
        assert_eq!(naive_upper_bound(7, 1), BigUint::from(7u32));
        assert_eq!(product_geodesic_count(2, 2), BigUint::from(6u32));
        assert_eq!(product_geodesic_count(0, 5), BigUint::one());
        assert_eq!(product_geodesic_count(3, 3), BigUint::from(20u32));
        assert!((exp_lower_bound(2).unwrap() - 0.878_78).abs() < 1e-5);
        assert!(exp_lower_bound(1).is_err());
        let p = BoundParams { kappa: 4, n: 2, b: 2, k: 7, lambda_star_k: BigUint::from(15u32), delta_tilde_star_k: BigUint::one() };
        assert_eq!(master_upper_bound(&p).unwrap(), BigUint::one());
        assert_eq!(cylinder_upper_bound(4, 2, 2, 9).unwrap(), BigUint::one());
    }

    #[test]
    fn gamma_positions_walk_the_path() {
        let a = gamma_position(0).unwrap();
        let b = gamma_position(7).unwrap();
        let c = gamma_position(-3).unwrap();
        let budget = Budget::default();
        assert_eq!(distance(&a, &b, &budget).unwrap(), 7);
        assert_eq!(distance(&c, &b, &budget).unwrap(), 10);
        assert!(count_geodesics(&a, &b, &budget, None).unwrap().count.is_one());
    }

    #[test]
    fn witness_on_three_punctured_disk() {
        let sig: SurfaceSig = "pdisk:3,1".parse().unwrap();
        let w = product_witness(&sig, 2, &Budget::default()).unwrap();
        let rep = count_geodesics(&w.source, &w.target, &Budget::default(), None).unwrap();
        assert_eq!(rep.distance, 2);
        assert!(rep.count >= BigUint::from(2u32));
        assert!(!qualifies(&"pdisk:2,1".parse().unwrap()));
    }
}
