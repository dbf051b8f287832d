//! Contraction of a boundary arc that is not a loop, and its section.
//!
//! The source frame's base triangle on `alpha` collapses in the target frame:
//! its side at the removed vertex `x` is identified with its side at the
//! retained vertex. Arcs are mapped path by path through that collapse. The
//! section lifts every arc ending at a former `x` corner by letting it leave
//! from the retained vertex instead and swing around `x`; the lifted
//! triangulation then has degree 2 at `x`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explore::{distance, max_incident_flips, Budget};
use crate::frame::Frame;
use crate::mesh::{arc_of, he, is_right, twin, Corner, HalfEdge, MeshContraction};
use crate::path::{reverse_hs, ArcPath, RawPath};
use crate::triangulation::{ArcClass, Triangulation};

#[derive(Debug, Clone)]
pub struct ContractionContext {
    pub source: Arc<Frame>,
    pub target: Arc<Frame>,
    pub alpha: ArcClass,
    /// Vertex `x`, merged away.
    pub removed: u32,
    /// Vertex `y`, kept.
    pub retained: u32,
    /// Target label of every source mark.
    pub relabel: Vec<u32>,
    ctr: MeshContraction,
    inv_arc: Vec<u32>,
    inv_tri: Vec<u32>,
    /// Corners at `x` starting from the collapsed triangle.
    order: Vec<Corner>,
    /// `swing[j]` is crossed when moving from `order[j]` to `order[j + 1]`.
    swing: Vec<HalfEdge>,
    /// Corner of the collapsed triangle at the retained vertex.
    k_corner: Corner,
    /// Far end of the other boundary arc at `x`, in the last corner's triangle.
    eps_end: Corner,
}

impl ContractionContext {
    /// Context for the boundary arc between `tail` and `head` of `frame`.
    pub fn new(frame: &Arc<Frame>, tail: u32, head: u32, removed: u32) -> Result<ContractionContext> {
        let (target, ctr) = frame.contract(tail, head, removed)?;
        let base = &frame.mesh;
        let a = &base.arcs[ctr.alpha as usize];
        let alpha = ArcClass::new(base, &ArcPath::Base(ctr.alpha));
        let x = removed;
        let k = ctr.retained;
        let mut inv_arc = vec![0; target.mesh.arcs.len()];
        for (s, t) in ctr.arc_map.iter().enumerate() {
            if let Some(t) = t {
                inv_arc[*t as usize] = s as u32;
            }
        }
        let mut inv_tri = vec![0; target.mesh.tris.len()];
        for (s, t) in ctr.tri_map.iter().enumerate() {
            if let Some(t) = t {
                inv_tri[*t as usize] = s as u32;
            }
        }
        let x_corner = base.corner_at(he(ctr.alpha, false), x == a.head).unwrap();
        let k_corner = base.corner_at(he(ctr.alpha, false), k == a.head).unwrap();
        let (rot, cyclic) = base.rotation(x);
        debug_assert!(!cyclic);
        let (order, swing, eps_end) = if rot[0] == x_corner {
            let swing = rot[..rot.len() - 1].iter().map(|&c| base.side(c, 2)).collect();
            let last = *rot.last().unwrap();
            (rot, swing, Corner { tri: last.tri, idx: (last.idx + 2) % 3 })
        } else {
            debug_assert_eq!(*rot.last().unwrap(), x_corner);
            let first = rot[0];
            let order: Vec<Corner> = rot.into_iter().rev().collect();
            let swing = order[..order.len() - 1].iter().map(|&c| base.side(c, 0)).collect();
            (order, swing, Corner { tri: first.tri, idx: (first.idx + 1) % 3 })
        };
        let relabel = ctr.mark_map.clone();
        Ok(ContractionContext {
            source: frame.clone(),
            target,
            alpha,
            removed,
            retained: k,
            relabel,
            ctr,
            inv_arc,
            inv_tri,
            order,
            swing,
            k_corner,
            eps_end,
        })
    }

    /// Context for a boundary arc given as an arc class.
    pub fn for_arc(frame: &Arc<Frame>, alpha: &ArcClass, removed: u32) -> Result<ContractionContext> {
        match alpha.path {
            ArcPath::Base(b) if alpha.boundary => {
                let a = &frame.mesh.arcs[b as usize];
                if a.is_loop() {
                    return Err(Error::LoopContraction);
                }
                Self::new(frame, a.tail, a.head, removed)
            }
            _ => Err(Error::InvalidArc("contraction needs a boundary arc".into())),
        }
    }

    /// All contexts of a frame: every boundary arc that is not a loop, with
    /// either endpoint removed.
    pub fn all(frame: &Arc<Frame>) -> Vec<ContractionContext> {
        let mut out = Vec::new();
        for a in frame.mesh.arcs.iter().filter(|a| a.boundary && !a.is_loop()) {
            for x in [a.tail, a.head] {
                if let Ok(c) = Self::new(frame, a.tail, a.head, x) {
                    out.push(c);
                }
            }
        }
        out
    }

    fn check_source(&self, t: &Triangulation) -> Result<()> {
        if *t.frame() != self.source {
            return Err(Error::WrongSurface);
        }
        Ok(())
    }

    fn check_target(&self, t: &Triangulation) -> Result<()> {
        if *t.frame() != self.target {
            return Err(Error::WrongSurface);
        }
        Ok(())
    }

    fn ax(&self) -> u32 {
        arc_of(self.ctr.bx)
    }

    fn ak(&self) -> u32 {
        arc_of(self.ctr.bk)
    }

    /// Moves a start in the collapsed triangle to the neighbouring triangle.
    fn strip_start(&self, mut r: RawPath) -> RawPath {
        let base = &self.source.mesh;
        if r.start.tri != self.ctr.tau_alpha {
            return r;
        }
        let x_is_tail = self.removed == base.arcs[self.ctr.alpha as usize].tail;
        let h0 = r.hs.remove(0);
        r.start = if h0 == self.ctr.bx {
            base.corner_at(twin(self.ctr.bx), !x_is_tail).unwrap()
        } else {
            debug_assert_eq!(h0, self.ctr.bk);
            base.corner_at(twin(self.ctr.bk), x_is_tail).unwrap()
        };
        r
    }

    fn contract_path(&self, p: &ArcPath) -> Result<Option<ArcPath>> {
        let (alpha, ax, ak) = (self.ctr.alpha, self.ax(), self.ak());
        let amap = |b: u32| self.ctr.arc_map[b as usize].unwrap();
        match p {
            ArcPath::Base(b) if *b == alpha => Ok(None),
            ArcPath::Base(b) if *b == ax => Ok(Some(ArcPath::Base(amap(ak)))),
            ArcPath::Base(b) => Ok(Some(ArcPath::Base(amap(*b)))),
            ArcPath::Path(_) => {
                let base = &self.source.mesh;
                let r = self.strip_start(RawPath::from_path(base, p));
                let r = self.strip_start(r.reversed()).reversed();
                let (bx, bk) = (self.ctr.bx, self.ctr.bk);
                let (ox, ok) = (twin(bx), twin(bk));
                let mut hs = Vec::with_capacity(r.hs.len());
                let mut i = 0;
                while i < r.hs.len() {
                    let h = r.hs[i];
                    let next = r.hs.get(i + 1).copied();
                    if h == ox && next == Some(bk) {
                        hs.push(self.ctr.map_he(bk));
                        i += 2;
                    } else if h == ok && next == Some(bx) {
                        hs.push(self.ctr.map_he(ok));
                        i += 2;
                    } else if arc_of(h) == ax || h == bk {
                        return Err(Error::InvalidArc("path leaves the contracted triangle unexpectedly".into()));
                    } else {
                        hs.push(self.ctr.map_he(h));
                        i += 1;
                    }
                }
                let raw = RawPath { start: self.ctr.map_corner(r.start), hs, end: self.ctr.map_corner(r.end) };
                Ok(Some(raw.normalize(&self.target.mesh)?.into_path().canonical()))
            }
        }
    }

    /// T∖α.
    pub fn contract(&self, t: &Triangulation) -> Result<Triangulation> {
        self.check_source(t)?;
        let mut paths = Vec::with_capacity(t.num_arcs());
        for i in 0..t.num_arcs() {
            if let Some(p) = self.contract_path(&t.path(i))? {
                paths.push(p);
            }
        }
        paths.sort();
        paths.dedup();
        Triangulation::from_paths(self.target.clone(), paths)
    }

    /// Source corner and leading crossings for a target corner.
    fn lift_corner(&self, c: Corner) -> (Corner, Vec<HalfEdge>) {
        let sc = Corner { tri: self.inv_tri[c.tri as usize], idx: c.idx };
        if self.source.mesh.corner_mark(sc) != self.removed {
            return (sc, Vec::new());
        }
        let j = self.order.iter().position(|&o| o == sc).expect("corner at x");
        (self.k_corner, self.swing[..j].to_vec())
    }

    fn lift_he(&self, h: HalfEdge, out: &mut Vec<HalfEdge>) {
        let a = self.inv_arc[arc_of(h) as usize];
        if a == self.ak() {
            if h == self.ctr.map_he(self.ctr.bk) {
                out.extend([twin(self.ctr.bx), self.ctr.bk]);
            } else {
                out.extend([twin(self.ctr.bk), self.ctr.bx]);
            }
        } else {
            out.push(he(a, is_right(h)));
        }
    }

    fn lift_path(&self, p: &ArcPath) -> Result<ArcPath> {
        let tm = &self.target.mesh;
        if let ArcPath::Base(b) = p {
            if tm.arcs[*b as usize].boundary {
                let a = self.inv_arc[*b as usize];
                let ax_boundary = self.source.mesh.arcs[self.ax() as usize].boundary;
                return Ok(ArcPath::Base(if a == self.ak() && ax_boundary { self.ax() } else { a }));
            }
        }
        let r = RawPath::from_path(tm, p);
        let (start, mut hs) = self.lift_corner(r.start);
        for &h in &r.hs {
            self.lift_he(h, &mut hs);
        }
        let (end, post) = self.lift_corner(r.end);
        hs.extend(reverse_hs(&post));
        Ok(RawPath { start, hs, end }.normalize(&self.source.mesh)?.into_path().canonical())
    }

    /// The arc closing the triangle on alpha and the other boundary arc at x.
    fn epsilon(&self) -> Result<ArcPath> {
        if self.source.mesh.arcs[self.ax() as usize].boundary {
            return Ok(ArcPath::Base(self.ak()));
        }
        let raw = RawPath { start: self.k_corner, hs: self.swing.clone(), end: self.eps_end };
        Ok(raw.normalize(&self.source.mesh)?.into_path().canonical())
    }

    /// The epsilon arc as an arc class.
    pub fn epsilon_arc(&self) -> Result<ArcClass> {
        Ok(ArcClass::new(&self.source.mesh, &self.epsilon()?))
    }

    /// The triangulation with no interior arc at `x` that contracts to `t`.
    pub fn section(&self, t: &Triangulation) -> Result<Triangulation> {
        self.check_target(t)?;
        let mut paths = Vec::with_capacity(t.num_arcs() + 2);
        for i in 0..t.num_arcs() {
            paths.push(self.lift_path(&t.path(i))?);
        }
        paths.push(ArcPath::Base(self.ctr.alpha));
        paths.push(self.epsilon()?);
        Triangulation::from_paths(self.source.clone(), paths)
    }

    fn alpha_slot(&self, t: &Triangulation) -> usize {
        t.slot_of(&self.alpha).expect("boundary arcs belong to every triangulation")
    }

    /// i(T): the degree at `x`, minus one when the triangle on alpha has a
    /// side twice incident to `x`.
    pub fn i_value(&self, t: &Triangulation) -> Result<u32> {
        self.check_source(t)?;
        let m = t.mesh();
        let s = self.alpha_slot(t);
        let tri = m.arcs[s].left.unwrap();
        let twice = m.tris[tri as usize].iter().any(|&h| {
            let a = &m.arcs[arc_of(h) as usize];
            a.tail == self.removed && a.head == self.removed
        });
        Ok(m.degree(self.removed) - twice as u32)
    }

    /// Slot of the side of the triangle on alpha not incident to `y`.
    fn gamma_slot(&self, t: &Triangulation) -> usize {
        let m = t.mesh();
        let s = self.alpha_slot(t);
        let tri = m.arcs[s].left.unwrap();
        let q = m.pos_in(tri, he(s as u32, false));
        let y_at_tail = m.arcs[s].tail == self.retained;
        let opp = if y_at_tail { (q + 1) % 3 } else { (q + 2) % 3 };
        arc_of(m.tris[tri as usize][opp as usize]) as usize
    }

    fn twice_at_x(&self, t: &Triangulation, slot: usize) -> bool {
        let a = &t.mesh().arcs[slot];
        a.tail == self.removed && a.head == self.removed
    }

    /// Flips the side of the triangle on alpha opposite `y` while i(T) > 2.
    pub fn section_distance_walk(&self, t: &Triangulation) -> Result<SectionWalk> {
        self.check_source(t)?;
        let start_i = self.i_value(t)?;
        let mut cur = t.clone();
        let mut steps = Vec::new();
        while self.i_value(&cur)? > 2 {
            let g = self.gamma_slot(&cur);
            let arc = cur.arc(g);
            let before = self.twice_at_x(&cur, g);
            let next = cur.flip_slot(g)?;
            let after = self.twice_at_x(&next, self.gamma_slot(&next));
            steps.push(WalkStep { flipped: arc, gamma_twice: before, next_gamma_twice: after });
            cur = next;
        }
        Ok(SectionWalk { start_i, degree: t.degree(self.removed)?, steps, end: cur })
    }

    /// ν, the largest number of alpha-incident flips over the geodesics from
    /// `t` to `u`, and whether d(T,T′) ≥ d(T∖α,T′∖α) + ν.
    pub fn projected_distance_gap(&self, t: &Triangulation, u: &Triangulation, budget: &Budget) -> Result<(u32, bool)> {
        self.check_source(t)?;
        self.check_source(u)?;
        let d = distance(t, u, budget)?;
        let nu = max_incident_flips(t, u, &self.alpha, budget)?;
        let dc = distance(&self.contract(t)?, &self.contract(u)?, budget)?;
        Ok((nu, d >= dc + nu))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStep {
    pub flipped: ArcClass,
    /// Whether the flipped arc was twice incident to `x`.
    pub gamma_twice: bool,
    /// Whether the next arc to consider is twice incident to `x`.
    pub next_gamma_twice: bool,
}

#[derive(Debug, Clone)]
pub struct SectionWalk {
    pub start_i: u32,
    pub degree: u32,
    pub steps: Vec<WalkStep>,
    pub end: Triangulation,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::FiniteGraph;
    use crate::surface::SurfaceSig;

    fn frame(s: &str) -> Arc<Frame> {
        Frame::standard(&s.parse::<SurfaceSig>().unwrap()).unwrap()
    }

    #[test]
    fn square_contracts_to_the_triangle() {
        let f = frame("disk:4");
        let ctx = ContractionContext::new(&f, 3, 0, 3).unwrap();
        let t = Triangulation::frame_base(f.clone());
        let u = t.neighbors().pop().unwrap().1;
        let (a, b) = (ctx.contract(&t).unwrap(), ctx.contract(&u).unwrap());
        assert_eq!(a.key(), b.key());
        assert_eq!(a.num_arcs(), 3);
    }

    #[test]
    fn heptagon_loses_two_arcs() {
        let f = frame("disk:7");
        let ctx = ContractionContext::new(&f, 5, 6, 6).unwrap();
        let t = ctx.contract(&Triangulation::frame_base(f)).unwrap();
        assert_eq!(t.num_arcs(), 9);
        assert_eq!(ctx.target.sig.kappa(), 9);
    }

    #[test]
    fn section_is_a_right_inverse() {
        for s in ["disk:6", "pdisk:1,3", "pdisk:1,2"] {
            let f = frame(s);
            for ctx in ContractionContext::all(&f) {
                let g = FiniteGraph::new(&Triangulation::frame_base(ctx.target.clone()), &Budget::default()).unwrap();
                for i in 0..g.len() as u32 {
                    let tb = g.state(i);
                    let lift = ctx.section(tb).unwrap_or_else(|e| panic!("{s} x={}: {e}", ctx.removed));
                    assert_eq!(lift.degree(ctx.removed).unwrap(), 2, "{s}");
                    assert_eq!(ctx.contract(&lift).unwrap().key(), tb.key(), "{s}");
                }
            }
        }
    }

    #[test]
    fn walk_reaches_the_section() {
        let f = frame("disk:6");
        let g = FiniteGraph::new(&Triangulation::frame_base(f.clone()), &Budget::default()).unwrap();
        for ctx in ContractionContext::all(&f) {
            for i in 0..g.len() as u32 {
                let t = g.state(i);
                let w = ctx.section_distance_walk(t).unwrap();
                let target = ctx.section(&ctx.contract(t).unwrap()).unwrap();
                assert_eq!(w.end.key(), target.key());
                assert!(w.steps.len() as u32 + 2 <= w.degree);
            }
        }
    }
}
