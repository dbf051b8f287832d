//! Half-edge triangle meshes on marked surfaces.
//!
//! Arc `a` has two half-edges: `2a` (left side, traversed tail to head) and
//! `2a+1` (right side, traversed head to tail). Each triangle lists its three
//! half-edges in counterclockwise order; corner `i` of a triangle sits at the
//! start of side `i`, and side `i+1` is opposite corner `i`. Boundary arcs are
//! oriented with the surface on their left, so only their left half-edge
//! belongs to a triangle.

use crate::error::{Error, Result};

pub type HalfEdge = u32;

#[inline]
pub fn he(arc: u32, right: bool) -> HalfEdge {
    2 * arc + right as u32
}

#[inline]
pub fn arc_of(h: HalfEdge) -> u32 {
    h >> 1
}

#[inline]
pub fn is_right(h: HalfEdge) -> bool {
    h & 1 == 1
}

#[inline]
pub fn twin(h: HalfEdge) -> HalfEdge {
    h ^ 1
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeshArc {
    pub tail: u32,
    pub head: u32,
    pub boundary: bool,
    pub left: Option<u32>,
    pub right: Option<u32>,
}

impl MeshArc {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// A triangle in a mesh together with one of its corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub tri: u32,
    pub idx: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mesh {
    pub num_marks: u32,
    pub arcs: Vec<MeshArc>,
    pub tris: Vec<[HalfEdge; 3]>,
}

impl Mesh {
    pub fn empty(num_marks: u32) -> Self {
        Mesh { num_marks, arcs: Vec::new(), tris: Vec::new() }
    }

    pub fn add_arc(&mut self, tail: u32, head: u32, boundary: bool) -> u32 {
        self.arcs.push(MeshArc { tail, head, boundary, left: None, right: None });
        self.arcs.len() as u32 - 1
    }

    /// Sets triangle `t` (appending if `t == tris.len()`) and its side pointers.
    pub fn set_tri(&mut self, t: u32, sides: [HalfEdge; 3]) {
        if t as usize == self.tris.len() {
            self.tris.push(sides);
        } else {
            self.tris[t as usize] = sides;
        }
        for h in sides {
            self.set_side(h, Some(t));
        }
    }

    fn set_side(&mut self, h: HalfEdge, t: Option<u32>) {
        let a = &mut self.arcs[arc_of(h) as usize];
        if is_right(h) {
            a.right = t;
        } else {
            a.left = t;
        }
    }

    #[inline]
    pub fn tri_of(&self, h: HalfEdge) -> Option<u32> {
        let a = &self.arcs[arc_of(h) as usize];
        if is_right(h) {
            a.right
        } else {
            a.left
        }
    }

    #[inline]
    pub fn pos_in(&self, t: u32, h: HalfEdge) -> u8 {
        let s = &self.tris[t as usize];
        if s[0] == h {
            0
        } else if s[1] == h {
            1
        } else {
            debug_assert_eq!(s[2], h, "half-edge {h} not in triangle {t}");
            2
        }
    }

    #[inline]
    pub fn start(&self, h: HalfEdge) -> u32 {
        let a = &self.arcs[arc_of(h) as usize];
        if is_right(h) {
            a.head
        } else {
            a.tail
        }
    }

    #[inline]
    pub fn end(&self, h: HalfEdge) -> u32 {
        let a = &self.arcs[arc_of(h) as usize];
        if is_right(h) {
            a.tail
        } else {
            a.head
        }
    }

    #[inline]
    pub fn side(&self, c: Corner, offset: u8) -> HalfEdge {
        self.tris[c.tri as usize][((c.idx + offset) % 3) as usize]
    }

    #[inline]
    pub fn corner_mark(&self, c: Corner) -> u32 {
        self.start(self.side(c, 0))
    }

    /// Corner opposite half-edge `h`, in the triangle containing `h`.
    pub fn opposite_corner(&self, h: HalfEdge) -> Option<Corner> {
        let t = self.tri_of(h)?;
        let p = self.pos_in(t, h);
        Some(Corner { tri: t, idx: (p + 2) % 3 })
    }

    /// Corner at the start (`at_end = false`) or end of half-edge `h`.
    pub fn corner_at(&self, h: HalfEdge, at_end: bool) -> Option<Corner> {
        let t = self.tri_of(h)?;
        let p = self.pos_in(t, h);
        Some(Corner { tri: t, idx: if at_end { (p + 1) % 3 } else { p } })
    }

    pub fn num_tris(&self) -> usize {
        self.tris.len()
    }

    /// Arc with the given endpoints, in either direction, if unique.
    pub fn boundary_arc_between(&self, u: u32, v: u32) -> Option<u32> {
        let fwd: Vec<u32> = (0..self.arcs.len() as u32)
            .filter(|&a| self.arcs[a as usize].boundary)
            .filter(|&a| self.arcs[a as usize].tail == u && self.arcs[a as usize].head == v)
            .collect();
        if fwd.len() == 1 {
            return Some(fwd[0]);
        }
        if !fwd.is_empty() {
            return None;
        }
        let bwd: Vec<u32> = (0..self.arcs.len() as u32)
            .filter(|&a| self.arcs[a as usize].boundary)
            .filter(|&a| self.arcs[a as usize].tail == v && self.arcs[a as usize].head == u)
            .collect();
        (bwd.len() == 1).then(|| bwd[0])
    }

    /// Structural sanity checks.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidTriangulation(m));
        for (t, s) in self.tris.iter().enumerate() {
            for i in 0..3 {
                if self.end(s[i]) != self.start(s[(i + 1) % 3]) {
                    return bad(format!("triangle {t} does not close at side {i}"));
                }
                if self.tri_of(s[i]) != Some(t as u32) {
                    return bad(format!("side pointer of triangle {t} side {i} is stale"));
                }
            }
        }
        for (a, arc) in self.arcs.iter().enumerate() {
            if arc.tail >= self.num_marks || arc.head >= self.num_marks {
                return bad(format!("arc {a} has unknown endpoint"));
            }
            match (arc.boundary, arc.left, arc.right) {
                (true, Some(_), None) | (false, Some(_), Some(_)) => {}
                _ => return bad(format!("arc {a} has inconsistent sides")),
            }
        }
        Ok(())
    }

    /// Reverses arc `a` in place, keeping the geometry.
    pub fn reverse_arc(&mut self, a: u32) {
        let arc = &mut self.arcs[a as usize];
        std::mem::swap(&mut arc.tail, &mut arc.head);
        std::mem::swap(&mut arc.left, &mut arc.right);
        let (l, r) = (arc.left, arc.right);
        let tris = if l == r { [l, None] } else { [l, r] };
        for t in tris.into_iter().flatten() {
            for h in self.tris[t as usize].iter_mut() {
                if arc_of(*h) == a {
                    *h = twin(*h);
                }
            }
        }
    }

    /// Renames marked points through `map`.
    pub fn relabel(&mut self, map: &[u32]) {
        for arc in &mut self.arcs {
            arc.tail = map[arc.tail as usize];
            arc.head = map[arc.head as usize];
        }
    }

    /// Corners at mark `v` in counterclockwise order, and whether the
    /// rotation closes up (interior point) or is linear (boundary point).
    pub fn rotation(&self, v: u32) -> (Vec<Corner>, bool) {
        let mut first = None;
        for t in 0..self.tris.len() as u32 {
            for idx in 0..3u8 {
                let c = Corner { tri: t, idx };
                if self.corner_mark(c) != v {
                    continue;
                }
                let out = self.side(c, 0);
                if self.arcs[arc_of(out) as usize].boundary {
                    return (self.walk_rotation(c), false);
                }
                if first.is_none() {
                    first = Some(c);
                }
            }
        }
        match first {
            Some(c) => (self.walk_rotation(c), true),
            None => (Vec::new(), true),
        }
    }

    fn walk_rotation(&self, start: Corner) -> Vec<Corner> {
        let mut out = vec![start];
        let mut c = start;
        loop {
            let incoming = self.side(c, 2);
            let Some(next) = self.corner_at(twin(incoming), false) else { break };
            if next == start {
                break;
            }
            out.push(next);
            c = next;
        }
        out
    }

    /// Number of arc ends at `v`, loops counted twice.
    pub fn degree(&self, v: u32) -> u32 {
        self.arcs.iter().map(|a| (a.tail == v) as u32 + (a.head == v) as u32).sum()
    }
}

/// Mesh under construction, with mark kinds and boundary curve anchors.
#[derive(Debug, Clone)]
pub(crate) struct Builder {
    pub mesh: Mesh,
    pub is_boundary_mark: Vec<bool>,
    pub anchors: Vec<u32>,
}

impl Builder {
    fn new_mark(&mut self, boundary: bool) -> u32 {
        self.mesh.num_marks += 1;
        self.is_boundary_mark.push(boundary);
        self.mesh.num_marks - 1
    }

    /// Convex polygon `0..n` with the fan from `0`.
    pub fn polygon(n: u32) -> Builder {
        let mut m = Mesh::empty(n);
        let bd: Vec<u32> = (0..n).map(|i| m.add_arc(i, (i + 1) % n, true)).collect();
        let diag: Vec<u32> = (0..n).map(|j| if (2..n - 1).contains(&j) { m.add_arc(0, j, false) } else { u32::MAX }).collect();
        for j in 1..n - 1 {
            let s0 = if j == 1 { he(bd[0], false) } else { he(diag[j as usize], false) };
            let s1 = he(bd[j as usize], false);
            let s2 = if j + 1 == n - 1 { he(bd[(n - 1) as usize], false) } else { he(diag[(j + 1) as usize], true) };
            m.set_tri(j - 1, [s0, s1, s2]);
        }
        Builder { mesh: m, is_boundary_mark: vec![true; n as usize], anchors: vec![0] }
    }

    /// Sphere with punctures 0, 1, 2 and two triangles.
    pub fn sphere3() -> Builder {
        let mut m = Mesh::empty(3);
        let a = m.add_arc(0, 1, false);
        let b = m.add_arc(1, 2, false);
        let c = m.add_arc(2, 0, false);
        m.set_tri(0, [he(a, false), he(b, false), he(c, false)]);
        m.set_tri(1, [he(c, true), he(b, true), he(a, true)]);
        Builder { mesh: m, is_boundary_mark: vec![false; 3], anchors: vec![] }
    }

    /// Cylinder with one marked point per boundary curve.
    pub fn gamma() -> Builder {
        let mut m = Mesh::empty(2);
        let lx = m.add_arc(0, 0, true);
        let ly = m.add_arc(1, 1, true);
        let a = m.add_arc(0, 1, false);
        let b = m.add_arc(0, 1, false);
        m.set_tri(0, [he(lx, false), he(a, false), he(b, true)]);
        m.set_tri(1, [he(ly, false), he(a, true), he(b, false)]);
        Builder { mesh: m, is_boundary_mark: vec![true, true], anchors: vec![0, 1] }
    }

    /// Once-punctured monogon: a single self-folded triangle.
    pub fn punctured_monogon() -> Builder {
        let mut m = Mesh::empty(2);
        let l = m.add_arc(0, 0, true);
        let r = m.add_arc(0, 1, false);
        m.set_tri(0, [he(l, false), he(r, false), he(r, true)]);
        Builder { mesh: m, is_boundary_mark: vec![true, false], anchors: vec![0] }
    }

    /// Once-punctured bigon with both spokes.
    pub fn punctured_bigon() -> Builder {
        let mut m = Mesh::empty(3);
        let b0 = m.add_arc(0, 1, true);
        let b1 = m.add_arc(1, 0, true);
        let r0 = m.add_arc(2, 0, false);
        let r1 = m.add_arc(2, 1, false);
        m.set_tri(0, [he(b0, false), he(r1, true), he(r0, false)]);
        m.set_tri(1, [he(b1, false), he(r0, true), he(r1, false)]);
        Builder { mesh: m, is_boundary_mark: vec![true, true, false], anchors: vec![0] }
    }

    /// Adds a puncture inside triangle `t`.
    pub fn stellar(&mut self, t: u32) -> u32 {
        let p = self.new_mark(false);
        let m = &mut self.mesh;
        let [s0, s1, s2] = m.tris[t as usize];
        let (u, v, w) = (m.start(s0), m.start(s1), m.start(s2));
        let pu = m.add_arc(p, u, false);
        let pv = m.add_arc(p, v, false);
        let pw = m.add_arc(p, w, false);
        let n = m.tris.len() as u32;
        m.set_tri(t, [s0, he(pv, true), he(pu, false)]);
        m.set_tri(n, [s1, he(pw, true), he(pv, false)]);
        m.set_tri(n + 1, [s2, he(pu, true), he(pw, false)]);
        p
    }

    /// Turns puncture `p` into a boundary curve with one marked point.
    pub fn blow_up(&mut self, p: u32) {
        let m = &mut self.mesh;
        let c = (0..m.tris.len() as u32)
            .flat_map(|t| (0..3u8).map(move |idx| Corner { tri: t, idx }))
            .find(|&c| m.corner_mark(c) == p)
            .expect("puncture has a corner");
        let (s_out, s_mid, s_in) = (m.side(c, 0), m.side(c, 1), m.side(c, 2));
        let x = m.end(s_out);
        let l = m.add_arc(p, p, true);
        let d = m.add_arc(p, x, false);
        let n = m.tris.len() as u32;
        m.set_tri(c.tri, [s_out, he(d, true), he(l, false)]);
        m.set_tri(n, [s_mid, s_in, he(d, false)]);
        self.is_boundary_mark[p as usize] = true;
        self.anchors.push(p);
    }

    /// Adds a marked point in the middle of boundary arc `a`.
    pub fn insert_boundary_point(&mut self, a: u32) -> u32 {
        let x = self.new_mark(true);
        let m = &mut self.mesh;
        let (u, v) = (m.arcs[a as usize].tail, m.arcs[a as usize].head);
        m.arcs[a as usize].boundary = false;
        let um = m.add_arc(u, x, true);
        let mv = m.add_arc(x, v, true);
        let n = m.tris.len() as u32;
        m.set_tri(n, [he(a, true), he(um, false), he(mv, false)]);
        x
    }

    /// Boundary arc leaving boundary mark `v`.
    pub fn outgoing_boundary(&self, v: u32) -> u32 {
        self.mesh.arcs.iter().position(|a| a.boundary && a.tail == v).expect("boundary mark") as u32
    }

    /// Boundary arc entering boundary mark `v`.
    pub fn incoming_boundary(&self, v: u32) -> u32 {
        self.mesh.arcs.iter().position(|a| a.boundary && a.head == v).expect("boundary mark") as u32
    }

    /// Relabels marks: boundary points curve by curve from each anchor, then
    /// punctures in creation order.
    pub fn finish(mut self) -> Mesh {
        let n = self.mesh.num_marks as usize;
        let mut map = vec![u32::MAX; n];
        let mut next = 0u32;
        for &a in &self.anchors.clone() {
            let mut v = a;
            loop {
                map[v as usize] = next;
                next += 1;
                let e = self.outgoing_boundary(v);
                v = self.mesh.arcs[e as usize].head;
                if v == a {
                    break;
                }
            }
        }
        for v in 0..n {
            if !self.is_boundary_mark[v] {
                map[v] = next;
                next += 1;
            }
        }
        debug_assert_eq!(next as usize, n);
        self.mesh.relabel(&map);
        self.mesh
    }
}

/// Bookkeeping for the contraction of a boundary arc in a mesh.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshContraction {
    pub alpha: u32,
    pub tau_alpha: u32,
    pub removed: u32,
    pub retained: u32,
    /// Side of the contracted triangle incident to the removed vertex.
    pub bx: HalfEdge,
    /// Side of the contracted triangle incident to the retained vertex.
    pub bk: HalfEdge,
    pub arc_map: Vec<Option<u32>>,
    pub tri_map: Vec<Option<u32>>,
    pub mark_map: Vec<u32>,
    /// Whether the surviving bigon arc got reversed in the new mesh.
    pub keep_reversed: bool,
}

impl MeshContraction {
    /// Image of a source half-edge not lying in the contracted triangle.
    pub fn map_he(&self, h: HalfEdge) -> HalfEdge {
        let a = arc_of(h);
        if a == arc_of(self.bx) {
            debug_assert_eq!(h, twin(self.bx));
            return self.map_he(self.bk);
        }
        let na = self.arc_map[a as usize].expect("arc survives contraction");
        let flip = a == arc_of(self.bk) && self.keep_reversed;
        he(na, is_right(h) ^ flip)
    }

    pub fn map_corner(&self, c: Corner) -> Corner {
        Corner { tri: self.tri_map[c.tri as usize].expect("triangle survives"), idx: c.idx }
    }
}

/// Contracts boundary arc `alpha`, merging `removed` into the other endpoint.
/// `mark_map` gives the new label of every old mark (the removed one included).
pub fn contract_mesh(m: &Mesh, alpha: u32, removed: u32, mark_map: Vec<u32>) -> Result<(Mesh, MeshContraction)> {
    let arc = &m.arcs[alpha as usize];
    if !arc.boundary {
        return Err(Error::InvalidArc("contracted arc must be a boundary arc".into()));
    }
    if arc.is_loop() {
        return Err(Error::LoopContraction);
    }
    let tau = arc.left.expect("boundary arc has a triangle");
    let q = m.pos_in(tau, he(alpha, false));
    let s = m.tris[tau as usize];
    let (s1, s2) = (s[(q as usize + 1) % 3], s[(q as usize + 2) % 3]);
    let (bx, bk, retained) = if removed == arc.tail {
        (s2, s1, arc.head)
    } else if removed == arc.head {
        (s1, s2, arc.tail)
    } else {
        return Err(Error::UnknownMarkedPoint(removed));
    };
    let (ax, ak) = (arc_of(bx), arc_of(bk));
    if m.arcs[ax as usize].boundary && m.arcs[ak as usize].boundary {
        return Err(Error::NotTriangulable("contraction of a triangle".into()));
    }
    let mut arc_map = vec![None; m.arcs.len()];
    let mut next = 0;
    for a in 0..m.arcs.len() as u32 {
        if a != alpha && a != ax {
            arc_map[a as usize] = Some(next);
            next += 1;
        }
    }
    let mut tri_map = vec![None; m.tris.len()];
    let mut next_t = 0;
    for t in 0..m.tris.len() as u32 {
        if t != tau {
            tri_map[t as usize] = Some(next_t);
            next_t += 1;
        }
    }
    let mut ctr = MeshContraction {
        alpha,
        tau_alpha: tau,
        removed,
        retained,
        bx,
        bk,
        arc_map,
        tri_map,
        mark_map,
        keep_reversed: false,
    };
    let mut out = Mesh::empty(m.num_marks - 1);
    for (a, arc) in m.arcs.iter().enumerate() {
        if ctr.arc_map[a].is_some() {
            let boundary = arc.boundary || (a as u32 == ak && m.arcs[ax as usize].boundary);
            out.add_arc(ctr.mark_map[arc.tail as usize], ctr.mark_map[arc.head as usize], boundary);
        }
    }
    // The surviving bigon arc keeps the orientation convention for boundary arcs.
    if m.arcs[ax as usize].boundary && m.tri_of(twin(bk)).is_some() && is_right(twin(bk)) {
        ctr.keep_reversed = true;
        let na = ctr.arc_map[ak as usize].unwrap() as usize;
        let a = &mut out.arcs[na];
        std::mem::swap(&mut a.tail, &mut a.head);
    }
    for (t, sides) in m.tris.iter().enumerate() {
        if let Some(nt) = ctr.tri_map[t] {
            let ns = sides.map(|h| ctr.map_he(h));
            out.set_tri(nt, ns);
        }
    }
    out.validate()?;
    Ok((out, ctr))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_valid() {
        for b in [Builder::polygon(3), Builder::polygon(6), Builder::sphere3(), Builder::gamma(), Builder::punctured_monogon(), Builder::punctured_bigon()] {
            b.mesh.validate().unwrap();
        }
    }

    #[test]
    fn operations_keep_validity() {
        let mut b = Builder::sphere3();
        b.stellar(1);
        b.stellar(0);
        b.mesh.validate().unwrap();
        b.blow_up(0);
        b.mesh.validate().unwrap();
        let l = b.outgoing_boundary(0);
        b.insert_boundary_point(l);
        b.mesh.validate().unwrap();
        let m = b.finish();
        m.validate().unwrap();
        assert_eq!(m.tris.len(), 8);
    }

    #[test]
    fn polygon_rotation_is_linear() {
        let m = Builder::polygon(6).finish();
        let (r, cyclic) = m.rotation(0);
        assert!(!cyclic);
        assert_eq!(r.len(), 4);
        let (r, cyclic) = m.rotation(1);
        assert!(!cyclic);
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn puncture_rotation_is_cyclic() {
        let m = Builder::sphere3().finish();
        let (r, cyclic) = m.rotation(0);
        assert!(cyclic);
        assert_eq!(r.len(), 2);
    }
}
