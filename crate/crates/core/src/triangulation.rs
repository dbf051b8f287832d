//! Triangulations as overlays on a frame's base triangulation.
//!
//! A triangulation keeps its own half-edge mesh and, for every arc, the base
//! half-edges it exits in order. For every base arc it keeps the reverse
//! incidence: which triangulation arc it meets at each crossing, in order
//! along the base arc. Flips rewrite the crossings inside the flipped
//! quadrilateral only.

use std::cmp::Reverse;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Frame, FrameSpec};
use crate::mesh::{arc_of, he, is_right, twin, Corner, HalfEdge, Mesh, MeshArc};
use crate::path::{reverse_hs, ArcPath, NormalCounts};
use crate::surface::SurfaceSig;

const KEY_VERSION: u8 = 1;

/// Isotopy class of an arc, relative to a frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcClass {
    pub endpoints: [u32; 2],
    pub path: ArcPath,
    pub boundary: bool,
}

impl ArcClass {
    pub fn new(base: &Mesh, path: &ArcPath) -> ArcClass {
        let (u, v) = path.endpoints(base);
        let boundary = matches!(path, ArcPath::Base(b) if base.arcs[*b as usize].boundary);
        ArcClass { endpoints: [u.min(v), u.max(v)], path: path.canonical(), boundary }
    }

    pub fn is_loop(&self) -> bool {
        self.endpoints[0] == self.endpoints[1]
    }

    pub fn coords(&self, base: &Mesh) -> Vec<i64> {
        self.path.coords(base)
    }

    fn encode(&self, out: &mut Vec<u8>) {
        let mut body = Vec::with_capacity(16);
        body.extend_from_slice(&(self.endpoints[0] as u16).to_be_bytes());
        body.extend_from_slice(&(self.endpoints[1] as u16).to_be_bytes());
        match &self.path {
            ArcPath::Base(b) => {
                body.push(0);
                body.extend_from_slice(&(*b as u16).to_be_bytes());
            }
            ArcPath::Path(hs) => {
                body.push(1);
                for &h in hs {
                    body.extend_from_slice(&(h as u16).to_be_bytes());
                }
            }
        }
        out.extend_from_slice(&(body.len() as u32).to_be_bytes());
        out.extend_from_slice(&body);
    }
}

/// Byte encoding of a triangulation, injective on isotopy classes within a frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        hex::decode(s).map(CanonicalKey).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    frame: Arc<Frame>,
    mesh: Mesh,
    cross: Vec<Vec<HalfEdge>>,
    on_base: Vec<Option<u32>>,
    base_cross: Vec<Vec<(u32, u32)>>,
    base_on: Vec<Option<u32>>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.same_frame(other) && self.key() == other.key()
    }
}

impl Eq for Triangulation {}

#[derive(Debug, Clone, Copy)]
struct Pos {
    seg: u8,
    param: u32,
}

struct Chord {
    base: u32,
    lo: Option<usize>,
    p: Pos,
    q: Pos,
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum QSide {
    Left,
    Right,
    B,
    D,
}

fn qside(seg: u8) -> QSide {
    match seg {
        7 | 0 | 1 => QSide::Left,
        3..=5 => QSide::Right,
        2 => QSide::B,
        _ => QSide::D,
    }
}

impl Triangulation {
    /// The base triangulation of a signature's default frame.
    pub fn base(sig: &SurfaceSig) -> Result<Triangulation> {
        Ok(Self::frame_base(Frame::standard(sig)?))
    }

    /// The base triangulation of a frame.
    pub fn frame_base(frame: Arc<Frame>) -> Triangulation {
        let n = frame.mesh.arcs.len();
        Triangulation {
            mesh: frame.mesh.clone(),
            cross: vec![Vec::new(); n],
            on_base: (0..n as u32).map(Some).collect(),
            base_cross: vec![Vec::new(); n],
            base_on: (0..n as u32).map(Some).collect(),
            frame,
        }
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn surface(&self) -> &SurfaceSig {
        &self.frame.sig
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn same_frame(&self, other: &Triangulation) -> bool {
        Arc::ptr_eq(&self.frame, &other.frame) || *self.frame == *other.frame
    }

    pub fn num_arcs(&self) -> usize {
        self.mesh.arcs.len()
    }

    /// Arc stored in slot `i`, as a path oriented like the slot.
    pub fn path(&self, i: usize) -> ArcPath {
        match self.on_base[i] {
            Some(b) => ArcPath::Base(b),
            None => ArcPath::Path(self.cross[i].clone()),
        }
    }

    pub fn arc(&self, i: usize) -> ArcClass {
        let a = &self.mesh.arcs[i];
        let path = match self.on_base[i] {
            Some(b) => ArcPath::Base(b),
            None => {
                let r = reverse_hs(&self.cross[i]);
                ArcPath::Path(if r < self.cross[i] { r } else { self.cross[i].clone() })
            }
        };
        ArcClass { endpoints: [a.tail.min(a.head), a.tail.max(a.head)], path, boundary: a.boundary }
    }

    /// All arcs, sorted.
    pub fn arcs(&self) -> Vec<ArcClass> {
        let mut v: Vec<ArcClass> = (0..self.num_arcs()).map(|i| self.arc(i)).collect();
        v.sort();
        v
    }

    pub fn key(&self) -> CanonicalKey {
        let arcs = self.arcs();
        let mut out = Vec::with_capacity(1 + arcs.len() * 12);
        out.push(KEY_VERSION);
        for a in &arcs {
            a.encode(&mut out);
        }
        CanonicalKey(out)
    }

    pub fn slot_of(&self, a: &ArcClass) -> Option<usize> {
        (0..self.num_arcs()).find(|&i| self.mesh.arcs[i].tail.min(self.mesh.arcs[i].head) == a.endpoints[0] && self.arc(i) == *a)
    }

    pub fn contains_arcs<'a>(&self, required: impl IntoIterator<Item = &'a ArcClass>) -> bool {
        let arcs = self.arcs();
        required.into_iter().all(|a| arcs.binary_search(a).is_ok())
    }

    pub fn is_flippable_slot(&self, i: usize) -> bool {
        let a = &self.mesh.arcs[i];
        !a.boundary && a.left.is_some() && a.right.is_some() && a.left != a.right
    }

    pub fn flippable_slots(&self) -> Vec<usize> {
        (0..self.num_arcs()).filter(|&i| self.is_flippable_slot(i)).collect()
    }

    pub fn flippable_arcs(&self) -> Vec<ArcClass> {
        let mut v: Vec<ArcClass> = self.flippable_slots().into_iter().map(|i| self.arc(i)).collect();
        v.sort();
        v
    }

    /// Number of arc ends at marked point `x`, loops counted twice.
    pub fn degree(&self, x: u32) -> Result<u32> {
        if x >= self.mesh.num_marks {
            return Err(Error::UnknownMarkedPoint(x));
        }
        Ok(self.mesh.degree(x))
    }

    /// Slot of the boundary arc `alpha`, and the triangle on it.
    fn boundary_triangle(&self, alpha: &ArcClass) -> Result<(usize, u32)> {
        if !alpha.boundary {
            return Err(Error::InvalidArc("expected a boundary arc".into()));
        }
        let s = self.slot_of(alpha).ok_or_else(|| Error::InvalidArc("arc not in triangulation".into()))?;
        Ok((s, self.mesh.arcs[s].left.unwrap()))
    }

    /// Slots of the sides of the triangle on boundary arc `alpha`.
    pub fn incident_triangle_arcs(&self, alpha: &ArcClass) -> Result<[usize; 3]> {
        let (_, t) = self.boundary_triangle(alpha)?;
        Ok(self.mesh.tris[t as usize].map(|h| arc_of(h) as usize))
    }

    /// Whether flipping slot `e` changes the triangle on boundary slot `alpha`.
    pub fn flip_is_incident(&self, e: usize, alpha_slot: usize) -> bool {
        let t = self.mesh.arcs[alpha_slot].left.unwrap();
        self.mesh.tris[t as usize].iter().any(|&h| arc_of(h) as usize == e)
    }

    /// Flips the arc in slot `e`; the new arc takes the same slot.
    pub fn flip_slot(&self, e: usize) -> Result<Triangulation> {
        if !self.is_flippable_slot(e) {
            return Err(Error::NotFlippable);
        }
        let m = &self.mesh;
        let e32 = e as u32;
        let t2 = m.arcs[e].left.unwrap();
        let t1 = m.arcs[e].right.unwrap();
        let k = m.pos_in(t2, he(e32, false)) as usize;
        let mm = m.pos_in(t1, he(e32, true)) as usize;
        let s1 = m.tris[t1 as usize];
        let s2 = m.tris[t2 as usize];
        let (h_ab, h_bc) = (s1[(mm + 1) % 3], s1[(mm + 2) % 3]);
        let (h_cd, h_da) = (s2[(k + 1) % 3], s2[(k + 2) % 3]);
        let (mark_b, mark_d) = (m.start(h_bc), m.start(h_da));

        let side_seg = |h: HalfEdge| -> u8 {
            if h == h_ab {
                1
            } else if h == h_bc {
                3
            } else if h == h_cd {
                5
            } else {
                debug_assert_eq!(h, h_da);
                7
            }
        };
        let corner_seg = |c: Corner| -> u8 {
            let i = c.idx as usize;
            if c.tri == t1 {
                [4, 0, 2][(i + 3 - mm) % 3]
            } else {
                [0, 4, 6][(i + 3 - k) % 3]
            }
        };
        let before_he = |s: u32, i: u32| -> HalfEdge { he(s, !is_right(self.cross[s as usize][i as usize])) };
        let side_pos = |h: HalfEdge, i: u32| -> Pos {
            let len = self.cross[arc_of(h) as usize].len() as u32;
            Pos { seg: side_seg(h), param: if is_right(h) { len - 1 - i } else { i } }
        };
        let in_q = |t: u32| t == t1 || t == t2;

        let mut chords: Vec<Chord> = Vec::new();
        let mut coincident_e = None;
        for b in 0..self.base_cross.len() {
            match self.base_on[b] {
                Some(s) if s == e32 => {
                    coincident_e = Some(b as u32);
                    continue;
                }
                Some(_) => continue,
                None => {}
            }
            let list = &self.base_cross[b];
            let l = list.len();
            let seg_tri = |j: usize| -> u32 {
                if j < l {
                    let (s, i) = list[j];
                    m.tri_of(before_he(s, i)).unwrap()
                } else {
                    let (s, i) = list[l - 1];
                    m.tri_of(twin(before_he(s, i))).unwrap()
                }
            };
            let mut j = 0;
            while j <= l {
                if !in_q(seg_tri(j)) {
                    j += 1;
                    continue;
                }
                let (lo, p) = if j == 0 {
                    let (s, i) = list[0];
                    (None, Pos { seg: corner_seg(m.opposite_corner(before_he(s, i)).unwrap()), param: 0 })
                } else {
                    let (s, i) = list[j - 1];
                    (Some(j - 1), side_pos(twin(before_he(s, i)), i))
                };
                let q;
                loop {
                    if j == l {
                        let (s, i) = list[l - 1];
                        q = Pos { seg: corner_seg(m.opposite_corner(twin(before_he(s, i))).unwrap()), param: 0 };
                        break;
                    }
                    let (s, i) = list[j];
                    if s == e32 {
                        j += 1;
                        continue;
                    }
                    q = side_pos(before_he(s, i), i);
                    break;
                }
                chords.push(Chord { base: b as u32, lo, p, q });
                j += 1;
            }
        }

        // Crossings of the new arc, ordered from B to D.
        let urank = |p: Pos| (p.seg as u32 - 3, p.param);
        let vrank = |p: Pos| ((p.seg as u32 + 1) % 8, p.param);
        let mut fcross: Vec<((u32, u32), Reverse<(u32, u32)>, usize, bool)> = Vec::new();
        let mut coincident_f = None;
        for (ci, c) in chords.iter().enumerate() {
            let (sp, sq) = (qside(c.p.seg), qside(c.q.seg));
            match (sp, sq) {
                (QSide::Left, QSide::Right) => fcross.push((urank(c.q), Reverse(vrank(c.p)), ci, true)),
                (QSide::Right, QSide::Left) => fcross.push((urank(c.p), Reverse(vrank(c.q)), ci, false)),
                (QSide::B, QSide::D) | (QSide::D, QSide::B) => {
                    debug_assert!(c.lo.is_none());
                    coincident_f = Some((c.base, sp == QSide::D));
                }
                _ => {}
            }
        }
        let mut ce_entry = None;
        if let Some(b) = coincident_e {
            let (a, c) = (Pos { seg: 0, param: 0 }, Pos { seg: 4, param: 0 });
            let key = (urank(c), Reverse(vrank(a)), usize::MAX, true);
            fcross.push(key);
            ce_entry = Some(b);
        }
        fcross.sort();

        let mut out = self.clone();
        let mut new_cross = Vec::with_capacity(fcross.len());
        let mut inserts: Vec<Vec<(Option<usize>, u32)>> = vec![Vec::new(); self.base_cross.len()];
        for (idx, &(_, _, ci, l_to_r)) in fcross.iter().enumerate() {
            let b = if ci == usize::MAX { ce_entry.unwrap() } else { chords[ci].base };
            let lo = if ci == usize::MAX { None } else { chords[ci].lo };
            new_cross.push(he(b, l_to_r));
            inserts[b as usize].push((lo, idx as u32));
        }
        let mut touched: Vec<bool> = inserts.iter().map(|v| !v.is_empty()).collect();
        for &h in &self.cross[e] {
            touched[arc_of(h) as usize] = true;
        }
        for b in 0..touched.len() {
            if !touched[b] {
                continue;
            }
            let old = &self.base_cross[b];
            let ins = &inserts[b];
            let mut list = Vec::with_capacity(old.len() + ins.len());
            for &(lo, idx) in ins {
                if lo.is_none() {
                    list.push((e32, idx));
                }
            }
            for (j, &entry) in old.iter().enumerate() {
                if entry.0 != e32 {
                    list.push(entry);
                }
                for &(lo, idx) in ins {
                    if lo == Some(j) {
                        list.push((e32, idx));
                    }
                }
            }
            out.base_cross[b] = list;
        }
        if let Some(b) = coincident_e {
            out.base_on[b as usize] = None;
        }
        out.cross[e] = new_cross;
        out.on_base[e] = coincident_f.map(|(b, _)| b);
        if let Some((b, _)) = coincident_f {
            out.base_on[b as usize] = Some(e32);
        }
        out.mesh.arcs[e] = MeshArc { tail: mark_b, head: mark_d, boundary: false, left: None, right: None };
        out.mesh.set_tri(t1, [h_ab, he(e32, false), h_da]);
        out.mesh.set_tri(t2, [h_bc, h_cd, he(e32, true)]);
        if let Some((_, true)) = coincident_f {
            out.mesh.reverse_arc(e32);
        }
        Ok(out)
    }

    /// Flips arc `a`, returning the new triangulation and the new arc.
    pub fn flip(&self, a: &ArcClass) -> Result<(Triangulation, ArcClass)> {
        let s = self.slot_of(a).ok_or(Error::NotFlippable)?;
        let t = self.flip_slot(s)?;
        let new = t.arc(s);
        Ok((t, new))
    }

    /// All neighbors, as (flipped slot, triangulation).
    pub fn neighbors(&self) -> Vec<(usize, Triangulation)> {
        self.flippable_slots().into_iter().map(|s| (s, self.flip_slot(s).expect("flippable"))).collect()
    }

    /// Whether the flip from `self` to `next` changes the triangle on `alpha`.
    pub fn incident_flip(&self, next: &Triangulation, alpha: &ArcClass) -> Result<bool> {
        if !self.same_frame(next) {
            return Err(Error::WrongSurface);
        }
        let (a, b) = (self.arcs(), next.arcs());
        let gone: Vec<&ArcClass> = a.iter().filter(|x| b.binary_search(x).is_err()).collect();
        let came = b.iter().filter(|x| a.binary_search(x).is_err()).count();
        if gone.len() != 1 || came != 1 {
            return Err(Error::NotAdjacent);
        }
        let e = self.slot_of(gone[0]).unwrap();
        if !self.is_flippable_slot(e) {
            return Err(Error::NotAdjacent);
        }
        let (s, _) = self.boundary_triangle(alpha)?;
        Ok(self.flip_is_incident(e, s))
    }

    /// Builds a triangulation from κ disjoint arcs of a frame.
    pub fn from_paths(frame: Arc<Frame>, paths: Vec<ArcPath>) -> Result<Triangulation> {
        build(frame, paths)
    }

    pub fn from_arcs(frame: Arc<Frame>, arcs: &[ArcClass]) -> Result<Triangulation> {
        build(frame, arcs.iter().map(|a| a.path.clone()).collect())
    }

    /// Rebuilds the overlay from scratch and compares keys. Test helper.
    pub fn rebuilt(&self) -> Result<Triangulation> {
        let paths = (0..self.num_arcs()).map(|i| self.path(i)).collect();
        build(self.frame.clone(), paths)
    }

    pub fn to_json(&self) -> TriangulationJson {
        let base = &self.frame.mesh;
        TriangulationJson {
            surface: self.frame.sig.clone(),
            frame: (!self.frame.is_standard()).then(|| self.frame.spec.clone()),
            arcs: self.arcs().iter().map(|a| ArcJson { endpoints: a.endpoints, coords: a.coords(base) }).collect(),
        }
    }

    pub fn from_json(j: &TriangulationJson) -> Result<Triangulation> {
        let frame = match &j.frame {
            Some(spec) => Frame::from_spec(spec)?,
            None => Frame::standard(&j.surface)?,
        };
        if frame.sig != j.surface {
            return Err(Error::WrongSurface);
        }
        let mut paths = Vec::with_capacity(j.arcs.len());
        for a in &j.arcs {
            let p = ArcPath::from_coords(&frame.mesh, &a.coords)?;
            let (u, v) = p.endpoints(&frame.mesh);
            if [u.min(v), u.max(v)] != [a.endpoints[0].min(a.endpoints[1]), a.endpoints[0].max(a.endpoints[1])] {
                return Err(Error::InvalidArc("endpoints disagree with coordinates".into()));
            }
            paths.push(p);
        }
        build(frame, paths)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Triangulation> {
        let j: TriangulationJson = serde_json::from_str(s)?;
        Self::from_json(&j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcJson {
    pub endpoints: [u32; 2],
    pub coords: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub surface: SurfaceSig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameSpec>,
    pub arcs: Vec<ArcJson>,
}

fn build(frame: Arc<Frame>, paths: Vec<ArcPath>) -> Result<Triangulation> {
    let bad = |m: String| Error::InvalidTriangulation(m);
    let base = &frame.mesh;
    let kappa = frame.sig.kappa() as usize;
    if paths.len() != kappa {
        return Err(bad(format!("expected {kappa} arcs, got {}", paths.len())));
    }
    for p in &paths {
        p.check(base)?;
    }
    {
        let mut canon: Vec<ArcPath> = paths.iter().map(|p| p.canonical()).collect();
        canon.sort();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("repeated arc".into()));
        }
    }
    let nb = base.arcs.len();
    let mut base_on = vec![None; nb];
    let mut on_base = vec![None; kappa];
    let mut counts = NormalCounts::new(base.tris.len());
    for (i, p) in paths.iter().enumerate() {
        match p {
            ArcPath::Base(b) => {
                base_on[*b as usize] = Some(i as u32);
                on_base[i] = Some(*b);
            }
            ArcPath::Path(hs) => counts.add(base, hs),
        }
    }
    for (b, a) in base.arcs.iter().enumerate() {
        if a.boundary && base_on[b].is_none() {
            return Err(bad(format!("missing boundary arc {}-{}", a.tail, a.head)));
        }
    }
    let comps = counts.trace(base)?;
    let mut by_path = std::collections::HashMap::new();
    for (i, p) in paths.iter().enumerate() {
        if let ArcPath::Path(hs) = p {
            by_path.insert(hs.clone(), (i, true));
            by_path.insert(reverse_hs(hs), (i, false));
        }
    }
    let npaths = paths.iter().filter(|p| matches!(p, ArcPath::Path(_))).count();
    if comps.len() != npaths {
        return Err(bad("arcs are not pairwise disjoint".into()));
    }
    let mut base_cross: Vec<Vec<(u32, u32)>> =
        (0..nb).map(|b| vec![(u32::MAX, 0); counts_width(&counts, base, b as u32) as usize]).collect();
    let mut slot_owner: Vec<[Vec<(u32, bool)>; 3]> = (0..base.tris.len())
        .map(|t| [0, 1, 2].map(|c| vec![(u32::MAX, false); counts.term[t][c] as usize]))
        .collect();
    let mut matched = vec![false; kappa];
    for comp in &comps {
        let &(i, same) = by_path.get(&comp.hs).ok_or_else(|| bad("arcs are not pairwise disjoint".into()))?;
        if matched[i] {
            return Err(bad("arcs are not pairwise disjoint".into()));
        }
        matched[i] = true;
        let len = comp.hs.len() as u32;
        for (j, (&h, &pos)) in comp.hs.iter().zip(&comp.pos).enumerate() {
            let idx = if same { j as u32 } else { len - 1 - j as u32 };
            base_cross[arc_of(h) as usize][pos as usize] = (i as u32, idx);
        }
        let (sc, sk) = comp.start_slot;
        let (ec, ek) = comp.end_slot;
        slot_owner[sc.tri as usize][sc.idx as usize][sk as usize] = (i as u32, !same);
        slot_owner[ec.tri as usize][ec.idx as usize][ek as usize] = (i as u32, same);
    }

    // Rotation of arc ends around every marked point.
    let nm = base.num_marks as usize;
    let mut rot: Vec<Vec<(u32, bool)>> = vec![Vec::new(); nm];
    let mut cyclic = vec![true; nm];
    let mut ray_at: Vec<(u32, u32)> = vec![(u32::MAX, 0); 2 * kappa];
    for v in 0..nm as u32 {
        let (corners, cyc) = base.rotation(v);
        cyclic[v as usize] = cyc;
        let r = &mut rot[v as usize];
        for c in &corners {
            let h = base.side(*c, 0);
            if let Some(i) = base_on[arc_of(h) as usize] {
                r.push((i, is_right(h)));
            }
            r.extend(slot_owner[c.tri as usize][c.idx as usize].iter().copied());
        }
        if !cyc {
            let h = base.side(*corners.last().unwrap(), 2);
            let i = base_on[arc_of(h) as usize].ok_or_else(|| bad("boundary arc missing".into()))?;
            r.push((i, !is_right(h)));
        }
        for (k, &(i, end)) in r.iter().enumerate() {
            ray_at[2 * i as usize + end as usize] = (v, k as u32);
        }
    }
    let cw = |i: u32, end: bool| -> Option<(u32, bool)> {
        let (v, k) = ray_at[2 * i as usize + end as usize];
        let r = &rot[v as usize];
        if k > 0 {
            Some(r[k as usize - 1])
        } else if cyclic[v as usize] {
            r.last().copied()
        } else {
            None
        }
    };

    let mut mesh = Mesh::empty(base.num_marks);
    for p in &paths {
        let (u, v) = p.endpoints(base);
        let boundary = matches!(p, ArcPath::Base(b) if base.arcs[*b as usize].boundary);
        mesh.add_arc(u, v, boundary);
    }
    let mut seen = vec![false; 2 * kappa];
    for i in 0..kappa {
        if mesh.arcs[i].boundary {
            seen[2 * i + 1] = true;
        }
    }
    for d0 in 0..2 * kappa {
        if seen[d0] {
            continue;
        }
        let mut sides = Vec::with_capacity(3);
        let mut d = d0;
        loop {
            if seen[d] || sides.len() == 3 {
                break;
            }
            seen[d] = true;
            let i = (d / 2) as u32;
            let fwd = d % 2 == 0;
            sides.push(he(i, !fwd));
            let (j, end) = cw(i, fwd).ok_or_else(|| bad("face runs into the boundary".into()))?;
            d = 2 * j as usize + end as usize;
        }
        if sides.len() != 3 || d != d0 {
            return Err(bad("face is not a triangle".into()));
        }
        let t = mesh.tris.len() as u32;
        mesh.set_tri(t, [sides[0], sides[1], sides[2]]);
    }
    if mesh.tris.len() as u32 != frame.sig.triangles() {
        return Err(bad("wrong number of triangles".into()));
    }
    mesh.validate()?;
    let cross = paths
        .iter()
        .map(|p| match p {
            ArcPath::Base(_) => Vec::new(),
            ArcPath::Path(hs) => hs.clone(),
        })
        .collect();
    Ok(Triangulation { frame, mesh, cross, on_base, base_cross, base_on })
}

fn counts_width(c: &NormalCounts, base: &Mesh, b: u32) -> u32 {
    match base.tri_of(2 * b) {
        Some(t) => c.width(t as usize, base.pos_in(t, 2 * b) as usize),
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(s: &str) -> SurfaceSig {
        s.parse().unwrap()
    }

    #[test]
    fn base_round_trips_through_import() {
        for s in ["disk:6", "pdisk:1,1", "pdisk:2,1", "cyl:1,1", "cyl:2,1", "sphere:3", "sphere:5", "pdisk:3,2"] {
            let t = Triangulation::base(&sig(s)).unwrap();
            assert_eq!(t.rebuilt().unwrap().key(), t.key(), "{s}");
        }
    }

    #[test]
    fn flips_agree_with_import() {
        for s in ["disk:6", "pdisk:1,2", "pdisk:2,1", "cyl:1,1", "cyl:2,1", "sphere:4", "sphere:5", "pdisk:2,3"] {
            let mut layer = vec![Triangulation::base(&sig(s)).unwrap()];
            for _ in 0..3 {
                let mut next = Vec::new();
                for t in &layer {
                    for (slot, n) in t.neighbors() {
                        n.mesh.validate().unwrap();
                        let r = n.rebuilt().unwrap_or_else(|e| panic!("{s}: {e}"));
                        assert_eq!(r.key(), n.key(), "{s}");
                        let back = n.flip_slot(slot).unwrap();
                        assert_eq!(back.key(), t.key(), "{s}: involution");
                        next.push(n);
                    }
                }
                next.truncate(40);
                layer = next;
            }
        }
    }

    #[test]
    fn square_flip() {
        let t = Triangulation::base(&sig("disk:4")).unwrap();
        let d = t.flippable_arcs();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].endpoints, [0, 2]);
        let (t2, new) = t.flip(&d[0]).unwrap();
        assert_eq!(new.endpoints, [1, 3]);
        assert_ne!(t2.key(), t.key());
    }

    #[test]
    fn degrees() {
        let t = Triangulation::base(&sig("cyl:1,1")).unwrap();
        assert_eq!(t.degree(0).unwrap(), 4);
        assert_eq!(t.degree(1).unwrap(), 4);
        let h = Triangulation::base(&sig("disk:6")).unwrap();
        assert_eq!(h.degree(0).unwrap(), 5);
        assert!(h.degree(6).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = Triangulation::base(&sig("pdisk:2,1")).unwrap();
        let n = t.neighbors().pop().unwrap().1.neighbors().pop().unwrap().1;
        let s = n.to_json_string();
        let back = Triangulation::from_json_str(&s).unwrap();
        assert_eq!(back.key(), n.key());
    }
}
