//! Arcs as normal paths through a base mesh.
//!
//! An arc that is not a base arc is recorded by the sequence of base
//! half-edges it exits, from its tail to its head. Its first segment runs from
//! the corner opposite the first exited half-edge, its last segment ends at the
//! corner opposite the twin of the last one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{arc_of, twin, Corner, HalfEdge, Mesh};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArcPath {
    /// Isotopic to a base arc; oriented like it.
    Base(u32),
    /// Normal path, as exited base half-edges.
    Path(Vec<HalfEdge>),
}

pub fn reverse_hs(hs: &[HalfEdge]) -> Vec<HalfEdge> {
    hs.iter().rev().map(|&h| twin(h)).collect()
}

impl ArcPath {
    pub fn reversed(&self) -> ArcPath {
        match self {
            ArcPath::Base(b) => ArcPath::Base(*b),
            ArcPath::Path(hs) => ArcPath::Path(reverse_hs(hs)),
        }
    }

    /// Orientation-independent form.
    pub fn canonical(&self) -> ArcPath {
        match self {
            ArcPath::Base(b) => ArcPath::Base(*b),
            ArcPath::Path(hs) => {
                let r = reverse_hs(hs);
                ArcPath::Path(if r < *hs { r } else { hs.clone() })
            }
        }
    }

    pub fn endpoints(&self, base: &Mesh) -> (u32, u32) {
        match self {
            ArcPath::Base(b) => {
                let a = &base.arcs[*b as usize];
                (a.tail, a.head)
            }
            ArcPath::Path(hs) => {
                let s = base.opposite_corner(hs[0]).expect("path crosses interior arcs");
                let e = base.opposite_corner(twin(*hs.last().unwrap())).expect("path crosses interior arcs");
                (base.corner_mark(s), base.corner_mark(e))
            }
        }
    }

    /// Checks that a path is a normal arc of the base mesh.
    pub fn check(&self, base: &Mesh) -> Result<()> {
        match self {
            ArcPath::Base(b) => {
                if (*b as usize) < base.arcs.len() {
                    Ok(())
                } else {
                    Err(Error::InvalidArc(format!("no base arc {b}")))
                }
            }
            ArcPath::Path(hs) => check_normal(base, hs),
        }
    }

    /// Per base triangle: three corner-cutting counts then three terminal
    /// counts. Base arcs use the sentinel `[-(b+1)]`.
    pub fn coords(&self, base: &Mesh) -> Vec<i64> {
        match self {
            ArcPath::Base(b) => vec![-(*b as i64) - 1],
            ArcPath::Path(hs) => {
                let mut counts = NormalCounts::new(base.tris.len());
                counts.add(base, hs);
                counts.flatten()
            }
        }
    }

    pub fn from_coords(base: &Mesh, coords: &[i64]) -> Result<ArcPath> {
        if coords.len() == 1 && coords[0] < 0 {
            let b = (-coords[0] - 1) as u32;
            let p = ArcPath::Base(b);
            p.check(base)?;
            return Ok(p);
        }
        if coords.len() != 6 * base.tris.len() || coords.iter().any(|&c| c < 0 || c > u32::MAX as i64) {
            return Err(Error::InvalidArc("coordinate vector has the wrong shape".into()));
        }
        let counts = NormalCounts::from_flat(coords);
        let comps = counts.trace(base)?;
        match comps.as_slice() {
            [c] => {
                let p = ArcPath::Path(c.hs.clone());
                p.check(base)?;
                Ok(p)
            }
            _ => Err(Error::InvalidArc(format!("coordinates describe {} arcs", comps.len()))),
        }
    }
}

fn check_normal(base: &Mesh, hs: &[HalfEdge]) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidArc(m.to_string()));
    if hs.is_empty() {
        return bad("empty path");
    }
    for &h in hs {
        if arc_of(h) as usize >= base.arcs.len() {
            return bad("unknown half-edge");
        }
        if base.tri_of(h).is_none() || base.tri_of(twin(h)).is_none() {
            return bad("path crosses a boundary arc");
        }
    }
    for w in hs.windows(2) {
        let t = base.tri_of(twin(w[0])).unwrap();
        if w[1] == twin(w[0]) || base.tri_of(w[1]) != Some(t) {
            return bad("path is not normal");
        }
    }
    Ok(())
}

/// A path with explicit end corners, possibly not normal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPath {
    pub start: Corner,
    pub hs: Vec<HalfEdge>,
    pub end: Corner,
}

/// Result of normalizing a raw path, keeping its orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Oriented {
    Base { arc: u32, forward: bool },
    Path(Vec<HalfEdge>),
}

impl Oriented {
    pub fn into_path(self) -> ArcPath {
        match self {
            Oriented::Base { arc, .. } => ArcPath::Base(arc),
            Oriented::Path(hs) => ArcPath::Path(hs),
        }
    }
}

impl RawPath {
    pub fn from_path(base: &Mesh, p: &ArcPath) -> RawPath {
        match p {
            ArcPath::Base(b) => {
                let h = 2 * b;
                RawPath {
                    start: base.corner_at(h, false).unwrap(),
                    hs: vec![],
                    end: base.corner_at(h, true).unwrap(),
                }
            }
            ArcPath::Path(hs) => RawPath {
                start: base.opposite_corner(hs[0]).unwrap(),
                hs: hs.clone(),
                end: base.opposite_corner(twin(*hs.last().unwrap())).unwrap(),
            },
        }
    }

    pub fn reversed(&self) -> RawPath {
        RawPath { start: self.end, hs: reverse_hs(&self.hs), end: self.start }
    }

    /// Pulls the path tight: cancels backtracks and slides ends off sides
    /// incident to their corner.
    pub fn normalize(&self, base: &Mesh) -> Result<Oriented> {
        let mut hs: Vec<HalfEdge> = Vec::with_capacity(self.hs.len());
        for &h in &self.hs {
            if hs.last() == Some(&twin(h)) {
                hs.pop();
            } else {
                hs.push(h);
            }
        }
        let mut start = self.start;
        let mut end = self.end;
        let mut lo = 0;
        let mut hi = hs.len();
        loop {
            let mut changed = false;
            if lo < hi {
                let h = hs[lo];
                if h == base.side(start, 0) {
                    start = base.corner_at(twin(h), true).unwrap();
                    lo += 1;
                    changed = true;
                } else if h == base.side(start, 2) {
                    start = base.corner_at(twin(h), false).unwrap();
                    lo += 1;
                    changed = true;
                }
            }
            if lo < hi {
                let h = twin(hs[hi - 1]);
                if h == base.side(end, 0) {
                    end = base.corner_at(twin(h), true).unwrap();
                    hi -= 1;
                    changed = true;
                } else if h == base.side(end, 2) {
                    end = base.corner_at(twin(h), false).unwrap();
                    hi -= 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if lo == hi {
            if start.tri != end.tri {
                return Err(Error::InvalidArc("path ends in two triangles".into()));
            }
            let (c1, c2) = (start.idx, end.idx);
            if c1 == c2 {
                return Err(Error::InvalidArc("null-homotopic arc".into()));
            }
            if c2 == (c1 + 1) % 3 {
                let h = base.side(start, 0);
                return Ok(Oriented::Base { arc: arc_of(h), forward: h & 1 == 0 });
            }
            let h = base.side(end, 0);
            return Ok(Oriented::Base { arc: arc_of(h), forward: h & 1 == 1 });
        }
        let hs = hs[lo..hi].to_vec();
        debug_assert_eq!(base.opposite_corner(hs[0]), Some(start));
        debug_assert_eq!(base.opposite_corner(twin(*hs.last().unwrap())), Some(end));
        Ok(Oriented::Path(hs))
    }
}

/// Corner-cutting and terminal counts of a family of disjoint normal arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalCounts {
    pub cut: Vec<[u32; 3]>,
    pub term: Vec<[u32; 3]>,
}

/// One traced arc of a normal family.
#[derive(Debug, Clone)]
pub struct Component {
    pub hs: Vec<HalfEdge>,
    /// Position along the base arc of each crossing.
    pub pos: Vec<u32>,
    pub start_slot: (Corner, u32),
    pub end_slot: (Corner, u32),
}

impl NormalCounts {
    pub fn new(nt: usize) -> Self {
        NormalCounts { cut: vec![[0; 3]; nt], term: vec![[0; 3]; nt] }
    }

    pub fn from_flat(v: &[i64]) -> Self {
        let nt = v.len() / 6;
        let mut c = NormalCounts::new(nt);
        for t in 0..nt {
            for i in 0..3 {
                c.cut[t][i] = v[6 * t + i] as u32;
                c.term[t][i] = v[6 * t + 3 + i] as u32;
            }
        }
        c
    }

    pub fn flatten(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(6 * self.cut.len());
        for t in 0..self.cut.len() {
            v.extend(self.cut[t].iter().map(|&x| x as i64));
            v.extend(self.term[t].iter().map(|&x| x as i64));
        }
        v
    }

    /// Adds one normal path.
    pub fn add(&mut self, base: &Mesh, hs: &[HalfEdge]) {
        let s = base.opposite_corner(hs[0]).unwrap();
        self.term[s.tri as usize][s.idx as usize] += 1;
        for w in hs.windows(2) {
            let t = base.tri_of(twin(w[0])).unwrap();
            let a = base.pos_in(t, twin(w[0]));
            let b = base.pos_in(t, w[1]);
            let c = if b == (a + 1) % 3 { b } else { a };
            self.cut[t as usize][c as usize] += 1;
        }
        let e = base.opposite_corner(twin(*hs.last().unwrap())).unwrap();
        self.term[e.tri as usize][e.idx as usize] += 1;
    }

    /// Number of points on the side at position `p` of triangle `t`.
    #[inline]
    pub fn width(&self, t: usize, p: usize) -> u32 {
        self.cut[t][p] + self.term[t][(p + 2) % 3] + self.cut[t][(p + 1) % 3]
    }

    fn width_he(&self, base: &Mesh, h: HalfEdge) -> u32 {
        match base.tri_of(h) {
            Some(t) => self.width(t as usize, base.pos_in(t, h) as usize),
            None => 0,
        }
    }

    /// Checks that the counts glue across every base arc.
    pub fn check_matching(&self, base: &Mesh) -> Result<()> {
        for a in 0..base.arcs.len() as u32 {
            let (l, r) = (self.width_he(base, 2 * a), self.width_he(base, 2 * a + 1));
            if l != r {
                return Err(Error::InvalidTriangulation(format!("normal counts do not match across base arc {a}")));
            }
        }
        Ok(())
    }

    /// Traces every component from its terminal slots.
    pub fn trace(&self, base: &Mesh) -> Result<Vec<Component>> {
        self.check_matching(base)?;
        let nt = self.cut.len();
        let mut seen: Vec<[Vec<bool>; 3]> =
            (0..nt).map(|t| [0, 1, 2].map(|c| vec![false; self.term[t][c] as usize])).collect();
        let total: u64 = (0..nt).flat_map(|t| (0..3).map(move |p| (t, p))).map(|(t, p)| self.width(t, p) as u64).sum();
        let mut comps = Vec::new();
        let mut crossed = 0u64;
        for t in 0..nt {
            for c in 0..3 {
                for k in 0..self.term[t][c] {
                    if seen[t][c][k as usize] {
                        continue;
                    }
                    let slot = (Corner { tri: t as u32, idx: c as u8 }, k);
                    let comp = self.trace_from(base, slot, total)?;
                    seen[t][c][k as usize] = true;
                    let (ec, ek) = comp.end_slot;
                    if seen[ec.tri as usize][ec.idx as usize][ek as usize] {
                        return Err(Error::InvalidTriangulation("arc ends at a used slot".into()));
                    }
                    seen[ec.tri as usize][ec.idx as usize][ek as usize] = true;
                    crossed += 2 * comp.hs.len() as u64;
                    comps.push(comp);
                }
            }
        }
        if crossed != total {
            return Err(Error::InvalidTriangulation("normal family contains closed curves".into()));
        }
        Ok(comps)
    }

    fn trace_from(&self, base: &Mesh, slot: (Corner, u32), limit: u64) -> Result<Component> {
        let (c0, k0) = slot;
        let mut t = c0.tri as usize;
        let mut p = (c0.idx as usize + 1) % 3;
        let mut j = self.cut[t][p] + k0;
        let mut hs = Vec::new();
        let mut pos = Vec::new();
        loop {
            if hs.len() as u64 > limit {
                return Err(Error::InvalidTriangulation("runaway trace".into()));
            }
            let h = base.tris[t][p];
            let w = self.width(t, p);
            hs.push(h);
            pos.push(if h & 1 == 1 { w - 1 - j } else { j });
            let h2 = twin(h);
            let t2 = base.tri_of(h2).ok_or_else(|| Error::InvalidTriangulation("trace left the surface".into()))? as usize;
            let p2 = base.pos_in(t2 as u32, h2) as usize;
            let j2 = w - 1 - j;
            let cp = self.cut[t2][p2];
            let tm = self.term[t2][(p2 + 2) % 3];
            if j2 < cp {
                let q = (p2 + 2) % 3;
                j = self.width(t2, q) - 1 - j2;
                p = q;
                t = t2;
            } else if j2 < cp + tm {
                let end = (Corner { tri: t2 as u32, idx: ((p2 + 2) % 3) as u8 }, j2 - cp);
                return Ok(Component { hs, pos, start_slot: slot, end_slot: end });
            } else {
                let q = (p2 + 1) % 3;
                j = self.width(t2, p2) - 1 - j2;
                p = q;
                t = t2;
            }
        }
    }
}
