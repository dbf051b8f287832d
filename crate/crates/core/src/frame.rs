//! Reference frames: a surface together with the base triangulation that
//! normal coordinates are measured against.
//!
//! Default base layouts, per family:
//! - disk: fan from point 0;
//! - sphere: two triangles on punctures 0, 1, 2, further punctures inserted
//!   in the most recently created triangle;
//! - once-punctured disk: self-folded monogon, punctured bigon, or the fan
//!   with the puncture inside triangle 0-1-2;
//! - cylinder: the two-triangle annulus, extra boundary points inserted
//!   before each curve's first point;
//! - everything else: a punctured sphere with its first `b` punctures opened
//!   into boundary curves.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{contract_mesh, Builder, Mesh, MeshContraction};
use crate::surface::SurfaceSig;

/// One contraction step, in the labels of the frame it is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContractionStep {
    pub tail: u32,
    pub head: u32,
    pub removed: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrameSpec {
    pub root: SurfaceSig,
    pub contractions: Vec<ContractionStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub sig: SurfaceSig,
    pub mesh: Mesh,
    pub spec: FrameSpec,
}

impl Frame {
    /// Default frame of a signature.
    pub fn standard(sig: &SurfaceSig) -> Result<Arc<Frame>> {
        let mesh = base_mesh(sig)?;
        Ok(Arc::new(Frame {
            sig: sig.clone(),
            mesh,
            spec: FrameSpec { root: sig.clone(), contractions: vec![] },
        }))
    }

    pub fn from_spec(spec: &FrameSpec) -> Result<Arc<Frame>> {
        let mut f = Frame::standard(&spec.root)?;
        for step in &spec.contractions {
            f = f.contract(step.tail, step.head, step.removed)?.0;
        }
        Ok(f)
    }

    pub fn is_standard(&self) -> bool {
        self.spec.contractions.is_empty()
    }

    /// Frame obtained by contracting the boundary arc between `tail` and `head`.
    pub fn contract(self: &Arc<Self>, tail: u32, head: u32, removed: u32) -> Result<(Arc<Frame>, MeshContraction)> {
        let alpha = self
            .mesh
            .boundary_arc_between(tail, head)
            .ok_or_else(|| Error::InvalidArc(format!("no unique boundary arc {tail}-{head}")))?;
        let a = &self.mesh.arcs[alpha as usize];
        if a.is_loop() {
            return Err(Error::LoopContraction);
        }
        if removed != a.tail && removed != a.head {
            return Err(Error::UnknownMarkedPoint(removed));
        }
        let retained = if removed == a.tail { a.head } else { a.tail };
        let curve = self.sig.curve_of(removed).expect("boundary point");
        let mut boundary = self.sig.boundary.clone();
        boundary[curve] -= 1;
        let sig = SurfaceSig { genus: 0, punctures: self.sig.punctures, boundary };
        sig.check().map_err(|e| Error::NotTriangulable(e.to_string()))?;
        let mut map: Vec<u32> = (0..self.mesh.num_marks).map(|l| if l > removed { l - 1 } else { l }).collect();
        map[removed as usize] = map[retained as usize];
        let (mesh, ctr) = contract_mesh(&self.mesh, alpha, removed, map)?;
        let mut spec = self.spec.clone();
        spec.contractions.push(ContractionStep { tail: a.tail, head: a.head, removed });
        Ok((Arc::new(Frame { sig, mesh, spec }), ctr))
    }
}

/// Base mesh for a signature, with standard labels.
pub fn base_mesh(sig: &SurfaceSig) -> Result<Mesh> {
    sig.check().map_err(|e| Error::NotTriangulable(e.to_string()))?;
    let p = sig.punctures;
    let bd = &sig.boundary;
    let b = match (bd.len(), p) {
        (0, _) => {
            let mut b = Builder::sphere3();
            for _ in 3..p {
                let t = b.mesh.tris.len() as u32 - 1;
                b.stellar(t);
            }
            b
        }
        (1, 0) => Builder::polygon(bd[0]),
        (1, 1) => match bd[0] {
            1 => Builder::punctured_monogon(),
            2 => Builder::punctured_bigon(),
            n => {
                let mut b = Builder::polygon(n);
                b.stellar(0);
                b
            }
        },
        (2, 0) => {
            let mut b = Builder::gamma();
            fill_curves(&mut b, bd);
            b
        }
        (nb, _) => {
            let mut b = Builder::sphere3();
            for _ in 3..(p + nb as u32) {
                let t = b.mesh.tris.len() as u32 - 1;
                b.stellar(t);
            }
            for v in 0..nb as u32 {
                b.blow_up(v);
            }
            fill_curves(&mut b, bd);
            b
        }
    };
    b.mesh.validate()?;
    Ok(b.finish())
}

fn fill_curves(b: &mut Builder, counts: &[u32]) {
    for (i, &m) in counts.iter().enumerate() {
        let anchor = b.anchors[i];
        for _ in 1..m {
            let a = b.incoming_boundary(anchor);
            b.insert_boundary_point(a);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigs() -> Vec<SurfaceSig> {
        ["disk:3", "disk:6", "pdisk:1,1", "pdisk:1,2", "pdisk:1,4", "pdisk:2,1", "pdisk:2,3", "pdisk:3,1", "cyl:1,1", "cyl:2,1", "cyl:3,2", "sphere:3", "sphere:5"]
            .iter()
            .map(|s| s.parse().unwrap())
            .chain([SurfaceSig::new(0, 1, &[2, 1, 1]).unwrap()])
            .collect()
    }

    #[test]
    fn base_meshes_have_expected_size() {
        for sig in sigs() {
            let m = base_mesh(&sig).unwrap();
            assert_eq!(m.arcs.len() as u32, sig.kappa(), "{sig}");
            assert_eq!(m.tris.len() as u32, sig.triangles(), "{sig}");
            assert_eq!(m.num_marks, sig.num_marks());
            let nb = m.arcs.iter().filter(|a| a.boundary).count() as u32;
            assert_eq!(nb, sig.n(), "{sig}");
        }
    }

    #[test]
    fn boundary_labels_follow_curves() {
        for sig in sigs() {
            let m = base_mesh(&sig).unwrap();
            let mut start = 0;
            for &c in &sig.boundary {
                for i in 0..c {
                    let v = start + i;
                    let next = start + (i + 1) % c;
                    assert!(m.arcs.iter().any(|a| a.boundary && a.tail == v && a.head == next), "{sig}: {v}->{next}");
                }
                start += c;
            }
        }
    }

    #[test]
    fn hexagon_is_fan_from_zero() {
        let m = base_mesh(&"disk:6".parse().unwrap()).unwrap();
        let mut diags: Vec<(u32, u32)> = m.arcs.iter().filter(|a| !a.boundary).map(|a| (a.tail, a.head)).collect();
        diags.sort();
        assert_eq!(diags, vec![(0, 2), (0, 3), (0, 4)]);
    }
}
