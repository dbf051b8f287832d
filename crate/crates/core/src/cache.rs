//! Persisted explorations.
//!
//! File layout, all integers little-endian:
//!
//! ```text
//! "FGC1"  u32 version  u32 flags (bit 0 partial, bit 1 closed)
//! u32 radius  u32 reached
//! u32 len, header JSON ({"surface": .., "frame": ..})
//! u32 len, root key
//! u64 record count
//! records sorted by key: u32 len, key, u32 depth, u32 degree, degree x (u32 len, key)
//! ```

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explore::Region;
use crate::frame::FrameSpec;
use crate::surface::SurfaceSig;
use crate::triangulation::{CanonicalKey, Triangulation};

const MAGIC: &[u8; 4] = b"FGC1";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub surface: SurfaceSig,
    pub frame: FrameSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub key: CanonicalKey,
    pub depth: u32,
    /// Sorted.
    pub neighbors: Vec<CanonicalKey>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplorationCache {
    pub header: CacheHeader,
    pub root: CanonicalKey,
    pub radius: u32,
    pub reached: u32,
    pub partial: bool,
    pub closed: bool,
    /// Sorted by key.
    pub records: Vec<Record>,
}

impl ExplorationCache {
    pub fn from_region(root: &Triangulation, r: &Region) -> ExplorationCache {
        let mut records: Vec<Record> = (0..r.len())
            .map(|i| {
                let mut neighbors: Vec<CanonicalKey> = r.adj[i].iter().map(|&(v, _)| r.keys[v as usize].clone()).collect();
                neighbors.sort();
                Record { key: r.keys[i].clone(), depth: r.depth[i], neighbors }
            })
            .collect();
        records.sort_by(|a, b| a.key.cmp(&b.key));
        ExplorationCache {
            header: CacheHeader { surface: root.surface().clone(), frame: root.frame().spec.clone() },
            root: root.key(),
            radius: r.radius,
            reached: r.reached,
            partial: r.exceeded,
            closed: r.closed,
            records,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<&Record> {
        self.records.binary_search_by(|r| r.key.cmp(key)).ok().map(|i| &self.records[i])
    }

    /// Λ_k of the root for k = 0..=reached.
    pub fn ball_sizes(&self) -> Vec<usize> {
        let mut v = vec![0usize; self.reached as usize + 1];
        for r in &self.records {
            if r.depth <= self.reached {
                v[r.depth as usize] += 1;
            }
        }
        let mut acc = 0;
        v.iter_mut().for_each(|x| {
            acc += *x;
            *x = acc;
        });
        v
    }

    pub fn edge_count(&self) -> usize {
        self.records.iter().map(|r| r.neighbors.len()).sum::<usize>() / 2
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        put_u32(&mut out, VERSION);
        put_u32(&mut out, self.partial as u32 | (self.closed as u32) << 1);
        put_u32(&mut out, self.radius);
        put_u32(&mut out, self.reached);
        put_bytes(&mut out, serde_json::to_string(&self.header).expect("serializable").as_bytes());
        put_bytes(&mut out, &self.root.0);
        out.extend_from_slice(&(self.records.len() as u64).to_le_bytes());
        for r in &self.records {
            put_bytes(&mut out, &r.key.0);
            put_u32(&mut out, r.depth);
            put_u32(&mut out, r.neighbors.len() as u32);
            for n in &r.neighbors {
                put_bytes(&mut out, &n.0);
            }
        }
        out
    }

    pub fn from_bytes(b: &[u8]) -> Result<ExplorationCache> {
        let mut c = Cursor { b, at: 0 };
        if c.take(4)? != MAGIC {
            return Err(Error::Parse("not a flip-graph cache".into()));
        }
        let version = c.u32()?;
        if version != VERSION {
            return Err(Error::Parse(format!("unsupported cache version {version}")));
        }
        let flags = c.u32()?;
        let radius = c.u32()?;
        let reached = c.u32()?;
        let header: CacheHeader = serde_json::from_slice(c.bytes()?)?;
        let root = CanonicalKey(c.bytes()?.to_vec());
        let n = u64::from_le_bytes(c.take(8)?.try_into().unwrap()) as usize;
        let mut records = Vec::with_capacity(n.min(1 << 20));
        for _ in 0..n {
            let key = CanonicalKey(c.bytes()?.to_vec());
            let depth = c.u32()?;
            let deg = c.u32()? as usize;
            let mut neighbors = Vec::with_capacity(deg.min(1 << 10));
            for _ in 0..deg {
                neighbors.push(CanonicalKey(c.bytes()?.to_vec()));
            }
            records.push(Record { key, depth, neighbors });
        }
        if c.at != b.len() {
            return Err(Error::Parse("trailing bytes in cache".into()));
        }
        Ok(ExplorationCache { header, root, radius, reached, partial: flags & 1 != 0, closed: flags & 2 != 0, records })
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<ExplorationCache> {
        let mut b = Vec::new();
        r.read_to_end(&mut b)?;
        Self::from_bytes(&b)
    }

    /// Graphviz export; nodes are numbered in key order.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph flipgraph {\n");
        for (i, r) in self.records.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{}\" depth={}];\n", i, r.depth));
        }
        for (i, r) in self.records.iter().enumerate() {
            for n in &r.neighbors {
                let j = self.records.binary_search_by(|x| x.key.cmp(n)).expect("neighbor recorded");
                if i < j {
                    s.push_str(&format!("  n{i} -- n{j};\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }

    /// JSON adjacency export.
    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .records
            .iter()
            .map(|r| {
                serde_json::json!({
                    "key": r.key.to_hex(),
                    "depth": r.depth,
                    "neighbors": r.neighbors.iter().map(|n| n.to_hex()).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "format": "FGC1",
            "surface": self.header.surface,
            "frame": self.header.frame,
            "root": self.root.to_hex(),
            "radius": self.radius,
            "reached": self.reached,
            "partial": self.partial,
            "closed": self.closed,
            "nodes": nodes,
        })
    }
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_bytes(out: &mut Vec<u8>, b: &[u8]) {
    put_u32(out, b.len() as u32);
    out.extend_from_slice(b);
}

struct Cursor<'a> {
    b: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.at.checked_add(n).filter(|&e| e <= self.b.len()).ok_or_else(|| Error::Parse("truncated cache".into()))?;
        let s = &self.b[self.at..end];
        self.at = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn bytes(&mut self) -> Result<&'a [u8]> {
        let n = self.u32()? as usize;
        self.take(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::{ball, Budget};

    #[test]
    fn round_trip() {
        let t = Triangulation::base(&"cyl:1,1".parse().unwrap()).unwrap();
        let c = ball(&t, 2, &Budget::default()).unwrap();
        assert_eq!(c.len(), 5);
        let back = ExplorationCache::from_bytes(&c.to_bytes()).unwrap();
        assert_eq!(back, c);
        assert_eq!(c.edge_count(), 4);
        assert!(ExplorationCache::from_bytes(&c.to_bytes()[..20]).is_err());
    }
}
