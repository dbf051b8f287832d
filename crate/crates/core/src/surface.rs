//! Surface signatures, arc complexity and growth regimes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Topological type of a marked surface.
///
/// Marked points are labelled `0..n` for boundary points, curve by curve,
/// followed by `n..n+p` for punctures.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceSig {
    pub genus: u32,
    pub punctures: u32,
    pub boundary: Vec<u32>,
}

/// Growth regime of `Δ_k` as `k` grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    Empty,
    Finite,
    GrowthPolynomial,
    GrowthExponential,
    Unknown,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::Empty => "Empty",
            Regime::Finite => "Finite",
            Regime::GrowthPolynomial => "GrowthPolynomial",
            Regime::GrowthExponential => "GrowthExponential",
            Regime::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// Checks raw parameters and returns a signature that admits triangulations.
pub fn validate_signature(genus: u32, punctures: u32, boundary: &[u32]) -> Result<SurfaceSig> {
    if let Some(i) = boundary.iter().position(|&m| m == 0) {
        return Err(Error::NonPositiveBoundaryCount(i));
    }
    if boundary.is_empty() && punctures == 0 {
        return Err(Error::EmptyFlipGraph("no boundary and no puncture".into()));
    }
    if genus > 0 {
        return Err(Error::UnsupportedGenus(genus));
    }
    if boundary.is_empty() && punctures < 3 {
        return Err(Error::EmptyFlipGraph(format!("sphere with {punctures} punctures")));
    }
    if boundary.len() == 1 && punctures == 0 && boundary[0] < 3 {
        return Err(Error::EmptyFlipGraph(format!("disk with {} marked points", boundary[0])));
    }
    Ok(SurfaceSig { genus, punctures, boundary: boundary.to_vec() })
}

impl SurfaceSig {
    pub fn new(genus: u32, punctures: u32, boundary: &[u32]) -> Result<Self> {
        validate_signature(genus, punctures, boundary)
    }

    pub fn disk(n: u32) -> Result<Self> {
        Self::new(0, 0, &[n])
    }

    pub fn punctured_disk(p: u32, n: u32) -> Result<Self> {
        Self::new(0, p, &[n])
    }

    pub fn cylinder(m1: u32, m2: u32) -> Result<Self> {
        Self::new(0, 0, &[m1, m2])
    }

    pub fn sphere(p: u32) -> Result<Self> {
        Self::new(0, p, &[])
    }

    /// Re-checks the invariants.
    pub fn check(&self) -> Result<()> {
        validate_signature(self.genus, self.punctures, &self.boundary).map(|_| ())
    }

    /// Number of boundary marked points.
    pub fn n(&self) -> u32 {
        self.boundary.iter().sum()
    }

    /// Number of boundary curves.
    pub fn b(&self) -> u32 {
        self.boundary.len() as u32
    }

    pub fn num_marks(&self) -> u32 {
        self.n() + self.punctures
    }

    pub fn is_puncture(&self, label: u32) -> bool {
        label >= self.n() && label < self.num_marks()
    }

    /// Boundary curve containing a boundary label.
    pub fn curve_of(&self, label: u32) -> Option<usize> {
        let mut start = 0;
        for (i, &m) in self.boundary.iter().enumerate() {
            if label < start + m {
                return Some(i);
            }
            start += m;
        }
        None
    }

    /// Number of arcs, boundary arcs included, in any triangulation.
    pub fn kappa(&self) -> u32 {
        arc_complexity(self)
    }

    /// Number of triangles in any triangulation.
    pub fn triangles(&self) -> u32 {
        (2 * self.kappa() - self.n()) / 3
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self.genus, self.punctures, self.b(), self.num_marks() > 0)
    }

    pub fn star(&self) -> SurfaceSig {
        star_reduction(self)
    }

    /// Parses `disk:n`, `pdisk:p,n`, `cyl:m1,m2`, `sphere:p` or a JSON object.
    pub fn parse(s: &str) -> Result<Self> {
        s.parse()
    }

    /// Short human-readable name.
    pub fn shorthand(&self) -> String {
        match (self.punctures, self.boundary.as_slice()) {
            (0, [n]) => format!("disk:{n}"),
            (p, [n]) => format!("pdisk:{p},{n}"),
            (0, [a, b]) => format!("cyl:{a},{b}"),
            (p, []) => format!("sphere:{p}"),
            _ => serde_json::to_string(self).unwrap_or_default(),
        }
    }
}

impl fmt::Display for SurfaceSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.shorthand())
    }
}

impl FromStr for SurfaceSig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let raw: SurfaceSig = serde_json::from_str(s)?;
            return validate_signature(raw.genus, raw.punctures, &raw.boundary);
        }
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected kind:args, got {s:?}")))?;
        let nums = args
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        match (kind, nums.as_slice()) {
            ("disk", [n]) => SurfaceSig::disk(*n),
            ("pdisk", [p, n]) => SurfaceSig::punctured_disk(*p, *n),
            ("cyl", [a, b]) => SurfaceSig::cylinder(*a, *b),
            ("sphere", [p]) => SurfaceSig::sphere(*p),
            _ => Err(Error::Parse(format!("unknown surface shorthand {s:?}"))),
        }
    }
}

/// κ = 3(p+n) − n − 3(2 − 2g − b).
pub fn arc_complexity(sig: &SurfaceSig) -> u32 {
    let p = sig.punctures as i64;
    let n = sig.n() as i64;
    let g = sig.genus as i64;
    let b = sig.b() as i64;
    let k = 3 * (p + n) - n - 3 * (2 - 2 * g - b);
    debug_assert!(k > 0);
    k as u32
}

/// Growth regime decision table, total over all genera.
pub fn classify_regime(genus: u32, punctures: u32, b: u32, any_marked_points: bool) -> Regime {
    let (g, p) = (genus, punctures);
    if !any_marked_points || (b == 0 && p == 0) || (g == 0 && b == 0 && p < 3) {
        return Regime::Empty;
    }
    match (g, b, p) {
        (0, 1, 0) | (0, 1, 1) | (0, 0, 3) => Regime::Finite,
        (0, 2, 0) | (0, 1, 2) => Regime::GrowthPolynomial,
        (0, 0, 4) | (1, 1, 0) => Regime::Unknown,
        _ if 2 * g + p + b >= 3 => Regime::GrowthExponential,
        _ => Regime::Empty,
    }
}

/// Keeps one marked point per boundary curve.
pub fn star_reduction(sig: &SurfaceSig) -> SurfaceSig {
    SurfaceSig {
        genus: sig.genus,
        punctures: sig.punctures,
        boundary: vec![1; sig.boundary.len()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        assert!(matches!(validate_signature(0, 0, &[]), Err(Error::EmptyFlipGraph(_))));
        assert!(validate_signature(0, 0, &[6]).is_ok());
        assert!(validate_signature(0, 2, &[3]).is_ok());
        assert!(matches!(validate_signature(1, 1, &[1]), Err(Error::UnsupportedGenus(1))));
        assert!(matches!(validate_signature(0, 1, &[2, 0]), Err(Error::NonPositiveBoundaryCount(1))));
        assert!(matches!(validate_signature(0, 2, &[]), Err(Error::EmptyFlipGraph(_))));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(SurfaceSig::disk(6).unwrap().kappa(), 9);
        assert_eq!(SurfaceSig::cylinder(1, 1).unwrap().kappa(), 4);
        assert_eq!(SurfaceSig::sphere(3).unwrap().kappa(), 3);
        for n in 4..=12 {
            assert_eq!(SurfaceSig::disk(n).unwrap().kappa(), 2 * n - 3);
        }
    }

    #[test]
    fn regime_examples() {
        assert_eq!(classify_regime(1, 0, 1, true), Regime::Unknown);
        assert_eq!(classify_regime(0, 0, 2, true), Regime::GrowthPolynomial);
        assert_eq!(classify_regime(0, 5, 0, true), Regime::GrowthExponential);
        assert_eq!(classify_regime(0, 4, 0, true), Regime::Unknown);
        assert_eq!(classify_regime(0, 2, 1, true), Regime::GrowthPolynomial);
        assert_eq!(classify_regime(0, 0, 1, true), Regime::Finite);
        assert_eq!(classify_regime(0, 1, 1, true), Regime::Finite);
        assert_eq!(classify_regime(0, 3, 0, true), Regime::Finite);
        assert_eq!(classify_regime(2, 0, 0, true), Regime::Empty);
        assert_eq!(classify_regime(1, 1, 0, true), Regime::GrowthExponential);
    }

    #[test]
    fn star_examples() {
        let s = SurfaceSig { genus: 0, punctures: 0, boundary: vec![5, 2] };
        assert_eq!(star_reduction(&s).boundary, vec![1, 1]);
        let s = SurfaceSig::new(0, 2, &[1]).unwrap();
        assert_eq!(star_reduction(&s), s);
        let d = star_reduction(&SurfaceSig::disk(6).unwrap());
        assert_eq!(d.boundary, vec![1]);
        assert!(d.check().is_err());
    }

    #[test]
    fn shorthand_round_trip() {
        for s in ["disk:6", "pdisk:2,1", "cyl:2,1", "sphere:5"] {
            let sig: SurfaceSig = s.parse().unwrap();
            assert_eq!(sig.shorthand(), s);
        }
        let sig: SurfaceSig = r#"{"genus":0,"punctures":1,"boundary":[4]}"#.parse().unwrap();
        assert_eq!(sig.shorthand(), "pdisk:1,4");
    }
}
