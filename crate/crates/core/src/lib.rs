//! Flip-graphs of triangulations of genus-0 marked surfaces.
//!
//! Arcs are stored as normal paths relative to a fixed base triangulation,
//! which gives every triangulation a canonical byte key. On top of that the
//! crate provides flips, breadth-first exploration with exact geodesic
//! counting, boundary-arc contraction and its section, and evaluators for the
//! growth bounds of `Δ_k`.

mod bigint_dec;
pub mod bounds;
pub mod cache;
pub mod contraction;
pub mod error;
pub mod explore;
pub mod frame;
pub mod harness;
pub mod mesh;
pub mod par;
pub mod path;
pub mod surface;
pub mod triangulation;

pub use cache::ExplorationCache;
pub use contraction::ContractionContext;
pub use error::{Error, Result};
pub use explore::{Budget, DeltaTable, FiniteGraph, GeodesicReport};
pub use par::Exec;
pub use frame::Frame;
pub use harness::{VerifyOptions, VerifyReport};
pub use path::ArcPath;
pub use surface::{arc_complexity, classify_regime, star_reduction, validate_signature, Regime, SurfaceSig};
pub use triangulation::{ArcClass, CanonicalKey, Triangulation};
