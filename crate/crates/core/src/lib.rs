//! Asymptotic-dimension bounds for fundamental groups of geometric and
//! geometrizable manifolds, with replayable proofs.

pub mod bound;
pub mod catalog;
pub mod engine;
pub mod group;
pub mod lab;
pub mod manifold;
pub mod rules;

pub use bound::{BoundError, DimBound, ExtendedDim};
pub use catalog::{list_geometries, lookup_geometry, CatalogError, GeometryClass, GeometryFact};
pub use engine::{bound, consequences, replay, Consequence, Derivation, EngineError, ProofTrace};
pub use group::{is_infinite, normalize, GroupExpr, InfinitenessStatus, SurfaceKind};
pub use rules::{apply_rule, RuleId};
