//! Model geometries in dimensions 2, 3 and 4 with the attributes the rules
//! engine consumes.
//!
//! The tables are static; every lookup hands out a `&'static GeometryFact`.

use serde::Serialize;
use thiserror::Error;

use crate::bound::{DimBound, ExtendedDim};
use crate::group::SurfaceKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryClass {
    SphericalType,
    Euclidean,
    RealHyperbolic,
    ComplexHyperbolic,
    Nil,
    Sol,
    /// Universal cover of SL2(R).
    Sl2Type,
    Product,
    #[serde(rename = "F4-type")]
    F4Type,
}

/// How the engine bounds a lattice in the geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeRoute {
    /// Compact model: every lattice is finite.
    Finite,
    /// Dimension-2 geometries: closed-surface groups.
    Surface(SurfaceKind),
    /// Virtually free abelian.
    Euclid,
    /// Cocompact lattice in a connected Lie group, asdim = dim G/K.
    LieLattice,
    /// Quasi-isometric to real hyperbolic space (cocompact) or acting properly on it.
    RealHyperbolic,
    /// Acting properly on complex hyperbolic space, bounded through Nagata dimension.
    ComplexHyperbolic,
    /// Product bound over the factor lattices.
    Product,
    /// Z^2 by hyperbolic base orbifold group.
    Extension,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryFact {
    pub name: &'static str,
    pub dim: u8,
    pub class: GeometryClass,
    pub model_asdim: DimBound,
    pub lattice_asdim: DimBound,
    /// Rule ids justifying `lattice_asdim`, upper bound first.
    pub lattice_rules: &'static [&'static str],
    pub aspherical_model: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<&'static [&'static str]>,
    pub compact_model: bool,
    pub lattice_route: LatticeRoute,
    /// Finite-volume quotients are hyperbolic relative to their cusp groups.
    pub cusped_relatively_hyperbolic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown geometry `{name}` in dimension {dim}; valid names: {}", valid.join(", "))]
    UnknownGeometry { name: String, dim: u8, valid: Vec<&'static str> },
    #[error("unsupported dimension {0}; the catalog covers dimensions 2, 3 and 4")]
    UnsupportedDimension(u32),
}

use ExtendedDim::{Number, Unknown};
use GeometryClass as C;
use LatticeRoute as R;

const fn b(lower: u32, upper: u32) -> DimBound {
    DimBound::from_parts(lower, Number(upper))
}

#[allow(clippy::too_many_arguments)]
const fn fact(
    name: &'static str,
    dim: u8,
    class: GeometryClass,
    model_asdim: DimBound,
    lattice_asdim: DimBound,
    lattice_rules: &'static [&'static str],
    aspherical_model: bool,
    factors: Option<&'static [&'static str]>,
    compact_model: bool,
    lattice_route: LatticeRoute,
    cusped_relatively_hyperbolic: bool,
) -> GeometryFact {
    GeometryFact {
        name,
        dim,
        class,
        model_asdim,
        lattice_asdim,
        lattice_rules,
        aspherical_model,
        factors,
        compact_model,
        lattice_route,
        cusped_relatively_hyperbolic,
    }
}

#[rustfmt::skip]
static DIM2: [GeometryFact; 3] = [
    fact("S2", 2, C::SphericalType, b(0, 0), b(0, 0), &["R-FINITE"], false, None, true,
        R::Surface(SurfaceKind::Spherical), false),
    fact("E2", 2, C::Euclidean, b(2, 2), b(2, 2), &["R-SURFACE"], true, None, false,
        R::Surface(SurfaceKind::Flat), false),
    fact("H2", 2, C::RealHyperbolic, b(2, 2), b(2, 2), &["R-SURFACE"], true, None, false,
        R::Surface(SurfaceKind::Hyperbolic), true),
];

#[rustfmt::skip]
static DIM3: [GeometryFact; 8] = [
    fact("S3", 3, C::SphericalType, b(0, 0), b(0, 0), &["R-FINITE"], false, None, true,
        R::Finite, false),
    fact("E3", 3, C::Euclidean, b(3, 3), b(3, 3), &["R-EUCLID"], true, None, false,
        R::Euclid, false),
    fact("H3", 3, C::RealHyperbolic, b(3, 3), b(3, 3), &["R-HYPERBOLIC"], true, None, false,
        R::RealHyperbolic, true),
    fact("S2xE", 3, C::Product, b(0, 1), b(1, 1), &["R-PRODUCT", "R-INFINITE-LB"], false,
        Some(&["S2", "E1"]), false, R::Product, false),
    fact("H2xE", 3, C::Product, b(3, 3), b(3, 3), &["R-PRODUCT", "R-ASPH-LB"], true,
        Some(&["H2", "E1"]), false, R::Product, false),
    fact("Nil3", 3, C::Nil, b(3, 3), b(3, 3), &["R-LIE-LATTICE"], true, None, false,
        R::LieLattice, false),
    fact("Sol3", 3, C::Sol, b(3, 3), b(3, 3), &["R-LIE-LATTICE"], true, None, false,
        R::LieLattice, false),
    fact("SL2~", 3, C::Sl2Type, b(3, 3), b(3, 3), &["R-LIE-LATTICE"], true, None, false,
        R::LieLattice, false),
];

#[rustfmt::skip]
static DIM4: [GeometryFact; 19] = [
    fact("S4", 4, C::SphericalType, b(0, 0), b(0, 0), &["R-FINITE"], false, None, true,
        R::Finite, false),
    fact("CP2", 4, C::SphericalType, b(0, 0), b(0, 0), &["R-FINITE"], false, None, true,
        R::Finite, false),
    fact("S3xE", 4, C::Product, b(0, 1), b(1, 1), &["R-PRODUCT", "R-INFINITE-LB"], false,
        Some(&["S3", "E1"]), false, R::Product, false),
    fact("H3xE", 4, C::Product, b(4, 4), b(4, 4), &["R-PRODUCT", "R-ASPH-LB"], true,
        Some(&["H3", "E1"]), false, R::Product, false),
    fact("SL2~xE", 4, C::Product, b(4, 4), b(4, 4), &["R-PRODUCT", "R-ASPH-LB"], true,
        Some(&["SL2~", "E1"]), false, R::Product, false),
    fact("Nil3xE", 4, C::Nil, b(4, 4), b(4, 4), &["R-LIE-LATTICE"], true,
        Some(&["Nil3", "E1"]), false, R::LieLattice, false),
    fact("Nil4", 4, C::Nil, b(4, 4), b(4, 4), &["R-LIE-LATTICE"], true, None, false,
        R::LieLattice, false),
    fact("S2xE2", 4, C::Product, b(0, 2), b(1, 2), &["R-PRODUCT", "R-INFINITE-LB"], false,
        Some(&["S2", "E2"]), false, R::Product, false),
    fact("H2xE2", 4, C::Product, b(4, 4), b(4, 4), &["R-PRODUCT", "R-ASPH-LB"], true,
        Some(&["H2", "E2"]), false, R::Product, false),
    fact("Sol4_mn", 4, C::Sol, b(4, 4), b(4, 4), &["R-LIE-LATTICE"], true, None, false,
        R::LieLattice, false),
    fact("Sol4_1", 4, C::Sol, b(4, 4), b(4, 4), &["R-LIE-LATTICE"], true, None, false,
        R::LieLattice, false),
    fact("Sol4_0", 4, C::Sol, b(4, 4), b(4, 4), &["R-LIE-LATTICE"], true, None, false,
        R::LieLattice, false),
    fact("S2xS2", 4, C::Product, b(0, 0), b(0, 0), &["R-FINITE"], false,
        Some(&["S2", "S2"]), true, R::Finite, false),
    fact("S2xH2", 4, C::Product, b(0, 2), b(1, 2), &["R-PRODUCT", "R-INFINITE-LB"], false,
        Some(&["S2", "H2"]), false, R::Product, false),
    fact("E4", 4, C::Euclidean, b(4, 4), b(4, 4), &["R-LIE-LATTICE"], true, None, false,
        R::LieLattice, false),
    fact("F4", 4, C::F4Type, DimBound::from_parts(0, Unknown), b(1, 4),
        &["R-EXTENSION"], false, None, false, R::Extension, false),
    fact("H4", 4, C::RealHyperbolic, b(4, 4), b(4, 4), &["R-HYPERBOLIC"], true, None, false,
        R::RealHyperbolic, true),
    fact("H2xH2", 4, C::Product, b(4, 4), b(4, 4), &["R-PRODUCT", "R-ASPH-LB"], true,
        Some(&["H2", "H2"]), false, R::Product, false),
    fact("H2C", 4, C::ComplexHyperbolic, b(4, 4), b(4, 4), &["R-NAGATA", "R-ASPH-LB"], true,
        None, false, R::ComplexHyperbolic, true),
];

/// The real line, used only as a product factor.
pub const LINE_FACTOR: &str = "E1";

fn table(dim: u32) -> Result<&'static [GeometryFact], CatalogError> {
    match dim {
        2 => Ok(&DIM2),
        3 => Ok(&DIM3),
        4 => Ok(&DIM4),
        other => Err(CatalogError::UnsupportedDimension(other)),
    }
}

/// All geometries of a dimension, in canonical order.
pub fn list_geometries(dim: u32) -> Result<&'static [GeometryFact], CatalogError> {
    table(dim)
}

pub fn lookup_geometry(name: &str, dim: u32) -> Result<&'static GeometryFact, CatalogError> {
    let facts = table(dim)?;
    facts.iter().find(|g| g.name == name).ok_or_else(|| CatalogError::UnknownGeometry {
        name: name.to_string(),
        dim: dim as u8,
        valid: facts.iter().map(|g| g.name).collect(),
    })
}

/// Looks a name up in every dimension; names are unique across the catalog.
pub fn find_any(name: &str) -> Option<&'static GeometryFact> {
    DIM2.iter().chain(DIM3.iter()).chain(DIM4.iter()).find(|g| g.name == name)
}

/// Dimension of a product factor, including the line factor.
pub fn factor_dim(name: &str) -> Option<u8> {
    if name == LINE_FACTOR {
        return Some(1);
    }
    find_any(name).map(|g| g.dim)
}

/// Model-space bound of a product factor, including the line factor.
pub fn factor_model_asdim(name: &str) -> Option<DimBound> {
    if name == LINE_FACTOR {
        return Some(DimBound::exact(1));
    }
    find_any(name).map(|g| g.model_asdim)
}

/// The geometries with aspherical closed quotients in dimension 4.
pub fn aspherical_geometries(dim: u32) -> Result<Vec<&'static str>, CatalogError> {
    Ok(table(dim)?.iter().filter(|g| g.aspherical_model).map(|g| g.name).collect())
}
