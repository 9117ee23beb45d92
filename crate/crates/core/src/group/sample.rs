//! Random expression generator for property tests and fuzzing.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{GroupExpr, SurfaceKind};
use crate::bound::{DimBound, ExtendedDim};
use crate::catalog;

fn random_upper<R: Rng>(rng: &mut R, min: u32) -> ExtendedDim {
    match rng.gen_range(0..10) {
        0 => ExtendedDim::FiniteUnknown,
        1 => ExtendedDim::Unknown,
        _ => ExtendedDim::Number(rng.gen_range(min..=6)),
    }
}

fn random_bound<R: Rng>(rng: &mut R, min_upper: u32) -> DimBound {
    let upper = random_upper(rng, min_upper);
    let cap = upper.number().unwrap_or(6);
    DimBound::new(rng.gen_range(0..=cap), upper).expect("lower drawn below upper")
}

fn leaf<R: Rng>(rng: &mut R) -> GroupExpr {
    let kinds = [SurfaceKind::Spherical, SurfaceKind::Flat, SurfaceKind::Hyperbolic];
    match rng.gen_range(0..8) {
        0 => GroupExpr::Trivial,
        1 => GroupExpr::Finite(if rng.gen_bool(0.3) { None } else { Some(rng.gen_range(1..50)) }),
        2 => GroupExpr::FreeAbelian(rng.gen_range(0..5)),
        3 => GroupExpr::SurfaceGroup(*kinds.choose(rng).unwrap()),
        4 | 5 => {
            let dim = rng.gen_range(2..=4u32);
            let facts = catalog::list_geometries(dim).expect("catalog dimension");
            let g = facts.choose(rng).unwrap();
            GroupExpr::lattice(g.name, dim as u8, rng.gen_bool(0.5))
        }
        6 => GroupExpr::ProperActionOn {
            space_bound: random_bound(rng, 0),
            label: ["space", "tree \"T\"", "cover\tX"].choose(rng).unwrap().to_string(),
        },
        _ => {
            GroupExpr::HyperbolicGroup { witness: rng.gen_bool(0.5).then(|| random_bound(rng, 0)) }
        }
    }
}

/// Draws an expression of nesting depth at most `depth`.
///
/// Relatively hyperbolic nodes get an ambient bound of at least 1 so that an
/// infinite peripheral never meets an ambient bound of 0.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> GroupExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return leaf(rng);
    }
    let sub = |rng: &mut R| random_expr(rng, depth - 1);
    let list = |rng: &mut R| {
        let n = rng.gen_range(1..=3);
        (0..n).map(|_| random_expr(rng, depth - 1)).collect::<Vec<_>>()
    };
    match rng.gen_range(0..7) {
        0 => GroupExpr::Product(list(rng)),
        1 => GroupExpr::FreeProduct(list(rng)),
        2 => GroupExpr::amalgam(sub(rng), sub(rng), sub(rng)),
        3 => GroupExpr::hnn(sub(rng), sub(rng)),
        4 => GroupExpr::extension(sub(rng), sub(rng)),
        5 => GroupExpr::Union(list(rng)),
        _ => GroupExpr::RelHyperbolic {
            peripherals: list(rng),
            ambient: rng.gen_bool(0.5).then(|| random_bound(rng, 1)),
        },
    }
}
