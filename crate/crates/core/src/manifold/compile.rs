use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use super::dsl::{DecompGraph, EdgeType, ManifoldDesc, Pos, Summand};
use crate::catalog;
use crate::engine::{self, f4_group, Consequence, Derivation, EngineError};
use crate::group::{is_infinite, GroupExpr, InfinitenessStatus, SurfaceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Aspherical,
    NotAspherical,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub reason: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    fn new(kind: VerdictKind, reason: impl Into<String>) -> Self {
        Verdict { kind, reason: reason.into(), notes: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("{pos}: `{component}` is outside classified cases: {reason}")]
    OutsideClassifiedCases { pos: Pos, component: String, reason: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compiled {
    pub expr: GroupExpr,
    pub verdict: Verdict,
}

/// Everything the front end reports about one description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub compiled: Compiled,
    pub derivation: Derivation,
    pub consequences: Vec<Consequence>,
}

const CASE4: [&str; 4] = ["H4", "H3xE", "H2xE2", "SL2~xE"];
const CASE5: [&str; 2] = ["H2C", "F4"];
const BRANCHED_COVER: &str = "universal cover of the branched double cover";

const HILLMAN: &str = "Hillman, Four-manifolds, geometries and knots, Thm 7.2";

fn outside(g: &DecompGraph, reason: impl Into<String>) -> CompileError {
    CompileError::OutsideClassifiedCases {
        pos: g.pos,
        component: g.name.clone(),
        reason: reason.into(),
    }
}

fn edge_group(kind: EdgeType) -> GroupExpr {
    match kind {
        EdgeType::Flat3 => GroupExpr::lattice("E3", 3, true),
        EdgeType::Nil3 => GroupExpr::lattice("Nil3", 3, true),
        EdgeType::Torus2 => GroupExpr::FreeAbelian(2),
        EdgeType::Klein2 => GroupExpr::SurfaceGroup(SurfaceKind::Flat),
        EdgeType::Surface2 => GroupExpr::SurfaceGroup(SurfaceKind::Hyperbolic),
    }
}

fn piece_group(geometry: &str, dim: u32, cocompact: bool) -> GroupExpr {
    if geometry == "F4" {
        f4_group()
    } else {
        GroupExpr::lattice(geometry, dim as u8, cocompact)
    }
}

/// Seifert-van Kampen over a breadth-first spanning tree rooted at the first
/// vertex: tree edges in discovery order become amalgams, the remaining
/// edges in declaration order become HNN extensions.
fn graph_of_groups(g: &DecompGraph, dim: u32) -> GroupExpr {
    let vertex = |i: usize| piece_group(&g.vertices[i].geometry, dim, false);
    let ends: Vec<(usize, usize)> = g
        .edges
        .iter()
        .map(|e| (g.vertex_index(&e.from).unwrap(), g.vertex_index(&e.to).unwrap()))
        .collect();
    let mut seen = vec![false; g.vertices.len()];
    let mut in_tree = vec![false; g.edges.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut acc = vertex(0);
    while let Some(u) = queue.pop_front() {
        for (k, &(a, b)) in ends.iter().enumerate() {
            let other = match (a == u, b == u) {
                (true, _) => b,
                (_, true) => a,
                _ => continue,
            };
            if !seen[other] {
                seen[other] = true;
                in_tree[k] = true;
                queue.push_back(other);
                acc = GroupExpr::amalgam(acc, vertex(other), edge_group(g.edges[k].kind));
            }
        }
    }
    for (k, e) in g.edges.iter().enumerate() {
        if !in_tree[k] {
            acc = GroupExpr::hnn(acc, edge_group(e.kind));
        }
    }
    acc
}

fn union_of_pieces(g: &DecompGraph, dim: u32) -> GroupExpr {
    GroupExpr::Union(g.vertices.iter().map(|v| piece_group(&v.geometry, dim, false)).collect())
}

fn compile_graph4(g: &DecompGraph) -> Result<Compiled, CompileError> {
    let geoms: Vec<&str> = g.vertices.iter().map(|v| v.geometry.as_str()).collect();
    let all = |set: &[&str]| geoms.iter().all(|x| set.contains(x));
    if all(&["S2xH2"]) {
        return Ok(Compiled {
            expr: union_of_pieces(g, 4),
            verdict: Verdict::new(
                VerdictKind::NotAspherical,
                format!("{HILLMAN} case (2): S2-orbifold bundles over hyperbolic 2-orbifolds are never aspherical"),
            ),
        });
    }
    if all(&["H2xH2"]) {
        let expr = if g.pi1_injective { graph_of_groups(g, 4) } else { union_of_pieces(g, 4) };
        let shape = if g.pi1_injective { "irreducible" } else { "reducible" };
        return Ok(Compiled {
            expr,
            verdict: Verdict::new(
                VerdictKind::Undetermined,
                format!(
                    "{HILLMAN} case (3), {shape} H2xH2 pieces: asphericity depends on the gluing"
                ),
            ),
        });
    }
    let case = if all(&CASE4) {
        "(4)"
    } else if all(&CASE5) {
        "(5)"
    } else {
        return Err(outside(
            g,
            format!(
                "pieces [{}] do not all lie in one of {{S2xH2}}, {{H2xH2}}, {{{}}}, {{{}}}",
                geoms.join(", "),
                CASE4.join(", "),
                CASE5.join(", ")
            ),
        ));
    };
    if !g.pi1_injective {
        return Err(outside(g, format!("case {case} decompositions have pi1-injective cusps")));
    }
    Ok(Compiled {
        expr: graph_of_groups(g, 4),
        verdict: Verdict::new(
            VerdictKind::Aspherical,
            format!("{HILLMAN} case {case}: the decomposition yields an aspherical manifold"),
        ),
    })
}

fn compile_graph3(g: &DecompGraph) -> Result<Compiled, CompileError> {
    if !g.pi1_injective {
        return Err(outside(
            g,
            "3-dimensional decompositions must be along incompressible surfaces",
        ));
    }
    let aspherical = g.vertices.iter().all(|v| {
        catalog::lookup_geometry(&v.geometry, 3).map(|f| f.aspherical_model).unwrap_or(false)
    });
    let mut verdict = if aspherical {
        Verdict::new(
            VerdictKind::Aspherical,
            "aspherical pieces glued along incompressible surfaces give an aspherical manifold (Whitehead; Papakyriakopoulos)",
        )
    } else {
        Verdict::new(VerdictKind::Undetermined, "some piece has a non-aspherical model geometry")
    };
    if g.edges.iter().any(|e| e.kind == EdgeType::Klein2) {
        verdict.notes.push(
            "Klein-bottle edges: non-orientable; the orientation double cover has the same asymptotic dimension".into(),
        );
    }
    Ok(Compiled { expr: graph_of_groups(g, 3), verdict })
}

fn compile_summand(s: &Summand, dim: u32) -> Result<Compiled, CompileError> {
    match s {
        Summand::Piece { geometry, .. } => {
            let fact = catalog::lookup_geometry(geometry, dim).map_err(EngineError::from)?;
            let verdict = if fact.aspherical_model {
                Verdict::new(
                    VerdictKind::Aspherical,
                    format!("closed {geometry} manifolds are aspherical"),
                )
            } else {
                Verdict::new(
                    VerdictKind::NotAspherical,
                    format!(
                        "{geometry} is not among the geometries with aspherical closed quotients"
                    ),
                )
            };
            Ok(Compiled { expr: piece_group(geometry, dim, true), verdict })
        }
        Summand::Handle { .. } => Ok(Compiled {
            expr: GroupExpr::FreeAbelian(1),
            verdict: Verdict::new(VerdictKind::NotAspherical, "S3xS1 has universal cover S3xR"),
        }),
        Summand::Graph(g) if dim == 4 => compile_graph4(g),
        Summand::Graph(g) => compile_graph3(g),
    }
}

fn is_compact_piece(s: &Summand, dim: u32) -> bool {
    match s {
        Summand::Piece { geometry, .. } => {
            catalog::lookup_geometry(geometry, dim).map(|f| f.compact_model).unwrap_or(false)
        }
        _ => false,
    }
}

fn compile_smooth(desc: &ManifoldDesc) -> Result<Compiled, CompileError> {
    let parts = desc
        .summands
        .iter()
        .map(|s| compile_summand(s, desc.dim))
        .collect::<Result<Vec<_>, _>>()?;
    if parts.len() == 1 {
        return Ok(parts.into_iter().next().unwrap());
    }
    let infinite =
        parts.iter().filter(|p| is_infinite(&p.expr) == InfinitenessStatus::Infinite).count();
    let verdict = if desc.summands.iter().any(|s| is_compact_piece(s, desc.dim)) {
        Verdict::new(
            VerdictKind::NotAspherical,
            "a connected sum with a summand of compact universal cover is not aspherical",
        )
    } else if infinite >= 2 {
        Verdict::new(
            VerdictKind::NotAspherical,
            "a connected sum of two summands with infinite fundamental group has a non-trivial pi2",
        )
    } else {
        Verdict::new(VerdictKind::Undetermined, "connected sum not covered by the classified cases")
    };
    let notes = parts.iter().flat_map(|p| p.verdict.notes.clone()).collect();
    let expr = GroupExpr::FreeProduct(parts.into_iter().map(|p| p.expr).collect());
    Ok(Compiled { expr, verdict: Verdict { notes, ..verdict } })
}

fn aspherical_dim(c: &Compiled, dim: u32) -> Option<u32> {
    (c.verdict.kind == VerdictKind::Aspherical).then_some(dim)
}

/// Compiles a description to its fundamental group and asphericity verdict.
pub fn compile(desc: &ManifoldDesc) -> Result<Compiled, CompileError> {
    let smooth = compile_smooth(desc)?;
    if !desc.alexandrov {
        return Ok(smooth);
    }
    let space = engine::bound(&smooth.expr, aspherical_dim(&smooth, desc.dim))?;
    let expr = GroupExpr::ProperActionOn { space_bound: space.bound, label: BRANCHED_COVER.into() };
    let mut verdict = match (smooth.verdict.kind, desc.singular) {
        (VerdictKind::Aspherical, Some(false)) => Verdict::new(
            VerdictKind::Aspherical,
            "free involution on an aspherical manifold: the quotient is aspherical",
        ),
        (VerdictKind::NotAspherical, _) => {
            Verdict::new(VerdictKind::NotAspherical, "the smooth double cover is not aspherical")
        }
        _ => Verdict::new(
            VerdictKind::Undetermined,
            "Alexandrov space with possibly non-empty singular set",
        ),
    };
    verdict.notes = smooth.verdict.notes;
    verdict.notes.push(format!("smooth double cover: {} with bound {}", smooth.expr, space.bound));
    Ok(Compiled { expr, verdict })
}

/// Compiles and bounds a description.
pub fn analyze(desc: &ManifoldDesc) -> Result<Analysis, CompileError> {
    let compiled = compile(desc)?;
    let asph = aspherical_dim(&compiled, desc.dim);
    let derivation = engine::bound(&compiled.expr, asph)?;
    let consequences = engine::consequences(&derivation.bound, asph.is_some());
    Ok(Analysis { compiled, derivation, consequences })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{DimBound, ExtendedDim::Number};
    use crate::manifold::{connected_sum_with_handles, parse_manifold};
    use crate::rules::RuleId;

    fn run(src: &str) -> Analysis {
        analyze(&parse_manifold(src).unwrap()).unwrap()
    }

    #[test]
    fn two_h4_vertices_over_flat_edge() {
        let a = run("dim 4; graph g { v a H4; v b H4; e a b flat3; pi1_injective true; }");
        assert_eq!(
            a.compiled.expr,
            GroupExpr::amalgam(
                GroupExpr::lattice("H4", 4, false),
                GroupExpr::lattice("H4", 4, false),
                GroupExpr::lattice("E3", 3, true)
            )
        );
        assert_eq!(a.compiled.verdict.kind, VerdictKind::Aspherical);
        assert_eq!(a.derivation.bound, DimBound::exact(4));
    }

    #[test]
    fn s2xs2_piece() {
        let a = run("dim 4; piece m S2xS2;");
        assert_eq!(a.derivation.bound, DimBound::exact(0));
        assert_eq!(a.compiled.verdict.kind, VerdictKind::NotAspherical);
    }

    #[test]
    fn three_dim_torus_edge() {
        let a = run("dim 3; graph g { v a H3; v b H3; e a b torus2; pi1_injective true; }");
        let step = a.derivation.trace.steps.iter().find(|s| s.rule == RuleId::Amalgam).unwrap();
        assert_eq!(step.bound.upper(), Number(3));
        assert_eq!(a.derivation.bound, DimBound::exact(3));
    }

    #[test]
    fn loops_become_hnn() {
        let a = run("dim 3; graph g { v a H3; e a a torus2; pi1_injective true; }");
        assert!(matches!(a.compiled.expr, GroupExpr::Hnn { .. }));
        assert_eq!(a.derivation.bound, DimBound::exact(3));
    }

    #[test]
    fn mixed_cases_are_rejected() {
        let d =
            parse_manifold("dim 4; graph g { v a H4; v b H2C; e a b flat3; pi1_injective true; }")
                .unwrap();
        assert!(matches!(compile(&d), Err(CompileError::OutsideClassifiedCases { .. })));
        let d =
            parse_manifold("dim 4; graph g { v a H4; v b H4; e a b flat3; pi1_injective false; }")
                .unwrap();
        assert!(matches!(compile(&d), Err(CompileError::OutsideClassifiedCases { .. })));
    }

    #[test]
    fn handles_keep_upper() {
        let e4 = parse_manifold("dim 4; piece m E4;").unwrap();
        let a = analyze(&connected_sum_with_handles(&e4, 3)).unwrap();
        assert_eq!(a.derivation.bound.upper(), Number(4));
        let s4 = parse_manifold("dim 4; piece m S4;").unwrap();
        let a = analyze(&connected_sum_with_handles(&s4, 1)).unwrap();
        assert_eq!(a.derivation.bound.upper(), Number(1));
    }

    #[test]
    fn alexandrov_wraps_in_proper_action() {
        let a = run("dim 3; piece m H3; alexandrov true singular false;");
        assert_eq!(a.derivation.bound, DimBound::exact(3));
        let a = run("dim 3; piece m H3; alexandrov true;");
        assert_eq!(a.compiled.verdict.kind, VerdictKind::Undetermined);
        assert_eq!(a.derivation.bound.upper(), Number(3));
        assert!(a.derivation.trace.steps.iter().any(|s| s.rule == RuleId::ProperAction));
    }
}
