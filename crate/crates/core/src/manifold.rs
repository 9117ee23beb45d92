//! Manifold descriptions: a small line-oriented DSL, and its compilation to
//! group expressions with an asphericity verdict.

mod compile;
mod dsl;

pub use compile::{analyze, compile, Analysis, CompileError, Compiled, Verdict, VerdictKind};
pub use dsl::{
    connected_sum_with_handles, parse_manifold, render, DecompGraph, Edge, EdgeType, ManifoldDesc,
    ParseError, ParseErrorKind, Pos, Summand, Vertex,
};
