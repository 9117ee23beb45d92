//! Structural descriptions of finitely generated groups.
//!
//! A [`GroupExpr`] says how a group is assembled (lattices, amalgams,
//! extensions, ...), never what its elements are. The canonical text form is
//! a prefix notation using the variant names, e.g.
//! `(Amalgam (Lattice H4 4 false) (Lattice H4 4 false) (Lattice E3 3 true))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bound::DimBound;
use crate::catalog;

pub mod sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKind {
    Spherical,
    Flat,
    Hyperbolic,
}

impl SurfaceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SurfaceKind::Spherical => "spherical",
            SurfaceKind::Flat => "flat",
            SurfaceKind::Hyperbolic => "hyperbolic",
        }
    }

    /// Integer code used as a rule parameter in traces.
    pub fn code(self) -> u32 {
        match self {
            SurfaceKind::Spherical => 0,
            SurfaceKind::Flat => 1,
            SurfaceKind::Hyperbolic => 2,
        }
    }

    pub fn from_code(code: u32) -> Option<Self> {
        match code {
            0 => Some(SurfaceKind::Spherical),
            1 => Some(SurfaceKind::Flat),
            2 => Some(SurfaceKind::Hyperbolic),
            _ => None,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [SurfaceKind::Spherical, SurfaceKind::Flat, SurfaceKind::Hyperbolic]
            .into_iter()
            .find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    Trivial,
    Finite(Option<u64>),
    FreeAbelian(u32),
    SurfaceGroup(SurfaceKind),
    Lattice {
        geometry: String,
        dim: u8,
        cocompact: bool,
    },
    Product(Vec<GroupExpr>),
    FreeProduct(Vec<GroupExpr>),
    Amalgam {
        left: Box<GroupExpr>,
        right: Box<GroupExpr>,
        edge: Box<GroupExpr>,
    },
    Hnn {
        base: Box<GroupExpr>,
        edge: Box<GroupExpr>,
    },
    /// `1 -> kernel -> G -> quotient -> 1`.
    Extension {
        kernel: Box<GroupExpr>,
        quotient: Box<GroupExpr>,
    },
    /// Finite union of subspaces, for decompositions that are not pi1-injective.
    Union(Vec<GroupExpr>),
    /// A group acting properly and isometrically on a proper metric space.
    ProperActionOn {
        space_bound: DimBound,
        label: String,
    },
    HyperbolicGroup {
        witness: Option<DimBound>,
    },
    RelHyperbolic {
        peripherals: Vec<GroupExpr>,
        ambient: Option<DimBound>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InfinitenessStatus {
    Finite,
    Infinite,
    Undetermined,
}

impl GroupExpr {
    pub fn lattice(geometry: &str, dim: u8, cocompact: bool) -> Self {
        GroupExpr::Lattice { geometry: geometry.to_string(), dim, cocompact }
    }

    pub fn amalgam(left: GroupExpr, right: GroupExpr, edge: GroupExpr) -> Self {
        GroupExpr::Amalgam { left: Box::new(left), right: Box::new(right), edge: Box::new(edge) }
    }

    pub fn hnn(base: GroupExpr, edge: GroupExpr) -> Self {
        GroupExpr::Hnn { base: Box::new(base), edge: Box::new(edge) }
    }

    pub fn extension(kernel: GroupExpr, quotient: GroupExpr) -> Self {
        GroupExpr::Extension { kernel: Box::new(kernel), quotient: Box::new(quotient) }
    }

    /// Variant name, as used at the head of the canonical form.
    pub fn head(&self) -> &'static str {
        match self {
            GroupExpr::Trivial => "Trivial",
            GroupExpr::Finite(_) => "Finite",
            GroupExpr::FreeAbelian(_) => "FreeAbelian",
            GroupExpr::SurfaceGroup(_) => "SurfaceGroup",
            GroupExpr::Lattice { .. } => "Lattice",
            GroupExpr::Product(_) => "Product",
            GroupExpr::FreeProduct(_) => "FreeProduct",
            GroupExpr::Amalgam { .. } => "Amalgam",
            GroupExpr::Hnn { .. } => "HNN",
            GroupExpr::Extension { .. } => "Extension",
            GroupExpr::Union(_) => "Union",
            GroupExpr::ProperActionOn { .. } => "ProperActionOn",
            GroupExpr::HyperbolicGroup { .. } => "HyperbolicGroup",
            GroupExpr::RelHyperbolic { .. } => "RelHyperbolic",
        }
    }

    /// Direct sub-expressions, in canonical order.
    pub fn children(&self) -> Vec<&GroupExpr> {
        match self {
            GroupExpr::Product(xs) | GroupExpr::FreeProduct(xs) | GroupExpr::Union(xs) => {
                xs.iter().collect()
            }
            GroupExpr::RelHyperbolic { peripherals, .. } => peripherals.iter().collect(),
            GroupExpr::Amalgam { left, right, edge } => vec![left, right, edge],
            GroupExpr::Hnn { base, edge } => vec![base, edge],
            GroupExpr::Extension { kernel, quotient } => vec![kernel, quotient],
            _ => Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(GroupExpr::size).sum::<usize>()
    }
}

/// Flattens nested products, free products and unions, drops trivial factors
/// and collapses single-factor wrappers. Idempotent.
pub fn normalize(expr: &GroupExpr) -> GroupExpr {
    match expr {
        GroupExpr::FreeAbelian(0) | GroupExpr::Finite(Some(1)) => GroupExpr::Trivial,
        GroupExpr::Product(xs) => collapse(flatten(xs, is_product), GroupExpr::Product),
        GroupExpr::FreeProduct(xs) => {
            collapse(flatten(xs, is_free_product), GroupExpr::FreeProduct)
        }
        GroupExpr::Union(xs) => collapse(flatten(xs, is_union), GroupExpr::Union),
        GroupExpr::Amalgam { left, right, edge } => {
            GroupExpr::amalgam(normalize(left), normalize(right), normalize(edge))
        }
        GroupExpr::Hnn { base, edge } => GroupExpr::hnn(normalize(base), normalize(edge)),
        GroupExpr::Extension { kernel, quotient } => {
            GroupExpr::extension(normalize(kernel), normalize(quotient))
        }
        GroupExpr::RelHyperbolic { peripherals, ambient } => GroupExpr::RelHyperbolic {
            peripherals: peripherals.iter().map(normalize).collect(),
            ambient: *ambient,
        },
        other => other.clone(),
    }
}

fn is_product(e: &GroupExpr) -> Option<&[GroupExpr]> {
    match e {
        GroupExpr::Product(xs) => Some(xs),
        _ => None,
    }
}

fn is_free_product(e: &GroupExpr) -> Option<&[GroupExpr]> {
    match e {
        GroupExpr::FreeProduct(xs) => Some(xs),
        _ => None,
    }
}

fn is_union(e: &GroupExpr) -> Option<&[GroupExpr]> {
    match e {
        GroupExpr::Union(xs) => Some(xs),
        _ => None,
    }
}

fn flatten(xs: &[GroupExpr], same: fn(&GroupExpr) -> Option<&[GroupExpr]>) -> Vec<GroupExpr> {
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        let x = normalize(x);
        match same(&x) {
            Some(inner) => out.extend(inner.iter().cloned()),
            None if x == GroupExpr::Trivial => {}
            None => out.push(x),
        }
    }
    out
}

fn collapse(mut parts: Vec<GroupExpr>, wrap: fn(Vec<GroupExpr>) -> GroupExpr) -> GroupExpr {
    match parts.len() {
        0 => GroupExpr::Trivial,
        1 => parts.pop().unwrap(),
        _ => wrap(parts),
    }
}

/// Conservative three-valued finiteness test, by structural recursion.
pub fn is_infinite(expr: &GroupExpr) -> InfinitenessStatus {
    use InfinitenessStatus::*;
    match expr {
        GroupExpr::Trivial | GroupExpr::Finite(_) => Finite,
        GroupExpr::FreeAbelian(0) => Finite,
        GroupExpr::FreeAbelian(_) => Infinite,
        GroupExpr::SurfaceGroup(SurfaceKind::Spherical) => Finite,
        GroupExpr::SurfaceGroup(_) => Infinite,
        GroupExpr::Lattice { geometry, dim, .. } => {
            match catalog::lookup_geometry(geometry, *dim as u32) {
                Ok(g) if g.compact_model => Finite,
                Ok(_) => Infinite,
                Err(_) => Undetermined,
            }
        }
        // finite products, finite-by-finite and finite unions of finite sets stay finite
        GroupExpr::Product(xs) | GroupExpr::Union(xs) => all_or_any(xs.iter()),
        GroupExpr::Extension { kernel, quotient } => all_or_any([&**kernel, &**quotient]),
        GroupExpr::FreeProduct(xs) => any_infinite(xs.iter()),
        GroupExpr::Amalgam { left, right, edge } => any_infinite([&**left, &**right, &**edge]),
        GroupExpr::Hnn { base, edge } => any_infinite([&**base, &**edge]),
        GroupExpr::RelHyperbolic { peripherals, .. } => any_infinite(peripherals.iter()),
        GroupExpr::ProperActionOn { .. } | GroupExpr::HyperbolicGroup { .. } => Undetermined,
    }
}

fn any_infinite<'a>(parts: impl IntoIterator<Item = &'a GroupExpr>) -> InfinitenessStatus {
    if parts.into_iter().any(|p| is_infinite(p) == InfinitenessStatus::Infinite) {
        InfinitenessStatus::Infinite
    } else {
        InfinitenessStatus::Undetermined
    }
}

fn all_or_any<'a>(parts: impl IntoIterator<Item = &'a GroupExpr>) -> InfinitenessStatus {
    let statuses: Vec<_> = parts.into_iter().map(is_infinite).collect();
    if statuses.contains(&InfinitenessStatus::Infinite) {
        InfinitenessStatus::Infinite
    } else if statuses.iter().all(|s| *s == InfinitenessStatus::Finite) {
        InfinitenessStatus::Finite
    } else {
        InfinitenessStatus::Undetermined
    }
}

// ---------------------------------------------------------------------------
// canonical serialization
// ---------------------------------------------------------------------------

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, head: &str, xs: &[GroupExpr]) -> fmt::Result {
            write!(f, "({head}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            f.write_str(")")
        }
        fn opt(b: &Option<DimBound>) -> String {
            b.map_or_else(|| "?".to_string(), |b| b.to_string())
        }
        match self {
            GroupExpr::Trivial => f.write_str("Trivial"),
            GroupExpr::Finite(None) => f.write_str("(Finite ?)"),
            GroupExpr::Finite(Some(n)) => write!(f, "(Finite {n})"),
            GroupExpr::FreeAbelian(n) => write!(f, "(FreeAbelian {n})"),
            GroupExpr::SurfaceGroup(k) => write!(f, "(SurfaceGroup {})", k.as_str()),
            GroupExpr::Lattice { geometry, dim, cocompact } => {
                write!(f, "(Lattice {geometry} {dim} {cocompact})")
            }
            GroupExpr::Product(xs) => list(f, "Product", xs),
            GroupExpr::FreeProduct(xs) => list(f, "FreeProduct", xs),
            GroupExpr::Union(xs) => list(f, "Union", xs),
            GroupExpr::Amalgam { left, right, edge } => {
                write!(f, "(Amalgam {left} {right} {edge})")
            }
            GroupExpr::Hnn { base, edge } => write!(f, "(HNN {base} {edge})"),
            GroupExpr::Extension { kernel, quotient } => {
                write!(f, "(Extension {kernel} {quotient})")
            }
            GroupExpr::ProperActionOn { space_bound, label } => {
                write!(f, "(ProperActionOn {space_bound} {})", quote(label))
            }
            GroupExpr::HyperbolicGroup { witness } => {
                write!(f, "(HyperbolicGroup {})", opt(witness))
            }
            GroupExpr::RelHyperbolic { peripherals, ambient } => {
                f.write_str("(RelHyperbolic [")?;
                for (i, p) in peripherals.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "] {})", opt(ambient))
            }
        }
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse group expression at byte {offset}: {message}")]
pub struct ExprParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    LBracket,
    RBracket,
    Atom(String),
    Str(String),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ExprParseError> {
    let mut toks = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | '[' | ']' => {
                chars.next();
                let t = match c {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    '[' => Tok::LBracket,
                    _ => Tok::RBracket,
                };
                toks.push((i, t));
            }
            '"' => {
                chars.next();
                let mut buf = String::new();
                loop {
                    match chars.next() {
                        Some((_, '"')) => break,
                        Some((_, '\\')) => match chars.next() {
                            Some((_, 'n')) => buf.push('\n'),
                            Some((_, 't')) => buf.push('\t'),
                            Some((_, c @ ('"' | '\\'))) => buf.push(c),
                            _ => {
                                return Err(ExprParseError {
                                    offset: i,
                                    message: "bad escape in string".into(),
                                })
                            }
                        },
                        Some((_, c)) => buf.push(c),
                        None => {
                            return Err(ExprParseError {
                                offset: i,
                                message: "unterminated string".into(),
                            })
                        }
                    }
                }
                toks.push((i, Tok::Str(buf)));
            }
            _ => {
                let mut buf = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || "()[]\"".contains(c) {
                        break;
                    }
                    buf.push(c);
                    chars.next();
                }
                toks.push((i, Tok::Atom(buf)));
            }
        }
    }
    Ok(toks)
}

struct ExprParser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl ExprParser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprParseError> {
        let offset = self.toks.get(self.pos).map_or(self.end, |t| t.0);
        Err(ExprParseError { offset, message: message.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn atom(&mut self) -> Result<String, ExprParseError> {
        match self.next() {
            Some(Tok::Atom(a)) => Ok(a),
            _ => {
                self.pos -= 1;
                self.err("expected an atom")
            }
        }
    }

    fn number<T: FromStr>(&mut self) -> Result<T, ExprParseError> {
        let a = self.atom()?;
        a.parse().or_else(|_| {
            self.pos -= 1;
            self.err(format!("expected a number, found `{a}`"))
        })
    }

    fn bound(&mut self) -> Result<DimBound, ExprParseError> {
        let a = self.atom()?;
        a.parse().or_else(|e| {
            self.pos -= 1;
            self.err(format!("{e}"))
        })
    }

    fn opt_bound(&mut self) -> Result<Option<DimBound>, ExprParseError> {
        if self.peek() == Some(&Tok::Atom("?".into())) {
            self.pos += 1;
            return Ok(None);
        }
        self.bound().map(Some)
    }

    fn close(&mut self) -> Result<(), ExprParseError> {
        match self.next() {
            Some(Tok::Close) => Ok(()),
            _ => {
                self.pos -= 1;
                self.err("expected `)`")
            }
        }
    }

    fn exprs_until_close(&mut self) -> Result<Vec<GroupExpr>, ExprParseError> {
        let mut xs = Vec::new();
        while !matches!(self.peek(), Some(Tok::Close) | None) {
            xs.push(self.expr()?);
        }
        if xs.is_empty() {
            return self.err("expected at least one factor");
        }
        self.close()?;
        Ok(xs)
    }

    fn boxed(&mut self) -> Result<Box<GroupExpr>, ExprParseError> {
        self.expr().map(Box::new)
    }

    fn expr(&mut self) -> Result<GroupExpr, ExprParseError> {
        match self.next() {
            Some(Tok::Atom(a)) if a == "Trivial" => Ok(GroupExpr::Trivial),
            Some(Tok::Open) => {
                let head = self.atom()?;
                let e = match head.as_str() {
                    "Finite" => {
                        if self.peek() == Some(&Tok::Atom("?".into())) {
                            self.pos += 1;
                            GroupExpr::Finite(None)
                        } else {
                            let n: u64 = self.number()?;
                            if n == 0 {
                                self.pos -= 1;
                                return self.err("group order must be positive");
                            }
                            GroupExpr::Finite(Some(n))
                        }
                    }
                    "FreeAbelian" => GroupExpr::FreeAbelian(self.number()?),
                    "SurfaceGroup" => {
                        let k = self.atom()?;
                        match SurfaceKind::parse(&k) {
                            Some(k) => GroupExpr::SurfaceGroup(k),
                            None => {
                                self.pos -= 1;
                                return self.err(format!("unknown surface kind `{k}`"));
                            }
                        }
                    }
                    "Lattice" => {
                        let geometry = self.atom()?;
                        let dim = self.number()?;
                        let cocompact = self.number::<bool>()?;
                        GroupExpr::Lattice { geometry, dim, cocompact }
                    }
                    "Product" => return self.exprs_until_close().map(GroupExpr::Product),
                    "FreeProduct" => return self.exprs_until_close().map(GroupExpr::FreeProduct),
                    "Union" => return self.exprs_until_close().map(GroupExpr::Union),
                    "Amalgam" => GroupExpr::Amalgam {
                        left: self.boxed()?,
                        right: self.boxed()?,
                        edge: self.boxed()?,
                    },
                    "HNN" => GroupExpr::Hnn { base: self.boxed()?, edge: self.boxed()? },
                    "Extension" => {
                        GroupExpr::Extension { kernel: self.boxed()?, quotient: self.boxed()? }
                    }
                    "ProperActionOn" => {
                        let space_bound = self.bound()?;
                        let label = match self.next() {
                            Some(Tok::Str(s)) => s,
                            _ => {
                                self.pos -= 1;
                                return self.err("expected a quoted label");
                            }
                        };
                        GroupExpr::ProperActionOn { space_bound, label }
                    }
                    "HyperbolicGroup" => GroupExpr::HyperbolicGroup { witness: self.opt_bound()? },
                    "RelHyperbolic" => {
                        if self.next() != Some(Tok::LBracket) {
                            self.pos -= 1;
                            return self.err("expected `[`");
                        }
                        let mut peripherals = Vec::new();
                        while !matches!(self.peek(), Some(Tok::RBracket) | None) {
                            peripherals.push(self.expr()?);
                        }
                        if self.next() != Some(Tok::RBracket) {
                            self.pos -= 1;
                            return self.err("expected `]`");
                        }
                        if peripherals.is_empty() {
                            return self.err("expected at least one peripheral subgroup");
                        }
                        GroupExpr::RelHyperbolic { peripherals, ambient: self.opt_bound()? }
                    }
                    other => {
                        self.pos -= 1;
                        return self.err(format!("unknown variant `{other}`"));
                    }
                };
                self.close()?;
                Ok(e)
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected a group expression")
            }
        }
    }
}

impl FromStr for GroupExpr {
    type Err = ExprParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = ExprParser { toks: tokenize(s)?, pos: 0, end: s.len() };
        let e = p.expr()?;
        if p.pos < p.toks.len() {
            return p.err("trailing input after expression");
        }
        Ok(e)
    }
}

impl Serialize for GroupExpr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
