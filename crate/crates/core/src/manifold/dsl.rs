use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::catalog::{self, CatalogError};

/// Source position, 1-based. Ignored by equality so that a rendered and
/// reparsed description compares equal to the original.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeType {
    Flat3,
    Nil3,
    Torus2,
    Klein2,
    Surface2,
}

impl EdgeType {
    pub const ALL: [EdgeType; 5] =
        [EdgeType::Flat3, EdgeType::Nil3, EdgeType::Torus2, EdgeType::Klein2, EdgeType::Surface2];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeType::Flat3 => "flat3",
            EdgeType::Nil3 => "nil3",
            EdgeType::Torus2 => "torus2",
            EdgeType::Klein2 => "klein2",
            EdgeType::Surface2 => "surface2",
        }
    }

    /// Dimension of manifold whose decompositions use this edge type.
    pub fn ambient_dim(self) -> u32 {
        match self {
            EdgeType::Flat3 | EdgeType::Nil3 => 4,
            _ => 3,
        }
    }

    fn parse(s: &str) -> Option<EdgeType> {
        Self::ALL.into_iter().find(|e| e.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub geometry: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub kind: EdgeType,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompGraph {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub pi1_injective: bool,
    pub pos: Pos,
}

impl DecompGraph {
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Summand {
    Piece {
        name: String,
        geometry: String,
        pos: Pos,
    },
    Graph(DecompGraph),
    /// An S3xS1 summand; contributes a free Z factor.
    Handle {
        name: String,
        pos: Pos,
    },
}

impl Summand {
    pub fn name(&self) -> &str {
        match self {
            Summand::Piece { name, .. } | Summand::Handle { name, .. } => name,
            Summand::Graph(g) => &g.name,
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            Summand::Piece { pos, .. } | Summand::Handle { pos, .. } => *pos,
            Summand::Graph(g) => g.pos,
        }
    }
}

/// A closed manifold given as a connected sum of geometric pieces and
/// decomposition graphs, optionally the smooth cover of an Alexandrov space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldDesc {
    pub dim: u32,
    /// In connected-sum order.
    pub summands: Vec<Summand>,
    pub alexandrov: bool,
    /// Whether the involution has fixed points; `None` when not stated.
    pub singular: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("{0}")]
    UnknownGeometry(CatalogError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("undeclared vertex `{0}`")]
    UndeclaredVertex(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("{0}")]
    Structure(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {kind}")]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

// ---------------------------------------------------------------------------
// lexing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Semi,
    Open,
    Close,
    Hash,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Open => f.write_str("`{`"),
            Tok::Close => f.write_str("`}`"),
            Tok::Hash => f.write_str("`#`"),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '~'
}

fn lex(src: &str) -> Result<(Vec<(Pos, Tok)>, Pos), ParseError> {
    let mut toks = Vec::new();
    let mut last = Pos { line: 1, col: 1 };
    for (i, line) in src.lines().enumerate() {
        let line = line.split("--").next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let pos = Pos { line: i + 1, col: j + 1 };
            let c = chars[j];
            let tok = match c {
                c if c.is_whitespace() => {
                    j += 1;
                    continue;
                }
                ';' => Tok::Semi,
                '{' => Tok::Open,
                '}' => Tok::Close,
                '#' => Tok::Hash,
                c if is_word_char(c) => {
                    let start = j;
                    while j < chars.len() && is_word_char(chars[j]) {
                        j += 1;
                    }
                    toks.push((pos, Tok::Word(chars[start..j].iter().collect())));
                    continue;
                }
                other => {
                    return Err(ParseError {
                        pos,
                        kind: ParseErrorKind::Syntax(format!("unexpected character `{other}`")),
                    })
                }
            };
            toks.push((pos, tok));
            j += 1;
        }
        last = Pos { line: i + 1, col: chars.len() + 1 };
    }
    Ok((toks, last))
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<(Pos, Tok)>,
    at: usize,
    eof: Pos,
}

type PResult<T> = Result<T, ParseError>;

fn fail<T>(pos: Pos, kind: ParseErrorKind) -> PResult<T> {
    Err(ParseError { pos, kind })
}

impl Parser {
    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.eof, |t| t.0)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> PResult<T> {
        fail(self.pos(), ParseErrorKind::Syntax(msg.into()))
    }

    fn found(&self) -> String {
        self.toks.get(self.at).map_or("end of input".into(), |t| t.1.to_string())
    }

    fn peek_word(&self) -> Option<&str> {
        match self.toks.get(self.at) {
            Some((_, Tok::Word(w))) => Some(w),
            _ => None,
        }
    }

    fn punct(&mut self, want: Tok) -> PResult<()> {
        if self.toks.get(self.at).map(|t| &t.1) == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            self.syntax(format!("expected {want}, found {}", self.found()))
        }
    }

    fn word(&mut self, what: &str) -> PResult<(Pos, String)> {
        match self.toks.get(self.at) {
            Some((p, Tok::Word(w))) => {
                let out = (*p, w.clone());
                self.at += 1;
                Ok(out)
            }
            _ => self.syntax(format!("expected {what}, found {}", self.found())),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Pos> {
        let pos = self.pos();
        if self.peek_word() == Some(kw) {
            self.at += 1;
            Ok(pos)
        } else {
            self.syntax(format!("expected `{kw}`, found {}", self.found()))
        }
    }

    fn boolean(&mut self) -> PResult<bool> {
        let pos = self.pos();
        match self.word("`true` or `false`")?.1.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            other => fail(
                pos,
                ParseErrorKind::Syntax(format!("expected `true` or `false`, found `{other}`")),
            ),
        }
    }

    fn geometry(&mut self, dim: u32) -> PResult<String> {
        let (pos, name) = self.word("a geometry name")?;
        match catalog::lookup_geometry(&name, dim) {
            Ok(_) => Ok(name),
            Err(e) => match catalog::find_any(&name) {
                Some(g) => fail(
                    pos,
                    ParseErrorKind::DimensionMismatch(format!(
                        "geometry `{name}` has dimension {}, declared dimension is {dim}",
                        g.dim
                    )),
                ),
                None => fail(pos, ParseErrorKind::UnknownGeometry(e)),
            },
        }
    }

    fn graph(&mut self, dim: u32, pos: Pos, name: String) -> PResult<DecompGraph> {
        self.punct(Tok::Open)?;
        let mut vertices: Vec<Vertex> = Vec::new();
        while self.peek_word() == Some("v") {
            self.at += 1;
            let (vpos, vname) = self.word("a vertex name")?;
            if vertices.iter().any(|v| v.name == vname) {
                return fail(vpos, ParseErrorKind::Duplicate(vname));
            }
            let geometry = self.geometry(dim)?;
            self.punct(Tok::Semi)?;
            vertices.push(Vertex { name: vname, geometry, pos: vpos });
        }
        if vertices.is_empty() {
            return self.syntax("a graph needs at least one vertex `v NAME GEO;`");
        }
        let mut edges = Vec::new();
        while self.peek_word() == Some("e") {
            let epos = self.keyword("e")?;
            let mut ends = Vec::new();
            for _ in 0..2 {
                let (_, v) = self.word("a vertex name")?;
                if !vertices.iter().any(|x| x.name == v) {
                    return fail(epos, ParseErrorKind::UndeclaredVertex(v));
                }
                ends.push(v);
            }
            let (kpos, kind) = self.word("an edge type")?;
            let Some(kind) = EdgeType::parse(&kind) else {
                let valid: Vec<_> = EdgeType::ALL.iter().map(|e| e.as_str()).collect();
                return fail(
                    kpos,
                    ParseErrorKind::Syntax(format!(
                        "unknown edge type `{kind}` (expected one of {})",
                        valid.join(", ")
                    )),
                );
            };
            if kind.ambient_dim() != dim {
                return fail(
                    kpos,
                    ParseErrorKind::DimensionMismatch(format!(
                        "edge type `{}` belongs to dimension {}, declared dimension is {dim}",
                        kind.as_str(),
                        kind.ambient_dim()
                    )),
                );
            }
            self.punct(Tok::Semi)?;
            let to = ends.pop().unwrap();
            let from = ends.pop().unwrap();
            edges.push(Edge { from, to, kind, pos: epos });
        }
        if self.peek_word() == Some("v") {
            return self.syntax("vertex declarations must precede edges");
        }
        self.keyword("pi1_injective")?;
        let pi1_injective = self.boolean()?;
        self.punct(Tok::Semi)?;
        self.punct(Tok::Close)?;
        let g = DecompGraph { name, vertices, edges, pi1_injective, pos };
        if !connected(&g) {
            return fail(
                pos,
                ParseErrorKind::Structure(format!("graph `{}` is not connected", g.name)),
            );
        }
        Ok(g)
    }

    fn program(&mut self) -> PResult<ManifoldDesc> {
        self.keyword("dim")?;
        let (dpos, d) = self.word("a dimension")?;
        let dim: u32 = match d.parse() {
            Ok(n @ (3 | 4)) => n,
            _ => {
                return fail(
                    dpos,
                    ParseErrorKind::DimensionMismatch(format!(
                        "dimension must be 3 or 4, got `{d}`"
                    )),
                )
            }
        };
        self.punct(Tok::Semi)?;

        let mut components: Vec<Summand> = Vec::new();
        let mut sum: Option<(Pos, Vec<(Pos, String)>)> = None;
        let mut alexandrov: Option<(Pos, bool, Option<bool>)> = None;
        let mut taken: HashSet<String> = HashSet::new();

        while self.at < self.toks.len() {
            let (kpos, kw) = self.word("a statement")?;
            match kw.as_str() {
                "piece" | "graph" | "handle" => {
                    let (npos, name) = self.word("a name")?;
                    if !taken.insert(name.clone()) {
                        return fail(npos, ParseErrorKind::Duplicate(name));
                    }
                    let s = match kw.as_str() {
                        "piece" => {
                            let geometry = self.geometry(dim)?;
                            self.punct(Tok::Semi)?;
                            Summand::Piece { name, geometry, pos: kpos }
                        }
                        "handle" => {
                            if dim != 4 {
                                return fail(
                                    kpos,
                                    ParseErrorKind::DimensionMismatch(
                                        "handles are 4-dimensional".into(),
                                    ),
                                );
                            }
                            self.punct(Tok::Semi)?;
                            Summand::Handle { name, pos: kpos }
                        }
                        _ => Summand::Graph(self.graph(dim, kpos, name)?),
                    };
                    components.push(s);
                }
                "sum" => {
                    if sum.is_some() {
                        return fail(
                            kpos,
                            ParseErrorKind::Structure("more than one `sum` statement".into()),
                        );
                    }
                    let mut names = vec![self.word("a summand name")?];
                    while self.toks.get(self.at).map(|t| &t.1) == Some(&Tok::Hash) {
                        self.at += 1;
                        names.push(self.word("a summand name")?);
                    }
                    self.punct(Tok::Semi)?;
                    sum = Some((kpos, names));
                }
                "alexandrov" => {
                    if alexandrov.is_some() {
                        return fail(kpos, ParseErrorKind::Duplicate("alexandrov".into()));
                    }
                    if dim != 3 {
                        return fail(
                            kpos,
                            ParseErrorKind::DimensionMismatch(
                                "alexandrov spaces are 3-dimensional".into(),
                            ),
                        );
                    }
                    let flag = self.boolean()?;
                    let singular = if self.peek_word() == Some("singular") {
                        let spos = self.pos();
                        self.at += 1;
                        if !flag {
                            return fail(
                                spos,
                                ParseErrorKind::Structure(
                                    "`singular` needs `alexandrov true`".into(),
                                ),
                            );
                        }
                        Some(self.boolean()?)
                    } else {
                        None
                    };
                    self.punct(Tok::Semi)?;
                    alexandrov = Some((kpos, flag, singular));
                }
                other => {
                    return fail(
                        kpos,
                        ParseErrorKind::Syntax(format!("unknown statement `{other}`")),
                    )
                }
            }
        }

        if components.is_empty() {
            return self.syntax("expected at least one `piece`, `graph` or `handle`");
        }
        let summands = match sum {
            None if components.len() == 1 => components,
            None => {
                return fail(
                    components[1].pos(),
                    ParseErrorKind::Structure(
                        "several components declared but no `sum` statement".into(),
                    ),
                )
            }
            Some((_, names)) => {
                let mut by_name: HashMap<String, Summand> =
                    components.iter().map(|c| (c.name().to_string(), c.clone())).collect();
                let mut ordered = Vec::new();
                for (npos, n) in names {
                    match by_name.remove(&n) {
                        Some(s) => ordered.push(s),
                        None if taken.contains(&n) => {
                            return fail(npos, ParseErrorKind::Duplicate(n))
                        }
                        None => {
                            return fail(
                                npos,
                                ParseErrorKind::Structure(format!(
                                    "`{n}` is not a declared component"
                                )),
                            )
                        }
                    }
                }
                if let Some(left) = components.iter().find(|c| by_name.contains_key(c.name())) {
                    return fail(
                        left.pos(),
                        ParseErrorKind::Structure(format!(
                            "`{}` is missing from the sum",
                            left.name()
                        )),
                    );
                }
                ordered
            }
        };
        let (alexandrov, singular) = alexandrov.map_or((false, None), |(_, a, s)| (a, s));
        Ok(ManifoldDesc { dim, summands, alexandrov, singular })
    }
}

fn connected(g: &DecompGraph) -> bool {
    let mut seen = vec![false; g.vertices.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for e in &g.edges {
            let (a, b) = (g.vertex_index(&e.from).unwrap(), g.vertex_index(&e.to).unwrap());
            for (x, y) in [(a, b), (b, a)] {
                if x == u && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn parse_manifold(src: &str) -> Result<ManifoldDesc, ParseError> {
    let (toks, eof) = lex(src)?;
    Parser { toks, at: 0, eof }.program()
}

/// Canonical source text for a description.
pub fn render(desc: &ManifoldDesc) -> String {
    let mut out = format!("dim {};\n", desc.dim);
    for s in &desc.summands {
        match s {
            Summand::Piece { name, geometry, .. } => out += &format!("piece {name} {geometry};\n"),
            Summand::Handle { name, .. } => out += &format!("handle {name};\n"),
            Summand::Graph(g) => {
                out += &format!("graph {} {{\n", g.name);
                for v in &g.vertices {
                    out += &format!("  v {} {};\n", v.name, v.geometry);
                }
                for e in &g.edges {
                    out += &format!("  e {} {} {};\n", e.from, e.to, e.kind.as_str());
                }
                out += &format!("  pi1_injective {};\n}}\n", g.pi1_injective);
            }
        }
    }
    if desc.summands.len() > 1 {
        let names: Vec<_> = desc.summands.iter().map(Summand::name).collect();
        out += &format!("sum {};\n", names.join(" # "));
    }
    if desc.alexandrov {
        match desc.singular {
            Some(s) => out += &format!("alexandrov true singular {s};\n"),
            None => out += "alexandrov true;\n",
        }
    }
    out
}

/// `desc # k(S3 x S1)`.
pub fn connected_sum_with_handles(desc: &ManifoldDesc, k: usize) -> ManifoldDesc {
    let mut out = desc.clone();
    let mut next = 1;
    for _ in 0..k {
        let name = loop {
            let candidate = format!("handle{next}");
            next += 1;
            if !out.summands.iter().any(|s| s.name() == candidate) {
                break candidate;
            }
        };
        out.summands.push(Summand::Handle { name, pos: Pos::default() });
    }
    out
}
