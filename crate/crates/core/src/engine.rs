//! Bound derivation over [`GroupExpr`] trees, with replayable proof traces.
//!
//! Evaluation is a single structural pass. At each node the engine collects
//! every applicable candidate (the variant's own rule, the finiteness facts,
//! and at the root the aspherical lower bound), keeps the best lower and best
//! upper, and records only the candidates it kept.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::bound::{BoundError, DimBound, ExtendedDim};
use crate::catalog::{self, CatalogError, LatticeRoute, LINE_FACTOR};
use crate::group::{is_infinite, normalize, GroupExpr, InfinitenessStatus, SurfaceKind};
use crate::rules::{self, RuleError, RuleId, MODEL_HEAD};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(
        "inconsistent bound for {subject}: derived lower {lower} exceeds derived upper {upper}"
    )]
    Inconsistent { subject: String, lower: u32, upper: u32 },
    #[error("malformed trace at step {step}: {reason}")]
    MalformedTrace { step: usize, reason: String },
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// An input of a trace step: an earlier step, or a bound taken as given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Premise {
    Step(usize),
    Given(DimBound),
}

impl fmt::Display for Premise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Premise::Step(i) => write!(f, "#{i}"),
            Premise::Given(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for Premise {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub index: usize,
    pub rule: RuleId,
    /// Canonical form of the group (or `(Model NAME)` for a model space).
    pub subject: String,
    pub inputs: Vec<Premise>,
    pub params: Vec<u32>,
    pub bound: DimBound,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ProofTrace {
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub bound: DimBound,
    pub trace: ProofTrace,
}

// ---------------------------------------------------------------------------
// derivation trees
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Node {
    rule: RuleId,
    subject: String,
    inputs: Vec<Proof>,
    params: Vec<u32>,
    bound: DimBound,
}

#[derive(Debug, Clone)]
enum Proof {
    Given(DimBound),
    Derived(Box<Node>),
}

impl Proof {
    fn bound(&self) -> DimBound {
        match self {
            Proof::Given(b) => *b,
            Proof::Derived(n) => n.bound,
        }
    }
}

fn node(
    rule: RuleId,
    subject: &str,
    inputs: Vec<Proof>,
    params: Vec<u32>,
) -> Result<Node, EngineError> {
    let bounds: Vec<_> = inputs.iter().map(Proof::bound).collect();
    let bound = rules::apply(rule, &bounds, &params).map_err(|e| match e {
        RuleError::Bound { source: BoundError::Inconsistent { lower, upper }, .. } => {
            EngineError::Inconsistent { subject: subject.to_string(), lower, upper }
        }
        other => other.into(),
    })?;
    Ok(Node { rule, subject: subject.to_string(), inputs, params, bound })
}

fn model_subject(name: &str) -> String {
    format!("({MODEL_HEAD} {name})")
}

/// Keeps the best candidates: one if it is best on both sides, otherwise the
/// best upper and best lower joined by a meet step.
fn select(subject: &str, mut candidates: Vec<Node>) -> Result<Node, EngineError> {
    assert!(!candidates.is_empty(), "every non-trivial node has a candidate");
    candidates.sort_by_key(|c| c.rule.priority());
    let best_lower = candidates.iter().map(|c| c.bound.lower()).max().unwrap();
    let best_upper = candidates.iter().map(|c| c.bound.upper()).min().unwrap();
    if let ExtendedDim::Number(u) = best_upper {
        if best_lower > u {
            return Err(EngineError::Inconsistent {
                subject: subject.to_string(),
                lower: best_lower,
                upper: u,
            });
        }
    }
    let attains_upper = |c: &Node| c.bound.upper() == best_upper;
    let attains_lower = |c: &Node| c.bound.lower() == best_lower;
    if let Some(i) = candidates.iter().position(|c| attains_upper(c) && attains_lower(c)) {
        return Ok(candidates.swap_remove(i));
    }
    let up = candidates.iter().position(attains_upper).unwrap();
    let lo = candidates.iter().position(attains_lower).unwrap();
    let (first, second) = if up < lo { (up, lo) } else { (lo, up) };
    let second = candidates.swap_remove(second);
    let first = candidates.swap_remove(first);
    node(
        RuleId::Meet,
        subject,
        vec![Proof::Derived(Box::new(first)), Proof::Derived(Box::new(second))],
        vec![],
    )
}

struct Evaluator;

impl Evaluator {
    fn eval(&self, expr: &GroupExpr, aspherical_dim: Option<u32>) -> Result<Proof, EngineError> {
        if *expr == GroupExpr::Trivial && aspherical_dim.is_none() {
            return Ok(Proof::Given(DimBound::exact(0)));
        }
        let subject = expr.to_string();
        let mut candidates = Vec::new();
        if let Some(c) = self.structural(expr, &subject)? {
            candidates.push(c);
        }
        match is_infinite(expr) {
            InfinitenessStatus::Finite => {
                candidates.push(node(RuleId::Finite, &subject, vec![], vec![])?)
            }
            InfinitenessStatus::Infinite => {
                candidates.push(node(RuleId::InfiniteLb, &subject, vec![], vec![])?)
            }
            InfinitenessStatus::Undetermined => {}
        }
        if let Some(d) = aspherical_dim {
            candidates.push(node(RuleId::AsphLb, &subject, vec![], vec![d])?);
        }
        if candidates.is_empty() {
            // only the trivial group with an aspherical claim gets here
            return Ok(Proof::Given(DimBound::exact(0)));
        }
        let mut chosen = select(&subject, candidates)?;
        if *expr == GroupExpr::Trivial {
            // aspherical claim on the trivial group: meet with the identity bound
            chosen = node(
                RuleId::Meet,
                &subject,
                vec![Proof::Derived(Box::new(chosen)), Proof::Given(DimBound::exact(0))],
                vec![],
            )?;
        }
        Ok(Proof::Derived(Box::new(chosen)))
    }

    fn sub(&self, expr: &GroupExpr) -> Result<Proof, EngineError> {
        self.eval(expr, None)
    }

    fn structural(&self, expr: &GroupExpr, subject: &str) -> Result<Option<Node>, EngineError> {
        let n = match expr {
            GroupExpr::Trivial | GroupExpr::Finite(_) => return Ok(None),
            GroupExpr::FreeAbelian(k) => node(RuleId::Euclid, subject, vec![], vec![*k])?,
            GroupExpr::SurfaceGroup(kind) => {
                node(RuleId::Surface, subject, vec![], vec![kind.code()])?
            }
            GroupExpr::Lattice { geometry, dim, cocompact } => {
                return self.lattice(geometry, *dim, *cocompact, subject)
            }
            GroupExpr::Product(xs) => {
                let inputs = xs.iter().map(|x| self.sub(x)).collect::<Result<_, _>>()?;
                node(RuleId::Product, subject, inputs, vec![])?
            }
            GroupExpr::Union(xs) => {
                let inputs = xs.iter().map(|x| self.sub(x)).collect::<Result<_, _>>()?;
                node(RuleId::Union, subject, inputs, vec![])?
            }
            GroupExpr::FreeProduct(xs) => return self.free_product(xs).map(Some),
            GroupExpr::Amalgam { left, right, edge } => node(
                RuleId::Amalgam,
                subject,
                vec![self.sub(left)?, self.sub(right)?, self.sub(edge)?],
                vec![],
            )?,
            GroupExpr::Hnn { base, edge } => {
                node(RuleId::Hnn, subject, vec![self.sub(base)?, self.sub(edge)?], vec![])?
            }
            GroupExpr::Extension { kernel, quotient } => node(
                RuleId::Extension,
                subject,
                vec![self.sub(kernel)?, self.sub(quotient)?],
                vec![],
            )?,
            GroupExpr::ProperActionOn { space_bound, .. } => {
                node(RuleId::ProperAction, subject, vec![Proof::Given(*space_bound)], vec![])?
            }
            GroupExpr::HyperbolicGroup { witness } => node(
                RuleId::Hyp,
                subject,
                witness.iter().map(|w| Proof::Given(*w)).collect(),
                vec![],
            )?,
            GroupExpr::RelHyperbolic { peripherals, ambient } => {
                let mut inputs: Vec<Proof> =
                    peripherals.iter().map(|p| self.sub(p)).collect::<Result<_, _>>()?;
                inputs.extend(ambient.map(Proof::Given));
                node(RuleId::RelHyp, subject, inputs, vec![ambient.is_some() as u32])?
            }
        };
        Ok(Some(n))
    }

    /// Left fold of amalgams over the trivial group.
    fn free_product(&self, xs: &[GroupExpr]) -> Result<Node, EngineError> {
        let mut acc = self.sub(&xs[0])?;
        for k in 1..xs.len() {
            let subject = GroupExpr::FreeProduct(xs[..=k].to_vec()).to_string();
            let next = self.sub(&xs[k])?;
            let n = node(
                RuleId::Amalgam,
                &subject,
                vec![acc, next, Proof::Given(DimBound::exact(0))],
                vec![],
            )?;
            acc = Proof::Derived(Box::new(n));
        }
        match acc {
            Proof::Derived(n) => Ok(*n),
            Proof::Given(_) => unreachable!("normalized free products have at least two factors"),
        }
    }

    fn model_space(&self, name: &str, dim: u32, route: LatticeRoute) -> Result<Proof, EngineError> {
        let subject = model_subject(name);
        let n = match route {
            LatticeRoute::Finite => node(RuleId::Finite, &subject, vec![], vec![])?,
            LatticeRoute::Euclid => node(RuleId::Euclid, &subject, vec![], vec![dim])?,
            LatticeRoute::RealHyperbolic | LatticeRoute::Surface(SurfaceKind::Hyperbolic) => {
                node(RuleId::Hyperbolic, &subject, vec![], vec![dim])?
            }
            LatticeRoute::ComplexHyperbolic => node(RuleId::Nagata, &subject, vec![], vec![dim])?,
            _ => node(RuleId::LieLattice, &subject, vec![], vec![dim])?,
        };
        Ok(Proof::Derived(Box::new(n)))
    }

    fn lattice(
        &self,
        geometry: &str,
        dim: u8,
        cocompact: bool,
        subject: &str,
    ) -> Result<Option<Node>, EngineError> {
        let g = catalog::lookup_geometry(geometry, dim as u32)?;
        let d = dim as u32;
        let proper = |model: Proof| node(RuleId::ProperAction, subject, vec![model], vec![]);
        let n = match g.lattice_route {
            LatticeRoute::Finite => return Ok(None),
            LatticeRoute::Surface(SurfaceKind::Hyperbolic) if !cocompact => {
                proper(self.model_space(g.name, d, g.lattice_route)?)?
            }
            LatticeRoute::Surface(kind) => {
                node(RuleId::Surface, subject, vec![], vec![kind.code()])?
            }
            LatticeRoute::Euclid => node(RuleId::Euclid, subject, vec![], vec![d])?,
            LatticeRoute::LieLattice if cocompact => {
                node(RuleId::LieLattice, subject, vec![], vec![d])?
            }
            LatticeRoute::RealHyperbolic if cocompact => {
                node(RuleId::Hyperbolic, subject, vec![], vec![d])?
            }
            LatticeRoute::LieLattice
            | LatticeRoute::RealHyperbolic
            | LatticeRoute::ComplexHyperbolic => {
                proper(self.model_space(g.name, d, g.lattice_route)?)?
            }
            LatticeRoute::Product => {
                let factors = g.factors.expect("product geometries list their factors");
                let inputs = factors
                    .iter()
                    .map(|f| self.sub(&factor_group(f, cocompact)))
                    .collect::<Result<_, _>>()?;
                node(RuleId::Product, subject, inputs, vec![])?
            }
            LatticeRoute::Extension => match self.sub(&f4_group())? {
                Proof::Derived(n) => *n,
                Proof::Given(_) => unreachable!(),
            },
        };
        Ok(Some(n))
    }
}

/// The group a product factor contributes: a line gives Z, anything else a lattice.
fn factor_group(name: &str, cocompact: bool) -> GroupExpr {
    if name == LINE_FACTOR {
        return GroupExpr::FreeAbelian(1);
    }
    let dim = catalog::factor_dim(name).expect("catalog factors resolve");
    GroupExpr::lattice(name, dim, cocompact)
}

/// pi1 of an F4 manifold: the fibre torus group by the base orbifold group.
pub fn f4_group() -> GroupExpr {
    GroupExpr::extension(
        GroupExpr::FreeAbelian(2),
        GroupExpr::SurfaceGroup(SurfaceKind::Hyperbolic),
    )
}

fn linearize(proof: &Proof, steps: &mut Vec<TraceStep>) -> Premise {
    match proof {
        Proof::Given(b) => Premise::Given(*b),
        Proof::Derived(n) => {
            let inputs = n.inputs.iter().map(|p| linearize(p, steps)).collect();
            let index = steps.len();
            steps.push(TraceStep {
                index,
                rule: n.rule,
                subject: n.subject.clone(),
                inputs,
                params: n.params.clone(),
                bound: n.bound,
            });
            Premise::Step(index)
        }
    }
}

/// Best derivable bound on `expr`, with its proof trace.
///
/// `aspherical_dim` is the dimension of a closed aspherical manifold whose
/// fundamental group `expr` describes, when the caller knows one.
pub fn bound(expr: &GroupExpr, aspherical_dim: Option<u32>) -> Result<Derivation, EngineError> {
    let expr = normalize(expr);
    let proof = Evaluator.eval(&expr, aspherical_dim)?;
    let mut steps = Vec::new();
    linearize(&proof, &mut steps);
    Ok(Derivation { bound: proof.bound(), trace: ProofTrace { steps } })
}

fn subject_head(subject: &str) -> &str {
    let s = subject.strip_prefix('(').unwrap_or(subject);
    s.split(|c: char| c.is_whitespace() || c == ')').next().unwrap_or("")
}

/// Recomputes the final bound from the steps alone.
pub fn replay(trace: &ProofTrace) -> Result<DimBound, EngineError> {
    let malformed = |step: usize, reason: String| EngineError::MalformedTrace { step, reason };
    let mut bounds: Vec<DimBound> = Vec::with_capacity(trace.steps.len());
    for (i, step) in trace.steps.iter().enumerate() {
        if step.index != i {
            return Err(malformed(i, format!("index {} out of sequence", step.index)));
        }
        if !step.rule.admits_subject(subject_head(&step.subject)) {
            return Err(malformed(i, format!("{} does not apply to {}", step.rule, step.subject)));
        }
        let mut inputs = Vec::with_capacity(step.inputs.len());
        for p in &step.inputs {
            match *p {
                Premise::Step(k) if k < i => inputs.push(bounds[k]),
                Premise::Step(k) => {
                    return Err(malformed(i, format!("forward reference to step {k}")))
                }
                Premise::Given(b) => inputs.push(b),
            }
        }
        let got = rules::apply(step.rule, &inputs, &step.params)
            .map_err(|e| malformed(i, e.to_string()))?;
        if got != step.bound {
            return Err(malformed(
                i,
                format!("{} yields {got}, trace records {}", step.rule, step.bound),
            ));
        }
        bounds.push(got);
    }
    Ok(bounds.last().copied().unwrap_or(DimBound::exact(0)))
}

// ---------------------------------------------------------------------------
// line-oriented trace format
// ---------------------------------------------------------------------------

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: Vec<String>| if xs.is_empty() { "-".to_string() } else { xs.join(",") };
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.index,
            self.rule,
            self.subject,
            join(self.inputs.iter().map(ToString::to_string).collect()),
            join(self.params.iter().map(ToString::to_string).collect()),
            self.bound
        )
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for ProofTrace {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut steps = Vec::new();
        for (i, line) in s.lines().filter(|l| !l.trim().is_empty()).enumerate() {
            let bad = |reason: &str| EngineError::MalformedTrace { step: i, reason: reason.into() };
            let fields: Vec<&str> = line.split('\t').collect();
            let [index, rule, subject, inputs, params, bound] = fields[..] else {
                return Err(bad("expected 6 tab-separated fields"));
            };
            let list = |f: &str| -> Vec<String> {
                if f == "-" {
                    Vec::new()
                } else {
                    f.split(',').map(str::to_string).collect()
                }
            };
            let inputs = list(inputs)
                .iter()
                .map(|p| match p.strip_prefix('#') {
                    Some(k) => k.parse().map(Premise::Step).map_err(|_| bad("bad step reference")),
                    None => p.parse().map(Premise::Given).map_err(|_| bad("bad bound literal")),
                })
                .collect::<Result<_, _>>()?;
            let params = list(params)
                .iter()
                .map(|p| p.parse().map_err(|_| bad("bad parameter")))
                .collect::<Result<_, _>>()?;
            steps.push(TraceStep {
                index: index.parse().map_err(|_| bad("bad step index"))?,
                rule: rule.parse().map_err(|e: RuleError| bad(&e.to_string()))?,
                subject: subject.to_string(),
                inputs,
                params,
                bound: bound.parse().map_err(|_| bad("bad bound"))?,
            });
        }
        Ok(ProofTrace { steps })
    }
}

// ---------------------------------------------------------------------------
// consequences
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConsequenceKind {
    CoarseBaumConnes,
    Novikov,
    ZeroInSpectrum,
    NoPSCMetric,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Consequence {
    pub kind: ConsequenceKind,
    pub condition: &'static str,
    pub citation: &'static str,
}

const CBC: Consequence = Consequence {
    kind: ConsequenceKind::CoarseBaumConnes,
    condition: "finite asymptotic dimension",
    citation: "coarse Baum-Connes holds for proper metric spaces of finite asdim (Yu 1998)",
};
const NOVIKOV: Consequence = Consequence {
    kind: ConsequenceKind::Novikov,
    condition: "finite asymptotic dimension",
    citation: "finite asdim implies coarse embeddability into Hilbert space (Yu 2000), which implies the Novikov conjecture",
};
const ZERO: Consequence = Consequence {
    kind: ConsequenceKind::ZeroInSpectrum,
    condition: "finite asymptotic dimension and aspherical",
    citation: "zero-in-the-spectrum holds for uniformly contractible manifolds of finite asdim (Yu 1998, Cor. 7.4)",
};
const NO_PSC: Consequence = Consequence {
    kind: ConsequenceKind::NoPSCMetric,
    condition: "finite asymptotic dimension and aspherical",
    citation: "closed aspherical manifolds whose fundamental group has finite asdim carry no metric of positive scalar curvature (Yu 1998)",
};

pub fn consequences(bound: &DimBound, aspherical: bool) -> Vec<Consequence> {
    if !bound.upper().is_finite() {
        return Vec::new();
    }
    let mut out = vec![CBC, NOVIKOV];
    if aspherical {
        out.extend([ZERO, NO_PSC]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExtendedDim::Number;

    fn z() -> GroupExpr {
        GroupExpr::FreeAbelian(1)
    }

    #[test]
    fn examples() {
        let d = bound(&GroupExpr::lattice("E4", 4, true), Some(4)).unwrap();
        assert_eq!(d.bound, DimBound::exact(4));

        let d = bound(&GroupExpr::Finite(Some(17)), None).unwrap();
        assert_eq!(d.bound, DimBound::exact(0));

        let d = bound(&GroupExpr::amalgam(z(), z(), GroupExpr::Trivial), None).unwrap();
        assert_eq!(d.bound, DimBound::exact(1));

        let d = bound(&f4_group(), None).unwrap();
        assert_eq!(d.bound.upper(), Number(4));

        let h2 = GroupExpr::lattice("H2", 2, true);
        let d = bound(&GroupExpr::Product(vec![h2.clone(), h2]), None).unwrap();
        assert_eq!(d.bound.upper(), Number(4));
    }

    #[test]
    fn trivial_has_empty_trace() {
        let d = bound(&GroupExpr::Trivial, None).unwrap();
        assert!(d.trace.steps.is_empty());
        assert_eq!(d.bound, DimBound::exact(0));
        assert_eq!(replay(&d.trace).unwrap(), DimBound::exact(0));
    }

    #[test]
    fn aspherical_claim_on_finite_group_is_an_error() {
        let err = bound(&GroupExpr::Finite(Some(3)), Some(4)).unwrap_err();
        assert!(matches!(err, EngineError::Inconsistent { lower: 4, upper: 0, .. }));
        assert!(bound(&GroupExpr::Trivial, Some(3)).is_err());
        // upper 3 from the lattice cannot host a lower bound of 4
        assert!(bound(&GroupExpr::lattice("H3", 3, true), Some(4)).is_err());
    }

    #[test]
    fn unknown_geometry_surfaces() {
        assert!(matches!(
            bound(&GroupExpr::lattice("H9", 4, true), None),
            Err(EngineError::Catalog(_))
        ));
    }

    #[test]
    fn cusped_lattices_use_proper_action() {
        let d = bound(&GroupExpr::lattice("H4", 4, false), None).unwrap();
        assert_eq!(d.bound, DimBound::new(1, Number(4)).unwrap());
        assert!(d.trace.steps.iter().any(|s| s.rule == RuleId::ProperAction));
        assert!(d.trace.steps.iter().any(|s| s.rule == RuleId::Hyperbolic));

        let d = bound(&GroupExpr::lattice("H2C", 4, true), Some(4)).unwrap();
        assert_eq!(d.bound, DimBound::exact(4));
        assert!(d.trace.steps.iter().any(|s| s.rule == RuleId::Nagata));
    }

    #[test]
    fn catalog_lattice_bounds_agree_with_engine() {
        for dim in 2..=4 {
            for g in catalog::list_geometries(dim).unwrap() {
                let asph = g.aspherical_model.then_some(dim);
                let d = bound(&GroupExpr::lattice(g.name, dim as u8, true), asph).unwrap();
                assert_eq!(d.bound, g.lattice_asdim, "{}", g.name);
                let first = d.trace.steps.iter().map(|s| s.rule.as_str()).collect::<Vec<_>>();
                assert!(first.contains(&g.lattice_rules[0]), "{}: {first:?}", g.name);
            }
        }
    }

    #[test]
    fn free_product_folds_amalgams() {
        let e = GroupExpr::FreeProduct(vec![GroupExpr::lattice("E4", 4, true), z(), z(), z()]);
        let d = bound(&e, None).unwrap();
        assert_eq!(d.bound.upper(), Number(4));
        let amalgams = d.trace.steps.iter().filter(|s| s.rule == RuleId::Amalgam).count();
        assert_eq!(amalgams, 3);
    }

    #[test]
    fn hnn_is_flagged_external() {
        let d = bound(&GroupExpr::hnn(GroupExpr::lattice("H3", 3, false), z()), None).unwrap();
        assert_eq!(d.bound.upper(), Number(3));
        let step = d.trace.steps.iter().find(|s| s.rule == RuleId::Hnn).unwrap();
        assert!(step.rule.rule().citation.starts_with(rules::EXTERNAL));
    }

    #[test]
    fn trace_text_round_trip_and_replay() {
        let e = GroupExpr::amalgam(
            GroupExpr::lattice("H4", 4, false),
            GroupExpr::lattice("H4", 4, false),
            GroupExpr::lattice("E3", 3, true),
        );
        let d = bound(&e, Some(4)).unwrap();
        assert_eq!(d.bound, DimBound::exact(4));
        let text = d.trace.to_string();
        let parsed: ProofTrace = text.parse().unwrap();
        assert_eq!(parsed, d.trace);
        assert_eq!(replay(&parsed).unwrap(), d.bound);
        for line in text.lines() {
            assert_eq!(line.split('\t').count(), 6, "{line}");
        }
    }

    #[test]
    fn tampering_is_detected() {
        let e = GroupExpr::amalgam(z(), z(), GroupExpr::Trivial);
        let d = bound(&e, None).unwrap();
        let i = d.trace.steps.iter().position(|s| s.rule == RuleId::Amalgam).unwrap();

        let mut t = d.trace.clone();
        t.steps[i].rule = RuleId::Product;
        assert!(matches!(replay(&t), Err(EngineError::MalformedTrace { .. })));

        let text = d.trace.to_string().replace("R-AMALGAM", "R-BOGUS");
        assert!(text.parse::<ProofTrace>().is_err());

        let mut t = d.trace.clone();
        t.steps[i].bound = DimBound::at_most(5);
        assert!(replay(&t).is_err());

        let mut t = d.trace.clone();
        t.steps[0].inputs.push(Premise::Step(3));
        assert!(replay(&t).is_err());
    }

    #[test]
    fn consequence_table() {
        assert_eq!(consequences(&DimBound::exact(4), true).len(), 4);
        let kinds: Vec<_> =
            consequences(&DimBound::exact(0), false).into_iter().map(|c| c.kind).collect();
        assert_eq!(kinds, vec![ConsequenceKind::CoarseBaumConnes, ConsequenceKind::Novikov]);
        assert!(consequences(&DimBound::unknown(), true).is_empty());
        assert_eq!(consequences(&DimBound::upper_only(ExtendedDim::FiniteUnknown), false).len(), 2);
    }
}
