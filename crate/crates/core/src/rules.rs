//! The inequality rules and their one-step arithmetic.
//!
//! Every rule is a pure function from input bounds (and small integer
//! parameters) to an output bound. The engine composes them; replay checks a
//! trace by re-applying them one step at a time.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::bound::{BoundError, DimBound, ExtendedDim};
use crate::group::SurfaceKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Finite,
    InfiniteLb,
    Euclid,
    Hyperbolic,
    LieLattice,
    ProperAction,
    Extension,
    Union,
    Product,
    Amalgam,
    Surface,
    Hyp,
    RelHyp,
    Nagata,
    AsphLb,
    Hnn,
    Meet,
}

/// Leaf facts versus rules that combine other bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Base,
    Combination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
    Between(usize, usize),
}

impl Arity {
    pub fn admits(self, n: usize) -> bool {
        match self {
            Arity::Exactly(k) => n == k,
            Arity::AtLeast(k) => n >= k,
            Arity::Between(lo, hi) => (lo..=hi).contains(&n),
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Exactly(k) => write!(f, "{k}"),
            Arity::AtLeast(k) => write!(f, "at least {k}"),
            Arity::Between(lo, hi) => write!(f, "{lo} to {hi}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Rule {
    pub id: RuleId,
    pub kind: RuleKind,
    pub description: &'static str,
    /// Statement and source, or the marker `external/design-decision`.
    pub citation: &'static str,
    pub inputs: Arity,
    pub params: usize,
    /// Heads of the subjects a step of this rule may concern; empty means any.
    pub subjects: &'static [&'static str],
}

pub const EXTERNAL: &str = "external/design-decision";

/// Subject head used for steps about a model space rather than a group.
pub const MODEL_HEAD: &str = "Model";

const GROUP_HEADS: &[&str] = &[
    "Trivial",
    "Finite",
    "FreeAbelian",
    "SurfaceGroup",
    "Lattice",
    "Product",
    "FreeProduct",
    "Amalgam",
    "HNN",
    "Extension",
    "Union",
    "ProperActionOn",
    "HyperbolicGroup",
    "RelHyperbolic",
];

use Arity::*;
use RuleKind::*;

static RULES: [Rule; 17] = [
    Rule {
        id: RuleId::Finite,
        kind: Base,
        description: "a finitely generated group has asdim 0 iff it is finite",
        citation: "asdim Γ = 0 iff Γ is finite (Bell-Dranishnikov, Prop. 60)",
        inputs: Exactly(0),
        params: 0,
        subjects: &[],
    },
    Rule {
        id: RuleId::InfiniteLb,
        kind: Base,
        description: "an infinite finitely generated group has asdim at least 1",
        citation: "asdim Γ = 0 iff Γ is finite (Bell-Dranishnikov, Prop. 60), contrapositive",
        inputs: Exactly(0),
        params: 0,
        subjects: GROUP_HEADS,
    },
    Rule {
        id: RuleId::Euclid,
        kind: Base,
        description: "Euclidean n-space and virtually Z^n groups have asdim n",
        citation: "asdim E^n = n (Roe, Lectures on Coarse Geometry, Example 9.6)",
        inputs: Exactly(0),
        params: 1,
        subjects: &["FreeAbelian", "Lattice", MODEL_HEAD],
    },
    Rule {
        id: RuleId::Hyperbolic,
        kind: Base,
        description: "real hyperbolic n-space, and groups quasi-isometric to it, have asdim n",
        citation: "asdim H^n = n (Roe 2005), transported by Milnor-Svarc: asdim π1(M) = asdim M~",
        inputs: Exactly(0),
        params: 1,
        subjects: &["Lattice", MODEL_HEAD],
    },
    Rule {
        id: RuleId::LieLattice,
        kind: Base,
        description: "a cocompact lattice in a connected Lie group G has asdim dim G/K",
        citation: "asdim Γ = dim(G/K) (Carlsson-Goldfarb, Cor. 3.6)",
        inputs: Exactly(0),
        params: 1,
        subjects: &["Lattice", MODEL_HEAD],
    },
    Rule {
        id: RuleId::ProperAction,
        kind: Combination,
        description: "a group acting properly and isometrically on a proper metric space M",
        citation: "asdim Γ ≤ asdim M (Ji, Prop. 2.3)",
        inputs: Exactly(1),
        params: 0,
        subjects: &["ProperActionOn", "Lattice"],
    },
    Rule {
        id: RuleId::Extension,
        kind: Combination,
        description: "extension 1 -> K -> G -> H -> 1 with G finitely generated",
        citation: "asdim G ≤ asdim H + asdim K (Bell-Dranishnikov, Thm. 63)",
        inputs: Exactly(2),
        params: 0,
        subjects: &["Extension"],
    },
    Rule {
        id: RuleId::Union,
        kind: Combination,
        description: "a metric space presented as a finite union of subspaces",
        citation: "asdim A ∪ B ≤ max{asdim A, asdim B} (Bell-Dranishnikov, Finite Union Theorem)",
        inputs: AtLeast(1),
        params: 0,
        subjects: &["Union"],
    },
    Rule {
        id: RuleId::Product,
        kind: Combination,
        description: "product of coarse spaces",
        citation: "asdim(X × Y) ≤ asdim X + asdim Y (Grave, Prop. 20)",
        inputs: AtLeast(1),
        params: 0,
        subjects: &["Product", "Lattice"],
    },
    Rule {
        id: RuleId::Amalgam,
        kind: Combination,
        description: "amalgamated product A *_C B (free products use C = 1)",
        citation: "asdim(A *_C B) ≤ max{asdim A, asdim B, asdim C + 1} (Bell-Dranishnikov, Thm. 82)",
        inputs: Exactly(3),
        params: 0,
        subjects: &["Amalgam", "FreeProduct"],
    },
    Rule {
        id: RuleId::Surface,
        kind: Base,
        description: "closed-surface groups: spherical [0,0], flat and hyperbolic [2,2]",
        citation: "asdim π1(Σ) ≤ 2 for closed surfaces Σ, by uniformization and asdim E^2 = asdim H^2 = 2",
        inputs: Exactly(0),
        params: 1,
        subjects: &["SurfaceGroup", "Lattice"],
    },
    Rule {
        id: RuleId::Hyp,
        kind: Base,
        description: "finitely generated hyperbolic groups have finite asdim",
        citation: "asdim Γ < ∞ for hyperbolic Γ (Roe 2005; Gromov)",
        inputs: Between(0, 1),
        params: 0,
        subjects: &["HyperbolicGroup"],
    },
    Rule {
        id: RuleId::RelHyp,
        kind: Combination,
        description: "relatively hyperbolic group with peripherals of finite asdim",
        citation: "asdim Γ < ∞ when Γ is hyperbolic relative to subgroups of finite asdim (Osin, Thm. 1.2; Dahmani-Yaman)",
        inputs: AtLeast(1),
        params: 1,
        subjects: &["RelHyperbolic"],
    },
    Rule {
        id: RuleId::Nagata,
        kind: Base,
        description: "Nagata dimension bounds asdim; complex hyperbolic plane has Nagata dimension 4",
        citation: "dim_N X ≥ asdim X (Lang-Schlichenmaier), dim_N H_C^2 = 4",
        inputs: Exactly(0),
        params: 1,
        subjects: &[MODEL_HEAD],
    },
    Rule {
        id: RuleId::AsphLb,
        kind: Base,
        description: "fundamental group of a closed aspherical manifold",
        citation: "asdim π1(M) ≥ cd π1(M) = dim M (Dranishnikov, Prop. 5.10; Gromov)",
        inputs: Exactly(0),
        params: 1,
        subjects: GROUP_HEADS,
    },
    Rule {
        id: RuleId::Hnn,
        kind: Combination,
        description: "HNN extension A *_C, bounded like an amalgam",
        citation: "external/design-decision (analogue of the amalgam theorem: asdim(A *_C) ≤ max{asdim A, asdim C + 1})",
        inputs: Exactly(2),
        params: 0,
        subjects: &["HNN"],
    },
    Rule {
        id: RuleId::Meet,
        kind: Combination,
        description: "two valid bounds on one group combine componentwise",
        citation: "external/design-decision (max of lower bounds, min of upper bounds)",
        inputs: AtLeast(2),
        params: 0,
        subjects: &[],
    },
];

impl RuleId {
    pub const ALL: [RuleId; 17] = [
        RuleId::Finite,
        RuleId::InfiniteLb,
        RuleId::Euclid,
        RuleId::Hyperbolic,
        RuleId::LieLattice,
        RuleId::ProperAction,
        RuleId::Extension,
        RuleId::Union,
        RuleId::Product,
        RuleId::Amalgam,
        RuleId::Surface,
        RuleId::Hyp,
        RuleId::RelHyp,
        RuleId::Nagata,
        RuleId::AsphLb,
        RuleId::Hnn,
        RuleId::Meet,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Finite => "R-FINITE",
            RuleId::InfiniteLb => "R-INFINITE-LB",
            RuleId::Euclid => "R-EUCLID",
            RuleId::Hyperbolic => "R-HYPERBOLIC",
            RuleId::LieLattice => "R-LIE-LATTICE",
            RuleId::ProperAction => "R-PROPER-ACTION",
            RuleId::Extension => "R-EXTENSION",
            RuleId::Union => "R-UNION",
            RuleId::Product => "R-PRODUCT",
            RuleId::Amalgam => "R-AMALGAM",
            RuleId::Surface => "R-SURFACE",
            RuleId::Hyp => "R-HYP",
            RuleId::RelHyp => "R-RELHYP",
            RuleId::Nagata => "R-NAGATA",
            RuleId::AsphLb => "R-ASPH-LB",
            RuleId::Hnn => "R-HNN",
            RuleId::Meet => "R-MEET",
        }
    }

    pub fn rule(self) -> &'static Rule {
        &RULES[self as usize]
    }

    /// Tie-breaking order: base rules first, then table order.
    pub fn priority(self) -> (RuleKind, usize) {
        (self.rule().kind, self as usize)
    }

    pub fn admits_subject(self, head: &str) -> bool {
        let subjects = self.rule().subjects;
        subjects.is_empty() || subjects.contains(&head)
    }
}

impl Serialize for RuleId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| RuleError::UnknownRule(s.to_string()))
    }
}

pub fn rules() -> &'static [Rule] {
    &RULES
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("{rule} takes {expected} input bound(s), got {got}")]
    InputArity { rule: RuleId, expected: Arity, got: usize },
    #[error("{rule} takes {expected} parameter(s), got {got}")]
    ParamArity { rule: RuleId, expected: usize, got: usize },
    #[error("{rule}: invalid parameter {value}")]
    BadParam { rule: RuleId, value: u32 },
    #[error("{rule}: {source}")]
    Bound { rule: RuleId, source: BoundError },
}

/// String-keyed entry point.
pub fn apply_rule(
    rule_id: &str,
    inputs: &[DimBound],
    params: &[u32],
) -> Result<DimBound, RuleError> {
    apply(rule_id.parse()?, inputs, params)
}

pub fn apply(rule: RuleId, inputs: &[DimBound], params: &[u32]) -> Result<DimBound, RuleError> {
    let spec = rule.rule();
    if !spec.inputs.admits(inputs.len()) {
        return Err(RuleError::InputArity { rule, expected: spec.inputs, got: inputs.len() });
    }
    if params.len() != spec.params {
        return Err(RuleError::ParamArity { rule, expected: spec.params, got: params.len() });
    }
    let uppers = || inputs.iter().map(|b| b.upper());
    let sum = || uppers().fold(ExtendedDim::Number(0), ExtendedDim::add);
    let max = || uppers().max().unwrap_or(ExtendedDim::Number(0));
    let out = match rule {
        RuleId::Finite => DimBound::exact(0),
        RuleId::InfiniteLb => DimBound::lower_only(1),
        RuleId::Euclid | RuleId::Hyperbolic | RuleId::LieLattice => DimBound::exact(params[0]),
        RuleId::Nagata => DimBound::at_most(params[0]),
        RuleId::AsphLb => DimBound::lower_only(params[0]),
        RuleId::Surface => match SurfaceKind::from_code(params[0]) {
            Some(SurfaceKind::Spherical) => DimBound::exact(0),
            Some(_) => DimBound::exact(2),
            None => return Err(RuleError::BadParam { rule, value: params[0] }),
        },
        RuleId::ProperAction => DimBound::upper_only(inputs[0].upper()),
        RuleId::Extension | RuleId::Product => DimBound::upper_only(sum()),
        RuleId::Union => DimBound::upper_only(max()),
        RuleId::Amalgam => DimBound::upper_only(
            inputs[0].upper().max(inputs[1].upper()).max(inputs[2].upper().succ()),
        ),
        RuleId::Hnn => DimBound::upper_only(inputs[0].upper().max(inputs[1].upper().succ())),
        RuleId::Hyp => DimBound::upper_only(
            inputs
                .first()
                .map_or(ExtendedDim::FiniteUnknown, |w| w.upper().min(ExtendedDim::FiniteUnknown)),
        ),
        RuleId::RelHyp => {
            let with_ambient = match params[0] {
                0 => false,
                1 => true,
                v => return Err(RuleError::BadParam { rule, value: v }),
            };
            if with_ambient && inputs.len() < 2 {
                return Err(RuleError::InputArity {
                    rule,
                    expected: AtLeast(2),
                    got: inputs.len(),
                });
            }
            let (peripherals, ambient) = if with_ambient {
                (&inputs[..inputs.len() - 1], inputs.last().map(|b| b.upper()))
            } else {
                (inputs, None)
            };
            let from_peripherals = if peripherals.iter().all(|b| b.upper().is_finite()) {
                ExtendedDim::FiniteUnknown
            } else {
                ExtendedDim::Unknown
            };
            DimBound::upper_only(ambient.map_or(from_peripherals, |a| a.min(from_peripherals)))
        }
        RuleId::Meet => {
            let lower = inputs.iter().map(|b| b.lower()).max().unwrap_or(0);
            let upper = uppers().min().unwrap_or(ExtendedDim::Unknown);
            DimBound::new(lower, upper).map_err(|source| RuleError::Bound { rule, source })?
        }
    };
    Ok(out)
}
