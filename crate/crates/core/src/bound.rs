//! Dimension bounds: an integer lower bound paired with an extended upper bound.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper end of a [`DimBound`].
///
/// Ordered as `Number(0) < Number(1) < ... < FiniteUnknown < Unknown`, so that
/// "smaller" always means "more informative".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtendedDim {
    Number(u32),
    /// Known to be finite, with no number attached.
    FiniteUnknown,
    Unknown,
}

impl ExtendedDim {
    fn rank(self) -> (u8, u32) {
        match self {
            ExtendedDim::Number(n) => (0, n),
            ExtendedDim::FiniteUnknown => (1, 0),
            ExtendedDim::Unknown => (2, 0),
        }
    }

    pub fn is_finite(self) -> bool {
        !matches!(self, ExtendedDim::Unknown)
    }

    pub fn number(self) -> Option<u32> {
        match self {
            ExtendedDim::Number(n) => Some(n),
            _ => None,
        }
    }

    /// Sum used by the product and extension rules.
    pub fn add(self, other: ExtendedDim) -> ExtendedDim {
        use ExtendedDim::*;
        match (self, other) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (FiniteUnknown, _) | (_, FiniteUnknown) => FiniteUnknown,
            (Number(a), Number(b)) => Number(a + b),
        }
    }

    pub fn succ(self) -> ExtendedDim {
        self.add(ExtendedDim::Number(1))
    }
}

impl PartialOrd for ExtendedDim {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedDim {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl fmt::Display for ExtendedDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedDim::Number(n) => write!(f, "{n}"),
            ExtendedDim::FiniteUnknown => f.write_str("fin"),
            ExtendedDim::Unknown => f.write_str("?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("inconsistent bound: lower {lower} exceeds upper {upper}")]
    Inconsistent { lower: u32, upper: u32 },
    #[error("malformed bound literal `{0}`")]
    Malformed(String),
}

/// `lower <= asdim <= upper`.
///
/// The constructor rejects `lower > upper` whenever `upper` is numeric; no
/// bound in the crate is ever clamped into shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBound", into = "RawBound")]
pub struct DimBound {
    lower: u32,
    upper: ExtendedDim,
}

impl DimBound {
    pub fn new(lower: u32, upper: ExtendedDim) -> Result<Self, BoundError> {
        if let ExtendedDim::Number(n) = upper {
            if lower > n {
                return Err(BoundError::Inconsistent { lower, upper: n });
            }
        }
        Ok(DimBound { lower, upper })
    }

    /// Unchecked constructor for static tables; callers guarantee the order.
    pub(crate) const fn from_parts(lower: u32, upper: ExtendedDim) -> Self {
        DimBound { lower, upper }
    }

    /// `[n, n]`.
    pub const fn exact(n: u32) -> Self {
        DimBound { lower: n, upper: ExtendedDim::Number(n) }
    }

    /// `[0, n]`.
    pub const fn at_most(n: u32) -> Self {
        DimBound { lower: 0, upper: ExtendedDim::Number(n) }
    }

    /// `[0, upper]`; always valid.
    pub const fn upper_only(upper: ExtendedDim) -> Self {
        DimBound { lower: 0, upper }
    }

    /// `[lower, ?]`; always valid.
    pub const fn lower_only(lower: u32) -> Self {
        DimBound { lower, upper: ExtendedDim::Unknown }
    }

    pub const fn unknown() -> Self {
        Self::lower_only(0)
    }

    pub fn lower(&self) -> u32 {
        self.lower
    }

    pub fn upper(&self) -> ExtendedDim {
        self.upper
    }

    pub fn is_exact(&self) -> bool {
        self.upper == ExtendedDim::Number(self.lower)
    }

    /// Componentwise best of two valid bounds on the same quantity.
    pub fn meet(&self, other: &DimBound) -> Result<DimBound, BoundError> {
        DimBound::new(self.lower.max(other.lower), self.upper.min(other.upper))
    }
}

impl fmt::Display for DimBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lower, self.upper)
    }
}

impl FromStr for DimBound {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || BoundError::Malformed(s.to_string());
        let (lo, hi) = s.split_once("..").ok_or_else(malformed)?;
        let lower: u32 = lo.parse().map_err(|_| malformed())?;
        let upper = match hi {
            "fin" => ExtendedDim::FiniteUnknown,
            "?" => ExtendedDim::Unknown,
            n => ExtendedDim::Number(n.parse().map_err(|_| malformed())?),
        };
        DimBound::new(lower, upper)
    }
}

/// Serialized shape: `{"lower": 4, "upper": "4"}` with upper in {int, "fin", "?"}.
#[derive(Serialize, Deserialize)]
struct RawBound {
    lower: u32,
    upper: String,
}

impl From<DimBound> for RawBound {
    fn from(b: DimBound) -> Self {
        RawBound { lower: b.lower, upper: b.upper.to_string() }
    }
}

impl TryFrom<RawBound> for DimBound {
    type Error = BoundError;

    fn try_from(raw: RawBound) -> Result<Self, Self::Error> {
        format!("{}..{}", raw.lower, raw.upper).parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExtendedDim::*;

    #[test]
    fn order_puts_numbers_first() {
        assert!(Number(100) < FiniteUnknown);
        assert!(FiniteUnknown < Unknown);
        assert!(Number(2) < Number(3));
    }

    #[test]
    fn arithmetic_absorbs() {
        assert_eq!(Number(2).add(Number(2)), Number(4));
        assert_eq!(Number(2).add(FiniteUnknown), FiniteUnknown);
        assert_eq!(FiniteUnknown.add(Unknown), Unknown);
        assert_eq!(Number(3).max(FiniteUnknown), FiniteUnknown);
    }

    #[test]
    fn rejects_inverted_bounds() {
        assert_eq!(
            DimBound::new(3, Number(2)),
            Err(BoundError::Inconsistent { lower: 3, upper: 2 })
        );
        assert!(DimBound::new(3, FiniteUnknown).is_ok());
    }

    #[test]
    fn literal_round_trip() {
        for s in ["0..0", "4..4", "1..fin", "0..?"] {
            assert_eq!(s.parse::<DimBound>().unwrap().to_string(), s);
        }
        assert!("5..4".parse::<DimBound>().is_err());
        assert!("x..4".parse::<DimBound>().is_err());
    }

    #[test]
    fn meet_takes_best_of_each_side() {
        let a = DimBound::at_most(4);
        let b = DimBound::lower_only(4);
        assert_eq!(a.meet(&b).unwrap(), DimBound::exact(4));
        assert!(DimBound::at_most(2).meet(&DimBound::lower_only(3)).is_err());
    }
}
