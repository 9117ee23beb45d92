use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::space::{cayley_ball, FiniteMetricSpace, GroupSpec};
use super::LabError;

/// Families of subsets of a finite space, recorded together with the scale
/// `d` and the claimed diameter bound `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverWitness {
    pub space: FiniteMetricSpace,
    pub d: u32,
    pub b: u32,
    pub families: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    BadIndex { family: usize, subset: usize, point: usize },
    Uncovered { point: usize },
    TooClose { family: usize, u: usize, v: usize, distance: u32, d: u32 },
    DiameterMismatch { recorded: u32, computed: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadIndex { family, subset, point } => {
                write!(f, "subset {family}:{subset} names point {point}, which is not in the space")
            }
            Violation::Uncovered { point } => write!(f, "point {point} is not covered"),
            Violation::TooClose { family, u, v, distance, d } => write!(
                f,
                "family {family}: subsets {u} and {v} are at distance {distance}, violating d(U,V) > D with D = {d}"
            ),
            Violation::DiameterMismatch { recorded, computed } => {
                write!(f, "recorded B = {recorded} but the largest subset diameter is {computed}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub valid: bool,
    /// Largest subset diameter, recomputed.
    pub b: u32,
    pub violations: Vec<Violation>,
}

/// Side length of the bricks used at scale `d` in dimension `n`.
pub fn brick_side(n: u32, d: u32) -> u32 {
    2 * (n + 1) * (d + 1)
}

/// Brick cover of the radius ball in Z^n at scale `d`.
///
/// Every coordinate axis is cut into cells of side L = 2(n+1)(D+1). Family k
/// keeps the part of each cell that stays D+1 away from the cell walls once
/// shifted by 2k(D+1). Along one axis the n+1 discarded margins tile the
/// circle of length L, so a point is discarded by at most n families and is
/// kept by at least one. Two kept bricks of one family are separated by a
/// full margin pair, 2(D+1) > D, in some coordinate.
pub fn brick_cover(n: u32, d: u32, radius: u32, budget: usize) -> Result<CoverWitness, LabError> {
    if !(1..=3).contains(&n) {
        return Err(LabError::Precondition(format!("brick covers need 1 <= n <= 3, got {n}")));
    }
    if d == 0 {
        return Err(LabError::Precondition("D must be positive".into()));
    }
    let space = cayley_ball(GroupSpec::FreeAbelian(n), radius, budget)?;
    let side = brick_side(n, d) as i64;
    let shift = 2 * (d as i64 + 1);
    let margin = d as i64 + 1;
    let mut families = Vec::new();
    for k in 0..=n as i64 {
        let mut bricks: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for p in 0..space.len() {
            let x = space.coords(p).expect("lattice ball");
            let mut cell = Vec::with_capacity(x.len());
            let kept = x.iter().all(|&xi| {
                let y = xi - k * shift;
                cell.push(y.div_euclid(side));
                let r = y.rem_euclid(side);
                (margin..side - margin).contains(&r)
            });
            if kept {
                bricks.entry(cell).or_default().push(p);
            }
        }
        families.push(bricks.into_values().collect());
    }
    let mut w = CoverWitness { space, d, b: 0, families };
    w.b = max_diameter(&w);
    assert!(w.b <= 2 * n * (n + 1) * (d + 1), "brick diameter bound");
    Ok(w)
}

fn max_diameter(w: &CoverWitness) -> u32 {
    w.families.iter().flatten().map(|s| w.space.diameter_of(s)).max().unwrap_or(0)
}

/// Checks coverage, D-disjointness inside each family, and the recorded B.
pub fn verify_cover(w: &CoverWitness) -> CoverReport {
    let n = w.space.len();
    let mut violations = Vec::new();
    let mut covered = vec![false; n];
    let mut clean: Vec<Vec<Vec<usize>>> = Vec::new();
    for (f, fam) in w.families.iter().enumerate() {
        let mut out = Vec::new();
        for (s, subset) in fam.iter().enumerate() {
            let mut ok = Vec::new();
            for &p in subset {
                if p < n {
                    covered[p] = true;
                    ok.push(p);
                } else {
                    violations.push(Violation::BadIndex { family: f, subset: s, point: p });
                }
            }
            out.push(ok);
        }
        clean.push(out);
    }
    violations.extend((0..n).filter(|&p| !covered[p]).map(|point| Violation::Uncovered { point }));
    for (f, fam) in clean.iter().enumerate() {
        for u in 0..fam.len() {
            for v in u + 1..fam.len() {
                let gap = fam[u]
                    .iter()
                    .flat_map(|&a| fam[v].iter().map(move |&b| (a, b)))
                    .map(|(a, b)| w.space.dist(a, b))
                    .min();
                if let Some(distance) = gap.filter(|&g| g <= w.d) {
                    violations.push(Violation::TooClose { family: f, u, v, distance, d: w.d });
                }
            }
        }
    }
    let b = clean.iter().flatten().map(|s| w.space.diameter_of(s)).max().unwrap_or(0);
    if b != w.b {
        violations.push(Violation::DiameterMismatch { recorded: w.b, computed: b });
    }
    CoverReport { valid: violations.is_empty(), b, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::DEFAULT_POINT_BUDGET;

    #[test]
    fn brick_examples_verify() {
        for (n, d, r) in [(1, 2, 40), (2, 3, 30), (3, 1, 6)] {
            let w = brick_cover(n, d, r, DEFAULT_POINT_BUDGET).unwrap();
            assert_eq!(w.families.len() as u32, n + 1);
            let rep = verify_cover(&w);
            assert!(rep.valid, "{n} {d} {r}: {:?}", &rep.violations[..rep.violations.len().min(3)]);
        }
        assert!(brick_cover(1, 0, 10, DEFAULT_POINT_BUDGET).is_err());
    }

    #[test]
    fn two_point_space() {
        let space = FiniteMetricSpace::from_matrix("pair", vec![vec![0, 3], vec![3, 0]]).unwrap();
        let w = CoverWitness { space, d: 1, b: 3, families: vec![vec![vec![0, 1]]] };
        let rep = verify_cover(&w);
        assert!(rep.valid);
        assert_eq!(rep.b, 3);
    }

    #[test]
    fn adjacent_subsets_fail() {
        let space = cayley_ball(GroupSpec::FreeAbelian(1), 2, 100).unwrap();
        let w = CoverWitness {
            space,
            d: 1,
            b: 1,
            families: vec![vec![vec![0, 1], vec![2, 3], vec![4]]],
        };
        let rep = verify_cover(&w);
        assert!(!rep.valid);
        assert!(rep.violations.iter().any(|v| v.to_string().contains("d(U,V) > D")));
    }
}
