use super::cover::CoverWitness;
use super::space::FiniteMetricSpace;
use super::LabError;

pub const MAX_SEARCH_POINTS: usize = 24;
pub const MAX_SEARCH_FAMILIES: usize = 4;
const NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { k: usize, witness: CoverWitness },
    NoneUpTo(usize),
}

/// Colour-class search. A cover may be assumed to be a partition, since
/// shrinking subsets never breaks either condition. Inside one family the
/// subsets are then forced: they are the components of the graph joining
/// points at distance <= D. So a k-family cover with diameters <= B is a
/// k-colouring whose monochromatic components all have diameter <= B.
struct Search<'a> {
    space: &'a FiniteMetricSpace,
    d: u32,
    b: u32,
    k: usize,
    colour: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    /// Component of `p` among points `0..=p` of its colour.
    fn component_ok(&self, p: usize) -> bool {
        let c = self.colour[p];
        let mut comp = vec![p];
        let mut in_comp = vec![false; p + 1];
        in_comp[p] = true;
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            for v in 0..=p {
                if !in_comp[v] && self.colour[v] == c && self.space.dist(u, v) <= self.d {
                    in_comp[v] = true;
                    comp.push(v);
                }
            }
            i += 1;
        }
        comp.iter().all(|&u| comp.iter().all(|&v| self.space.dist(u, v) <= self.b))
    }

    fn extend(&mut self, p: usize, used: usize) -> Result<bool, LabError> {
        if p == self.space.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(LabError::BudgetExceeded {
                what: "exhaustive family search".into(),
                budget: NODE_BUDGET as usize,
            });
        }
        // colours beyond the first unused one are symmetric to it
        for c in 0..self.k.min(used + 1) {
            self.colour[p] = c;
            if self.component_ok(p) && self.extend(p + 1, used.max(c + 1))? {
                return Ok(true);
            }
        }
        self.colour[p] = usize::MAX;
        Ok(false)
    }
}

/// Families of a witness built from a colouring: per colour, the components
/// of the distance-at-most-D graph, in canonical point order.
pub(super) fn witness_from_colouring(
    space: &FiniteMetricSpace,
    d: u32,
    k: usize,
    colour: &[usize],
) -> CoverWitness {
    let n = space.len();
    let mut families = vec![Vec::new(); k];
    let mut assigned = vec![false; n];
    for s in 0..n {
        if assigned[s] {
            continue;
        }
        let c = colour[s];
        let mut comp = vec![s];
        assigned[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            for v in 0..n {
                if !assigned[v] && colour[v] == c && space.dist(u, v) <= d {
                    assigned[v] = true;
                    comp.push(v);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        families[c].push(comp);
    }
    let mut w = CoverWitness { space: space.clone(), d, b: 0, families };
    w.b = w.families.iter().flatten().map(|s| space.diameter_of(s)).max().unwrap_or(0);
    w
}

/// Smallest number of D-disjoint families with diameters at most B that
/// cover the space, searching k = 1..=k_max. Deterministic: points are taken
/// in index order and colours in increasing order.
pub fn min_families_exhaustive(
    space: &FiniteMetricSpace,
    d: u32,
    b: u32,
    k_max: usize,
) -> Result<SearchOutcome, LabError> {
    if space.len() > MAX_SEARCH_POINTS {
        return Err(LabError::Precondition(format!(
            "exhaustive search takes at most {MAX_SEARCH_POINTS} points, got {}",
            space.len()
        )));
    }
    if !(1..=MAX_SEARCH_FAMILIES).contains(&k_max) {
        return Err(LabError::Precondition(format!("k_max must be in 1..={MAX_SEARCH_FAMILIES}")));
    }
    if d == 0 || b == 0 {
        return Err(LabError::Precondition("D and B must be positive".into()));
    }
    let mut nodes = 0;
    for k in 1..=k_max {
        let mut s = Search { space, d, b, k, colour: vec![usize::MAX; space.len()], nodes };
        if s.extend(0, 0)? {
            let witness = witness_from_colouring(space, d, k, &s.colour);
            return Ok(SearchOutcome::Found { k, witness });
        }
        nodes = s.nodes;
    }
    Ok(SearchOutcome::NoneUpTo(k_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::{cayley_ball, verify_cover, GroupSpec};

    fn path9() -> FiniteMetricSpace {
        cayley_ball(GroupSpec::FreeAbelian(1), 4, 100).unwrap()
    }

    fn k_of(o: SearchOutcome) -> Option<usize> {
        match o {
            SearchOutcome::Found { k, witness } => {
                assert!(verify_cover(&witness).valid);
                Some(k)
            }
            SearchOutcome::NoneUpTo(_) => None,
        }
    }

    #[test]
    fn path_examples() {
        assert_eq!(k_of(min_families_exhaustive(&path9(), 2, 3, 4).unwrap()), Some(2));
        assert_eq!(k_of(min_families_exhaustive(&path9(), 1, 8, 4).unwrap()), Some(1));
        let point = FiniteMetricSpace::from_matrix("point", vec![vec![0]]).unwrap();
        assert_eq!(k_of(min_families_exhaustive(&point, 5, 1, 4).unwrap()), Some(1));
    }

    #[test]
    fn impossible_scale_reports_none() {
        // B = 1 with D = 3 on a 9-point path: every family's blocks are at
        // most 2 long and 4 apart, so two families cannot reach all points.
        assert_eq!(min_families_exhaustive(&path9(), 3, 1, 2).unwrap(), SearchOutcome::NoneUpTo(2));
    }

    #[test]
    fn preconditions() {
        let big = cayley_ball(GroupSpec::FreeAbelian(2), 4, 100).unwrap();
        assert!(min_families_exhaustive(&big, 1, 1, 2).is_err());
        assert!(min_families_exhaustive(&path9(), 1, 1, 5).is_err());
        assert!(min_families_exhaustive(&path9(), 0, 1, 2).is_err());
    }
}
