use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use super::LabError;

pub const DEFAULT_POINT_BUDGET: usize = 200_000;
/// Spaces without a closed-form metric store a full distance matrix.
pub const MATRIX_POINT_CAP: usize = 6_000;

/// A group with its standard symmetric generating set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    FreeAbelian(u32),
    FreeGroup(u32),
    Heisenberg3,
}

impl GroupSpec {
    fn check(self) -> Result<(), LabError> {
        match self {
            GroupSpec::FreeAbelian(1..=3)
            | GroupSpec::FreeGroup(1..=2)
            | GroupSpec::Heisenberg3 => Ok(()),
            other => Err(LabError::Precondition(format!("unsupported group {other}"))),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::FreeAbelian(n) => write!(f, "FreeAbelian({n})"),
            GroupSpec::FreeGroup(n) => write!(f, "FreeGroup({n})"),
            GroupSpec::Heisenberg3 => f.write_str("Heisenberg3"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LabError::Precondition(format!("unknown group `{s}`"));
        if s == "Heisenberg3" {
            return Ok(GroupSpec::Heisenberg3);
        }
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let n: u32 = rest.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let spec = match head {
            "FreeAbelian" => GroupSpec::FreeAbelian(n),
            "FreeGroup" => GroupSpec::FreeGroup(n),
            _ => return Err(bad()),
        };
        spec.check()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Metric {
    /// Integer points with the L1 metric.
    Lattice(Vec<Vec<i64>>),
    /// Reduced words in a free group; letters are ±(generator index + 1).
    Words(Vec<Vec<i8>>),
    /// Row-major distance matrix.
    Matrix { n: usize, dist: Vec<u32> },
}

/// A finite metric space with integer distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    label: String,
    metric: Metric,
    caveat: Option<String>,
}

impl FiniteMetricSpace {
    /// Builds a space from an explicit distance matrix, checking the metric axioms.
    pub fn from_matrix(label: impl Into<String>, rows: Vec<Vec<u32>>) -> Result<Self, LabError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LabError::NotAMetric("matrix is not square".into()));
        }
        let space = FiniteMetricSpace {
            label: label.into(),
            metric: Metric::Matrix { n, dist: rows.into_iter().flatten().collect() },
            caveat: None,
        };
        space.check_metric()?;
        Ok(space)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn caveat(&self) -> Option<&str> {
        self.caveat.as_deref()
    }

    pub fn len(&self) -> usize {
        match &self.metric {
            Metric::Lattice(p) => p.len(),
            Metric::Words(w) => w.len(),
            Metric::Matrix { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dist(&self, i: usize, j: usize) -> u32 {
        match &self.metric {
            Metric::Lattice(p) => {
                p[i].iter().zip(&p[j]).map(|(a, b)| a.abs_diff(*b)).sum::<u64>() as u32
            }
            Metric::Words(w) => {
                let common = w[i].iter().zip(&w[j]).take_while(|(a, b)| a == b).count();
                (w[i].len() + w[j].len() - 2 * common) as u32
            }
            Metric::Matrix { n, dist } => dist[i * n + j],
        }
    }

    /// Coordinates of a lattice point, when the space is a free abelian ball.
    pub fn coords(&self, i: usize) -> Option<&[i64]> {
        match &self.metric {
            Metric::Lattice(p) => Some(&p[i]),
            _ => None,
        }
    }

    pub fn diameter_of(&self, subset: &[usize]) -> u32 {
        let mut d = 0;
        for (k, &a) in subset.iter().enumerate() {
            for &b in &subset[k + 1..] {
                d = d.max(self.dist(a, b));
            }
        }
        d
    }

    /// Exhaustive check of the metric axioms; cubic in the number of points.
    pub fn check_metric(&self) -> Result<(), LabError> {
        let n = self.len();
        for x in 0..n {
            if self.dist(x, x) != 0 {
                return Err(LabError::NotAMetric(format!("d({x},{x}) != 0")));
            }
            for y in 0..n {
                let dxy = self.dist(x, y);
                if dxy != self.dist(y, x) {
                    return Err(LabError::NotAMetric(format!("d({x},{y}) is not symmetric")));
                }
                if x != y && dxy == 0 {
                    return Err(LabError::NotAMetric(format!("d({x},{y}) = 0")));
                }
                for z in 0..n {
                    if self.dist(x, z) > dxy + self.dist(y, z) {
                        return Err(LabError::NotAMetric(format!("triangle fails at {x},{y},{z}")));
                    }
                }
            }
        }
        Ok(())
    }
}

fn budget_error(spec: GroupSpec, radius: u32, budget: usize) -> LabError {
    LabError::BudgetExceeded { what: format!("ball of radius {radius} in {spec}"), budget }
}

fn l1_ball_size(n: u32, r: u32) -> u128 {
    // points of Z^n with |x|_1 <= r: sum_k 2^k C(n,k) C(r,k)
    let choose = |a: u128, b: u128| -> u128 {
        if b > a {
            return 0;
        }
        (0..b).fold(1u128, |acc, i| acc * (a - i) / (i + 1))
    };
    (0..=n as u128).map(|k| (1u128 << k) * choose(n as u128, k) * choose(r as u128, k)).sum()
}

fn lattice_points(n: usize, r: i64) -> Vec<Vec<i64>> {
    fn go(n: usize, left: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in -left..=left {
            prefix.push(x);
            go(n, left - x.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, r, &mut Vec::new(), &mut out);
    out
}

fn free_words(rank: i8, r: usize) -> Vec<Vec<i8>> {
    let letters: Vec<i8> = (1..=rank).flat_map(|g| [g, -g]).collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &letters {
                if w.last() != Some(&-l) {
                    let mut v: Vec<i8> = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

type H3 = (i64, i64, i64);

fn heisenberg_neighbours((a, b, c): H3) -> [H3; 4] {
    [(a + 1, b, c), (a - 1, b, c), (a, b + 1, c + a), (a, b - 1, c - a)]
}

fn heisenberg_ball(radius: u32, cap: usize) -> Option<FiniteMetricSpace> {
    let mut index: HashMap<H3, usize> = HashMap::new();
    let mut order = vec![(0, 0, 0)];
    let mut queue = VecDeque::from([((0, 0, 0), 0u32)]);
    index.insert((0, 0, 0), 0);
    while let Some((g, d)) = queue.pop_front() {
        if d == radius {
            continue;
        }
        for h in heisenberg_neighbours(g) {
            if !index.contains_key(&h) {
                if order.len() == cap {
                    return None;
                }
                index.insert(h, order.len());
                order.push(h);
                queue.push_back((h, d + 1));
            }
        }
    }
    let n = order.len();
    let adj: Vec<Vec<usize>> = order
        .iter()
        .map(|g| heisenberg_neighbours(*g).iter().filter_map(|h| index.get(h).copied()).collect())
        .collect();
    let mut dist = vec![u32::MAX; n * n];
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if row[v] == u32::MAX {
                    row[v] = row[u] + 1;
                    q.push_back(v);
                }
            }
        }
    }
    Some(FiniteMetricSpace {
        label: format!("cayley {} {radius}", GroupSpec::Heisenberg3),
        metric: Metric::Matrix { n, dist },
        caveat: Some(
            "distances are path lengths inside the ball, which can exceed the word metric near the boundary"
                .into(),
        ),
    })
}

/// The ball of the given radius around the identity, with the word metric.
///
/// Points are ordered lexicographically by coordinates for free abelian
/// groups, by shortlex for free groups and breadth-first for Heisenberg3.
pub fn cayley_ball(
    spec: GroupSpec,
    radius: u32,
    budget: usize,
) -> Result<FiniteMetricSpace, LabError> {
    spec.check()?;
    if radius == 0 {
        return Err(LabError::Precondition("radius must be positive".into()));
    }
    let label = format!("cayley {spec} {radius}");
    let metric = match spec {
        GroupSpec::FreeAbelian(n) => {
            if l1_ball_size(n, radius) > budget as u128 {
                return Err(budget_error(spec, radius, budget));
            }
            Metric::Lattice(lattice_points(n as usize, radius as i64))
        }
        GroupSpec::FreeGroup(k) => {
            let size: u128 = if k == 1 {
                2 * radius as u128 + 1
            } else {
                1 + (0..radius).map(|i| 4 * 3u128.pow(i)).sum::<u128>()
            };
            if size > budget as u128 {
                return Err(budget_error(spec, radius, budget));
            }
            Metric::Words(free_words(k as i8, radius as usize))
        }
        GroupSpec::Heisenberg3 => {
            let cap = budget.min(MATRIX_POINT_CAP);
            return heisenberg_ball(radius, cap).ok_or_else(|| budget_error(spec, radius, cap));
        }
    };
    Ok(FiniteMetricSpace { label, metric, caveat: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(spec: GroupSpec, r: u32) -> FiniteMetricSpace {
        cayley_ball(spec, r, DEFAULT_POINT_BUDGET).unwrap()
    }

    #[test]
    fn ball_sizes() {
        let line = ball(GroupSpec::FreeAbelian(1), 5);
        assert_eq!(line.len(), 11);
        for i in 0..11 {
            for j in 0..11 {
                assert_eq!(line.dist(i, j) as i64, (i as i64 - j as i64).abs());
            }
        }
        assert_eq!(ball(GroupSpec::FreeAbelian(2), 3).len(), 25);
        assert_eq!(ball(GroupSpec::FreeGroup(2), 4).len(), 161);
        assert_eq!(ball(GroupSpec::FreeGroup(1), 4).len(), 9);
        assert_eq!(ball(GroupSpec::FreeAbelian(3), 4).len() as u128, l1_ball_size(3, 4));
    }

    #[test]
    fn metrics_are_metrics() {
        for spec in [GroupSpec::FreeAbelian(2), GroupSpec::FreeGroup(2), GroupSpec::Heisenberg3] {
            let b = ball(spec, 3);
            b.check_metric().unwrap();
        }
        assert!(ball(GroupSpec::Heisenberg3, 2).caveat().is_some());
    }

    #[test]
    fn budgets_and_preconditions() {
        assert!(matches!(
            cayley_ball(GroupSpec::FreeAbelian(3), 100, 1000),
            Err(LabError::BudgetExceeded { .. })
        ));
        assert!(matches!(
            cayley_ball(GroupSpec::Heisenberg3, 40, DEFAULT_POINT_BUDGET),
            Err(LabError::BudgetExceeded { budget: MATRIX_POINT_CAP, .. })
        ));
        assert!(cayley_ball(GroupSpec::FreeAbelian(4), 2, 100).is_err());
        assert!(cayley_ball(GroupSpec::FreeAbelian(1), 0, 100).is_err());
        assert!(FiniteMetricSpace::from_matrix("bad", vec![vec![0, 1], vec![2, 0]]).is_err());
    }

    #[test]
    fn spec_round_trip() {
        for s in [GroupSpec::FreeAbelian(2), GroupSpec::FreeGroup(1), GroupSpec::Heisenberg3] {
            assert_eq!(s.to_string().parse::<GroupSpec>().unwrap(), s);
        }
        assert!("FreeAbelian(9)".parse::<GroupSpec>().is_err());
    }
}
