//! Separate integer encoding of the rule arithmetic, used as an oracle.

use asdim_core::rules::{apply, RuleId};
use asdim_core::{DimBound, ExtendedDim};

const FIN: u64 = 1_000_000;
const UNK: u64 = 2_000_000;

pub fn enc(u: ExtendedDim) -> u64 {
    match u {
        ExtendedDim::Number(n) => n as u64,
        ExtendedDim::FiniteUnknown => FIN,
        ExtendedDim::Unknown => UNK,
    }
}

fn plus(a: u64, b: u64) -> u64 {
    if a.max(b) >= FIN {
        a.max(b)
    } else {
        a + b
    }
}

fn succ(a: u64) -> u64 {
    if a >= FIN {
        a
    } else {
        a + 1
    }
}

/// Every bound with lower in 0..=6 and upper in 0..=6, fin or ?.
pub fn all_bounds() -> Vec<DimBound> {
    let mut out = Vec::new();
    for u in 0..=6 {
        for l in 0..=u {
            out.push(DimBound::new(l, ExtendedDim::Number(u)).unwrap());
        }
    }
    for upper in [ExtendedDim::FiniteUnknown, ExtendedDim::Unknown] {
        for l in 0..=6 {
            out.push(DimBound::new(l, upper).unwrap());
        }
    }
    out
}

/// Expected (lower, encoded upper) or None when the rule must reject.
pub fn oracle(rule: RuleId, xs: &[DimBound], params: &[u32]) -> Option<(u32, u64)> {
    let ups: Vec<u64> = xs.iter().map(|b| enc(b.upper())).collect();
    Some(match rule {
        RuleId::Finite => (0, 0),
        RuleId::InfiniteLb => (1, UNK),
        RuleId::Euclid | RuleId::Hyperbolic | RuleId::LieLattice => (params[0], params[0] as u64),
        RuleId::Nagata => (0, params[0] as u64),
        RuleId::AsphLb => (params[0], UNK),
        RuleId::Surface => match params[0] {
            0 => (0, 0),
            1 | 2 => (2, 2),
            _ => return None,
        },
        RuleId::ProperAction => (0, ups[0]),
        RuleId::Extension | RuleId::Product => (0, ups.iter().fold(0, |a, &b| plus(a, b))),
        RuleId::Union => (0, *ups.iter().max().unwrap()),
        RuleId::Amalgam => (0, ups[0].max(ups[1]).max(succ(ups[2]))),
        RuleId::Hnn => (0, ups[0].max(succ(ups[1]))),
        RuleId::Hyp => (0, ups.first().map_or(FIN, |&w| w.min(FIN))),
        RuleId::RelHyp => {
            if params[0] > 1 || (params[0] == 1 && ups.len() < 2) {
                return None;
            }
            let (per, amb) = if params[0] == 1 {
                (&ups[..ups.len() - 1], Some(*ups.last().unwrap()))
            } else {
                (&ups[..], None)
            };
            let p = if per.iter().all(|&u| u < UNK) { FIN } else { UNK };
            (0, amb.map_or(p, |a| a.min(p)))
        }
        RuleId::Meet => {
            let l = xs.iter().map(|b| b.lower()).max().unwrap();
            let u = *ups.iter().min().unwrap();
            if u < FIN && l as u64 > u {
                return None;
            }
            (l, u)
        }
    })
}

pub fn tuples(n: usize) -> Vec<Vec<DimBound>> {
    let all = all_bounds();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                all.iter().map(move |b| {
                    let mut t = t.clone();
                    t.push(*b);
                    t
                })
            })
            .collect();
    }
    out
}

/// Agrees iff both reject or both produce the same bound.
pub fn agrees(rule: RuleId, xs: &[DimBound], params: &[u32]) -> bool {
    let got = apply(rule, xs, params).ok().map(|b| (b.lower(), enc(b.upper())));
    got == oracle(rule, xs, params)
}

/// Every rule over every input tuple of its arity (up to 3 for variadic
/// rules) and every parameter value that matters. Returns (cases, mismatches).
pub fn exhaustive() -> (usize, Vec<String>) {
    let mut cases = 0;
    let mut bad = Vec::new();
    let mut run = |rule: RuleId, xs: &[DimBound], params: &[u32]| {
        cases += 1;
        if !agrees(rule, xs, params) {
            bad.push(format!("{rule} {xs:?} {params:?}"));
        }
    };
    for rule in RuleId::ALL {
        let spec = rule.rule();
        let param_sets: Vec<Vec<u32>> = match (spec.params, rule) {
            (0, _) => vec![vec![]],
            (_, RuleId::RelHyp) => vec![vec![0], vec![1], vec![2]],
            _ => (0..=8).map(|p| vec![p]).collect(),
        };
        for n in 0..=3 {
            if !spec.inputs.admits(n) {
                continue;
            }
            for t in tuples(n) {
                for p in &param_sets {
                    run(rule, &t, p);
                }
            }
        }
    }
    (cases, bad)
}
