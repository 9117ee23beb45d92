//! Plain-text witness files.
//!
//! ```text
//! coarse-witness v1
//! space cayley FreeAbelian(2) 30
//! D 3
//! B 20
//! 0:0 12,13,40
//! ```

use std::fmt::Write;

use super::cover::CoverWitness;
use super::space::{cayley_ball, GroupSpec};
use super::LabError;

const HEADER: &str = "coarse-witness v1";

pub fn write_witness(w: &CoverWitness) -> String {
    let mut out = format!("{HEADER}\nspace {}\nD {}\nB {}\n", w.space.label(), w.d, w.b);
    for (f, fam) in w.families.iter().enumerate() {
        for (i, subset) in fam.iter().enumerate() {
            let pts: Vec<String> = subset.iter().map(ToString::to_string).collect();
            writeln!(out, "{f}:{i} {}", pts.join(",")).unwrap();
        }
    }
    out
}

fn keyed<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
) -> Result<(usize, &'a str), LabError> {
    match lines.next() {
        Some((no, l)) => match l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')) {
            Some(rest) => Ok((no, rest)),
            None => Err(LabError::Witness { line: no, message: format!("expected `{key} ...`") }),
        },
        None => Err(LabError::Witness { line: 0, message: format!("missing `{key}` line") }),
    }
}

fn number(no: usize, s: &str) -> Result<u32, LabError> {
    s.trim()
        .parse()
        .map_err(|_| LabError::Witness { line: no, message: format!("bad number `{s}`") })
}

/// Parses a witness file, rebuilding the space from its label.
pub fn read_witness(text: &str, budget: usize) -> Result<CoverWitness, LabError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    match lines.next() {
        Some((_, HEADER)) => {}
        _ => return Err(LabError::Witness { line: 1, message: format!("expected `{HEADER}`") }),
    }
    let (no, label) = keyed(&mut lines, "space")?;
    let bad_label = || LabError::Witness {
        line: no,
        message: format!("space label `{label}` is not `cayley GROUP RADIUS`"),
    };
    let parts: Vec<&str> = label.split(' ').collect();
    let space = match parts[..] {
        ["cayley", spec, r] => {
            let spec: GroupSpec = spec.parse().map_err(|_| bad_label())?;
            cayley_ball(spec, number(no, r)?, budget)?
        }
        _ => return Err(bad_label()),
    };
    let (no, d) = keyed(&mut lines, "D")?;
    let d = number(no, d)?;
    let (no, b) = keyed(&mut lines, "B")?;
    let b = number(no, b)?;
    let mut families: Vec<Vec<Vec<usize>>> = Vec::new();
    for (no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| LabError::Witness { line: no, message: m.into() };
        let (key, pts) = line.split_once(' ').unwrap_or((line, ""));
        let (f, i) = key.split_once(':').ok_or_else(|| err("expected `family:index`"))?;
        let (f, i) = (number(no, f)? as usize, number(no, i)? as usize);
        if families.len() <= f {
            families.resize(f + 1, Vec::new());
        }
        if families[f].len() != i {
            return Err(err(&format!("subset {f}:{i} out of order")));
        }
        let subset = pts
            .split(',')
            .filter(|p| !p.is_empty())
            .map(|p| number(no, p).map(|x| x as usize))
            .collect::<Result<_, _>>()?;
        families[f].push(subset);
    }
    Ok(CoverWitness { space, d, b, families })
}
