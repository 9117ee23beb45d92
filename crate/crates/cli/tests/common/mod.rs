#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

pub fn asdim(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("asdim").chain(args.iter().copied());
    let code = asdim_cli::run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

pub fn bound_json(path: &Path) -> serde_json::Value {
    let o = asdim(&["bound", path.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(o.code, 0, "{}: {}", path.display(), o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn walk(dir: &Path, out: &mut Vec<PathBuf>) {
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            walk(&p, out);
        } else if p.extension().is_some_and(|x| x == "mfd") {
            out.push(p);
        }
    }
}

/// Fixture files under `fixtures/<sub>`, sorted; `""` for all of them.
pub fn fixture_files(sub: &str) -> Vec<PathBuf> {
    let mut out = Vec::new();
    walk(&fixtures().join(sub), &mut out);
    out.sort();
    out
}

pub fn is_invalid(p: &Path) -> bool {
    p.components().any(|c| c.as_os_str() == "invalid")
}

/// Relative name of a fixture, e.g. `dim4/E4.mfd`.
pub fn rel(p: &Path) -> String {
    p.strip_prefix(fixtures()).unwrap().to_string_lossy().replace('\\', "/")
}

pub fn upper(v: &serde_json::Value) -> String {
    v["bound"]["upper"].as_str().unwrap().to_string()
}

pub fn lower(v: &serde_json::Value) -> u64 {
    v["bound"]["lower"].as_u64().unwrap()
}

pub fn upper_at_most(v: &serde_json::Value, cap: u64) -> bool {
    upper(v).parse::<u64>().is_ok_and(|u| u <= cap)
}

pub fn verdict(v: &serde_json::Value) -> String {
    v["verdict"]["kind"].as_str().unwrap().to_string()
}

pub fn consequence_kinds(v: &serde_json::Value) -> Vec<String> {
    v["consequences"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["kind"].as_str().unwrap().to_string())
        .collect()
}
