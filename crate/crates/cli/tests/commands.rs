mod common;

use std::fs;
use std::process::Command;

use common::{asdim, bound_json, consequence_kinds, fixtures, upper, verdict};

#[test]
fn e4_fixture() {
    let v = bound_json(&fixtures().join("e4.mfd"));
    assert_eq!(v["bound"]["lower"], 4);
    assert_eq!(upper(&v), "4");
    assert_eq!(verdict(&v), "Aspherical");
    assert_eq!(consequence_kinds(&v).len(), 4);
    assert_eq!(v["input"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn five_summand_sum_fixture() {
    let v = bound_json(&fixtures().join("fig1.mfd"));
    assert_eq!(upper(&v), "4");
    assert_eq!(verdict(&v), "NotAspherical");
}

#[test]
fn text_output_and_trace_flag() {
    let p = fixtures().join("decomp/h4_pair.mfd");
    let plain = asdim(&["bound", p.to_str().unwrap()]);
    assert_eq!(plain.code, 0);
    assert!(plain.stdout.contains("bound: 4..4"));
    assert!(!plain.stdout.contains("R-AMALGAM"));
    let traced = asdim(&["bound", p.to_str().unwrap(), "--trace"]);
    assert!(traced.stdout.contains("\tR-AMALGAM\t"));
}

#[test]
fn malformed_input_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.mfd");
    fs::write(&p, "dim 4;\npiece m E4\n").unwrap();
    let o = asdim(&["bound", p.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("bad.mfd:2:11:"), "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let missing = asdim(&["bound", dir.path().join("nope.mfd").to_str().unwrap()]);
    assert_eq!(missing.code, 2);
}

#[test]
fn process_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_asdim");
    let ok = Command::new(bin).args(["catalog", "--dim", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["catalog", "--dim", "5"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let neg = fixtures().join("invalid/unknown_geometry.mfd");
    let o = Command::new(bin).arg("bound").arg(neg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:9:"));
}

#[test]
fn catalog_rows() {
    for (dim, rows) in [(4, 19), (3, 8), (2, 3)] {
        let o = asdim(&["catalog", "--dim", &dim.to_string()]);
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout.lines().count(), rows + 1);
        let s = asdim(&["catalog", "--dim", &dim.to_string(), "--format", "structured"]);
        let v: serde_json::Value = serde_json::from_str(&s.stdout).unwrap();
        assert_eq!(v["geometries"].as_array().unwrap().len(), rows);
    }
    let o = asdim(&["catalog", "--dim", "5"]);
    assert_eq!(o.code, 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn cover_build_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    let o = asdim(&[
        "cover",
        "build",
        "--n",
        "2",
        "--d",
        "3",
        "--radius",
        "30",
        "--out",
        w.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let text = fs::read_to_string(&w).unwrap();
    assert!(text.starts_with("coarse-witness v1\n"));
    let o = asdim(&["cover", "verify", w.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("valid fixed-scale witness"));

    // stdout form is the same file
    let o = asdim(&["cover", "build", "--n", "2", "--d", "3", "--radius", "30"]);
    assert_eq!(o.stdout, text);
}

#[test]
fn corrupted_witness_lists_violations() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    let text = asdim(&["cover", "build", "--n", "1", "--d", "2", "--radius", "10"]).stdout;
    // merge the first subset of family 1 into family 0, next to its neighbours
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let i = lines.iter().position(|l| l.starts_with("1:0 ")).unwrap();
    let moved = lines.remove(i).replacen("1:0", "0:99", 1);
    let n0 = lines.iter().filter(|l| l.starts_with("0:")).count();
    let last0 = lines.iter().rposition(|l| l.starts_with("0:")).unwrap();
    lines.insert(last0 + 1, moved.replacen("0:99", &format!("0:{n0}"), 1));
    // and renumber family 1
    let mut k = 0;
    for l in lines.iter_mut().filter(|l| l.starts_with("1:")) {
        let rest = l.split_once(' ').unwrap().1.to_string();
        *l = format!("1:{k} {rest}");
        k += 1;
    }
    fs::write(&w, lines.join("\n") + "\n").unwrap();
    let o = asdim(&["cover", "verify", w.to_str().unwrap()]);
    assert_eq!(o.code, 1, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.contains("d(U,V) > D"), "{}", o.stdout);

    fs::write(&w, "coarse-witness v2\n").unwrap();
    assert_eq!(asdim(&["cover", "verify", w.to_str().unwrap()]).code, 2);
}

#[test]
fn cover_search() {
    let o = asdim(&[
        "cover",
        "search",
        "--group",
        "FreeAbelian(1)",
        "--radius",
        "4",
        "--d",
        "2",
        "--b",
        "3",
    ]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().next(), Some("k=2"));
    let o = asdim(&[
        "cover",
        "search",
        "--group",
        "FreeAbelian(1)",
        "--radius",
        "4",
        "--d",
        "1",
        "--b",
        "8",
    ]);
    assert_eq!(o.stdout.lines().next(), Some("k=1"));
    let o = asdim(&[
        "cover",
        "search",
        "--group",
        "FreeAbelian(2)",
        "--radius",
        "5",
        "--d",
        "1",
        "--b",
        "2",
    ]);
    assert_eq!(o.code, 2);
}
