//! End-to-end runs of the `christol` binary against golden outputs.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the files under `tests/golden`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn christol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_christol"))
        .current_dir(crate_dir().join("tests/data"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn golden(name: &str, args: &[&str]) {
    let out = christol(args);
    assert!(
        out.status.success(),
        "{name}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = crate_dir().join("tests/golden").join(name);
    let got = String::from_utf8(out.stdout).unwrap();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &got).unwrap();
        return;
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(got, want, "{name} differs from {}", path.display());
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = christol(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn fails_with(args: &[&str], code: i32) -> serde_json::Value {
    let out = christol(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn demo_thue_morse() {
    golden("demo-thue-morse.json", &["demo-thue-morse"]);
    let v = json(&["demo-thue-morse", "--count", "16"]);
    assert_eq!(v["text"], "f(0..15) = 0110100110010110");
}

#[test]
fn run_and_census() {
    golden(
        "run-tm.json",
        &["run", "--dfao", "tm.json", "--word", "1101"],
    );
    golden(
        "census-powers.txt",
        &[
            "census",
            "--dfao",
            "powers-of-two.json",
            "--max",
            "8",
            "--format",
            "table",
        ],
    );
    let v = json(&["census", "--dfao", "powers-of-two.json", "--max", "0"]);
    assert_eq!(v["census"][0]["count"], "0");
    let v = json(&["census", "--dfao", "tm.json", "--max", "0"]);
    assert_eq!(v["census"][0]["count"], "0");
}

#[test]
fn timing_is_opt_in() {
    let v = json(&["demo-thue-morse"]);
    assert!(v.get("timing").is_none());
    let v = json(&["demo-thue-morse", "--timing"]);
    assert!(v["timing"]["elapsed_ms"].is_number());
}

#[test]
fn classify_sparse_equation() {
    golden(
        "classify-x2-x-t.json",
        &[
            "classify",
            "--equation",
            "x2+x+t.json",
            "--seed",
            "zero.json",
        ],
    );
    let v = json(&[
        "classify",
        "--equation",
        "x2+x+t.json",
        "--seed",
        "zero.json",
    ]);
    assert_eq!(v["verdict"], "sparse");
    assert_eq!(v["components"][0]["form"]["text"], "1(0)*");
}

#[test]
fn classify_non_sparse_and_batch() {
    golden("classify-tm.json", &["classify", "--dfao", "tm.json"]);
    let one = json(&[
        "classify",
        "--dfao",
        "tm.json",
        "--dfao",
        "mixed-f4.json",
        "--jobs",
        "1",
    ]);
    let two = json(&[
        "classify",
        "--dfao",
        "tm.json",
        "--dfao",
        "mixed-f4.json",
        "--jobs",
        "2",
    ]);
    assert_eq!(one, two);
    assert_eq!(one["results"][0]["verdict"], "non-sparse");
    assert_eq!(one["results"][1]["verdict"], "sparse");
}

#[test]
fn decompose() {
    golden(
        "decompose-powers.json",
        &["decompose", "--dfao", "powers-of-two.json"],
    );
}

#[test]
fn spset_operations() {
    golden(
        "spset-show.json",
        &["spset", "show", "--a", "set-powers.json"],
    );
    golden(
        "spset-union.json",
        &[
            "spset",
            "union",
            "--a",
            "set-powers.json",
            "--b",
            "set-mersenne.json",
        ],
    );
    golden(
        "spset-sum.json",
        &[
            "spset",
            "sum",
            "--a",
            "set-powers.json",
            "--b",
            "set-powers.json",
        ],
    );
    golden(
        "spset-split.json",
        &["spset", "split", "--a", "set-powers.json", "--at", "4"],
    );
    golden(
        "spset-spread-up.json",
        &[
            "spset",
            "spread-up",
            "--a",
            "set-one-three.json",
            "--at",
            "0",
        ],
    );
    golden(
        "spset-spread-down.json",
        &[
            "spset",
            "spread-down",
            "--a",
            "set-one-three.json",
            "--at",
            "4",
        ],
    );
}

#[test]
fn artin_schreier_and_gap_sums() {
    golden("as-solve-t.json", &["as-solve", "--series", "t.json"]);
    golden(
        "as-solve-t-inverse.json",
        &["as-solve", "--series", "t-inverse.json"],
    );
    golden(
        "gap-sum-t.json",
        &["gap-sum", "--series", "t.json", "--d", "2"],
    );
    golden(
        "gap-sum-t-inverse.json",
        &["gap-sum", "--series", "t-inverse.json", "--d", "1"],
    );
    let v = json(&["as-solve", "--series", "t.json"]);
    assert_eq!(v["solutions"].as_array().unwrap().len(), 2);
}

#[test]
fn certificates_round_trip() {
    let dir = std::env::temp_dir().join(format!("christol-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    golden(
        "certify-form.json",
        &["certify", "--form", "10(0)*01.(10)*1", "--p", "2"],
    );

    let cert = christol(&["certify", "--dfao", "mixed-f4.json"]);
    assert!(cert.status.success());
    let path = dir.join("cert.json");
    fs::write(&path, &cert.stdout).unwrap();
    let p = path.to_str().unwrap();

    let ok = christol(&[
        "verify-cert",
        "--cert",
        p,
        "--dfao",
        "mixed-f4.json",
        "--precision",
        "256",
    ]);
    assert!(ok.status.success());
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["matches"], true);

    // same field, different series
    let powers = christol(&["certify", "--form", "1(0)*", "--p", "2"]);
    let path2 = dir.join("powers.json");
    fs::write(&path2, &powers.stdout).unwrap();
    let bad = christol(&[
        "verify-cert",
        "--cert",
        path2.to_str().unwrap(),
        "--dfao",
        "tm.json",
        "--precision",
        "64",
    ]);
    assert_eq!(bad.status.code(), Some(4));
    let v: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["matches"], false);
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn quasi_eval() {
    golden(
        "quasi-eval.json",
        &[
            "quasi-eval",
            "--dfao",
            "quasi-powers.json",
            "--alpha",
            "4",
            "--alpha",
            "3",
            "--alpha",
            "1/2",
        ],
    );
}

#[test]
fn table_format() {
    golden(
        "decompose-powers.txt",
        &[
            "decompose",
            "--dfao",
            "powers-of-two.json",
            "--format",
            "table",
        ],
    );
}

#[test]
fn output_is_deterministic() {
    let args = [
        "classify",
        "--equation",
        "x2+x+t.json",
        "--seed",
        "zero.json",
    ];
    assert_eq!(christol(&args).stdout, christol(&args).stdout);
}

#[test]
fn malformed_input_exits_2() {
    let dir = std::env::temp_dir().join(format!("christol-bad-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    fs::write(&bad, "{\"alphabet\": [0, 1]").unwrap();
    let e = fails_with(&["run", "--dfao", bad.to_str().unwrap(), "--word", "1"], 2);
    assert_eq!(e["error"]["kind"], "input");
    let e = fails_with(&["run", "--dfao", "missing.json", "--word", "1"], 2);
    assert_eq!(e["error"]["kind"], "input");
    let e = fails_with(&["gap-sum", "--series", "one-plus-t.json", "--d", "2"], 2);
    assert_eq!(e["error"]["kind"], "input");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn cap_exits_3() {
    let e = fails_with(
        &[
            "classify",
            "--equation",
            "x2+x+t.json",
            "--seed",
            "zero.json",
            "--state-cap",
            "1",
        ],
        3,
    );
    assert_eq!(e["error"]["kind"], "cap_exceeded");
}

#[test]
fn data_files_exist() {
    for f in [
        "tm.json",
        "powers-of-two.json",
        "mixed-f4.json",
        "quasi-powers.json",
    ] {
        assert!(Path::new(&crate_dir().join("tests/data").join(f)).exists());
    }
}
