//! The installed binary: exit codes, formats, atomic output.

use std::process::{Command, Output};

fn permstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permstat"))
        .args(args)
        .env_remove("PERMSTAT_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_emits_agreed_rows() {
    let o = permstat(&[
        "table",
        "--class",
        "flattened",
        "--stat",
        "rlm",
        "--n-max",
        "6",
        "--method",
        "all",
        "--format",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().nth(6), Some("0 0 1 15 25 10 1"));

    let o = permstat(&[
        "table",
        "--class",
        "increasing",
        "--stat",
        "peak",
        "--n-max",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row8: Vec<&str> = out.lines().filter(|l| l.starts_with("8,")).collect();
    assert_eq!(row8, ["8,0,128", "8,1,5286", "8,2,12988", "8,3,3078"]);
}

#[test]
fn popularity_rows() {
    let o = permstat(&[
        "popularity",
        "--class",
        "increasing",
        "--stat",
        "peak",
        "--format",
        "text",
    ]);
    let totals: Vec<String> = stdout(&o).lines().skip(3).map(String::from).collect();
    assert_eq!(totals, ["2", "16", "112", "763", "5399", "40496"]);
    let o = permstat(&[
        "popularity",
        "--class",
        "flattened",
        "--stat",
        "val",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["totals"][8], "1488");
    let o = permstat(&[
        "popularity",
        "--class",
        "increasing",
        "--stat",
        "peak",
        "--n-max",
        "1",
    ]);
    assert_eq!(stdout(&o), "n,total\n0,0\n1,0\n");
}

#[test]
fn output_is_byte_stable() {
    let a = permstat(&["verify", "--only", "counts"]);
    let b = permstat(&["verify", "--only", "counts"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_perturbed_exits_one() {
    let o = permstat(&[
        "verify",
        "--only",
        "agreement",
        "--perturb",
        "inc_rlm:3:2",
        "--format",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first failure: class=increasing stat=rlm n=3 k=2"));
}

#[test]
fn usage_errors() {
    assert_eq!(
        permstat(&["table", "--class", "increasing"]).status.code(),
        Some(2)
    );
    assert_eq!(
        permstat(&["verify", "--only", "everything"]).status.code(),
        Some(2)
    );
    assert_eq!(
        permstat(&["verify", "--perturb", "inc_val:1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        permstat(&["bijection", "--name", "phi", "--n", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(permstat(&["--help"]).status.code(), Some(0));
}

#[test]
fn slow_flag_raises_capacity() {
    let o = permstat(&[
        "--i-know-this-is-slow",
        "table",
        "--class",
        "identity",
        "--stat",
        "des",
        "--n-max",
        "10",
        "--method",
        "oracle",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("10,0,1\n"));
}

#[test]
fn output_file_is_written_atomically_under_the_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_permstat"))
        .args([
            "series", "--model", "A_alt", "--order", "8", "--output", "alt.txt",
        ])
        .env("PERMSTAT_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(dir.path().join("alt.txt")).unwrap();
    assert_eq!(
        written.lines().collect::<Vec<_>>(),
        ["1", "1", "1", "2", "5", "8", "33", "48", "279"]
    );
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 1);
}

#[test]
fn bijection_inverse_from_partition() {
    let o = permstat(&[
        "bijection",
        "--name",
        "flat-partition",
        "--input",
        "{1,2,3}",
    ]);
    assert_eq!(stdout(&o), "{1,2,3} -> 1342  roundtrip true\n");
    let o = permstat(&[
        "bijection",
        "--name",
        "gould",
        "--input",
        "{1,3}/{2}",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pairs"][0]["image"], "312");
    assert_eq!(
        permstat(&["bijection", "--name", "gould", "--input", "{1}/{2,3}"])
            .status
            .code(),
        Some(1)
    );
}
