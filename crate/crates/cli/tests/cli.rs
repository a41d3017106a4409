use std::io::Write;
use std::process::{Command, Output, Stdio};

fn gcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcx")).args(args).output().expect("gcx runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table1_rows_up_to_eight_vertices() {
    let o = gcx(&["table1", "--max-vertices", "8"]);
    assert!(o.status.success());
    let rows: Vec<Vec<String>> =
        stdout(&o).lines().skip(1).map(|l| l.split('\t').take(4).map(String::from).collect()).collect();
    let want = [["6", "1", "1", "1"], ["7", "4", "4", "4"], ["8", "291", "291", "284"]];
    assert_eq!(rows, want.map(|r| r.map(String::from).to_vec()).to_vec());
}

#[test]
fn cohomology_at_three_loops() {
    let o = gcx(&["cohomology", "--loops", "3", "--variant", "full"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("# H^0(GC2, g=3) = 1"));
    let j = gcx(&["cohomology", "--loops", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["rows"][3]["dim_h"], 1);
}

#[test]
fn homotopy_sweep_passes() {
    let o = gcx(&["verify", "homotopy", "--max-loops", "5", "--samples", "100", "--seed", "7"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last(), Some("PASS 100/100"));
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let args = ["verify", "contraction-case", "--samples", "300", "--seed", "5"];
    let one = Command::new(env!("CARGO_BIN_EXE_gcx")).args(args).env("GCX_THREADS", "1").output().unwrap();
    let four = gcx(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(gcx(&args).stdout, one.stdout);
}

#[test]
fn identity_suites_pass_and_report_the_candidate() {
    let o = gcx(&["verify", "kwz", "--max-loops", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("# unweighted D"));
    for suite in ["zivkovic", "deltak", "d2", "theorem1"] {
        let o = gcx(&["verify", suite, "--max-loops", "5"]);
        assert!(o.status.success(), "{suite}");
        assert!(stdout(&o).lines().last().unwrap().starts_with("PASS"), "{suite}");
    }
}

#[test]
fn spqr_reads_stdin_and_writes_json_to_a_file() {
    let path = std::env::temp_dir().join(format!("gcx-spqr-{}.json", std::process::id()));
    let mut child = Command::new(env!("CARGO_BIN_EXE_gcx"))
        .args(["spqr", "--format", "json", "--out", path.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"EQ~o\n").unwrap();
    assert!(child.wait_with_output().unwrap().status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["graph6"], "EQ~o");
    assert_eq!(v["tree"]["nodes"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_input_exits_nonzero_with_usage() {
    for args in [
        &["frobnicate"][..],
        &["table1", "--bogus"],
        &["cohomology", "--loops", "40"],
        &["verify", "homotopy", "--max-loops", "2"],
        &["spqr", "not-graph6!"],
    ] {
        let o = gcx(args);
        assert!(!o.status.success(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}
