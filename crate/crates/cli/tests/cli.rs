use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dbrank"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn dbrank");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(args: &[&str], stdin: &str) -> String {
    let out = run(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn check_exit_codes() {
    let ok = run(&["check", "--q", "3", "--ell", "2", "--perm", "00,01,10,20,02,11,12,21,22"], "");
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("status=feasible"));
    let bad = run(&["check", "--q", "3", "--ell", "2", "--perm", "00,01,02,10,11,12,20,21,22"], "");
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stdout).starts_with("status=infeasible"));
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(run(&["nonsense"], "").status.code(), Some(1));
    assert_eq!(run(&["--help"], "").status.code(), Some(0));
    let out = run(&["check", "--q", "3", "--ell", "2"], "00,01\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error["));
}

#[test]
fn profile_of_string() {
    let out = stdout(&["profile", "--q", "3", "--ell", "2"], "0120\n");
    assert_eq!(out, "q=3 ell=2\n00 1\n01 1\n02 0\n10 0\n11 0\n12 1\n20 1\n21 0\n22 0\n");
}

#[test]
fn encode_decode_pipeline() {
    let info = stdout(&["info", "random", "b", "--q", "3", "--ell", "3", "--seed", "9"], "");
    let perm = stdout(&["encode", "b", "--output", "perm"], &info);
    assert_eq!(stdout(&["decode", "b"], &perm), info);
    let vector = stdout(&["encode", "b"], &info);
    let verdict = stdout(&["check"], &vector);
    assert!(verdict.starts_with("status=feasible"));
    // The witness printed by check realizes the same order with small counts.
    let witness = verdict.split_once('\n').unwrap().1;
    let s = stdout(&["synthesize"], &verdict);
    assert_eq!(stdout(&["profile", "--q", "3", "--ell", "3"], &s), witness);
    let s = stdout(&["synthesize"], &vector);
    assert_eq!(stdout(&["profile", "--q", "3", "--ell", "3"], &s), vector);
}

#[test]
fn census_and_bounds() {
    assert!(stdout(&["census", "--q", "3", "--ell", "2"], "").contains("30240"));
    assert_eq!(stdout(&["bounds", "--q", "3", "--ell", "3", "--rate"], ""), "rate=0.0805\n");
    assert_eq!(stdout(&["bounds", "--q", "3", "--ell", "2", "--lower"], ""), "lower=30240\n");
}

#[test]
fn info_index_round_trip() {
    let info = stdout(&["info", "random", "a", "--q", "4", "--seed", "3"], "");
    let idx = stdout(&["info", "index", "a"], &info);
    assert_eq!(stdout(&["info", "from-index", "a", "--q", "4", idx.trim()], ""), info);
}

#[test]
fn distances() {
    assert_eq!(stdout(&["distance", "0123", "3210"], ""), "6\n");
    assert_eq!(stdout(&["distance", "0011", "1100"], ""), "4\n");
}

#[test]
fn simulation_is_deterministic() {
    let v = "q=3 ell=2\n00 6\n01 12\n02 30\n10 18\n11 36\n12 42\n20 24\n21 48\n22 54\n";
    let args = ["simulate", "--noise", "additive:2", "--trials", "100", "--seed", "4"];
    let a = stdout(&args, v);
    assert_eq!(a, "noise\ttrials\tsuccesses\tties\trank_errors\nadditive:2\t100\t100\t0\t0\n");
    let mut more = args.to_vec();
    more.extend(["--jobs", "3"]);
    assert_eq!(stdout(&more, v), a);
}
