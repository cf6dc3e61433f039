use std::process::Command;

use hyperk3::report::Report;
use hyperk3::run;
use serde_json::Value;

fn ok(args: &[&str]) -> Report {
    let mut argv = vec!["hyperk3"];
    argv.extend(args);
    let out = run(argv);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.report.expect("report")
}

fn code(args: &[&str]) -> i32 {
    let mut argv = vec!["hyperk3"];
    argv.extend(args);
    run(argv).code
}

const CASE1_PHI: &str = "C(1)^3*C(3)*C(4)*C(6)*C(16)";
const CASE1_PSI: &str = "z^11*R(1)@z";

#[test]
fn catalog_rows() {
    let r = ok(&["catalog"]);
    assert_eq!(r.result["count"], 41);
    assert_eq!(r.result["unramified_count"], 15);
    assert_eq!(r.result["unramified"], "12,15,20,24,30,21,28,36,42,40,48,60,33,44,66");
    let rows = r.result["rows"].as_array().unwrap();
    assert_eq!(rows[0]["ct"], "w - 2");
    let tsv = r.to_tsv();
    assert_eq!(tsv.lines().count(), 42);
    assert_eq!(tsv.lines().nth(3).unwrap(), "3\t1\tfalse\tw + 1");
}

#[test]
fn certify_case_one() {
    let r = ok(&["certify", "--phi", CASE1_PHI, "--psi", CASE1_PSI]);
    let c = &r.result;
    assert_eq!(c["certified"], true);
    assert_eq!(c["side"], "B");
    assert_eq!(c["table"], "hyp-B");
    assert_eq!(c["case"], 1);
    assert_eq!(c["special_trace"]["label"], "y8");
    assert_eq!(c["rho"], 0);
    // the same pair written through trace polynomials
    let t = ok(&["certify", "--phi", "CT(1)^3*CT(3)*CT(4)*CT(6)*CT(16)", "--psi", "R(1)"]);
    assert_eq!(t.result, r.result);
    assert_eq!(t.inputs, r.inputs);
}

#[test]
fn build_rank_two() {
    let r = ok(&["build", "--phi", "z^2-1", "--psi", "z^2+z+1"]);
    assert_eq!(r.result["gram"], serde_json::json!([[2, 1], [1, 2]]));
    assert_eq!(r.result["disc"], 3);
    assert_eq!(r.result["unimodular"], false);
    assert_eq!(r.inputs["phi"], "z^2 - 1");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["catalog", "--no-such-flag"]), 2);
    assert_eq!(code(&["build", "--phi", "z^2-", "--psi", "1"]), 2);
    assert_eq!(code(&["catalog", "--refine", "abc"]), 2);
    assert_eq!(code(&["siegel", "--tau-from", "LT", "--q", "e7"]), 2);
    // palindromic phi is a precondition violation
    assert_eq!(code(&["build", "--phi", "z^2+1", "--psi", "z^2+z+1"]), 3);
    assert_eq!(code(&["siegel", "--tau-from", "LT", "--index", "9"]), 3);
    assert_eq!(code(&["picard", "--phi", "z^2-1", "--psi", "z^2+z+1"]), 3);
    // rank 2 never certifies: empty result, status 4 only when strict
    assert_eq!(code(&["certify", "--phi", "z^2-1", "--psi", "z^2+z+1"]), 0);
    assert_eq!(code(&["certify", "--strict", "--phi", "z^2-1", "--psi", "z^2+z+1"]), 4);
    assert_eq!(code(&["siegel", "--strict", "--tau-from", "w^2-2*w-7"]), 4);
    assert_eq!(code(&["siegel", "--tau-from", "w^2-2*w-7"]), 0);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_hyperk3");
    let st = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let o = st(&["catalog", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 42);
    let o = st(&["nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("Usage"));
    assert_eq!(st(&["certify", "--strict", "--phi", "z^2-1", "--psi", "z^2+z+1"]).status.code(), Some(4));
    assert_eq!(st(&["build", "--phi", "z^2+1", "--psi", "z^2+z+1"]).status.code(), Some(3));
}

#[test]
fn siegel_command() {
    let r = ok(&["siegel", "--tau-from", "R(5)", "--index", "9"]);
    assert_eq!(r.result["tau"]["label"], "y9");
    assert_eq!(r.result["outcome"]["verdict"], "H");
    let r = ok(&["siegel", "--tau-from", "LT", "--index", "4", "--q", "d10"]);
    assert_eq!(r.result["tau"]["label"], "x4");
    assert_eq!(r.result["outcome"]["verdict"], "H");
    let r = ok(&["siegel", "--tau-from", "w^2-2*w-7"]);
    assert_eq!(r.result["outcome"]["reason"], "q(tau) = 4 exactly");
    assert_eq!(r.result["outcome"]["verdict"], Value::Null);
}

#[test]
fn unit_and_recover() {
    let r = ok(&["unit", "--phi", CASE1_PHI, "--psi", CASE1_PSI]);
    let u = r.result["unit"].as_str().unwrap().to_string();
    assert_eq!(u, "-w^10 + 6*w^9 - 7*w^8 - 22*w^7 + 54*w^6 - 4*w^5 - 70*w^4 + 36*w^3 + 24*w^2 - 16*w");
    assert_eq!(r.result["verified"], true);
    assert_eq!(r.result["compatible_roots"].as_array().unwrap().len(), 1);
    let back = ok(&["recover", "--unit", &u, "--salem", "R(1)@z"]);
    let phi = ok(&["certify", "--phi", CASE1_PHI, "--psi", CASE1_PSI]).inputs["phi"].clone();
    assert_eq!(back.result["phi"], Value::from(phi));
    assert_eq!(back.result["factors"], "(z - 1)^6*(z^2 + z + 1)*(z^2 + 1)*(z^2 - z + 1)*(z^8 + 1)");
}

#[test]
fn bringback_worked_example() {
    let args = ["bringback", "--side", "A", "--phi", "LT*CT(3)*CT(4)*CT(6)*CT(8)", "--psi", "R(3)", "--tie", "highest"];
    let r = ok(&args);
    assert_eq!(r.result["dynkin"], "E6+E6");
    assert_eq!(r.result["roots"], 144);
    assert_eq!(r.result["word"], serde_json::json!([5, 23, 35, 41, 62, 57, 72]));
    assert_eq!(r.result["chi1_tilde"], "(z-1)^4*(z+1)^4*(z^2+1)^2");
    assert_eq!(r.result["trace"], -1);
    assert_eq!(r.result["preserves_positive_roots"], true);
    let p = ok(&["picard", "--side", "A", "--phi", "LT*CT(3)*CT(4)*CT(6)*CT(8)", "--psi", "R(3)"]);
    assert_eq!(p.result["rho"], 12);
    assert_eq!(p.result["simple_roots"].as_array().unwrap().len(), 12);
}

#[test]
fn json_round_trip_and_determinism() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["catalog"],
        vec!["build", "--phi", "z^2-1", "--psi", "z^2+z+1"],
        vec!["certify", "--phi", CASE1_PHI, "--psi", CASE1_PSI],
        vec!["siegel", "--tau-from", "LT", "--index", "2", "--q", "a2", "--refine", "1/1000000000000"],
        vec!["unit", "--phi", CASE1_PHI, "--psi", CASE1_PSI],
    ];
    for args in cases {
        let mut argv = vec!["hyperk3"];
        argv.extend(&args);
        argv.extend(["--format", "json"]);
        let a = run(argv.clone());
        let b = run(argv);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let parsed: Report = serde_json::from_str(&a.stdout).unwrap();
        let again = parsed.render(hyperk3::report::Format::Json);
        assert_eq!(again, a.stdout, "{args:?}");
        assert_eq!(Some(parsed), a.report);
    }
}

#[test]
fn refine_controls_digits() {
    let r = ok(&["siegel", "--tau-from", "LT", "--index", "1", "--refine", "0.0000000001"]);
    let d = r.result["tau"]["decimal"].as_str().unwrap();
    assert_eq!(d.split('.').nth(1).unwrap().len(), 10);
    assert!(d.starts_with("0.913731"));
}

#[test]
fn scan_is_thread_count_independent() {
    let args = ["scan", "--family", "lehmerB", "--psi", "L6", "--format", "tsv"];
    std::env::set_var("HYPERK3_THREADS", "1");
    let one = run(std::iter::once("hyperk3").chain(args));
    std::env::set_var("HYPERK3_THREADS", "3");
    let three = run(std::iter::once("hyperk3").chain(args));
    std::env::remove_var("HYPERK3_THREADS");
    assert_eq!(one.code, 0);
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(one.stdout.lines().count(), 4);
    assert!(one.stdout.lines().all(|l| l.starts_with('#') || l.starts_with("L6\t1\t")));
    assert_eq!(code(&["scan", "--family", "lehmerB", "--psi", "R3"]), 2);
}
