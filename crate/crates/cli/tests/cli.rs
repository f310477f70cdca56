//! The `ptight` binary end to end, plus library-level checks of its helpers.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use ptight::engine::{QueryAnswer, Status};
use ptight::rational::ratio;
use ptight::rules::ProbInterval;
use ptight_cli::parse_interval;

fn party() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/party.kb")
}

fn ptight(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_ptight")).args(args).env_remove("PTIGHT_ATOM_LIMIT").output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn temp_kb(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ptight-{}-{name}.kb", std::process::id()));
    std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
    path
}

#[test]
fn check_party() {
    let (out, _, code) = ptight(&["check", party().to_str().unwrap()]);
    assert_eq!(out, "g-coherent: yes; p-consistent: yes\n");
    assert_eq!(code, 0);
}

#[test]
fn check_contradiction_exits_one() {
    let kb = temp_kb("contra", "b given a : [1, 1]\n!b given a : [1, 1]\n");
    let (out, _, code) = ptight(&["check", kb.to_str().unwrap()]);
    assert_eq!(out, "g-coherent: no; p-consistent: no\n");
    assert_eq!(code, 1);
}

#[test]
fn malformed_line_exits_two_with_position() {
    let kb = temp_kb("bad", "b given a : [0.2, 0.4]\nb given : [0, 1]\n");
    let (_, err, code) = ptight(&["check", kb.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2, column 9"), "{err}");
}

#[test]
fn atom_limit_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ptight")).args(["check", party().to_str().unwrap()]).env("PTIGHT_ATOM_LIMIT", "3").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceed the limit of 3"));
    let out = Command::new(env!("CARGO_BIN_EXE_ptight")).args(["check", party().to_str().unwrap()]).env("PTIGHT_ATOM_LIMIT", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn query_with_trace_and_tight() {
    let (out, _, code) = ptight(&["query", party().to_str().unwrap(), "!noisy given linda", "--tight", "--trace"]);
    assert_eq!(code, 0);
    assert!(out.contains("chained: [18/25, 1] ≈ [0.72, 1]  (ε 0.28)"), "{out}");
    assert!(out.contains("derivation: Cut(3, 2)"));
    assert!(out.contains("exact"));
    assert!(out.contains("└─ steve given linda  [4/5, 1] ≈ [0.8, 1]  (asserted #2)"), "{out}");
}

#[test]
fn query_of_an_assertion_returns_it_verbatim() {
    let (out, _, _) = ptight(&["query", party().to_str().unwrap(), "steve given linda"]);
    assert!(out.contains("chained: [4/5, 1] ≈ [0.8, 1]"));
    assert!(out.contains("derivation: 2\n"));
}

#[test]
fn claimed_eps_is_flagged() {
    let (out, _, _) = ptight(&["query", party().to_str().unwrap(), "great & !noisy given linda & steve", "--claim-eps", "0.0725"]);
    assert!(out.contains("(ε 0.1625)"), "{out}");
    assert!(out.contains("claimed ε 0.0725 is inconsistent with the derived ε 0.1625"), "{out}");
    let (out, _, _) = ptight(&["query", party().to_str().unwrap(), "great & !noisy given linda & steve", "--claim-eps", "0.2"]);
    assert!(out.contains("is consistent"), "{out}");
}

#[test]
fn replayed_plan_and_tight_gap() {
    let (out, _, code) = ptight(&["query", party().to_str().unwrap(), "!noisy given linda | steve", "--via", "Or(Cut(3,4), Cut(3,2))", "--tight"]);
    assert_eq!(code, 0);
    assert!(out.contains("[342/533, 1] ≈ [0.641651, 1]  (ε 0.358349)"), "{out}");
    assert!(out.contains("derivation: Or(Cut(3, 4), Cut(3, 2))"));
    assert!(out.contains("[38/55, 1]"));
    let (_, err, code) = ptight(&["query", party().to_str().unwrap(), "!noisy given linda", "--via", "Cut(2, 3)"]);
    assert_eq!(code, 2);
    assert!(err.contains("Cut does not apply"), "{err}");
}

#[test]
fn json_answer_round_trips() {
    let (out, _, code) = ptight(&["query", party().to_str().unwrap(), "!noisy given steve", "--json", "--tight"]);
    assert_eq!(code, 0);
    let answer: QueryAnswer = serde_json::from_str(&out).unwrap();
    assert_eq!(answer.status, Status::Exact);
    assert_eq!(answer.chained, ProbInterval::new(ratio(171, 200), ratio(1, 1)).unwrap());
    assert_eq!(answer.trace.as_ref().unwrap().shape(), "Cut(3, 4)");
    assert_eq!(serde_json::to_string_pretty(&answer).unwrap() + "\n", out);
}

#[test]
fn query_errors() {
    let p = party();
    let (_, err, code) = ptight(&["query", p.to_str().unwrap(), "wine given linda"]);
    assert_eq!(code, 2);
    assert!(err.contains("wine"), "{err}");
    let (_, _, code) = ptight(&["query", p.to_str().unwrap(), "linda given"]);
    assert_eq!(code, 2);
    let (_, _, code) = ptight(&["query", "/nonexistent.kb", "a given b"]);
    assert_eq!(code, 2);
    let kb = temp_kb("disjoint", "b given a : [0.1, 0.2]\nb given !!a : [0.5, 0.6]\n");
    let (_, err, code) = ptight(&["query", kb.to_str().unwrap(), "b given a"]);
    assert_eq!(code, 1);
    assert!(err.contains("disjoint"), "{err}");
}

#[test]
fn propagate_examples() {
    let (out, _, _) = ptight(&["propagate", "cut", "[0.9,1]", "[0.8,1]"]);
    assert!(out.contains("= [18/25, 1] ≈ [0.72, 1]"), "{out}");
    let (out, _, _) = ptight(&["propagate", "or", "[0.855, 1]", "[0.72, 1]"]);
    assert!(out.contains("[342/533, 1] ≈ [0.641651, 1]"), "{out}");
    let (out, _, _) = ptight(&["propagate", "and", "[1,1]", "[1,1]"]);
    assert!(out.contains("= [1, 1]"));
    let (out, _, _) = ptight(&["propagate", "dwrm", "0.9", "[0, 0.5]"]);
    assert!(out.contains("= [4/5, 1]"), "{out}");
    let (out, _, _) = ptight(&["propagate", "rw", "[0.8,1]", "--from", "b", "--to", "b | c"]);
    assert!(out.contains("= [4/5, 1]"));
    let (_, err, code) = ptight(&["propagate", "rw", "[0.8,1]", "--from", "b | c", "--to", "b"]);
    assert_eq!(code, 2, "{err}");
    let (_, _, code) = ptight(&["propagate", "cut", "[0.9,1]"]);
    assert_eq!(code, 2);
    let (_, _, code) = ptight(&["propagate", "cut", "[0.9,1.5]", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn degrade_csv() {
    let (out, _, code) = ptight(&["degrade", "or,cut", "0.145", "0.28"]);
    assert_eq!(code, 0);
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["rule", "step", "eps3_exact", "eps3_naive", "difference"]);
    let rows: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(&rows[0], vec!["or", "1", "0.358349", "0.425", "0.066651"]);
    let (out, _, _) = ptight(&["degrade", "cut", "0.1", "0.05"]);
    assert!(out.contains("cut,1,0.145,0.15,0.005"), "{out}");
    let (out, _, _) = ptight(&["degrade", "and", "0", "0", "--steps", "3"]);
    assert!(out.ends_with("and,3,0,0,0\n"), "{out}");
    let (_, _, code) = ptight(&["degrade", "dwrm", "0.1", "0.1"]);
    assert_eq!(code, 2);
    let (_, _, code) = ptight(&["degrade", "or", "1", "0.1"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_examples() {
    let (out, _, code) = ptight(&["verify", "and", "0.9", "0.8", "--grid", "100"]);
    assert_eq!(code, 0);
    assert!(out.contains("sound: yes (0 violations)"), "{out}");
    let (out, _, _) = ptight(&["verify", "cm", "0.95", "0.8", "--grid", "100"]);
    assert!(out.contains("envelope:  [15/16, 1] ≈ [0.9375, 1]"), "{out}");
    let (out, _, _) = ptight(&["verify", "or", "0", "0", "--sequential"]);
    assert!(out.contains("envelope:  [0, 0]"));
    let (out, _, _) = ptight(&["verify", "cut", "[0.9,1]", "[0.8,1]", "--grid", "10", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sound"], true);
    assert_eq!(v["formula_envelope"]["lo"], "18/25");
    let (_, _, code) = ptight(&["verify", "and", "0.9", "0.8", "--grid", "1"]);
    assert_eq!(code, 2);
}

proptest! {
    #[test]
    fn interval_literals_round_trip(a in 0i64..=1000, b in 0i64..=1000, d in 1i64..=1000) {
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assume!(hi <= d);
        let text = format!("[{lo}/{d}, {hi}/{d}]");
        prop_assert_eq!(parse_interval(&text).unwrap(), ProbInterval::new(ratio(lo, d), ratio(hi, d)).unwrap());
    }
}
