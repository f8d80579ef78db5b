use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn oil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oil")).args(args).env_remove("OIL_THREADS").output().unwrap()
}

fn oil_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oil")).args(args).env("OIL_THREADS", threads).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&oil(&["verify", "--claim", "lemma6", "--n", "50"])), 0);
    assert_eq!(code(&oil(&["verify", "--claim", "theorem2", "--n", "3", "--field", "fp:2"])), 0);
    assert_eq!(code(&oil(&["verify", "--claim", "nonsense", "--n", "3"])), 64);
    assert_eq!(code(&oil(&["verify", "--claim", "theorem1", "--n", "3"])), 64, "missing --e");
    assert_eq!(code(&oil(&["verify", "--claim", "theorem1", "--n", "3", "--e", "2", "--field", "fp:3"])), 64);
    assert_eq!(code(&oil(&["verify", "--claim", "lemma2", "--n", "3", "--field", "fp:4"])), 64);
    assert_eq!(code(&oil(&["lemma5", "--n", "6", "--field", "fp:2"])), 0);
    assert_eq!(code(&oil(&["--help"])), 0);
    assert_eq!(code(&oil(&[])), 64);
    assert_eq!(code(&oil_threads("zero", &["verify", "--claim", "lemma6", "--n", "5"])), 64);
}

#[test]
fn resource_limit_is_inconclusive() {
    let o = oil(&["verify", "--claim", "theorem2", "--n", "3", "--max-rows", "10"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn vanishing_with_single_orbit() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let r = report.to_str().unwrap();
    let ok = oil(&["verify", "--claim", "vanishing", "--n", "4", "--e", "2", "--lambda", "2,2", "--report", r]);
    assert_eq!(code(&ok), 0);
    let bad = oil(&["verify", "--claim", "vanishing", "--n", "4", "--e", "2", "--lambda", "3,1", "--report", r]);
    assert_eq!(code(&bad), 1);
    let v = read_json(&report);
    assert_eq!(v["status"], "refuted");
    assert_eq!(v["witness"]["lambda"], "3,1");
    assert_ne!(v["witness"]["value"], "0");
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for (k, threads) in ["1", "3", "1", "8"].iter().enumerate() {
        let path = dir.path().join(format!("r{k}.json"));
        let args = ["verify", "--claim", "vanishing", "--n", "4", "--e", "2", "--seed", "9", "--report", path.to_str().unwrap()];
        assert_eq!(code(&oil_threads(threads, &args)), 0);
        texts.push(fs::read(&path).unwrap());
    }
    assert!(texts.iter().all(|t| *t == texts[0]));
    let v: Value = serde_json::from_slice(&texts[0]).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 9);
    // keys come out sorted
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn report_to_stdout() {
    let o = oil(&["verify", "--claim", "lemma1", "--n", "3", "--report", "-"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["task"]["claim"], "lemma1");
    assert_eq!(v["items"].as_array().unwrap().len(), 9);
}

#[test]
fn gens_round_trip_through_member() {
    let dir = tempfile::tempdir().unwrap();
    let ideal = dir.path().join("t2.json");
    let minors = dir.path().join("m.json");
    let o = oil(&["gens", "--set", "theorem2", "--n", "3", "--out", ideal.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = read_json(&ideal);
    assert_eq!(v.as_array().unwrap().len(), 3 + 9);
    assert_eq!(v[0]["family"], "trace");
    let o = oil(&["gens", "--set", "minors", "--size", "2", "--n", "3", "--out", minors.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let report = dir.path().join("member.json");
    let o = oil(&[
        "member",
        "--ideal",
        ideal.to_str().unwrap(),
        "--poly",
        minors.to_str().unwrap(),
        "--witness",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&report);
    let items = v["items"].as_array().unwrap();
    assert_eq!(items.len(), 9);
    assert!(items.iter().all(|i| i["member"] == true && i["certificate"].is_array()));
}

#[test]
fn member_refutes_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let ideal = dir.path().join("i.txt");
    let poly = dir.path().join("p.txt");
    fs::write(&ideal, "# trace and determinant\nF[1,1] + F[2,2]\nF[1,1]*F[2,2] - F[1,2]*F[2,1]\n").unwrap();
    fs::write(&poly, "F[1,1]^2 + F[1,2]*F[2,1]\n").unwrap();
    let (i, p) = (ideal.to_str().unwrap(), poly.to_str().unwrap());
    // the nilpotent cone of 2x2 matrices contains the entries of Phi^2
    assert_eq!(code(&oil(&["member", "--ideal", i, "--poly", p])), 0);
    fs::write(&poly, "F[1,1]^2\n").unwrap();
    let report = dir.path().join("r.json");
    let o = oil(&["member", "--ideal", i, "--poly", p, "--field", "fp:5", "--report", report.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v = read_json(&report);
    assert_eq!(v["status"], "refuted");
    assert_eq!(v["witness"]["polynomial"], "F[1,1]^2");
    assert!(v["witness"]["rank_with_target"].as_u64() > v["witness"]["rank"].as_u64());
}

#[test]
fn member_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "F[1,1] + + \n").unwrap();
    let b = bad.to_str().unwrap();
    assert_eq!(code(&oil(&["member", "--ideal", b, "--poly", b])), 64);
    let missing = dir.path().join("missing.txt");
    assert_eq!(code(&oil(&["member", "--ideal", missing.to_str().unwrap(), "--poly", b])), 74);
}

#[test]
fn orbit_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("g.json");
    assert_eq!(code(&oil(&["gens", "--set", "theorem2", "--n", "3", "--field", "fp:3", "--out", gens.to_str().unwrap()])), 0);
    let g = gens.to_str().unwrap();
    let base = ["orbit", "--n", "3", "--field", "fp:3", "--samples", "100", "--seed", "42", "--gens", g];
    let mut args = base.to_vec();
    args.extend(["--lambda", "2,1"]);
    assert_eq!(code(&oil(&args)), 0);
    let mut args = base.to_vec();
    args.extend(["--lambda", "3"]);
    assert_eq!(code(&oil(&args)), 1);
    let mut args = base.to_vec();
    args.extend(["--lambda", "2,2"]);
    assert_eq!(code(&oil(&args)), 64);
}

#[test]
fn charp_explore_table() {
    let o = oil(&["verify", "--claim", "charp-explore", "--n", "3", "--field", "fp:2", "--report", "-"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    // tr(Phi^2) = T1^2 - 2 T2, so T2 escapes only in characteristic 2
    assert_eq!(v["summary"]["non_members"], serde_json::json!(["T2"]));
}
