use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("doctrina-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Runs the binary with a JSON report and returns the exit code and report.
fn run(args: &[&str], tag: &str) -> (i32, Option<Value>) {
    let json = scratch(&format!("{tag}.json"));
    let _ = std::fs::remove_file(&json);
    let out = Command::new(env!("CARGO_BIN_EXE_doctrina")).args(args).arg("--json").arg(&json).output().unwrap();
    let code = out.status.code().unwrap();
    let report = std::fs::read(&json).ok().map(|b| serde_json::from_slice(&b).unwrap());
    (code, report)
}

#[test]
fn validate_fix1_existential() {
    let (code, r) = run(&["validate", &fixture("fix1.json"), "--level", "existential"], "validate");
    assert_eq!(code, 0);
    let r = r.unwrap();
    assert_eq!(r["verdict"], true);
    assert_eq!(r["checks"][1]["check"], "doctrine.existential");
}

#[test]
fn mutated_equality_fails_validation() {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(fixture("fix1.json")).unwrap()).unwrap();
    v["delta"]["*"] = Value::String("bot".into());
    let path = scratch("fix1_bad_delta.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let (code, r) = run(&["validate", path.to_str().unwrap(), "--level", "elementary"], "bad_delta");
    assert_eq!(code, 1);
    assert!(!r.unwrap()["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn main_theorem_on_sub_diamond() {
    let (code, r) = run(&["thm", "main", &fixture("subdiamond.json"), "--sub", &fixture("tops.sel.json")], "thm_sub");
    assert_eq!(code, 0);
    let d = &r.unwrap()["details"];
    assert_eq!(d["cover"], "yes");
    assert_eq!(d["reg_equivalence"], "yes");
    assert_eq!(d["ex_equivalence"], "yes");
}

#[test]
fn main_theorem_on_flat_diamond_is_consistent() {
    let (code, r) = run(&["thm", "main", &fixture("flatdiamond.json"), "--sub", &fixture("flatdiamond.tops.sel.json")], "thm_flat");
    assert_eq!(code, 0);
    let r = r.unwrap();
    let d = &r["details"];
    assert_eq!(d["cover"], "no");
    assert_eq!(d["reg_equivalence"], "no");
    assert!(d["reports"]["reg"]["laws"].as_array().unwrap().iter().any(|l| l["law"] == "ess_surjective" && l["failed"].as_u64() > Some(0)));
}

#[test]
fn rule_of_choice_fails_on_flat_diamond_with_a_witness() {
    let (code, r) = run(&["check", "rc", &fixture("flatdiamond.json")], "rc_flat");
    assert_eq!(code, 1);
    let r = r.unwrap();
    let w = &r["witnesses"][0]["instance"];
    assert!(w["A"].is_string() && w["B"].is_string() && w["beta"].is_string(), "{w}");
    assert_ne!(w["A"], "0");
}

#[test]
fn failing_reports_carry_witnesses() {
    let cases: Vec<Vec<String>> = vec![
        vec!["check".into(), "rc".into(), fixture("flatdiamond.json")],
        vec!["check".into(), "epsilon".into(), fixture("flatdiamond.json")],
        vec!["check".into(), "cover".into(), fixture("flatdiamond.json")],
        vec!["check".into(), "splitting".into(), fixture("subdiamond.json")],
        vec!["logic".into(), "entail".into(), fixture("sigr.theory"), "-q".into(), "x:s | exists y:s. R(x,y) |- R(x,x)".into()],
    ];
    for (i, args) in cases.iter().enumerate() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, r) = run(&args, &format!("fail{i}"));
        assert_eq!(code, 1, "{args:?}");
        let r = r.unwrap();
        assert_eq!(r["verdict"], false);
        assert!(!r["witnesses"].as_array().unwrap().is_empty(), "{args:?}");
    }
}

#[test]
fn splitting_of_a_single_element() {
    let (code, r) = run(&["check", "splitting", &fixture("subdiamond.json"), "--element", "1:a"], "split_one");
    assert_eq!(code, 1);
    let w = &r.unwrap()["witnesses"][0]["instance"];
    assert_eq!(w["A"], "1");
    assert_eq!(w["alpha"], "a");
    let (code, _) = run(&["check", "splitting", &fixture("subdiamond.json"), "--element", "a:a"], "split_top");
    assert_eq!(code, 0);
}

#[test]
fn epsilon_on_the_localic_doctrine() {
    let (code, r) = run(&["check", "epsilon", &fixture("fix3.json"), "--bound", "1"], "eps_fix3");
    assert_eq!(code, 0);
    assert_eq!(r.unwrap()["flags"]["bound"], 1);
}

#[test]
fn reports_are_deterministic() {
    let args = ["thm", "main", &fixture("subdiamond.json"), "--sub", &fixture("tops.sel.json")];
    let path = scratch("det.json");
    let mut seen = Vec::new();
    for _ in 0..2 {
        let st = Command::new(env!("CARGO_BIN_EXE_doctrina")).args(args).arg("--json").arg(&path).status().unwrap();
        assert!(st.success());
        seen.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(seen[0], seen[1]);
}

#[test]
fn inputs_are_hashed() {
    let (_, r) = run(&["validate", &fixture("fix1.json")], "hash");
    let r = r.unwrap();
    let h = r["inputs"][fixture("fix1.json")].as_str().unwrap();
    assert_eq!(h.len(), 64);
}

#[test]
fn bad_inputs_exit_with_two() {
    let garbage = scratch("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let axioms = scratch("axioms.theory");
    std::fs::write(&axioms, "sort s\nrel R : s s\naxiom x:s | T |- R(x,x)\n").unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["validate".into(), "/nonexistent/file.json".into()],
        vec!["validate".into(), garbage.display().to_string()],
        vec!["validate".into(), fixture("fix1.json"), "--level".into(), "modal".into()],
        vec!["check".into(), "rc".into(), fixture("fix1.json"), "--element".into(), "nowhere:x".into()],
        vec!["check".into(), "splitting".into(), fixture("fix1.json"), "--element".into(), "nowhere:x".into()],
        vec!["logic".into(), "entail".into(), fixture("sigr.theory"), "-q".into(), "x:s | R(x,) |- T".into()],
        vec!["logic".into(), "entail".into(), axioms.display().to_string(), "-q".into(), "x:s | T |- R(x,x)".into()],
        vec!["frobnicate".into()],
    ];
    for args in &cases {
        let out = Command::new(env!("CARGO_BIN_EXE_doctrina")).args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn entailment_with_witness() {
    let (code, r) = run(&["logic", "entail", &fixture("sigr.theory"), "-q", "x:s | R(x,x) |- exists y:s. R(x,y)", "--witness"], "entail");
    assert_eq!(code, 0);
    let w = &r.unwrap()["details"]["witness"][0];
    assert_eq!(w["var"], "y");
    assert_eq!(w["term"], "x");
}

#[test]
fn materialized_doctrine_round_trips() {
    let out = scratch("sigr11.json");
    let horn = scratch("sigr11.horn.json");
    let (code, r) = run(
        &["logic", "doctrine", &fixture("sigr.theory"), "--materialize", "1", "1", "-o", out.to_str().unwrap(), "--horn", horn.to_str().unwrap()],
        "materialize",
    );
    assert_eq!(code, 0);
    assert_eq!(r.unwrap()["details"]["fiber_sizes"], serde_json::json!([5, 15]));
    let (code, _) = run(&["validate", out.to_str().unwrap(), "--level", "existential", "--sub", horn.to_str().unwrap()], "materialized_valid");
    assert_eq!(code, 0);
}

#[test]
fn completion_is_written_and_reread() {
    let out = scratch("tops_completion.json");
    let (code, _) = run(&["complete", &fixture("subdiamond.json"), "--sub", &fixture("tops.sel.json"), "-o", out.to_str().unwrap()], "complete");
    assert_eq!(code, 0);
    let (code, r) = run(&["check", "cover", out.to_str().unwrap()], "complete_cover");
    assert_eq!(code, 0);
    assert!(r.unwrap()["details"]["cover"]["select"].is_object());
}

#[test]
fn completions_of_predicates_and_relations() {
    let dot = scratch("reg.dot");
    let (code, r) = run(&["reg", &fixture("subdiamond.json"), "--emit-dot", dot.to_str().unwrap()], "reg");
    assert_eq!(code, 0);
    assert_eq!(r.unwrap()["details"]["objects"], 9);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    let (code, _) = run(&["ex", &fixture("fix1.json")], "ex");
    assert_eq!(code, 0);
    let (code, r) = run(&["pred", &fixture("subdiamond.json")], "pred");
    assert_eq!(code, 0);
    assert_eq!(r.unwrap()["details"]["objects"], 9);
}

#[test]
fn timing_is_opt_in() {
    let (_, r) = run(&["validate", &fixture("fix1.json")], "no_timing");
    assert!(r.unwrap().get("wall_ms").is_none());
    let (_, r) = run(&["validate", &fixture("fix1.json"), "--timing"], "timing");
    assert!(r.unwrap()["wall_ms"].is_u64());
}
