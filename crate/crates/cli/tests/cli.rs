use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use whynot_core::concept::parse_concept;
use whynot_core::relational::load_schema;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/trains")
}

fn whynot(args: &[&str], env: &[(&str, &str)]) -> Output {
    let f = fixtures();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_whynot"));
    let sub = args[0];
    cmd.arg(sub);
    let mut rest = &args[1..];
    if sub == "ontology" {
        cmd.arg(args[1]);
        rest = &args[2..];
    }
    if !rest.contains(&"--schema") {
        cmd.arg("--schema").arg(f.join("schema.json"));
    }
    if !rest.contains(&"--data") {
        cmd.arg("--data").arg(f.join("data"));
    }
    if (sub == "explain" || sub == "query") && !rest.contains(&"--query") {
        cmd.arg("--query").arg(f.join("query.txt"));
    }
    cmd.args(rest);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture_arg(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

#[test]
fn validate_and_query() {
    let out = whynot(&["validate"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("7 constraints satisfied"));

    let out = whynot(&["query", "--format", "json"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["answers"].as_array().unwrap().len(), 4);
}

#[test]
fn explains_with_a_finite_ontology() {
    let ont = fixture_arg("ontology.json");
    let out = whynot(&["explain", "--tuple", "Amsterdam,New York", "--ontology", &ont, "--all"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("⟨European-City, US-City⟩"), "{text}");
    assert!(text.contains("⟨City, East-Coast-City⟩"), "{text}");

    let out = whynot(&["explain", "--tuple", "Amsterdam,New York", "--ontology", &ont, "--card"], &[]);
    assert!(stdout(&out).contains("degree of generality: 9"));
}

#[test]
fn present_tuple_has_its_own_status() {
    let ont = fixture_arg("ontology.json");
    let out = whynot(&["explain", "--tuple", "Amsterdam,Rome", "--ontology", &ont], &[]);
    assert_eq!(out.status.code(), Some(8));
    assert!(stdout(&out).contains("is present"));
}

#[test]
fn derived_explanations_are_checked_and_round_trip() {
    let schema = load_schema(fixtures().join("schema.json")).unwrap();
    for fragment in ["selection-free", "full", "min", "intersection-free"] {
        let out = whynot(
            &[
                "explain",
                "--tuple",
                "Amsterdam,New York",
                "--derive",
                "instance",
                "--fragment",
                fragment,
                "--minimize",
                "--check",
                "--format",
                "json",
            ],
            &[],
        );
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        for e in v["explanations"].as_array().unwrap() {
            assert_eq!(e["most_general"], Value::Bool(true));
            for c in e["concepts"].as_array().unwrap() {
                let text = c.as_str().unwrap();
                let parsed = parse_concept(text, &schema).unwrap();
                assert_eq!(parsed.to_string(), text);
            }
        }
    }
}

#[test]
fn schema_derived_ontology_needs_a_supported_class() {
    let args = ["explain", "--tuple", "Amsterdam,New York", "--derive", "schema"];
    assert_eq!(whynot(&args, &[]).status.code(), Some(4));
    let mut views = args.to_vec();
    views.extend(["--constraints", "views", "--all", "--check"]);
    let out = whynot(&views, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn obda_explanations_and_missing_solutions() {
    let obda = fixture_arg("obda.json");
    let out = whynot(&["explain", "--tuple", "Amsterdam,New York", "--obda", &obda, "--check"], &[]);
    assert_eq!(out.status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixtures().join("obda.json")).unwrap();
    let mut spec: Value = serde_json::from_str(&text).unwrap();
    spec["axioms"]
        .as_array_mut()
        .unwrap()
        .push(serde_json::json!({"lhs": "Dutch-City", "rhs": "!EU-City"}));
    let path = dir.path().join("bad.json");
    fs::write(&path, spec.to_string()).unwrap();
    let out = whynot(
        &["explain", "--tuple", "Amsterdam,New York", "--obda", path.to_str().unwrap()],
        &[],
    );
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn error_statuses() {
    let ont = fixture_arg("ontology.json");
    let base = ["explain", "--tuple", "Amsterdam,New York", "--ontology", ont.as_str()];

    let mut bad_query = base.to_vec();
    bad_query.extend(["--query", "q(x) :- Nowhere(x)"]);
    assert_eq!(whynot(&bad_query, &[]).status.code(), Some(2));

    assert_eq!(whynot(&base, &[("WHYNOT_BUDGET", "3")]).status.code(), Some(7));

    let dir = tempfile::tempdir().unwrap();
    let single = r#"{"concepts": ["City"], "subsumptions": [],
        "ext": {"City": {"list": ["Amsterdam", "Berlin", "Rome", "New York", "San Francisco", "Santa Cruz", "Tokyo", "Kyoto"]}}}"#;
    let path = dir.path().join("single.json");
    fs::write(&path, single).unwrap();
    let out = whynot(&["explain", "--tuple", "Amsterdam,New York", "--ontology", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(6));

    // a train from an unknown city breaks an inclusion dependency
    let data = dir.path().join("data");
    fs::create_dir(&data).unwrap();
    for entry in fs::read_dir(fixtures().join("data")).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), data.join(entry.file_name())).unwrap();
    }
    let tc = data.join("Train-Connections.csv");
    let mut rows = fs::read_to_string(&tc).unwrap();
    rows.push_str("Atlantis,Rome\n");
    fs::write(&tc, rows).unwrap();
    let out = whynot(&["validate", "--data", data.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn precomputed_answers_are_verified() {
    let ont = fixture_arg("ontology.json");
    let dir = tempfile::tempdir().unwrap();
    let answers = dir.path().join("answers.csv");
    fs::write(&answers, "Amsterdam,Rome\nAmsterdam,Amsterdam\nBerlin,Berlin\nNew York,Santa Cruz\n").unwrap();
    let a = answers.to_str().unwrap();
    let args = ["explain", "--tuple", "Amsterdam,New York", "--ontology", ont.as_str(), "--answers", a, "--verify-ans"];
    assert_eq!(whynot(&args, &[]).status.code(), Some(0));

    fs::write(&answers, "Amsterdam,Rome\n").unwrap();
    assert_ne!(whynot(&args, &[]).status.code(), Some(0));
}

#[test]
fn ontology_show_lists_concepts() {
    let ont = fixture_arg("ontology.json");
    let out = whynot(&["ontology", "show", "--ontology", &ont, "--format", "json"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["concepts"].as_array().unwrap().len(), 6);
    assert!(v["subsumptions"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!(["Dutch-City", "City"])));

    let obda = fixture_arg("obda.json");
    let out = whynot(&["ontology", "show", "--obda", &obda], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("EU-City ⊑ City"));
}
