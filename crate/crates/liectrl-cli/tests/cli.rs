use std::path::Path;
use std::process::{Command, Output};

use liectrl_cli::{parse_system_str, render_report, render_system, CliError, Format};
use liectrl_core::decide::{assess, make_model, AssessOptions, ModelFamily, ModelSpec, Stage};
use liectrl_core::fermion::{fermion_model, FermionModel};
use liectrl_core::pauli::parse_rational;

fn liectrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liectrl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_model(dir: &Path, family: &str, n: Option<usize>) -> String {
    let path = dir.join(format!("{family}-{}.json", n.unwrap_or(0)));
    let n_text = n.map(|n| n.to_string());
    let mut args = vec!["model", family, "-o", path.to_str().unwrap()];
    if let Some(t) = &n_text {
        args.extend(["--n", t.as_str()]);
    }
    let o = liectrl(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path.to_str().unwrap().to_string()
}

fn full() -> AssessOptions {
    AssessOptions { closure: Stage::Always, tensor_square: Stage::Always, ..AssessOptions::default() }
}

#[test]
fn model_systems_round_trip() {
    for family in ModelFamily::ALL {
        let spec = match family.fixed_size() {
            Some(_) => ModelSpec::fixed(family),
            None => ModelSpec::new(family, 5),
        };
        let sys = make_model(&spec).unwrap();
        assert_eq!(parse_system_str(&render_system(&sys)).unwrap(), sys, "{family}");
    }
    let t = parse_rational("-3/2").unwrap();
    for kind in ["quadratic", "quadratic-linear", "number-preserving", "diagonal", "hubbard", "hubbard-spin"] {
        let model: FermionModel = kind.parse().unwrap();
        let sys = fermion_model(model, 2, &t).unwrap();
        assert_eq!(parse_system_str(&render_system(&sys)).unwrap(), sys, "{kind}");
    }
}

#[test]
fn two_qubit_chain_file() {
    let text = r#"{
        "n": 2,
        "drift": [{"coeff": "1", "pauli": "XX"}, {"coeff": "1", "pauli": "YY"}],
        "controls": [[{"coeff": "1", "pauli": "XI"}], [{"coeff": "1", "pauli": "YI"}]],
        "label": "chain"
    }"#;
    let sys = parse_system_str(text).unwrap();
    assert_eq!(sys.n(), 2);
    assert_eq!(sys.controls.len(), 2);
    assert_eq!(sys.drift.len(), 2);
    assert_eq!(sys.label, "chain");
}

#[test]
fn uncontrolled_system_is_valid() {
    let sys = parse_system_str(r#"{"n": 2, "drift": [{"coeff": "2/3", "pauli": "ZZ"}], "controls": []}"#).unwrap();
    assert!(sys.controls.is_empty());
    assert_eq!(sys.generators().len(), 1);
}

#[test]
fn malformed_files_are_rejected_with_locations() {
    let cases = [
        (r#"{"n": 2, "drift": [{"coeff": "1/0", "pauli": "XX"}], "controls": []}"#, "drift[0]: coeff"),
        (r#"{"n": 2, "drift": [{"coeff": "1", "pauli": "XQ"}], "controls": []}"#, "drift[0]: pauli"),
        (
            r#"{"n": 2, "drift": [], "controls": [[{"coeff": "1", "pauli": "XXX"}]]}"#,
            "controls[0][0]: pauli \"XXX\" has length 3",
        ),
        (r#"{"n": 2, "drift": [], "controls": [], "extra": 1}"#, "unknown field"),
        ("{\n  \"n\": 2,\n  \"drift\": [\n}", "line 4"),
        (r#"{"n": 2, "drift": [], "controls": []}"#, "invalid input"),
    ];
    for (text, expected) in cases {
        let err = parse_system_str(text).unwrap_err();
        assert!(matches!(err, CliError::Input(_)), "{text}");
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains(expected), "{text}: {err}");
    }
}

#[test]
fn report_mentions_pure_state_control_for_symplectic_algebras() {
    let v = assess(&make_model(&ModelSpec::fixed(ModelFamily::Zzz)).unwrap(), &full()).unwrap();
    let text = render_report(&v, Format::Text);
    assert!(text.contains("invariant form: symplectic"));
    assert!(text.contains("pure-state controllable but not fully operator controllable"), "{text}");
    let json: serde_json::Value = serde_json::from_str(&render_report(&v, Format::Json)).unwrap();
    assert_eq!(json["identified"]["algebra"], "sp(4)");
}

#[test]
fn report_for_unitary_type_with_two_dimensional_tensor_square() {
    let v = assess(&make_model(&ModelSpec::new(ModelFamily::XxFirstTwoSites, 2)).unwrap(), &full()).unwrap();
    assert_eq!(v.tensor_square_dim, Some(2));
    let text = render_report(&v, Format::Text);
    assert!(text.contains("invariant form: none"));
    assert!(text.contains("verdict: fully controllable"), "{text}");
    let json: serde_json::Value = serde_json::from_str(&render_report(&v, Format::Json)).unwrap();
    assert_eq!(json["fully_controllable"], true);
    assert_eq!(json["tensor_square_commutant_dim"], 2);
}

#[test]
fn report_names_the_failed_connectivity_condition() {
    let v = assess(&make_model(&ModelSpec::fixed(ModelFamily::Ex1)).unwrap(), &full()).unwrap();
    let text = render_report(&v, Format::Text);
    assert!(text.contains("failed condition 2: the system is not connected"), "{text}");
    let json: serde_json::Value = serde_json::from_str(&render_report(&v, Format::Json)).unwrap();
    assert!(json["failed_conditions"].as_array().unwrap().contains(&serde_json::json!(2)));
}

#[test]
fn json_report_is_deterministic() {
    let sys = make_model(&ModelSpec::new(ModelFamily::XxOneEnd, 3)).unwrap();
    let a = render_report(&assess(&sys, &full()).unwrap(), Format::Json);
    let b = render_report(&assess(&sys, &full()).unwrap(), Format::Json);
    assert_eq!(a, b);
}

#[test]
fn assess_subcommand_writes_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_model(dir.path(), "counter2", None);
    let json_path = dir.path().join("verdict.json");
    let o = liectrl(&["assess", &file, "--closure", "--json", json_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("identified: so(7)"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(v["closure_dim"], 21);
    assert_eq!(v["form"]["kind"], "orthogonal");
}

#[test]
fn closure_and_symmetry_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_model(dir.path(), "xx-one-end", Some(3));
    let o = liectrl(&["closure", &file, "--basis"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("closure dim: 21"));
    assert_eq!(text.lines().count(), 5 + 21);

    let capped = stdout(&liectrl(&["closure", &file, "--cap", "8"]));
    assert!(capped.contains("closed: no"), "{capped}");

    let o = liectrl(&["symmetry", &file, "--tensor-square"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["centraliser_dim"], 0);
    assert_eq!(v["tensor_square"]["contains_swap"], true);

    let second = write_model(dir.path(), "xx-second-site", Some(3));
    let v: serde_json::Value = serde_json::from_slice(&liectrl(&["symmetry", &second]).stdout).unwrap();
    assert_eq!(v["irreducible"], false);
    assert_eq!(v["tensor_square_commutant_dim"], -1);
}

#[test]
fn seed_changes_nothing_but_the_spot_check_order() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_model(dir.path(), "xx-two-ends", Some(3));
    let a = stdout(&liectrl(&["--seed", "1", "closure", &file, "--verify", "40"]));
    let b = stdout(&liectrl(&["--seed", "99", "closure", &file, "--verify", "40"]));
    assert_eq!(a, b);
    assert!(a.contains("spot check: 40 pairs, 0 brackets outside the span"));
}

#[test]
fn form_subcommand_prints_and_writes_the_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_model(dir.path(), "xx-one-end", Some(2));
    let text = stdout(&liectrl(&["form", &file]));
    assert!(text.starts_with("kind: symplectic\nsign: -1\n"), "{text}");
    let out = dir.path().join("s.json");
    assert!(liectrl(&["form", &file, "-o", out.to_str().unwrap()]).status.success());
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(m["rows"], 4);
    assert_eq!(m["re"].as_array().unwrap().len(), 4);
}

#[test]
fn graph_subcommand_emits_dot() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_model(dir.path(), "xx-one-end", Some(4));
    let dot = stdout(&liectrl(&["graph", &file]));
    assert!(dot.starts_with("graph \"xx-one-end n=4\" {"));
    assert_eq!(dot.matches(" -- ").count(), 3);
    let zzz = write_model(dir.path(), "zzz", None);
    assert_eq!(liectrl(&["graph", &zzz]).status.code(), Some(2));
}

#[test]
fn catalog_subcommand_exports() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("c.dot");
    let csv_path = dir.path().join("c.csv");
    let o =
        liectrl(&["catalog", "--max-dim", "16", "--dot", dot.to_str().unwrap(), "--csv", csv_path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 68);
    let dot = std::fs::read_to_string(dot).unwrap();
    assert!(dot.contains("label=\"D(5) (0,0,0,1,0)/(0,0,0,0,1) [u]\""));
    let mut reader = csv::Reader::from_path(csv_path).unwrap();
    let headers: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(headers, ["dim", "family", "rank", "weight", "type", "parents"]);
    assert_eq!(reader.records().count(), 68);
    let capped = liectrl(&["catalog", "--max-dim", "20", "--lattice-cap", "10", "--csv", "unused.csv"]);
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn fermion_and_simulate_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let quad = dir.path().join("q.json");
    let lin = dir.path().join("l.json");
    assert!(liectrl(&["fermion", "quadratic", "--d", "3", "-o", quad.to_str().unwrap()]).status.success());
    assert!(liectrl(&["fermion", "quadratic-linear", "--d", "3", "-o", lin.to_str().unwrap()]).status.success());
    let o = liectrl(&["simulate", lin.to_str().unwrap(), quad.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("closure dim 21") && text.contains("closure dim 15"), "{text}");
    assert!(text.ends_with("relation: simulates\n"));

    let hub = stdout(&liectrl(&["fermion", "hubbard", "--d", "3", "--t", "1/2"]));
    assert!(hub.contains("\"coeff\": \"1/4\""), "{hub}");
    assert_eq!(liectrl(&["fermion", "bosonic", "--d", "2"]).status.code(), Some(2));
    let other = write_model(dir.path(), "xx-one-end", Some(2));
    assert_eq!(liectrl(&["simulate", lin.to_str().unwrap(), &other]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(liectrl(&["assess", "/nonexistent/system.json"]).status.code(), Some(2));
    assert_eq!(liectrl(&["model", "ising-antisym", "--n", "4"]).status.code(), Some(2));
    let big = write_model(dir.path(), "xx-one-end", Some(11));
    assert_eq!(liectrl(&["symmetry", &big]).status.code(), Some(3));
    assert_eq!(liectrl(&["assess", &big]).status.code(), Some(3));
    let mid = write_model(dir.path(), "xx-one-end", Some(7));
    assert_eq!(liectrl(&["assess", &mid, "--tensor-square"]).status.code(), Some(3));
    assert_eq!(liectrl(&["form", &mid]).status.code(), Some(3));
    assert_eq!(CliError::Inconsistent("residual".into()).exit_code(), 4);
}
