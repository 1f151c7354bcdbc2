use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jactors")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn jac_structure_reports() {
    let v = json(&["jac-structure", "--model", "X1(18)", "--prime", "7", "--deg", "2"]);
    assert_eq!(v["structure"], serde_json::json!([3, 651]));
    assert_eq!(v["consistent"], true);
    let v = json(&["jac-structure", "--model", "X1(13)", "--prime", "5", "--deg", "2"]);
    assert_eq!(v["structure"], serde_json::json!([19, 19]));
    assert_eq!(run(&["jac-structure", "--model", "X1(13)", "--prime", "2"]).status.code(), Some(2));
    assert_eq!(run(&["jac-structure", "--model", "X1(99)", "--prime", "5"]).status.code(), Some(2));
}

#[test]
fn model_files() {
    let dir = std::env::temp_dir().join(format!("jactors-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("e.json");
    std::fs::write(
        &path,
        r#"{"label": "11a3", "level": [1, 11], "genus": 1, "base_field": "Q", "coeffs": [0, -1, 1, 0, 0],
            "source": "test", "primes": [3, 5], "table": []}"#,
    )
    .unwrap();
    let v = json(&["jac-structure", "--model", path.to_str().unwrap(), "--prime", "3", "--deg", "1"]);
    assert_eq!(v["order"], 5);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn torsion_exit_codes() {
    let v = json(&["torsion", "--model", "X1(15)", "--field", "-3,5"]);
    assert_eq!(v["lower"], serde_json::json!([2, 8]));
    assert_eq!(v["closed"], true);
    let v = json(&["torsion", "--model", "X1(11)", "--field", "2,3"]);
    assert_eq!(v["lower"], serde_json::json!([5]));
    assert_eq!(run(&["torsion", "--model", "X1(4,8)", "--field", "Q"]).status.code(), Some(2));
    assert_eq!(run(&["torsion", "--model", "X1(11)", "--field", "4"]).status.code(), Some(2));
    assert_eq!(run(&["torsion", "--model", "X1(11)", "--bogus"]).status.code(), Some(2));
    // a single reduction prime cannot bound its own part
    assert_eq!(run(&["torsion", "--model", "X1(11)", "--primes", "3"]).status.code(), Some(2));
}

#[test]
fn classify_verdicts() {
    let v = json(&["classify", "--torsion", "14", "--field", "-7", "--ranks", "defaults"]);
    assert_eq!(v["summary"], "exactly 2");
    assert_eq!(v["exceptional_curves"].as_array().unwrap().len(), 2);
    let v = json(&["classify", "--torsion", "13", "--field", "-3,5", "--ranks", "defaults"]);
    assert_eq!(v["rank"], serde_json::Value::Null);
    assert_eq!(v["existence"], "no_conclusion");
    assert_eq!(run(&["classify", "--torsion", "6x6", "--field", "2"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--torsion", "17"]).status.code(), Some(2));
}

#[test]
fn anonymous_rank_files_are_refused() {
    let dir = std::env::temp_dir().join(format!("jactors-ranks-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let anon = dir.join("anon.json");
    std::fs::write(&anon, r#"[{"jacobian": "X1(11)", "twist": 2, "rank": 1, "source": ""}]"#).unwrap();
    assert_eq!(run(&["classify", "--torsion", "11", "--field", "2", "--ranks", anon.to_str().unwrap()]).status.code(), Some(2));
    let named = dir.join("named.json");
    std::fs::write(
        &named,
        r#"[{"jacobian": "X1(11)", "twist": 1, "rank": 0, "source": "a"}, {"jacobian": "X1(11)", "twist": 2, "rank": 1, "source": "b"}]"#,
    )
    .unwrap();
    let v = json(&["classify", "--torsion", "11", "--field", "2", "--ranks", named.to_str().unwrap()]);
    assert_eq!(v["existence"], "infinitely_many");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn formats_carry_the_same_data() {
    let args = ["classify", "--torsion", "15", "--field", "-3,5"];
    let j = run(&args).stdout;
    assert_eq!(j, run(&args).stdout, "identical invocations give identical bytes");
    let tsv = String::from_utf8(run(&[&args[..], &["--format", "tsv"]].concat()).stdout).unwrap();
    let text = String::from_utf8(run(&[&args[..], &["--format", "text"]].concat()).stdout).unwrap();
    assert!(tsv.lines().any(|l| l == "summary\texactly 2"));
    assert!(text.lines().any(|l| l == "summary: exactly 2"));
    assert_eq!(tsv.lines().count(), text.lines().count());
    assert_eq!(tsv.replace('\t', ": "), text);
}

#[test]
fn verify_groups() {
    let v = json(&["verify", "--only", "exceptional"]);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 4);
    let v = json(&["verify", "--only", "X1(16)"]);
    assert_eq!(v["failed"], 0);
    assert_eq!(run(&["verify"]).status.code(), Some(2));
}
