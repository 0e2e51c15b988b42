use assert_cmd::Command;

fn merogerm() -> Command {
    Command::cargo_bin("merogerm").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = merogerm().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

#[test]
fn golden_outputs() {
    let cases: [(&[&str], &str); 4] = [
        (&["resolve", "(y^3+x^5)/x"], include_str!("golden/resolve_g1.txt")),
        (&["resolve", "(y^3+x^5)/y"], include_str!("golden/resolve_g2.txt")),
        (&["jumping", "(y^3+x^5)/x", "--lambda-max", "2"], include_str!("golden/jumping_g1.txt")),
        (
            &["jumping", "(y^3+x^5)/y", "--lambda-max", "3", "--format", "json"],
            include_str!("golden/jumping_g2.json"),
        ),
    ];
    for (args, expected) in cases {
        assert_eq!(stdout_of(args), expected, "{args:?}");
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["invariants", "(y^2+x^4)/(x^2+y^4)", "--format", "json"];
    assert_eq!(stdout_of(&args), stdout_of(&args));
}

#[test]
fn smooth_germ_has_one_row() {
    let out = stdout_of(&["resolve", "x"]);
    assert!(out.contains("divisors: 1  blow-ups: 0"));
    assert!(out.contains("F1"));
}

#[test]
fn saved_resolution_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g1.json");
    let p = path.to_str().unwrap();
    merogerm()
        .args(["resolve", "(y^3+x^5)/x", "--format", "json", "--out", p])
        .assert()
        .success();
    let saved = std::fs::read_to_string(&path).unwrap();
    let again = stdout_of(&["resolve", "--resolution", p, "--format", "json"]);
    assert_eq!(saved, again);
    let direct = stdout_of(&["jumping", "(y^3+x^5)/x", "--lambda-max", "2"]);
    let loaded = stdout_of(&["jumping", "--resolution", p, "--lambda-max", "2"]);
    assert_eq!(direct, loaded);
}

#[test]
fn functional_equations() {
    merogerm()
        .args(["verify-feq", "--f", "x", "--g", "1", "--op", "dx", "--b", "s+1"])
        .assert()
        .code(0);
    merogerm()
        .args(["verify-feq", "--f", "x^2", "--g", "y^3", "--op", "1/4*dx^2", "--b", "(s+1)*(s+1/2)", "--alpha", "1/2"])
        .assert()
        .code(0);
    merogerm()
        .args(["verify-feq", "--f", "x", "--g", "y", "--op", "dx", "--b", "s+2"])
        .assert()
        .code(1)
        .stdout(predicates::str::contains("holds: no"));
    merogerm()
        .args(["verify-feq", "--f", "x", "--g", "y", "--op", "y*dx", "--b", "s+1", "--mode", "quotient"])
        .assert()
        .code(0);
}

#[test]
fn empty_candidate_sets_are_explained() {
    let out = stdout_of(&["bs-candidates", "1/(x^2+y^3)"]);
    assert!(out.contains("none"));
    let json = stdout_of(&["bs-candidates", "1/(x^2+y^3)", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(v["candidates"]["enumerated"].as_array().unwrap().is_empty());
    assert!(v["note"].is_string());
}

#[test]
fn input_errors_exit_with_two() {
    merogerm()
        .args(["resolve", "x^+"])
        .assert()
        .code(2)
        .stderr(predicates::str::contains("at byte"));
    merogerm().args(["multiplier", "x", "--lambda", "-1"]).assert().code(2);
    merogerm().args(["multiplier", "x", "--lambda", "1", "--degree", "0"]).assert().code(2);
    merogerm().args(["zeta-candidates", "y^3+x^5"]).assert().code(2);
    merogerm().args(["resolve", "y^3+x^5", "--blowup-cap", "1"]).assert().code(2);
    merogerm().args(["verify-feq", "--f", "x", "--op", "dz", "--b", "s"]).assert().code(2);
    merogerm().args(["resolve"]).assert().code(2);
}

#[test]
fn multiplier_text() {
    let out = stdout_of(&["multiplier", "(y^3+x^5)/x", "--lambda", "8/12"]);
    assert!(out.contains("constraints: E4 >= 1"));
    assert!(out.contains("ideal: (y, x)"));
}
