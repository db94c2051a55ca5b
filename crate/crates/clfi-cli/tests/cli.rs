//! End-to-end tests of the `clfi` binary: golden output lines, exit
//! codes, and file round trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn clfi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clfi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn gen_fixture(dir: &Path, kind: &str) -> PathBuf {
    let path = dir.join(format!("{kind}.json"));
    let out = clfi(&["gen", "--kind", kind, "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    path
}

#[test]
fn translate_golden_line() {
    let out = clfi(&["translate", "--formula", "FI[{0}](p)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "((~[{0}](p)) & (~[{0}]((~p))))");
}

#[test]
fn classify_golden_line() {
    let dir = TempDir::new().unwrap();
    let model = gen_fixture(dir.path(), "matching-pennies");
    let out = clfi(&[
        "classify",
        "--model",
        model.to_str().unwrap(),
        "--coalition",
        "0",
        "--formula",
        "p",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "state 0: FI, state 1: FI");
}

#[test]
fn validate_reports_violations_with_exit_one() {
    let dir = TempDir::new().unwrap();
    let good = gen_fixture(dir.path(), "veto");
    let out = clfi(&["validate", "--model", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("playability: OK"));
    assert!(stdout(&out).contains("alpha-duality: state 0: yes"));

    // a one-agent model whose only coalition family enforces the empty set
    let broken = dir.path().join("broken.json");
    std::fs::write(
        &broken,
        r#"{
            "states": 1,
            "agents": 1,
            "effectivity": [
                {"state": 0, "coalition": [], "minimal": [[0]]},
                {"state": 0, "coalition": [0], "minimal": [[]]}
            ]
        }"#,
    )
    .unwrap();
    let out = clfi(&["validate", "--model", broken.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("liveness"));
}

#[test]
fn klein_exit_codes() {
    let dir = TempDir::new().unwrap();
    let dict = gen_fixture(dir.path(), "dictator");
    let out = clfi(&[
        "klein", "--model", dict.to_str().unwrap(), "--state", "0", "--coalition", "0",
        "--formula", "p",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("pattern: OK"));
    assert!(stdout(&out).contains("comp: FI"));

    let mp = gen_fixture(dir.path(), "matching-pennies");
    let out = clfi(&[
        "klein", "--model", mp.to_str().unwrap(), "--state", "0", "--coalition", "0",
        "--formula", "p",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("not alpha-dual"));
}

#[test]
fn robustness_exit_tracks_k() {
    let dir = TempDir::new().unwrap();
    let mp = gen_fixture(dir.path(), "matching-pennies");
    let base = ["robustness", "--model", mp.to_str().unwrap(), "--state", "0", "--formula", "p"];
    let out = clfi(&base);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("degree: 2"));
    assert!(stdout(&out).contains("minimal escaping: {0,1}"));

    let mut with_k: Vec<&str> = base.to_vec();
    with_k.extend(["--k", "1"]);
    assert_eq!(code(&clfi(&with_k)), 0);
    let mut with_k: Vec<&str> = base.to_vec();
    with_k.extend(["--k", "2"]);
    assert_eq!(code(&clfi(&with_k)), 1);
}

#[test]
fn sat_writes_a_verifiable_witness() {
    let dir = TempDir::new().unwrap();
    let witness = dir.path().join("witness.json");
    let out = clfi(&[
        "sat", "--formula", "FI[{0}](p)", "--max-states", "2", "--max-actions", "2",
        "--agents", "2", "-o", witness.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("witness at state 0"));

    let out = clfi(&[
        "check", "--model", witness.to_str().unwrap(), "--formula", "FI[{0}](p)",
    ]);
    assert!(stdout(&out).contains("state 0: true"));

    let out = clfi(&["sat", "--formula", "p & ~p", "--samples", "2000"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out).trim(), "sat: unknown");
}

#[test]
fn induce_produces_a_usable_model() {
    let dir = TempDir::new().unwrap();
    let game = dir.path().join("game.json");
    let out = clfi(&["gen", "--kind", "veto", "--emit", "game-form", "-o", game.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let model = dir.path().join("model.json");
    let out = clfi(&["induce", "--game", game.to_str().unwrap(), "-o", model.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    // no valuation travels with a game form, so atoms are empty sets and
    // a negated unknown atom is positively determined everywhere
    let out = clfi(&[
        "classify", "--model", model.to_str().unwrap(), "--coalition", "1", "--formula", "~x",
    ]);
    assert_eq!(stdout(&out).trim(), "state 0: PD, state 1: PD");
}

#[test]
fn json_format_is_machine_readable() {
    let dir = TempDir::new().unwrap();
    let mp = gen_fixture(dir.path(), "matching-pennies");
    let out = clfi(&[
        "classify", "--model", mp.to_str().unwrap(), "--coalition", "0,1", "--formula", "p",
        "--format", "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["per_state"], serde_json::json!(["FC", "FC"]));

    let out = clfi(&[
        "regions", "--model", mp.to_str().unwrap(), "--state", "0", "--coalition", "1",
        "--format", "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["regions"]["FI"]["count"], serde_json::json!(2));
    assert_eq!(value["regions"]["FI"]["convex"], serde_json::json!(true));
}

#[test]
fn gen_is_deterministic_and_alpha_dual_gen_validates() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = clfi(&[
            "gen", "--kind", "random", "--seed", "5", "--states", "3", "--agents", "2",
            "-o", path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let dual = dir.path().join("dual.json");
    let out = clfi(&[
        "gen", "--kind", "alpha-dual", "--seed", "1", "--states", "2", "--agents", "2",
        "-o", dual.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = clfi(&["validate", "--model", dual.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("alpha-duality: state 0: yes; state 1: yes"));
}

#[test]
fn dummy_analysis_verdicts() {
    let dir = TempDir::new().unwrap();
    let dict = gen_fixture(dir.path(), "dictator");
    let out = clfi(&[
        "dummy", "--model", dict.to_str().unwrap(), "--state", "0", "--agent", "1",
        "--formula", "p",
    ]);
    assert!(stdout(&out).contains("verdict: confirmed"));
    let out = clfi(&[
        "dummy", "--model", dict.to_str().unwrap(), "--state", "0", "--agent", "0",
        "--formula", "p",
    ]);
    assert!(stdout(&out).contains("verdict: vacuous"));
}

#[test]
fn profile_counts() {
    let dir = TempDir::new().unwrap();
    let mp = gen_fixture(dir.path(), "matching-pennies");
    let out = clfi(&["profile", "--model", mp.to_str().unwrap(), "--agent", "0", "--formula", "p"]);
    assert_eq!(stdout(&out).trim(), "agent 0 on p: FC=0 PD=0 AD=0 FI=2");
}

#[test]
fn large_models_need_the_explicit_flag() {
    let dir = TempDir::new().unwrap();
    let big = dir.path().join("big.json");
    let out = clfi(&[
        "gen", "--kind", "random", "--seed", "3", "--states", "17", "--agents", "1",
        "-o", big.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let out = clfi(&["check", "--model", big.to_str().unwrap(), "--formula", "p"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--allow-large"));

    let out = clfi(&[
        "check", "--model", big.to_str().unwrap(), "--formula", "p", "--allow-large",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn input_errors_exit_two() {
    let out = clfi(&["check", "--model", "/nonexistent/m.json", "--formula", "p"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error:"));

    let dir = TempDir::new().unwrap();
    let mp = gen_fixture(dir.path(), "matching-pennies");
    let out = clfi(&["check", "--model", mp.to_str().unwrap(), "--formula", "p &"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("parse error at 3"));

    let out = clfi(&[
        "classify", "--model", mp.to_str().unwrap(), "--coalition", "7", "--formula", "p",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("out of range"));

    let out = clfi(&["gen", "--kind", "nonsense"]);
    assert_eq!(code(&out), 2);
}
