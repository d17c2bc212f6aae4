//! End-to-end tests of the `cdlab` binary: flags, formats, exit codes and
//! byte-determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cdlab"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn homology_of_the_28_cell_complex() {
    let out = bin().arg("homology").arg(fixture("cd2.json")).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("betti: 1 1 1 1 0"), "{text}");
    assert!(text.contains("validation: ok"));
}

#[test]
fn homology_of_the_band_complex() {
    let out = bin().arg("homology").arg(fixture("cd1.json")).output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("betti: 1 1 0"));
}

#[test]
fn homology_rejects_malformed_json_with_exit_2() {
    let dir = std::env::temp_dir();
    let path = dir.join("cdlab-cli-test-malformed.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = bin().arg("homology").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("cannot parse"), "{err}");
}

#[test]
fn homology_flags_invalid_complexes_with_exit_2() {
    let dir = std::env::temp_dir();
    let path = dir.join("cdlab-cli-test-invalid.json");
    std::fs::write(
        &path,
        r#"{"name":"broken","cells":[{"id":"v","dim":0},{"id":"p","dim":1},{"id":"x","dim":2}],
            "boundary":{"x":["p"],"p":["v"]}}"#,
    )
    .unwrap();
    let out = bin().arg("homology").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("validation: FAILED"));
    assert!(text.contains("dd(x)"), "violation must name the cell: {text}");
}

#[test]
fn verify_list_prints_the_registry_without_running() {
    let out = bin().args(["verify", "--list"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    for id in [
        "prop5.dd_zero",
        "thm1.betti",
        "ex1.betti",
        "cor_prop5.generators",
        "thm2.klein_cup_square",
        "thm2.sw_polynomial",
        "prop3.parity",
        "prop_nz.cos_section",
        "thm3.monodromy",
        "lemma5.trivialization",
        "prop7.resolution_chords",
        "def1.rank_unionfind",
        "prop4.degeneracy_scan",
    ] {
        assert!(text.contains(id), "missing {id} in registry listing");
    }
}

#[test]
fn verify_passes_and_is_byte_deterministic() {
    let first = bin().args(["verify", "--seed", "1"]).output().unwrap();
    assert!(first.status.success(), "{}", stdout(&first));
    let text = stdout(&first);
    assert!(text.contains("13 / 13 passed"));
    let second = bin().args(["verify", "--seed", "1"]).output().unwrap();
    assert_eq!(first.stdout, second.stdout, "same seed must give identical bytes");
}

#[test]
fn bu_explicit_pair_lists_three_roots() {
    let out = bin()
        .args([
            "bu",
            "--f",
            r#"{"a0":0,"cos":[1],"sin":[]}"#,
            "--g",
            r#"{"a0":0,"cos":[0,0],"sin":[0,1]}"#,
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("roots=3"), "{text}");
    assert!(text.contains("parity=Odd"));
}

#[test]
fn bu_random_pairs_are_odd_or_degenerate() {
    let out = bin()
        .args(["bu", "--random", "100", "--degree", "4", "--seed", "7"])
        .output()
        .unwrap();
    assert!(out.status.success(), "exit 1 would mean an Even pair");
    let text = stdout(&out);
    let summary = text.lines().last().unwrap();
    assert!(summary.contains("even=0"), "{summary}");
    let odd: u32 = summary
        .split("odd=")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .and_then(|s| s.parse().ok())
        .unwrap();
    assert!(odd >= 90, "{summary}");
}

#[test]
fn bu_degree_zero_functions_are_degenerate() {
    let out = bin()
        .args(["bu", "--random", "3", "--degree", "0", "--seed", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("degenerate=3"));
}

#[test]
fn bu_without_inputs_is_an_input_error() {
    let out = bin().arg("bu").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rank_examples() {
    let out = bin().args(["rank", "0.0-1.5708"]).output().unwrap();
    assert!(stdout(&out).contains("rank: 1"));
    // Two chords sharing an endpoint.
    let out = bin().args(["rank", "0.3-1.7,1.7-4.0"]).output().unwrap();
    assert!(stdout(&out).contains("rank: 2"));
    // The triangle on the same three points.
    let out = bin().args(["rank", "0.3-1.7,1.7-4.0,0.3-4.0"]).output().unwrap();
    assert!(stdout(&out).contains("rank: 2"));
}

#[test]
fn rank_rejects_bad_syntax_with_exit_2() {
    let out = bin().args(["rank", "zero-one"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_f7_defaults_pass_and_report_refinement_containment() {
    let out = bin()
        .args(["scan-f7", "--grid", "12", "--compare-grid", "16", "--seed", "3"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS (flagged set nonempty)"));
    let rate: f64 = text
        .lines()
        .find(|l| l.contains("containment rate"))
        .and_then(|l| l.rsplit(' ').next())
        .map(|s| s.trim().parse().unwrap())
        .unwrap();
    assert!(rate > 0.8, "refinement containment rate too low: {rate}");
}

#[test]
fn scan_f7_with_zero_tolerance_finds_nothing_and_exits_1() {
    let out = bin().args(["scan-f7", "--grid", "12", "--tol", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("flagged cells: 0"));
}

#[test]
fn klein_command_passes() {
    let out = bin().arg("klein").output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("cup square <w cup w, [K]> = 1"));
    assert!(text.contains("betti mod 2 = 1 2 1"));
}

#[test]
fn monodromy_command_passes_and_respects_steps() {
    let out = bin().args(["monodromy", "--steps", "100"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("diameter frame (one loop): -1"));
    assert!(text.contains("doubled loops: 1 / 1"));
}

#[test]
fn seed_env_variable_is_the_default_seed() {
    let explicit = bin().args(["bu", "--random", "2", "--seed", "9"]).output().unwrap();
    let via_env = bin()
        .args(["bu", "--random", "2"])
        .env("CDLAB_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(explicit.stdout, via_env.stdout);
}

#[test]
fn json_outputs_are_valid_json() {
    let checks: Vec<Vec<&str>> = vec![
        vec!["homology", "--json"],
        vec!["rank", "0.0-1.0", "--json"],
        vec!["klein", "--json"],
        vec!["monodromy", "--json"],
        vec!["verify", "--list", "--json"],
        vec!["bu", "--random", "2", "--json"],
        vec!["scan-f7", "--grid", "12", "--json"],
    ];
    for mut args in checks {
        if args[0] == "homology" {
            let path = fixture("cd1.json");
            let path_str = path.to_str().unwrap().to_string();
            let leaked: &'static str = Box::leak(path_str.into_boxed_str());
            args.insert(1, leaked);
        }
        let out = bin().args(&args).output().unwrap();
        let text = stdout(&out);
        serde_json::from_str::<serde_json::Value>(&text)
            .unwrap_or_else(|e| panic!("{args:?} emitted invalid JSON ({e}): {text}"));
    }
}
