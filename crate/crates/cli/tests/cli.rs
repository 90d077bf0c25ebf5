use std::path::PathBuf;
use std::process::Command;

use psat_cli::format::{parse, render};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn psat(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_psat")).args(args).output().expect("spawn psat");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn sat_on_contradiction_is_infeasible() {
    let (code, stdout, _) = psat(&["sat", &path("contradictory.psat")]);
    assert_eq!(code, 1);
    assert!(stdout.contains("infeasible"));
}

#[test]
fn sat_on_satisfiable_file() {
    let (code, stdout, _) = psat(&["sat", &path("satisfiable.psat")]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("status: feasible\nwitness: "));
}

#[test]
fn nilsson_entailment() {
    let (code, stdout, _) = psat(&["entail", &path("nilsson.psat"), "--goal", "2"]);
    assert_eq!((code, stdout.as_str()), (0, "[1/2, 4/5]\n"));

    let (_, json, _) = psat(&["--json", "entail", &path("nilsson.psat")]);
    assert_eq!(json, "{\"min\":\"1/2\",\"max\":\"4/5\"}\n");

    let (_, neg, _) = psat(&["entail", &path("nilsson.psat"), "--goal", "-2"]);
    assert_eq!(neg, "[1/5, 1/2]\n");
}

#[test]
fn matrix_dumps() {
    assert_eq!(psat(&["matrix", "--n", "2", "--which", "c"]).1, "1 -1\n");
    assert_eq!(psat(&["matrix", "--n", "2"]).1, "0 1 0 1\n0 0 1 1\n");
    assert_eq!(psat(&["matrix", "--n", "1", "--which", "Z"]).1, "-1 1\n");
    assert_eq!(psat(&["--json", "matrix", "--n", "2", "--which", "K"]).1, "{\"rows\":[[\"1\",\"0\"],[\"0\",\"-1\"],[\"0\",\"-1\"],[\"0\",\"1\"]]}\n");
}

#[test]
fn coherence_inline_and_json() {
    let (code, stdout, _) = psat(&["--json", "coherence", "1,0"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "{\"status\":\"feasible\",\"support\":[[1,\"1\"]]}\n");
    let (code, _, _) = psat(&["coherence", "3/2"]);
    assert_eq!(code, 2);
}

#[test]
fn incoherent_bounds_are_infeasible() {
    let (code, stdout, _) = psat(&["solve", &path("incoherent.psat")]);
    assert_eq!((code, stdout.as_str()), (1, "status: infeasible\n"));
    let (code, stdout, stderr) = psat(&["entail", &path("incoherent.psat"), "--goal", "1"]);
    assert_eq!((code, stdout.as_str()), (1, "status: infeasible\n"));
    assert!(stderr.contains("infeasible"));
}

#[test]
fn exit_codes_for_errors() {
    let (code, _, stderr) = psat(&["solve", "/nonexistent/file.psat"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("cannot read"));
    assert_eq!(psat(&["frobnicate"]).0, 2);
    assert_eq!(psat(&["--help"]).0, 0);
    assert_eq!(psat(&["entail", &path("satisfiable.psat")]).0, 2);

    let (code, _, stderr) = psat(&["matrix", "--n", "17"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("k^n"));
}

#[test]
fn max_columns_override_warns() {
    let (code, _, stderr) = psat(&["--max-columns", "4", "matrix", "--n", "3"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("warning"));
    let (code, stdout, stderr) = psat(&["--max-columns", "131072", "matrix", "--n", "17", "--which", "c"]);
    assert_eq!(code, 0);
    assert!(stderr.contains("warning"));
    assert!(stdout.starts_with("1 -1 -1"));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = std::env::temp_dir().join(format!("psat-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.psat");
    std::fs::write(&file, "p psat 2 1\n1 3 0 1/2 1/2\n").unwrap();
    let (code, _, stderr) = psat(&["solve", file.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 2"), "{stderr}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn every_fixture_round_trips_and_verifies() {
    let mut names: Vec<_> = std::fs::read_dir(fixture("")).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    assert!(names.len() >= 5);
    for p in names {
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(render(&parse(&text).unwrap()), text, "{}", p.display());
        let (code, stdout, _) = psat(&["verify", p.to_str().unwrap()]);
        assert_eq!(code, 0, "{}: {stdout}", p.display());
        assert!(stdout.ends_with("verify: ok\n"));
    }
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["psat", "solve", &path("nilsson.psat")];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = psat_cli::run(args, &mut out, &mut err);
    let (bin_code, bin_out, _) = psat(&args[1..]);
    assert_eq!((code, String::from_utf8(out).unwrap()), (bin_code, bin_out));
}
