use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use mastermind_core::{solve_secret, CodeSpace, Comparator, GameConfig, Strategy};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mastermind"))
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn play(args: &[&str], input: &str) -> Output {
    let mut child = bin().arg("play").args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn replay_passes_reference_game() {
    let out = run(&["replay", &fixture("reference_game.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = text(&out);
    assert_eq!(stdout.matches(" PASS").count(), 7);
    assert!(stdout.ends_with("6/6 PASS\n"));
}

#[test]
fn replay_flags_tampered_row() {
    let out = run(&["replay", &fixture("reference_game_tampered.txt")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out).contains("row 3: R R R G G | 3W 2B FAIL (expected 3W 1B)"));
}

#[test]
fn replay_refuses_without_secret() {
    let dir = std::env::temp_dir().join(format!("mastermind-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("no_secret.txt");
    std::fs::write(&path, "B B Y Y R | 1W 1B\n").unwrap();
    let out = run(&["replay", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no `secret:` line"));
    std::fs::write(&path, "B B Y Y | 1W 1B\n").unwrap();
    let out = run(&["replay", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    assert_eq!(run(&["replay", "/nonexistent/transcript.txt"]).status.code(), Some(2));
}

#[test]
fn solve_output_replays_cleanly() {
    let out = run(&["solve", "--secret", "R R G Y G", "--verbose", "--pins"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = text(&out);
    assert!(stdout.contains("# propagate"));
    assert!(stdout.ends_with("secret: R R G Y G\n"));
    let path = std::env::temp_dir().join(format!("mastermind-solve-{}.txt", std::process::id()));
    std::fs::write(&path, &stdout).unwrap();
    let replayed = run(&["replay", path.to_str().unwrap()]);
    assert_eq!(replayed.status.code(), Some(0), "{}", text(&replayed));
}

#[test]
fn scripted_play_session_wins() {
    let config = GameConfig::default();
    let space = CodeSpace::new(&config);
    let secret = config.parse_code("G O P C M").unwrap();
    let game = solve_secret(Strategy::Hybrid(Comparator::Heuristic), &secret, &config, &space).unwrap();
    let mut input = String::from("garbage\n4W 1B\n");
    for e in &game.transcript.entries {
        input.push_str(&format!("{}\n", e.feedback));
    }
    let out = play(&["--pins"], &input);
    assert_eq!(out.status.code(), Some(0));
    let stdout = text(&out);
    assert!(stdout.contains("try again"));
    assert!(stdout.contains("impossible feedback 4W 1B"));
    assert!(stdout.contains(&format!("row {}: G O P C M", game.transcript.len())));
    assert!(stdout.contains(&format!("solved in {} rows", game.transcript.len())));
}

#[test]
fn immediate_win_and_closed_input() {
    let out = play(&[], "5W 0B\n");
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out).contains("solved in 1 rows"));
    let out = play(&[], "");
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out).contains("game aborted"));
}

#[test]
fn contradictory_answers_exit_three() {
    let out = play(&["--positions", "4", "--colors", "6"], "0W 0B\n0W 0B\n0W 0B\n0W 0B\n0W 0B\n");
    assert_eq!(out.status.code(), Some(3));
    assert!(text(&out).contains("feedback history is contradictory"));
}

#[test]
fn analyze_lists_every_pattern() {
    let out = run(&["analyze"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = text(&out);
    for p in ["2/1/1/1", "1/1/1/1/1", "2/2/1", "3/1/1", "3/2", "4/1", "5"] {
        assert!(stdout.lines().any(|l| l.split_whitespace().nth(1) == Some(p)), "{p} missing");
    }
    let csv = text(&run(&["analyze", "--csv"]));
    assert!(csv.starts_with("kind,name,positions,colors"));
}

#[test]
fn simulate_exhaustive_desk() {
    let out = run(&["--positions", "4", "--colors", "6", "simulate", "--strategy", "filter", "--exhaustive", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out).contains("strategy,filter,4,6,1296,1296,"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(run(&["solve", "--secret", "R R G Y"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--secret", "R R G Y G", "--strategy", "oracle"]).status.code(), Some(2));
    assert_eq!(run(&["--colors", "40", "analyze"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--exhaustive", "--budget", "10"]).status.code(), Some(2));
}
