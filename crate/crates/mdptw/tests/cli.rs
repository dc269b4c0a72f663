//! Integration tests driving the compiled binary end to end through
//! temp files: output formats, cross-algorithm agreement, script
//! replay, generation round-trips, and the exit-code contract
//! (0 success, 1 input/differential failure, 2 usage).

use std::path::Path;
use std::process::{Command, Output};

const FIXTURE: &str = "mdp 4 5\nP 2\n0 0\n1 0\n1 2\n2 3\n3 2\nt 0\n";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdptw"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

fn write(dir: &Path, name: &str, content: &str) {
    std::fs::write(dir.join(name), content).expect("temp write");
}

#[test]
fn validate_accepts_good_and_rejects_bad_input() {
    let dir = tempfile::tempdir().expect("tempdir");
    write(dir.path(), "good.mdp", FIXTURE);
    write(dir.path(), "bad.mdp", "mdp 2 1\nP 1\n0 1\n");

    let ok = run(dir.path(), &["validate", "good.mdp"]);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));

    let bad = run(dir.path(), &["validate", "bad.mdp"]);
    assert_eq!(code(&bad), 1);
    assert!(stderr(&bad).contains("no out-edge"));

    let missing = run(dir.path(), &["validate", "absent.mdp"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn asr_algorithms_emit_identical_output() {
    let dir = tempfile::tempdir().expect("tempdir");
    write(dir.path(), "g.mdp", FIXTURE);

    let mut outputs = Vec::new();
    for algo in ["dp", "fixpoint", "oracle"] {
        let out = run(dir.path(), &["asr", "g.mdp", "--target", "0", "--algo", algo]);
        assert_eq!(code(&out), 0, "{algo}: {}", stderr(&out));
        outputs.push(stdout(&out));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    // Answers are reported over the original vertices only.
    assert_eq!(outputs[0], "asr 2\n0\n1\n");
}

#[test]
fn asr_falls_back_to_the_file_target_line() {
    let dir = tempfile::tempdir().expect("tempdir");
    write(dir.path(), "g.mdp", FIXTURE);
    let out = run(dir.path(), &["asr", "g.mdp", "--algo", "fixpoint"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "asr 2\n0\n1\n");

    write(dir.path(), "untargeted.mdp", "mdp 1 1\n0 0\n");
    let out = run(dir.path(), &["asr", "untargeted.mdp"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no --target"));
}

#[test]
fn asr_without_td_warns_with_the_achieved_width() {
    let dir = tempfile::tempdir().expect("tempdir");
    write(dir.path(), "g.mdp", FIXTURE);
    let out = run(dir.path(), &["asr", "g.mdp", "--target", "0", "--algo", "dp"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("achieved width"), "{}", stderr(&out));

    // With an explicit decomposition there is nothing to warn about.
    let dec = run(dir.path(), &["decompose", "g.mdp", "-o", "g.td"]);
    assert_eq!(code(&dec), 0);
    let out = run(
        dir.path(),
        &["asr", "g.mdp", "--target", "0", "--algo", "dp", "--td", "g.td"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(!stderr(&out).contains("warning"));
    assert_eq!(stdout(&out), "asr 2\n0\n1\n");
}

#[test]
fn mec_algorithms_agree_and_stats_go_to_stderr() {
    let dir = tempfile::tempdir().expect("tempdir");
    write(dir.path(), "g.mdp", FIXTURE);

    let dp = run(dir.path(), &["mec", "g.mdp", "--algo", "dp", "--stats"]);
    let it = run(dir.path(), &["mec", "g.mdp", "--algo", "iterative"]);
    assert_eq!(code(&dp), 0, "{}", stderr(&dp));
    assert_eq!(code(&it), 0);
    assert_eq!(stdout(&dp), stdout(&it));
    assert_eq!(stdout(&dp), "mec 2\n0\n2 3\nunassigned: 1\n");
    assert!(stderr(&dp).contains("# stat closures"));
    assert!(!stdout(&dp).contains("# stat"));
}

#[test]
fn decompose_emits_a_width_line_and_a_loadable_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    write(dir.path(), "g.mdp", FIXTURE);
    for strategy in ["min-fill", "min-degree"] {
        let out = run(
            dir.path(),
            &["decompose", "g.mdp", "--strategy", strategy, "-o", "g.td"],
        );
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert_eq!(stdout(&out), "width 1\n");
        let check = run(dir.path(), &["validate", "g.mdp", "--td", "g.td"]);
        assert_eq!(code(&check), 0, "{}", stderr(&check));
    }
}

#[test]
fn decrement_replays_scripts_with_checks_and_expectations() {
    let dir = tempfile::tempdir().expect("tempdir");
    // Pre-reduced graph: vertex 4 is the absorbing target.
    write(dir.path(), "g.mdp", "mdp 5 6\nP 2\n0 4\n1 0\n1 2\n2 3\n3 2\n4 4\n");
    write(
        dir.path(),
        "script.txt",
        "! asr 3\n! 0\n! 1\n! 4\nq asr\nd 1 0\n! asr 2\n! 0\n! 4\nq asr\n",
    );

    let out = run(
        dir.path(),
        &[
            "decrement", "g.mdp", "--script", "script.txt", "--algo", "asr",
            "--target", "4", "--check", "--stats",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "asr 3\n0\n1\n4\nasr 2\n0\n4\n");
    assert!(stderr(&out).contains("# stat deletions 1"));

    // A script whose expectation lies fails with the line number.
    write(dir.path(), "lying.txt", "! asr 99\nq asr\n");
    let out = run(
        dir.path(),
        &["decrement", "g.mdp", "--script", "lying.txt", "--algo", "asr", "--target", "4"],
    );
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));

    // Deleting a probabilistic edge is an input failure, not a crash.
    write(dir.path(), "illegal.txt", "d 2 3\n");
    let out = run(
        dir.path(),
        &["decrement", "g.mdp", "--script", "illegal.txt", "--algo", "asr", "--target", "4"],
    );
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("probabilistic"), "{}", stderr(&out));

    // Reachability replay without a target is a usage error.
    let out = run(dir.path(), &["decrement", "g.mdp", "--script", "script.txt"]);
    assert_eq!(code(&out), 2);

    // Component queries need the component structure.
    write(dir.path(), "wrongkind.txt", "q mec\n");
    let out = run(
        dir.path(),
        &["decrement", "g.mdp", "--script", "wrongkind.txt", "--algo", "asr", "--target", "4"],
    );
    assert_eq!(code(&out), 1);

    // The same script drives the component side.
    write(dir.path(), "mec.txt", "q mec\nd 1 0\nq mec\n");
    let out = run(
        dir.path(),
        &["decrement", "g.mdp", "--script", "mec.txt", "--algo", "mec", "--check"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("mec "));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().expect("tempdir");
    let args = ["gen", "--n", "30", "--k", "3", "--seed", "9", "-o", "a"];
    let first = run(dir.path(), &args);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    let again = run(dir.path(), &["gen", "--n", "30", "--k", "3", "--seed", "9", "-o", "b"]);
    assert_eq!(code(&again), 0);
    let read = |name: &str| std::fs::read_to_string(dir.path().join(name)).expect("file");
    assert_eq!(read("a.mdp"), read("b.mdp"));
    assert_eq!(read("a.td"), read("b.td"));

    let check = run(dir.path(), &["validate", "a.mdp", "--td", "a.td"]);
    assert_eq!(code(&check), 0, "{}", stderr(&check));

    // The generated witness also feeds the analyses directly.
    let dp = run(dir.path(), &["asr", "a.mdp", "--algo", "dp", "--td", "a.td"]);
    let fix = run(dir.path(), &["asr", "a.mdp", "--algo", "fixpoint"]);
    assert_eq!(code(&dp), 0, "{}", stderr(&dp));
    assert_eq!(stdout(&dp), stdout(&fix));

    let bad = run(dir.path(), &["gen", "--n", "5", "--k", "7", "-o", "c"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn bench_emits_the_pinned_csv_shape() {
    let dir = tempfile::tempdir().expect("tempdir");
    write(
        dir.path(),
        "suite.txt",
        "# tiny sweep\nasr-dp 40 3 0.4 0.8 2\nmec-iterative 40 3 0.4 0.8 2\ndec-asr 40 3 0.4 0.8 2\n",
    );
    let out = run(dir.path(), &["bench", "--suite", "suite.txt", "--threads", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "algo,n,m,k,wall_ns,closures,subsets,edges_inspected");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("asr-dp,41,"));
    assert!(lines[3].starts_with("dec-asr,"));

    // Same suite through -o lands in the file instead.
    let out = run(
        dir.path(),
        &["bench", "--suite", "suite.txt", "-o", "r.csv", "--threads", "1"],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "");
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).expect("csv written");
    assert_eq!(csv.lines().count(), 4);

    write(dir.path(), "badsuite.txt", "warp 40 3 0.4 0.8 2\n");
    let out = run(dir.path(), &["bench", "--suite", "badsuite.txt"]);
    assert_eq!(code(&out), 1);
}
