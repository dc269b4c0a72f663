//! The deletion-script format: a replayable text log of deletions,
//! queries, and expected answers, used for golden tests and the
//! `mdptw decrement` subcommand.
//!
//! Lines: `d <u> <v>` deletes an edge, `q asr` or `q mec` dumps the
//! maintained answer, `! <text>` pins one line of the next dump, and
//! `#` starts a comment. With checking enabled the replay also
//! recomputes the answer from scratch after every deletion, making a
//! script a differential test.
//!
//! Run with: cargo run --example deletion_scripts

use mdptw::decremental::{parse_deletion_script, replay_script, ReplayAlgo};
use mdptw::mdp::parse_mdp;

fn main() {
    // The reduced form of a small fixture: vertex 4 is the absorbing
    // target, vertex 2 is probabilistic.
    let (g, _) = parse_mdp(
        "mdp 5 6\nP 2\n0 4\n1 0\n1 2\n2 3\n3 2\n4 4\n",
    )
    .expect("fixture parses");

    let script = "\
# query, cut the detour, query again
! asr 3
! 0
! 1
! 4
q asr
d 1 0
! asr 2
! 0
! 4
q asr
";
    let steps = parse_deletion_script(script).expect("script parses");
    println!("parsed {} steps", steps.len());

    let outcome = replay_script(&g, &steps, ReplayAlgo::Asr { target: 4 }, true)
        .expect("all expectations hold");
    println!(
        "replayed {} deletions, {} dumps, all checks green",
        outcome.deletions, outcome.dumps
    );
    println!("--- dump output ---\n{}-------------------", outcome.output);

    // A wrong expectation fails with the script line and both sides.
    let wrong = parse_deletion_script("! asr 99\nq asr\n").expect("parses fine");
    let err = replay_script(&g, &wrong, ReplayAlgo::Asr { target: 4 }, false).unwrap_err();
    println!("a lying script is caught: {err}");

    // So does deleting an edge the model does not allow to go.
    let illegal = parse_deletion_script("d 2 3\n").expect("parses fine");
    let err = replay_script(&g, &illegal, ReplayAlgo::Asr { target: 4 }, false).unwrap_err();
    println!("an illegal deletion is caught: {err}");
}
