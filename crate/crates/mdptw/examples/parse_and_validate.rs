//! Parse an instance file, inspect it, and round-trip it through the
//! serializer. The same text format is what the `mdptw` binary reads.
//!
//! Run with: cargo run --example parse_and_validate

use mdptw::mdp::{parse_mdp, serialize_mdp, Owner};

fn main() {
    // Four vertices, one probabilistic. The header counts vertices and
    // edges; the optional `t` line is a target set some analyses use.
    let text = "\
# toy instance: a detour through a probabilistic cycle
mdp 4 5
P 2
0 0
1 0
1 2
2 3
3 2
t 0
";
    let (g, targets) = parse_mdp(text).expect("the fixture is well formed");

    println!("parsed {} vertices, {} edges", g.n(), g.m());
    println!("targets: {:?}", targets.expect("fixture has a t line"));
    for v in 0..g.n() {
        let kind = match g.owner(v) {
            Owner::Player1 => "player 1",
            Owner::Probabilistic => "probabilistic",
        };
        println!("  vertex {v} ({kind}) -> {:?}", g.out(v));
    }

    // Construction validates: every probabilistic vertex must keep at
    // least one out-edge, edges must be in range and duplicate-free.
    let broken = "mdp 2 1\nP 1\n0 1\n";
    match parse_mdp(broken) {
        Ok(_) => unreachable!("vertex 1 has no out-edge"),
        Err(e) => println!("rejected bad instance: {e}"),
    }

    // Serialization is canonical, so round-tripping reproduces the
    // graph exactly.
    let canonical = serialize_mdp(&g, Some(&[0]));
    let (again, _) = parse_mdp(&canonical).expect("canonical text parses");
    assert_eq!(g.edges(), again.edges());
    println!("\ncanonical form:\n{canonical}");
}
