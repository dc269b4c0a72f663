//! Tree decompositions three ways: the generator's construction
//! witness, a greedy elimination heuristic, and a decomposition built
//! from an explicit elimination order.
//!
//! Run with: cargo run --example decompose_heuristics

use mdptw::decomposition::{
    decompose_with_elimination_order, heuristic_decompose, parse_td, serialize_td, Strategy,
};
use mdptw::generate::{generate, GeneratorConfig};

fn main() {
    let cfg = GeneratorConfig { n: 40, k: 3, seed: 11, ..GeneratorConfig::default() };
    let instance = generate(&cfg);
    let g = &instance.graph;
    println!(
        "instance: {} vertices, {} edges, built inside a {}-tree",
        g.n(),
        g.m(),
        cfg.k
    );

    // The generator knows how the graph was built, so its witness
    // decomposition has width k by construction.
    instance.witness.validate(g).expect("witness is always valid");
    println!("witness width:        {}", instance.witness.width());

    // The heuristics only see the graph. On partial k-trees they come
    // close to the witness; nothing guarantees they match it.
    for strategy in [Strategy::MinDegree, Strategy::MinFill] {
        let td = heuristic_decompose(g, strategy);
        td.validate(g).expect("heuristic output is always valid");
        println!("{:<21} {}", format!("{strategy:?} width:"), td.width());
    }

    // Replaying the generator's elimination order recovers width k
    // without peeking at the bags.
    let td = decompose_with_elimination_order(g, &instance.elimination_order);
    td.validate(g).expect("elimination orders always yield valid bags");
    println!("witness-order width:  {}", td.width());

    // Decompositions serialize to a small text format with a header,
    // one bag line per node, and tree edges; it round-trips.
    let text = serialize_td(&td, g.n());
    let back = parse_td(&text).expect("serializer output parses");
    assert_eq!(back.width(), td.width());
    let preview: Vec<&str> = text.lines().take(4).collect();
    println!("\nserialized (first lines):");
    for line in preview {
        println!("  {line}");
    }
}
