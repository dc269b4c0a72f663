//! From a raw tree decomposition to the shapes the dynamic programs
//! consume: nice form, singleton root, and target rooting.
//!
//! A nice decomposition has only four node kinds (leaf, introduce,
//! forget, join), which turns the DP into four transition rules. The
//! end-component DP additionally wants a singleton root bag to read
//! components off; the reachability DP wants the target vertex in every
//! bag and alone at the root.
//!
//! Run with: cargo run --example nice_decomposition_pipeline

use mdptw::decomposition::{
    heuristic_decompose, make_nice, root_with_target, validate_nice, NodeKind, Strategy,
};
use mdptw::generate::{generate, GeneratorConfig};
use mdptw::mdp::reduce_target;

fn main() {
    let cfg = GeneratorConfig { n: 25, k: 2, seed: 3, ..GeneratorConfig::default() };
    let instance = generate(&cfg);
    let g = &instance.graph;

    let td = heuristic_decompose(g, Strategy::MinFill);
    println!("raw decomposition: {} bags, width {}", td.bags.len(), td.width());

    let ntd = make_nice(&td);
    validate_nice(&ntd, g).expect("make_nice preserves validity");
    let mut counts = [0usize; 4];
    for node in &ntd.nodes {
        let slot = match node.kind {
            NodeKind::Leaf => 0,
            NodeKind::Introduce(_) => 1,
            NodeKind::Forget(_) => 2,
            NodeKind::Join => 3,
        };
        counts[slot] += 1;
    }
    println!(
        "nice form: {} nodes ({} leaf, {} introduce, {} forget, {} join), width {}",
        ntd.node_count(),
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        ntd.width()
    );

    // Root bag shrunk to one vertex by a chain of forgets; the
    // end-component DP reads its answer off such a root.
    let rooted = ntd.clone().ensure_singleton_root();
    assert_eq!(rooted.nodes[rooted.root].bag.len(), 1);
    println!("singleton root holds vertex {}", rooted.nodes[rooted.root].bag[0]);

    // For reachability the graph is first reduced at the target set,
    // which adds a fresh absorbing vertex s. Injecting s into every bag
    // keeps the decomposition valid for the reduced graph and costs at
    // most one extra unit of width.
    let (gr, s) = reduce_target(g, &instance.targets).expect("targets are valid");
    let rtd = root_with_target(&ntd, s);
    rtd.validate(&gr).expect("target rooting preserves validity");
    println!(
        "target-rooted: every bag holds {s}, root bag {:?}, width {} (was {})",
        rtd.nice.nodes[rtd.nice.root].bag,
        rtd.nice.width(),
        ntd.width()
    );
}
