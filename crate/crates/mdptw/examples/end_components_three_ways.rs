//! Maximal end-component decompositions from the tree-decomposition
//! dynamic program, the iterative SCC-pruning algorithm, and a
//! brute-force oracle, compared for equality.
//!
//! An end component is a set of vertices with a strongly connected
//! sub-MDP in which probabilistic vertices keep all their out-edges.
//! The maximal ones partition a subset of the vertices; the rest are in
//! no end component at all.
//!
//! Run with: cargo run --example end_components_three_ways

use mdptw::basic::{mec_iterative, subset_oracle_mecs};
use mdptw::decomposition::make_nice;
use mdptw::generate::{generate, GeneratorConfig};
use mdptw::mec_dp::compute_mec;
use mdptw::report::render_mec;

fn main() {
    let cfg = GeneratorConfig {
        n: 13,
        k: 3,
        p_prob: 0.45,
        p_self_loop: 0.25,
        seed: 9,
        ..GeneratorConfig::default()
    };
    let instance = generate(&cfg);
    let g = &instance.graph;
    println!("instance: {} vertices, {} edges", g.n(), g.m());

    let ntd = make_nice(&instance.witness).ensure_singleton_root();
    let dp = compute_mec(g, &ntd).expect("witness width is far below the table limit");

    let (iterative, trace) = mec_iterative(g);
    let oracle = subset_oracle_mecs(g).expect("13 vertices is within oracle range");

    assert_eq!(dp.decomposition, iterative);
    assert_eq!(dp.decomposition, oracle);

    // The module's text format: component count, one line per
    // component, then the vertices belonging to none.
    println!("\n{}", render_mec(&dp.decomposition));
    println!("iterative removed {} vertices on the way", trace.len());
    println!(
        "dp visited {} decomposition nodes, {} subsets, {} closures",
        dp.stats.nodes, dp.stats.subsets, dp.stats.closures
    );
}
