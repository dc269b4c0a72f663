//! Almost-sure reachability computed three ways on the same instance:
//! the table-passing dynamic program over a tree decomposition, the
//! classical removal fixpoint, and a brute-force oracle that tries
//! every candidate set. All three must agree.
//!
//! The question: from which vertices does player 1 have a strategy that
//! reaches the target set with probability one? Probabilistic vertices
//! move adversarially in the qualitative sense: every out-edge must
//! stay inside the winning region.
//!
//! Run with: cargo run --example reachability_three_ways

use mdptw::asr_dp::compute_asr;
use mdptw::basic::{asr_fixpoint, subset_oracle_asr};
use mdptw::decomposition::{make_nice, root_with_target};
use mdptw::generate::{generate, GeneratorConfig};
use mdptw::mdp::reduce_target;

fn main() {
    let cfg = GeneratorConfig {
        n: 12,
        k: 2,
        p_prob: 0.5,
        seed: 10,
        ..GeneratorConfig::default()
    };
    let instance = generate(&cfg);
    let g = &instance.graph;
    println!(
        "instance: {} vertices, {} edges, targets {:?}",
        g.n(),
        g.m(),
        instance.targets
    );

    // Reduction folds the target set into one absorbing vertex s; the
    // single-target answers transfer back to the original question.
    let (gr, s) = reduce_target(g, &instance.targets).expect("targets are valid");

    // Dynamic program over the generator's witness decomposition,
    // re-rooted so s sits in every bag.
    let rtd = root_with_target(&make_nice(&instance.witness), s);
    let dp = compute_asr(&gr, &rtd).expect("witness width is far below the table limit");

    // Removal fixpoint: restrict to vertices that can reach s, then
    // repeatedly drop probabilistic vertices with an escaping edge.
    let (fixpoint, trace) = asr_fixpoint(&gr, s);

    // Brute force: largest s-containing set that is closed for
    // probabilistic vertices and lets every member reach s inside.
    let oracle = subset_oracle_asr(&gr, s).expect("12 + 1 vertices is within oracle range");

    assert_eq!(dp.asr, fixpoint);
    assert_eq!(dp.asr, oracle);
    println!("almost-sure winning region (reduced graph): {:?}", dp.asr);
    println!("fixpoint removed {} vertices on the way", trace.len());
    println!(
        "dp visited {} decomposition nodes, {} subsets, {} closures",
        dp.stats.nodes, dp.stats.subsets, dp.stats.closures
    );

    // Members below the original vertex count are the real answer; s
    // itself is an artifact of the reduction.
    let original: Vec<usize> = dp.asr.iter().copied().filter(|&v| v < g.n()).collect();
    println!("as original vertices: {original:?}");
}
