//! Maintain almost-sure reachability and end components while player-1
//! edges are deleted one by one, without recomputing from scratch.
//!
//! Only player-1 edges may go: a probabilistic vertex's distribution is
//! part of the model. Under that restriction both answers move one way
//! only. The reachability set shrinks, and end components refine (every
//! new component is contained in an old one), which is what makes
//! efficient maintenance possible: work is charged to edges as they are
//! inspected for the last time, staying near-linear overall.
//!
//! Run with: cargo run --example decremental_maintenance

use mdptw::basic::{asr_fixpoint, mec_iterative};
use mdptw::decremental::{DecrementalAsr, DecrementalMec};
use mdptw::generate::{generate, GeneratorConfig};
use mdptw::mdp::reduce_target;

fn main() {
    let cfg = GeneratorConfig { n: 60, k: 3, seed: 17, ..GeneratorConfig::default() };
    let instance = generate(&cfg);
    let g = instance.graph;
    let (gr, s) = reduce_target(&g, &instance.targets).expect("targets are valid");

    // Every player-1 edge, in id order; a real client would delete
    // whatever its workload dictates.
    let player1_edges: Vec<(usize, usize)> = gr
        .edges()
        .iter()
        .copied()
        .filter(|&(u, _)| !gr.is_probabilistic(u))
        .collect();
    println!(
        "reduced instance: {} vertices, {} edges ({} deletable)",
        gr.n(),
        gr.m(),
        player1_edges.len()
    );

    let mut asr = DecrementalAsr::new(gr.clone(), s);
    let mut mec = DecrementalMec::new(g.clone());
    println!("initial reachability set size: {}", asr.asr_set().len());
    println!("initial component count:       {}", mec.decomposition().mecs.len());

    let mut last_size = asr.asr_set().len();
    for &(u, v) in &player1_edges {
        asr.delete_edge(u, v).expect("player-1 edges delete cleanly");
        let size = asr.asr_set().len();
        if size != last_size {
            println!("after deleting ({u}, {v}): reachability set size {size}");
            last_size = size;
        }
    }
    // Deleting a probabilistic edge is refused and changes nothing.
    let bad = gr.edges().iter().copied().find(|&(u, _)| gr.is_probabilistic(u));
    if let Some((u, v)) = bad {
        println!("refused: {}", asr.delete_edge(u, v).unwrap_err());
    }

    // Same sweep on the end-component side, against the original graph.
    for (u, v) in g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, _)| !g.is_probabilistic(u))
    {
        mec.delete_edge(u, v).expect("player-1 edges delete cleanly");
    }

    // Both structures agree with from-scratch recomputation on the
    // graphs as they now stand.
    assert_eq!(asr.asr_set(), asr_fixpoint(&asr.current_graph(), s).0);
    assert_eq!(mec.decomposition(), &mec_iterative(&mec.current_graph()).0);
    println!("final reachability set size:   {}", asr.asr_set().len());
    println!("final component count:         {}", mec.decomposition().mecs.len());

    // The whole deletion sequence stayed within the per-edge budget.
    let asr_stats = asr.stats();
    let mec_stats = mec.stats();
    println!(
        "asr: {} deletions, {} edges inspected (budget 4m = {})",
        asr_stats.deletions,
        asr_stats.edges_inspected,
        4 * gr.m()
    );
    println!(
        "mec: {} deletions, {} edges inspected (budget 4m = {})",
        mec_stats.deletions,
        mec_stats.edges_inspected,
        4 * g.m()
    );
}
