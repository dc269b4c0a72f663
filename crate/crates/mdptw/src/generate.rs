//! Seeded random instances with known treewidth bounds.
//!
//! Instances are built by thinning a random k-tree: start from a clique
//! on `k+1` vertices, repeatedly attach a fresh vertex to a random
//! existing k-clique, then keep each skeleton edge with probability
//! `edge_density` and orient it (one way, the other, or both). Because
//! every kept edge lives inside some skeleton clique, the k-tree bags are
//! a valid width-`k` decomposition of whatever survives, and eliminating
//! vertices in reverse creation order certifies the same width.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use crate::decomposition::TreeDecomposition;
use crate::mdp::{MdpGraph, Owner};

/// Parameters for [`generate`]. The same config always produces the same
/// instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    /// Vertex count, at least 1.
    pub n: usize,
    /// Skeleton clique parameter, at least 1; the witness width is
    /// `min(n - 1, k)`.
    pub k: usize,
    /// Probability that a vertex is probabilistic.
    pub p_prob: f64,
    /// Probability that each skeleton edge survives thinning.
    pub edge_density: f64,
    /// Probability of a self-loop per vertex.
    pub p_self_loop: f64,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n: 10,
            k: 3,
            p_prob: 0.4,
            edge_density: 0.8,
            p_self_loop: 0.1,
            seed: 0,
        }
    }
}

/// A generated graph plus certificates of its treewidth bound.
#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub graph: MdpGraph,
    /// K-tree bags; always valid for `graph` with width `min(n - 1, k)`.
    pub witness: TreeDecomposition,
    /// Reverse creation order; eliminating along it stays within width
    /// `k` on `graph`.
    pub elimination_order: Vec<usize>,
    /// Random non-empty target set (at most three vertices).
    pub targets: Vec<usize>,
}

/// Builds the instance described by `cfg`.
pub fn generate(cfg: &GeneratorConfig) -> GeneratedInstance {
    assert!(cfg.n >= 1, "need at least one vertex");
    assert!(cfg.k >= 1, "need k >= 1");
    for p in [cfg.p_prob, cfg.edge_density, cfg.p_self_loop] {
        assert!((0.0..=1.0).contains(&p), "probabilities must be in [0, 1]");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n;
    let base = n.min(cfg.k + 1);

    let mut skeleton: Vec<(usize, usize)> = Vec::new();
    for i in 0..base {
        for j in i + 1..base {
            skeleton.push((i, j));
        }
    }
    // creation[v]: the clique v was attached to, used for fix-up edges.
    let mut creation: Vec<Vec<usize>> = (0..base)
        .map(|v| (0..base).filter(|&u| u != v).collect())
        .collect();
    let mut bags: Vec<Vec<usize>> = vec![(0..base).collect()];
    let mut tree_edges: Vec<(usize, usize)> = Vec::new();
    // All k-cliques of the skeleton, each with the bag that contains it.
    let mut cliques: Vec<(Vec<usize>, usize)> = Vec::new();
    if base == cfg.k + 1 {
        for omit in 0..base {
            let members = (0..base).filter(|&u| u != omit).collect();
            cliques.push((members, 0));
        }
    }
    for v in base..n {
        let (clique, home) = cliques[rng.gen_range(0..cliques.len())].clone();
        let bag_index = bags.len();
        let mut bag = clique.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        tree_edges.push((bag_index, home));
        for &u in &clique {
            skeleton.push((u, v));
        }
        for omit in 0..clique.len() {
            let mut members: Vec<usize> =
                clique.iter().copied().filter(|&u| u != clique[omit]).collect();
            members.push(v);
            members.sort_unstable();
            cliques.push((members, bag_index));
        }
        creation.push(clique);
    }

    let owners: Vec<Owner> = (0..n)
        .map(|_| {
            if rng.gen::<f64>() < cfg.p_prob {
                Owner::Probabilistic
            } else {
                Owner::Player1
            }
        })
        .collect();

    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(a, b) in &skeleton {
        if rng.gen::<f64>() >= cfg.edge_density {
            continue;
        }
        match rng.gen_range(0..3) {
            0 => {
                edges.insert((a, b));
            }
            1 => {
                edges.insert((b, a));
            }
            _ => {
                edges.insert((a, b));
                edges.insert((b, a));
            }
        }
    }
    for v in 0..n {
        if rng.gen::<f64>() < cfg.p_self_loop {
            edges.insert((v, v));
        }
    }
    // Probabilistic vertices must keep an out-edge; aim one back into the
    // creation clique so the witness still covers it.
    for v in 0..n {
        if owners[v] == Owner::Probabilistic && !edges.iter().any(|&(u, _)| u == v) {
            let head = if creation[v].is_empty() {
                v
            } else {
                creation[v][rng.gen_range(0..creation[v].len())]
            };
            edges.insert((v, head));
        }
    }

    let graph = MdpGraph::new(owners, edges.into_iter().collect())
        .expect("construction keeps probabilistic out-degrees positive");

    let target_count = rng.gen_range(1..=3.min(n));
    let mut targets = BTreeSet::new();
    while targets.len() < target_count {
        targets.insert(rng.gen_range(0..n));
    }

    GeneratedInstance {
        graph,
        witness: TreeDecomposition { bags, tree_edges },
        elimination_order: (0..n).rev().collect(),
        targets: targets.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::decompose_with_elimination_order;

    #[test]
    fn same_seed_same_instance() {
        let cfg = GeneratorConfig { n: 40, k: 3, seed: 7, ..Default::default() };
        let a = generate(&cfg);
        let b = generate(&cfg);
        assert_eq!(a.graph.edges(), b.graph.edges());
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.targets, b.targets);
        let c = generate(&GeneratorConfig { seed: 8, ..cfg });
        assert_ne!(a.graph.edges(), c.graph.edges());
    }

    #[test]
    fn witness_and_order_certify_the_width() {
        for seed in 0..30 {
            let cfg = GeneratorConfig {
                n: 25,
                k: 1 + (seed as usize % 4),
                p_prob: 0.5,
                edge_density: 0.7,
                p_self_loop: 0.15,
                seed,
            };
            let inst = generate(&cfg);
            inst.witness.validate(&inst.graph).unwrap();
            assert!(inst.witness.width() <= cfg.k);
            let td = decompose_with_elimination_order(&inst.graph, &inst.elimination_order);
            td.validate(&inst.graph).unwrap();
            assert!(td.width() <= cfg.k, "width {} > k {}", td.width(), cfg.k);
            assert!(!inst.targets.is_empty());
            assert!(inst.targets.iter().all(|&t| t < cfg.n));
        }
    }

    #[test]
    fn tiny_instances_work() {
        for n in 1..=4 {
            for seed in 0..10 {
                let cfg = GeneratorConfig {
                    n,
                    k: 3,
                    p_prob: 1.0,
                    edge_density: 0.2,
                    p_self_loop: 0.0,
                    seed,
                };
                let inst = generate(&cfg);
                assert_eq!(inst.graph.n(), n);
                inst.witness.validate(&inst.graph).unwrap();
                assert!(inst.witness.width() <= n.saturating_sub(1).min(cfg.k));
            }
        }
    }

    #[test]
    fn density_extremes() {
        let sparse = generate(&GeneratorConfig {
            n: 12,
            k: 2,
            p_prob: 0.0,
            edge_density: 0.0,
            p_self_loop: 0.0,
            seed: 3,
        });
        assert_eq!(sparse.graph.m(), 0);
        let dense = generate(&GeneratorConfig {
            n: 12,
            k: 2,
            p_prob: 0.0,
            edge_density: 1.0,
            p_self_loop: 0.0,
            seed: 3,
        });
        // Every skeleton edge kept in at least one direction: 2 per new
        // vertex plus the base clique.
        assert!(dense.graph.m() >= 3 + 2 * (12 - 3));
        dense.witness.validate(&dense.graph).unwrap();
    }
}
