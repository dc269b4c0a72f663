//! Almost-sure reachability by dynamic programming over a target-rooted
//! nice decomposition.
//!
//! The table at node `d` answers, for every valid bag subset `B'`: which
//! vertex set below `d` can stay forever-safe while touching the bag in
//! exactly `B'`? The engine in `dp_core` fills those tables; this module
//! wraps it, expands the root entry, and offers a from-scratch verifier
//! for the retained tables.

use crate::basic::check_asr_definition;
use crate::decomposition::RootedTargetDecomposition;
use crate::dp_core::{run_dp, DpConfig, DpError, DpStats, DpTables};
use crate::mdp::MdpGraph;

/// Output of [`compute_asr`]: the almost-sure reachability set of the
/// (reduced) target plus work counters.
#[derive(Clone, Debug)]
pub struct AsrResult {
    /// Ascending vertex ids; always contains the target.
    pub asr: Vec<usize>,
    pub stats: DpStats,
}

/// Computes the almost-sure reachability set of `rtd.s` over `g`.
///
/// The result is checked against the defining conditions before it is
/// returned; a violation means a table bug and panics.
pub fn compute_asr(g: &MdpGraph, rtd: &RootedTargetDecomposition) -> Result<AsrResult, DpError> {
    let (result, _) = compute_asr_inner(g, rtd, false)?;
    Ok(result)
}

/// Like [`compute_asr`] but also returns every node's table for
/// verification; memory grows with (nodes x subsets), so keep inputs
/// small.
pub fn compute_asr_with_tables(
    g: &MdpGraph,
    rtd: &RootedTargetDecomposition,
) -> Result<(AsrResult, DpTables), DpError> {
    let (result, tables) = compute_asr_inner(g, rtd, true)?;
    Ok((result, tables.expect("retention requested")))
}

fn compute_asr_inner(
    g: &MdpGraph,
    rtd: &RootedTargetDecomposition,
    retain: bool,
) -> Result<(AsrResult, Option<DpTables>), DpError> {
    debug_assert!(rtd.validate(g).is_ok(), "decomposition must be valid for the graph");
    let cfg = DpConfig {
        require: Some(rtd.s),
        backward_check: false,
        retain_rules: false,
        retain_closures: retain,
    };
    let mut outcome = run_dp(g, &rtd.nice, &cfg)?;
    // The root bag is exactly {s}, whose only valid subset is mask 1;
    // that entry survives every transition, so it is always present.
    let rule = outcome
        .root
        .iter()
        .find(|&&(mask, _)| mask == 1)
        .map(|&(_, rule)| rule)
        .expect("root entry for the target must exist");
    let asr = outcome.arena.expand(rule);
    if let Err(violation) = check_asr_definition(g, rtd.s, &asr) {
        panic!("computed set violates the defining conditions: {violation}");
    }
    let result = AsrResult { asr, stats: outcome.stats };
    let tables = outcome
        .snapshots
        .take()
        .map(|entries| DpTables { entries, arena: outcome.arena });
    Ok((result, tables))
}

/// Vertices that appear in any bag of each node's subtree.
pub(crate) fn subtree_vertex_sets(
    ntd: &crate::decomposition::NiceTreeDecomposition,
    n: usize,
) -> Vec<Vec<bool>> {
    let mut sets = vec![Vec::new(); ntd.nodes.len()];
    for d in ntd.postorder() {
        let mut set = vec![false; n];
        for &c in &ntd.nodes[d].children {
            for (v, &present) in sets[c].iter().enumerate() {
                if present {
                    set[v] = true;
                }
            }
        }
        for &v in &ntd.nodes[d].bag {
            set[v] = true;
        }
        sets[d] = set;
    }
    sets
}

pub(crate) fn forward_reach_within(g: &MdpGraph, member: &[bool], from: usize) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    if !member[from] {
        return seen;
    }
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &w in g.out(v) {
            if member[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Re-derives every retained table entry from its expansion and checks
/// it: the expansion touches the bag in exactly the stored subset, stays
/// inside the node's subtree, satisfies the partial safety conditions,
/// and reproduces the stored closure. Returns the first mismatch.
pub fn verify_asr_tables(
    g: &MdpGraph,
    rtd: &RootedTargetDecomposition,
    tables: &mut DpTables,
) -> Result<(), String> {
    let ntd = &rtd.nice;
    let below = subtree_vertex_sets(ntd, g.n());
    for (d, entries) in tables.entries.iter().enumerate() {
        let bag = &ntd.nodes[d].bag;
        for snap in entries {
            let set = tables.arena.expand(snap.rule);
            let ctx = || format!("node {d}, subset {:#b}", snap.mask);
            let mut member = vec![false; g.n()];
            for &v in &set {
                member[v] = true;
            }
            if !set.contains(&rtd.s) {
                return Err(format!("{}: target missing from expansion", ctx()));
            }
            for (i, &v) in bag.iter().enumerate() {
                if member[v] != (snap.mask >> i & 1 == 1) {
                    return Err(format!("{}: bag trace mismatch at vertex {v}", ctx()));
                }
            }
            if set.iter().any(|&v| !below[d][v]) {
                return Err(format!("{}: expansion leaves the subtree", ctx()));
            }
            // Probabilistic members must keep all their edges that stay
            // under this subtree inside the set.
            for &v in &set {
                if !g.is_probabilistic(v) {
                    continue;
                }
                for &w in g.out(v) {
                    if below[d][w] && !member[w] {
                        return Err(format!(
                            "{}: probabilistic vertex {v} escapes to {w}",
                            ctx()
                        ));
                    }
                }
            }
            // Every member must reach a bag vertex of the subset (the
            // target always sits in the bag) inside the set.
            let mut absorbed = vec![false; g.n()];
            let mut stack = Vec::new();
            for (i, &v) in bag.iter().enumerate() {
                if snap.mask >> i & 1 == 1 {
                    absorbed[v] = true;
                    stack.push(v);
                }
            }
            while let Some(v) = stack.pop() {
                for &u in g.inn(v) {
                    if member[u] && !absorbed[u] {
                        absorbed[u] = true;
                        stack.push(u);
                    }
                }
            }
            if set.iter().any(|&v| !absorbed[v]) {
                return Err(format!("{}: member cannot reach the bag subset", ctx()));
            }
            // Stored closure versus one recomputed from the expansion.
            for (i, &x) in bag.iter().enumerate() {
                let reach = forward_reach_within(g, &member, x);
                for (j, &y) in bag.iter().enumerate() {
                    let in_subset =
                        snap.mask >> i & 1 == 1 && snap.mask >> j & 1 == 1;
                    let want = in_subset && reach[y];
                    if snap.closure.get(i, j) != want {
                        return Err(format!(
                            "{}: closure mismatch at ({x}, {y})",
                            ctx()
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basic::{asr_fixpoint, subset_oracle_asr};
    use crate::decomposition::{
        heuristic_decompose, make_nice, root_with_target, Strategy,
    };
    use crate::generate::{generate, GeneratorConfig};
    use crate::mdp::{parse_mdp, reduce_target, Owner};

    fn rtd_for(g: &MdpGraph, s: usize, strategy: Strategy) -> RootedTargetDecomposition {
        root_with_target(&make_nice(&heuristic_decompose(g, strategy)), s)
    }

    #[test]
    fn fixture_reduced_at_zero() {
        let text = "mdp 4 5\nP 2\n0 0\n1 0\n1 2\n2 3\n3 2\nt 1 0\n";
        let (g, targets) = parse_mdp(text).unwrap();
        let (gr, s) = reduce_target(&g, &targets.unwrap()).unwrap();
        for strategy in [Strategy::MinDegree, Strategy::MinFill] {
            let rtd = rtd_for(&gr, s, strategy);
            rtd.validate(&gr).unwrap();
            let result = compute_asr(&gr, &rtd).unwrap();
            assert_eq!(result.asr, vec![0, 1, 4]);
            assert!(result.stats.nodes > 0);
            assert!(result.stats.closures <= result.stats.subsets);
        }
    }

    #[test]
    fn single_vertex_graph() {
        let g = MdpGraph::new(vec![Owner::Player1], vec![(0, 0)]).unwrap();
        let rtd = rtd_for(&g, 0, Strategy::MinDegree);
        let result = compute_asr(&g, &rtd).unwrap();
        assert_eq!(result.asr, vec![0]);
    }

    #[test]
    fn matches_fixpoint_and_oracle_on_seeded_instances() {
        for seed in 0..60u64 {
            let cfg = GeneratorConfig {
                n: 2 + (seed as usize * 7 % 11),
                k: 1 + (seed as usize % 3),
                p_prob: 0.45,
                edge_density: 0.55 + 0.4 * (seed as f64 % 3.0) / 3.0,
                p_self_loop: 0.1,
                seed,
            };
            let inst = generate(&cfg);
            let (gr, s) = reduce_target(&inst.graph, &inst.targets).unwrap();
            let (expect, _) = asr_fixpoint(&gr, s);
            let oracle = subset_oracle_asr(&gr, s).unwrap();
            assert_eq!(expect, oracle, "seed {seed}: fixpoint vs subset oracle");

            // Witness-based decomposition of the original graph.
            let rtd = root_with_target(&make_nice(&inst.witness), s);
            rtd.validate(&gr).unwrap();
            let dp = compute_asr(&gr, &rtd).unwrap();
            assert_eq!(dp.asr, expect, "seed {seed}: witness path");

            // Heuristic decomposition of the reduced graph.
            let strategy =
                if seed % 2 == 0 { Strategy::MinDegree } else { Strategy::MinFill };
            let rtd2 = rtd_for(&gr, s, strategy);
            let dp2 = compute_asr(&gr, &rtd2).unwrap();
            assert_eq!(dp2.asr, expect, "seed {seed}: heuristic path");

            let max_bag = rtd.nice.width() + 1;
            assert!(dp.stats.subsets <= dp.stats.nodes * (1 << max_bag));
            assert!(dp.stats.closures <= dp.stats.subsets);
        }
    }

    #[test]
    fn retained_tables_pass_verification() {
        for seed in 0..25u64 {
            let cfg = GeneratorConfig {
                n: 2 + (seed as usize % 9),
                k: 1 + (seed as usize % 3),
                p_prob: 0.5,
                edge_density: 0.6,
                p_self_loop: 0.15,
                seed: seed + 1000,
            };
            let inst = generate(&cfg);
            let (gr, s) = reduce_target(&inst.graph, &inst.targets).unwrap();
            let rtd = root_with_target(&make_nice(&inst.witness), s);
            let (result, mut tables) = compute_asr_with_tables(&gr, &rtd).unwrap();
            verify_asr_tables(&gr, &rtd, &mut tables).unwrap();
            let (expect, _) = asr_fixpoint(&gr, s);
            assert_eq!(result.asr, expect, "seed {seed}");
        }
    }

    #[test]
    fn width_guard_refuses_huge_bags() {
        // A clique forces one bag with all vertices.
        let n = 20;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    edges.push((i, j));
                }
            }
        }
        edges.push((0, 0));
        let g = MdpGraph::new(vec![Owner::Player1; n], edges).unwrap();
        let rtd = rtd_for(&g, 0, Strategy::MinDegree);
        assert!(matches!(
            compute_asr(&g, &rtd),
            Err(DpError::WidthTooLarge { .. })
        ));
    }
}
