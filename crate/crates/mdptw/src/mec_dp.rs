//! Maximal end-component decomposition, including the dynamic program
//! over nice tree decompositions. The decomposition type and its
//! oracle-free verifier live here too, shared with the iterative
//! baseline.

use thiserror::Error;

use crate::asr_dp::{forward_reach_within, subtree_vertex_sets};
use crate::decomposition::NiceTreeDecomposition;
use crate::dp_core::{run_dp, DpConfig, DpError, DpStats, DpTables, RuleArena, RuleId};
use crate::mdp::{compute_sccs_of, MdpGraph};

/// A maximal end-component decomposition in canonical form: every
/// component's vertex list ascends, components are ordered by smallest
/// member, and `unassigned` lists the leftover vertices in ascending
/// order. Two decompositions are equal exactly when they agree as sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MecDecomposition {
    pub mecs: Vec<Vec<usize>>,
    pub unassigned: Vec<usize>,
}

impl MecDecomposition {
    /// Canonicalizes `mecs` and derives `unassigned` from the vertex
    /// count `n`.
    pub fn new(mut mecs: Vec<Vec<usize>>, n: usize) -> Self {
        let mut assigned = vec![false; n];
        for mec in &mut mecs {
            mec.sort_unstable();
            for &v in mec.iter() {
                assigned[v] = true;
            }
        }
        mecs.sort();
        let unassigned = (0..n).filter(|&v| !assigned[v]).collect();
        MecDecomposition { mecs, unassigned }
    }

    /// True when every component of `self` sits inside a single
    /// component of `older`. Deleting player-1 edges can only refine a
    /// decomposition, so this holds between consecutive answers of the
    /// decremental algorithm.
    pub fn is_refinement_of(&self, older: &MecDecomposition) -> bool {
        let mut assignment: Vec<Option<usize>> = Vec::new();
        for (id, mec) in older.mecs.iter().enumerate() {
            for &v in mec {
                if v >= assignment.len() {
                    assignment.resize(v + 1, None);
                }
                assignment[v] = Some(id);
            }
        }
        self.mecs.iter().all(|mec| {
            let home = mec
                .first()
                .and_then(|&v| assignment.get(v).copied().flatten());
            home.is_some()
                && mec.iter().all(|&v| {
                    assignment.get(v).copied().flatten() == home
                })
        })
    }
}

/// Violations reported by [`verify_mec_decomposition`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MecViolation {
    #[error("component listing vertex {v} is empty or out of range")]
    MalformedComponent { v: usize },
    #[error("vertex {v} appears in two components")]
    Overlap { v: usize },
    #[error("component containing {v} is not strongly connected")]
    NotStronglyConnected { v: usize },
    #[error("singleton component {v} lacks a self-loop")]
    SingletonWithoutSelfLoop { v: usize },
    #[error("probabilistic vertex {from} escapes its component via edge to {to}")]
    ProbabilisticEscape { from: usize, to: usize },
    #[error("unassigned list disagrees with the components at vertex {v}")]
    UnassignedMismatch { v: usize },
}

/// Checks that each listed component really is an end-component (induced
/// subgraph strongly connected, sustains an infinite run, probabilistic
/// members closed over the full edge set) and that the sets partition
/// cleanly. Maximality is not checked; differential tests cover it.
pub fn verify_mec_decomposition(
    g: &MdpGraph,
    d: &MecDecomposition,
) -> Result<(), MecViolation> {
    let n = g.n();
    let mut seen = vec![false; n];
    for mec in &d.mecs {
        if mec.is_empty() {
            return Err(MecViolation::MalformedComponent { v: usize::MAX });
        }
        let mut member = vec![false; n];
        for &v in mec {
            if v >= n {
                return Err(MecViolation::MalformedComponent { v });
            }
            if seen[v] {
                return Err(MecViolation::Overlap { v });
            }
            seen[v] = true;
            member[v] = true;
        }
        if mec.len() == 1 {
            let v = mec[0];
            if !g.has_edge(v, v) {
                return Err(MecViolation::SingletonWithoutSelfLoop { v });
            }
        } else {
            let adj: Vec<Vec<usize>> = (0..n)
                .map(|v| {
                    if member[v] {
                        g.out(v).iter().copied().filter(|&w| member[w]).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            let sccs = compute_sccs_of(n, |v| adj[v].as_slice());
            let first = sccs.comp_of[mec[0]];
            if mec.iter().any(|&v| sccs.comp_of[v] != first) {
                return Err(MecViolation::NotStronglyConnected { v: mec[0] });
            }
        }
        for &u in mec {
            if g.is_probabilistic(u) {
                for &v in g.out(u) {
                    if !member[v] {
                        return Err(MecViolation::ProbabilisticEscape { from: u, to: v });
                    }
                }
            }
        }
    }
    let mut unassigned_iter = d.unassigned.iter().copied().peekable();
    for v in 0..n {
        let listed = unassigned_iter.peek() == Some(&v);
        if listed {
            unassigned_iter.next();
        }
        if listed == seen[v] {
            return Err(MecViolation::UnassignedMismatch { v });
        }
    }
    if unassigned_iter.next().is_some() {
        return Err(MecViolation::UnassignedMismatch { v: n });
    }
    Ok(())
}

/// Output of [`compute_mec`]: the decomposition plus work counters.
#[derive(Clone, Debug)]
pub struct MecResult {
    pub decomposition: MecDecomposition,
    pub stats: DpStats,
}

/// Computes the maximal end-component decomposition of `g` over a nice
/// decomposition with a singleton root bag.
///
/// Tables hold, per node and valid bag subset, a vertex set below the
/// node whose members can all cycle through the subset; no global target
/// is involved, so the empty subset is admitted and forgetting a vertex
/// demands closure paths in both directions. Components are then read
/// off the singleton-subset entries from the root downward.
pub fn compute_mec(g: &MdpGraph, ntd: &NiceTreeDecomposition) -> Result<MecResult, DpError> {
    let (result, _) = compute_mec_inner(g, ntd, false)?;
    Ok(result)
}

/// Like [`compute_mec`] but also returns every node's table for
/// verification; memory grows with (nodes x subsets).
pub fn compute_mec_with_tables(
    g: &MdpGraph,
    ntd: &NiceTreeDecomposition,
) -> Result<(MecResult, DpTables), DpError> {
    let (result, tables) = compute_mec_inner(g, ntd, true)?;
    Ok((result, tables.expect("retention requested")))
}

fn compute_mec_inner(
    g: &MdpGraph,
    ntd: &NiceTreeDecomposition,
    retain: bool,
) -> Result<(MecResult, Option<DpTables>), DpError> {
    assert_eq!(
        ntd.nodes[ntd.root].bag.len(),
        1,
        "extraction needs a singleton root bag"
    );
    debug_assert!(crate::decomposition::validate_nice(ntd, g).is_ok());
    let cfg = DpConfig {
        require: None,
        backward_check: true,
        retain_rules: true,
        retain_closures: retain,
    };
    let mut outcome = run_dp(g, ntd, &cfg)?;
    let rules = outcome.rules.take().expect("rule retention requested");
    let decomposition = extract_mecs(g, ntd, &rules, &mut outcome.arena);
    debug_assert!(verify_mec_decomposition(g, &decomposition).is_ok());
    let result = MecResult { decomposition, stats: outcome.stats };
    let tables = outcome
        .snapshots
        .take()
        .map(|entries| DpTables { entries, arena: outcome.arena });
    Ok((result, tables))
}

/// Reads components off the tables: scan singleton-subset entries from
/// the rootmost node down (ties by node id, then vertex id), expand each
/// candidate whose vertex is still unassigned, and keep the expansion
/// when it stands as an end-component on its own.
///
/// Two local checks close the gaps the tables cannot see. A singleton
/// expansion is a component only with a self-loop. And when the anchor
/// vertex is probabilistic, its edges to vertices outside the node's
/// subtree were never inspected by any bag test, so the whole out-edge
/// set is re-checked against the expansion; interior vertices need no
/// such check because all their edges end inside the subtree.
fn extract_mecs(
    g: &MdpGraph,
    ntd: &NiceTreeDecomposition,
    rules: &[Vec<(u64, RuleId)>],
    arena: &mut RuleArena,
) -> MecDecomposition {
    let depths = ntd.depths();
    let mut candidates: Vec<(usize, usize, usize, RuleId)> = Vec::new();
    for (d, entries) in rules.iter().enumerate() {
        for &(mask, rule) in entries {
            if mask.count_ones() == 1 {
                let pos = mask.trailing_zeros() as usize;
                candidates.push((depths[d], d, ntd.nodes[d].bag[pos], rule));
            }
        }
    }
    candidates.sort_unstable();
    let mut assigned = vec![false; g.n()];
    let mut mecs = Vec::new();
    for (_, _, v, rule) in candidates {
        if assigned[v] {
            continue;
        }
        let set = arena.expand(rule);
        if set.len() == 1 && !g.has_edge(v, v) {
            continue;
        }
        if g.is_probabilistic(v)
            && !g.out(v).iter().all(|w| set.binary_search(w).is_ok())
        {
            continue;
        }
        assert!(
            set.iter().all(|&u| !assigned[u]),
            "extracted components must not overlap"
        );
        for &u in &set {
            assigned[u] = true;
        }
        mecs.push(set);
    }
    MecDecomposition::new(mecs, g.n())
}

/// Re-derives every retained table entry from its expansion: bag trace,
/// subtree containment, probabilistic closure, paths to and from the
/// subset, and the stored closure matrix. Returns the first mismatch.
pub fn verify_mec_tables(
    g: &MdpGraph,
    ntd: &NiceTreeDecomposition,
    tables: &mut DpTables,
) -> Result<(), String> {
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
            for (i, &v) in bag.iter().enumerate() {
                if member[v] != (snap.mask >> i & 1 == 1) {
                    return Err(format!("{}: bag trace mismatch at vertex {v}", ctx()));
                }
            }
            if set.iter().any(|&v| !below[d][v]) {
                return Err(format!("{}: expansion leaves the subtree", ctx()));
            }
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
            // Paths to the subset (backward walk) and from the subset
            // (forward walk) must cover every member; for the empty
            // subset this forces the empty expansion.
            let subset_vertices: Vec<usize> = bag
                .iter()
                .enumerate()
                .filter(|&(i, _)| snap.mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let mut to_subset = vec![false; g.n()];
            let mut stack = subset_vertices.clone();
            for &v in &stack {
                to_subset[v] = true;
            }
            while let Some(v) = stack.pop() {
                for &u in g.inn(v) {
                    if member[u] && !to_subset[u] {
                        to_subset[u] = true;
                        stack.push(u);
                    }
                }
            }
            let mut from_subset = vec![false; g.n()];
            let mut stack = subset_vertices.clone();
            for &v in &stack {
                from_subset[v] = true;
            }
            while let Some(v) = stack.pop() {
                for &w in g.out(v) {
                    if member[w] && !from_subset[w] {
                        from_subset[w] = true;
                        stack.push(w);
                    }
                }
            }
            if let Some(&v) = set.iter().find(|&&v| !to_subset[v] || !from_subset[v]) {
                return Err(format!("{}: vertex {v} not cycled through the subset", ctx()));
            }
            for (i, &x) in bag.iter().enumerate() {
                let reach = forward_reach_within(g, &member, x);
                for (j, &y) in bag.iter().enumerate() {
                    let in_subset = snap.mask >> i & 1 == 1 && snap.mask >> j & 1 == 1;
                    let want = in_subset && reach[y];
                    if snap.closure.get(i, j) != want {
                        return Err(format!("{}: closure mismatch at ({x}, {y})", ctx()));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Checks the table-versus-component intersection property: for every
/// component `M` and node `d` whose bag meets `M`, the entry for subset
/// `M ∩ B_d` must exist and expand to exactly the part of `M` inside the
/// node's subtree.
pub fn check_mec_intersections(
    g: &MdpGraph,
    ntd: &NiceTreeDecomposition,
    tables: &mut DpTables,
    mecs: &[Vec<usize>],
) -> Result<(), String> {
    let below = subtree_vertex_sets(ntd, g.n());
    for mec in mecs {
        let mut member = vec![false; g.n()];
        for &v in mec {
            member[v] = true;
        }
        for (d, entries) in tables.entries.iter().enumerate() {
            let bag = &ntd.nodes[d].bag;
            let mut mask = 0u64;
            for (i, &v) in bag.iter().enumerate() {
                if member[v] {
                    mask |= 1 << i;
                }
            }
            if mask == 0 {
                continue;
            }
            let Ok(at) = entries.binary_search_by_key(&mask, |s| s.mask) else {
                return Err(format!(
                    "node {d}: no entry for component subset {mask:#b}"
                ));
            };
            let rule = entries[at].rule;
            let got = tables.arena.expand(rule);
            let want: Vec<usize> =
                mec.iter().copied().filter(|&v| below[d][v]).collect();
            if got != want {
                return Err(format!(
                    "node {d}, subset {mask:#b}: expansion disagrees with the component"
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod dp_tests {
    use super::*;
    use crate::basic::{mec_iterative, subset_oracle_mecs};
    use crate::decomposition::{
        heuristic_decompose, make_nice, root_with_target, Strategy, TreeDecomposition,
    };
    use crate::generate::{generate, GeneratorConfig};
    use crate::mdp::{parse_mdp, Owner};

    fn nice_for(g: &MdpGraph, strategy: Strategy) -> NiceTreeDecomposition {
        make_nice(&heuristic_decompose(g, strategy)).ensure_singleton_root()
    }

    #[test]
    fn fixture_decomposition() {
        let text = "mdp 4 5\nP 2\n0 0\n1 0\n1 2\n2 3\n3 2\n";
        let (g, _) = parse_mdp(text).unwrap();
        for strategy in [Strategy::MinDegree, Strategy::MinFill] {
            let ntd = nice_for(&g, strategy);
            let result = compute_mec(&g, &ntd).unwrap();
            assert_eq!(result.decomposition.mecs, vec![vec![0], vec![2, 3]]);
            assert_eq!(result.decomposition.unassigned, vec![1]);
        }
    }

    #[test]
    fn extraction_rejects_probabilistic_escape_anchors() {
        // 0 <-> 1 with probabilistic 1 escaping to 2: the table entry for
        // {1} below the bag containing 2 expands to {0, 1}, which is not
        // a component because of the escape edge. The anchor check must
        // reject it, leaving only {2}.
        let g = MdpGraph::new(
            vec![Owner::Player1, Owner::Probabilistic, Owner::Player1],
            vec![(0, 1), (1, 0), (1, 2), (2, 2)],
        )
        .unwrap();
        let td = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2]],
            tree_edges: vec![(0, 1)],
        };
        td.validate(&g).unwrap();
        let ntd = make_nice(&td).ensure_singleton_root();
        let result = compute_mec(&g, &ntd).unwrap();
        assert_eq!(result.decomposition.mecs, vec![vec![2]]);
        assert_eq!(result.decomposition.unassigned, vec![0, 1]);
        let (expect, _) = mec_iterative(&g);
        assert_eq!(result.decomposition, expect);
    }

    #[test]
    fn small_shapes() {
        // Singleton with a self-loop: one component.
        let g = MdpGraph::new(vec![Owner::Player1], vec![(0, 0)]).unwrap();
        let r = compute_mec(&g, &nice_for(&g, Strategy::MinDegree)).unwrap();
        assert_eq!(r.decomposition.mecs, vec![vec![0]]);

        // A path (no cycles): nothing qualifies.
        let g = MdpGraph::new(vec![Owner::Player1; 3], vec![(0, 1), (1, 2)]).unwrap();
        let r = compute_mec(&g, &nice_for(&g, Strategy::MinDegree)).unwrap();
        assert!(r.decomposition.mecs.is_empty());
        assert_eq!(r.decomposition.unassigned, vec![0, 1, 2]);

        // One long cycle: a single component covering everything.
        let n = 6;
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        let g = MdpGraph::new(vec![Owner::Player1; n], edges).unwrap();
        let r = compute_mec(&g, &nice_for(&g, Strategy::MinFill)).unwrap();
        assert_eq!(r.decomposition.mecs, vec![(0..n).collect::<Vec<_>>()]);

        // Two vertices, one direction only: nothing.
        let g = MdpGraph::new(vec![Owner::Player1; 2], vec![(0, 1)]).unwrap();
        let r = compute_mec(&g, &nice_for(&g, Strategy::MinDegree)).unwrap();
        assert!(r.decomposition.mecs.is_empty());

        // Two-vertex cycle: one component.
        let g = MdpGraph::new(vec![Owner::Player1; 2], vec![(0, 1), (1, 0)]).unwrap();
        let r = compute_mec(&g, &nice_for(&g, Strategy::MinDegree)).unwrap();
        assert_eq!(r.decomposition.mecs, vec![vec![0, 1]]);
    }

    #[test]
    fn matches_oracles_on_seeded_instances() {
        for seed in 0..60u64 {
            let cfg = GeneratorConfig {
                n: 2 + (seed as usize * 5 % 11),
                k: 1 + (seed as usize % 3),
                p_prob: 0.45,
                edge_density: 0.6,
                p_self_loop: 0.2,
                seed: seed + 500,
            };
            let inst = generate(&cfg);
            let (expect, _) = mec_iterative(&inst.graph);
            let oracle = subset_oracle_mecs(&inst.graph).unwrap();
            assert_eq!(expect, oracle, "seed {seed}: iterative vs subset oracle");

            let ntd = make_nice(&inst.witness).ensure_singleton_root();
            let dp = compute_mec(&inst.graph, &ntd).unwrap();
            assert_eq!(dp.decomposition, expect, "seed {seed}: witness path");

            let strategy =
                if seed % 2 == 0 { Strategy::MinFill } else { Strategy::MinDegree };
            let dp2 = compute_mec(&inst.graph, &nice_for(&inst.graph, strategy)).unwrap();
            assert_eq!(dp2.decomposition, expect, "seed {seed}: heuristic path");
        }
    }

    #[test]
    fn matches_iterative_on_larger_instances() {
        for seed in 0..25u64 {
            let cfg = GeneratorConfig {
                n: 30 + (seed as usize * 3 % 31),
                k: 1 + (seed as usize % 4),
                p_prob: 0.4,
                edge_density: 0.55,
                p_self_loop: 0.1,
                seed: seed + 900,
            };
            let inst = generate(&cfg);
            let (expect, _) = mec_iterative(&inst.graph);
            let ntd = make_nice(&inst.witness).ensure_singleton_root();
            let dp = compute_mec(&inst.graph, &ntd).unwrap();
            assert_eq!(dp.decomposition, expect, "seed {seed}");
            verify_mec_decomposition(&inst.graph, &dp.decomposition).unwrap();
        }
    }

    #[test]
    fn retained_tables_pass_verification_and_intersections() {
        for seed in 0..20u64 {
            let cfg = GeneratorConfig {
                n: 2 + (seed as usize % 11),
                k: 1 + (seed as usize % 3),
                p_prob: 0.5,
                edge_density: 0.65,
                p_self_loop: 0.2,
                seed: seed + 7000,
            };
            let inst = generate(&cfg);
            let ntd = make_nice(&inst.witness).ensure_singleton_root();
            let (result, mut tables) = compute_mec_with_tables(&inst.graph, &ntd).unwrap();
            verify_mec_tables(&inst.graph, &ntd, &mut tables).unwrap();
            let (expect, _) = mec_iterative(&inst.graph);
            assert_eq!(result.decomposition, expect, "seed {seed}");
            check_mec_intersections(&inst.graph, &ntd, &mut tables, &expect.mecs).unwrap();
        }
    }

    #[test]
    fn root_with_target_pipeline_also_feeds_mec() {
        // The target-rooted form is a nice decomposition with singleton
        // root; the component tables accept it.
        let text = "mdp 4 5\nP 2\n0 0\n1 0\n1 2\n2 3\n3 2\n";
        let (g, _) = parse_mdp(text).unwrap();
        let ntd = make_nice(&heuristic_decompose(&g, Strategy::MinDegree));
        let rtd = root_with_target(&ntd, 0);
        let result = compute_mec(&g, &rtd.nice).unwrap();
        assert_eq!(result.decomposition.mecs, vec![vec![0], vec![2, 3]]);
    }
}
