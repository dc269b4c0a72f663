//! Baseline algorithms and brute-force oracles.
//!
//! Everything here favors being obviously correct over being fast: the
//! iterative algorithms recompute global structure each round, and the
//! subset oracles enumerate all vertex subsets outright. The rest of the
//! crate is tested against these functions, so they deliberately share no
//! code with the tree-decomposition or decremental paths.

use thiserror::Error;

use crate::mdp::{compute_sccs_of, MdpGraph};
use crate::mec_dp::MecDecomposition;

/// One vertex removal performed by an iterative algorithm, with the edge
/// that witnessed the violated condition at that round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Removal {
    pub vertex: usize,
    pub witness_edge: (usize, usize),
}

/// Removals in the order they were applied.
pub type RemovalTrace = Vec<Removal>;

/// Violations reported by [`check_asr_definition`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AsrViolation {
    #[error("set is nonempty but does not contain the target {s}")]
    MissingTarget { s: usize },
    #[error("vertex {vertex} has no path to the target inside the set")]
    GlobalUnreachable { vertex: usize },
    #[error("probabilistic vertex {from} escapes the set via edge to {to}")]
    LocalEscape { from: usize, to: usize },
}

/// Errors from the exhaustive oracles, which only run on tiny graphs.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("subset oracle only runs on graphs with at most {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
}

const ORACLE_MAX_N: usize = 15;

/// Checks the two conditions defining an almost-sure reachability set
/// directly on `set`: every member can reach `s` without leaving the set,
/// and no probabilistic member has an edge escaping the set. The empty
/// set passes vacuously. Maximality is not checked.
pub fn check_asr_definition(
    g: &MdpGraph,
    s: usize,
    set: &[usize],
) -> Result<(), AsrViolation> {
    if set.is_empty() {
        return Ok(());
    }
    let mut member = vec![false; g.n()];
    for &v in set {
        member[v] = true;
    }
    if !member[s] {
        return Err(AsrViolation::MissingTarget { s });
    }
    for &u in set {
        if g.is_probabilistic(u) {
            for &v in g.out(u) {
                if !member[v] {
                    return Err(AsrViolation::LocalEscape { from: u, to: v });
                }
            }
        }
    }
    // Backward search from s restricted to the set.
    let mut reaches = vec![false; g.n()];
    reaches[s] = true;
    let mut queue = vec![s];
    while let Some(v) = queue.pop() {
        for &u in g.inn(v) {
            if member[u] && !reaches[u] {
                reaches[u] = true;
                queue.push(u);
            }
        }
    }
    for &v in set {
        if !reaches[v] {
            return Err(AsrViolation::GlobalUnreachable { vertex: v });
        }
    }
    Ok(())
}

/// Almost-sure reachability by global fixpoint iteration.
///
/// Each round recomputes the set `A` of survivors with a path to `s`,
/// then removes every probabilistic member of `A` that has an original
/// out-edge whose head lies outside `A` (removed heads count). Rounds
/// repeat until no such vertex exists; the final `A` is the answer.
pub fn asr_fixpoint(g: &MdpGraph, s: usize) -> (Vec<usize>, RemovalTrace) {
    let n = g.n();
    assert!(s < n, "vertex {s} out of range");
    let mut alive = vec![true; n];
    let mut trace = RemovalTrace::new();
    loop {
        let in_a = reachable_to_among(g, s, &alive);
        let mut round: Vec<Removal> = Vec::new();
        for u in 0..n {
            if !in_a[u] || !g.is_probabilistic(u) {
                continue;
            }
            for &v in g.out(u) {
                if !in_a[v] {
                    round.push(Removal { vertex: u, witness_edge: (u, v) });
                    break;
                }
            }
        }
        if round.is_empty() {
            let set = (0..n).filter(|&v| in_a[v]).collect();
            return (set, trace);
        }
        for r in &round {
            alive[r.vertex] = false;
        }
        trace.extend(round);
    }
}

/// Vertices with a path to `s` using only `alive` vertices. All false if
/// `s` itself is not alive.
fn reachable_to_among(g: &MdpGraph, s: usize, alive: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    if !alive[s] {
        return seen;
    }
    seen[s] = true;
    let mut queue = vec![s];
    while let Some(v) = queue.pop() {
        for &u in g.inn(v) {
            if alive[u] && !seen[u] {
                seen[u] = true;
                queue.push(u);
            }
        }
    }
    seen
}

/// Maximal end-component decomposition by global fixpoint iteration.
///
/// Each round recomputes strongly connected components of the surviving
/// subgraph and removes every probabilistic survivor with an original
/// out-edge leaving its component (or pointing at a removed vertex).
/// When no such vertex remains, the surviving components that can sustain
/// an infinite run (size two or more, or a singleton with a self-loop)
/// are the maximal end-components.
pub fn mec_iterative(g: &MdpGraph) -> (MecDecomposition, RemovalTrace) {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut trace = RemovalTrace::new();
    loop {
        let adj = surviving_adjacency(g, &alive);
        let sccs = compute_sccs_of(n, |v| adj[v].as_slice());
        let mut round: Vec<Removal> = Vec::new();
        for u in 0..n {
            if !alive[u] || !g.is_probabilistic(u) {
                continue;
            }
            for &v in g.out(u) {
                if !alive[v] || sccs.comp_of[u] != sccs.comp_of[v] {
                    round.push(Removal { vertex: u, witness_edge: (u, v) });
                    break;
                }
            }
        }
        if round.is_empty() {
            let mut mecs = Vec::new();
            for comp in &sccs.components {
                if !alive[comp[0]] {
                    continue;
                }
                if comp.len() >= 2 || g.has_edge(comp[0], comp[0]) {
                    mecs.push(comp.clone());
                }
            }
            return (MecDecomposition::new(mecs, n), trace);
        }
        for r in &round {
            alive[r.vertex] = false;
        }
        trace.extend(round);
    }
}

fn surviving_adjacency(g: &MdpGraph, alive: &[bool]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.n()];
    for v in 0..g.n() {
        if !alive[v] {
            continue;
        }
        adj[v] = g.out(v).iter().copied().filter(|&w| alive[w]).collect();
    }
    adj
}

/// Exhaustive almost-sure reachability: the union of every subset
/// containing `s` that satisfies both defining conditions. Only for
/// graphs with at most 15 vertices.
pub fn subset_oracle_asr(g: &MdpGraph, s: usize) -> Result<Vec<usize>, OracleError> {
    let n = g.n();
    if n > ORACLE_MAX_N {
        return Err(OracleError::TooLarge { n, max: ORACLE_MAX_N });
    }
    assert!(s < n, "vertex {s} out of range");
    let out_masks = out_masks(g);
    let mut union = 0u32;
    for mask in 0..(1u32 << n) {
        if mask >> s & 1 == 0 {
            continue;
        }
        if satisfies_asr(g, s, mask, &out_masks) {
            union |= mask;
        }
    }
    Ok((0..n).filter(|&v| union >> v & 1 == 1).collect())
}

fn out_masks(g: &MdpGraph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.out(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect()
}

fn satisfies_asr(g: &MdpGraph, s: usize, mask: u32, out_masks: &[u32]) -> bool {
    for v in 0..g.n() {
        if mask >> v & 1 == 1 && g.is_probabilistic(v) && out_masks[v] & !mask != 0 {
            return false;
        }
    }
    // Everyone in the set must reach s inside the set.
    let mut reached = 1u32 << s;
    loop {
        let mut grew = false;
        for v in 0..g.n() {
            if mask >> v & 1 == 1 && reached >> v & 1 == 0 && out_masks[v] & reached != 0 {
                reached |= 1 << v;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    mask & !reached == 0
}

/// Exhaustive maximal end-component decomposition for graphs with at most
/// 15 vertices: enumerates every subset that is an end-component and
/// keeps the inclusion-maximal ones.
pub fn subset_oracle_mecs(g: &MdpGraph) -> Result<MecDecomposition, OracleError> {
    let n = g.n();
    if n > ORACLE_MAX_N {
        return Err(OracleError::TooLarge { n, max: ORACLE_MAX_N });
    }
    let out_masks = out_masks(g);
    let mut ecs: Vec<u32> = Vec::new();
    for mask in 1..(1u32 << n) {
        if is_end_component(g, mask, &out_masks) {
            ecs.push(mask);
        }
    }
    let maximal: Vec<u32> = ecs
        .iter()
        .copied()
        .filter(|&m| !ecs.iter().any(|&o| o != m && o & m == m))
        .collect();
    let mecs = maximal
        .into_iter()
        .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    Ok(MecDecomposition::new(mecs, n))
}

fn is_end_component(g: &MdpGraph, mask: u32, out_masks: &[u32]) -> bool {
    let n = g.n();
    for v in 0..n {
        if mask >> v & 1 == 1 && g.is_probabilistic(v) && out_masks[v] & !mask != 0 {
            return false;
        }
    }
    let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    if members.len() == 1 {
        let v = members[0];
        return g.has_edge(v, v);
    }
    // Strong connectivity of the induced subgraph, checked from one root.
    let root = members[0];
    let forward = bit_reach(root, mask, |v| out_masks[v] & mask);
    if forward != mask {
        return false;
    }
    let mut in_masks = vec![0u32; n];
    for &(u, v) in g.edges() {
        if mask >> u & 1 == 1 && mask >> v & 1 == 1 {
            in_masks[v] |= 1 << u;
        }
    }
    bit_reach(root, mask, |v| in_masks[v] & mask) == mask
}

fn bit_reach(root: usize, mask: u32, step: impl Fn(usize) -> u32) -> u32 {
    let mut reached = 1u32 << root;
    let mut frontier = reached;
    while frontier != 0 {
        let mut next = 0u32;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= step(v);
        }
        frontier = next & mask & !reached;
        reached |= frontier;
    }
    reached
}
