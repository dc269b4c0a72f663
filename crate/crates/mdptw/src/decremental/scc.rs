//! Strongly connected components under edge deletions.

use std::collections::{HashMap, HashSet};

use crate::decremental::DecrementalError;
use crate::mdp::compute_sccs_of;

/// One component breaking into several, reported by
/// [`DecrementalScc::delete_edge`]. Component ids are never reused, so
/// `old` is stale from this point on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitEvent {
    /// Identifier the broken component had before the deletion.
    pub old: usize,
    /// Fresh identifiers of the replacement components, topologically
    /// ordered: every edge among them goes from an earlier part to a
    /// later one.
    pub parts: Vec<usize>,
    /// The condensation of the broken component: deduplicated part-level
    /// edges, each pair taken from `parts`.
    pub condensation_edges: Vec<(usize, usize)>,
    /// Surviving vertex-level edges whose endpoints shared the old
    /// component and now lie in different parts. Exactly the edges whose
    /// endpoint ids changed from equal to different.
    pub separating_edges: Vec<(usize, usize)>,
}

/// Work counters for the SCC structure. The recompute strategy rescans
/// the broken component on every intra-component deletion, so
/// `edges_scanned` is the honest price of a deletion sequence; it is not
/// bounded by the edge count the way the higher layers' counters are.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SccStats {
    pub deletions: u64,
    pub edges_scanned: u64,
    pub splits: u64,
}

/// Maintains strongly connected components while edges are deleted.
///
/// `scc_id` answers in constant time and ids only ever refine: a
/// deletion inside a component reruns the component-local SCC search
/// and, on a break, hands out fresh ids and reports a [`SplitEvent`].
/// The interface is what callers rely on; the recompute strategy behind
/// it can be swapped for a hierarchical structure without touching them.
pub struct DecrementalScc {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    dead: HashSet<(usize, usize)>,
    comp: Vec<usize>,
    /// Members per component id, each list ascending. Entries for stale
    /// ids are drained and stay empty.
    members: Vec<Vec<usize>>,
    stats: SccStats,
}

impl DecrementalScc {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range");
            out[u].push(v);
        }
        for list in &mut out {
            list.sort_unstable();
            list.dedup();
        }
        for u in 0..n {
            for &v in &out[u] {
                inn[v].push(u);
            }
        }
        for list in &mut inn {
            list.sort_unstable();
        }
        let labeling = compute_sccs_of(n, |v| out[v].as_slice());
        DecrementalScc {
            out,
            inn,
            dead: HashSet::new(),
            comp: labeling.comp_of,
            members: labeling.components,
            stats: SccStats::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.comp.len()
    }

    /// Current component id of `v`. Ids are only comparable for
    /// equality; fresh ids grow past the initial topological numbering.
    pub fn id(&self, v: usize) -> usize {
        self.comp[v]
    }

    /// Ascending members of a current component id.
    pub fn members(&self, id: usize) -> &[usize] {
        &self.members[id]
    }

    pub fn edge_alive(&self, u: usize, v: usize) -> bool {
        u < self.out.len()
            && self.out[u].binary_search(&v).is_ok()
            && !self.dead.contains(&(u, v))
    }

    /// Out-neighbors in the initial graph, deletions ignored.
    pub fn out_base(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// In-neighbors in the initial graph, deletions ignored.
    pub fn in_base(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn stats(&self) -> SccStats {
        self.stats
    }

    /// Deletes one edge. Returns a [`SplitEvent`] when this breaks the
    /// edge's component, `None` otherwise (including every deletion of
    /// an edge between two components).
    pub fn delete_edge(
        &mut self,
        u: usize,
        v: usize,
    ) -> Result<Option<SplitEvent>, DecrementalError> {
        if !self.edge_alive(u, v) {
            return Err(DecrementalError::EdgeAbsent { u, v });
        }
        self.dead.insert((u, v));
        self.stats.deletions += 1;
        if self.comp[u] != self.comp[v] {
            return Ok(None);
        }
        let c = self.comp[u];
        if self.members[c].len() == 1 {
            // A self-loop vanished; the singleton component stands.
            return Ok(None);
        }
        let mem = std::mem::take(&mut self.members[c]);
        let local: HashMap<usize, usize> =
            mem.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); mem.len()];
        for (i, &x) in mem.iter().enumerate() {
            for &y in &self.out[x] {
                self.stats.edges_scanned += 1;
                if let Some(&j) = local.get(&y) {
                    if !self.dead.contains(&(x, y)) {
                        adj[i].push(j);
                    }
                }
            }
        }
        let labeling = compute_sccs_of(mem.len(), |i| adj[i].as_slice());
        if labeling.components.len() == 1 {
            self.members[c] = mem;
            return Ok(None);
        }
        self.stats.splits += 1;
        let mut parts = Vec::with_capacity(labeling.components.len());
        for part_local in &labeling.components {
            let id = self.members.len();
            let mut part: Vec<usize> = part_local.iter().map(|&i| mem[i]).collect();
            part.sort_unstable();
            for &x in &part {
                self.comp[x] = id;
            }
            self.members.push(part);
            parts.push(id);
        }
        let mut separating = Vec::new();
        let mut condensation = Vec::new();
        for &x in &mem {
            for &y in &self.out[x] {
                if local.contains_key(&y)
                    && !self.dead.contains(&(x, y))
                    && self.comp[x] != self.comp[y]
                {
                    separating.push((x, y));
                    condensation.push((self.comp[x], self.comp[y]));
                }
            }
        }
        condensation.sort_unstable();
        condensation.dedup();
        Ok(Some(SplitEvent {
            old: c,
            parts,
            condensation_edges: condensation,
            separating_edges: separating,
        }))
    }
}
