//! Single-source reachability on a DAG under edge deletions.

use std::collections::BTreeSet;

use crate::decremental::DecrementalError;

/// Maintains the set of vertices reachable from a fixed source in a
/// directed acyclic graph while edges are deleted.
///
/// In a DAG a vertex other than the source is reachable exactly when it
/// has an incoming edge from a reachable vertex, so the structure keeps
/// one counter per vertex (surviving in-edges from surviving tails) and
/// cascades: when a counter hits zero the vertex dies and its out-edges
/// die with it. Every out-list is scanned once, when its vertex dies, so
/// total work over the whole deletion sequence is linear in the initial
/// edge count.
#[derive(Debug)]
pub struct DagReachability {
    out: Vec<Vec<usize>>,
    dead_edges: BTreeSet<(usize, usize)>,
    indeg: Vec<usize>,
    alive: Vec<bool>,
    source: usize,
    operations: u64,
}

impl DagReachability {
    /// Builds the structure and immediately retires every vertex the
    /// source cannot reach. Rejects cyclic input.
    pub fn new(
        n: usize,
        edges: &[(usize, usize)],
        source: usize,
    ) -> Result<Self, DecrementalError> {
        assert!(source < n, "source {source} out of range");
        let mut out = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range");
            out[u].push(v);
        }
        for list in &mut out {
            list.sort_unstable();
            list.dedup();
        }
        if is_cyclic(n, &out) {
            return Err(DecrementalError::CyclicInput);
        }

        let mut alive = vec![false; n];
        alive[source] = true;
        let mut queue = vec![source];
        while let Some(v) = queue.pop() {
            for &w in &out[v] {
                if !alive[w] {
                    alive[w] = true;
                    queue.push(w);
                }
            }
        }
        let mut indeg = vec![0usize; n];
        let mut dead_edges = BTreeSet::new();
        let mut operations = 0u64;
        for u in 0..n {
            for &v in &out[u] {
                operations += 1;
                if alive[u] {
                    indeg[v] += 1;
                } else {
                    // An unreachable vertex is dead on arrival, and dead
                    // vertices take their out-edges with them.
                    dead_edges.insert((u, v));
                }
            }
        }
        Ok(DagReachability { out, dead_edges, indeg, alive, source, operations })
    }

    /// Deletes one edge and cascades. Returns the vertices that became
    /// unreachable, in the order they died.
    pub fn delete(&mut self, u: usize, v: usize) -> Result<Vec<usize>, DecrementalError> {
        if !self.edge_alive(u, v) {
            return Err(DecrementalError::EdgeAbsent { u, v });
        }
        self.dead_edges.insert((u, v));
        self.operations += 1;
        let mut deaths = Vec::new();
        if !self.alive[v] {
            return Ok(deaths);
        }
        self.indeg[v] -= 1;
        let mut queue = Vec::new();
        if self.indeg[v] == 0 && v != self.source {
            queue.push(v);
        }
        while let Some(w) = queue.pop() {
            self.alive[w] = false;
            deaths.push(w);
            for i in 0..self.out[w].len() {
                let z = self.out[w][i];
                self.operations += 1;
                if !self.dead_edges.insert((w, z)) {
                    continue;
                }
                if self.alive[z] {
                    self.indeg[z] -= 1;
                    if self.indeg[z] == 0 && z != self.source {
                        queue.push(z);
                    }
                }
            }
        }
        Ok(deaths)
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    /// Sorted list of vertices still reachable from the source.
    pub fn alive_vertices(&self) -> Vec<usize> {
        (0..self.alive.len()).filter(|&v| self.alive[v]).collect()
    }

    pub fn edge_alive(&self, u: usize, v: usize) -> bool {
        u < self.out.len()
            && self.out[u].binary_search(&v).is_ok()
            && !self.dead_edges.contains(&(u, v))
    }

    pub fn source(&self) -> usize {
        self.source
    }

    /// Edge examinations so far, across construction and all deletions.
    /// Stays within a small constant times the initial edge count.
    pub fn operations(&self) -> u64 {
        self.operations
    }
}

fn is_cyclic(n: usize, out: &[Vec<usize>]) -> bool {
    let mut indeg = vec![0usize; n];
    for list in out {
        for &v in list {
            indeg[v] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut processed = 0;
    while let Some(v) = queue.pop() {
        processed += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    processed < n
}
