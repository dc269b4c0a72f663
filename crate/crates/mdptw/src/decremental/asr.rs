//! Almost-sure reachability maintained under player-1 edge deletions.

use std::collections::HashSet;

use crate::basic::asr_fixpoint;
use crate::decremental::reach::{DecrementalReachability, ReachStats};
use crate::decremental::scc::SccStats;
use crate::decremental::{DecrementalError, MaintenanceStats};
use crate::mdp::MdpGraph;

/// Maintains the almost-sure reachability set of a fixed target while
/// player-1 edges are deleted.
///
/// The set only ever shrinks, because probabilistic edges are immutable:
/// a set that satisfies both defining conditions after a player-1
/// deletion satisfied them before it too. The reachability layer reports
/// exactly which vertices drop out of the set; only edges entering that
/// batch are re-checked for the probabilistic escape condition, so every
/// edge is inspected at most once over the whole deletion sequence.
/// Violating probabilistic vertices lose all their surviving edges,
/// which cascades further departures, and the drain runs to fixpoint
/// before a deletion returns.
pub struct DecrementalAsr {
    g: MdpGraph,
    s: usize,
    reach: DecrementalReachability,
    user_deleted: HashSet<(usize, usize)>,
    removed: Vec<bool>,
    /// Set when the target itself is a violating probabilistic vertex;
    /// from then on the answer is empty and stays empty.
    collapsed: bool,
    stats: MaintenanceStats,
}

impl DecrementalAsr {
    pub fn new(g: MdpGraph, s: usize) -> Self {
        let n = g.n();
        assert!(s < n, "vertex {s} out of range");
        let (initial, trace) = asr_fixpoint(&g, s);
        let mut removed = vec![false; n];
        for r in &trace {
            removed[r.vertex] = true;
        }
        let collapsed = removed[s];
        let surviving: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| !removed[u] && !removed[v])
            .collect();
        let reach = DecrementalReachability::new(n, &surviving, s);
        let asr = DecrementalAsr {
            g,
            s,
            reach,
            user_deleted: HashSet::new(),
            removed,
            collapsed,
            stats: MaintenanceStats::default(),
        };
        debug_assert_eq!(asr.asr_set(), initial);
        asr
    }

    pub fn target(&self) -> usize {
        self.s
    }

    /// The maintained set, sorted.
    pub fn asr_set(&self) -> Vec<usize> {
        if self.collapsed {
            return Vec::new();
        }
        self.reach.alive_vertices()
    }

    pub fn contains(&self, v: usize) -> bool {
        !self.collapsed && self.reach.is_alive(v)
    }

    pub fn stats(&self) -> MaintenanceStats {
        self.stats
    }

    pub fn reach_stats(&self) -> ReachStats {
        self.reach.stats()
    }

    pub fn scc_stats(&self) -> SccStats {
        self.reach.scc_stats()
    }

    /// The graph as the caller sees it: initial edges minus the user's
    /// deletions. Internal removals do not show up here.
    pub fn current_graph(&self) -> MdpGraph {
        self.g
            .retain_edges(|u, v| !self.user_deleted.contains(&(u, v)))
            .expect("player-1 deletions cannot strip a probabilistic vertex")
    }

    /// Deletes one player-1 edge and restores the answer before
    /// returning.
    pub fn delete_edge(&mut self, u: usize, v: usize) -> Result<(), DecrementalError> {
        if !self.g.has_edge(u, v) || self.user_deleted.contains(&(u, v)) {
            return Err(DecrementalError::EdgeAbsent { u, v });
        }
        if self.g.is_probabilistic(u) {
            return Err(DecrementalError::ProbabilisticTail { u, v });
        }
        self.user_deleted.insert((u, v));
        self.stats.deletions += 1;
        // A player-1 tail is never removed internally, so the edge is
        // still in the structure unless its head was removed, in which
        // case it died with the head and the answer cannot change.
        if self.removed[v] {
            return Ok(());
        }
        let departed = self.reach.delete_edge(u, v)?;
        self.drain(departed);
        Ok(())
    }

    /// Re-checks the escape condition for edges entering each departed
    /// vertex, removing violators and folding their departures back into
    /// the queue until nothing more leaves the set.
    fn drain(&mut self, departed: Vec<usize>) {
        let mut queue = departed;
        let mut next = 0;
        while next < queue.len() {
            let w = queue[next];
            next += 1;
            for i in 0..self.g.inn(w).len() {
                let x = self.g.inn(w)[i];
                self.stats.edges_inspected += 1;
                if self.removed[x] || !self.g.is_probabilistic(x) {
                    continue;
                }
                if !self.reach.is_alive(x) {
                    continue;
                }
                // x is probabilistic, inside the set, and its edge
                // (x, w) now escapes it: x cannot stay.
                self.remove_vertex(x, &mut queue);
            }
        }
    }

    fn remove_vertex(&mut self, x: usize, queue: &mut Vec<usize>) {
        self.removed[x] = true;
        self.stats.removals += 1;
        if x == self.s {
            self.collapsed = true;
        }
        for i in 0..self.g.out(x).len() {
            let y = self.g.out(x)[i];
            if self.reach.edge_alive(x, y) {
                let departed = self.reach.delete_edge(x, y).expect("edge was alive");
                queue.extend(departed);
            }
        }
        for i in 0..self.g.inn(x).len() {
            let z = self.g.inn(x)[i];
            if self.reach.edge_alive(z, x) {
                let departed = self.reach.delete_edge(z, x).expect("edge was alive");
                queue.extend(departed);
            }
        }
    }
}
