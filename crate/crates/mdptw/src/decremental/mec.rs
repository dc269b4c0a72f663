//! Maximal end-component decomposition maintained under player-1 edge
//! deletions.

use std::collections::{HashMap, HashSet};

use crate::basic::mec_iterative;
use crate::decremental::scc::{DecrementalScc, SccStats};
use crate::decremental::{DecrementalError, MaintenanceStats};
use crate::mdp::MdpGraph;
use crate::mec_dp::MecDecomposition;

/// Maintains the maximal end-component decomposition while player-1
/// edges are deleted.
///
/// The components of the working subgraph are kept by [`DecrementalScc`].
/// A deletion that breaks a component surfaces the newly separating
/// edges, and those are the only places a fresh probabilistic escape can
/// appear, so only they are re-checked. A violating probabilistic vertex
/// is expelled by deleting all its surviving edges; edges that pointed
/// at it are re-checked in turn, and the drain runs to fixpoint before a
/// deletion returns. Probabilistic edges themselves never change, hence
/// each surviving component is always a subset of a component from
/// before the deletion; that refinement is asserted on every step.
pub struct DecrementalMec {
    g: MdpGraph,
    scc: DecrementalScc,
    user_deleted: HashSet<(usize, usize)>,
    removed: Vec<bool>,
    answer: MecDecomposition,
    stats: MaintenanceStats,
}

impl DecrementalMec {
    pub fn new(g: MdpGraph) -> Self {
        let n = g.n();
        let mut mec = DecrementalMec {
            scc: DecrementalScc::new(n, g.edges()),
            user_deleted: HashSet::new(),
            removed: vec![false; n],
            answer: MecDecomposition::new(Vec::new(), n),
            stats: MaintenanceStats::default(),
            g,
        };
        let mut queue = Vec::new();
        for u in 0..n {
            if !mec.g.is_probabilistic(u) {
                continue;
            }
            for &v in mec.g.out(u) {
                mec.stats.edges_inspected += 1;
                if mec.scc.id(u) != mec.scc.id(v) {
                    queue.push(u);
                    break;
                }
            }
        }
        mec.drain(queue);
        mec.answer = mec.snapshot();
        debug_assert_eq!(mec.answer, mec_iterative(&mec.g).0);
        mec
    }

    /// The maintained decomposition, always current.
    pub fn decomposition(&self) -> &MecDecomposition {
        &self.answer
    }

    pub fn stats(&self) -> MaintenanceStats {
        self.stats
    }

    pub fn scc_stats(&self) -> SccStats {
        self.scc.stats()
    }

    /// The graph as the caller sees it: initial edges minus the user's
    /// deletions. Internal removals do not show up here.
    pub fn current_graph(&self) -> MdpGraph {
        self.g
            .retain_edges(|u, v| !self.user_deleted.contains(&(u, v)))
            .expect("player-1 deletions cannot strip a probabilistic vertex")
    }

    /// Deletes one player-1 edge and restores the answer before
    /// returning. Panics if the new decomposition fails to refine the
    /// previous one, which would contradict the deletion model.
    pub fn delete_edge(&mut self, u: usize, v: usize) -> Result<(), DecrementalError> {
        if !self.g.has_edge(u, v) || self.user_deleted.contains(&(u, v)) {
            return Err(DecrementalError::EdgeAbsent { u, v });
        }
        if self.g.is_probabilistic(u) {
            return Err(DecrementalError::ProbabilisticTail { u, v });
        }
        self.user_deleted.insert((u, v));
        self.stats.deletions += 1;
        // The edge is gone from the structure already if its head was
        // expelled earlier; the tail is player-1 and never expelled.
        if self.scc.edge_alive(u, v) {
            let mut queue = Vec::new();
            self.delete_structure_edge(u, v, &mut queue);
            self.drain(queue);
        }
        let next = self.snapshot();
        assert!(
            next.is_refinement_of(&self.answer),
            "components must only ever split under player-1 deletions"
        );
        self.answer = next;
        Ok(())
    }

    /// Deletes a structure edge and queues every probabilistic tail
    /// whose edge the resulting split turned into a crossing edge.
    fn delete_structure_edge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let event = self.scc.delete_edge(a, b).expect("edge was alive");
        if let Some(ev) = event {
            for &(x, _) in &ev.separating_edges {
                self.stats.edges_inspected += 1;
                if self.g.is_probabilistic(x) && !self.removed[x] {
                    queue.push(x);
                }
            }
        }
    }

    /// Expels queued violators until none remain.
    fn drain(&mut self, mut queue: Vec<usize>) {
        while let Some(u) = queue.pop() {
            if self.removed[u] {
                continue;
            }
            self.removed[u] = true;
            self.stats.removals += 1;
            for i in 0..self.g.out(u).len() {
                let w = self.g.out(u)[i];
                if self.scc.edge_alive(u, w) {
                    self.delete_structure_edge(u, w, &mut queue);
                }
            }
            for i in 0..self.g.inn(u).len() {
                let z = self.g.inn(u)[i];
                if self.scc.edge_alive(z, u) {
                    self.delete_structure_edge(z, u, &mut queue);
                    // That edge still exists for the caller and now
                    // points at an expelled vertex.
                    self.stats.edges_inspected += 1;
                    if self.g.is_probabilistic(z) && !self.removed[z] {
                        queue.push(z);
                    }
                }
            }
        }
    }

    /// Reads the decomposition off the structure: group the surviving
    /// vertices by component id, keep the groups that can sustain an
    /// infinite run.
    fn snapshot(&self) -> MecDecomposition {
        let n = self.g.n();
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for v in 0..n {
            if !self.removed[v] {
                groups.entry(self.scc.id(v)).or_default().push(v);
            }
        }
        let mecs: Vec<Vec<usize>> = groups
            .into_values()
            .filter(|group| group.len() >= 2 || self.scc.edge_alive(group[0], group[0]))
            .collect();
        MecDecomposition::new(mecs, n)
    }
}
