//! Decremental reachability toward a fixed sink.

use std::collections::{HashMap, HashSet};

use crate::decremental::scc::{DecrementalScc, SccStats, SplitEvent};
use crate::decremental::DecrementalError;

/// Work counters for the reachability layer, on top of the inner SCC
/// structure's own.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReachStats {
    /// Edges examined while recomputing part supports after a split and
    /// while cascading component deaths.
    pub support_scans: u64,
    /// Vertices that have left the maintained set.
    pub departures: u64,
}

/// Maintains, under edge deletions, the set of vertices that still have
/// a path to a designated sink.
///
/// Components come from [`DecrementalScc`]. The condensation over the
/// surviving components is acyclic, so one support counter per alive
/// component (surviving edges into other alive components) plays the
/// role a DAG in-degree counter plays for single-source reachability on
/// the reversed graph: a component stays alive while it keeps an edge
/// toward the sink's side, and a counter reaching zero cascades. When a
/// component splits, the replacement parts are planted in its place and
/// their supports are recomputed from their members' edges.
pub struct DecrementalReachability {
    scc: DecrementalScc,
    sink: usize,
    sink_comp: usize,
    alive_comp: HashSet<usize>,
    support: HashMap<usize, usize>,
    vertex_alive: Vec<bool>,
    stats: ReachStats,
}

impl DecrementalReachability {
    pub fn new(n: usize, edges: &[(usize, usize)], sink: usize) -> Self {
        assert!(sink < n, "sink {sink} out of range");
        let scc = DecrementalScc::new(n, edges);
        let sink_comp = scc.id(sink);

        // Alive components: those that reach the sink's component, found
        // by walking condensation edges backwards.
        let mut cond_in: HashMap<usize, Vec<usize>> = HashMap::new();
        for u in 0..n {
            for &v in scc.out_base(u) {
                let (cu, cv) = (scc.id(u), scc.id(v));
                if cu != cv {
                    cond_in.entry(cv).or_default().push(cu);
                }
            }
        }
        let mut alive_comp = HashSet::new();
        alive_comp.insert(sink_comp);
        let mut queue = vec![sink_comp];
        while let Some(c) = queue.pop() {
            for &p in cond_in.get(&c).map(Vec::as_slice).unwrap_or(&[]) {
                if alive_comp.insert(p) {
                    queue.push(p);
                }
            }
        }

        let mut support: HashMap<usize, usize> =
            alive_comp.iter().map(|&c| (c, 0)).collect();
        let mut vertex_alive = vec![false; n];
        for u in 0..n {
            let cu = scc.id(u);
            if !alive_comp.contains(&cu) {
                continue;
            }
            vertex_alive[u] = true;
            for &v in scc.out_base(u) {
                let cv = scc.id(v);
                if cv != cu && alive_comp.contains(&cv) {
                    *support.get_mut(&cu).expect("alive component") += 1;
                }
            }
        }
        DecrementalReachability {
            scc,
            sink,
            sink_comp,
            alive_comp,
            support,
            vertex_alive,
            stats: ReachStats::default(),
        }
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.vertex_alive[v]
    }

    /// Sorted list of vertices that can still reach the sink.
    pub fn alive_vertices(&self) -> Vec<usize> {
        (0..self.vertex_alive.len())
            .filter(|&v| self.vertex_alive[v])
            .collect()
    }

    pub fn edge_alive(&self, u: usize, v: usize) -> bool {
        self.scc.edge_alive(u, v)
    }

    pub fn stats(&self) -> ReachStats {
        self.stats
    }

    pub fn scc_stats(&self) -> SccStats {
        self.scc.stats()
    }

    /// Deletes one edge. Returns the vertices that lost their last path
    /// to the sink, in the order their components died.
    pub fn delete_edge(
        &mut self,
        u: usize,
        v: usize,
    ) -> Result<Vec<usize>, DecrementalError> {
        let cu = self.scc.id(u);
        let cv = self.scc.id(v);
        let event = self.scc.delete_edge(u, v)?;
        let mut departed = Vec::new();
        if cu != cv {
            debug_assert!(event.is_none());
            if self.alive_comp.contains(&cu) && self.alive_comp.contains(&cv) {
                let count = self.support.get_mut(&cu).expect("alive component");
                *count -= 1;
                if *count == 0 && cu != self.sink_comp {
                    self.retire(cu);
                    self.cascade(cu, &mut departed);
                }
            }
        } else if let Some(ev) = event {
            if self.alive_comp.contains(&ev.old) {
                self.plant_parts(&ev, &mut departed);
            }
            // A split inside an already-dead region changes nothing the
            // sink can see.
        }
        self.stats.departures += departed.len() as u64;
        Ok(departed)
    }

    fn retire(&mut self, c: usize) {
        self.alive_comp.remove(&c);
        self.support.remove(&c);
    }

    /// Replaces a broken alive component by its parts: all parts start
    /// alive, supports are recomputed from their members' edges, then
    /// unsupported parts cascade away.
    fn plant_parts(&mut self, ev: &SplitEvent, departed: &mut Vec<usize>) {
        self.retire(ev.old);
        if ev.old == self.sink_comp {
            self.sink_comp = self.scc.id(self.sink);
        }
        for &p in &ev.parts {
            self.alive_comp.insert(p);
        }
        for &p in &ev.parts {
            let mut count = 0;
            for &x in self.scc.members(p) {
                for &y in self.scc.out_base(x) {
                    self.stats.support_scans += 1;
                    let cy = self.scc.id(y);
                    if cy != p
                        && self.scc.edge_alive(x, y)
                        && self.alive_comp.contains(&cy)
                    {
                        count += 1;
                    }
                }
            }
            self.support.insert(p, count);
        }
        // The alive guard matters: a part can already be gone here,
        // dragged down while cascading an earlier sibling.
        for &p in &ev.parts {
            if self.alive_comp.contains(&p)
                && p != self.sink_comp
                && self.support[&p] == 0
            {
                self.retire(p);
                self.cascade(p, departed);
            }
        }
    }

    /// Processes the death of component `first` (already retired) and
    /// everything it drags down.
    fn cascade(&mut self, first: usize, departed: &mut Vec<usize>) {
        let mut queue = vec![first];
        while let Some(x) = queue.pop() {
            let mem = self.scc.members(x).to_vec();
            for &w in &mem {
                self.vertex_alive[w] = false;
                departed.push(w);
            }
            for &w in &mem {
                let tails = self.scc.in_base(w).to_vec();
                for z in tails {
                    self.stats.support_scans += 1;
                    if !self.scc.edge_alive(z, w) {
                        continue;
                    }
                    let cz = self.scc.id(z);
                    if !self.alive_comp.contains(&cz) {
                        continue;
                    }
                    let count = self.support.get_mut(&cz).expect("alive component");
                    *count -= 1;
                    if *count == 0 && cz != self.sink_comp {
                        self.retire(cz);
                        queue.push(cz);
                    }
                }
            }
        }
    }
}
