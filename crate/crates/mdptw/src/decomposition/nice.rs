//! Nice tree decompositions and the target-rooted variant.
//!
//! A nice decomposition restricts every node to one of four shapes so
//! dynamic programs only ever handle four transitions: `Leaf` (singleton
//! bag), `Introduce` (child's bag plus one vertex), `Forget` (child's bag
//! minus one vertex), and `Join` (two children with identical bags).
//!
//! [`root_with_target`] further forces a distinguished vertex `s` into
//! every bag, turns the root into exactly `{s}`, and leaves every leaf at
//! `{s}`; this grows the width by at most one.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::decomposition::{TdViolation, TreeDecomposition};
use crate::mdp::MdpGraph;

/// Shape of a nice node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

/// One node of a nice decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    /// Ascending vertex list.
    pub bag: Vec<usize>,
    pub kind: NodeKind,
    /// Zero, one, or two node ids, matching the kind.
    pub children: Vec<usize>,
}

/// Rooted tree of [`NiceNode`]s stored as an arena. The constructors in
/// this module lay out children before their parents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

/// First failed property of a nice decomposition.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NiceViolation {
    #[error("node {node} has the wrong number of children for its kind")]
    BadArity { node: usize },
    #[error("node {node} breaks the bag relation of its kind")]
    BadBagRelation { node: usize },
    #[error("leaf node {node} must have a one-vertex bag")]
    LeafNotSingleton { node: usize },
    #[error("nodes do not form one tree under the root: {reason}")]
    NotATree { reason: String },
    #[error("node {node} is missing the distinguished vertex")]
    TargetMissing { node: usize },
    #[error("root bag must be exactly the distinguished vertex")]
    RootNotTarget,
    #[error(transparent)]
    Underlying(TdViolation),
}

impl NiceTreeDecomposition {
    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Drops the nice structure, keeping bags and tree edges.
    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let mut tree_edges = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                tree_edges.push((c, i));
            }
        }
        TreeDecomposition { bags, tree_edges }
    }

    /// Distance from the root, per node.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            for &c in &self.nodes[u].children {
                depth[c] = depth[u] + 1;
                stack.push(c);
            }
        }
        depth
    }

    /// Children-before-parent order covering all nodes.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend_from_slice(&self.nodes[u].children);
        }
        out.reverse();
        out
    }

    /// Appends forget nodes until the root bag is a single vertex (the
    /// smallest of the current root bag). No-op if already singleton.
    pub fn ensure_singleton_root(mut self) -> Self {
        let bag = self.nodes[self.root].bag.clone();
        assert!(!bag.is_empty(), "root bag must be non-empty");
        let mut b = Builder { nodes: std::mem::take(&mut self.nodes) };
        let mut root = self.root;
        for &v in &bag[1..] {
            root = b.forget(root, v);
        }
        NiceTreeDecomposition { nodes: b.nodes, root }
    }
}

/// Arena-backed constructor enforcing the per-kind bag relations.
#[derive(Default)]
struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn leaf(&mut self, v: usize) -> usize {
        self.push(NiceNode { bag: vec![v], kind: NodeKind::Leaf, children: vec![] })
    }

    fn introduce(&mut self, child: usize, v: usize) -> usize {
        let mut bag = self.nodes[child].bag.clone();
        let pos = bag.binary_search(&v).expect_err("introduced vertex must be new");
        bag.insert(pos, v);
        self.push(NiceNode { bag, kind: NodeKind::Introduce(v), children: vec![child] })
    }

    fn forget(&mut self, child: usize, v: usize) -> usize {
        let mut bag = self.nodes[child].bag.clone();
        let pos = bag.binary_search(&v).expect("forgotten vertex must be present");
        bag.remove(pos);
        self.push(NiceNode { bag, kind: NodeKind::Forget(v), children: vec![child] })
    }

    fn join(&mut self, a: usize, b: usize) -> usize {
        debug_assert_eq!(self.nodes[a].bag, self.nodes[b].bag, "join needs equal bags");
        let bag = self.nodes[a].bag.clone();
        self.push(NiceNode { bag, kind: NodeKind::Join, children: vec![a, b] })
    }

    fn push(&mut self, node: NiceNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Forgets then introduces until `top`'s bag equals `to`.
    fn lift(&mut self, mut top: usize, to: &[usize]) -> usize {
        let current = self.nodes[top].bag.clone();
        for &x in &current {
            if to.binary_search(&x).is_err() {
                top = self.forget(top, x);
            }
        }
        let kept = self.nodes[top].bag.clone();
        for &y in to {
            if kept.binary_search(&y).is_err() {
                top = self.introduce(top, y);
            }
        }
        top
    }
}

/// Converts any valid decomposition into a nice one of the same width.
///
/// Adjacent bags in subset relation are contracted away first, which
/// keeps the result linear in the vertex count even when the input has
/// many duplicate bags. The root is the surviving image of input bag 0.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let nb = td.bags.len();
    assert!(nb > 0, "decomposition must have at least one bag");

    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nb];
    let mut work: VecDeque<(usize, usize)> = VecDeque::new();
    for &(a, b) in &td.tree_edges {
        adj[a].insert(b);
        adj[b].insert(a);
        work.push_back((a, b));
        work.push_back((b, a));
    }
    let mut alive = vec![true; nb];
    let mut merged_into: Vec<usize> = (0..nb).collect();
    let subset = |small: &[usize], big: &[usize]| {
        small.iter().all(|v| big.binary_search(v).is_ok())
    };
    while let Some((i, j)) = work.pop_front() {
        if !alive[i] || !alive[j] || !subset(&td.bags[i], &td.bags[j]) {
            continue;
        }
        alive[i] = false;
        merged_into[i] = j;
        let moved: Vec<usize> = adj[i].iter().copied().filter(|&x| x != j).collect();
        adj[i].clear();
        adj[j].remove(&i);
        for x in moved {
            adj[x].remove(&i);
            adj[x].insert(j);
            adj[j].insert(x);
            work.push_back((x, j));
            work.push_back((j, x));
        }
    }
    let mut root_image = 0;
    while !alive[root_image] {
        root_image = merged_into[root_image];
    }

    // Root the contracted tree and lay out parents before children.
    let mut parent = vec![usize::MAX; nb];
    let mut bfs = vec![root_image];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nb];
    let mut head = 0;
    while head < bfs.len() {
        let u = bfs[head];
        head += 1;
        for &x in &adj[u] {
            if x != parent[u] {
                parent[x] = u;
                children[u].push(x);
                bfs.push(x);
            }
        }
    }

    let mut b = Builder::default();
    let mut top = vec![usize::MAX; nb];
    for &u in bfs.iter().rev() {
        let bag = &td.bags[u];
        top[u] = if children[u].is_empty() {
            let (&first, rest) = bag.split_first().expect("bags must be non-empty");
            let mut t = b.leaf(first);
            for &v in rest {
                t = b.introduce(t, v);
            }
            t
        } else {
            let lifted: Vec<usize> =
                children[u].iter().map(|&c| b.lift(top[c], bag)).collect();
            let mut t = lifted[0];
            for &other in &lifted[1..] {
                t = b.join(t, other);
            }
            t
        };
    }
    NiceTreeDecomposition { nodes: b.nodes, root: top[root_image] }
}

/// Checks nice structure (kinds, arities, bag relations, single tree)
/// and then the underlying decomposition properties against `g`.
pub fn validate_nice(ntd: &NiceTreeDecomposition, g: &MdpGraph) -> Result<(), NiceViolation> {
    let len = ntd.nodes.len();
    if ntd.root >= len {
        return Err(NiceViolation::NotATree { reason: "root id out of range".into() });
    }
    let mut parents = vec![0usize; len];
    for (i, node) in ntd.nodes.iter().enumerate() {
        let arity_ok = match node.kind {
            NodeKind::Leaf => node.children.is_empty(),
            NodeKind::Introduce(_) | NodeKind::Forget(_) => node.children.len() == 1,
            NodeKind::Join => node.children.len() == 2,
        };
        if !arity_ok {
            return Err(NiceViolation::BadArity { node: i });
        }
        for &c in &node.children {
            if c >= len {
                return Err(NiceViolation::NotATree {
                    reason: format!("child id {c} out of range"),
                });
            }
            parents[c] += 1;
        }
        if !node.bag.windows(2).all(|w| w[0] < w[1]) {
            return Err(NiceViolation::BadBagRelation { node: i });
        }
        match node.kind {
            NodeKind::Leaf => {
                if node.bag.len() != 1 {
                    return Err(NiceViolation::LeafNotSingleton { node: i });
                }
            }
            NodeKind::Introduce(v) => {
                let child = &ntd.nodes[node.children[0]].bag;
                let mut expect = child.clone();
                if child.binary_search(&v).is_ok() {
                    return Err(NiceViolation::BadBagRelation { node: i });
                }
                expect.push(v);
                expect.sort_unstable();
                if node.bag != expect {
                    return Err(NiceViolation::BadBagRelation { node: i });
                }
            }
            NodeKind::Forget(v) => {
                let child = &ntd.nodes[node.children[0]].bag;
                let expect: Vec<usize> =
                    child.iter().copied().filter(|&x| x != v).collect();
                if child.binary_search(&v).is_err() || node.bag != expect {
                    return Err(NiceViolation::BadBagRelation { node: i });
                }
            }
            NodeKind::Join => {
                for &c in &node.children {
                    if ntd.nodes[c].bag != node.bag {
                        return Err(NiceViolation::BadBagRelation { node: i });
                    }
                }
            }
        }
    }
    for (i, &p) in parents.iter().enumerate() {
        let expected = usize::from(i != ntd.root);
        if p != expected {
            return Err(NiceViolation::NotATree {
                reason: format!("node {i} has {p} parents"),
            });
        }
    }
    // With parent counts right, a cycle would leave nodes unreachable
    // from the root; the walk below catches both that and fan-in.
    let mut reach = 0usize;
    let mut stack = vec![ntd.root];
    let mut seen = vec![false; len];
    seen[ntd.root] = true;
    while let Some(u) = stack.pop() {
        reach += 1;
        for &c in &ntd.nodes[u].children {
            if seen[c] {
                return Err(NiceViolation::NotATree { reason: "shared subtree".into() });
            }
            seen[c] = true;
            stack.push(c);
        }
    }
    if reach != len {
        return Err(NiceViolation::NotATree { reason: "unreachable nodes".into() });
    }
    ntd.as_tree_decomposition().validate(g).map_err(NiceViolation::Underlying)
}

/// Nice decomposition whose every bag contains the distinguished vertex
/// `s`, with root bag exactly `{s}` and every leaf bag `{s}`.
#[derive(Clone, Debug)]
pub struct RootedTargetDecomposition {
    pub nice: NiceTreeDecomposition,
    pub s: usize,
}

impl RootedTargetDecomposition {
    /// Full validation against `g`: nice structure, decomposition
    /// properties, and the target-rooting shape.
    pub fn validate(&self, g: &MdpGraph) -> Result<(), NiceViolation> {
        validate_nice(&self.nice, g)?;
        for (i, node) in self.nice.nodes.iter().enumerate() {
            if node.bag.binary_search(&self.s).is_err() {
                return Err(NiceViolation::TargetMissing { node: i });
            }
            if matches!(node.kind, NodeKind::Leaf) && node.bag != [self.s] {
                return Err(NiceViolation::LeafNotSingleton { node: i });
            }
        }
        if self.nice.nodes[self.nice.root].bag != [self.s] {
            return Err(NiceViolation::RootNotTarget);
        }
        Ok(())
    }
}

/// Rebuilds `ntd` with `s` inside every bag and the root forgotten down
/// to exactly `{s}`. Width grows by at most one; introduce and forget
/// nodes for `s` itself contract away.
pub fn root_with_target(ntd: &NiceTreeDecomposition, s: usize) -> RootedTargetDecomposition {
    let mut b = Builder::default();
    let mut map = vec![usize::MAX; ntd.nodes.len()];
    for u in ntd.postorder() {
        let node = &ntd.nodes[u];
        map[u] = match node.kind {
            NodeKind::Leaf => {
                let v = node.bag[0];
                let leaf = b.leaf(s);
                if v == s {
                    leaf
                } else {
                    b.introduce(leaf, v)
                }
            }
            NodeKind::Introduce(v) => {
                let c = map[node.children[0]];
                if v == s {
                    c
                } else {
                    b.introduce(c, v)
                }
            }
            NodeKind::Forget(v) => {
                let c = map[node.children[0]];
                if v == s {
                    c
                } else {
                    b.forget(c, v)
                }
            }
            NodeKind::Join => b.join(map[node.children[0]], map[node.children[1]]),
        };
    }
    let mut root = map[ntd.root];
    let bag = b.nodes[root].bag.clone();
    for &v in &bag {
        if v != s {
            root = b.forget(root, v);
        }
    }
    RootedTargetDecomposition {
        nice: NiceTreeDecomposition { nodes: b.nodes, root },
        s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::heuristic::{heuristic_decompose, Strategy};
    use crate::mdp::{parse_mdp, reduce_target, Owner};

    fn path_graph(n: usize) -> MdpGraph {
        let mut edges = Vec::new();
        for v in 0..n - 1 {
            edges.push((v, v + 1));
            edges.push((v + 1, v));
        }
        MdpGraph::new(vec![Owner::Player1; n], edges).unwrap()
    }

    fn path_td(n: usize) -> TreeDecomposition {
        TreeDecomposition {
            bags: (0..n - 1).map(|v| vec![v, v + 1]).collect(),
            tree_edges: (0..n - 2).map(|i| (i, i + 1)).collect(),
        }
    }

    #[test]
    fn make_nice_preserves_width_and_validates() {
        let g = path_graph(6);
        let td = path_td(6);
        let ntd = make_nice(&td);
        validate_nice(&ntd, &g).unwrap();
        assert_eq!(ntd.width(), td.width());
        // Root is the image of input bag 0.
        let root_bag = &ntd.nodes[ntd.root].bag;
        assert!(td.bags[0].iter().all(|v| root_bag.contains(v)));
    }

    #[test]
    fn make_nice_single_bag() {
        let g = path_graph(3);
        let td = TreeDecomposition { bags: vec![vec![0, 1, 2]], tree_edges: vec![] };
        let ntd = make_nice(&td);
        validate_nice(&ntd, &g).unwrap();
        assert_eq!(ntd.node_count(), 3); // leaf plus two introduces
    }

    #[test]
    fn make_nice_contracts_duplicate_bags() {
        // A star of five identical bags collapses to one chain.
        let g = path_graph(2);
        let td = TreeDecomposition {
            bags: vec![vec![0, 1]; 5],
            tree_edges: vec![(0, 1), (0, 2), (0, 3), (0, 4)],
        };
        let ntd = make_nice(&td);
        validate_nice(&ntd, &g).unwrap();
        assert_eq!(ntd.node_count(), 2);
    }

    #[test]
    fn make_nice_node_count_is_linear() {
        let g = path_graph(40);
        for strategy in [Strategy::MinDegree, Strategy::MinFill] {
            let td = heuristic_decompose(&g, strategy);
            let ntd = make_nice(&td);
            validate_nice(&ntd, &g).unwrap();
            let k = ntd.width();
            assert!(ntd.node_count() <= 16 * td.bags.len() * (k + 2));
            assert!(ntd.node_count() <= 16 * (g.n() + 1) * (k + 2));
        }
    }

    #[test]
    fn make_nice_handles_joins() {
        // Star decomposition with distinct leaves forces joins.
        let bags = vec![vec![0, 1], vec![1, 2], vec![1, 3], vec![1, 4]];
        let td = TreeDecomposition { bags, tree_edges: vec![(0, 1), (1, 2), (1, 3)] };
        let mut edges = vec![(0, 1), (1, 2), (1, 3), (1, 4)];
        edges.extend(edges.clone().iter().map(|&(a, b)| (b, a)));
        let g = MdpGraph::new(vec![Owner::Player1; 5], edges).unwrap();
        let ntd = make_nice(&td);
        validate_nice(&ntd, &g).unwrap();
        assert!(ntd.nodes.iter().any(|n| matches!(n.kind, NodeKind::Join)));
    }

    #[test]
    fn ensure_singleton_root_forgets_down() {
        let g = path_graph(4);
        let ntd = make_nice(&path_td(4)).ensure_singleton_root();
        validate_nice(&ntd, &g).unwrap();
        assert_eq!(ntd.nodes[ntd.root].bag.len(), 1);
    }

    #[test]
    fn postorder_visits_children_first() {
        let ntd = make_nice(&path_td(5));
        let order = ntd.postorder();
        assert_eq!(order.len(), ntd.node_count());
        let mut seen = vec![false; ntd.node_count()];
        for &u in &order {
            for &c in &ntd.nodes[u].children {
                assert!(seen[c], "child before parent");
            }
            seen[u] = true;
        }
        assert_eq!(order.last(), Some(&ntd.root));
    }

    #[test]
    fn validate_nice_rejects_structural_breaks() {
        let g = path_graph(3);
        let mut ntd = make_nice(&path_td(3));
        ntd.nodes[0].bag = vec![0, 1, 2];
        assert!(validate_nice(&ntd, &g).is_err());

        let ntd = NiceTreeDecomposition {
            nodes: vec![NiceNode { bag: vec![0], kind: NodeKind::Join, children: vec![] }],
            root: 0,
        };
        assert_eq!(
            validate_nice(&ntd, &g),
            Err(NiceViolation::BadArity { node: 0 })
        );
    }

    #[test]
    fn target_rooting_shapes_and_width() {
        let text = "mdp 4 5\nP 2\n0 0\n1 0\n1 2\n2 3\n3 2\nt 1 0\n";
        let (g, targets) = parse_mdp(text).unwrap();
        let (gr, s) = reduce_target(&g, &targets.unwrap()).unwrap();
        let td = heuristic_decompose(&gr, Strategy::MinDegree);
        let ntd = make_nice(&td);
        let rtd = root_with_target(&ntd, s);
        rtd.validate(&gr).unwrap();
        assert!(rtd.nice.width() <= ntd.width() + 1);
    }

    #[test]
    fn target_rooting_on_larger_paths() {
        for n in [2usize, 3, 7, 12] {
            let g = path_graph(n);
            for s in [0, n - 1, n / 2] {
                let td = heuristic_decompose(&g, Strategy::MinFill);
                let ntd = make_nice(&td);
                let rtd = root_with_target(&ntd, s);
                rtd.validate(&g).unwrap();
                assert!(rtd.nice.width() <= ntd.width() + 1);
                assert_eq!(rtd.nice.nodes[rtd.nice.root].bag, vec![s]);
            }
        }
    }

    #[test]
    fn target_rooting_fixpoint_on_trivial_tree() {
        let g = MdpGraph::new(vec![Owner::Player1], vec![(0, 0)]).unwrap();
        let ntd = NiceTreeDecomposition {
            nodes: vec![NiceNode { bag: vec![0], kind: NodeKind::Leaf, children: vec![] }],
            root: 0,
        };
        let rtd = root_with_target(&ntd, 0);
        rtd.validate(&g).unwrap();
        assert_eq!(rtd.nice.node_count(), 1);
    }
}
