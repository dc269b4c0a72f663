//! Elimination-order construction of tree decompositions.
//!
//! Both entry points run the same core: eliminate vertices one at a time
//! from the undirected simple version of the graph, record the bag
//! `{v} ∪ neighbors(v)` at elimination time, connect the surviving
//! neighbors into a clique, and attach each bag to the bag of its
//! earliest-eliminated surviving neighbor.

use std::collections::BTreeSet;

use crate::decomposition::TreeDecomposition;
use crate::mdp::MdpGraph;

/// Vertex-selection rule for [`heuristic_decompose`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Fewest surviving neighbors, lowest id on ties.
    MinDegree,
    /// Fewest missing edges among surviving neighbors, lowest id on ties.
    MinFill,
}

/// Decomposes `g` by greedy elimination under `strategy`. The result
/// always validates; its width depends on the graph and the rule.
pub fn heuristic_decompose(g: &MdpGraph, strategy: Strategy) -> TreeDecomposition {
    eliminate(g, Picker::Greedy(strategy))
}

/// Decomposes `g` by eliminating in exactly the given order, which must
/// be a permutation of the vertices. Useful when a construction already
/// knows a good order and its width is to be certified.
pub fn decompose_with_elimination_order(g: &MdpGraph, order: &[usize]) -> TreeDecomposition {
    assert_eq!(order.len(), g.n(), "order must cover every vertex");
    let mut seen = vec![false; g.n()];
    for &v in order {
        assert!(v < g.n() && !seen[v], "order must be a permutation");
        seen[v] = true;
    }
    eliminate(g, Picker::Fixed(order))
}

enum Picker<'a> {
    Greedy(Strategy),
    Fixed(&'a [usize]),
}

fn eliminate(g: &MdpGraph, picker: Picker<'_>) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition { bags: vec![Vec::new()], tree_edges: Vec::new() };
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(u, v) in g.edges() {
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }

    let mut alive = vec![true; n];
    // fill[v] = missing edges among the surviving neighbors of v; only
    // maintained for the greedy min-fill rule.
    let mut fill: Vec<usize> = Vec::new();
    if matches!(picker, Picker::Greedy(Strategy::MinFill)) {
        fill = (0..n).map(|v| count_fill(&adj, v)).collect();
    }

    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut position = vec![usize::MAX; n]; // elimination step of each vertex
    let mut order = Vec::with_capacity(n);

    for step in 0..n {
        let v = match &picker {
            Picker::Fixed(seq) => seq[step],
            Picker::Greedy(Strategy::MinDegree) => (0..n)
                .filter(|&v| alive[v])
                .min_by_key(|&v| (adj[v].len(), v))
                .unwrap(),
            Picker::Greedy(Strategy::MinFill) => (0..n)
                .filter(|&v| alive[v])
                .min_by_key(|&v| (fill[v], v))
                .unwrap(),
        };
        debug_assert!(alive[v]);
        let neighbors: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag = neighbors.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        position[v] = step;
        order.push(v);

        alive[v] = false;
        for &u in &neighbors {
            adj[u].remove(&v);
        }
        for i in 0..neighbors.len() {
            for j in i + 1..neighbors.len() {
                adj[neighbors[i]].insert(neighbors[j]);
                adj[neighbors[j]].insert(neighbors[i]);
            }
        }
        if matches!(picker, Picker::Greedy(Strategy::MinFill)) {
            // Fill counts can change for the former neighbors and for
            // anything adjacent to them.
            let mut dirty: BTreeSet<usize> = neighbors.iter().copied().collect();
            for &u in &neighbors {
                dirty.extend(adj[u].iter().copied());
            }
            for u in dirty {
                if alive[u] {
                    fill[u] = count_fill(&adj, u);
                }
            }
        }
    }

    // Bag of order[i] attaches to the bag of the earliest-eliminated
    // vertex among its bag mates; a bag with none attaches to the next
    // elimination, so stray vertices chain onto the rest of the tree.
    let mut tree_edges = Vec::with_capacity(n.saturating_sub(1));
    for (i, &v) in order.iter().enumerate() {
        let parent = bags[i]
            .iter()
            .filter(|&&u| u != v)
            .map(|&u| position[u])
            .min()
            .unwrap_or(i + 1);
        if parent < n {
            debug_assert!(parent > i, "parent bags come later in the order");
            tree_edges.push((i, parent));
        } else {
            debug_assert_eq!(i, n - 1, "only the last bag has no parent");
        }
    }
    TreeDecomposition { bags, tree_edges }
}

fn count_fill(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let neighbors: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for i in 0..neighbors.len() {
        for j in i + 1..neighbors.len() {
            if !adj[neighbors[i]].contains(&neighbors[j]) {
                missing += 1;
            }
        }
    }
    missing
}
