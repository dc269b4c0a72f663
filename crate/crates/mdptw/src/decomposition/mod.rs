//! Tree decompositions: validation, text format, elimination-order
//! heuristics, and the nice/rooted forms consumed by the dynamic
//! programs.
//!
//! A decomposition is stored as plain bags plus tree edges. Files use the
//! PACE-style layout (`s td <bags> <width+1> <n>` header, `b` lines, one
//! tree edge per line) with 1-based bag ids; vertex ids stay 0-based to
//! match the MDP format.

mod heuristic;
mod nice;

pub use heuristic::{decompose_with_elimination_order, heuristic_decompose, Strategy};
pub use nice::{
    make_nice, root_with_target, validate_nice, NiceNode, NiceTreeDecomposition,
    NiceViolation, NodeKind, RootedTargetDecomposition,
};

use std::fmt::Write as _;

use thiserror::Error;

use crate::mdp::{MdpGraph, ParseError};

/// Bags over graph vertices plus an (unrooted) tree on the bags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Each bag is an ascending vertex list.
    pub bags: Vec<Vec<usize>>,
    /// Undirected edges between bag indices.
    pub tree_edges: Vec<(usize, usize)>,
}

/// First failed decomposition property, with a witness.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TdViolation {
    #[error("decomposition has no bags")]
    NoBags,
    #[error("bag {bag} mentions vertex {v}, out of range for {n} vertices")]
    BagVertexOutOfRange { bag: usize, v: usize, n: usize },
    #[error("bag edges do not form a tree: {reason}")]
    NotATree { reason: String },
    #[error("vertex {v} is in no bag")]
    VertexUncovered { v: usize },
    #[error("edge {u} -> {v} is covered by no bag")]
    EdgeUncovered { u: usize, v: usize },
    #[error("the bags containing vertex {v} do not form a connected subtree")]
    VertexSubtreeDisconnected { v: usize },
    #[error("component containing vertex {v} touches two subtrees around the bag")]
    SeparatorViolated { v: usize },
}

impl TreeDecomposition {
    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Tree adjacency as index lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks all defining properties against `g`: bags in range, edges a
    /// tree, every vertex and every edge covered, and per-vertex bag sets
    /// connected. Returns the first violation found.
    pub fn validate(&self, g: &MdpGraph) -> Result<(), TdViolation> {
        let nb = self.bags.len();
        if nb == 0 {
            return Err(TdViolation::NoBags);
        }
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n() {
                    return Err(TdViolation::BagVertexOutOfRange { bag: i, v, n: g.n() });
                }
            }
            debug_assert!(bag.windows(2).all(|w| w[0] < w[1]), "bags stay sorted");
        }
        if self.tree_edges.len() != nb - 1 {
            return Err(TdViolation::NotATree {
                reason: format!(
                    "{} bags need {} edges, found {}",
                    nb,
                    nb - 1,
                    self.tree_edges.len()
                ),
            });
        }
        for &(a, b) in &self.tree_edges {
            if a >= nb || b >= nb {
                return Err(TdViolation::NotATree {
                    reason: format!("edge ({a}, {b}) out of range"),
                });
            }
            if a == b {
                return Err(TdViolation::NotATree { reason: format!("self-edge at {a}") });
            }
        }
        let adj = self.adjacency();
        let mut seen = vec![false; nb];
        let mut queue = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push(y);
                }
            }
        }
        if count != nb {
            return Err(TdViolation::NotATree { reason: "disconnected".into() });
        }

        let mut bags_of = vec![Vec::new(); g.n()];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                bags_of[v].push(i);
            }
        }
        for v in 0..g.n() {
            if bags_of[v].is_empty() {
                return Err(TdViolation::VertexUncovered { v });
            }
        }
        for &(u, v) in g.edges() {
            let covered = bags_of[u].len() <= bags_of[v].len()
                && bags_of[u]
                    .iter()
                    .any(|&i| self.bags[i].binary_search(&v).is_ok())
                || bags_of[v].len() < bags_of[u].len()
                    && bags_of[v]
                        .iter()
                        .any(|&i| self.bags[i].binary_search(&u).is_ok());
            if !covered {
                return Err(TdViolation::EdgeUncovered { u, v });
            }
        }
        // Connectivity of each vertex's bag set, checked by a walk that
        // stays inside that set.
        let mut in_set = vec![usize::MAX; nb];
        for v in 0..g.n() {
            for &i in &bags_of[v] {
                in_set[i] = v;
            }
            let mut reached = 1usize;
            let mut queue = vec![bags_of[v][0]];
            in_set[bags_of[v][0]] = usize::MAX; // mark visited by clearing
            while let Some(x) = queue.pop() {
                for &y in &adj[x] {
                    if in_set[y] == v {
                        in_set[y] = usize::MAX;
                        reached += 1;
                        queue.push(y);
                    }
                }
            }
            if reached != bags_of[v].len() {
                return Err(TdViolation::VertexSubtreeDisconnected { v });
            }
        }
        Ok(())
    }
}

/// Assignment of the graph components around one bag to tree subtrees:
/// removing the bag's vertices from the graph and the bag's node from the
/// tree, every remaining component is covered by exactly one subtree.
#[derive(Debug, PartialEq, Eq)]
pub struct SeparatorCertificate {
    /// `(component vertices ascending, neighbor bag rooting the subtree)`.
    pub components: Vec<(Vec<usize>, usize)>,
}

/// Certifies the separator property of `bag_index` in a valid
/// decomposition. Fails with [`TdViolation::SeparatorViolated`] if some
/// component is spread over two subtrees (impossible for valid input).
pub fn check_separator(
    td: &TreeDecomposition,
    bag_index: usize,
    g: &MdpGraph,
) -> Result<SeparatorCertificate, TdViolation> {
    let nb = td.bags.len();
    assert!(bag_index < nb, "bag index out of range");
    let n = g.n();
    let mut in_bag = vec![false; n];
    for &v in &td.bags[bag_index] {
        in_bag[v] = true;
    }
    // Undirected components of the graph minus the bag.
    let mut comp_of = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if in_bag[start] || comp_of[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![start];
        comp_of[start] = id;
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for &w in g.out(v).iter().chain(g.inn(v)) {
                if !in_bag[w] && comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    members.push(w);
                    queue.push(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    // Label tree nodes by the neighbor subtree they fall in.
    let adj = td.adjacency();
    let mut subtree = vec![usize::MAX; nb];
    for &start in &adj[bag_index] {
        if subtree[start] != usize::MAX {
            continue;
        }
        subtree[start] = start;
        let mut queue = vec![start];
        while let Some(x) = queue.pop() {
            for &y in &adj[x] {
                if y != bag_index && subtree[y] == usize::MAX {
                    subtree[y] = start;
                    queue.push(y);
                }
            }
        }
    }
    let mut bags_of = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            bags_of[v].push(i);
        }
    }
    let mut out = Vec::new();
    for members in comps {
        let mut label = usize::MAX;
        for &v in &members {
            for &i in &bags_of[v] {
                debug_assert_ne!(i, bag_index);
                if label == usize::MAX {
                    label = subtree[i];
                } else if subtree[i] != label {
                    return Err(TdViolation::SeparatorViolated { v });
                }
            }
        }
        out.push((members, label));
    }
    Ok(SeparatorCertificate { components: out })
}

/// Reads the PACE-style text form. Bag ids are 1-based in the file;
/// vertices are 0-based. `c` lines are ignored, so nice exports re-parse
/// as their underlying decomposition.
pub fn parse_td(text: &str) -> Result<TreeDecomposition, ParseError> {
    let syntax = |line: usize, msg: String| ParseError::Syntax { line, msg };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut tree_edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tokens = line.split_ascii_whitespace();
        let first = tokens.next().unwrap();
        let parse_num = |tok: &str| -> Result<usize, ParseError> {
            tok.parse::<usize>()
                .map_err(|_| syntax(line_no, format!("expected a number, got {tok:?}")))
        };
        match first {
            "s" => {
                if header.is_some() {
                    return Err(syntax(line_no, "duplicate header".into()));
                }
                if tokens.next() != Some("td") {
                    return Err(syntax(line_no, "header must start `s td`".into()));
                }
                let nb = parse_num(tokens.next().ok_or_else(|| {
                    syntax(line_no, "header needs bag count, width+1, vertex count".into())
                })?)?;
                let w1 = parse_num(tokens.next().ok_or_else(|| {
                    syntax(line_no, "header needs bag count, width+1, vertex count".into())
                })?)?;
                let n = parse_num(tokens.next().ok_or_else(|| {
                    syntax(line_no, "header needs bag count, width+1, vertex count".into())
                })?)?;
                bags = vec![None; nb];
                header = Some((nb, w1, n));
            }
            "b" => {
                let Some((nb, w1, n)) = header else {
                    return Err(syntax(line_no, "bag line before header".into()));
                };
                let id = parse_num(tokens.next().ok_or_else(|| {
                    syntax(line_no, "bag line needs a bag id".into())
                })?)?;
                if id == 0 || id > nb {
                    return Err(syntax(line_no, format!("bag id {id} out of 1..={nb}")));
                }
                if bags[id - 1].is_some() {
                    return Err(syntax(line_no, format!("duplicate bag {id}")));
                }
                let mut bag = Vec::new();
                for tok in tokens {
                    let v = parse_num(tok)?;
                    if v >= n {
                        return Err(syntax(
                            line_no,
                            format!("vertex {v} out of range for {n} vertices"),
                        ));
                    }
                    bag.push(v);
                }
                bag.sort_unstable();
                bag.dedup();
                if bag.len() > w1 {
                    return Err(syntax(
                        line_no,
                        format!("bag {id} has {} vertices, header allows {w1}", bag.len()),
                    ));
                }
                bags[id - 1] = Some(bag);
            }
            _ => {
                let Some((nb, _, _)) = header else {
                    return Err(syntax(line_no, "tree edge before header".into()));
                };
                let a = parse_num(first)?;
                let b = parse_num(tokens.next().ok_or_else(|| {
                    syntax(line_no, "tree edge needs two bag ids".into())
                })?)?;
                if tokens.next().is_some() {
                    return Err(syntax(line_no, "tree edge needs exactly two ids".into()));
                }
                for id in [a, b] {
                    if id == 0 || id > nb {
                        return Err(syntax(line_no, format!("bag id {id} out of 1..={nb}")));
                    }
                }
                tree_edges.push((a - 1, b - 1));
            }
        }
    }
    if header.is_none() {
        return Err(syntax(0, "missing `s td` header".into()));
    }
    let bags = bags.into_iter().map(|b| b.unwrap_or_default()).collect();
    Ok(TreeDecomposition { bags, tree_edges })
}

/// Writes the PACE-style text form; `n` is the vertex count of the graph
/// the decomposition belongs to.
pub fn serialize_td(td: &TreeDecomposition, n: usize) -> String {
    let mut s = String::new();
    let width_plus_1 = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    let _ = writeln!(s, "s td {} {} {}", td.bags.len(), width_plus_1, n);
    for (i, bag) in td.bags.iter().enumerate() {
        let _ = write!(s, "b {}", i + 1);
        for &v in bag {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    for &(a, b) in &td.tree_edges {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}

/// Writes a nice decomposition: the underlying PACE form plus one
/// `c nice <node-id> <kind> [<v>]` line per node.
pub fn serialize_nice_td(ntd: &NiceTreeDecomposition, n: usize) -> String {
    let mut s = serialize_td(&ntd.as_tree_decomposition(), n);
    for (i, node) in ntd.nodes.iter().enumerate() {
        match node.kind {
            NodeKind::Leaf => {
                let _ = writeln!(s, "c nice {} leaf", i + 1);
            }
            NodeKind::Introduce(v) => {
                let _ = writeln!(s, "c nice {} introduce {v}", i + 1);
            }
            NodeKind::Forget(v) => {
                let _ = writeln!(s, "c nice {} forget {v}", i + 1);
            }
            NodeKind::Join => {
                let _ = writeln!(s, "c nice {} join", i + 1);
            }
        }
    }
    let _ = writeln!(s, "c nice root {}", ntd.root + 1);
    s
}
