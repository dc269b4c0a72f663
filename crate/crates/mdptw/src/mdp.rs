//! Graph model for Markov decision processes in qualitative analyses.
//!
//! An [`MdpGraph`] is a directed graph whose vertices are split between
//! player 1 and a probabilistic player. Transition probabilities never
//! matter for the questions answered by this crate, so none are stored;
//! the one structural obligation is that every probabilistic vertex keeps
//! at least one out-edge.
//!
//! The module also owns the plain-text exchange format (`mdp <n> <m>`
//! header, `P <id>` owner lines, one edge per line, optional `t` target
//! line), the target-set reduction that funnels all targets into a fresh
//! absorbing vertex, strongly connected components with topologically
//! numbered ids, and reverse reachability.

use std::fmt::Write as _;

use thiserror::Error;

/// Which player resolves the choice at a vertex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Owner {
    Player1,
    Probabilistic,
}

/// Structural problems raised when assembling a graph.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("duplicate edge {u} -> {v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("probabilistic vertex {v} has no out-edge")]
    ProbabilisticWithoutOutEdge { v: usize },
}

/// Problems found while reading the text format.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Problems with a requested target reduction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("target set is empty")]
    EmptyTargetSet,
    #[error("target vertex {v} out of range for {n} vertices")]
    TargetOutOfRange { v: usize, n: usize },
}

/// Directed game graph with an owner per vertex.
///
/// Vertex ids are dense `0..n`. The edge list is kept sorted and free of
/// duplicates, and both adjacency directions are materialized.
#[derive(Clone, Debug)]
pub struct MdpGraph {
    owner: Vec<Owner>,
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl MdpGraph {
    /// Builds a graph, rejecting out-of-range endpoints, duplicate edges,
    /// and probabilistic vertices with no out-edge.
    pub fn new(
        owner: Vec<Owner>,
        mut edges: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        let n = owner.len();
        for &(u, v) in &edges {
            let bad = if u >= n { u } else { v };
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { v: bad, n });
            }
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge { u: w[0].0, v: w[0].1 });
            }
        }
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in &edges {
            out[u].push(v);
            inn[v].push(u);
        }
        for list in &mut inn {
            list.sort_unstable();
        }
        for v in 0..n {
            if owner[v] == Owner::Probabilistic && out[v].is_empty() {
                return Err(GraphError::ProbabilisticWithoutOutEdge { v });
            }
        }
        Ok(MdpGraph { owner, edges, out, inn })
    }

    pub fn n(&self) -> usize {
        self.owner.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn owner(&self, v: usize) -> Owner {
        self.owner[v]
    }

    pub fn is_probabilistic(&self, v: usize) -> bool {
        self.owner[v] == Owner::Probabilistic
    }

    /// Sorted, duplicate-free edge list.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Successors of `v` in ascending order.
    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Predecessors of `v` in ascending order.
    pub fn inn(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u, v)).is_ok()
    }

    /// Copy of the graph keeping only edges approved by `keep`. Fails if a
    /// probabilistic vertex would lose its last out-edge.
    pub fn retain_edges(
        &self,
        mut keep: impl FnMut(usize, usize) -> bool,
    ) -> Result<MdpGraph, GraphError> {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| keep(u, v))
            .collect();
        MdpGraph::new(self.owner.clone(), edges)
    }
}

/// Reads the text format. Returns the graph and the optional target set
/// from a trailing `t` line. Sections must appear in order: header, owner
/// lines, edge lines, target line; comments (`#`) and blank lines may sit
/// anywhere.
pub fn parse_mdp(text: &str) -> Result<(MdpGraph, Option<Vec<usize>>), ParseError> {
    let syntax = |line: usize, msg: String| ParseError::Syntax { line, msg };
    let mut header: Option<(usize, usize)> = None;
    let mut owners_done = false;
    let mut prob: Vec<usize> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut targets: Option<Vec<usize>> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_ascii_whitespace();
        let first = tokens.next().unwrap();
        let parse_id = |tok: &str| -> Result<usize, ParseError> {
            tok.parse::<usize>()
                .map_err(|_| syntax(line_no, format!("expected a vertex id, got {tok:?}")))
        };
        match first {
            "mdp" => {
                if header.is_some() {
                    return Err(syntax(line_no, "duplicate header".into()));
                }
                let n = parse_id(tokens.next().ok_or_else(|| {
                    syntax(line_no, "header needs vertex and edge counts".into())
                })?)?;
                let m = parse_id(tokens.next().ok_or_else(|| {
                    syntax(line_no, "header needs vertex and edge counts".into())
                })?)?;
                if tokens.next().is_some() {
                    return Err(syntax(line_no, "trailing tokens after header".into()));
                }
                header = Some((n, m));
            }
            "P" => {
                if header.is_none() {
                    return Err(syntax(line_no, "owner line before header".into()));
                }
                if owners_done {
                    return Err(syntax(line_no, "owner line after edge section".into()));
                }
                let v = parse_id(tokens.next().ok_or_else(|| {
                    syntax(line_no, "owner line needs a vertex id".into())
                })?)?;
                if tokens.next().is_some() {
                    return Err(syntax(line_no, "one vertex id per owner line".into()));
                }
                prob.push(v);
            }
            "t" => {
                if header.is_none() {
                    return Err(syntax(line_no, "target line before header".into()));
                }
                if targets.is_some() {
                    return Err(syntax(line_no, "duplicate target line".into()));
                }
                let mut ids = Vec::new();
                for tok in tokens {
                    ids.push(parse_id(tok)?);
                }
                if ids.is_empty() {
                    return Err(syntax(line_no, "target line needs at least one id".into()));
                }
                targets = Some(ids);
            }
            _ => {
                if header.is_none() {
                    return Err(syntax(line_no, "edge line before header".into()));
                }
                if targets.is_some() {
                    return Err(syntax(line_no, "edge line after target line".into()));
                }
                owners_done = true;
                let u = parse_id(first)?;
                let v = parse_id(tokens.next().ok_or_else(|| {
                    syntax(line_no, "edge line needs two vertex ids".into())
                })?)?;
                if tokens.next().is_some() {
                    return Err(syntax(line_no, "edge line needs exactly two ids".into()));
                }
                edges.push((u, v));
            }
        }
    }

    let Some((n, m)) = header else {
        return Err(syntax(0, "missing `mdp <n> <m>` header".into()));
    };
    if edges.len() != m {
        return Err(syntax(
            0,
            format!("header declares {m} edges but {} were given", edges.len()),
        ));
    }
    let mut owner = vec![Owner::Player1; n];
    for v in prob {
        if v >= n {
            return Err(GraphError::VertexOutOfRange { v, n }.into());
        }
        owner[v] = Owner::Probabilistic;
    }
    if let Some(ids) = &targets {
        for &v in ids {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n }.into());
            }
        }
    }
    let graph = MdpGraph::new(owner, edges)?;
    Ok((graph, targets))
}

/// Canonical text form: sorted owner lines, sorted edges, optional sorted
/// target line. Parsing the output reproduces the graph exactly.
pub fn serialize_mdp(g: &MdpGraph, targets: Option<&[usize]>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "mdp {} {}", g.n(), g.m());
    for v in 0..g.n() {
        if g.is_probabilistic(v) {
            let _ = writeln!(s, "P {v}");
        }
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    if let Some(ids) = targets {
        let mut ids: Vec<usize> = ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        s.push('t');
        for v in ids {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    s
}

/// Reduces a target set to a single absorbing vertex.
///
/// A fresh player-1 vertex `s = n` is appended with a self-loop, and every
/// out-edge of a target vertex is replaced by the single edge into `s`.
/// Reachability questions about the target set on the original graph
/// become questions about `s` on the result; answers restricted to the
/// original ids agree.
pub fn reduce_target(
    g: &MdpGraph,
    targets: &[usize],
) -> Result<(MdpGraph, usize), ReduceError> {
    if targets.is_empty() {
        return Err(ReduceError::EmptyTargetSet);
    }
    let n = g.n();
    let mut is_target = vec![false; n];
    for &t in targets {
        if t >= n {
            return Err(ReduceError::TargetOutOfRange { v: t, n });
        }
        is_target[t] = true;
    }
    let s = n;
    let mut owner = Vec::with_capacity(n + 1);
    owner.extend_from_slice(&g.owner);
    owner.push(Owner::Player1);
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, _)| !is_target[u])
        .collect();
    for t in 0..n {
        if is_target[t] {
            edges.push((t, s));
        }
    }
    edges.push((s, s));
    let reduced = MdpGraph::new(owner, edges)
        .expect("reduction preserves the probabilistic out-degree invariant");
    Ok((reduced, s))
}

/// Strongly connected components with topologically numbered ids: for
/// every edge the source component's id is at most the target's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccLabeling {
    pub comp_of: Vec<usize>,
    /// Component vertex lists, each ascending, indexed by component id.
    pub components: Vec<Vec<usize>>,
}

impl SccLabeling {
    pub fn count(&self) -> usize {
        self.components.len()
    }
}

/// Tarjan's algorithm with an explicit stack; component ids come out
/// topologically numbered.
pub fn compute_sccs(g: &MdpGraph) -> SccLabeling {
    compute_sccs_of(g.n(), |v| g.out(v))
}

/// SCCs of an arbitrary adjacency view; shared by the decremental
/// structures, which restrict to the surviving subgraph.
pub fn compute_sccs_of<'a, F>(n: usize, out: F) -> SccLabeling
where
    F: Fn(usize) -> &'a [usize],
{
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut completed: Vec<Vec<usize>> = Vec::new();
    let mut next_index = 0usize;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));
        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            let succ = out(v);
            if frame.1 < succ.len() {
                let w = succ[frame.1];
                frame.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    let p = parent.0;
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    completed.push(comp);
                }
            }
        }
    }

    // Components complete in reverse topological order; flip so sources
    // get the low ids.
    completed.reverse();
    let mut comp_of = vec![0usize; n];
    for (id, comp) in completed.iter().enumerate() {
        for &v in comp {
            comp_of[v] = id;
        }
    }
    SccLabeling { comp_of, components: completed }
}

/// Sorted list of vertices with a path to `s` (including `s` itself).
pub fn reverse_reachable(g: &MdpGraph, s: usize) -> Vec<usize> {
    assert!(s < g.n(), "vertex {s} out of range");
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut queue = vec![s];
    while let Some(v) = queue.pop() {
        for &u in g.inn(v) {
            if !seen[u] {
                seen[u] = true;
                queue.push(u);
            }
        }
    }
    (0..g.n()).filter(|&v| seen[v]).collect()
}
