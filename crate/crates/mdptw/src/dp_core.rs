//! Shared machinery for the two bag-table dynamic programs.
//!
//! Both programs walk a nice decomposition bottom-up and keep, per node
//! and per valid bag subset, an implicitly represented vertex set (a
//! construction rule in an arena) plus the transitive closure of that
//! set's induced subgraph restricted to the subset. They differ only in
//! which subsets are valid and in the absorption test at forget nodes,
//! so one engine runs both.

use thiserror::Error;

use crate::bitmat::BitMatrix;
use crate::decomposition::{NiceTreeDecomposition, NodeKind};
use crate::mdp::MdpGraph;

/// Bags above this size would make subset enumeration explode; the
/// engine refuses rather than thrash.
pub const MAX_BAG: usize = 16;

pub type RuleId = u32;

/// How a stored vertex set is assembled. Sharing ids keeps copies free;
/// expansion walks the dag once per reachable rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// The empty set.
    Empty,
    /// One vertex.
    Single(u32),
    /// An earlier set plus one vertex.
    Add(RuleId, u32),
    /// Union of two earlier sets.
    Union(RuleId, RuleId),
}

/// Append-only store of [`Rule`]s with iterative, stamp-deduplicated
/// expansion.
#[derive(Clone, Debug, Default)]
pub struct RuleArena {
    rules: Vec<Rule>,
    mark: Vec<u32>,
    epoch: u32,
}

impl RuleArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn empty(&mut self) -> RuleId {
        self.push(Rule::Empty)
    }

    pub fn single(&mut self, v: usize) -> RuleId {
        self.push(Rule::Single(v as u32))
    }

    pub fn add(&mut self, base: RuleId, v: usize) -> RuleId {
        self.push(Rule::Add(base, v as u32))
    }

    pub fn union(&mut self, a: RuleId, b: RuleId) -> RuleId {
        if a == b {
            return a;
        }
        self.push(Rule::Union(a, b))
    }

    fn push(&mut self, rule: Rule) -> RuleId {
        self.rules.push(rule);
        (self.rules.len() - 1) as RuleId
    }

    /// Sorted vertex list described by `id`. Shared sub-rules are walked
    /// once; repeated vertices collapse.
    pub fn expand(&mut self, id: RuleId) -> Vec<usize> {
        self.epoch += 1;
        self.mark.resize(self.rules.len(), 0);
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(r) = stack.pop() {
            let r = r as usize;
            if self.mark[r] == self.epoch {
                continue;
            }
            self.mark[r] = self.epoch;
            match self.rules[r] {
                Rule::Empty => {}
                Rule::Single(v) => out.push(v as usize),
                Rule::Add(base, v) => {
                    out.push(v as usize);
                    stack.push(base);
                }
                Rule::Union(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Work counters for one dynamic-programming run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    /// Decomposition nodes processed.
    pub nodes: u64,
    /// Valid subsets enumerated over all nodes.
    pub subsets: u64,
    /// Transitive-closure computations performed.
    pub closures: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DpError {
    #[error("bag of node {node} has {size} vertices; the table limit is {max}")]
    WidthTooLarge { node: usize, size: usize, max: usize },
}

/// One retained table entry: the subset, its rule, and the closure at
/// the time the node was processed.
#[derive(Clone, Debug)]
pub struct EntrySnapshot {
    pub mask: u64,
    pub rule: RuleId,
    pub closure: BitMatrix,
}

/// Fully retained tables, for verification and for extraction passes
/// that need per-node entries after the run.
#[derive(Debug)]
pub struct DpTables {
    /// Indexed by node id; entries in ascending mask order.
    pub entries: Vec<Vec<EntrySnapshot>>,
    pub arena: RuleArena,
}

pub(crate) struct DpConfig {
    /// Every valid subset must contain this vertex (present in every
    /// bag); `None` admits any probabilistically consistent subset.
    pub require: Option<usize>,
    /// Forget absorption also demands a path from the remaining subset
    /// back into the forgotten vertex.
    pub backward_check: bool,
    /// Keep each node's (mask, rule) pairs for extraction passes.
    pub retain_rules: bool,
    /// Keep full per-node snapshots including closures, for verification.
    pub retain_closures: bool,
}

pub(crate) struct DpOutcome {
    /// Entries of the root node, ascending by mask.
    pub root: Vec<(u64, RuleId)>,
    pub arena: RuleArena,
    pub stats: DpStats,
    /// Per-node (mask, rule) lists when rule retention was requested.
    pub rules: Option<Vec<Vec<(u64, RuleId)>>>,
    /// Per-node snapshots when closure retention was requested.
    pub snapshots: Option<Vec<Vec<EntrySnapshot>>>,
}

#[derive(Clone)]
struct Entry {
    rule: RuleId,
    tc: BitMatrix,
}

type Table = Vec<(u64, Entry)>;

fn lookup<'t>(table: &'t Table, mask: u64) -> Option<&'t Entry> {
    table
        .binary_search_by_key(&mask, |&(m, _)| m)
        .ok()
        .map(|i| &table[i].1)
}

/// Bit `p` inserted as zero: bits below `p` stay, bits at and above `p`
/// shift up.
pub(crate) fn expand_mask(mask: u64, p: usize) -> u64 {
    let low = mask & ((1u64 << p) - 1);
    let high = (mask >> p) << (p + 1);
    low | high
}

/// Bit `p` removed: bits above `p` shift down.
pub(crate) fn contract_mask(mask: u64, p: usize) -> u64 {
    let low = mask & ((1u64 << p) - 1);
    let high = (mask >> (p + 1)) << p;
    low | high
}

fn remap_insert(tc: &BitMatrix, p: usize) -> BitMatrix {
    let dim = tc.dim();
    let map: Vec<Option<usize>> = (0..dim).map(|i| Some(if i < p { i } else { i + 1 })).collect();
    tc.remap(&map, dim + 1)
}

fn remap_drop(tc: &BitMatrix, p: usize) -> BitMatrix {
    let dim = tc.dim();
    let map: Vec<Option<usize>> = (0..dim)
        .map(|i| {
            if i == p {
                None
            } else if i < p {
                Some(i)
            } else {
                Some(i - 1)
            }
        })
        .collect();
    tc.remap(&map, dim - 1)
}

/// Per-node bag facts: which positions are probabilistic and, for each
/// position, the positions it has out-edges to inside the bag.
struct BagFacts {
    prob_mask: u64,
    out_within: Vec<u64>,
}

fn bag_facts(g: &MdpGraph, bag: &[usize]) -> BagFacts {
    let mut prob_mask = 0u64;
    let mut out_within = vec![0u64; bag.len()];
    for (i, &v) in bag.iter().enumerate() {
        if g.is_probabilistic(v) {
            prob_mask |= 1 << i;
        }
        for &w in g.out(v) {
            if let Ok(j) = bag.binary_search(&w) {
                out_within[i] |= 1 << j;
            }
        }
    }
    BagFacts { prob_mask, out_within }
}

/// Ascending list of subsets that contain the required vertex (if any)
/// and keep every in-bag probabilistic vertex's in-bag edges inside.
fn valid_masks(facts: &BagFacts, bag_len: usize, require_pos: Option<usize>) -> Vec<u64> {
    let full = if bag_len == 64 { u64::MAX } else { (1u64 << bag_len) - 1 };
    let need = require_pos.map_or(0, |p| 1u64 << p);
    let mut out = Vec::new();
    'mask: for mask in 0..=full {
        if mask & need != need {
            continue;
        }
        let mut probs = mask & facts.prob_mask;
        while probs != 0 {
            let i = probs.trailing_zeros() as usize;
            probs &= probs - 1;
            if facts.out_within[i] & !mask != 0 {
                continue 'mask;
            }
        }
        out.push(mask);
    }
    out
}

fn diagonal(dim: usize, mask: u64) -> BitMatrix {
    let mut tc = BitMatrix::new(dim);
    let mut bits = mask;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        tc.set(i, i);
    }
    tc
}

/// Runs the table dynamic program bottom-up over `ntd`.
pub(crate) fn run_dp(
    g: &MdpGraph,
    ntd: &NiceTreeDecomposition,
    cfg: &DpConfig,
) -> Result<DpOutcome, DpError> {
    for (node, n) in ntd.nodes.iter().enumerate() {
        if n.bag.len() > MAX_BAG {
            return Err(DpError::WidthTooLarge { node, size: n.bag.len(), max: MAX_BAG });
        }
    }
    let mut arena = RuleArena::new();
    let mut stats = DpStats::default();
    let mut slots: Vec<Option<Table>> = (0..ntd.nodes.len()).map(|_| None).collect();
    let mut rules: Option<Vec<Vec<(u64, RuleId)>>> =
        cfg.retain_rules.then(|| vec![Vec::new(); ntd.nodes.len()]);
    let mut snapshots: Option<Vec<Vec<EntrySnapshot>>> =
        cfg.retain_closures.then(|| vec![Vec::new(); ntd.nodes.len()]);

    for d in ntd.postorder() {
        let node = &ntd.nodes[d];
        let bag = &node.bag;
        let facts = bag_facts(g, bag);
        let require_pos = cfg.require.map(|s| {
            bag.binary_search(&s).expect("required vertex must sit in every bag")
        });
        let masks = valid_masks(&facts, bag.len(), require_pos);
        stats.nodes += 1;
        stats.subsets += masks.len() as u64;

        let table: Table = match node.kind {
            NodeKind::Leaf => {
                let mut t = Table::with_capacity(masks.len());
                for &mask in &masks {
                    let rule = if mask == 0 {
                        arena.empty()
                    } else {
                        arena.single(bag[0])
                    };
                    t.push((mask, Entry { rule, tc: diagonal(bag.len(), mask) }));
                }
                t
            }
            NodeKind::Introduce(w) => {
                let child = slots[node.children[0]].take().expect("child table ready");
                let p = bag.binary_search(&w).expect("introduced vertex in bag");
                let mut t = Table::with_capacity(masks.len());
                for &mask in &masks {
                    let child_mask = contract_mask(mask, p);
                    let Some(entry) = lookup(&child, child_mask) else {
                        continue;
                    };
                    if mask & (1 << p) == 0 {
                        t.push((
                            mask,
                            Entry { rule: entry.rule, tc: remap_insert(&entry.tc, p) },
                        ));
                    } else {
                        let mut tc = remap_insert(&entry.tc, p);
                        tc.row_or(p, facts.out_within[p] & mask);
                        let mut bits = mask;
                        while bits != 0 {
                            let q = bits.trailing_zeros() as usize;
                            bits &= bits - 1;
                            if facts.out_within[q] >> p & 1 == 1 {
                                tc.set(q, p);
                            }
                        }
                        tc.close_reflexive_within(mask);
                        stats.closures += 1;
                        let rule = arena.add(entry.rule, w);
                        t.push((mask, Entry { rule, tc }));
                    }
                }
                t
            }
            NodeKind::Forget(w) => {
                let child_id = node.children[0];
                let child_bag = &ntd.nodes[child_id].bag;
                let child = slots[child_id].take().expect("child table ready");
                let p = child_bag.binary_search(&w).expect("forgotten vertex in child bag");
                let mut t = Table::with_capacity(masks.len());
                for &mask in &masks {
                    let keep = expand_mask(mask, p);
                    let with_w = keep | (1 << p);
                    let absorbed = lookup(&child, with_w).and_then(|entry| {
                        let reaches_out = entry.tc.row(p) & keep != 0;
                        let reached_back =
                            !cfg.backward_check || entry.tc.column(p) & keep != 0;
                        (reaches_out && reached_back).then(|| Entry {
                            rule: entry.rule,
                            tc: remap_drop(&entry.tc, p),
                        })
                    });
                    let entry = absorbed.or_else(|| {
                        lookup(&child, keep).map(|entry| Entry {
                            rule: entry.rule,
                            tc: remap_drop(&entry.tc, p),
                        })
                    });
                    if let Some(entry) = entry {
                        t.push((mask, entry));
                    }
                }
                t
            }
            NodeKind::Join => {
                let left = slots[node.children[0]].take().expect("child table ready");
                let right = slots[node.children[1]].take().expect("child table ready");
                let mut t = Table::with_capacity(masks.len());
                for &mask in &masks {
                    let (Some(a), Some(b)) = (lookup(&left, mask), lookup(&right, mask))
                    else {
                        continue;
                    };
                    let mut tc = a.tc.clone();
                    tc.union_with(&b.tc);
                    tc.close_reflexive_within(mask);
                    stats.closures += 1;
                    let rule = arena.union(a.rule, b.rule);
                    t.push((mask, Entry { rule, tc }));
                }
                t
            }
        };

        if let Some(per_node) = rules.as_mut() {
            per_node[d] = table.iter().map(|&(mask, ref e)| (mask, e.rule)).collect();
        }
        if let Some(per_node) = snapshots.as_mut() {
            per_node[d] = table
                .iter()
                .map(|&(mask, ref e)| EntrySnapshot {
                    mask,
                    rule: e.rule,
                    closure: e.tc.clone(),
                })
                .collect();
        }
        slots[d] = Some(table);
    }

    let root_table = slots[ntd.root].take().expect("root table ready");
    let root = root_table.into_iter().map(|(m, e)| (m, e.rule)).collect();
    Ok(DpOutcome { root, arena, stats, rules, snapshots })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arena_expansion_dedups_shared_rules() {
        let mut a = RuleArena::new();
        let e = a.empty();
        let x = a.add(e, 3);
        let y = a.add(x, 1);
        let z = a.add(x, 5);
        let u = a.union(y, z);
        assert_eq!(a.expand(u), vec![1, 3, 5]);
        assert_eq!(a.expand(x), vec![3]);
        // Union of identical ids collapses.
        assert_eq!(a.union(y, y), y);
        let s = a.single(7);
        assert_eq!(a.expand(s), vec![7]);
    }

    #[test]
    fn arena_expansion_is_iterative_on_deep_chains() {
        let mut a = RuleArena::new();
        let mut id = a.empty();
        for v in 0..200_000 {
            id = a.add(id, v);
        }
        assert_eq!(a.expand(id).len(), 200_000);
    }

    #[test]
    fn mask_surgery_round_trips() {
        // 0b1011 with a zero inserted at position 2 -> 0b10011.
        assert_eq!(expand_mask(0b1011, 2), 0b10011);
        assert_eq!(contract_mask(0b10011, 2), 0b1011);
        assert_eq!(expand_mask(0b1011, 0), 0b10110);
        assert_eq!(contract_mask(0b10110, 0), 0b1011);
        for mask in 0..32u64 {
            for p in 0..6 {
                assert_eq!(contract_mask(expand_mask(mask, p), p), mask);
            }
        }
    }

    #[test]
    fn valid_masks_respect_probabilistic_bag_edges() {
        // Bag positions {0, 1, 2}; position 1 probabilistic with an
        // in-bag edge to position 2.
        let facts = BagFacts { prob_mask: 0b010, out_within: vec![0, 0b100, 0] };
        let all = valid_masks(&facts, 3, None);
        assert!(all.contains(&0b000) && all.contains(&0b111) && all.contains(&0b110));
        assert!(!all.contains(&0b010) && !all.contains(&0b011));
        let with_req = valid_masks(&facts, 3, Some(0));
        assert!(with_req.iter().all(|m| m & 1 == 1));
        assert!(with_req.contains(&0b001) && !with_req.contains(&0b011));
    }
}
