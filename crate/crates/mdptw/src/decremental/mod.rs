//! Data structures that maintain answers while edges are deleted.
//!
//! The stack has three levels. At the bottom, [`DagReachability`] keeps
//! single-source reachability on an acyclic graph and [`DecrementalScc`]
//! keeps strongly connected components, reporting how a component breaks
//! when a deletion splits it. [`DecrementalReachability`] composes the
//! two ideas: components from the SCC structure, an implicit condensation
//! kept alive by support counters toward a fixed sink. On top,
//! [`DecrementalAsr`] and [`DecrementalMec`] maintain almost-sure
//! reachability sets and maximal end-component decompositions under
//! player-1 edge deletions, re-checking the probabilistic escape
//! condition only for edges surfaced by the lower levels.
//!
//! All structures are single-writer: one deletion at a time, no queries
//! during a deletion. Deleted edges are tombstoned, never compacted, so
//! edge identities stay stable across the stack.

use thiserror::Error;

pub mod asr;
pub mod dag;
pub mod mec;
pub mod reach;
pub mod scc;
pub mod script;

pub use asr::DecrementalAsr;
pub use dag::DagReachability;
pub use mec::DecrementalMec;
pub use reach::DecrementalReachability;
pub use scc::{DecrementalScc, SplitEvent};
pub use script::{parse_deletion_script, replay_script, QueryKind, ReplayAlgo, ScriptOp, ScriptStep};

/// Errors shared by the decremental structures.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecrementalError {
    #[error("edge {u} -> {v} is not present")]
    EdgeAbsent { u: usize, v: usize },
    #[error("edge {u} -> {v} leaves a probabilistic vertex; only player-1 edges may be deleted")]
    ProbabilisticTail { u: usize, v: usize },
    #[error("input graph has a cycle")]
    CyclicInput,
}

/// Instrumentation for the answer-maintaining layers. `edges_inspected`
/// counts every edge examined by a violation re-check; each edge can be
/// surfaced at most a constant number of times, so the total stays
/// linear in the initial edge count across a whole deletion sequence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MaintenanceStats {
    pub deletions: u64,
    pub edges_inspected: u64,
    pub removals: u64,
}
