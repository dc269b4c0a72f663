//! Maximal end-component decomposition and almost-sure reachability for
//! Markov decision processes, exploiting low treewidth.
//!
//! The crate answers two qualitative questions about an MDP given as a
//! directed game graph: from which vertices can player 1 reach a target
//! with probability one, and what is the maximal end-component
//! decomposition. Both have classical fixpoint algorithms, implemented in
//! [`basic`]; the point of this crate is the alternative pipeline that
//! runs dynamic programming over a (nice, rooted) tree decomposition, so
//! graphs of small treewidth are handled with per-node tables of size
//! exponential only in the width. Decremental variants maintain both
//! answers under player-1 edge deletions.
//!
//! The `examples/` directory is the front door: every major capability
//! has a runnable example (`cargo run --example ...`). A thin `mdptw`
//! binary wraps the same library calls for file-based use.

#![forbid(unsafe_code)]

pub mod basic;
pub mod bench;
pub mod bitmat;
pub mod asr_dp;
pub mod decomposition;
pub mod decremental;
pub mod dp_core;
pub mod generate;
pub mod mdp;
pub mod mec_dp;
pub mod report;
