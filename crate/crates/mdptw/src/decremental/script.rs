//! Deletion scripts: a small line format driving the decremental
//! structures, with inline assertions for golden tests.
//!
//! Each line is one of
//!
//! ```text
//! d <u> <v>      delete the player-1 edge u -> v
//! q asr          dump the maintained reachability set
//! q mec          dump the maintained decomposition
//! ! <line>       expected dump line (see below)
//! # ...          comment
//! ```
//!
//! `!` lines queue up expectations for the next `q`: when the dump
//! happens, its lines must equal the queued `!` payloads in order.
//! A `q` with nothing queued just dumps.

use std::fmt::Write as _;

use crate::basic::{asr_fixpoint, mec_iterative};
use crate::decremental::{DecrementalAsr, DecrementalError, DecrementalMec, MaintenanceStats};
use crate::mdp::{MdpGraph, ParseError};
use crate::report::{render_asr, render_mec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Asr,
    Mec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptOp {
    Delete(usize, usize),
    Query(QueryKind),
    Expect(String),
}

/// One parsed script line that does something, with its 1-based source
/// line for error reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptStep {
    pub line: usize,
    pub op: ScriptOp,
}

pub fn parse_deletion_script(text: &str) -> Result<Vec<ScriptStep>, ParseError> {
    let syntax = |line: usize, msg: String| ParseError::Syntax { line, msg };
    let mut steps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let op = if let Some(rest) = trimmed.strip_prefix("d ") {
            let mut parts = rest.split_whitespace();
            let parse_id = |tok: Option<&str>| {
                tok.ok_or_else(|| syntax(line, "d needs two vertex ids".into()))?
                    .parse::<usize>()
                    .map_err(|_| syntax(line, "malformed vertex id".into()))
            };
            let u = parse_id(parts.next())?;
            let v = parse_id(parts.next())?;
            if parts.next().is_some() {
                return Err(syntax(line, "d takes exactly two vertex ids".into()));
            }
            ScriptOp::Delete(u, v)
        } else if let Some(rest) = trimmed.strip_prefix("q ") {
            match rest.trim() {
                "asr" => ScriptOp::Query(QueryKind::Asr),
                "mec" => ScriptOp::Query(QueryKind::Mec),
                other => {
                    return Err(syntax(line, format!("unknown query kind '{other}'")));
                }
            }
        } else if let Some(rest) = trimmed.strip_prefix('!') {
            ScriptOp::Expect(rest.trim_start().to_string())
        } else {
            return Err(syntax(line, format!("unrecognized script line '{trimmed}'")));
        };
        steps.push(ScriptStep { line, op });
    }
    Ok(steps)
}

/// Which structure a replay drives. Reachability needs the target
/// vertex; the graph is taken as given, with no target reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReplayAlgo {
    Asr { target: usize },
    Mec,
}

#[derive(Debug, PartialEq, Eq)]
pub enum ReplayError {
    /// A `d` step was rejected by the structure.
    Structure { line: usize, source: DecrementalError },
    /// A `q` step asked for the answer the chosen structure does not
    /// maintain.
    WrongQuery { line: usize },
    /// A dump did not match its queued `!` lines.
    ExpectationFailed { line: usize, expected: String, got: String },
    /// `!` lines queued at the end of the script with no `q` to check.
    DanglingExpectation { line: usize },
    /// Differential mode: the maintained answer diverged from the
    /// from-scratch recomputation after the deletion on this line.
    CheckFailed { line: usize, detail: String },
}

impl std::fmt::Display for ReplayError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReplayError::Structure { line, source } => {
                write!(f, "line {line}: {source}")
            }
            ReplayError::WrongQuery { line } => {
                write!(f, "line {line}: query kind does not match the replayed algorithm")
            }
            ReplayError::ExpectationFailed { line, expected, got } => {
                write!(f, "line {line}: expected '{expected}', got '{got}'")
            }
            ReplayError::DanglingExpectation { line } => {
                write!(f, "line {line}: expectation without a following query")
            }
            ReplayError::CheckFailed { line, detail } => {
                write!(f, "line {line}: maintained answer diverged: {detail}")
            }
        }
    }
}

impl std::error::Error for ReplayError {}

/// What a replay did: the rendered dumps in order, concatenated output,
/// and the structure's counters.
#[derive(Clone, Debug)]
pub struct ReplayOutcome {
    pub output: String,
    pub dumps: usize,
    pub deletions: usize,
    pub stats: MaintenanceStats,
}

enum Structure {
    Asr(DecrementalAsr),
    Mec(DecrementalMec),
}

/// Replays a parsed script against a fresh structure over `g`. With
/// `check` set, every deletion is followed by a from-scratch
/// recomputation and compared, making the replay a differential test.
pub fn replay_script(
    g: &MdpGraph,
    steps: &[ScriptStep],
    algo: ReplayAlgo,
    check: bool,
) -> Result<ReplayOutcome, ReplayError> {
    let mut structure = match algo {
        ReplayAlgo::Asr { target } => Structure::Asr(DecrementalAsr::new(g.clone(), target)),
        ReplayAlgo::Mec => Structure::Mec(DecrementalMec::new(g.clone())),
    };
    let mut output = String::new();
    let mut dumps = 0;
    let mut deletions = 0;
    let mut pending: Vec<(usize, String)> = Vec::new();
    for step in steps {
        match &step.op {
            ScriptOp::Delete(u, v) => {
                let result = match &mut structure {
                    Structure::Asr(asr) => asr.delete_edge(*u, *v),
                    Structure::Mec(mec) => mec.delete_edge(*u, *v),
                };
                result.map_err(|source| ReplayError::Structure { line: step.line, source })?;
                deletions += 1;
                if check {
                    run_check(&structure, step.line)?;
                }
            }
            ScriptOp::Expect(text) => {
                pending.push((step.line, text.clone()));
            }
            ScriptOp::Query(kind) => {
                let dump = match (&structure, kind) {
                    (Structure::Asr(asr), QueryKind::Asr) => render_asr(&asr.asr_set()),
                    (Structure::Mec(mec), QueryKind::Mec) => render_mec(mec.decomposition()),
                    _ => return Err(ReplayError::WrongQuery { line: step.line }),
                };
                check_expectations(&mut pending, &dump)?;
                output.push_str(&dump);
                dumps += 1;
            }
        }
    }
    if let Some((line, _)) = pending.first() {
        return Err(ReplayError::DanglingExpectation { line: *line });
    }
    let stats = match &structure {
        Structure::Asr(asr) => asr.stats(),
        Structure::Mec(mec) => mec.stats(),
    };
    Ok(ReplayOutcome { output, dumps, deletions, stats })
}

fn run_check(structure: &Structure, line: usize) -> Result<(), ReplayError> {
    let detail = match structure {
        Structure::Asr(asr) => {
            let fresh = asr_fixpoint(&asr.current_graph(), asr.target()).0;
            let got = asr.asr_set();
            if got == fresh {
                return Ok(());
            }
            let mut detail = String::new();
            let _ = write!(detail, "maintained {got:?}, recomputed {fresh:?}");
            detail
        }
        Structure::Mec(mec) => {
            let fresh = mec_iterative(&mec.current_graph()).0;
            if mec.decomposition() == &fresh {
                return Ok(());
            }
            let mut detail = String::new();
            let _ = write!(
                detail,
                "maintained {:?}, recomputed {:?}",
                mec.decomposition(),
                fresh
            );
            detail
        }
    };
    Err(ReplayError::CheckFailed { line, detail })
}

fn check_expectations(
    pending: &mut Vec<(usize, String)>,
    dump: &str,
) -> Result<(), ReplayError> {
    if pending.is_empty() {
        return Ok(());
    }
    let expected = std::mem::take(pending);
    let mut lines = dump.lines();
    for (line, want) in &expected {
        let got = lines.next().unwrap_or("<end of dump>");
        if got != want {
            return Err(ReplayError::ExpectationFailed {
                line: *line,
                expected: want.clone(),
                got: got.to_string(),
            });
        }
    }
    if let Some(extra) = lines.next() {
        let last = expected.last().expect("nonempty").0;
        return Err(ReplayError::ExpectationFailed {
            line: last,
            expected: "<end of dump>".to_string(),
            got: extra.to_string(),
        });
    }
    Ok(())
}
