//! Benchmark harness: seeded instance sweeps, one CSV row per run.
//!
//! A suite file lists one task per line:
//!
//! ```text
//! <algo> <n> <k> <p_prob> <density> <seed>
//! ```
//!
//! with `#` comments and blank lines ignored. Algorithms: `asr-dp`,
//! `asr-fixpoint`, `mec-dp`, `mec-iterative`, `dec-asr`, `dec-mec`.
//! Each task generates its instance from the seed, runs the algorithm,
//! and reports wall time plus instrumentation counters. Records carry
//! the analyzed graph's size; `k` is the width of the decomposition the
//! run consumed, or the generator's witness width for algorithms that
//! use none. The decremental algorithms delete every player-1 edge in a
//! seeded shuffle and report the edges they inspected doing so.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::asr_dp::compute_asr;
use crate::basic::{asr_fixpoint, mec_iterative};
use crate::decomposition::{make_nice, root_with_target};
use crate::decremental::{DecrementalAsr, DecrementalMec};
use crate::generate::{generate, GeneratorConfig};
use crate::mdp::{reduce_target, MdpGraph, ParseError};
use crate::mec_dp::compute_mec;

pub const CSV_HEADER: &str = "algo,n,m,k,wall_ns,closures,subsets,edges_inspected";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchAlgo {
    AsrDp,
    AsrFixpoint,
    MecDp,
    MecIterative,
    DecAsr,
    DecMec,
}

impl BenchAlgo {
    pub const ALL: [BenchAlgo; 6] = [
        BenchAlgo::AsrDp,
        BenchAlgo::AsrFixpoint,
        BenchAlgo::MecDp,
        BenchAlgo::MecIterative,
        BenchAlgo::DecAsr,
        BenchAlgo::DecMec,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BenchAlgo::AsrDp => "asr-dp",
            BenchAlgo::AsrFixpoint => "asr-fixpoint",
            BenchAlgo::MecDp => "mec-dp",
            BenchAlgo::MecIterative => "mec-iterative",
            BenchAlgo::DecAsr => "dec-asr",
            BenchAlgo::DecMec => "dec-mec",
        }
    }

    pub fn from_id(id: &str) -> Option<BenchAlgo> {
        BenchAlgo::ALL.into_iter().find(|a| a.id() == id)
    }
}

/// One row of benchmark output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub algo: BenchAlgo,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub wall_ns: u64,
    pub closures: u64,
    pub subsets: u64,
    pub edges_inspected: u64,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.algo.id(),
            self.n,
            self.m,
            self.k,
            self.wall_ns,
            self.closures,
            self.subsets,
            self.edges_inspected
        )
    }
}

pub fn render_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// One suite line: an algorithm and the generator settings for its
/// instance.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchTask {
    pub algo: BenchAlgo,
    pub cfg: GeneratorConfig,
}

pub fn parse_suite(text: &str) -> Result<Vec<BenchTask>, ParseError> {
    let syntax = |line: usize, msg: String| ParseError::Syntax { line, msg };
    let mut tasks = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(syntax(
                line,
                "expected: <algo> <n> <k> <p_prob> <density> <seed>".into(),
            ));
        }
        let algo = BenchAlgo::from_id(fields[0])
            .ok_or_else(|| syntax(line, format!("unknown algorithm '{}'", fields[0])))?;
        let n: usize = fields[1]
            .parse()
            .map_err(|_| syntax(line, "malformed n".into()))?;
        let k: usize = fields[2]
            .parse()
            .map_err(|_| syntax(line, "malformed k".into()))?;
        let p_prob: f64 = fields[3]
            .parse()
            .map_err(|_| syntax(line, "malformed p_prob".into()))?;
        let density: f64 = fields[4]
            .parse()
            .map_err(|_| syntax(line, "malformed density".into()))?;
        let seed: u64 = fields[5]
            .parse()
            .map_err(|_| syntax(line, "malformed seed".into()))?;
        if n < 1 || k < 1 {
            return Err(syntax(line, "n and k must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&p_prob) {
            return Err(syntax(line, "p_prob must lie in [0, 1]".into()));
        }
        if !(density > 0.0 && density <= 1.0) {
            return Err(syntax(line, "density must lie in (0, 1]".into()));
        }
        tasks.push(BenchTask {
            algo,
            cfg: GeneratorConfig {
                n,
                k,
                p_prob,
                edge_density: density,
                seed,
                ..GeneratorConfig::default()
            },
        });
    }
    Ok(tasks)
}

/// Player-1 edges of `g` in a shuffle derived from `seed`; the order the
/// decremental runs delete in.
fn deletion_order(g: &MdpGraph, seed: u64) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, _)| !g.is_probabilistic(u))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    edges.shuffle(&mut rng);
    edges
}

/// Generates the task's instance and runs its algorithm once. Timing
/// covers the analysis only, not generation or decomposition reshaping.
pub fn run_task(task: &BenchTask) -> BenchRecord {
    let instance = generate(&task.cfg);
    let witness_width = instance.witness.width();
    let record = |n, m, k, wall_ns, closures, subsets, edges_inspected| BenchRecord {
        algo: task.algo,
        n,
        m,
        k,
        wall_ns,
        closures,
        subsets,
        edges_inspected,
    };
    match task.algo {
        BenchAlgo::AsrDp => {
            let (gr, s) = reduce_target(&instance.graph, &instance.targets)
                .expect("generated targets are valid");
            let rtd = root_with_target(&make_nice(&instance.witness), s);
            let start = Instant::now();
            let result = compute_asr(&gr, &rtd).expect("witness width is within bounds");
            let wall = start.elapsed().as_nanos() as u64;
            record(
                gr.n(),
                gr.m(),
                rtd.nice.width(),
                wall,
                result.stats.closures,
                result.stats.subsets,
                0,
            )
        }
        BenchAlgo::AsrFixpoint => {
            let (gr, s) = reduce_target(&instance.graph, &instance.targets)
                .expect("generated targets are valid");
            let start = Instant::now();
            let _ = asr_fixpoint(&gr, s);
            let wall = start.elapsed().as_nanos() as u64;
            record(gr.n(), gr.m(), witness_width, wall, 0, 0, 0)
        }
        BenchAlgo::MecDp => {
            let ntd = make_nice(&instance.witness).ensure_singleton_root();
            let start = Instant::now();
            let result =
                compute_mec(&instance.graph, &ntd).expect("witness width is within bounds");
            let wall = start.elapsed().as_nanos() as u64;
            record(
                instance.graph.n(),
                instance.graph.m(),
                ntd.width(),
                wall,
                result.stats.closures,
                result.stats.subsets,
                0,
            )
        }
        BenchAlgo::MecIterative => {
            let start = Instant::now();
            let _ = mec_iterative(&instance.graph);
            let wall = start.elapsed().as_nanos() as u64;
            record(instance.graph.n(), instance.graph.m(), witness_width, wall, 0, 0, 0)
        }
        BenchAlgo::DecAsr => {
            let (gr, s) = reduce_target(&instance.graph, &instance.targets)
                .expect("generated targets are valid");
            let order = deletion_order(&gr, task.cfg.seed);
            let (n, m) = (gr.n(), gr.m());
            let start = Instant::now();
            let mut asr = DecrementalAsr::new(gr, s);
            for (u, v) in order {
                asr.delete_edge(u, v).expect("player-1 edges delete cleanly");
            }
            let wall = start.elapsed().as_nanos() as u64;
            record(n, m, witness_width, wall, 0, 0, asr.stats().edges_inspected)
        }
        BenchAlgo::DecMec => {
            let order = deletion_order(&instance.graph, task.cfg.seed);
            let (n, m) = (instance.graph.n(), instance.graph.m());
            let start = Instant::now();
            let mut mec = DecrementalMec::new(instance.graph);
            for (u, v) in order {
                mec.delete_edge(u, v).expect("player-1 edges delete cleanly");
            }
            let wall = start.elapsed().as_nanos() as u64;
            record(n, m, witness_width, wall, 0, 0, mec.stats().edges_inspected)
        }
    }
}

/// Runs every task, spreading them over `threads` workers. All analyses
/// are pure per instance, so parallel runs return the same records as a
/// sequential sweep (wall times aside), in suite order.
pub fn run_suite(tasks: &[BenchTask], threads: usize) -> Vec<BenchRecord> {
    let threads = threads.max(1).min(tasks.len().max(1));
    if threads == 1 {
        return tasks.iter().map(run_task).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<BenchRecord>>> = Mutex::new(vec![None; tasks.len()]);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let record = run_task(&tasks[i]);
                slots.lock().expect("no panics while holding the lock")[i] = Some(record);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers joined")
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn suite_text() -> &'static str {
        "# small sweep\n\
         asr-dp 18 3 0.4 0.8 7\n\
         asr-fixpoint 18 3 0.4 0.8 7\n\
         mec-dp 18 3 0.4 0.8 7\n\
         mec-iterative 18 3 0.4 0.8 7\n\
         dec-asr 18 3 0.4 0.8 7\n\
         dec-mec 18 3 0.4 0.8 7\n"
    }

    #[test]
    fn parses_a_suite() {
        let tasks = parse_suite(suite_text()).unwrap();
        assert_eq!(tasks.len(), 6);
        assert_eq!(tasks[0].algo, BenchAlgo::AsrDp);
        assert_eq!(tasks[0].cfg.n, 18);
        assert_eq!(tasks[0].cfg.k, 3);
        assert_eq!(tasks[5].algo, BenchAlgo::DecMec);
        assert_eq!(tasks[5].cfg.seed, 7);
    }

    #[test]
    fn rejects_malformed_suites() {
        assert!(parse_suite("asr-dp 18 3 0.4 0.8\n").is_err());
        assert!(parse_suite("turbo 18 3 0.4 0.8 7\n").is_err());
        assert!(parse_suite("asr-dp 18 0 0.4 0.8 7\n").is_err());
        assert!(parse_suite("asr-dp 18 3 1.4 0.8 7\n").is_err());
        assert!(parse_suite("asr-dp 18 3 0.4 0.0 7\n").is_err());
        assert!(parse_suite("asr-dp eighteen 3 0.4 0.8 7\n").is_err());
    }

    #[test]
    fn every_algorithm_produces_a_sensible_record() {
        let tasks = parse_suite(suite_text()).unwrap();
        for task in &tasks {
            let r = run_task(task);
            assert_eq!(r.algo, task.algo);
            assert!(r.n >= 18);
            assert!(r.m > 0);
            assert!(r.k >= 1);
            match task.algo {
                BenchAlgo::AsrDp | BenchAlgo::MecDp => {
                    assert!(r.subsets > 0, "{}", r.algo.id());
                    assert!(r.closures > 0, "{}", r.algo.id());
                }
                BenchAlgo::DecAsr | BenchAlgo::DecMec => {
                    assert!(r.edges_inspected > 0, "{}", r.algo.id());
                    assert!(r.edges_inspected <= 4 * r.m as u64, "{}", r.algo.id());
                }
                _ => {
                    assert_eq!((r.closures, r.subsets, r.edges_inspected), (0, 0, 0));
                }
            }
        }
    }

    #[test]
    fn parallel_sweep_matches_sequential_order_and_content() {
        let tasks = parse_suite(suite_text()).unwrap();
        let sequential = run_suite(&tasks, 1);
        let parallel = run_suite(&tasks, 4);
        assert_eq!(sequential.len(), parallel.len());
        for (a, b) in sequential.iter().zip(&parallel) {
            let strip = |r: &BenchRecord| {
                (r.algo, r.n, r.m, r.k, r.closures, r.subsets, r.edges_inspected)
            };
            assert_eq!(strip(a), strip(b));
        }
    }

    #[test]
    fn csv_has_the_pinned_header_and_one_row_per_record() {
        let record = BenchRecord {
            algo: BenchAlgo::AsrDp,
            n: 10,
            m: 20,
            k: 3,
            wall_ns: 12345,
            closures: 6,
            subsets: 7,
            edges_inspected: 0,
        };
        let csv = render_csv(&[record]);
        assert_eq!(
            csv,
            "algo,n,m,k,wall_ns,closures,subsets,edges_inspected\n\
             asr-dp,10,20,3,12345,6,7,0\n"
        );
    }
}
