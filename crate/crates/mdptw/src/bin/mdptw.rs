//! File-based front end over the library: validation, decomposition,
//! analysis, decremental replay, instance generation, benchmarking.
//!
//! Results go to stdout (or the requested output file); diagnostics,
//! warnings, and `# stat` lines go to stderr. Exit codes: 0 success,
//! 1 input or differential failure, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mdptw::asr_dp::compute_asr;
use mdptw::basic::{asr_fixpoint, mec_iterative, subset_oracle_asr, RemovalTrace};
use mdptw::bench::{parse_suite, render_csv, run_suite};
use mdptw::decomposition::{
    heuristic_decompose, make_nice, parse_td, root_with_target, serialize_td,
    NiceTreeDecomposition, Strategy, TreeDecomposition,
};
use mdptw::decremental::{parse_deletion_script, replay_script, ReplayAlgo};
use mdptw::dp_core::DpStats;
use mdptw::generate::{generate, GeneratorConfig};
use mdptw::mdp::{parse_mdp, reduce_target, serialize_mdp, MdpGraph};
use mdptw::mec_dp::compute_mec;
use mdptw::report::{render_asr, render_mec, render_stats};

#[derive(Parser)]
#[command(
    name = "mdptw",
    version,
    about = "Almost-sure reachability and maximal end-components on low-treewidth MDPs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    MinFill,
    MinDegree,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::MinFill => Strategy::MinFill,
            StrategyArg::MinDegree => Strategy::MinDegree,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AsrAlgo {
    Dp,
    Fixpoint,
    Oracle,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MecAlgo {
    Dp,
    Iterative,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecAlgo {
    Asr,
    Mec,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file, and optionally a decomposition against it.
    Validate {
        mdp: PathBuf,
        /// Tree decomposition to validate against the graph.
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Heuristically decompose the graph and write the result.
    Decompose {
        mdp: PathBuf,
        #[arg(long, value_enum, default_value = "min-fill")]
        strategy: StrategyArg,
        /// Output decomposition file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Almost-sure reachability set for a target set.
    Asr {
        mdp: PathBuf,
        /// Target vertices (comma separated). Defaults to the file's
        /// `t` line.
        #[arg(long, value_delimiter = ',')]
        target: Vec<usize>,
        /// Tree decomposition of the input graph (dp only); without it
        /// one is computed heuristically, with a width warning.
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dp")]
        algo: AsrAlgo,
        /// Print work counters to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Maximal end-component decomposition.
    Mec {
        mdp: PathBuf,
        /// Tree decomposition of the input graph (dp only); without it
        /// one is computed heuristically, with a width warning.
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dp")]
        algo: MecAlgo,
        /// Print work counters to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Replay a deletion script against a maintained structure.
    Decrement {
        mdp: PathBuf,
        /// Script of `d`, `q`, and `!` lines.
        #[arg(long)]
        script: PathBuf,
        #[arg(long, value_enum, default_value = "asr")]
        algo: DecAlgo,
        /// Reachability target vertex (required for --algo asr). The
        /// graph is used as given, with no target-set reduction.
        #[arg(long)]
        target: Option<usize>,
        /// Recompute from scratch after every deletion and compare.
        #[arg(long)]
        check: bool,
        /// Print work counters to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Generate a random low-treewidth instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "p-prob", default_value_t = 0.4)]
        p_prob: f64,
        #[arg(long, default_value_t = 0.8)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path prefix; writes <out>.mdp and <out>.td.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run a benchmark suite and emit CSV records.
    Bench {
        /// Suite file: `<algo> <n> <k> <p_prob> <density> <seed>` lines.
        #[arg(long)]
        suite: PathBuf,
        /// Output CSV file; stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        threads: Option<usize>,
    },
}

/// Failures split by exit code: bad invocations (2) versus inputs that
/// parsed flags fine but failed validation or a differential check (1).
enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Failure(_) => ExitCode::from(1),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(msg.to_string())
}

fn failure(msg: impl std::fmt::Display) -> CliError {
    CliError::Failure(msg.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn load_mdp(path: &Path) -> Result<(MdpGraph, Option<Vec<usize>>), CliError> {
    let text = read_file(path)?;
    parse_mdp(&text).map_err(|e| failure(format!("{}: {e}", path.display())))
}

fn load_td(path: &Path, g: &MdpGraph) -> Result<TreeDecomposition, CliError> {
    let text = read_file(path)?;
    let td = parse_td(&text).map_err(|e| failure(format!("{}: {e}", path.display())))?;
    td.validate(g)
        .map_err(|e| failure(format!("{}: invalid decomposition: {e}", path.display())))?;
    Ok(td)
}

/// The decomposition feeding a DP run: the given file, or a heuristic
/// fallback with a width warning (the DP cost is exponential in the
/// achieved width, so the user must see it).
fn nice_td_for(g: &MdpGraph, td: &Option<PathBuf>) -> Result<NiceTreeDecomposition, CliError> {
    match td {
        Some(path) => Ok(make_nice(&load_td(path, g)?)),
        None => {
            let td = heuristic_decompose(g, Strategy::MinFill);
            eprintln!(
                "warning: no decomposition given; min-fill heuristic achieved width {}",
                td.width()
            );
            Ok(make_nice(&td))
        }
    }
}

fn dp_stat_lines(stats: &DpStats) -> String {
    render_stats(&[
        ("nodes", stats.nodes),
        ("subsets", stats.subsets),
        ("closures", stats.closures),
    ])
}

fn trace_stat_lines(trace: &RemovalTrace) -> String {
    render_stats(&[("removals", trace.len() as u64)])
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { mdp, td } => {
            let (g, targets) = load_mdp(&mdp)?;
            if let Some(path) = &td {
                load_td(path, &g)?;
            }
            eprintln!(
                "ok: {} vertices, {} edges{}{}",
                g.n(),
                g.m(),
                match &targets {
                    Some(t) => format!(", {} targets", t.len()),
                    None => String::new(),
                },
                if td.is_some() { ", decomposition valid" } else { "" }
            );
            Ok(())
        }
        Command::Decompose { mdp, strategy, out } => {
            let (g, _) = load_mdp(&mdp)?;
            let td = heuristic_decompose(&g, strategy.into());
            write_file(&out, &serialize_td(&td, g.n()))?;
            println!("width {}", td.width());
            Ok(())
        }
        Command::Asr { mdp, target, td, algo, stats } => {
            let (g, file_targets) = load_mdp(&mdp)?;
            let targets = if !target.is_empty() {
                target
            } else {
                file_targets.ok_or_else(|| {
                    usage("no --target given and the instance file has no t line")
                })?
            };
            let (gr, s) = reduce_target(&g, &targets).map_err(failure)?;
            let (mut set, stat_lines) = match algo {
                AsrAlgo::Dp => {
                    let rtd = match &td {
                        Some(path) => root_with_target(&make_nice(&load_td(path, &g)?), s),
                        None => {
                            let base = heuristic_decompose(&gr, Strategy::MinFill);
                            let rtd = root_with_target(&make_nice(&base), s);
                            eprintln!(
                                "warning: no decomposition given; min-fill heuristic achieved width {}",
                                rtd.nice.width()
                            );
                            rtd
                        }
                    };
                    let result = compute_asr(&gr, &rtd).map_err(failure)?;
                    (result.asr, dp_stat_lines(&result.stats))
                }
                AsrAlgo::Fixpoint => {
                    let (set, trace) = asr_fixpoint(&gr, s);
                    (set, trace_stat_lines(&trace))
                }
                AsrAlgo::Oracle => {
                    let set = subset_oracle_asr(&gr, s).map_err(usage)?;
                    (set, String::new())
                }
            };
            set.retain(|&v| v < g.n());
            print!("{}", render_asr(&set));
            if stats {
                eprint!("{stat_lines}");
            }
            Ok(())
        }
        Command::Mec { mdp, td, algo, stats } => {
            let (g, _) = load_mdp(&mdp)?;
            let (decomposition, stat_lines) = match algo {
                MecAlgo::Dp => {
                    let ntd = nice_td_for(&g, &td)?.ensure_singleton_root();
                    let result = compute_mec(&g, &ntd).map_err(failure)?;
                    (result.decomposition, dp_stat_lines(&result.stats))
                }
                MecAlgo::Iterative => {
                    let (d, trace) = mec_iterative(&g);
                    (d, trace_stat_lines(&trace))
                }
            };
            print!("{}", render_mec(&decomposition));
            if stats {
                eprint!("{stat_lines}");
            }
            Ok(())
        }
        Command::Decrement { mdp, script, algo, target, check, stats } => {
            let (g, _) = load_mdp(&mdp)?;
            let steps = {
                let text = read_file(&script)?;
                parse_deletion_script(&text)
                    .map_err(|e| failure(format!("{}: {e}", script.display())))?
            };
            let replay_algo = match algo {
                DecAlgo::Asr => {
                    let s = target.ok_or_else(|| usage("--algo asr needs --target"))?;
                    if s >= g.n() {
                        return Err(usage(format!(
                            "--target {s} out of range for {} vertices",
                            g.n()
                        )));
                    }
                    ReplayAlgo::Asr { target: s }
                }
                DecAlgo::Mec => ReplayAlgo::Mec,
            };
            let outcome = replay_script(&g, &steps, replay_algo, check)
                .map_err(|e| failure(format!("{}: {e}", script.display())))?;
            print!("{}", outcome.output);
            if stats {
                eprint!(
                    "{}",
                    render_stats(&[
                        ("deletions", outcome.stats.deletions),
                        ("edges_inspected", outcome.stats.edges_inspected),
                        ("removals", outcome.stats.removals),
                        ("dumps", outcome.dumps as u64),
                    ])
                );
            }
            Ok(())
        }
        Command::Gen { n, k, p_prob, density, seed, out } => {
            if n < 2 || k < 1 || k >= n {
                return Err(usage("need n >= 2 and 1 <= k < n"));
            }
            if !(0.0..=1.0).contains(&p_prob) {
                return Err(usage("--p-prob must lie in [0, 1]"));
            }
            if !(density > 0.0 && density <= 1.0) {
                return Err(usage("--density must lie in (0, 1]"));
            }
            let cfg = GeneratorConfig {
                n,
                k,
                p_prob,
                edge_density: density,
                seed,
                ..GeneratorConfig::default()
            };
            let instance = generate(&cfg);
            let base = out.display();
            let mdp_path = PathBuf::from(format!("{base}.mdp"));
            let td_path = PathBuf::from(format!("{base}.td"));
            write_file(
                &mdp_path,
                &serialize_mdp(&instance.graph, Some(&instance.targets)),
            )?;
            write_file(&td_path, &serialize_td(&instance.witness, n))?;
            eprintln!(
                "wrote {} ({} vertices, {} edges) and {} (width {})",
                mdp_path.display(),
                instance.graph.n(),
                instance.graph.m(),
                td_path.display(),
                instance.witness.width()
            );
            Ok(())
        }
        Command::Bench { suite, out, threads } => {
            let text = read_file(&suite)?;
            let tasks =
                parse_suite(&text).map_err(|e| failure(format!("{}: {e}", suite.display())))?;
            let threads = threads.unwrap_or_else(|| {
                std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
            });
            let csv = render_csv(&run_suite(&tasks, threads));
            match out {
                Some(path) => write_file(&path, &csv)?,
                None => print!("{csv}"),
            }
            Ok(())
        }
    }
}
