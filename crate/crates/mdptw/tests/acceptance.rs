//! End-to-end acceptance sweep: seven numbered checks covering
//! correctness against oracles, cross-algorithm agreement, definition
//! and table-level verification, decremental maintenance, complexity
//! trends, and width guarantees. Each test prints one summary line
//! (visible with `-- --nocapture`) and enforces its own runtime budget
//! where one is stated.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mdptw::asr_dp::{compute_asr, compute_asr_with_tables, verify_asr_tables};
use mdptw::basic::{
    asr_fixpoint, check_asr_definition, mec_iterative, subset_oracle_asr,
};
use mdptw::decomposition::{
    decompose_with_elimination_order, heuristic_decompose, make_nice, root_with_target,
    Strategy,
};
use mdptw::decremental::{DecrementalAsr, DecrementalMec};
use mdptw::generate::{generate, GeneratedInstance, GeneratorConfig};
use mdptw::mdp::{reduce_target, MdpGraph, Owner};
use mdptw::mec_dp::{
    check_mec_intersections, compute_mec, compute_mec_with_tables, verify_mec_decomposition,
    verify_mec_tables,
};

/// Per-doubling tolerance for the linear-growth check: doubling n must
/// scale the closure count by 2 within this factor, both ways.
const LINEARITY_TOLERANCE: f64 = 1.3;

/// Edges-inspected budget over a full deletion sequence, as a multiple
/// of the edge count.
const INSPECTION_BUDGET: f64 = 4.0;

/// Tiny instances where the exhaustive subset oracle still runs.
fn small_configs(count: usize) -> Vec<GeneratorConfig> {
    (0..count as u64)
        .map(|seed| {
            let i = seed as usize;
            GeneratorConfig {
                n: 4 + i % 9,
                k: 1 + i % 3,
                p_prob: 0.25 + 0.15 * (i % 4) as f64,
                edge_density: 0.5 + 0.2 * (i % 3) as f64,
                p_self_loop: 0.15,
                seed,
            }
        })
        .collect()
}

/// Mid-to-large instances, n up to 2000 and width parameter up to 4.
fn scale_configs(count: usize) -> Vec<GeneratorConfig> {
    (0..count)
        .map(|i| GeneratorConfig {
            n: 50 + i * 1950 / (count - 1).max(1),
            k: 1 + i % 4,
            p_prob: 0.3 + 0.15 * (i % 3) as f64,
            edge_density: 0.6 + 0.175 * (i % 3) as f64,
            p_self_loop: 0.1,
            seed: 1000 + i as u64,
        })
        .collect()
}

/// Target-reduced graph plus the DP answer over the witness
/// decomposition re-rooted at the fresh target.
fn dp_asr(instance: &GeneratedInstance) -> (MdpGraph, usize, Vec<usize>) {
    let (gr, s) =
        reduce_target(&instance.graph, &instance.targets).expect("generated targets are valid");
    let rtd = root_with_target(&make_nice(&instance.witness), s);
    let result = compute_asr(&gr, &rtd).expect("witness width is within the table limit");
    (gr, s, result.asr)
}

fn player1_edges_shuffled(g: &MdpGraph, seed: u64) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, _)| !g.is_probabilistic(u))
        .collect();
    edges.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    edges
}

#[test]
fn criterion_1_asr_oracle_equivalence() {
    let start = Instant::now();
    let configs = small_configs(500);
    for cfg in &configs {
        let instance = generate(cfg);
        let (gr, s, dp) = dp_asr(&instance);
        let (fixpoint, _) = asr_fixpoint(&gr, s);
        let oracle = subset_oracle_asr(&gr, s).expect("reduced size stays within oracle range");
        assert_eq!(dp, fixpoint, "seed {}: dp vs fixpoint", cfg.seed);
        assert_eq!(dp, oracle, "seed {}: dp vs subset oracle", cfg.seed);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "budget exceeded: {elapsed:.1?}");
    println!(
        "criterion 1 (ASR oracle equivalence): pass; {} instances, 0 mismatches, {elapsed:.1?}",
        configs.len()
    );
}

#[test]
fn criterion_2_cross_algorithm_equivalence_at_scale() {
    let start = Instant::now();
    let configs = scale_configs(200);
    for cfg in &configs {
        let instance = generate(cfg);
        let (_, _, dp) = dp_asr(&instance);
        let (gr, s) =
            reduce_target(&instance.graph, &instance.targets).expect("targets are valid");
        let (fixpoint, _) = asr_fixpoint(&gr, s);
        assert_eq!(dp, fixpoint, "seed {}: dp vs fixpoint", cfg.seed);

        let ntd = make_nice(&instance.witness).ensure_singleton_root();
        let mec = compute_mec(&instance.graph, &ntd)
            .expect("witness width is within the table limit");
        let (iterative, _) = mec_iterative(&instance.graph);
        assert_eq!(mec.decomposition, iterative, "seed {}: dp vs iterative", cfg.seed);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "budget exceeded: {elapsed:.1?}");
    println!(
        "criterion 2 (cross-algorithm equivalence at scale): pass; {} instances, 0 mismatches, {elapsed:.1?}",
        configs.len()
    );
}

#[test]
fn criterion_3_definition_self_checks() {
    let start = Instant::now();
    let mut asr_checked = 0usize;
    let mut mec_checked = 0usize;
    let mut configs = small_configs(500);
    configs.extend(scale_configs(200));
    for cfg in &configs {
        let instance = generate(cfg);
        let (gr, s) =
            reduce_target(&instance.graph, &instance.targets).expect("targets are valid");
        // The algorithms agree pairwise (previous checks), so checking
        // the cheap representative checks them all.
        let (set, _) = asr_fixpoint(&gr, s);
        check_asr_definition(&gr, s, &set)
            .unwrap_or_else(|e| panic!("seed {}: ASR definition violated: {e}", cfg.seed));
        asr_checked += 1;

        let (decomposition, _) = mec_iterative(&instance.graph);
        verify_mec_decomposition(&instance.graph, &decomposition)
            .unwrap_or_else(|e| panic!("seed {}: MEC definition violated: {e}", cfg.seed));
        mec_checked += 1;
    }
    println!(
        "criterion 3 (definition self-checks): pass; {asr_checked} reachability sets and {mec_checked} decompositions clean, {:.1?}",
        start.elapsed()
    );
}

#[test]
fn criterion_4_table_lemmas() {
    let start = Instant::now();
    let count = 100;
    for seed in 0..count as u64 {
        let i = seed as usize;
        let cfg = GeneratorConfig {
            n: 8 + (i * 5) % 23,
            k: 1 + i % 3,
            p_prob: 0.3 + 0.15 * (i % 3) as f64,
            edge_density: 0.55 + 0.2 * (i % 3) as f64,
            p_self_loop: 0.15,
            seed,
        };
        let instance = generate(&cfg);

        // Reachability tables: every entry expands to a valid partial
        // solution with a faithful closure matrix, and the root entry
        // is exactly the answer.
        let (gr, s) =
            reduce_target(&instance.graph, &instance.targets).expect("targets are valid");
        let rtd = root_with_target(&make_nice(&instance.witness), s);
        let (result, mut tables) =
            compute_asr_with_tables(&gr, &rtd).expect("witness width is within the table limit");
        verify_asr_tables(&gr, &rtd, &mut tables)
            .unwrap_or_else(|e| panic!("seed {seed}: table verification failed: {e}"));
        let root_entries = &tables.entries[rtd.nice.root];
        assert_eq!(root_entries.len(), 1, "seed {seed}: singleton root has one subset");
        let mut root_set = tables.arena.expand(root_entries[0].rule);
        root_set.sort_unstable();
        assert_eq!(root_set, result.asr, "seed {seed}: root entry must equal the answer");

        // End-component tables, plus the per-component intersection
        // property at every node.
        let ntd = make_nice(&instance.witness).ensure_singleton_root();
        let (mec, mut tables) = compute_mec_with_tables(&instance.graph, &ntd)
            .expect("witness width is within the table limit");
        verify_mec_tables(&instance.graph, &ntd, &mut tables)
            .unwrap_or_else(|e| panic!("seed {seed}: table verification failed: {e}"));
        check_mec_intersections(&instance.graph, &ntd, &mut tables, &mec.decomposition.mecs)
            .unwrap_or_else(|e| panic!("seed {seed}: intersection property failed: {e}"));
    }
    println!(
        "criterion 4 (table lemmas): pass; {count} instances, 0 violations, {:.1?}",
        start.elapsed()
    );
}

#[test]
fn criterion_5_decremental_differential() {
    let start = Instant::now();
    let wanted = 100;
    let steps_per_instance = 1000;
    let mut accepted = 0usize;
    let mut seed = 0u64;
    let mut total_steps = 0usize;
    while accepted < wanted {
        let cfg = GeneratorConfig {
            n: 300,
            k: 4,
            p_prob: 0.2,
            edge_density: 1.0,
            p_self_loop: 0.1,
            seed,
        };
        seed += 1;
        let instance = generate(&cfg);
        let (gr, s) =
            reduce_target(&instance.graph, &instance.targets).expect("targets are valid");
        let mut deletions = player1_edges_shuffled(&gr, cfg.seed ^ 0x5eed);
        if deletions.len() < steps_per_instance {
            continue;
        }
        deletions.truncate(steps_per_instance);
        accepted += 1;

        let mut asr = DecrementalAsr::new(gr.clone(), s);
        let mut mec = DecrementalMec::new(gr.clone());
        let mut prev_set = asr.asr_set();
        let mut prev_mecs = mec.decomposition().clone();
        for (u, v) in deletions {
            asr.delete_edge(u, v).expect("player-1 edges delete cleanly");
            mec.delete_edge(u, v).expect("player-1 edges delete cleanly");
            let current = asr.current_graph();

            let set = asr.asr_set();
            assert_eq!(
                set,
                asr_fixpoint(&current, s).0,
                "seed {}: maintained set diverged after deleting ({u}, {v})",
                cfg.seed
            );
            assert!(
                set.iter().all(|v| prev_set.binary_search(v).is_ok()),
                "seed {}: reachability set grew after deleting ({u}, {v})",
                cfg.seed
            );
            prev_set = set;

            let decomposition = mec.decomposition();
            assert_eq!(
                decomposition,
                &mec_iterative(&current).0,
                "seed {}: maintained decomposition diverged after deleting ({u}, {v})",
                cfg.seed
            );
            assert!(
                decomposition.is_refinement_of(&prev_mecs),
                "seed {}: component refinement broke after deleting ({u}, {v})",
                cfg.seed
            );
            prev_mecs = decomposition.clone();
            total_steps += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "budget exceeded: {elapsed:.1?}");
    println!(
        "criterion 5 (decremental differential): pass; {accepted} instances, {total_steps} steps all matched, {elapsed:.1?}"
    );
}

#[test]
fn criterion_6_complexity_trends() {
    let start = Instant::now();
    // Closure counts at fixed width, summed over seeds to damp
    // instance-level noise, must double with n within the tolerance.
    let sizes = [1000usize, 2000, 4000, 8000];
    let mut totals = Vec::new();
    for &n in &sizes {
        let mut closures = 0u64;
        for seed in 1..=3u64 {
            let cfg = GeneratorConfig { n, k: 3, seed, ..GeneratorConfig::default() };
            let instance = generate(&cfg);
            let (gr, s) =
                reduce_target(&instance.graph, &instance.targets).expect("targets are valid");
            let rtd = root_with_target(&make_nice(&instance.witness), s);
            let result =
                compute_asr(&gr, &rtd).expect("witness width is within the table limit");
            closures += result.stats.closures;
        }
        totals.push(closures);
    }
    let mut ratios = Vec::new();
    for pair in totals.windows(2) {
        let ratio = pair[1] as f64 / pair[0] as f64;
        assert!(
            (2.0 / LINEARITY_TOLERANCE..=2.0 * LINEARITY_TOLERANCE).contains(&ratio),
            "closure growth per doubling out of band: {ratio:.2} (counts {totals:?})"
        );
        ratios.push(ratio);
    }

    // A full deletion sequence must keep the decremental structure's
    // edge inspections within a constant multiple of the edge count.
    let mut worst = 0.0f64;
    for seed in 1..=3u64 {
        let cfg = GeneratorConfig { n: 2000, k: 3, seed, ..GeneratorConfig::default() };
        let instance = generate(&cfg);
        let (gr, s) =
            reduce_target(&instance.graph, &instance.targets).expect("targets are valid");
        let order = player1_edges_shuffled(&gr, seed);
        let m = gr.m();
        let mut asr = DecrementalAsr::new(gr, s);
        for (u, v) in order {
            asr.delete_edge(u, v).expect("player-1 edges delete cleanly");
        }
        let ratio = asr.stats().edges_inspected as f64 / m as f64;
        assert!(
            ratio <= INSPECTION_BUDGET,
            "seed {seed}: inspected {:.2}x the edge count",
            ratio
        );
        worst = worst.max(ratio);
    }
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    println!(
        "criterion 6 (complexity trends): pass; closure ratios per doubling [{}], worst inspection ratio {worst:.2} <= {INSPECTION_BUDGET}, {:.1?}",
        shown.join(", "),
        start.elapsed()
    );
}

#[test]
fn criterion_7_width_guarantees() {
    let start = Instant::now();

    // Trees: both heuristics recover width 1 exactly.
    for n in [2usize, 10, 41] {
        let cfg = GeneratorConfig {
            n,
            k: 1,
            edge_density: 1.0,
            p_self_loop: 0.0,
            seed: n as u64,
            ..GeneratorConfig::default()
        };
        let g = generate(&cfg).graph;
        for strategy in [Strategy::MinDegree, Strategy::MinFill] {
            let td = heuristic_decompose(&g, strategy);
            td.validate(&g).expect("heuristic output validates");
            assert_eq!(td.width(), 1, "{strategy:?} on a {n}-vertex tree");
        }
    }

    // Cliques: nothing better than bagging everything exists.
    for n in [3usize, 5, 8] {
        let owner = vec![Owner::Player1; n];
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        let g = MdpGraph::new(owner, edges).expect("cliques are well formed");
        for strategy in [Strategy::MinDegree, Strategy::MinFill] {
            let td = heuristic_decompose(&g, strategy);
            td.validate(&g).expect("heuristic output validates");
            assert_eq!(td.width(), n - 1, "{strategy:?} on a {n}-clique");
        }
    }

    // Generator outputs: eliminating along the construction order stays
    // within the requested width.
    for seed in 0..30u64 {
        let i = seed as usize;
        let cfg = GeneratorConfig {
            n: 20 + i * 2,
            k: 1 + i % 5,
            edge_density: 0.5 + 0.15 * (i % 3) as f64,
            seed,
            ..GeneratorConfig::default()
        };
        let instance = generate(&cfg);
        let g = &instance.graph;
        let td = decompose_with_elimination_order(g, &instance.elimination_order);
        td.validate(g).expect("elimination-order output validates");
        assert!(
            td.width() <= cfg.k.min(cfg.n - 1),
            "seed {seed}: witness order exceeded width {} with {}",
            cfg.k,
            td.width()
        );
        instance.witness.validate(g).expect("witness validates");
        for strategy in [Strategy::MinDegree, Strategy::MinFill] {
            heuristic_decompose(g, strategy).validate(g).expect("heuristic output validates");
        }
    }
    println!(
        "criterion 7 (width guarantees): pass; trees exact, cliques exact, 30 witness orders within bound, {:.1?}",
        start.elapsed()
    );
}
