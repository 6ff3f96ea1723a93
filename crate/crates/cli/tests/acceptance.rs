//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line each and exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use kelayer::experiment::{
    compare, degree_grid, estimate_transition, gap_table, run_sweep, SweepConfig,
};
use kelayer::graph::{generate_er, remove_leaves, RngStream};
use kelayer::layers::{
    cover_from_decomposition, decompose, optimize_layer, EnergyMeasure, Strategy, StrategyConfig,
};
use kelayer::matching::{matching_number, maximum_matching};
use kelayer::oracle::{exact_mvc, exhaustive_arrangement_search, DEFAULT_BUDGET};
use kelayer::verify::{verify_ke, NodeState};
use kelayer_testkit::{
    all_min_covers, all_small_graphs, random_bipartite, random_gnp, random_leaf_removable, rng,
};
use rand::Rng;

const SEED: u64 = 1;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn oracle_equivalence() -> Outcome {
    let mut graphs = all_small_graphs(5);
    let exhaustive = graphs.len();
    let mut r = rng(SEED);
    for _ in 0..500 {
        let n = r.gen_range(1..=12);
        let p = r.gen_range(0.05..0.8);
        graphs.push(random_gnp(n, p, &mut r));
    }
    let mismatches = graphs
        .iter()
        .filter(|g| {
            let exact = exact_mvc(g, DEFAULT_BUDGET).unwrap().mvc_number;
            verify_ke(g).is_ke() != (exact == matching_number(g))
        })
        .count();
    outcome(
        mismatches == 0,
        format!("{mismatches} mismatches over {exhaustive} exhaustive + 500 random graphs"),
    )
}

fn backbone_exactness() -> Outcome {
    let mut r = rng(SEED);
    let mut checked = 0;
    let mut wrong = 0;
    while checked < 200 {
        let n = r.gen_range(1..=12);
        let p = r.gen_range(0.05..0.6);
        let g = random_gnp(n, p, &mut r);
        if exact_mvc(&g, DEFAULT_BUDGET).unwrap().mvc_number != matching_number(&g) {
            continue;
        }
        checked += 1;
        let v = verify_ke(&g);
        let (_, covers) = all_min_covers(&g);
        let exact = g.nodes().all(|u| {
            let hits = covers.iter().filter(|c| c.contains(&u)).count();
            let expected = if hits == covers.len() {
                NodeState::NegativeBackbone
            } else if hits == 0 {
                NodeState::PositiveBackbone
            } else {
                NodeState::Unfrozen
            };
            v.is_ke() && v.solution.state(u) == expected
        });
        if !exact {
            wrong += 1;
        }
    }
    outcome(wrong == 0, format!("{wrong} of {checked} KE graphs with a wrong state"))
}

fn bipartite_and_leaf_free_soundness() -> Outcome {
    let mut r = rng(SEED);
    let mut failures = 0;
    for _ in 0..200 {
        let n = r.gen_range(1..=200);
        let p = r.gen_range(0.5..4.0) / n as f64;
        if !verify_ke(&random_bipartite(n, p.min(1.0), &mut r)).is_ke() {
            failures += 1;
        }
    }
    let mut edgeless_cores = 0;
    for _ in 0..200 {
        let g = random_leaf_removable(r.gen_range(1..=100), &mut r);
        if remove_leaves(&g).core_is_edgeless() {
            edgeless_cores += 1;
            if !verify_ke(&g).is_ke() {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0 && edgeless_cores == 200,
        format!("{failures} failures; 200 bipartite, {edgeless_cores}/200 edge-free cores"),
    )
}

fn cover_estimate_validity() -> Outcome {
    let mut r = rng(SEED);
    let mut violations = 0;
    let mut runs = 0;
    for i in 0..300 {
        let n = r.gen_range(10..=60);
        let c = r.gen_range(1.0..=8.0);
        let g = generate_er(n, c, &mut RngStream::new(SEED ^ i)).unwrap();
        let exact = exact_mvc(&g, DEFAULT_BUDGET).unwrap().mvc_number;
        for strategy in Strategy::ALL {
            for energy in EnergyMeasure::ALL {
                runs += 1;
                let d = decompose(&g, &StrategyConfig::new(strategy, energy, i)).unwrap();
                let ok = match cover_from_decomposition(&g, &d) {
                    Ok(cover) => {
                        g.is_vertex_cover(&cover) && cover.len() == d.mvc_estimate && d.mvc_estimate >= exact
                    }
                    Err(_) => false,
                };
                if !ok {
                    violations += 1;
                }
            }
        }
    }
    outcome(violations == 0, format!("{violations} violations over {runs} decompositions of 300 graphs"))
}

fn gap_reproduction() -> Outcome {
    let cases = [(80usize, 3.0f64, 0.88f64, 0.7f64), (120, 7.0, 1.58, 0.9)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, c, target, tol) in cases {
        let rows = gap_table(&[n], &[c], 30, Strategy::RandomPairs, EnergyMeasure::MatchingNumber, SEED).unwrap();
        let gap = rows[0].mean_gap_percent;
        let ok = (gap - target).abs() <= tol;
        pass &= ok;
        parts.push(format!("N={n} c={c}: {gap:.2}% (target {target} +- {tol})"));
    }
    outcome(pass, parts.join("; "))
}

fn transition_location() -> Outcome {
    let sweep = |from: f64, to: f64, step: f64| {
        let mut cfg = SweepConfig::new(1000, degree_grid(from, to, step).unwrap(), 20, SEED);
        cfg.strategies = vec![Strategy::RandomPairs];
        cfg.measures = vec![EnergyMeasure::EdgeCount];
        estimate_transition(&run_sweep(&cfg).unwrap()).unwrap()
    };
    let first = sweep(2.2, 3.2, 0.1);
    let second = sweep(8.0, 13.0, 0.5);
    let high = sweep(13.0, 14.0, 0.5);
    let first_ok = (2.4..=3.0).contains(&first.peak_degree);
    let second_ok = (9.5..=11.5).contains(&second.peak_degree);
    let min_high = high.mean_layer.iter().copied().fold(f64::INFINITY, f64::min);
    let high_ok = min_high >= 2.9;
    outcome(
        first_ok && second_ok && high_ok,
        format!(
            "first peak {} (want [2.4, 3.0]), second peak {} (want [9.5, 11.5]), min mean layers at degree >= 13: {:.2} (want >= 2.9)",
            first.peak_degree, second.peak_degree, min_high
        ),
    )
}

fn strategy_oracle_gap() -> Outcome {
    let mut r = rng(SEED);
    let mut below_optimum = 0;
    let mut graphs = 0;
    let mut gaps = [0.0f64; 2];
    while graphs < 100 {
        let n = r.gen_range(4..=28);
        let p = r.gen_range(0.08..0.5);
        let g = random_gnp(n, p, &mut r);
        let m = maximum_matching(&g);
        if m.size() > 14 {
            continue;
        }
        graphs += 1;
        for (k, energy) in EnergyMeasure::ALL.into_iter().enumerate() {
            let best = exhaustive_arrangement_search(&g, energy).unwrap().energy;
            for strategy in [Strategy::Greedy, Strategy::RandomPairs] {
                let cfg = StrategyConfig::new(strategy, energy, graphs);
                let (_, e) = optimize_layer(&g, &m, &cfg, &mut RngStream::new(graphs));
                if e < best {
                    below_optimum += 1;
                }
                if strategy == Strategy::RandomPairs {
                    gaps[k] += (e - best.min(e)) as f64;
                }
            }
        }
    }
    let mean = gaps.map(|g| g / graphs as f64);
    outcome(
        below_optimum == 0 && mean.iter().all(|&m| m <= 1.0),
        format!(
            "{below_optimum} energies below the optimum; random-pairs mean excess {:.3} (edges), {:.3} (matching), want <= 1.0",
            mean[0], mean[1]
        ),
    )
}

fn sweep_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_kelayer"))
            .args(["sweep", "--n", "300", "--from", "1", "--to", "20", "--step", "0.5"])
            .args(["--samples", "3", "--seed", "1"])
            .args(["--strategy", "1", "--strategy", "2", "--strategy", "3"])
            .args(["--energy", "edges", "--energy", "matching"])
            .arg("--out")
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    let lines = a.iter().filter(|&&c| c == b'\n').count();
    outcome(a == b && lines > 1, format!("{lines} lines, identical: {}", a == b))
}

fn strategy_ordering() -> Outcome {
    let grid = degree_grid(1.0, 9.0, 0.5).unwrap();
    let rows = compare(1000, &grid, 20, SEED).unwrap();
    let mut wins = 0;
    for chunk in rows.chunks(6) {
        let lowest = chunk.iter().map(|r| r.mean_ratio).fold(f64::INFINITY, f64::min);
        let target = chunk
            .iter()
            .find(|r| r.strategy == Strategy::RandomPairs && r.energy == EnergyMeasure::MatchingNumber)
            .unwrap();
        if target.mean_ratio <= lowest + 1e-12 {
            wins += 1;
        }
    }
    let points = grid.len();
    outcome(
        wins as f64 >= 0.8 * points as f64,
        format!("random pairs + matching energy lowest or tied at {wins}/{points} degrees (want >= 80%)"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("backbone exactness", backbone_exactness),
        ("bipartite and edge-free-core soundness", bipartite_and_leaf_free_soundness),
        ("cover estimate validity", cover_estimate_validity),
        ("exact gap reproduction", gap_reproduction),
        ("layer transition location", transition_location),
        ("strategy vs exhaustive arrangement", strategy_oracle_gap),
        ("sweep csv determinism", sweep_determinism),
        ("strategy ordering on cover size", strategy_ordering),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| outcome(false, "panicked".into()));
        let status = if result.pass { "PASS" } else { "FAIL" };
        if !result.pass {
            failed += 1;
        }
        println!(
            "[{status}] {}. {name}: {} ({:.1}s)",
            i + 1,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
