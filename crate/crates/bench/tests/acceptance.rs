//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use morl_bench::config::ExperimentConfig;
use morl_bench::metrics::compute_metrics;
use morl_bench::record::RunRecord;
use morl_bench::runner::run_experiment;
use morl_core::algorithms::AlgorithmKind;
use morl_core::env::{analytic_front, EnvKind};
use morl_core::indicators::{gd, hypervolume_exact, hypervolume_mc, igd, ReferenceScale};
use morl_core::pareto::{fast_nondominated_sort, nondominated_filter};
use morl_core::rng::{RandomSource, Stream};
use morl_core::stats::{friedman, nemenyi_cd, ScoreTable};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(4, |n| n.get())
}

// Independent oracles, deliberately naive.

fn oracle_dominates(u: &[f64], v: &[f64]) -> bool {
    let mut strictly = false;
    for (a, b) in u.iter().zip(v) {
        if a < b {
            return false;
        }
        if a > b {
            strictly = true;
        }
    }
    strictly
}

fn oracle_filter(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points
        .iter()
        .filter(|p| !points.iter().any(|q| oracle_dominates(q, p)))
        .cloned()
        .collect()
}

fn oracle_ranks(points: &[Vec<f64>]) -> Vec<usize> {
    let mut rank = vec![usize::MAX; points.len()];
    let mut front = 0;
    while rank.contains(&usize::MAX) {
        let remaining: Vec<usize> = (0..points.len()).filter(|&i| rank[i] == usize::MAX).collect();
        let layer: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| oracle_dominates(&points[j], &points[i])))
            .collect();
        for i in layer {
            rank[i] = front;
        }
        front += 1;
    }
    rank
}

fn criterion_1() -> Outcome {
    let mut rng = Stream::new(20_240_601);
    let mut sets = Vec::new();
    for s in 0..200 {
        let n = 1 + rng.below(50);
        let k = 2 + rng.below(2);
        // every other set sits on a coarse grid to force ties and duplicates
        let grid = s % 2 == 0;
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..k)
                    .map(|_| if grid { rng.below(5) as f64 } else { rng.next_f64() })
                    .collect()
            })
            .collect();
        sets.push(pts);
    }
    let start = Instant::now();
    let mut mismatches = 0;
    for pts in &sets {
        let filtered = nondominated_filter(pts).map_err(|e| e.to_string())?;
        if filtered.points() != oracle_filter(pts).as_slice() {
            mismatches += 1;
        }
        let ranked = fast_nondominated_sort(pts).map_err(|e| e.to_string())?;
        if ranked.rank != oracle_ranks(pts) {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    check(
        mismatches == 0 && elapsed < 1.0,
        format!("200 sets, {mismatches} mismatches, {elapsed:.3} s (limit 1 s)"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = Stream::new(77);
    let mut worst: f64 = 0.0;
    for f in 0..20 {
        let k = 2 + f % 2;
        let n = 1 + rng.below(8);
        let front: Vec<Vec<f64>> = (0..n).map(|_| (0..k).map(|_| rng.next_f64()).collect()).collect();
        let reference = vec![1.0; k];
        let exact = hypervolume_exact(&front, &reference).map_err(|e| e.to_string())?;
        let mc = hypervolume_mc(&front, &reference, 100_000, 1000 + f as u64).map_err(|e| e.to_string())?;
        worst = worst.max((exact - mc).abs());
    }
    let example = hypervolume_exact(&[[0.0, 0.5], [0.5, 0.0]], &[1.0, 1.0]).map_err(|e| e.to_string())?;
    check(
        worst < 0.01 && (example - 0.75).abs() <= 1e-12,
        format!("max |exact - MC| = {worst:.5} (limit 0.01); worked example = {example}"),
    )
}

fn criterion_3() -> Outcome {
    let front = analytic_front(1001).map_err(|e| e.to_string())?;
    let scale = ReferenceScale::new(&front).map_err(|e| e.to_string())?;
    let hv = scale.hypervolume(front.points()).map_err(|e| e.to_string())?;
    let g = gd(front.points(), front.points()).map_err(|e| e.to_string())?;
    let i = igd(front.points(), front.points()).map_err(|e| e.to_string())?;
    check(
        (hv - 0.5).abs() < 1e-3 && g.abs() <= 1e-12 && i.abs() <= 1e-12,
        format!("hv = {hv:.6} (target 0.5 +- 1e-3), gd = {g}, igd = {i}"),
    )
}

fn bandit_config(algorithms: Vec<AlgorithmKind>) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(EnvKind::TradeoffBandit, algorithms);
    c.pop_size = 50;
    c.generations = 25;
    c.n_episodes = 1;
    c.n_runs = 10;
    c
}

fn run(config: &ExperimentConfig) -> Result<Vec<RunRecord>, String> {
    run_experiment(config, jobs()).map_err(|e| e.to_string())
}

fn criterion_4() -> Outcome {
    let records = run(&bandit_config(vec![AlgorithmKind::Nsga2]))?;
    let front = analytic_front(1001).map_err(|e| e.to_string())?;
    let scale = ReferenceScale::new(&front).map_err(|e| e.to_string())?;
    let mut passing = 0;
    let mut details = Vec::new();
    let mut slowest: f64 = 0.0;
    for r in &records {
        let last = r.final_generation().ok_or("empty record")?;
        let pop = nondominated_filter(&last.objectives()).map_err(|e| e.to_string())?;
        let i = igd(pop.points(), front.points()).map_err(|e| e.to_string())?;
        let hv = scale.hypervolume(pop.points()).map_err(|e| e.to_string())?;
        if i < 0.05 && hv >= 0.45 {
            passing += 1;
        }
        slowest = slowest.max(r.wall_time);
        details.push(format!("{i:.4}/{hv:.4}"));
    }
    check(
        passing >= 9 && slowest < 60.0,
        format!(
            "{passing}/10 runs with IGD < 0.05 and HV >= 0.45, slowest run {slowest:.2} s; igd/hv per run: {}",
            details.join(" ")
        ),
    )
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn criterion_5() -> Outcome {
    use AlgorithmKind::*;
    let mut c = ExperimentConfig::new(EnvKind::NoisyPointWalker, vec![Nsga2, Spea2, Ga, De]);
    c.n_episodes = 5;
    c.n_runs = 10;
    let records = run(&c)?;
    let metrics = compute_metrics(&records).map_err(|e| e.to_string())?;
    let last = c.generations - 1;
    let med = |name: &str| {
        median(
            metrics
                .rows
                .iter()
                .filter(|r| r.algorithm == name && r.generation == last)
                .map(|r| r.hv)
                .collect(),
        )
    };
    let (nsga2, spea2, ga, de) = (med("NSGA2"), med("SPEA2"), med("GA"), med("DE"));
    let soea = ga.max(de);
    check(
        nsga2 > soea && spea2 > soea,
        format!("median final HV: NSGA2 {nsga2:.4}, SPEA2 {spea2:.4}, GA {ga:.4}, DE {de:.4}"),
    )
}

fn criterion_6() -> Outcome {
    let records = run(&bandit_config(vec![AlgorithmKind::Ga, AlgorithmKind::Pso]))?;
    let mut violations = 0;
    for r in &records {
        let best: Vec<f64> = r.generations.iter().map(|g| g.best_scalar()).collect();
        if best.len() != 25 || best.windows(2).any(|w| w[1] < w[0]) {
            violations += 1;
        }
    }
    check(
        violations == 0,
        format!("{} GA/PSO runs, {violations} with a decreasing best scalar", records.len()),
    )
}

fn criterion_7() -> Outcome {
    let table = ScoreTable::new(
        vec!["A".into(), "B".into(), "C".into()],
        vec![vec![3.0, 2.0, 1.0]; 3],
        true,
    )
    .map_err(|e| e.to_string())?;
    let (chi2, _) = friedman(&table).map_err(|e| e.to_string())?;
    let cd = nemenyi_cd(8, 10, 0.05).map_err(|e| e.to_string())?;
    check(
        chi2 == 6.0 && (cd - 3.320).abs() <= 1e-3,
        format!("chi2 = {chi2}, CD(8, 10) = {cd:.6}"),
    )
}

const DETERMINISM_CONFIG: &str = "\
environment = NoisyPointWalker
algorithms = [NSGA2, SPEA2, GA, PSO, SMSEMOA, NSGA3]
pop_size = 16
generations = 8
n_episodes = 3
n_runs = 3
master_seed = 11
";

fn cli_run(config: &Path, out: &Path, jobs: usize) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_morl-bench"))
        .arg("run")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(["--jobs", &jobs.to_string()])
        .env("RUST_LOG", "warn")
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&status.stderr).into_owned())
    }
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("experiment.cfg");
    std::fs::write(&config, DETERMINISM_CONFIG).map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("jobs1"), dir.path().join("jobs8"));
    cli_run(&config, &a, 1)?;
    cli_run(&config, &b, 8)?;
    let mut same = Vec::new();
    for file in ["metrics.csv", "fronts.csv"] {
        let x = std::fs::read(a.join(file)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.join(file)).map_err(|e| e.to_string())?;
        same.push((file, x == y, x.len()));
    }
    check(
        same.iter().all(|s| s.1),
        same.iter()
            .map(|(f, eq, n)| format!("{f} {} ({n} bytes)", if *eq { "identical" } else { "DIFFERS" }))
            .collect::<Vec<_>>()
            .join(", "),
    )
}

fn criterion_9() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for env in [EnvKind::NoisyPointWalker, EnvKind::HopLander] {
        let mut c = ExperimentConfig::new(env, AlgorithmKind::ALL.to_vec());
        c.pop_size = 12;
        c.generations = 6;
        c.n_episodes = 2;
        c.n_runs = 2;
        let records = run(&c)?;
        let expected = c.pop_size * c.generations;
        let counts: Vec<usize> = records.iter().map(|r| r.header.evaluations).collect();
        ok &= records.len() == 16 && records.iter().all(|r| r.is_completed() && r.header.evaluations == expected);
        lines.push(format!("{env}: {} records, counters {:?} (expected {expected})", records.len(), counts));
    }
    check(ok, lines.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle equivalence of nondominated filter and sort", criterion_1),
        ("hypervolume exact vs Monte Carlo", criterion_2),
        ("analytic bandit front quantities", criterion_3),
        ("NSGA-II solves the deterministic bandit", criterion_4),
        ("MOEAs beat scalarized SOEAs on NoisyPointWalker", criterion_5),
        ("scalarized best is monotone for GA and PSO", criterion_6),
        ("Friedman fixture and Nemenyi CD", criterion_7),
        ("byte-identical outputs with --jobs 1 and 8", criterion_8),
        ("evaluation budget parity", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
