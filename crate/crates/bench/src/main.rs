use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use morl_bench::compare::{compare_dirs, Metric, Pooling};
use morl_bench::config::parse_config;
use morl_bench::{export, export_plots_command, metrics_command, run_command, BenchError};

#[derive(Parser)]
#[command(name = "morl-bench", version, about = "Benchmark evolutionary optimizers on multi-objective control tasks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write records, metrics and fronts.
    Run {
        config: PathBuf,
        /// Output directory; defaults to the config's `output` key.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `master_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Recompute metrics.csv and fronts.csv from the run records.
    Metrics { dir: PathBuf },
    /// Friedman test and Nemenyi critical difference on final-generation values.
    Stats {
        #[arg(required = true)]
        dirs: Vec<PathBuf>,
        #[arg(long, value_enum)]
        metric: Metric,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Pooling::Runs)]
        mode: Pooling,
        /// Where to write cd.csv; defaults to the first directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write per-generation mean/std curves to curves.csv.
    ExportPlots { dir: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> Result<(), BenchError> {
    match command {
        Command::Run { config, out, seed, jobs } => {
            let text = std::fs::read_to_string(&config).map_err(|source| BenchError::Io { path: config.clone(), source })?;
            let mut cfg = parse_config(&text)?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            let out = out
                .or_else(|| cfg.output.clone().map(PathBuf::from))
                .ok_or_else(|| BenchError::Invalid("no output directory: pass --out or set `output`".into()))?;
            let summary = run_command(&cfg, &out, jobs)?;
            let aborted = summary.records.iter().filter(|r| !r.is_completed()).count();
            println!(
                "{} runs ({} aborted), {} metric rows, reference front of {} points -> {}",
                summary.records.len(),
                aborted,
                summary.metrics.rows.len(),
                summary.metrics.reference.len(),
                out.display()
            );
            for r in &summary.records {
                println!("{} run {}: {} evaluations", r.header.algorithm, r.header.run, r.header.evaluations);
            }
        }
        Command::Metrics { dir } => {
            let report = metrics_command(&dir)?;
            println!("{} metric rows written to {}", report.rows.len(), dir.join("metrics.csv").display());
        }
        Command::Stats { dirs, metric, alpha, mode, out } => {
            let paths: Vec<&std::path::Path> = dirs.iter().map(PathBuf::as_path).collect();
            let result = compare_dirs(&paths, metric, alpha, mode)?;
            println!(
                "Friedman chi2 = {:.4}, p = {:.4e}, CD = {:.4}",
                result.statistic, result.p_value, result.critical_difference
            );
            for (name, rank) in result.algorithms.iter().zip(&result.mean_ranks) {
                println!("  {name:<8} mean rank {rank:.3}");
            }
            for (i, g) in result.groups.iter().enumerate() {
                let names: Vec<&str> = g.iter().map(|&j| result.algorithms[j].as_str()).collect();
                println!("  group {i}: {}", names.join(", "));
            }
            let out = out.unwrap_or_else(|| dirs[0].clone());
            export::write_cd(&out.join("cd.csv"), metric.name(), &result)?;
        }
        Command::ExportPlots { dir } => {
            export_plots_command(&dir)?;
            println!("wrote {}", dir.join("curves.csv").display());
        }
    }
    Ok(())
}
