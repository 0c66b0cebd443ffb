use std::path::PathBuf;
use std::process::ExitCode;

use boussinesq::scenario::{load_scenario, run_to_dir};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(version, about = "Run Boussinesq scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write series.csv, fits.json and summary.json.
    Run {
        config: PathBuf,
        /// Overrides `output_dir` from the config (default: `out/<name>`).
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        verbose: bool,
    },
}

fn main() -> ExitCode {
    let Command::Run { config, output_dir, threads, verbose } = Cli::parse().command;
    let scenario = match load_scenario(&config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {e}", config.display());
            return ExitCode::from(2);
        }
    };
    let dir = output_dir
        .or_else(|| scenario.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&scenario.name));
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    if verbose {
        eprintln!("running {} ({}) into {}", scenario.name, scenario.kind(), dir.display());
    }
    let out = match pool.install(|| run_to_dir(&scenario, &dir)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{}: {e}", scenario.name);
            return ExitCode::from(2);
        }
    };
    let s = &out.summary;
    if verbose {
        for c in &s.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            eprintln!("  {mark} {} = {:.6e} (threshold {:.6e})", c.name, c.value, c.threshold);
        }
    }
    println!("{} {}", if s.passed { "PASS" } else { "FAIL" }, s.name);
    if s.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
