use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use netmimo_cli::config::ConfigError;
use netmimo_cli::{load_config, report, run, CliError, RunOptions};

#[derive(Parser)]
#[command(
    name = "netmimo",
    version,
    about = "User-centric vs disjoint network MIMO: analysis and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run experiments and write CSV tables plus manifest.json
    Run {
        config: PathBuf,
        /// Run only this experiment (e.g. fig6_ul_rates)
        #[arg(long)]
        experiment: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (overrides `out` in the config)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Monte Carlo trials per point
        #[arg(long)]
        trials: Option<usize>,
        /// Worker threads for the simulator (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check a configuration and print it fully resolved
    Validate { config: PathBuf },
    /// Compare analytic and simulated results of a run directory
    Report { run_dir: PathBuf },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(ConfigError::Invalid(issues))) => {
            for i in issues {
                eprintln!("error: {i}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            experiment,
            seed,
            out,
            trials,
            threads,
        } => {
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| CliError::Report(format!("thread pool: {e}")))?;
            }
            let cfg = load_config(&config)?;
            let opts = RunOptions {
                experiment,
                seed,
                out,
                trials,
            };
            let m = run(&cfg, &opts)?;
            for e in &m.experiments {
                println!(
                    "{} -> {} ({} rows)",
                    e.spec.id,
                    m.config.out.join(&e.file).display(),
                    e.rows
                );
            }
            println!(
                "manifest -> {}",
                m.config.out.join(netmimo_cli::output::MANIFEST_FILE).display()
            );
        }
        Command::Validate { config } => {
            let cfg = load_config(&config)?;
            print!(
                "{}",
                toml::to_string(&cfg).map_err(|e| CliError::Report(e.to_string()))?
            );
        }
        Command::Report { run_dir } => {
            print!("{}", report::build(&run_dir)?);
        }
    }
    Ok(())
}
