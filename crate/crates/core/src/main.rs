use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use partlab::harness::{self, ConfigFile, Criterion, ExperimentSpec};
use partlab::partition::PartitionerKind;

#[derive(Debug, Parser)]
#[command(
    name = "partlab",
    version,
    about = "Partitioner load-balancing experiments on a 2D N-body workload"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment and write its traces.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        partitioner: Option<PartitionerKind>,
        /// periodic:<p> or auto
        #[arg(long)]
        criterion: Option<Criterion>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the same experiment with several partitioners and rank them.
    Compare {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated list, e.g. norcb,rcb,rib,hsfc
        #[arg(long, value_delimiter = ',', required = true)]
        partitioners: Vec<PartitionerKind>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> anyhow::Result<ExperimentSpec> {
    let spec = ConfigFile::load(path)?.into_spec()?;
    Ok(spec)
}

fn finish(
    mut spec: ExperimentSpec,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> anyhow::Result<ExperimentSpec> {
    if let Some(seed) = seed {
        spec.sim.seed = seed;
    }
    if let Some(out) = out {
        spec.output_dir = out;
    }
    spec.validate()?;
    Ok(spec)
}

fn main_inner(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run {
            config,
            partitioner,
            criterion,
            seed,
            out,
        } => {
            let mut spec = load(&config)?;
            if let Some(p) = partitioner {
                spec.partitioner = p;
            }
            if let Some(c) = criterion {
                spec.criterion = c;
            }
            let spec = finish(spec, seed, out)?;
            let result = harness::run(&spec).context("simulation failed")?;
            harness::emit_traces(&result, &spec.output_dir)?;
            println!(
                "{}: modeled_time={} lb_calls={} cumulative_u={} -> {}",
                spec.partitioner,
                result.modeled_time,
                result.lb_call_count,
                result.final_cumulative_u(),
                spec.output_dir.display()
            );
        }
        Command::Compare {
            config,
            partitioners,
            seed,
            out,
        } => {
            if partitioners.len() < 2 {
                bail!("--partitioners needs at least two entries");
            }
            let base = finish(load(&config)?, seed, out)?;
            let specs = partitioners
                .iter()
                .map(|&p| {
                    let spec = ExperimentSpec {
                        partitioner: p,
                        ..base.clone()
                    };
                    spec.validate().map(|_| spec)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let cmp = harness::compare(&specs)?;
            harness::emit_comparison(&cmp, &base.output_dir)?;
            for s in cmp.standings() {
                println!(
                    "{:>6}: modeled_time={} lb_calls={} cumulative_u={}",
                    s.algorithm, s.modeled_time, s.lb_call_count, s.final_cumulative_u
                );
            }
            println!("winner: {} -> {}", cmp.winner, base.output_dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
