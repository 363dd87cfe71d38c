use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rotmhd::harness::{collect_outcomes, run_experiment, Context, Outcome, RunConfig};

#[derive(Parser)]
#[command(name = "rotmhd", version, about = "Rotating MHD experiments: sweeps, dispersion oracle, Besov benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Ill-prepared eps-sweep with convergence-rate table.
    Sweep(RunArgs),
    /// Decay exponents of the free wave from the whole-space oracle.
    Dispersion(RunArgs),
    /// Norms and interpolation ratios of a seeded random field.
    BesovBench(RunArgs),
    /// One solve of the rotating system with checkpoints.
    SingleRun(RunArgs),
    /// Summarize the verdicts stored under a run directory.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides out.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweep members.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn print_outcome(o: &Outcome) {
    println!("{} {}", o.kind, o.manifest_hash);
    for v in &o.verdicts {
        println!("  {:<40} {}", v.name, v.verdict);
    }
}

fn run(kind: &str, args: &RunArgs) -> rotmhd::Result<Outcome> {
    let mut cfg = RunConfig::load(&args.config)?;
    cfg.experiment = kind.to_string();
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    let ctx = Context { out_dir: cfg.out_dir.clone(), jobs: args.jobs };
    let outcome = run_experiment(&cfg, &ctx)?;
    for p in &outcome.outputs {
        log::info!("wrote {}", p.display());
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match &cli.command {
        Command::Sweep(a) => run("sweep", a).map(|o| vec![o]),
        Command::Dispersion(a) => run("dispersion", a).map(|o| vec![o]),
        Command::BesovBench(a) => run("besov-bench", a).map(|o| vec![o]),
        Command::SingleRun(a) => run("single-run", a).map(|o| vec![o]),
        Command::Report { input } => collect_outcomes(input),
    };
    match result {
        Ok(outcomes) => {
            outcomes.iter().for_each(print_outcome);
            if outcomes.iter().any(Outcome::any_fail) {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
