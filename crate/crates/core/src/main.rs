use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cbit_recovery::experiment::{self, Command, OutputFormat, RunConfig};
use cbit_recovery::DEFAULT_BETA_GRID;

/// Optimal one-cbit-assisted recovery of depolarized qubits.
#[derive(Parser)]
#[command(name = "cbit-recovery", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Optimize over a uniform alpha grid and write the figure data.
    Sweep(RangeArgs),
    /// Optimize a single alpha and print the result as key=value lines.
    Optimize {
        #[arg(long)]
        alpha: f64,
        #[arg(long = "beta-grid", default_value_t = DEFAULT_BETA_GRID)]
        beta_grid: usize,
    },
    /// Run the oracle-equivalence and invariant checks.
    Verify {
        #[arg(long = "mc-samples", default_value_t = experiment::DEFAULT_MC_SAMPLES)]
        mc_samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "beta-grid", default_value_t = DEFAULT_BETA_GRID)]
        beta_grid: usize,
        /// Add a non-CP channel to the certified recovery set.
        #[arg(long, hide = true)]
        inject_broken_channel: bool,
    },
    /// Locate the jump in the optimal partition angle.
    Kink(RangeArgs),
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long = "alpha-min", default_value_t = 0.0)]
    alpha_min: f64,
    #[arg(long = "alpha-max", default_value_t = 1.0)]
    alpha_max: f64,
    #[arg(long, default_value_t = experiment::DEFAULT_STEPS)]
    steps: usize,
    #[arg(long = "beta-grid", default_value_t = DEFAULT_BETA_GRID)]
    beta_grid: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

fn range_config(command: Command, args: RangeArgs) -> RunConfig {
    let mut cfg = RunConfig::new(command);
    cfg.alpha_min = args.alpha_min;
    cfg.alpha_max = args.alpha_max;
    cfg.steps = args.steps;
    cfg.beta_grid_size = args.beta_grid;
    cfg.output = args.output;
    cfg.format = match args.format {
        Format::Csv => OutputFormat::Csv,
        Format::Svg => OutputFormat::Svg,
    };
    cfg
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.command {
        Cmd::Sweep(args) => range_config(Command::Sweep, args),
        Cmd::Kink(args) => range_config(Command::Kink, args),
        Cmd::Optimize { alpha, beta_grid } => {
            let mut cfg = RunConfig::new(Command::Optimize);
            cfg.alpha = Some(alpha);
            cfg.beta_grid_size = beta_grid;
            cfg
        }
        Cmd::Verify { mc_samples, seed, beta_grid, inject_broken_channel } => {
            let mut cfg = RunConfig::new(Command::Verify);
            cfg.mc_samples = mc_samples;
            cfg.seed = seed;
            cfg.beta_grid_size = beta_grid;
            cfg.inject_broken_channel = inject_broken_channel;
            cfg
        }
    };
    let outcome = experiment::run(&cfg);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code as u8)
}
