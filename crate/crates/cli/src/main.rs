use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod pipeline;

#[derive(Parser)]
#[command(
    name = "gsnmf",
    version,
    about = "Community detection with signed opinion profiles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted-partition instance.
    Synth {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Turn messages and retweets into X and W.
    Build(BuildArgs),
    /// Factorize X with the graph regularizer.
    Detect {
        #[command(flatten)]
        inputs: MatrixArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 1e6)]
        lambda: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve once per lambda and report objectives and optional scores.
    Grid {
        #[command(flatten)]
        inputs: MatrixArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "1,10,100,1e3,1e4,1e5,1e6,1e7,1e8,1e9"
        )]
        lambdas: Vec<f64>,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Signed community profiles from V.
    Profile {
        #[arg(long)]
        v: PathBuf,
        #[arg(long, default_value_t = 15)]
        top: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score the hard assignment from U against labels.
    Evaluate {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// build, detect, profile and evaluate from one JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub messages: PathBuf,
    #[arg(long)]
    pub retweets: PathBuf,
    #[arg(long)]
    pub lexicon: PathBuf,
    #[arg(long)]
    pub stopwords: PathBuf,
    #[arg(long)]
    pub nouns: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    #[arg(long, default_value_t = 15)]
    pub min_users: usize,
    #[arg(long, default_value_t = 15)]
    pub min_keyexprs: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct MatrixArgs {
    #[arg(long)]
    pub x: PathBuf,
    /// Raw interaction counts; normalized before solving.
    #[arg(long)]
    pub w: PathBuf,
    /// Treat --w as already normalized.
    #[arg(long)]
    pub w_normalized: bool,
}

#[derive(Args)]
pub struct SolverArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 20)]
    pub patience: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth { config, out } => commands::synth(config.as_deref(), &out),
        Command::Build(args) => commands::build(&args).map(|_| ()),
        Command::Detect {
            inputs,
            solver,
            lambda,
            out,
        } => commands::detect(&inputs, &solver, lambda, &out).map(|_| ()),
        Command::Grid {
            inputs,
            solver,
            lambdas,
            labels,
            out,
        } => commands::grid(&inputs, &solver, &lambdas, labels.as_deref(), &out),
        Command::Profile { v, top, out } => commands::profile(&v, top, &out).map(|_| ()),
        Command::Evaluate { u, labels, out } => commands::evaluate(&u, &labels, &out).map(|_| ()),
        Command::Run { config, out } => pipeline::run(&config, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
