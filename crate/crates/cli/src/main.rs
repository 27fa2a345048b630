//! `smuc`: evaluate formulas, run and compile programs, simulate distributed
//! runs, fuzz asynchronous strategies, play the rescue scenario and probe
//! domain laws.
//!
//! Exit status is 0 on success, 1 on a user or domain error and 2 when an
//! internal invariant is found violated.

mod commands;
mod error;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "smuc", version, about = "Fixpoint formulas over computational fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a field.
    Eval(EvalArgs),
    /// Run a program on a field.
    Run(RunArgs),
    /// Translate a program to simple assignment form.
    Compile(CompileArgs),
    /// Simulate the distributed execution of a program.
    Dist(DistArgs),
    /// Check that random fair strategies reach the synchronous fixpoint.
    Fuzz(FuzzArgs),
    /// Run the rescue case study on a random scenario.
    Rescue(RescueArgs),
    /// Probe domain laws or formula monotonicity.
    Check(CheckArgs),
}

#[derive(Args)]
pub(crate) struct EvalArgs {
    #[arg(long)]
    field: PathBuf,
    #[arg(long)]
    formula: String,
    /// Print every approximant of the outermost fixpoint.
    #[arg(long)]
    trace: bool,
    /// Write one DOT file per approximant into this directory.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
pub(crate) struct RunArgs {
    #[arg(long)]
    field: PathBuf,
    #[arg(long)]
    program: PathBuf,
    #[arg(long, default_value_t = smuc::program::DEFAULT_FUEL)]
    fuel: usize,
    /// Print every step.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    json: bool,
    /// Write the final field as JSON.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct CompileArgs {
    /// Field supplying label domains for typing the program.
    #[arg(long)]
    field: PathBuf,
    #[arg(long)]
    program: PathBuf,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct DistArgs {
    #[arg(long)]
    field: PathBuf,
    #[arg(long)]
    program: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Write the event log as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// `bfs` or a JSON file of parents.
    #[arg(long, default_value = "bfs")]
    tree: String,
    #[arg(long, default_value_t = 10_000_000)]
    fuel: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
pub(crate) struct FuzzArgs {
    #[arg(long)]
    field: PathBuf,
    #[arg(long)]
    formula: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// Failure events applied to every trial.
    #[arg(long)]
    failures: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
pub(crate) struct RescueArgs {
    #[arg(long)]
    landmarks: usize,
    #[arg(long)]
    victims: usize,
    #[arg(long)]
    rescuers: usize,
    #[arg(long)]
    seed: u64,
    /// Rescuers each victim needs.
    #[arg(long, default_value_t = 1)]
    how_many: u32,
    /// Write the scenario and the assignment as DOT files here.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long, default_value_t = smuc::program::DEFAULT_FUEL)]
    fuel: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
pub(crate) struct CheckArgs {
    /// Domain to probe, e.g. `cost` or `lex(cost,nodes)`.
    #[arg(long)]
    domain: Option<String>,
    /// Node names for domains that mention nodes.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
    nodes: Vec<String>,
    /// Field whose label domains are probed, or which types `--formula`.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Formula whose fixpoint bodies are probed for monotonicity.
    #[arg(long)]
    formula: Option<String>,
    #[arg(long, default_value_t = 1000)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Run(a) => commands::run(a),
        Command::Compile(a) => commands::compile(a),
        Command::Dist(a) => commands::dist(a),
        Command::Fuzz(a) => commands::fuzz(a),
        Command::Rescue(a) => commands::rescue(a),
        Command::Check(a) => commands::check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
