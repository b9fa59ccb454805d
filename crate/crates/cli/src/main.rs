use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mathstep_cli::config::{resolve, Overrides};
use mathstep_cli::{commands, CliError};

#[derive(Parser)]
#[command(
    name = "mathstep",
    version,
    about = "Step-level verifier for formalized math solutions"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// TOML config file; flags and MATHSTEP_* variables override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// SMT solver binary (default: discover tinysmt next to this binary, then PATH).
    #[arg(long, global = true, value_name = "PATH")]
    solver_path: Option<PathBuf>,
    /// Per-query solver timeout in milliseconds.
    #[arg(long, global = true, value_name = "MS")]
    timeout_ms: Option<u64>,
    /// Refinement iteration cap.
    #[arg(long, global = true, value_name = "N")]
    max_iter: Option<u32>,
    /// Seed for randomized equivalence sampling.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Write the machine-readable result here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    report_out: Option<PathBuf>,
    /// Run offline against scripted model responses.
    #[arg(long, global = true)]
    mock: bool,
    /// JSON file with scripted generator/formalizer responses.
    #[arg(long, global = true, value_name = "FILE", requires = "mock")]
    mock_script: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every step of a context file.
    Verify {
        /// Context file in the line format.
        context: PathBuf,
    },
    /// Translate a problem/solution pair into a context.
    Formalize {
        problem: PathBuf,
        solution: PathBuf,
        /// Write the context here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Generate, verify, and iteratively repair a solution.
    Refine {
        problem: PathBuf,
        /// Write the final solution text here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Pick the shortest fully valid candidate context.
    Select {
        #[arg(required = true)]
        candidates: Vec<PathBuf>,
    },
    /// Score the verifier on a directory of labeled fixtures.
    Bench { corpus: PathBuf },
    /// Emit the solution graph as DOT.
    Graph {
        context: PathBuf,
        /// Write the DOT here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let overrides = Overrides {
        config: cli.global.config,
        solver_path: cli.global.solver_path,
        timeout_ms: cli.global.timeout_ms,
        max_iter: cli.global.max_iter,
        seed: cli.global.seed,
        report_out: cli.global.report_out,
        mock: cli.global.mock,
        mock_script: cli.global.mock_script,
    };
    let settings = resolve(&overrides)?;
    match cli.command {
        Command::Verify { context } => commands::verify::run(&settings, &context),
        Command::Formalize { problem, solution, out } => {
            commands::formalize::run(&settings, &problem, &solution, out.as_deref())
        }
        Command::Refine { problem, out } => {
            commands::refine::run(&settings, &problem, out.as_deref())
        }
        Command::Select { candidates } => commands::select::run(&settings, &candidates),
        Command::Bench { corpus } => commands::bench::run(&settings, &corpus),
        Command::Graph { context, out } => {
            commands::graph::run(&settings, &context, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit 3, keeping 0/1/2 exclusively for verdicts.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 3 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
