use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use langton::commands::{self, CmdError, Fiber, Outcome, EXIT_BAD_ARGS};
use serde_json::Value;

/// Semistable reduction of bundles on the projective line.
#[derive(Parser, Debug)]
#[command(name = "langton", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FiberArg {
    Special,
    Generic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root system, unipotent filtrations and central weights.
    Rootdata {
        /// Type label, optionally with the rank: A, B3, G2, E8, ...
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        rank: Option<usize>,
        /// Simple root of the maximal parabolic, 1-based.
        #[arg(long)]
        beta: Option<usize>,
        /// adjoint, sc, sl or gl (default: sl for type A, sc otherwise).
        #[arg(long)]
        form: Option<String>,
    },
    /// Splitting types of the generic and special fibers.
    Hn {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Birkhoff factorization of one fiber.
    Factor {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        fiber: Option<FiberArg>,
    },
    /// Runs semistable reduction and reports the trace.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
        /// Also write the trace JSON to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Checks the Levi degeneration of a reduction step against the engine.
    CheckDeformation {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
        /// Step to check, 1-based.
        #[arg(long, default_value_t = 1)]
        step: usize,
        /// Seed for the random fiber parameter.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::Args, Debug)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// Entries are known modulo t^T; overrides the document (default 32).
    #[arg(long)]
    t_precision: Option<i64>,
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>), CmdError> {
    let load = |i: &InputArgs| commands::load_document(&i.input, i.t_precision);
    Ok(match cli.command {
        Command::Rootdata {
            ty,
            rank,
            beta,
            form,
        } => (
            commands::cmd_rootdata(&ty, rank, beta, form.as_deref())?,
            None,
        ),
        Command::Hn { input } => (commands::cmd_hn(&load(&input)?)?, None),
        Command::Factor { input, fiber } => {
            let fiber = fiber.map(|f| match f {
                FiberArg::Special => Fiber::Special,
                FiberArg::Generic => Fiber::Generic,
            });
            (commands::cmd_factor(&load(&input)?, fiber)?, None)
        }
        Command::Reduce {
            input,
            max_steps,
            trace,
        } => (commands::cmd_reduce(&load(&input)?, max_steps)?, trace),
        Command::CheckDeformation {
            input,
            max_steps,
            step,
            seed,
        } => (
            commands::cmd_check_deformation(&load(&input)?, max_steps, step, seed)?,
            None,
        ),
    })
}

fn print(v: &Value) {
    let mut out = std::io::stdout().lock();
    let _ = serde_json::to_writer_pretty(&mut out, v);
    let _ = writeln!(out);
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_ARGS } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok((outcome, trace)) => {
            if let Some(path) = trace {
                let text = serde_json::to_string_pretty(&outcome.json).unwrap() + "\n";
                if let Err(e) = std::fs::write(&path, text) {
                    eprintln!("error: cannot write {}: {}", path.display(), e);
                    return ExitCode::from(EXIT_BAD_ARGS as u8);
                }
            }
            print(&outcome.json);
            if outcome.code != 0 {
                eprintln!("error: checks did not pass (exit {})", outcome.code);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            print(&e.to_json());
            ExitCode::from(e.code as u8)
        }
    }
}
