use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sbx::verify::{self, Group, Options};
use sbx::{run_file, FailureMode};

#[derive(Parser)]
#[command(name = "sbx", version, about = "Spin-boson bound-state experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one config; the first failing cell aborts the run.
    Run { config: PathBuf },
    /// Evaluate a grid in parallel; failing cells are recorded per row.
    Sweep {
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Run the acceptance suite.
    Verify {
        /// Run a single group.
        #[arg(long)]
        only: Option<String>,
        /// Coarsest step of the solver-order check.
        #[arg(long, default_value_t = verify::DEFAULT_ORDER_DT)]
        order_dt: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => run_file(&config, 1, FailureMode::Abort),
        Command::Sweep { config, workers } => run_file(&config, workers, FailureMode::Record),
        Command::Verify { only, order_dt } => return verify_cmd(only, order_dt),
    };
    match result {
        Ok((path, table)) => {
            println!("wrote {} rows to {}", table.rows.len(), path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sbx: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn verify_cmd(only: Option<String>, order_dt: f64) -> ExitCode {
    let only = match only.as_deref().map(|name| (name, Group::parse(name))) {
        None => None,
        Some((_, Some(g))) => Some(g),
        Some((name, None)) => {
            let names: Vec<&str> = Group::ALL.iter().map(|g| g.name()).collect();
            eprintln!("sbx: unknown group `{name}` (expected one of {})", names.join(", "));
            return ExitCode::from(1);
        }
    };
    let mut total = 0;
    let failures = verify::run(&Options { only, order_dt }, &mut |c| {
        total += 1;
        println!("{c}");
    });
    println!("{} of {total} criteria passed", total - failures);
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(3) }
}
