use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rootclust_cli::bench::cmd_bench;
use rootclust_cli::commands::{cmd_analyze, cmd_cluster, RunFlags};
use rootclust_cli::exit;

/// Certified root clustering for polynomials, exp and sin.
#[derive(Parser)]
#[command(name = "rootclust", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    max_depth: Option<u32>,
    /// Largest precision (bits) a single soft comparison may reach.
    #[arg(long)]
    iteration_cap: Option<u32>,
    #[arg(long)]
    threads: Option<usize>,
    /// Write the subdivision tree as CSV to this path.
    #[arg(long)]
    dump_tree: Option<PathBuf>,
}

impl From<Flags> for RunFlags {
    fn from(f: Flags) -> Self {
        RunFlags {
            max_depth: f.max_depth,
            iteration_cap: f.iteration_cap,
            threads: f.threads,
            dump_tree: f.dump_tree,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the clustering algorithm on an instance file.
    Cluster {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Known roots; adds verification and theory bounds to the report.
        #[arg(long)]
        roots: Option<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Cluster geometry, S0 and predicted bounds from known roots.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        roots: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run a benchmark suite and write CSV plus a summary.
    Bench {
        suite: String,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::PARSE as u8 } else { 0 });
        }
    };
    let code = match cli.command {
        Command::Cluster {
            input,
            output,
            roots,
            flags,
        } => cmd_cluster(&input, &output, roots.as_deref(), &flags.into()),
        Command::Analyze {
            input,
            roots,
            output,
            flags,
        } => cmd_analyze(&input, &roots, &output, &flags.into()),
        Command::Bench {
            suite,
            output,
            threads,
        } => cmd_bench(&suite, &output, threads),
    };
    ExitCode::from(code as u8)
}
