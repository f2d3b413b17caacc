use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use drindex::commands::{self, BenchSpec, DEFAULT_BLOCK, DEFAULT_ORACLE_CAP};

/// Dynamic r-index: build, query, edit and verify index files.
#[derive(Parser)]
#[command(name = "drindex", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Patterns {
    /// File with one pattern per line.
    #[arg(long)]
    patterns: Option<PathBuf>,
    /// Literal patterns, numbered after the file's.
    literals: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an index from a text file.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        index: PathBuf,
        /// Bytes per inserted block.
        #[arg(long, default_value_t = DEFAULT_BLOCK)]
        block_size: usize,
        /// Build small inputs from the naive snapshot instead.
        #[arg(long)]
        bootstrap: bool,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
    },
    /// Print `<id> <count>` per pattern.
    Count {
        #[arg(long)]
        index: PathBuf,
        #[command(flatten)]
        patterns: Patterns,
    },
    /// Print `<id> <positions>` per pattern.
    Locate {
        #[arg(long)]
        index: PathBuf,
        #[command(flatten)]
        patterns: Patterns,
    },
    /// Apply an edit script in place.
    Edit {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        script: PathBuf,
    },
    /// Compare an index with the naive snapshot of a text (after a script).
    Verify {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        script: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
    },
    /// Print sigma, n, r, L_avg, L_max and n/r of a text file.
    Stats {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
    },
    /// Time random insertions and queries on a copy of an index.
    Bench {
        #[arg(long)]
        index: PathBuf,
        #[arg(long, default_value_t = 1000)]
        ops: usize,
        #[arg(long, default_value_t = 100)]
        queries: usize,
        #[arg(long, default_value_t = 100)]
        query_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<bool> {
    match cli.cmd {
        Cmd::Build { input, index, block_size, bootstrap, oracle_cap } => {
            commands::build(&input, &index, block_size, bootstrap, oracle_cap, out)?
        }
        Cmd::Count { index, patterns } => {
            let pats = commands::load_patterns(patterns.patterns.as_deref(), &patterns.literals)?;
            commands::count(&index, &pats, out)?
        }
        Cmd::Locate { index, patterns } => {
            let pats = commands::load_patterns(patterns.patterns.as_deref(), &patterns.literals)?;
            commands::locate(&index, &pats, out)?
        }
        Cmd::Edit { index, script } => commands::edit(&index, &script, out)?,
        Cmd::Verify { index, input, script, oracle_cap } => {
            return commands::verify(&index, &input, script.as_deref(), oracle_cap, out)
        }
        Cmd::Stats { input, oracle_cap } => commands::stats(&input, oracle_cap, out)?,
        Cmd::Bench { index, ops, queries, query_len, seed } => {
            commands::bench(&index, &BenchSpec { ops, queries, query_len, seed }, out)?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = out.flush();
            eprintln!("drindex: {e:#}");
            ExitCode::from(2)
        }
    }
}
