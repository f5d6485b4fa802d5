//! `qroot`: verification suites and tables for quantized enveloping
//! algebras at odd roots of unity.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a checked
//! identity fails.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CommonArgs, Format};

#[derive(Parser, Debug)]
#[command(name = "qroot", version, about = "Exact checks for quantized enveloping algebras at roots of unity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the lattices between the root and weight lattices.
    Lattices {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compare the rank of `U^M_η → U^N_η` computed from `M/ℓM → N/ℓN`
    /// with the product of `gcd(ℓ, |N_i/M_i|)`.
    IsogenyRank {
        #[command(flatten)]
        common: CommonArgs,
        /// Smaller lattice (`Q`, `Λ`/`L`, or an index into `lattices`).
        #[arg(long, default_value = "Q")]
        m: String,
        /// Larger lattice.
        #[arg(long, default_value = "L")]
        n: String,
    },
    /// Check a representation against the defining relations.
    VerifyRep {
        #[command(flatten)]
        common: CommonArgs,
        /// A built-in representation: `sl3-showcase` or `counit`.
        #[arg(long, conflicts_with = "file")]
        builtin: Option<String>,
        /// A representation JSON file.
        #[arg(long)]
        file: Option<std::path::PathBuf>,
    },
    /// Complete the PBW rewriting system of a reduced algebra and count
    /// its normal monomials.
    Pbw {
        #[command(flatten)]
        common: CommonArgs,
        /// Write the completed rewriting system to this JSON file.
        #[arg(long)]
        artifact: Option<std::path::PathBuf>,
    },
    /// Decide whether a central ℓ-character has a 1-dimensional module and
    /// construct one when it exists.
    CentralSmall {
        #[command(flatten)]
        common: CommonArgs,
        /// Order of `π_M(η)` in the center `Z(G_M)`.
        #[arg(long)]
        z_order: u64,
    },
    /// TSV table of unipotent classes of `sl_{n+1}` with their DCKP bounds
    /// and small-module certificates.
    DckpTable {
        /// Ranks `n` (comma separated or ranges like `2..7`).
        #[arg(long, default_value = "2..7")]
        ranks: String,
        /// Values of ℓ, comma separated.
        #[arg(long = "l", default_value = "5,7")]
        ells: String,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[arg(long, short)]
        output: Option<std::path::PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (result, format_output) = match cli.command {
        Command::Lattices { common } => (commands::lattices(&common), common.output),
        Command::IsogenyRank { common, m, n } => (commands::isogeny_rank(&common, &m, &n), common.output),
        Command::VerifyRep { common, builtin, file } => {
            (commands::verify_rep(&common, builtin.as_deref(), file.as_deref()), common.output)
        }
        Command::Pbw { common, artifact } => (commands::pbw(&common, artifact.as_deref()), common.output),
        Command::CentralSmall { common, z_order } => (commands::central_small(&common, z_order), common.output),
        Command::DckpTable {
            ranks,
            ells,
            format,
            output,
        } => (commands::dckp_table(&ranks, &ells, format), output),
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.body, format_output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if outcome.falsified {
                eprintln!("falsified: a checked identity does not hold");
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

fn emit(body: &str, path: Option<&std::path::Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}
