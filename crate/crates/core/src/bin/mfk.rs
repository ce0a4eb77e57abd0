use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mfk_core::cli::{max_order_from_env, run_text, Command};

#[derive(Parser)]
#[command(name = "mfk", version, about = "Exact moving-frame computations on action specification files")]
struct Cli {
    #[command(subcommand)]
    cmd: Sub,
}

#[derive(Args)]
struct SpecArg {
    /// Action specification file.
    spec: PathBuf,
}

#[derive(Subcommand)]
enum Sub {
    /// Transversality, stabilization ranks and minimal-order check.
    Check(SpecArg),
    /// Prolonged coefficients of one generator.
    Prolong {
        #[arg(long = "gen")]
        generator: String,
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Maurer-Cartan matrix K.
    Mc(SpecArg),
    /// Commutators of the invariant derivations.
    Comm(SpecArg),
    /// Normal form of a normalized invariant.
    Rewrite {
        #[arg(long)]
        target: String,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Edge invariants and order-zero invariants.
    Edge(SpecArg),
    /// R, S and T syzygy records.
    Syz {
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        spec: SpecArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, path) = match cli.cmd {
        Sub::Check(s) => (Command::Check, s.spec),
        Sub::Prolong { generator, order, spec } => (Command::Prolong { generator, order }, spec.spec),
        Sub::Mc(s) => (Command::Mc, s.spec),
        Sub::Comm(s) => (Command::Comm, s.spec),
        Sub::Rewrite { target, spec } => (Command::Rewrite { target }, spec.spec),
        Sub::Edge(s) => (Command::Edge, s.spec),
        Sub::Syz { verify, spec } => (Command::Syz { verify }, spec.spec),
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(1);
        }
    };
    let report = run_text(&cmd, &text, max_order_from_env());
    // A closed stdout pipe is not worth a panic.
    let _ = std::io::stdout().write_all(report.out.as_bytes());
    let _ = std::io::stderr().write_all(report.err.as_bytes());
    ExitCode::from(report.code as u8)
}
