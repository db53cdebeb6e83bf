use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sts_core::cover::SearchMode;
use stskit::commands::{
    cmd_certify, cmd_construct, cmd_enumerate, cmd_search_pc, cmd_verify, SearchArgs,
};
use stskit::format::FileFormat;

/// Build, check, and search Steiner triple systems from a family that
/// admits no parallel class.
#[derive(Parser)]
#[command(name = "stskit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the supported orders up to a bound
    Enumerate {
        /// Largest order to consider
        bound: u64,
    },
    /// Build the system for an order and write it to a file
    Construct {
        /// Number of points; must be a supported order
        v: u64,
        /// Where to write the system
        #[arg(short, long)]
        output: PathBuf,
        /// File flavor to emit
        #[arg(long, value_enum, default_value_t = FormatArg::Structured)]
        format: FormatArg,
    },
    /// Check a system file for the exact pair-coverage property
    Verify {
        /// System file to check
        input: PathBuf,
        /// Also check the weight premises (needs a structured file)
        #[arg(long)]
        weights: bool,
        /// Also check the extra-point coloring premises (needs a structured file)
        #[arg(long)]
        gamma: bool,
    },
    /// Build a system and write its premise certificate
    Certify {
        /// Number of points; must be a supported order
        v: u64,
        /// Where to write the certificate
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Search a system file for a parallel class
    SearchPc {
        /// System file to search
        input: PathBuf,
        /// What to ask of the search
        #[arg(long, value_enum, default_value_t = ModeArg::Find)]
        mode: ModeArg,
        /// Wall-clock budget in seconds; must be positive
        #[arg(long)]
        timeout_secs: Option<u64>,
        /// Split the top search level across threads
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// Header and bare index triples
    Text,
    /// Adds group metadata comments and family tags
    Structured,
}

impl From<FormatArg> for FileFormat {
    fn from(arg: FormatArg) -> FileFormat {
        match arg {
            FormatArg::Text => FileFormat::Text,
            FormatArg::Structured => FileFormat::Structured,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Stop at the first parallel class
    Find,
    /// Count every parallel class
    Count,
    /// Establish that no parallel class exists
    ProveNone,
}

impl From<ModeArg> for SearchMode {
    fn from(arg: ModeArg) -> SearchMode {
        match arg {
            ModeArg::Find => SearchMode::FindOne,
            ModeArg::Count => SearchMode::CountAll,
            ModeArg::ProveNone => SearchMode::ProveNone,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = match cli.command {
        Command::Enumerate { bound } => cmd_enumerate(bound, &mut out),
        Command::Construct { v, output, format } => {
            cmd_construct(v, &output, format.into(), &mut out, &mut err)
        }
        Command::Verify {
            input,
            weights,
            gamma,
        } => cmd_verify(&input, weights, gamma, &mut out, &mut err),
        Command::Certify { v, output } => cmd_certify(v, &output, &mut out, &mut err),
        Command::SearchPc {
            input,
            mode,
            timeout_secs,
            parallel,
        } => {
            let args = SearchArgs {
                mode: mode.into(),
                timeout_secs,
                parallel,
            };
            cmd_search_pc(&input, &args, &mut out, &mut err)
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
