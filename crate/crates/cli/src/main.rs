use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use langton_cli::flags::parse_types;
use langton_cli::problem::RowsFile;
use langton_cli::{cmd_check, cmd_count_flags, cmd_fuzz, cmd_run, cmd_verify, exit, CapsFile, CliError, ProblemFile, TraceFile};
use langton_core::gen::InstanceParams;

#[derive(Parser)]
#[command(name = "langton", version, about = "Semistable reduction of multi-filtered vector spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report weight, slope and semistability of the reduction.
    Check(ProblemArgs),
    /// Modify the lattice until its reduction is semistable and emit the trace.
    Run {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Write the trace here instead of stdout.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Re-check a trace against its problem.
    Verify {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Count semistable points of flag varieties over F_q, as CSV.
    CountFlags {
        /// Comma-separated primes q.
        #[arg(long, alias = "q", value_delimiter = ',', required = true)]
        prime: Vec<u64>,
        /// Type file: one type object or a list of them.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        enum_cap: u64,
    },
    /// Run and verify random instances.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Override the problem's prime.
    #[arg(long)]
    prime: Option<u64>,
    /// Starting lattice: a JSON list of basis vectors.
    #[arg(long)]
    lattice: Option<PathBuf>,
    #[arg(long)]
    enum_cap: Option<u64>,
    #[arg(long)]
    lift_cap: Option<u32>,
    #[arg(long)]
    max_iter: Option<u64>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

impl ProblemArgs {
    /// The problem file with command-line overrides applied.
    fn load(&self) -> Result<ProblemFile, CliError> {
        let mut file = ProblemFile::from_json(&read(&self.input)?)?;
        if let Some(p) = self.prime {
            file.p = p;
        }
        if let Some(path) = &self.lattice {
            let rows: RowsFile = serde_json::from_str(&read(path)?).map_err(|e| CliError::Parse(format!("lattice: {e}")))?;
            file.lattice = Some(rows);
        }
        let flags = CapsFile { enum_cap: self.enum_cap, lift_cap: self.lift_cap, max_iter: self.max_iter };
        file.caps = file.caps.overridden_by(&flags);
        Ok(file)
    }
}

fn steps(n: usize) -> String {
    if n == 1 {
        "1 step".into()
    } else {
        format!("{n} steps")
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Check(args) => {
            let report = cmd_check(&args.load()?.parse()?)?;
            println!("{report}");
        }
        Command::Run { problem, trace_out } => {
            let trace = cmd_run(&problem.load()?)?;
            let json = trace.to_json();
            match trace_out {
                Some(path) => {
                    fs::write(&path, json + "\n")?;
                    eprintln!("{}, trace written to {}", steps(trace.steps.len()), path.display());
                }
                None => println!("{json}"),
            }
        }
        Command::Verify { problem, trace } => {
            let trace = TraceFile::from_json(&read(&trace)?)?;
            cmd_verify(&problem.load()?, &trace)?;
            println!("ok: {} verified", steps(trace.steps.len()));
        }
        Command::CountFlags { prime, input, enum_cap } => {
            let types = parse_types(&read(&input)?)?;
            print!("{}", cmd_count_flags(&prime, &types, enum_cap.into())?);
        }
        Command::Fuzz { seed, count } => {
            let report = cmd_fuzz(seed, count, &InstanceParams::default())?;
            println!("{report}");
            if !report.failures.is_empty() {
                return Err(CliError::Failed(format!("{} fuzz failures", report.failures.len())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
