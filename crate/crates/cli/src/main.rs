use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use descent_loewy::coxeter::Family;
use descent_loewy::descent::Method;
use descent_loewy_cli::{
    cmd_loewy, cmd_orbits, cmd_quiver, cmd_verify, export_report, CliError, CliResult, Options, Outcome,
    QuiverOptions, Suite,
};

#[derive(Parser)]
#[command(name = "descent-loewy", version, about = "Loewy lengths, quivers and verification suites for descent algebras of types A, B and D")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for the parallel kernels.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Allow runs on groups with more than 100000 elements.
    #[arg(long, global = true)]
    long_running: bool,

    /// Construction of the descent algebra: pullback or group-direct.
    #[arg(long, global = true)]
    method: Option<Method>,

    /// Write the report (without timing) as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Loewy length and radical filtration of the descent algebra.
    Loewy { family: Family, rank: usize },
    /// Run a verification suite: semigroup, idempotents, antiiso, phi, lemmas or all.
    Verify { suite: String, family: Family, rank: usize },
    /// The quiver of the face semigroup algebra or of its invariants.
    Quiver {
        family: Family,
        rank: usize,
        /// Quiver of the invariant subalgebra, one vertex per orbit.
        #[arg(long)]
        invariant: bool,
        /// Write the quiver in DOT format.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Classes of conjugate parabolic subgroups.
    Orbits { family: Family, rank: usize },
}

fn run(cli: Cli) -> CliResult<Outcome> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let opts = Options {
        long_running: cli.long_running,
        cap: Options::cap_from_env()?,
        method: cli.method,
    };
    let outcome = match cli.command {
        Command::Loewy { family, rank } => cmd_loewy(family, rank, &opts)?,
        Command::Verify { suite, family, rank } => cmd_verify(suite.parse::<Suite>()?, family, rank, &opts)?,
        Command::Quiver {
            family,
            rank,
            invariant,
            dot,
        } => {
            let q = QuiverOptions {
                invariant,
                dot,
                json: cli.json.clone(),
            };
            return cmd_quiver(family, rank, &opts, &q);
        }
        Command::Orbits { family, rank } => cmd_orbits(family, rank, &opts)?,
    };
    if let Some(p) = &cli.json {
        export_report(&outcome, p)?;
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(outcome) => {
            // a closed pipe on stdout is not an error of the run
            let mut out = std::io::stdout().lock();
            let _ = write!(out, "{}", outcome.text);
            let _ = writeln!(out, "{}", serde_json::to_string(&outcome.report).expect("reports serialize"));
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed: {}", outcome.first_failure.unwrap_or_default());
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("descent-loewy: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
