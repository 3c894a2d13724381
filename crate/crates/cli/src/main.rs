mod commands;
mod error;
mod input;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Ctx, Report};
use error::{pre, CliError};

#[derive(Parser, Debug)]
#[command(name = "kll", version, about = "Exact checks for largeness criteria of arithmetic Kleinian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON input file for the command.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for parallel enumeration.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Enumeration cap; its unit depends on the command.
    #[arg(long, global = true, env = "KLL_BUDGET")]
    budget: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Signature, discriminant and prime splitting of a number field.
    Field(commands::FieldArgs),
    /// Ramification of a quaternion algebra.
    Algebra(commands::AlgebraArgs),
    /// Trace identities, the order R[1, a, b, ab] and the Jorgensen involution.
    Order(commands::OrderArgs),
    /// Singular-locus strata and mod p homology bounds of an orbifold.
    Orbifold(commands::OrbifoldArgs),
    /// Short cycles and small b1 = 2 subgraphs of trivalent graphs.
    Graph(commands::GraphArgs),
    /// Homology tower recurrence and lower bounds.
    Tower(commands::TowerArgs),
    /// Surjectivity onto products of PSL(2, q) and Klein four normalizers.
    Quotient(commands::QuotientArgs),
    /// Exact Cheeger constants and spectral bounds.
    Cheeger(commands::CheegerArgs),
    /// Subgroup census of SL(2, Z/m) or SL(2, F_q).
    Count(commands::CountArgs),
    /// Run a corpus of worked examples (a built-in one by default).
    Verify,
}

fn emit(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| pre(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| pre(e.to_string()))
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(pre("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(pre)?;
    }
    let ctx = Ctx { input: cli.input.clone(), budget: cli.budget };
    let report = match cli.command {
        Command::Field(a) => commands::field(&ctx, a)?,
        Command::Algebra(a) => commands::algebra(&ctx, a)?,
        Command::Order(a) => commands::order(&ctx, a)?,
        Command::Orbifold(a) => commands::orbifold(&ctx, a)?,
        Command::Graph(a) => commands::graph(&ctx, a)?,
        Command::Tower(a) => commands::tower(&ctx, a)?,
        Command::Quotient(a) => commands::quotient(&ctx, a)?,
        Command::Cheeger(a) => commands::cheeger(&ctx, a)?,
        Command::Count(a) => commands::count(&ctx, a)?,
        Command::Verify => {
            let (source, text) = match &cli.input {
                Some(p) => (p.display().to_string(), std::fs::read_to_string(p).map_err(|e| pre(format!("{}: {e}", p.display())))?),
                None => ("built-in corpus".to_string(), verify::DEFAULT_CORPUS.to_string()),
            };
            let (out, failed) = verify::verify(&source, &text)?;
            if let Some(w) = out["warning"].as_str() {
                eprintln!("warning: {w}");
            }
            emit(cli.output.as_ref(), &json_text(&out))?;
            return if failed == 0 { Ok(()) } else { Err(CliError::Verify(failed)) };
        }
    };
    match report {
        Report::Json(v) => emit(cli.output.as_ref(), &json_text(&v)),
        Report::Csv(s) => emit(cli.output.as_ref(), &s),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if !matches!(e, CliError::Verify(_)) {
                eprintln!("{}", serde_json::to_string(&e.to_json()).expect("values serialize"));
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
