//! `fermat` — classify, construct, and verify entire solutions of quadratic
//! trinomial Fermat-type functional equations.
//!
//! Exit codes: 0 ok, 1 parse error, 2 hypothesis violation, 3 outside the
//! classified solution families.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fermat_cli::commands::{cmd_classify, cmd_construct, cmd_verify};
use fermat_cli::corpus::{render_json, render_table, run_corpus};
use fermat_cli::error::CliError;
use fermat_cli::problem::parse_branch;

#[derive(Parser)]
#[command(
    name = "fermat",
    version,
    about = "Classify, construct and verify entire solutions of quadratic trinomial Fermat-type functional equations",
    after_help = "The tolerance (default 1e-9 relative) can be overridden with the FERMAT_EP_TOL environment variable."
)]
struct Cli {
    /// Emit machine-readable JSON instead of aligned text
    #[arg(long, global = true)]
    json: bool,
    /// Upper bound n for the q^n != ±1 hypothesis scan
    #[arg(long, global = true, default_value_t = 64)]
    n_max: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report derived quantities and the solution-family case of a problem
    Classify { file: PathBuf },
    /// Substitute the file's candidate f into the equation and report the
    /// residual verdict
    Verify { file: PathBuf },
    /// Construct the closed-form candidate for the file's case
    Construct {
        file: PathBuf,
        /// Constant branch for the A2 = 0 case: viaA3 or viaA1
        #[arg(long)]
        branch: Option<String>,
    },
    /// Run the bundled corpus of worked problems
    Corpus,
}

fn apply_tolerance_env() -> Result<(), CliError> {
    if let Ok(text) = std::env::var("FERMAT_EP_TOL") {
        let eps: f64 = text
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("FERMAT_EP_TOL: invalid tolerance {text:?}")))?;
        if !(eps.is_finite() && eps > 0.0) {
            return Err(CliError::Parse(
                "FERMAT_EP_TOL must be a positive finite number".into(),
            ));
        }
        fermat_core::set_tolerance(fermat_core::Tolerance::from_eps(eps));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    apply_tolerance_env()?;
    match cli.command {
        Command::Classify { file } => {
            let out = cmd_classify(&file, cli.n_max)?;
            print_report(&out.report, cli.json);
            Ok(out.exit_code)
        }
        Command::Verify { file } => {
            let out = cmd_verify(&file, cli.n_max)?;
            print_report(&out.report, cli.json);
            Ok(out.exit_code)
        }
        Command::Construct { file, branch } => {
            let branch = branch.as_deref().map(parse_branch).transpose()?;
            let out = cmd_construct(&file, branch, cli.n_max)?;
            print_report(&out.report, cli.json);
            Ok(out.exit_code)
        }
        Command::Corpus => {
            let rows = run_corpus(cli.n_max)?;
            if cli.json {
                println!("{:#}", render_json(&rows));
            } else {
                print!("{}", render_table(&rows));
            }
            Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 })
        }
    }
}

fn print_report(report: &fermat_cli::Report, json: bool) {
    if json {
        println!("{:#}", report.render_json());
    } else {
        print!("{}", report.render_human());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
