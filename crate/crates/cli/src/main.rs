use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use conezeta_core::pipeline::{run, JobSpec};
use conezeta_core::Error;

#[derive(Parser, Debug)]
#[command(name = "conezeta", version, about = "Cone zeta values as cyclotomic multiple zeta values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Verification tolerance is 10^-digits (overrides the job).
    #[arg(long, global = true, value_name = "digits")]
    precision: Option<u32>,
    /// Write the reduction trace to this file.
    #[arg(long, global = true, value_name = "path")]
    trace: Option<PathBuf>,
    #[arg(long, global = true, value_name = "u64")]
    seed: Option<u64>,
    #[arg(long, global = true, value_name = "n")]
    max_pieces: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a job to a cyclotomic MZV expression.
    Reduce { job: PathBuf },
    /// Reduce and compare with direct summation.
    Verify { job: PathBuf },
}

fn exit_code(e: &Error) -> u8 {
    match e.code() {
        "DIVERGENT" => 4,
        "VALIDATION" | "POSITIVITY" | "PARSE" | "BUDGET" => 3,
        _ => 1,
    }
}

fn error_json(e: &Error) -> String {
    serde_json::json!({ "error": { "code": e.code(), "message": e.to_string() } }).to_string()
}

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let (path, verify) = match &cli.command {
        Command::Reduce { job } => (job, false),
        Command::Verify { job } => (job, true),
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut spec = match JobSpec::from_json(&text) {
        Ok(s) => s,
        Err(e) => {
            println!("{}", error_json(&e));
            eprintln!("error: {e}");
            return Ok(ExitCode::from(exit_code(&e)));
        }
    };
    if let Some(p) = cli.precision {
        spec.options.precision = p;
    }
    if let Some(s) = cli.seed {
        spec.options.seed = s;
    }
    if let Some(m) = cli.max_pieces {
        spec.options.max_pieces = m;
    }
    if cli.trace.is_some() {
        spec.options.trace = true;
    }

    let start = Instant::now();
    let mut report = match run(&spec, verify) {
        Ok(r) => r,
        Err(e) => {
            println!("{}", error_json(&e));
            eprintln!("error: {e}");
            return Ok(ExitCode::from(exit_code(&e)));
        }
    };
    // timing goes to stderr so that reports stay byte-identical across runs
    eprintln!("elapsed: {:.3} s, pieces: {}", start.elapsed().as_secs_f64(), report.stats.pieces);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(tp) = &cli.trace {
        let trace = report.trace.take().unwrap_or_default();
        std::fs::write(tp, serde_json::to_string_pretty(&trace)?).with_context(|| format!("writing {}", tp.display()))?;
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    let pass = report.verification.as_ref().map_or(true, |v| v.pass);
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
}
