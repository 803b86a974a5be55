mod args;
mod commands;
mod error;
mod manifest;
mod reproduce;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::{Outcome, Session};
use error::{CliError, CliResult};
use manifest::{sha256_hex, RunManifest};

fn dispatch(cli: &Cli, session: &mut Session) -> CliResult<Outcome> {
    match &cli.command {
        Command::Construct(c) => commands::construct(session, c),
        Command::Verify(v) => commands::verify(session, v),
        Command::Invariants { input } => commands::invariants(session, input),
        Command::Classify(c) => commands::classify(session, c),
        Command::Equiv(a) => commands::equiv(session, a),
        Command::Isotopy(a) => commands::isotopy(session, a),
        Command::Dual { input } => commands::dual(session, input),
        Command::Symmetric(s) => commands::symmetric(session, s),
        Command::Reproduce { claim } => {
            let (pass, detail) = reproduce::run(claim).ok_or_else(|| {
                CliError::Usage(format!("unknown claim {claim:?}; known: {}", reproduce::CLAIMS.join(", ")))
            })??;
            let verdict = if pass { "PASS" } else { "FAIL" };
            Ok(Outcome { text: format!("{verdict} {claim}: {detail}\n"), pass, resume: None })
        }
    }
}

fn run(argv: Vec<String>) -> CliResult<bool> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(true);
        }
        Err(e) => return Err(CliError::Usage(e.render().to_string().trim().to_string())),
    };
    if cli.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", cli.workers)))?;

    let start = Instant::now();
    let mut session = Session::default();
    let outcome = dispatch(&cli, &mut session)?;
    match &cli.out {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|source| CliError::Write { path: path.clone(), source })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth reporting.
            let _ = stdout.write_all(outcome.text.as_bytes());
        }
    }
    if let Some(path) = &cli.manifest {
        let complete = outcome.resume.is_none();
        let m = RunManifest {
            command: argv,
            inputs: session.inputs,
            version: env!("CARGO_PKG_VERSION").to_string(),
            field_moduli: session.fields,
            elapsed_ms: start.elapsed().as_millis() as u64,
            status: match (complete, outcome.pass) {
                (false, _) => "interrupted",
                (true, true) => "pass",
                (true, false) => "fail",
            }
            .to_string(),
            result_sha256: complete.then(|| sha256_hex(outcome.text.as_bytes())),
            resume: outcome.resume,
        };
        m.write(path)?;
    }
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
