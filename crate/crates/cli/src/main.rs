mod args;
mod commands;
mod render;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::Result;
use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};

const EXIT_PRECONDITION: u8 = 1;
const EXIT_MALFORMED: u8 = 3;

fn run(cli: &Cli) -> Result<commands::Rendered> {
    match &cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Certify(a) => commands::certify(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Verify(a) => commands::verify(a, cli.seed),
        Command::Regress => commands::regress(),
        Command::Beta(a) => commands::beta(a),
        Command::Report(a) => commands::report(a, cli.seed),
    }
}

fn emit(cli: &Cli, out: &commands::Rendered) -> Result<()> {
    let mut body = match cli.format {
        Format::Json => out.json.clone(),
        Format::Text => out.text.clone(),
    };
    body.push('\n');
    match &cli.output {
        Some(path) => fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<expobasis::Error>() {
        Some(expobasis::Error::MalformedJson { .. }) => EXIT_MALFORMED,
        _ => EXIT_PRECONDITION,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_PRECONDITION),
            };
        }
    };
    let rendered = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code_for(&e));
        }
    };
    if let Err(e) = emit(&cli, &rendered) {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_PRECONDITION);
    }
    if rendered.status == commands::EXIT_VERIFICATION {
        for line in &rendered.diagnostics {
            eprintln!("{line}");
        }
        eprintln!("verification failed");
    }
    ExitCode::from(rendered.status)
}
