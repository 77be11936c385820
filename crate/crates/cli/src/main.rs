//! `stratiflow` command-line interface.

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, ConservedCommand, HodographCommand, SimCommand};
use commands::{conserved, deform, hodograph, hyper, sim};
use config::ConfigFile;
use error::CliError;
use output::Output;

fn parse(argv: &[OsString]) -> Result<Cli, CliError> {
    Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            e.exit()
        }
        _ => CliError::Usage(e.to_string().trim().to_string()),
    })
}

/// Parses the command line, merging in the config file when one is given.
fn resolve() -> Result<Cli, CliError> {
    let raw: Vec<OsString> = std::env::args_os().collect();
    let cli = parse(&raw)?;
    let Some(path) = cli.config.clone() else {
        return Ok(cli);
    };
    let file = ConfigFile::load(&path)?;
    let mut argv = vec![raw[0].clone()];
    argv.extend(file.global_tokens());
    argv.extend(raw[1..].iter().cloned());
    if cli.command.is_none() {
        argv.extend(file.command_tokens(&path)?);
    }
    parse(&argv)
}

fn dispatch(cli: &Cli, out: &mut Output) -> Result<(), CliError> {
    let command = cli
        .command
        .as_ref()
        .ok_or_else(|| CliError::Usage("no command given (see --help)".into()))?;
    match command {
        Command::Conserved(ConservedCommand::Gen(a)) => conserved::generate(a, out),
        Command::Conserved(ConservedCommand::Verify(a)) => conserved::verify(a, out),
        Command::Deform(a) => deform::deform(a, out),
        Command::Hyper(a) => hyper::hyper(a, out),
        Command::Hodograph(HodographCommand::Run(a)) => hodograph::run(a, out),
        Command::Hodograph(HodographCommand::Curves(a)) => hodograph::curves(a, out),
        Command::Sim(SimCommand::Run(a)) => sim::run_sim(a, cli.seed, out),
    }
}

fn main_inner() -> Result<(), CliError> {
    let cli = resolve()?;
    if cli.command.is_none() {
        return Err(CliError::Usage("no command given (see --help)".into()));
    }
    let mut out = Output::new(&cli.out, cli.format)?;
    dispatch(&cli, &mut out)?;
    for path in out.written() {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
