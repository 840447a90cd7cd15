use std::process::ExitCode;

use akin_cli::{effective_config, execute, workers_from_env, Cli, CliError};
use clap::{CommandFactory, Parser};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = effective_config(&cli)
        .and_then(|cfg| Ok((cfg, workers_from_env()?)))
        .and_then(|(cfg, workers)| execute(&cfg, workers));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Usage(_) = e {
                eprintln!("{}", Cli::command().render_help());
            }
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
