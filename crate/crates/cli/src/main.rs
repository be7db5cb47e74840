use std::process::ExitCode;

use acf_cli::args::Cli;
use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = cli.into_config();
    match acf_cli::run(&config) {
        Ok(outcome) => {
            println!("{}: {} files in {}", config.command.name(), outcome.files.len(), outcome.dir.display());
            if !outcome.passed {
                eprintln!("{}: check failed", config.command.name());
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
