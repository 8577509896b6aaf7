use std::process::ExitCode;

use clap::Parser;
use discfact_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match discfact_cli::run(&cli) {
        Ok(summary) => {
            println!(
                "{}",
                serde_json::to_string(&summary).expect("summary serializes")
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
