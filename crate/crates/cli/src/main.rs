use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use onofri_cli::config::{Cli, ExperimentConfig, OUT_DIR_ENV};
use onofri_cli::emit::to_json;
use onofri_cli::run::{run_command, Status, Summary};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let summary = match Cli::try_parse() {
        Ok(cli) => {
            let out_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
            match ExperimentConfig::from_cli(cli, out_dir.as_deref()) {
                Ok(config) => run_command(&config),
                Err(e) => Summary::failure(None, Status::InvalidInput, e.to_string()),
            }
        }
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or_default();
            let summary = Summary::failure(None, Status::InvalidInput, first.trim_start_matches("error: "));
            let _ = std::io::stdout().write_all(&to_json(&summary));
            return ExitCode::from(summary.exit_code as u8);
        }
    };
    if summary.status != Status::Ok {
        eprintln!("error: {}", summary.message);
    }
    let _ = std::io::stdout().write_all(&to_json(&summary));
    ExitCode::from(summary.exit_code as u8)
}
