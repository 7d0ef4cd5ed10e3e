use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use tonemap_cli::{run, Args, CliConfig, EXIT_OK, EXIT_PARAMS};

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_PARAMS),
            };
        }
    };
    let result = CliConfig::from_args(args).and_then(|config| run(&config, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("wdr-tonemap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
