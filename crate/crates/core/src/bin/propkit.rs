use std::process::ExitCode;

use clap::Parser;
use propkit::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stderr = std::io::stderr();
    match run(cli, &mut stderr) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
