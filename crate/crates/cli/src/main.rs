use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use sympovm_cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|(report, passed)| Ok((render(&report, cli.format)?, passed)));
    match outcome {
        Ok((text, passed)) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(io::stdout().lock(), "{}", text.trim_end());
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
