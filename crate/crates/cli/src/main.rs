use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use fujita_cli::envelope::Status;
use fujita_cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            // usage errors must not collide with the "interval" exit code 2
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Status::Error.code()),
            };
        }
    };
    // overflow panics become error envelopes in `run`
    std::panic::set_hook(Box::new(|_| {}));
    let report = run(&cli);
    if report.status == Status::Error && !cli.structured {
        if let fujita_cli::envelope::Outcome::Error { message } = &report.envelope.outcome {
            eprintln!("error: {message}");
        } else {
            print!("{}", render(&cli, &report));
        }
    } else {
        print!("{}", render(&cli, &report));
    }
    let _ = std::io::stdout().flush();
    ExitCode::from(report.status.code())
}
