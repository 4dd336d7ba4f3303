use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use orientalis::cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let outcome = Outcome::invalid(e.to_string().trim_end());
            println!("{}", outcome.report);
            return ExitCode::from(2);
        }
    };
    let outcome = run(cli, &mut std::io::stdin().lock());
    let mut stdout = std::io::stdout().lock();
    let written = match &outcome.raw {
        Some(raw) => stdout.write_all(raw.as_bytes()),
        None => writeln!(stdout, "{}", serde_json::to_string_pretty(&outcome.report).expect("json")),
    };
    if written.and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.code as u8)
}
