use std::process::ExitCode;

use clap::Parser;
use idealab::args::Cli;
use idealab::report::EXIT_INPUT;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    match idealab::execute(&cli, &argv, &|k| std::env::var(k).ok()) {
        Ok((report, text)) => {
            if cli.common.out.is_none() {
                print!("{text}");
            }
            ExitCode::from(report.exit as u8)
        }
        Err(e) => {
            eprintln!("idealab: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
