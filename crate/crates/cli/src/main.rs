use std::io;
use std::process::ExitCode;

use clap::Parser;
use uiml_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = uiml_cli::run(cli, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code)
}
