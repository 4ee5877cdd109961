use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use stirconv_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut err = io::stderr().lock();
    let code = run(&cli, &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
