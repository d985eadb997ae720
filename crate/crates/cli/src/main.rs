use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use torsion_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, text) = run(&cli, &mut std::io::stdin().lock());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
    ExitCode::from(code as u8)
}
