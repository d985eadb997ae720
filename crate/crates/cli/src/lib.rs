//! Command-line front end for `torsion-core`: JSON documents, command dispatch
//! and report rendering.
//!
//! Exit status is 0 when every check passes, 1 when a check fails, and 2 on
//! usage, parse or module errors.

pub mod commands;
pub mod document;
pub mod output;

pub use commands::{execute, Cli, CliError};
pub use document::{parse_document, serialize, Document, DocumentError};
pub use output::{write_report, Format, Output, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Runs a parsed command line and returns `(exit code, stdout text)`.
pub fn run(cli: &Cli, stdin: &mut dyn std::io::Read) -> (i32, String) {
    match execute(cli, stdin) {
        Ok(out) => {
            let code = if out.passed() {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILURE
            };
            (code, write_report(&out, cli.format))
        }
        Err(e) => {
            let text = match cli.format {
                Format::Json => {
                    let mut s =
                        serde_json::to_string_pretty(&e.to_value()).expect("values serialize");
                    s.push('\n');
                    s
                }
                Format::Human => format!("error: {e}\n"),
            };
            (EXIT_ERROR, text)
        }
    }
}
