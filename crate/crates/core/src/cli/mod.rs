//! Command-line front end: parse a [`RunConfig`], run it, write the rows.
//!
//! Exit status is 0 on success, 1 on a usage error and 2 on a numerical or
//! I/O failure. Failed cells are still written, carrying the best partial
//! estimate and the error message.

pub mod config;
pub mod emit;
pub mod run;

pub use config::{parse_config, parse_config_with, Command, ConventionChoice, Format, Geometry, MethodChoice, ModeChoice, ParseOutcome, RunConfig};
pub use emit::{emit, format_number, from_json, to_csv, to_json, EmitError, ResultRow, CSV_HEADER};
pub use run::execute;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Run the CLI on `argv` (without the program name) and return the exit
/// status.
pub fn main_with_args(argv: &[String]) -> i32 {
    let config = match parse_config(argv) {
        Ok(c) => c,
        Err(ParseOutcome::Info(text)) => {
            print!("{text}");
            return EXIT_OK;
        }
        Err(ParseOutcome::Usage(msg)) => {
            let msg = msg.trim_end();
            eprintln!("{}", if msg.starts_with("error:") { msg.to_string() } else { format!("error: {msg}") });
            return EXIT_USAGE;
        }
    };
    let rows = execute(&config);
    if let Err(e) = emit(&rows, config.format, config.output.as_deref()) {
        eprintln!("error: {e}");
        return EXIT_FAILURE;
    }
    let mut status = EXIT_OK;
    for r in rows.iter().filter(|r| r.failure.is_some()) {
        let at = match (r.b_over_c, r.cos_theta) {
            (Some(b), Some(c)) => format!(" at b/c = {b}, cos = {c}"),
            _ => String::new(),
        };
        let failure = r.failure.as_deref().unwrap_or_default();
        let excluded = failure.starts_with(run::EXCLUDED_PREFIX);
        eprintln!(
            "{}: {} {} {}{at}: {}",
            if excluded { "note" } else { "error" },
            r.command,
            r.method,
            r.mode,
            failure
        );
        if !excluded {
            status = EXIT_FAILURE;
        }
    }
    status
}
