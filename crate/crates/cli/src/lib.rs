//! Command-line front end: loads instances, runs checks, and writes one
//! report schema for every subcommand.

pub mod args;
pub mod claims;
pub mod commands;
pub mod inputs;
pub mod suite;

use std::io::Write;

use anyhow::{Context, Result};
use clap::Parser;

pub use args::{Cli, Command, Format, Opts};
pub use commands::{run, Outcome};

/// Exit status for a report whose claims all pass.
pub const EXIT_PASS: i32 = 0;
/// Some claim failed.
pub const EXIT_FAIL: i32 = 1;
/// Malformed input or invalid parameters.
pub const EXIT_INPUT: i32 = 2;

/// Name of the library error variant behind `e`, if any.
fn error_kind(e: &anyhow::Error) -> Option<String> {
    e.chain().find_map(|c| c.downcast_ref::<intrinsic_holder::Error>()).map(|le| {
        let dbg = format!("{le:?}");
        dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
    })
}

fn render(outcome: &Outcome, format: Format) -> String {
    match format {
        Format::Json => outcome.report.render_json(),
        Format::Text => outcome.report.render_text(),
        Format::Csv => outcome.csv.clone().unwrap_or_else(|| {
            let mut s = String::from("name,paper_anchor,verdict\n");
            for c in &outcome.report.claims {
                s.push_str(&format!("{},{},{}\n", c.name, c.paper_anchor, if c.pass { "pass" } else { "fail" }));
            }
            s
        }),
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    let text = render(outcome, cli.opts.format);
    match &cli.opts.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("--out {}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing report"),
    }
}

/// Parse arguments, run, write the report; returns the process exit code.
pub fn main_with<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match run(&cli).and_then(|o| emit(&cli, &o).map(|_| o)) {
        Ok(o) => o,
        Err(e) => {
            match error_kind(&e) {
                Some(kind) => eprintln!("error [{kind}]: {e:#}"),
                None => eprintln!("error: {e:#}"),
            }
            return EXIT_INPUT;
        }
    };
    for c in outcome.report.failures() {
        eprintln!("FAIL {} [{}]", c.name, c.paper_anchor);
    }
    if outcome.report.all_pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
