//! Command-line front end for `ipv-core`.
//!
//! [`run`] parses an argument vector, executes the mapped checks and writes
//! the reports. Exit codes: 0 when every report passes, 1 when any fails,
//! 2 when some are undecided and none fail, 3 on usage or domain errors.

pub mod args;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use ipv_core::report::{CheckReport, Verdict};
use ipv_core::Error;

pub use args::{Cli, Command, Format, Target, DEFAULT_PRECISION, PRECISION_ENV};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Smallest and largest accepted working precision in bits.
pub const PRECISION_RANGE: std::ops::RangeInclusive<u32> = 32..=1 << 16;

/// Exit code for a set of reports.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    match Verdict::combine(reports.iter().map(|r| r.status)) {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Undecided => EXIT_UNDECIDED,
    }
}

/// Runs with the precision default taken from `IPV_PRECISION`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var(PRECISION_ENV).ok().as_deref(), stdout, stderr)
}

/// Like [`run`], with the environment's precision default passed in.
pub fn run_with_env<I, T>(args: I, env_precision: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(stdout, "{}", e.render());
            return EXIT_PASS;
        }
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match execute(&cli, env_precision) {
        Ok(reports) => {
            for r in &reports {
                let _ = writeln!(stderr, "{}", output::summary(r));
            }
            match emit(&cli, &reports, stdout) {
                Ok(()) => exit_code(&reports),
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    EXIT_USAGE
                }
            }
        }
        Err(Error::Undecided(msg)) => {
            let _ = writeln!(stderr, "undecided: {msg}");
            EXIT_UNDECIDED
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Resolves precision (flag, then environment, then default) and runs the
/// command on a pool of the requested size.
fn execute(cli: &Cli, env_precision: Option<&str>) -> ipv_core::Result<Vec<CheckReport>> {
    let precision = match (cli.precision, env_precision) {
        (Some(p), _) => p,
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("{PRECISION_ENV}={s:?} is not a bit count")))?,
        (None, None) => DEFAULT_PRECISION,
    };
    if !PRECISION_RANGE.contains(&precision) {
        return Err(Error::Usage(format!(
            "precision {precision} outside {}..={}",
            PRECISION_RANGE.start(),
            PRECISION_RANGE.end()
        )));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Error::Usage("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| commands::execute(&cli.command, precision))
}

fn emit(cli: &Cli, reports: &[CheckReport], stdout: &mut dyn Write) -> Result<(), String> {
    let text = output::render(reports, cli.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}
