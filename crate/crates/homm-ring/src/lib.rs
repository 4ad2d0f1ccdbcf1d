//! Command-line front end for the ring resonator HOMM model.
//!
//! Every subcommand produces one table written as CSV or JSON. Exit status is
//! 0 on success, 1 on a usage or configuration error and 2 when emitted rows
//! fail physics validation.

pub mod commands;
pub mod config;
pub mod output;
pub mod parallel;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::Parser;

pub use commands::{run, CommandError, Outcome, Subcommand};
pub use config::SweepConfig;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for usage and configuration errors.
pub const EXIT_CONFIG: i32 = 1;
/// Exit status for physics-validation failures.
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "homm-ring", version, about = "Hong-Ou-Mandel manifolds of a dual-coupled ring resonator")]
pub struct Cli {
    /// Dataset to produce.
    #[arg(value_enum)]
    pub command: Subcommand,
    /// Flat key=value config file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub sweep: SweepConfig,
}

/// Parses `args`, runs the subcommand, writes the dataset to `--out` or
/// `stdout`, and returns the process exit status.
pub fn execute<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute_cli(cli, stdout, stderr) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_CONFIG
        }
    }
}

fn execute_cli(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, String> {
    let file_cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("reading {}: {e}", path.display()))?;
            SweepConfig::parse_file(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => SweepConfig::default(),
    };
    let cfg = cli.sweep.or(file_cfg);
    let threads = parallel::threads_from_env()?;
    let outcome = parallel::with_pool(threads, || run(cli.command, &cfg))?
        .map_err(|e| e.to_string())?;

    let format = cfg.format.unwrap_or_default();
    let written = match &cfg.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            outcome.table.write(format, &mut w)?;
            w.flush()
        }),
        None => write_to(&outcome, format, stdout),
    };
    match written {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
        other => other.map_err(|e| format!("writing output: {e}"))?,
    }

    for note in &outcome.notes {
        let _ = writeln!(stderr, "{note}");
    }
    Ok(if outcome.validation_failures > 0 {
        EXIT_VALIDATION
    } else {
        EXIT_OK
    })
}

fn write_to(outcome: &Outcome, format: output::Format, out: &mut dyn Write) -> io::Result<()> {
    let mut w = BufWriter::new(out);
    outcome.table.write(format, &mut w)?;
    w.flush()
}
