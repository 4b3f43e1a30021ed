//! Command-line experiments on top of `qdiscrim-core`: channel files, CSV reports,
//! the verification battery and parallel drivers for the searches and simulations.

pub mod args;
pub mod channel_file;
pub mod commands;
pub mod error;
pub mod output;
pub mod verify;

use std::io::Write;

use args::{Cli, Command, RunConfig};
use error::CliError;

/// Executes a parsed command line. Human-readable progress goes to `log`.
pub fn run(cli: &Cli, log: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    if let Some(w) = cfg.workers {
        // A second call in the same process keeps the existing pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    let out = cfg.out.as_deref();
    match &cli.command {
        Command::Table => commands::cmd_table(cfg.published)?.emit(out)?,
        Command::Sweep => commands::cmd_sweep(&cfg)?.emit(out)?,
        Command::Optimize => commands::cmd_optimize(&cfg)?.emit(out)?,
        Command::Mc { pair } => commands::cmd_mc(&cfg, *pair)?.emit(out)?,
        Command::Info { budget } => commands::cmd_info(&cfg, *budget)?.emit(out)?,
        Command::Verify => {
            let checks = verify::run_battery(&cfg, |c| {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(log, "{mark} {:<30} {}", c.name, c.detail);
            })?;
            verify::checks_table(&checks, cfg.seed, cfg.quick).emit(out)?;
            let failed: Vec<&str> = checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name)
                .collect();
            if !failed.is_empty() {
                return Err(CliError::Verification(failed.join(", ")));
            }
            let _ = writeln!(log, "all {} checks passed", checks.len());
        }
    }
    Ok(())
}
