//! Command implementations behind the `zernike` binary.

pub mod args;
pub mod commands;
pub mod report;

pub use args::{Cli, Command};

use zernike_core::Result;

/// Runs one parsed command, printing a short summary to stderr.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Compute(a) => {
            let sets = commands::cmd_compute(a)?;
            eprintln!(
                "wrote {} band(s), {} coefficients each, to {}",
                sets.len(),
                sets[0].coefficients().len(),
                a.output.display()
            );
        }
        Command::Reconstruct(a) => {
            let s = commands::cmd_reconstruct(a)?;
            if s.normalized {
                eprintln!("reconstructed {} band(s) up to order {}, normalized to stored band range", s.bands, s.order_cap);
            } else {
                eprintln!(
                    "reconstructed {} band(s) up to order {}, not normalized: raw values scaled to 0..255 for inspection",
                    s.bands, s.order_cap
                );
            }
        }
        Command::Roundtrip(a) => {
            let rows = commands::cmd_roundtrip(a)?;
            eprintln!("{} rows", rows.len());
        }
        Command::Stability(a) => {
            let rows = commands::cmd_stability(a)?;
            eprintln!("{} rows", rows.len());
        }
        Command::Bench(a) => {
            let rows = commands::cmd_bench(a)?;
            eprintln!("{} rows", rows.len());
        }
        Command::Dedup(a) => {
            let r = commands::cmd_dedup(a)?;
            eprintln!(
                "{} images, {} duplicate group(s), {} skipped",
                r.stats.images,
                r.groups.len(),
                r.skipped.len()
            );
        }
        Command::Synth(a) => {
            let (paths, pairs) = commands::cmd_synth(a)?;
            eprintln!("wrote {} image(s)", paths.len());
            for (x, y) in pairs {
                println!("{}\t{}", paths[x].display(), paths[y].display());
            }
        }
    }
    Ok(())
}
