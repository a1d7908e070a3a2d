use std::path::Path;

use crate::cli::{execute, Command};
use crate::config::Config;
use crate::output::Verdict;

/// Every command the family supports, each into its own subdirectory.
/// The verdict is the worst of the parts.
pub fn run_sweep(cfg: &Config, out: &Path, cache: &crate::cache::Cache) -> anyhow::Result<Verdict> {
    let mut commands = vec![Command::Dim, Command::Bounds];
    if cfg.family != crate::config::Family::Hopf3d {
        commands.extend([Command::A2, Command::Induced]);
    }
    let mut worst = Verdict::Pass;
    for c in commands {
        let v = execute(c, cfg, &out.join(c.name()), cache)?;
        eprintln!("{}: {v:?}", c.name());
        worst = worst.max(v);
    }
    Ok(worst)
}
