use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cache::Cache;
use crate::commands::{a2, bounds, dim, induced, sweep};
use crate::config::{Config, ConfigError, RawConfig};
use crate::output::{Outputs, Verdict};

#[derive(Debug, Parser)]
#[command(name = "repeller-lab", version, about = "Dimension and bound experiments for maps with holes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Switch::On)]
    pub cache: Switch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Box dimension of the survivor set over the mu grid.
    Dim,
    /// Exact combinatorial and analytic bound checks.
    Bounds,
    /// Bad-set volume against delta(n).
    A2,
    /// Expansion and hole volume of the induced map.
    Induced,
    /// All of the above, one subdirectory each.
    SweepAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dim => "dim",
            Command::Bounds => "bounds",
            Command::A2 => "a2",
            Command::Induced => "induced",
            Command::SweepAll => "sweep-all",
        }
    }
}

fn label(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Advisory => "PASS (advisory)",
        Verdict::Violation => "FAIL",
    }
}

fn compute(command: Command, cfg: &Config, out: &mut Outputs) -> anyhow::Result<Verdict> {
    match command {
        Command::Dim => dim::write_dim(&dim::run_dim(cfg)?, out),
        Command::Bounds => {
            let report = bounds::run_bounds(cfg)?;
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("  {} ({:?}): {} of {} cells fail", c.check, c.class, c.failures.len(), c.checked);
            }
            bounds::write_bounds(&report, cfg, out)
        }
        Command::A2 => a2::write_a2(&a2::run_a2(cfg)?, out),
        Command::Induced => induced::write_induced(&induced::run_induced(cfg)?, cfg, out),
        Command::SweepAll => unreachable!("sweep-all has no outputs of its own"),
    }
}

/// Runs one command into `dir`, going through the cache.
pub fn execute(command: Command, cfg: &Config, dir: &Path, cache: &Cache) -> anyhow::Result<Verdict> {
    if command == Command::SweepAll {
        return sweep::run_sweep(cfg, dir, cache);
    }
    let key = cfg.hash(command.name());
    let start = Instant::now();
    let verdict = match cache.fetch(command.name(), &key, dir)? {
        Some((v, _)) => {
            eprintln!("{}: cache hit {key}", command.name());
            v
        }
        None => {
            let mut out = Outputs::new(dir, command.name(), cfg)?;
            let v = compute(command, cfg, &mut out)?;
            cache.store(command.name(), &key, dir, &out.files, v)?;
            v
        }
    };
    eprintln!("{}: {:.2} s", command.name(), start.elapsed().as_secs_f64());
    println!("{} {} {}", label(verdict), command.name(), dir.display());
    Ok(verdict)
}

pub fn load_config(path: Option<&Path>, seed: Option<u64>) -> anyhow::Result<Config> {
    let raw = match path {
        Some(p) => RawConfig::load(p)?,
        None => RawConfig::default(),
    };
    Ok(Config::resolve(raw)?.with_seed(seed))
}

/// Parses the arguments, runs the command and returns the exit code:
/// 0 for pass or advisory, 1 for a violated bound, 2 for configuration and
/// other errors.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match run_cli(&cli) {
        Ok(v) => v.exit_code(),
        Err(e) => {
            if e.is::<ConfigError>() {
                eprintln!("{e}");
            } else {
                eprintln!("error: {e:#}");
            }
            2
        }
    }
}

pub fn run_cli(cli: &Cli) -> anyhow::Result<Verdict> {
    let cfg = load_config(cli.config.as_deref(), cli.seed)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build()?;
    let cache = Cache::new(cli.cache == Switch::On, &cli.out);
    pool.install(|| execute(cli.command, &cfg, &cli.out, &cache))
}
