use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Raised for anything wrong with the configuration; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Hopf2d,
    Hopf3d,
    Tripling,
    DiazViana,
    Conformal,
}

impl Family {
    pub fn dimension(self) -> usize {
        match self {
            Family::Hopf2d | Family::Conformal => 2,
            Family::Hopf3d => 3,
            Family::Tripling | Family::DiazViana => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Hopf2d => "hopf2d",
            Family::Hopf3d => "hopf3d",
            Family::Tripling => "tripling",
            Family::DiazViana => "diaz-viana",
            Family::Conformal => "conformal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// The file format: flat keys, all optional, plus `include`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub include: Option<PathBuf>,
    pub family: Option<Family>,
    pub mu: Option<f64>,
    pub mus: Option<Vec<f64>>,
    pub mu_start: Option<f64>,
    pub mu_stop: Option<f64>,
    pub mu_count: Option<usize>,
    pub mu_spacing: Option<Spacing>,
    pub sigma: Option<f64>,
    pub delta0: Option<f64>,
    pub delta1: Option<f64>,
    pub sigma1: Option<f64>,
    pub c0: Option<f64>,
    pub seed: Option<u64>,
    pub horizon: Option<usize>,
    pub eps_base: Option<u32>,
    pub eps_exponents: Option<Vec<u32>>,
    pub density_initial: Option<usize>,
    pub density_max: Option<usize>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub n0: Option<usize>,
    pub word_cap: Option<usize>,
    pub depth: Option<usize>,
    pub threshold: Option<f64>,
    pub samples: Option<usize>,
    pub budget: Option<usize>,
    pub patterns_n_max: Option<usize>,
    pub stirling_l_max: Option<usize>,
    pub entropy_l_max: Option<usize>,
    pub entropy_taus: Option<Vec<f64>>,
    pub lemma_mus: Option<Vec<f64>>,
    pub lemma_l_max: Option<usize>,
    pub power_m_max: Option<usize>,
    pub kappa_probe: Option<bool>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl RawConfig {
    fn overlay(&mut self, top: RawConfig) {
        overlay!(self, top; family, mu, mus, mu_start, mu_stop, mu_count, mu_spacing, sigma, delta0, delta1,
            sigma1, c0, seed, horizon, eps_base, eps_exponents, density_initial, density_max, n_min, n_max, n0,
            word_cap, depth, threshold, samples, budget, patterns_n_max, stirling_l_max, entropy_l_max,
            entropy_taus, lemma_mus, lemma_l_max, power_m_max, kappa_probe);
    }

    /// Reads `path`, resolving `include` chains relative to each file.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let mut seen = BTreeSet::new();
        Self::load_inner(path, &mut seen)
    }

    fn load_inner(path: &Path, seen: &mut BTreeSet<PathBuf>) -> anyhow::Result<Self> {
        let canonical = path.canonicalize().map_err(|e| bad(format!("{}: {e}", path.display())))?;
        if !seen.insert(canonical.clone()) {
            return Err(bad(format!("include cycle at {}", path.display())));
        }
        let text = std::fs::read_to_string(&canonical).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        let mut raw: RawConfig = toml::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        match raw.include.take() {
            Some(inc) => {
                let inc = canonical.parent().unwrap_or(Path::new(".")).join(inc);
                let mut base = Self::load_inner(&inc, seen)?;
                base.overlay(raw);
                Ok(base)
            }
            None => Ok(raw),
        }
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        if raw.include.is_some() {
            return Err(bad("include is only allowed in files"));
        }
        Ok(raw)
    }
}

/// Every parameter with defaults filled in. This is what outputs embed and
/// what the cache key hashes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub family: Family,
    pub mus: Vec<f64>,
    pub sigma: Option<f64>,
    pub delta0: f64,
    pub delta1: f64,
    pub sigma1: f64,
    pub c0: Option<f64>,
    pub seed: u64,
    pub horizon: usize,
    pub eps_base: u32,
    pub eps_exponents: Vec<u32>,
    pub density_initial: usize,
    pub density_max: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub n0: usize,
    pub word_cap: usize,
    pub depth: Option<usize>,
    pub threshold: Option<f64>,
    pub samples: usize,
    pub budget: usize,
    pub patterns_n_max: usize,
    pub stirling_l_max: usize,
    pub entropy_l_max: usize,
    pub entropy_taus: Vec<f64>,
    pub lemma_mus: Vec<f64>,
    pub lemma_l_max: usize,
    pub power_m_max: usize,
    pub kappa_probe: bool,
    /// Set for 3D runs, whose budgets are capped.
    pub coarse: bool,
}

pub const MAX_3D_EXPONENT: u32 = 7;
pub const MAX_3D_HORIZON: usize = 100;

fn default_mus(family: Family) -> Vec<f64> {
    match family {
        Family::Hopf2d => vec![0.1, 0.05, 0.02, 0.01, 0.005],
        Family::Hopf3d => vec![0.1, 0.01],
        Family::DiazViana => vec![0.05, 0.1, 0.2],
        Family::Tripling | Family::Conformal => vec![0.0],
    }
}

fn mu_grid(raw: &RawConfig, family: Family) -> anyhow::Result<Vec<f64>> {
    if let Some(m) = &raw.mus {
        return Ok(m.clone());
    }
    if let Some(m) = raw.mu {
        return Ok(vec![m]);
    }
    match (raw.mu_start, raw.mu_stop, raw.mu_count) {
        (None, None, None) => Ok(default_mus(family)),
        (Some(a), Some(b), Some(n)) => {
            let spacing = raw.mu_spacing.unwrap_or(Spacing::Linear);
            if spacing == Spacing::Log && (a <= 0.0 || b <= 0.0) {
                return Err(bad("log spacing needs positive mu_start and mu_stop"));
            }
            Ok((0..n)
                .map(|i| {
                    let s = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                    match spacing {
                        Spacing::Linear => a + (b - a) * s,
                        Spacing::Log => (a.ln() + (b.ln() - a.ln()) * s).exp(),
                    }
                })
                .collect())
        }
        _ => Err(bad("mu_start, mu_stop and mu_count must be given together")),
    }
}

impl Config {
    pub fn resolve(raw: RawConfig) -> anyhow::Result<Self> {
        let family = raw.family.unwrap_or(Family::Hopf2d);
        let mus = mu_grid(&raw, family)?;
        for &m in &mus {
            let ok = match family {
                Family::Hopf2d | Family::Hopf3d => m.abs() < 1.0,
                Family::DiazViana => m > 0.0 && m < 1.0,
                Family::Tripling | Family::Conformal => true,
            };
            if !ok || !m.is_finite() {
                return Err(bad(format!("mu = {m} outside the range of {}", family.name())));
            }
        }
        let coarse = family == Family::Hopf3d;
        let eps_base = raw.eps_base.unwrap_or(if family == Family::Tripling { 3 } else { 2 });
        let eps_exponents = raw.eps_exponents.unwrap_or_else(|| match family {
            Family::Tripling => (1..=8).collect(),
            Family::Hopf3d => (3..=MAX_3D_EXPONENT).collect(),
            _ => (3..=10).collect(),
        });
        let horizon = raw.horizon.unwrap_or(match family {
            Family::Tripling => *eps_exponents.iter().max().unwrap_or(&8) as usize + 4,
            Family::Hopf3d => MAX_3D_HORIZON,
            _ => 40,
        });
        if coarse && (horizon > MAX_3D_HORIZON || eps_base != 2 || eps_exponents.iter().any(|&e| e > MAX_3D_EXPONENT)) {
            return Err(bad(format!(
                "3D runs are capped at a 128³ grid (base 2, exponent ≤ {MAX_3D_EXPONENT}) and horizon ≤ {MAX_3D_HORIZON}"
            )));
        }
        if eps_base < 2 {
            return Err(bad("eps_base must be at least 2"));
        }
        let n_min = raw.n_min.unwrap_or(4);
        let n_max = raw.n_max.unwrap_or(12);
        if n_min == 0 || n_min > n_max {
            return Err(bad(format!("need 1 ≤ n_min ≤ n_max, got {n_min}..{n_max}")));
        }
        let cfg = Config {
            family,
            mus,
            sigma: raw.sigma,
            delta0: raw.delta0.unwrap_or(0.01),
            delta1: raw.delta1.unwrap_or(0.005),
            sigma1: raw.sigma1.unwrap_or(1.5),
            c0: raw.c0,
            seed: raw.seed.unwrap_or(1),
            horizon,
            eps_base,
            eps_exponents,
            density_initial: raw.density_initial.unwrap_or(64),
            density_max: raw.density_max.unwrap_or(1024),
            n_min,
            n_max,
            n0: raw.n0.unwrap_or(n_min),
            word_cap: raw.word_cap.unwrap_or(repeller_core::holes::DEFAULT_WORD_CAP),
            depth: raw.depth,
            threshold: raw.threshold,
            samples: raw.samples.unwrap_or(12_000),
            budget: raw.budget.unwrap_or(20_000),
            patterns_n_max: raw.patterns_n_max.unwrap_or(20),
            stirling_l_max: raw.stirling_l_max.unwrap_or(1000),
            entropy_l_max: raw.entropy_l_max.unwrap_or(1000),
            entropy_taus: raw.entropy_taus.unwrap_or_else(|| vec![1.0, 0.5]),
            lemma_mus: raw.lemma_mus.unwrap_or_else(|| vec![0.05, 0.1]),
            lemma_l_max: raw.lemma_l_max.unwrap_or(2000),
            power_m_max: raw.power_m_max.unwrap_or(64),
            kappa_probe: raw.kappa_probe.unwrap_or(true),
            coarse,
        };
        if cfg.eps_exponents.len() >= 2 && cfg.eps_exponents.windows(2).any(|w| w[1] <= w[0]) {
            return Err(bad("eps_exponents must be strictly increasing"));
        }
        if cfg.power_m_max > 64 {
            return Err(bad("power_m_max is capped at 64"));
        }
        if cfg.stirling_l_max > 10_000 || cfg.entropy_l_max > 10_000 || cfg.lemma_l_max > 10_000 {
            return Err(bad("binomial grids are capped at l = 10000"));
        }
        Ok(cfg)
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        if let Some(s) = seed {
            self.seed = s;
        }
        self
    }

    /// `key = value` lines of the resolved configuration.
    pub fn header_lines(&self) -> Vec<String> {
        let value = serde_json::to_value(self).expect("config serializes");
        let map = value.as_object().expect("struct serializes to an object");
        map.iter().map(|(k, v)| format!("{k} = {v}")).collect()
    }

    /// Hex SHA-256 of the resolved configuration and the command name.
    pub fn hash(&self, command: &str) -> String {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update(b"\0");
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        h.update(b"\0");
        h.update(serde_json::to_vec(self).expect("config serializes"));
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_for_hopf() {
        let c = Config::resolve(RawConfig::default()).unwrap();
        assert_eq!(c.family, Family::Hopf2d);
        assert_eq!(c.mus.len(), 5);
        assert_eq!(c.eps_exponents, (3..=10).collect::<Vec<_>>());
        assert_eq!(c.hash("dim"), c.clone().hash("dim"));
        assert_ne!(c.hash("dim"), c.hash("a2"));
    }

    #[test]
    fn log_grid_and_errors() {
        let raw = RawConfig::parse("mu_start = 0.001\nmu_stop = 0.1\nmu_count = 3\nmu_spacing = \"log\"").unwrap();
        let c = Config::resolve(raw).unwrap();
        assert!((c.mus[1] - 0.01).abs() < 1e-12);
        assert!(RawConfig::parse("bogus = 1").is_err());
        let raw = RawConfig::parse("family = \"hopf3d\"\nhorizon = 500").unwrap();
        assert!(Config::resolve(raw).is_err());
        let raw = RawConfig::parse("mu = 1.5").unwrap();
        assert!(Config::resolve(raw).is_err());
    }

    #[test]
    fn includes_override() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("base.toml"), "family = \"tripling\"\nseed = 4\n").unwrap();
        std::fs::write(dir.path().join("top.toml"), "include = \"base.toml\"\nseed = 9\n").unwrap();
        let raw = RawConfig::load(&dir.path().join("top.toml")).unwrap();
        assert_eq!(raw.family, Some(Family::Tripling));
        assert_eq!(raw.seed, Some(9));
        std::fs::write(dir.path().join("a.toml"), "include = \"b.toml\"\n").unwrap();
        std::fs::write(dir.path().join("b.toml"), "include = \"a.toml\"\n").unwrap();
        assert!(RawConfig::load(&dir.path().join("a.toml")).is_err());
    }
}
