use serde::Serialize;

use repeller_core::holes::MapWithHoles;
use repeller_core::induced::{build_induced, choose_n0, induced_hole_volume, verify_expansion};

use super::{enumeration, with_map, MapTask};
use crate::config::Config;
use crate::output::{json_f64, Outputs, Verdict};

/// Depths above this use the symbolic per-step terms.
pub const GEOMETRIC_DEPTH_MAX: usize = 12;
/// Search limit for the automatic depth.
pub const N0_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InducedRun {
    pub mu: f64,
    pub n: usize,
    pub threshold: f64,
    pub samples: usize,
    pub checked: usize,
    #[serde(serialize_with = "ser_f64")]
    pub min_margin: f64,
    pub worst_point: Option<Vec<f64>>,
    pub worst_return: usize,
    pub violations: usize,
    pub measured_hole: f64,
    pub measured_half_width: f64,
    #[serde(serialize_with = "ser_f64")]
    pub bound: f64,
    pub empty_domain: bool,
    pub hole_pass: bool,
    pub expansion_pass: bool,
}

fn ser_f64<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    json_f64(*x).serialize(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InducedReport {
    pub runs: Vec<InducedRun>,
    pub errors: Vec<(f64, String)>,
}

impl InducedReport {
    pub fn verdict(&self) -> Verdict {
        if self.runs.iter().any(|r| !r.empty_domain && !(r.expansion_pass && r.hole_pass)) {
            Verdict::Violation
        } else if self.runs.iter().any(|r| r.empty_domain) || !self.errors.is_empty() {
            Verdict::Advisory
        } else {
            Verdict::Pass
        }
    }
}

struct Task<'c>(&'c Config);

impl MapTask for Task<'_> {
    type Output = InducedRun;

    fn run<const D: usize, M: MapWithHoles<D>>(&self, map: &M, mu: f64, threshold: f64) -> anyhow::Result<InducedRun> {
        let cfg = self.0;
        let n = match cfg.depth {
            Some(n) => n,
            None => choose_n0(map, N0_CAP)?
                .ok_or_else(|| anyhow::anyhow!("no depth n <= {N0_CAP} has delta below the hole volume"))?,
        };
        let f = build_induced(map, n, threshold, enumeration(cfg, D, n <= GEOMETRIC_DEPTH_MAX))?;
        let hole = induced_hole_volume(&f, cfg.budget, cfg.seed ^ 0x5eed)?;
        let mut run = InducedRun {
            mu,
            n,
            threshold,
            samples: cfg.samples,
            checked: 0,
            min_margin: f64::NAN,
            worst_point: None,
            worst_return: 0,
            violations: 0,
            measured_hole: hole.measured.value,
            measured_half_width: hole.measured.half_width,
            bound: hole.bound,
            empty_domain: f.empty_domain,
            hole_pass: hole.pass(),
            expansion_pass: false,
        };
        if !f.empty_domain {
            let e = verify_expansion(&f, cfg.samples, cfg.seed)?;
            run.checked = e.checked;
            run.min_margin = e.min_margin;
            run.worst_point = e.worst_point.map(|p| p.0.to_vec());
            run.worst_return = e.worst_return;
            run.violations = e.violations;
            run.expansion_pass = e.pass();
        }
        Ok(run)
    }
}

/// Builds the induced map for every `μ` and checks expansion and hole volume.
pub fn run_induced(cfg: &Config) -> anyhow::Result<InducedReport> {
    let mut report = InducedReport { runs: Vec::new(), errors: Vec::new() };
    for &mu in &cfg.mus {
        match with_map(cfg, mu, &Task(cfg)) {
            Ok(run) => {
                if run.empty_domain {
                    eprintln!("warning: induced map at mu = {mu} has an empty domain");
                }
                report.runs.push(run)
            }
            Err(e) if e.is::<crate::config::ConfigError>() => return Err(e),
            Err(e) => report.errors.push((mu, e.to_string())),
        }
    }
    Ok(report)
}

pub fn write_induced(report: &InducedReport, cfg: &Config, out: &mut Outputs) -> anyhow::Result<Verdict> {
    let verdict = report.verdict();
    let errors: Vec<_> = report.errors.iter().map(|(mu, e)| serde_json::json!({ "mu": mu, "error": e })).collect();
    let value = serde_json::json!({ "verdict": verdict, "runs": report.runs, "errors": errors });
    out.json("induced.json", &value, cfg)?;
    Ok(verdict)
}
