use serde::Serialize;

use repeller_core::holes::{a2_report, A2Config, A2Row, A2Status, MapWithHoles};

use super::{enumeration, with_map, MapTask};
use crate::config::Config;
use crate::output::{Outputs, Verdict};
use crate::svg::{Mark, Plot, Series};

/// One CSV row. `pass` holds the status word, or the error for a failed `μ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct A2CsvRow {
    pub n: usize,
    pub mu: f64,
    pub mu_f: f64,
    pub threshold: f64,
    pub kept: usize,
    pub pruned: usize,
    pub vol_lo: f64,
    pub vol_hi: f64,
    pub delta: f64,
    pub pass: String,
}

impl From<&A2Row> for A2CsvRow {
    fn from(r: &A2Row) -> Self {
        Self {
            n: r.n,
            mu: r.mu,
            mu_f: r.mu_f,
            threshold: r.threshold,
            kept: r.kept,
            pruned: r.pruned,
            vol_lo: r.vol_lo,
            vol_hi: r.vol_hi,
            delta: r.delta,
            pass: r.status.to_string(),
        }
    }
}

pub const A2_HEADER: [&str; 10] = ["n", "mu", "mu_f", "threshold", "kept", "pruned", "vol_lo", "vol_hi", "delta", "pass"];

#[derive(Debug, Clone, PartialEq)]
pub struct A2Report {
    pub rows: Vec<A2Row>,
    /// `(mu, message)` for grid points that could not be evaluated.
    pub errors: Vec<(f64, String)>,
}

impl A2Report {
    pub fn count(&self, status: A2Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    pub fn verdict(&self) -> Verdict {
        if self.count(A2Status::Fail) > 0 {
            Verdict::Violation
        } else if self.count(A2Status::Inconclusive) > 0 || !self.errors.is_empty() {
            Verdict::Advisory
        } else {
            Verdict::Pass
        }
    }
}

struct Task(A2Config);

impl MapTask for Task {
    type Output = Vec<A2Row>;

    fn run<const D: usize, M: MapWithHoles<D>>(&self, map: &M, mu: f64, threshold: f64) -> anyhow::Result<Vec<A2Row>> {
        Ok(a2_report(map, mu, threshold, &self.0)?)
    }
}

pub fn a2_config(cfg: &Config) -> A2Config {
    A2Config { n_min: cfg.n_min, n_max: cfg.n_max, n0: cfg.n0, enumeration: enumeration(cfg, cfg.family.dimension(), true) }
}

/// Bad-set volumes against `δ(n, ·)` for every `μ` of the grid.
pub fn run_a2(cfg: &Config) -> anyhow::Result<A2Report> {
    let task = Task(a2_config(cfg));
    let mut report = A2Report { rows: Vec::new(), errors: Vec::new() };
    for &mu in &cfg.mus {
        match with_map(cfg, mu, &task) {
            Ok(rows) => report.rows.extend(rows),
            Err(e) if e.is::<crate::config::ConfigError>() => return Err(e),
            Err(e) => report.errors.push((mu, e.to_string())),
        }
    }
    Ok(report)
}

/// Zero volumes are drawn at this floor on the log axis.
const VOLUME_FLOOR: f64 = 1e-16;

pub fn write_a2(report: &A2Report, out: &mut Outputs) -> anyhow::Result<Verdict> {
    let mut rows: Vec<A2CsvRow> = report.rows.iter().map(A2CsvRow::from).collect();
    for (mu, e) in &report.errors {
        rows.push(A2CsvRow {
            n: 0,
            mu: *mu,
            mu_f: f64::NAN,
            threshold: f64::NAN,
            kept: 0,
            pruned: 0,
            vol_lo: f64::NAN,
            vol_hi: f64::NAN,
            delta: f64::NAN,
            pass: format!("error: {e}"),
        });
    }
    out.csv("a2.csv", &A2_HEADER, &rows)?;

    let mut mus: Vec<f64> = report.rows.iter().map(|r| r.mu).collect();
    mus.dedup();
    let mut series = Vec::new();
    for mu in mus {
        let rows: Vec<&A2Row> = report.rows.iter().filter(|r| r.mu == mu).collect();
        let mut vol = Series::new(format!("bad volume, mu = {mu}"), []);
        vol.points = rows
            .iter()
            .map(|r| {
                let mark = match r.status {
                    A2Status::Pass => Mark::Dot,
                    A2Status::Fail => Mark::Cross,
                    A2Status::Inconclusive | A2Status::OutOfContract => Mark::Ring,
                };
                (r.n as f64, r.vol_hi.max(VOLUME_FLOOR), mark)
            })
            .collect();
        series.push(vol);
        series.push(Series::new(format!("delta, mu = {mu}"), rows.iter().map(|r| (r.n as f64, r.delta))).dashed());
    }
    let plot = Plot {
        title: "bad-set volume (upper) against delta; rings are inconclusive".into(),
        x_label: "n".into(),
        y_label: "volume".into(),
        log_y: true,
        series,
        ..Plot::default()
    };
    out.text("a2.svg", &plot.render())?;
    Ok(report.verdict())
}
