//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per criterion
//! and exits nonzero if any fails.

use std::path::Path;
use std::time::{Duration, Instant};

use repeller_core::families::{DiazVianaFamily, HopfModel2D, PhiParams, PhiProfile, CONDITION_GRID};
use repeller_core::holes::{bad_volume, EnumerationConfig, RefineConfig};
use repeller_lab::commands::{a2, bounds, dim, induced};
use repeller_lab::config::{Config, RawConfig};
use repeller_lab::output::Outputs;

fn config(text: &str) -> Config {
    Config::resolve(RawConfig::parse(text).unwrap()).unwrap()
}

fn verdict(n: u32, pass: bool, detail: String) -> bool {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn single_dim(cfg: &Config) -> dim::DimRow {
    let report = dim::run_dim(cfg).unwrap();
    assert_eq!(report.rows.len(), 1);
    report.rows[0].clone()
}

fn criterion_1_cantor_dimension() -> bool {
    let start = Instant::now();
    let row = single_dim(&config("family = \"tripling\"\neps_base = 3\neps_exponents = [1, 2, 3, 4, 5, 6, 7, 8]"));
    let elapsed = start.elapsed();
    let target = 2f64.ln() / 3f64.ln();
    let pass = (row.dimension - target).abs() <= 0.02 && elapsed < Duration::from_secs(10);
    verdict(1, pass, format!("BD = {:.4} (target {target:.4} ± 0.02), {:.2} s", row.dimension, elapsed.as_secs_f64()))
}

fn criterion_2_full_dimension_without_hole() -> bool {
    let flat = single_dim(&config("mus = [-0.05]"));
    let start = Instant::now();
    let solid = single_dim(&config("family = \"hopf3d\"\nmus = [-0.05]\neps_exponents = [3, 4, 5, 6, 7]"));
    let elapsed = start.elapsed();
    let pass = flat.no_hole
        && solid.no_hole
        && (flat.dimension - 2.0).abs() <= 0.03
        && (solid.dimension - 3.0).abs() <= 0.07
        && elapsed < Duration::from_secs(600);
    verdict(
        2,
        pass,
        format!("2D BD = {:.4}, 3D BD = {:.4} at 128^3 in {:.1} s", flat.dimension, solid.dimension, elapsed.as_secs_f64()),
    )
}

fn criterion_3_dimension_trend() -> bool {
    let planar = dim::run_dim(&config("mus = [0.1, 0.05, 0.02, 0.01, 0.005]")).unwrap();
    let at = |r: &dim::DimReport, mu: f64| r.rows.iter().find(|x| x.mu == mu).unwrap().dimension;
    let smallest = at(&planar, 0.005);
    let solid = dim::run_dim(&config("family = \"hopf3d\"\nmus = [0.1, 0.01]")).unwrap();
    let (d1, d01) = (at(&solid, 0.1), at(&solid, 0.01));
    // the 3D part is advisory with slack 0.1
    let advisory = d01 >= d1 - 0.1 && d01 >= 2.75 - 0.1;
    let strict3 = d01 >= d1 && d01 >= 2.75;
    let pass = planar.trend_holds() && smallest >= 1.90 && advisory;
    let dims: Vec<String> = planar.rows.iter().map(|r| format!("{}:{:.4}", r.mu, r.dimension)).collect();
    verdict(
        3,
        pass,
        format!(
            "2D [{}], 3D BD(0.1) = {d1:.4}, BD(0.01) = {d01:.4}{}",
            dims.join(", "),
            if strict3 { "" } else { " (3D advisory)" }
        ),
    )
}

fn criterion_4_bad_set_volume() -> bool {
    let report = a2::run_a2(&config("mus = [0.02, 0.05, 0.1]\nn_min = 4\nn_max = 12")).unwrap();
    let hopf_ok = report.errors.is_empty()
        && report.rows.len() == 27
        && report.rows.iter().all(|r| r.status == repeller_core::holes::A2Status::Pass && r.vol_hi <= r.delta);
    let mut dv_max = 0.0f64;
    for t in [0.05, 0.1, 0.2] {
        let m = DiazVianaFamily::new(t).unwrap();
        for n in 1..=30 {
            let cfg = EnumerationConfig::new(RefineConfig::for_dimension(1, n as u64));
            let b = bad_volume(&m, n, m.threshold(), cfg).unwrap();
            assert!(!b.inconclusive);
            dv_max = dv_max.max(b.volume_upper);
        }
    }
    let worst = report.rows.iter().map(|r| r.vol_hi / r.delta).fold(0.0, f64::max);
    verdict(
        4,
        hopf_ok && dv_max == 0.0,
        format!("{} rows, worst vol/delta = {worst:.3e}, diaz-viana max bad volume = {dv_max}", report.rows.len()),
    )
}

fn criterion_5_induced_expander() -> bool {
    let at_n0 = induced::run_induced(&config("mus = [0.1]")).unwrap();
    let shallow = induced::run_induced(&config("mus = [0.1]\ndepth = 6")).unwrap();
    let runs: Vec<&induced::InducedRun> = at_n0.runs.iter().chain(&shallow.runs).collect();
    let pass = at_n0.errors.is_empty()
        && shallow.errors.is_empty()
        && runs.len() == 2
        && runs.iter().all(|r| !r.empty_domain && r.expansion_pass && r.violations == 0 && r.hole_pass);
    let detail: Vec<String> = runs
        .iter()
        .map(|r| {
            format!(
                "n = {}: {} checked, min margin {:.4}, hole {:.4e} vs bound {:.4e}",
                r.n, r.checked, r.min_margin, r.measured_hole, r.bound
            )
        })
        .collect();
    verdict(5, pass, detail.join("; "))
}

fn criterion_6_combinatorial_suite() -> bool {
    let start = Instant::now();
    let report = bounds::run_bounds(&config("")).unwrap();
    let elapsed = start.elapsed();
    let failing: Vec<String> = report
        .checks
        .iter()
        .filter(|c| c.class == bounds::Class::Required && !c.pass)
        .map(|c| format!("{} ({} of {})", c.check, c.failures.len(), c.checked))
        .collect();
    let pass = report.pass() && elapsed < Duration::from_secs(60);
    verdict(6, pass, format!("{:.1} s, failing: [{}]", elapsed.as_secs_f64(), failing.join(", ")))
}

fn criterion_7_invariant_circle_scaling() -> bool {
    let k = 21;
    let pts: Vec<(f64, f64)> = (0..k)
        .map(|i| {
            let mu = 10f64.powf(-4.0 + 2.0 * i as f64 / (k - 1) as f64);
            (mu.ln(), HopfModel2D::new(mu).unwrap().rho_inv.ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    verdict(7, (slope - 0.5).abs() <= 0.05, format!("slope = {slope:.5}"))
}

fn criterion_8_profile_conditions() -> bool {
    let mut ok = true;
    let mut notes = Vec::new();
    for mu in [0.0, 0.05, 0.2] {
        let params = PhiParams::planar(mu);
        let p = match PhiProfile::new(params) {
            Ok(p) => p,
            Err(e) => {
                ok = false;
                notes.push(format!("mu = {mu}: {e}"));
                continue;
            }
        };
        // re-check the conditions independently on the same grid
        let d0 = p.derivative(0.0);
        let mut bad = 0;
        for i in 0..CONDITION_GRID {
            let w = 2.0 * params.delta0 * i as f64 / (CONDITION_GRID - 1) as f64;
            let (phi, d) = (p.eval(w), p.derivative(w));
            let c1 = phi >= 1.0 - mu - 1e-12;
            let c2 = w < params.delta0 || phi == params.sigma;
            let c3 = w >= params.delta0 || d > 0.0;
            let c4 = (w < params.delta1 || phi > params.sigma1) && (w > params.delta1 || d >= d0);
            if !(c1 && c2 && c3 && c4) {
                bad += 1;
            }
        }
        ok &= bad == 0 && p.eval(0.0) == 1.0 - mu;
        notes.push(format!("mu = {mu}: {bad} bad points"));
    }
    verdict(8, ok, notes.join(", "))
}

fn dim_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let cfg = config("mus = [0.1, 0.02]\neps_exponents = [3, 4, 5, 6, 7]\nseed = 11");
    let report = dim::run_dim(&cfg).unwrap();
    let mut out = Outputs::new(dir, "dim", &cfg).unwrap();
    dim::write_dim(&report, &mut out).unwrap();
    out.files.iter().map(|f| (f.clone(), std::fs::read(dir.join(f)).unwrap())).collect()
}

fn criterion_9_reproducible_runs() -> bool {
    let tmp = tempfile::tempdir().unwrap();
    let a = dim_files(&tmp.path().join("a"));
    let b = dim_files(&tmp.path().join("b"));
    let bytes: usize = a.iter().map(|f| f.1.len()).sum();
    verdict(9, !a.is_empty() && a == b, format!("{} files, {bytes} bytes compared", a.len()))
}

fn main() {
    let criteria: [fn() -> bool; 9] = [
        criterion_1_cantor_dimension,
        criterion_2_full_dimension_without_hole,
        criterion_3_dimension_trend,
        criterion_4_bad_set_volume,
        criterion_5_induced_expander,
        criterion_6_combinatorial_suite,
        criterion_7_invariant_circle_scaling,
        criterion_8_profile_conditions,
        criterion_9_reproducible_runs,
    ];
    let failed = criteria.iter().filter(|c| !c()).count();
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
