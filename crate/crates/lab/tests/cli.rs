use std::path::Path;
use std::process::{Command, Output};

fn lab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repeller-lab"))
        .current_dir(dir)
        .env_remove("REPELLER_LAB_CACHE")
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn body(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
}

#[test]
fn empty_grid_writes_header_only() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.toml", "mus = []\n");
    let out = lab(tmp.path(), &["dim", "--config", "c.toml", "--out", "o", "--cache", "off"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = body(&tmp.path().join("o/dim.csv"));
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("mu,mu_f,"));
}

#[test]
fn negative_mu_is_flagged() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.toml", "mus = [-0.05]\neps_exponents = [3, 4, 5, 6]\n");
    let out = lab(tmp.path(), &["dim", "--config", "c.toml", "--out", "o", "--cache", "off"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = body(&tmp.path().join("o/dim.csv"));
    assert!(rows[1].ends_with("no hole"), "{}", rows[1]);
}

#[test]
fn per_mu_errors_stay_in_row() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.toml", "mus = [0.1]\neps_exponents = [3, 4, 5]\n");
    let out = lab(tmp.path(), &["dim", "--config", "c.toml", "--out", "o", "--cache", "off"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = body(&tmp.path().join("o/dim.csv"));
    assert!(rows[1].contains("error: degenerate regression"), "{}", rows[1]);
}

#[test]
fn config_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "unknown.toml", "colour = 3\n");
    write(tmp.path(), "range.toml", "mus = [1.5]\n");
    write(tmp.path(), "a.toml", "include = \"b.toml\"\n");
    write(tmp.path(), "b.toml", "include = \"a.toml\"\n");
    for file in ["unknown.toml", "range.toml", "a.toml", "missing.toml"] {
        let out = lab(tmp.path(), &["dim", "--config", file, "--out", "o"]);
        assert_eq!(out.status.code(), Some(2), "{file}");
    }
    write(tmp.path(), "solid.toml", "family = \"hopf3d\"\n");
    assert_eq!(lab(tmp.path(), &["a2", "--config", "solid.toml", "--out", "o"]).status.code(), Some(2));
}

#[test]
fn cache_hit_restores_identical_files() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.toml", "family = \"tripling\"\n");
    let first = lab(tmp.path(), &["dim", "--config", "c.toml", "--out", "o"]);
    assert_eq!(first.status.code(), Some(0));
    let before = std::fs::read(tmp.path().join("o/dim.csv")).unwrap();
    std::fs::remove_file(tmp.path().join("o/dim.csv")).unwrap();
    let second = lab(tmp.path(), &["dim", "--config", "c.toml", "--out", "o"]);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    assert_eq!(std::fs::read(tmp.path().join("o/dim.csv")).unwrap(), before);
}

#[test]
fn induced_on_tripling_reports_json() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "c.toml", "family = \"tripling\"\nsamples = 2000\nbudget = 4000\n");
    let out = lab(tmp.path(), &["induced", "--config", "c.toml", "--out", "o", "--cache", "off"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(tmp.path().join("o/induced.json")).unwrap()).unwrap();
    let run = &v["runs"][0];
    assert_eq!(run["n"], 1);
    for key in ["threshold", "samples", "min_margin", "worst_point", "measured_hole", "bound"] {
        assert!(!run[key].is_null(), "{key}");
    }
}

#[test]
fn a2_and_bounds_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "a2.toml", "mus = [0.1]\nn_min = 4\nn_max = 6\nn0 = 5\n");
    let out = lab(tmp.path(), &["a2", "--config", "a2.toml", "--out", "a", "--cache", "off"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = body(&tmp.path().join("a/a2.csv"));
    assert_eq!(rows[0], "n,mu,mu_f,threshold,kept,pruned,vol_lo,vol_hi,delta,pass");
    assert!(rows[1].ends_with("out-of-contract") && rows[2].ends_with("pass"));
    assert!(std::fs::read_to_string(tmp.path().join("a/a2.svg")).unwrap().starts_with("<svg"));

    write(tmp.path(), "small.toml", "patterns_n_max = 8\nstirling_l_max = 50\nentropy_l_max = 50\nlemma_mus = []\n");
    let out = lab(tmp.path(), &["bounds", "--config", "small.toml", "--out", "b", "--cache", "off"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS bounds"));

    write(tmp.path(), "lemma.toml", "patterns_n_max = 4\nstirling_l_max = 10\nentropy_l_max = 10\nlemma_mus = [0.1]\n");
    let out = lab(tmp.path(), &["bounds", "--config", "lemma.toml", "--out", "c", "--cache", "off"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("FAIL bounds"));
}
