use repeller_core::bounds::delta_bound;
use repeller_core::families::HopfModel2D;
use repeller_core::holes::{bad_volume, sn_partition, EnumerationConfig, MapWithHoles, RefineConfig};
use repeller_core::induced::{build_induced, induced_hole_volume, repeller_inclusion, verify_expansion};

fn config(seed: u64) -> EnumerationConfig {
    EnumerationConfig::new(RefineConfig::for_dimension(2, seed))
}

#[test]
fn partition_has_every_level() {
    let m = HopfModel2D::new(0.1).unwrap();
    let p = sn_partition(&m, 6, m.threshold(), config(1)).unwrap();
    assert!(p.disjoint && !p.inconclusive && p.census.consistent());
    for (k, level) in p.levels.iter().enumerate() {
        assert!(!level.is_empty(), "S_{k} empty");
    }
}

#[test]
fn bad_volume_below_delta() {
    let m = HopfModel2D::new(0.1).unwrap();
    let b = bad_volume(&m, 10, m.threshold(), config(2)).unwrap();
    let d = delta_bound(10, m.delta_parameter()).unwrap();
    assert!(b.volume_upper < d, "{} vs {d}", b.volume_upper);
}

#[test]
fn induced_map_expands() {
    let m = HopfModel2D::new(0.1).unwrap();
    let f = build_induced(&m, 6, m.threshold(), config(3)).unwrap();
    let e = verify_expansion(&f, 12_000, 4).unwrap();
    assert!(e.checked >= 10_000 && e.pass(), "{e:?}");
    let h = induced_hole_volume(&f, 20_000, 5).unwrap();
    assert!(h.pass());
    let r = repeller_inclusion(&f, 5_000, 4, 6).unwrap();
    assert_eq!(r.violations, 0);
}
