use std::f64::consts::PI;

use cluster_lab::minimizer::{minimize_n_cluster, AnnealConfig, GridSpec};

fn spec() -> GridSpec {
    GridSpec::new(128, 128, 1.0 / 128.0)
}

#[test]
fn single_region_approaches_the_disk() {
    let r = minimize_n_cluster(&[0.1], spec(), &AnnealConfig::default()).unwrap();
    let disk = 2.0 * (PI * 0.1).sqrt();
    assert!(r.success);
    assert!(r.boundary_connected);
    assert!(r.p_estimate >= 0.98 * disk);
    assert!(r.p_estimate <= 1.05 * disk, "{} vs {}", r.p_estimate, disk);
}

#[test]
fn empty_second_region_degenerates_to_one() {
    let cfg = AnnealConfig::default();
    let one = minimize_n_cluster(&[0.1], spec(), &cfg).unwrap();
    let two = minimize_n_cluster(&[0.1, 0.0], spec(), &cfg).unwrap();
    assert!(two.success);
    assert_eq!(two.grid.counts()[2], 0);
    let gap = (two.p_estimate - one.p_estimate).abs() / one.p_estimate;
    assert!(gap <= 0.02, "relative gap {gap}");
}

#[test]
fn truncating_a_minimizer_output_lowers_its_perimeter() {
    let r = minimize_n_cluster(&[0.12, 0.06, 0.03], spec(), &AnnealConfig::default()).unwrap();
    assert!(r.success);
    let mut prev = 0.0;
    for n in 1..=3 {
        let p = r.grid.truncated(n).perimeter();
        assert!(p >= prev - 1e-12);
        prev = p;
    }
    assert!((prev - r.p_estimate).abs() <= 1e-12 * prev);
}
