use std::f64::consts::PI;

use cluster_lab::functionals::{
    anisotropic_cluster_perimeter, anisotropic_perimeter, fractional_perimeter_mc, wulff_lower_bound,
    FractionalOrder, Norm, PolygonalNorm,
};
use cluster_lab::marching::edge_count_perimeter;
use cluster_lab::minimizer::{CellWindow, GridCluster, GridSpec};
use cluster_lab::packings::standard_double_bubble;
use cluster_lab::{AxisRect, Cluster, Disk, Point, Region};
use proptest::prelude::*;

/// Squares on distinct lattice cells (so some share edges) and disks in
/// cells of their own.
fn lattice_cluster() -> impl Strategy<Value = Cluster> {
    prop::collection::btree_map((0..5i32, 0..5i32), (any::<bool>(), 0.05f64..0.5), 1..9).prop_map(|cells| {
        let regions = cells
            .into_iter()
            .map(|((x, y), (square, r))| {
                let origin = Point::new(x as f64, y as f64);
                if square {
                    Region::Rect(AxisRect::square(origin, 1.0))
                } else {
                    Region::Disk(Disk::new(origin + Point::new(0.5, 0.5), r))
                }
            })
            .collect();
        Cluster::new(regions).unwrap()
    })
}

fn single_region() -> impl Strategy<Value = Region> {
    prop_oneof![
        (0.01f64..5.0, -3.0f64..3.0).prop_map(|(r, x)| Region::Disk(Disk::new(Point::new(x, 0.0), r))),
        (0.01f64..5.0, 0.01f64..5.0).prop_map(|(w, h)| Region::Rect(AxisRect::new(Point::new(0.0, 0.0), Point::new(w, h)))),
        (0.1f64..3.0).prop_map(|a| standard_double_bubble(a, Point::default()).unwrap().regions()[0].clone()),
    ]
}

fn hexagon_norm(turn: f64, stretch: f64) -> Norm {
    let vertices = (0..6)
        .map(|k| {
            let t = turn + k as f64 * PI / 3.0;
            Point::new(stretch * t.cos(), t.sin())
        })
        .collect();
    Norm::Polygonal(PolygonalNorm::new(vertices).unwrap())
}

fn mask64() -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 64 * 64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn half_sum_equals_interface_length(c in lattice_cluster()) {
        let p = c.perimeter().unwrap();
        let i = c.mesh().unwrap().interface_length().unwrap();
        prop_assert!((p - i).abs() <= 1e-10 * p);
    }

    #[test]
    fn truncation_never_increases_perimeter(c in lattice_cluster()) {
        let p = c.perimeter().unwrap();
        let mut prev = 0.0;
        for n in 1..=c.len() {
            let t = c.truncate(n).unwrap().perimeter().unwrap();
            prop_assert!(prev <= t + 1e-10 * p);
            prev = t;
        }
    }

    #[test]
    fn edge_count_perimeter_is_submodular(a in mask64(), b in mask64()) {
        let per = |f: &dyn Fn(usize) -> bool| edge_count_perimeter(64, 64, |i, j| f(j * 64 + i));
        let lhs = per(&|k| a[k] || b[k]) + per(&|k| a[k] && b[k]);
        prop_assert!(lhs <= per(&|k| a[k]) + per(&|k| b[k]));
    }

    #[test]
    fn isoperimetric_floor(r in single_region()) {
        prop_assert!(r.perimeter() >= 2.0 * (PI * r.area()).sqrt() * (1.0 - 1e-12));
    }

    #[test]
    fn diameter_is_at_most_half_the_perimeter_when_connected(c in lattice_cluster()) {
        let mesh = c.mesh().unwrap();
        if mesh.is_connected() {
            prop_assert!(mesh.diameter().unwrap() <= 0.5 * c.perimeter().unwrap() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn perimeters_scale_homogeneously(r in single_region(), scale in 0.1f64..10.0, dx in -5.0f64..5.0) {
        let moved = r.transformed(scale, Point::new(dx, 1.0));
        prop_assert!((moved.perimeter() - scale * r.perimeter()).abs() <= 1e-9 * moved.perimeter());
        let norm = hexagon_norm(0.3, 1.7);
        let a = anisotropic_perimeter(&r, &norm).unwrap();
        let b = anisotropic_perimeter(&moved, &norm).unwrap();
        prop_assert!((b - scale * a).abs() <= 1e-9 * b);
    }

    #[test]
    fn norm_comparison(r in single_region(), turn in 0.0f64..1.0) {
        // |u| <= |u|_1 <= sqrt(2) |u|
        let e = r.perimeter();
        let m = anisotropic_perimeter(&r, &Norm::Manhattan).unwrap();
        prop_assert!(e <= m * (1.0 + 1e-12) && m <= 2f64.sqrt() * e * (1.0 + 1e-12));
        // a regular hexagon ball of circumradius 1 has sqrt(3)/2 |u| <= phi(u)... <= |u| for the dual
        let h = anisotropic_perimeter(&r, &hexagon_norm(turn, 1.0)).unwrap();
        prop_assert!(e * (1.0 - 1e-12) <= h && h <= 2.0 / 3f64.sqrt() * e * (1.0 + 1e-12));
    }

    #[test]
    fn wulff_bound_holds(r in single_region(), turn in 0.0f64..1.0, stretch in 0.5f64..2.0) {
        for norm in [Norm::Euclidean, Norm::Manhattan, hexagon_norm(turn, stretch)] {
            let p = anisotropic_perimeter(&r, &norm).unwrap();
            prop_assert!(p >= wulff_lower_bound(r.area(), &norm).unwrap() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn anisotropic_half_sum_of_lattice_squares(c in lattice_cluster()) {
        // every region alone is cheaper than the cluster, the cluster cheaper than all regions apart
        let p = anisotropic_cluster_perimeter(&c, &Norm::Manhattan).unwrap();
        let own: f64 = c.regions().iter().map(|r| anisotropic_perimeter(r, &Norm::Manhattan).unwrap()).sum();
        prop_assert!(p <= own * (1.0 + 1e-12));
        for r in c.regions() {
            prop_assert!(anisotropic_perimeter(r, &Norm::Manhattan).unwrap() <= p * (1.0 + 1e-12));
        }
    }

    #[test]
    fn json_round_trip_is_byte_identical(c in lattice_cluster()) {
        let a = c.to_json();
        let back = Cluster::from_json(&a).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_json(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn monte_carlo_is_deterministic(r in single_region(), seed in any::<u64>()) {
        let s = FractionalOrder::new(0.5).unwrap();
        let a = fractional_perimeter_mc(&r, s, 10_000, seed).unwrap();
        let b = fractional_perimeter_mc(&r, s, 10_000, seed).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// 20 label fields x 500 windows.
    #[test]
    fn locality_dichotomy(
        cuts in prop::collection::vec((0.0f64..32.0, 0.0f64..32.0, 2.0f64..12.0), 1..4),
        windows in prop::collection::vec((0usize..32, 0usize..32, 1usize..10, 1usize..10), 500),
    ) {
        let spec = GridSpec::new(32, 32, 1.0);
        let labels = (0..32 * 32)
            .map(|c| {
                let (x, y) = ((c % 32) as f64 + 0.5, (c / 32) as f64 + 0.5);
                cuts.iter()
                    .position(|&(cx, cy, r)| (x - cx).hypot(y - cy) < r)
                    .map_or(0, |k| k as u8 + 1)
            })
            .collect();
        let g = GridCluster::new(spec, labels, vec![1.0; cuts.len()]).unwrap();
        for (x, y, w, h) in windows {
            let window = CellWindow { x0: x, y0: y, x1: (x + w).min(32), y1: (y + h).min(32) };
            if window.x0 >= window.x1 || window.y0 >= window.y1 {
                continue;
            }
            let report = g.locality_check(window).unwrap();
            prop_assert!(report.dichotomy_holds);
        }
    }
}
