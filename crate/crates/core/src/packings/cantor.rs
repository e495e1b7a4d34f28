//! The Cantor circles 3-cluster.
//!
//! `R = [0, 1] x [-1/2, 1/2]` is cut by `S = [0, 1] x {0}`. A fat Cantor set
//! is built on `S` by removing, at stage `n`, the middle interval of length
//! `r^n` from each of the `2^(n-1)` intervals left so far. `E_3` is the union
//! of the disks having the removed intervals as diameters, and `E_1`, `E_2`
//! are the parts of `R` above and below, outside those disks.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cluster::Cluster;
use crate::error::{Error, Result};
use crate::geometry::{Edge, Point};
use crate::region::{ArcPolygon, Region};

/// Removal schedule: stage `n` removes middle intervals of length `ratio^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CantorSchedule {
    pub ratio: f64,
}

impl Default for CantorSchedule {
    /// `ratio = 1/4`, which leaves a set of measure 1/2.
    fn default() -> Self {
        CantorSchedule { ratio: 0.25 }
    }
}

impl CantorSchedule {
    /// Total length removed after infinitely many stages.
    pub fn removed_limit(&self) -> f64 {
        self.ratio / (1.0 - 2.0 * self.ratio)
    }

    fn check(&self) -> Result<()> {
        let r = self.ratio;
        if !(r > 0.0) {
            return Err(Error::InvalidArgument(format!("removal ratio {r} must be positive")));
        }
        if r >= 1.0 / 3.0 {
            return Err(Error::NotFat(format!(
                "ratio {r} removes total length {} >= 1",
                if 2.0 * r >= 1.0 { f64::INFINITY } else { self.removed_limit() }
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantorReport {
    pub depth: u32,
    pub ratio: f64,
    pub cluster_perimeter: f64,
    pub interface_length: f64,
    pub region_perimeters: [f64; 3],
    /// `P(E_3)` plus the length of the surviving intervals, which also lie in
    /// the topological boundary of `E_3` in the limit.
    pub boundary_proxy: f64,
    pub surviving_measure: f64,
    pub gap: f64,
}

/// Removed intervals after `depth` stages, left to right.
pub fn removed_intervals(depth: u32, schedule: CantorSchedule) -> Result<Vec<(f64, f64)>> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    schedule.check()?;
    let mut kept = vec![(0.0, 1.0)];
    let mut removed = Vec::new();
    let mut len = 1.0;
    for _ in 1..=depth {
        len *= schedule.ratio;
        let mut next = Vec::with_capacity(2 * kept.len());
        for &(a, b) in &kept {
            let mid = 0.5 * (a + b);
            let (l, r) = (mid - 0.5 * len, mid + 0.5 * len);
            next.push((a, l));
            next.push((r, b));
            removed.push((l, r));
        }
        kept = next;
    }
    removed.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(removed)
}

fn seg(a: Point, b: Point) -> Edge {
    Edge::Segment { a, b }
}

/// The cluster `(E_1, E_2, E_3)` at the given depth.
pub fn build_cantor_cluster(depth: u32, schedule: CantorSchedule) -> Result<Cluster> {
    let holes = removed_intervals(depth, schedule)?;
    let p = Point::new;

    let mut upper = Vec::with_capacity(2 * holes.len() + 4);
    let mut x = 0.0;
    for &(a, b) in &holes {
        upper.push(seg(p(x, 0.0), p(a, 0.0)));
        upper.push(Edge::Arc {
            center: p(0.5 * (a + b), 0.0),
            radius: 0.5 * (b - a),
            start: PI,
            sweep: -PI,
        });
        x = b;
    }
    upper.push(seg(p(x, 0.0), p(1.0, 0.0)));
    upper.push(seg(p(1.0, 0.0), p(1.0, 0.5)));
    upper.push(seg(p(1.0, 0.5), p(0.0, 0.5)));
    upper.push(seg(p(0.0, 0.5), p(0.0, 0.0)));

    let mut lower = vec![
        seg(p(0.0, 0.0), p(0.0, -0.5)),
        seg(p(0.0, -0.5), p(1.0, -0.5)),
        seg(p(1.0, -0.5), p(1.0, 0.0)),
    ];
    let mut x = 1.0;
    for &(a, b) in holes.iter().rev() {
        lower.push(seg(p(x, 0.0), p(b, 0.0)));
        lower.push(Edge::Arc {
            center: p(0.5 * (a + b), 0.0),
            radius: 0.5 * (b - a),
            start: 0.0,
            sweep: -PI,
        });
        x = a;
    }
    lower.push(seg(p(x, 0.0), p(0.0, 0.0)));

    let disks = holes
        .iter()
        .map(|&(a, b)| vec![Edge::full_circle(p(0.5 * (a + b), 0.0), 0.5 * (b - a))])
        .collect();

    Ok(Cluster::new_unchecked(vec![
        Region::ArcPoly(ArcPolygon::new(vec![upper])?),
        Region::ArcPoly(ArcPolygon::new(vec![lower])?),
        Region::ArcPoly(ArcPolygon::new(disks)?),
    ]))
}

/// Builds the cluster and measures the perimeter gap of `E_3`.
pub fn cantor_report(depth: u32, schedule: CantorSchedule) -> Result<CantorReport> {
    let cluster = build_cantor_cluster(depth, schedule)?;
    let removed: f64 = removed_intervals(depth, schedule)?.iter().map(|(a, b)| b - a).sum();
    let surviving = 1.0 - removed;
    let per: Vec<f64> = cluster.regions().iter().map(Region::perimeter).collect();
    let e3 = per[2];
    Ok(CantorReport {
        depth,
        ratio: schedule.ratio,
        cluster_perimeter: cluster.perimeter()?,
        interface_length: cluster.mesh()?.interface_length()?,
        region_perimeters: [per[0], per[1], per[2]],
        boundary_proxy: e3 + surviving,
        surviving_measure: surviving,
        gap: surviving,
    })
}
