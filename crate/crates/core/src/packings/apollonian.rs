//! Apollonian packing of the unit disk by Descartes recursion.
//!
//! Every new circle is tangent to three existing ones. For a triple with a
//! known fourth circle, the other solution follows from Vieta's formulas
//! applied to the Descartes relation and its complex analogue:
//! `k' = 2(k1 + k2 + k3) - k` and `k'z' = 2(k1 z1 + k2 z2 + k3 z3) - k z`.
//! With the canonical seed all curvatures and all products `k z` are
//! (Gaussian) integers, so the recursion is exact in floating point.

use std::collections::{HashSet, VecDeque};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cluster::Cluster;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::region::{Disk, Region};

/// Relative tolerance of the Descartes and tangency checks.
pub const DESCARTES_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApollonianNode {
    pub disk: Disk,
    /// Generation; the seed circles have depth 0.
    pub depth: u32,
    /// Signed curvatures of the three circles this one is tangent to.
    pub parents: [f64; 3],
}

/// A circle stored as curvature `k` and the product `k z`.
#[derive(Debug, Clone, Copy)]
struct Circle {
    k: f64,
    kz: Complex64,
}

impl Circle {
    fn from_disk(d: &Disk) -> Circle {
        Circle {
            k: d.curvature,
            kz: Complex64::new(d.center.x, d.center.y) * d.curvature,
        }
    }

    fn disk(&self) -> Disk {
        let z = self.kz / self.k;
        Disk::from_curvature(Point::new(z.re, z.im), self.k)
    }

    fn center(&self) -> Complex64 {
        self.kz / self.k
    }
}

/// Distance between centers minus the tangency distance (`r1 + r2`, or
/// `|r1 - r2|` when one circle encloses the other).
pub fn tangency_residual(a: &Disk, b: &Disk) -> f64 {
    let d = a.center.dist(b.center);
    let target = if a.curvature < 0.0 || b.curvature < 0.0 {
        (a.radius - b.radius).abs()
    } else {
        a.radius + b.radius
    };
    d - target
}

/// `(k1 + k2 + k3 + k4)^2 - 2 (k1^2 + k2^2 + k3^2 + k4^2)`, relative to the
/// larger of the two terms.
pub fn descartes_residual(k: [f64; 4]) -> f64 {
    let s: f64 = k.iter().sum();
    let q: f64 = k.iter().map(|x| x * x).sum();
    (s * s - 2.0 * q).abs() / (s * s).max(2.0 * q)
}

/// The two circles tangent to all of `a`, `b`, `c`, picked among the branches
/// of the Descartes formulas by their tangency residual.
fn seed_children(a: Circle, b: Circle, c: Circle) -> [Circle; 2] {
    let ks = [a.k, b.k, c.k];
    let root = (a.k * b.k + b.k * c.k + c.k * a.k).max(0.0).sqrt();
    let zroot = (a.kz * b.kz + b.kz * c.kz + c.kz * a.kz).sqrt();
    let sum_k: f64 = ks.iter().sum();
    let sum_kz = a.kz + b.kz + c.kz;
    let parents = [a.disk(), b.disk(), c.disk()];
    let mut cand: Vec<(f64, Circle)> = Vec::new();
    for sk in [1.0, -1.0] {
        for sz in [1.0, -1.0] {
            let k = sum_k + sk * 2.0 * root;
            if k == 0.0 {
                continue;
            }
            let circle = Circle {
                k,
                kz: sum_kz + zroot * (2.0 * sz),
            };
            let d = circle.disk();
            let res = parents
                .iter()
                .map(|p| tangency_residual(p, &d).abs() / (p.radius.min(d.radius)))
                .fold(0.0, f64::max);
            cand.push((res, circle));
        }
    }
    cand.sort_by(|x, y| x.0.total_cmp(&y.0));
    let first = cand[0].1;
    let second = cand[1..]
        .iter()
        .map(|c| c.1)
        .find(|c| (c.center() - first.center()).norm() > DESCARTES_TOL || (c.k - first.k).abs() > DESCARTES_TOL)
        .unwrap_or(first);
    [first, second]
}

fn key(c: &Circle) -> (i64, i64, i64) {
    let z = c.center();
    let q = |x: f64| (x / DESCARTES_TOL).round() as i64;
    (q(c.k), q(z.re), q(z.im))
}

/// Canonical seed: the enclosing unit circle and two disks of radius 1/2.
pub fn canonical_seed() -> [Disk; 3] {
    [
        Disk::enclosing(Point::new(0.0, 0.0), 1.0),
        Disk::new(Point::new(-0.5, 0.0), 0.5),
        Disk::new(Point::new(0.5, 0.0), 0.5),
    ]
}

/// All gasket disks of radius at least `min_radius` inside the unit circle,
/// excluding the enclosing circle, sorted by curvature then center.
pub fn generate_apollonian(min_radius: f64) -> Result<Vec<ApollonianNode>> {
    generate_apollonian_from(canonical_seed(), min_radius)
}

/// Like [`generate_apollonian`] from three mutually tangent seed circles, the
/// first of which is the enclosing one (negative curvature).
pub fn generate_apollonian_from(seed: [Disk; 3], min_radius: f64) -> Result<Vec<ApollonianNode>> {
    let outer = seed[0].radius;
    if !(min_radius > 0.0 && min_radius < outer) {
        return Err(Error::InvalidArgument(format!(
            "min_radius {min_radius} must lie in (0, {outer})"
        )));
    }
    for d in &seed {
        d.validate()?;
    }
    if seed[0].curvature >= 0.0 || seed[1].curvature <= 0.0 || seed[2].curvature <= 0.0 {
        return Err(Error::InvalidArgument(
            "seed must be one enclosing circle followed by two inner circles".into(),
        ));
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let r = tangency_residual(&seed[i], &seed[j]).abs();
        if r > DESCARTES_TOL * outer {
            return Err(Error::InvalidArgument(format!("seed circles {i} and {j} are not tangent")));
        }
    }
    let kmax = 1.0 / min_radius;
    let [a, b, c] = seed.map(|d| Circle::from_disk(&d));
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (k, d) in seed.iter().enumerate() {
        seen.insert(key(&[a, b, c][k]));
        if k > 0 && d.radius >= min_radius {
            // a seed disk touches only two circles; the enclosing one is repeated
            out.push(ApollonianNode {
                disk: *d,
                depth: 0,
                parents: [seed[0].curvature, seed[3 - k].curvature, seed[0].curvature],
            });
        }
    }
    // queue entries: three tangent circles and the new one they produced
    let mut queue: VecDeque<([Circle; 3], Circle, u32)> = VecDeque::new();
    let [c1, c2] = seed_children(a, b, c);
    for child in [c1, c2] {
        if child.k <= kmax && seen.insert(key(&child)) {
            queue.push_back(([a, b, c], child, 1));
        }
    }
    while let Some((p, d, depth)) = queue.pop_front() {
        out.push(ApollonianNode {
            disk: d.disk(),
            depth,
            parents: [p[0].k, p[1].k, p[2].k],
        });
        // each pair of parents with the new circle bounds a fresh gap; the
        // circle already filling the other side is the remaining parent
        for (x, y, old) in [(p[0], p[1], p[2]), (p[0], p[2], p[1]), (p[1], p[2], p[0])] {
            let k = 2.0 * (x.k + y.k + d.k) - old.k;
            if k > kmax {
                continue;
            }
            let child = Circle {
                k,
                kz: (x.kz + y.kz + d.kz) * 2.0 - old.kz,
            };
            if seen.insert(key(&child)) {
                queue.push_back(([x, y, d], child, depth + 1));
            }
        }
    }
    out.sort_by(|u, v| {
        u.disk
            .curvature
            .total_cmp(&v.disk.curvature)
            .then(u.disk.center.x.total_cmp(&v.disk.center.x))
            .then(u.disk.center.y.total_cmp(&v.disk.center.y))
    });
    Ok(out)
}

/// The generated disks as a cluster, largest first. The enclosing circle is
/// the boundary of the union in the limit and is not a region.
pub fn apollonian_cluster(nodes: &[ApollonianNode]) -> Cluster {
    Cluster::new_unchecked(nodes.iter().map(|n| Region::Disk(n.disk)).collect())
}

/// `sum pi r^2` over the nodes.
pub fn covered_area(nodes: &[ApollonianNode]) -> f64 {
    nodes.iter().map(|n| std::f64::consts::PI * n.disk.radius * n.disk.radius).sum()
}
