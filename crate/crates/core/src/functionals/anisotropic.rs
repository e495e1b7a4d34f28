//! Anisotropic perimeter `P_phi(E) = integral over the boundary of phi(nu)`.

use std::f64::consts::TAU;

use crate::cluster::Cluster;
use crate::error::{Error, Result};
use crate::geometry::{Edge, Point};
use crate::region::Region;

use super::norm::Norm;

/// `integral of phi(nu) ds` along one edge of a counterclockwise loop.
///
/// On an arc, `phi` restricted to the normal direction is smooth between the
/// kink angles of the norm, and on each such piece a polygonal norm is a
/// single linear form, so the integral is evaluated in closed form.
pub fn edge_integral(edge: &Edge, norm: &Norm) -> f64 {
    match *edge {
        Edge::Segment { .. } => norm.eval(edge.outward_normal(0.0)) * edge.length(),
        Edge::Arc { radius, sweep, .. } if matches!(norm, Norm::Euclidean) => radius * sweep.abs(),
        Edge::Arc {
            radius, start, sweep, ..
        } => {
            let sigma = sweep.signum();
            let (lo, width) = if sweep >= 0.0 {
                (start, sweep)
            } else {
                (start + sweep, -sweep)
            };
            let hi = lo + width;
            let mut cuts = vec![lo, hi];
            for k in norm.kink_angles() {
                let mut a = lo + (k - lo).rem_euclid(TAU);
                while a < hi {
                    cuts.push(a);
                    a += TAU;
                }
            }
            cuts.sort_by(f64::total_cmp);
            let duals = norm.wulff_vertices().expect("non-euclidean norms have a wulff polygon");
            let mut total = 0.0;
            for w in cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                if b <= a {
                    continue;
                }
                let mid = Point::polar(0.5 * (a + b)) * sigma;
                let g = duals
                    .iter()
                    .copied()
                    .max_by(|p, q| p.dot(mid).total_cmp(&q.dot(mid)))
                    .unwrap();
                // integral of g . (cos t, sin t) over [a, b]
                let (sa, ca) = a.sin_cos();
                let (sb, cb) = b.sin_cos();
                total += sigma * (g.x * (sb - sa) - g.y * (cb - ca));
            }
            radius * total
        }
    }
}

pub fn anisotropic_perimeter(region: &Region, norm: &Norm) -> Result<f64> {
    match region {
        Region::Pixels(_) => Err(Error::Unsupported(
            "anisotropic perimeter of a pixel mask; polygonize first".into(),
        )),
        Region::Rect(r) if matches!(norm, Norm::Manhattan) => Ok(2.0 * (r.width() + r.height())),
        _ => Ok(region
            .boundary_loops()?
            .iter()
            .flatten()
            .map(|e| edge_integral(e, norm))
            .sum()),
    }
}

/// Half-sum of anisotropic perimeters including the union.
pub fn anisotropic_cluster_perimeter(c: &Cluster, norm: &Norm) -> Result<f64> {
    let mut own = 0.0;
    for r in c.regions() {
        own += anisotropic_perimeter(r, norm)?;
    }
    if c.is_empty() {
        return Ok(0.0);
    }
    let union: f64 = c
        .mesh()?
        .segments
        .iter()
        .filter(|s| s.right == crate::boundary::EXTERNAL)
        .map(|s| edge_integral(&s.edge, norm))
        .sum();
    Ok(0.5 * (union + own))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{AxisRect, Disk};
    use std::f64::consts::PI;

    fn unit_disk() -> Region {
        Region::Disk(Disk::new(Point::new(0.3, -0.2), 1.0))
    }

    /// Composite Simpson on the parametrised boundary, as an independent check.
    fn simpson(edge: &Edge, norm: &Norm, n: usize) -> f64 {
        let h = 1.0 / n as f64;
        let f = |t: f64| norm.eval(edge.outward_normal(t));
        let mut s = f(0.0) + f(1.0);
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
        }
        s * h / 3.0 * edge.length()
    }

    #[test]
    fn disk_closed_forms() {
        assert!((anisotropic_perimeter(&unit_disk(), &Norm::Euclidean).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((anisotropic_perimeter(&unit_disk(), &Norm::Manhattan).unwrap() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn arcs_match_quadrature() {
        let arcs = [
            Edge::Arc {
                center: Point::new(0.0, 0.0),
                radius: 2.0,
                start: 0.3,
                sweep: 2.5,
            },
            Edge::Arc {
                center: Point::new(1.0, 0.0),
                radius: 0.5,
                start: 4.0,
                sweep: -3.7,
            },
        ];
        for a in &arcs {
            let exact = edge_integral(a, &Norm::Manhattan);
            // the integrand has kinks, so Simpson converges slowly; 1e-6 is plenty
            assert!((exact - simpson(a, &Norm::Manhattan, 200_000)).abs() < 1e-6);
        }
    }

    #[test]
    fn manhattan_square_and_pixels() {
        let sq = Region::Rect(AxisRect::square(Point::new(0.0, 0.0), 0.7));
        assert_eq!(anisotropic_perimeter(&sq, &Norm::Manhattan).unwrap(), 4.0 * 0.7);
        let mask = crate::region::PixelMask::new(Point::default(), 1.0, 1, 1, vec![true]).unwrap();
        assert!(matches!(
            anisotropic_perimeter(&Region::Pixels(mask), &Norm::Manhattan),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn disjoint_squares_cluster() {
        let c = Cluster::new(vec![
            Region::Rect(AxisRect::square(Point::new(0.0, 0.0), 1.0)),
            Region::Rect(AxisRect::square(Point::new(3.0, 0.0), 1.0)),
        ])
        .unwrap();
        assert_eq!(anisotropic_cluster_perimeter(&c, &Norm::Manhattan).unwrap(), 8.0);
    }
}
