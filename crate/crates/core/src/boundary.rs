//! Boundary meshes: the boundary of a cluster cut into pieces that each
//! separate exactly two regions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{intersections, overlapping_pairs, point_set_diameter, shared_intervals, BBox, Edge, Point};
use crate::region::{loops_contain, Region};

/// Label of the external region `E_0`.
pub const EXTERNAL: usize = 0;

/// Relative tolerance used when matching boundary pieces of different regions.
pub const MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshSegment {
    pub edge: Edge,
    /// Region on the left of the edge direction.
    pub left: usize,
    /// Region on the right; `0` for the external region.
    pub right: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMesh {
    pub segments: Vec<MeshSegment>,
}

struct Piece {
    t0: f64,
    t1: f64,
    neighbor: usize,
}

impl BoundaryMesh {
    /// Splits every region boundary into interfaces. Labels are region
    /// indices plus one; pieces not shared with another region face `E_0`.
    pub fn from_regions(regions: &[Region]) -> Result<BoundaryMesh> {
        let mut edges: Vec<(usize, Edge)> = Vec::new();
        for (k, r) in regions.iter().enumerate() {
            for lp in r.boundary_loops()? {
                edges.extend(lp.into_iter().map(|e| (k + 1, e)));
            }
        }
        let boxes: Vec<BBox> = edges.iter().map(|(_, e)| e.bbox()).collect();
        let scale = boxes.iter().fold(BBox::EMPTY, |a, b| a.union(*b)).diagonal();
        let tol = MATCH_TOL * scale;

        let mut shared: Vec<Vec<Piece>> = (0..edges.len()).map(|_| Vec::new()).collect();
        for (i, j) in overlapping_pairs(&boxes, tol) {
            let (li, ei) = edges[i];
            let (lj, ej) = edges[j];
            if li == lj {
                continue;
            }
            for (t0, t1, opposite) in shared_intervals(&ei, &ej, tol) {
                if !opposite {
                    return Err(Error::MalformedMesh(format!(
                        "regions {} and {} lie on the same side of a shared edge",
                        li - 1,
                        lj - 1
                    )));
                }
                shared[i].push(Piece { t0, t1, neighbor: lj });
            }
            for (t0, t1, _) in shared_intervals(&ej, &ei, tol) {
                shared[j].push(Piece { t0, t1, neighbor: li });
            }
        }

        let mut segments = Vec::new();
        for ((label, edge), mut pieces) in edges.into_iter().zip(shared) {
            pieces.sort_by(|a, b| a.t0.total_cmp(&b.t0));
            let len = edge.length();
            let mut push = |t0: f64, t1: f64, neighbor: usize| {
                if (t1 - t0) * len > tol && (neighbor == EXTERNAL || neighbor > label) {
                    segments.push(MeshSegment {
                        edge: edge.sub(t0, t1),
                        left: label,
                        right: neighbor,
                    });
                }
            };
            let mut cursor = 0.0;
            for p in pieces {
                if p.t0 > cursor {
                    push(cursor, p.t0, EXTERNAL);
                }
                let start = p.t0.max(cursor);
                if p.t1 > start {
                    push(start, p.t1, p.neighbor);
                    cursor = p.t1;
                }
            }
            if cursor < 1.0 {
                push(cursor, 1.0, EXTERNAL);
            }
        }
        Ok(BoundaryMesh { segments })
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Total length of all interfaces, each counted once.
    pub fn interface_length(&self) -> Result<f64> {
        for (k, s) in self.segments.iter().enumerate() {
            if s.left == s.right {
                return Err(Error::MalformedMesh(format!(
                    "segment {k} has the same region {} on both sides",
                    s.left
                )));
            }
        }
        Ok(self.segments.iter().map(|s| s.edge.length()).sum())
    }

    /// Length of the pieces facing the external region, i.e. `P(E_0)`.
    pub fn external_length(&self) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.left == EXTERNAL || s.right == EXTERNAL)
            .map(|s| s.edge.length())
            .sum()
    }

    /// Length of the boundary of region `label`.
    pub fn region_length(&self, label: usize) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.left == label || s.right == label)
            .map(|s| s.edge.length())
            .sum()
    }

    /// Largest distance between two boundary points. Arcs are sampled at
    /// their endpoints and at every multiple of pi/64 they pass through.
    pub fn diameter(&self) -> Result<f64> {
        if self.segments.is_empty() {
            return Err(Error::EmptyBoundary);
        }
        let step = std::f64::consts::PI / 64.0;
        let pts: Vec<Point> = self.segments.iter().flat_map(|s| s.edge.sample_points(step)).collect();
        Ok(point_set_diameter(pts))
    }

    /// Number of connected components of the union of all pieces.
    pub fn components(&self) -> usize {
        let n = self.segments.len();
        if n == 0 {
            return 0;
        }
        let boxes: Vec<BBox> = self.segments.iter().map(|s| s.edge.bbox()).collect();
        let scale = boxes.iter().fold(BBox::EMPTY, |a, b| a.union(*b)).diagonal();
        let tol = MATCH_TOL * scale;
        let mut uf = UnionFind::new(n);
        for (i, j) in overlapping_pairs(&boxes, tol) {
            let (a, b) = (&self.segments[i].edge, &self.segments[j].edge);
            let touch = [a.start_point(), a.end_point()].iter().any(|&p| b.closest(p).1 <= tol)
                || [b.start_point(), b.end_point()].iter().any(|&p| a.closest(p).1 <= tol)
                || !intersections(a, b, tol).is_empty();
            if touch {
                uf.union(i, j);
            }
        }
        uf.count()
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// Area of `A ∩ B` for two regions.
///
/// Disks and rectangles use closed forms. Other exact regions go through
/// Green's theorem on the boundary of the intersection: pieces of each
/// boundary lying inside the other region, plus shared pieces traversed in
/// the same direction.
pub fn overlap_area(a: &Region, b: &Region) -> Result<f64> {
    if !a.bbox().overlaps(&b.bbox()) {
        return Ok(0.0);
    }
    match (a, b) {
        (Region::Disk(p), Region::Disk(q)) => Ok(lens_area(p.radius, q.radius, p.center.dist(q.center))),
        (Region::Rect(p), Region::Rect(q)) => {
            let w = (p.max.x.min(q.max.x) - p.min.x.max(q.min.x)).max(0.0);
            let h = (p.max.y.min(q.max.y) - p.min.y.max(q.min.y)).max(0.0);
            Ok(w * h)
        }
        (Region::Pixels(p), Region::Pixels(q)) => {
            if !p.same_grid(q) {
                return Err(Error::Unsupported("pixel masks on different grids".into()));
            }
            let common = p.cells().iter().zip(q.cells()).filter(|(x, y)| **x && **y).count();
            Ok(common as f64 * p.h * p.h)
        }
        (Region::Pixels(_), _) | (_, Region::Pixels(_)) => {
            Err(Error::Unsupported("cannot mix pixel masks with exact regions".into()))
        }
        _ => Ok(green_overlap(&a.boundary_loops()?, &b.boundary_loops()?).max(0.0)),
    }
}

fn lens_area(r1: f64, r2: f64, d: f64) -> f64 {
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return std::f64::consts::PI * r * r;
    }
    // half-angles from the half chord, which stays accurate near tangency
    let k = ((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)).max(0.0).sqrt();
    let half_chord = k / (2.0 * d);
    let x1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let segment = |r: f64, x: f64| {
        let t = 2.0 * half_chord.atan2(x);
        let rest = if t < 1e-2 {
            t.powi(3) / 6.0 - t.powi(5) / 120.0 + t.powi(7) / 5040.0
        } else {
            t - t.sin()
        };
        0.5 * r * r * rest
    };
    segment(r1, x1) + segment(r2, d - x1)
}

fn green_overlap(la: &[Vec<Edge>], lb: &[Vec<Edge>]) -> f64 {
    let ea: Vec<Edge> = la.iter().flatten().copied().collect();
    let eb: Vec<Edge> = lb.iter().flatten().copied().collect();
    let mut boxes: Vec<BBox> = ea.iter().map(Edge::bbox).collect();
    boxes.extend(eb.iter().map(Edge::bbox));
    let scale = boxes.iter().fold(BBox::EMPTY, |a, b| a.union(*b)).diagonal();
    let tol = MATCH_TOL * scale;

    let na = ea.len();
    let mut cuts: Vec<Vec<f64>> = vec![vec![0.0, 1.0]; na + eb.len()];
    let mut same: Vec<Vec<(f64, f64, bool)>> = vec![Vec::new(); na + eb.len()];
    for (i, j) in overlapping_pairs(&boxes, tol) {
        // only pairs across the two regions
        if (i < na) == (j < na) {
            continue;
        }
        let (i, j) = if i < na { (i, j) } else { (j, i) };
        let (e1, e2) = (&ea[i], &eb[j - na]);
        for (t, u) in intersections(e1, e2, tol) {
            cuts[i].push(t);
            cuts[j].push(u);
        }
        for (t0, t1, opp) in shared_intervals(e1, e2, tol) {
            cuts[i].extend([t0, t1]);
            same[i].push((t0, t1, opp));
        }
        for (t0, t1, opp) in shared_intervals(e2, e1, tol) {
            cuts[j].extend([t0, t1]);
            same[j].push((t0, t1, opp));
        }
    }

    let lb_boxes = loop_boxes(lb);
    let la_boxes = loop_boxes(la);
    let mut area = 0.0;
    for (k, e) in ea.iter().chain(eb.iter()).enumerate() {
        let in_a = k < na;
        let (other, other_boxes) = if in_a { (lb, &lb_boxes) } else { (la, &la_boxes) };
        let ts = &mut cuts[k];
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if (t1 - t0) * e.length() <= tol {
                continue;
            }
            let tm = 0.5 * (t0 + t1);
            let include = match same[k].iter().find(|s| tm > s.0 && tm < s.1) {
                // shared piece: counted once when both traverse it the same way
                Some(&(_, _, opposite)) => in_a && !opposite,
                None => {
                    let p = e.point_at(tm);
                    let candidates: Vec<Vec<Edge>> = other
                        .iter()
                        .zip(other_boxes)
                        .filter(|(_, bb)| bb.contains(p))
                        .map(|(l, _)| l.clone())
                        .collect();
                    !candidates.is_empty() && loops_contain(&candidates, p)
                }
            };
            if include {
                area += e.sub(t0, t1).green_area();
            }
        }
    }
    area
}

fn loop_boxes(loops: &[Vec<Edge>]) -> Vec<BBox> {
    loops
        .iter()
        .map(|l| l.iter().fold(BBox::EMPTY, |b, e| b.union(e.bbox())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{ArcPolygon, AxisRect, Disk};
    use std::f64::consts::PI;

    fn sq(x: f64, y: f64, s: f64) -> Region {
        Region::Rect(AxisRect::square(Point::new(x, y), s))
    }

    fn as_poly(r: &Region) -> Region {
        Region::ArcPoly(ArcPolygon::new(r.boundary_loops().unwrap()).unwrap())
    }

    #[test]
    fn shared_edge_splits_into_interfaces() {
        let regions = vec![sq(0.0, 0.0, 1.0), sq(1.0, 0.0, 1.0)];
        let mesh = BoundaryMesh::from_regions(&regions).unwrap();
        let inner: f64 = mesh
            .segments
            .iter()
            .filter(|s| s.left == 1 && s.right == 2)
            .map(|s| s.edge.length())
            .sum();
        assert!((inner - 1.0).abs() < 1e-15);
        assert!((mesh.external_length() - 6.0).abs() < 1e-14);
        assert!((mesh.interface_length().unwrap() - 7.0).abs() < 1e-14);
        assert!(mesh.is_connected());
    }

    #[test]
    fn one_label_segment_is_malformed() {
        let mesh = BoundaryMesh {
            segments: vec![MeshSegment {
                edge: Edge::full_circle(Point::default(), 1.0),
                left: 1,
                right: 1,
            }],
        };
        assert!(matches!(mesh.interface_length(), Err(Error::MalformedMesh(_))));
        assert!(matches!(BoundaryMesh::default().diameter(), Err(Error::EmptyBoundary)));
    }

    #[test]
    fn far_disks_are_two_components() {
        let regions = vec![
            Region::Disk(Disk::new(Point::new(-2.0, 0.0), 1.0)),
            Region::Disk(Disk::new(Point::new(2.0, 0.0), 1.0)),
        ];
        let mesh = BoundaryMesh::from_regions(&regions).unwrap();
        assert_eq!(mesh.components(), 2);
        let tangent = vec![
            Region::Disk(Disk::new(Point::new(-1.0, 0.0), 1.0)),
            Region::Disk(Disk::new(Point::new(1.0, 0.0), 1.0)),
        ];
        assert_eq!(BoundaryMesh::from_regions(&tangent).unwrap().components(), 1);
    }

    #[test]
    fn overlap_areas_closed_form_and_green_agree() {
        let a = sq(0.0, 0.0, 1.0);
        let b = sq(0.5, 0.25, 1.0);
        let exact = overlap_area(&a, &b).unwrap();
        assert!((exact - 0.375).abs() < 1e-15);
        let green = overlap_area(&as_poly(&a), &as_poly(&b)).unwrap();
        assert!((green - exact).abs() < 1e-12, "{green}");

        let d1 = Region::Disk(Disk::new(Point::new(0.0, 0.0), 1.0));
        let d2 = Region::Disk(Disk::new(Point::new(1.0, 0.0), 1.0));
        let lens = overlap_area(&d1, &d2).unwrap();
        let expected = 2.0 * PI / 3.0 - 3f64.sqrt() / 2.0;
        assert!((lens - expected).abs() < 1e-12);
        let g = overlap_area(&as_poly(&d1), &as_poly(&d2)).unwrap();
        assert!((g - expected).abs() < 1e-12, "{g}");
    }

    #[test]
    fn adjacent_exact_regions_do_not_overlap() {
        let a = as_poly(&sq(0.0, 0.0, 1.0));
        let b = as_poly(&sq(1.0, 0.0, 1.0));
        assert!(overlap_area(&a, &b).unwrap().abs() < 1e-15);
        let c = as_poly(&sq(0.0, 0.0, 1.0));
        assert!((overlap_area(&a, &c).unwrap() - 1.0).abs() < 1e-15);
        let inner = as_poly(&sq(0.25, 0.25, 0.5));
        assert!((overlap_area(&a, &inner).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn lens_area_is_stable_near_tangency() {
        use std::f64::consts::PI;
        // equal circles at distance d: 2 r^2 acos(d / 2r) - d/2 sqrt(4r^2 - d^2)
        let exact = |d: f64| 2.0 * (d / 2.0).acos() - 0.5 * d * (4.0 - d * d).sqrt();
        for d in [0.3, 1.0, 1.9] {
            assert!((lens_area(1.0, 1.0, d) - exact(d)).abs() < 1e-14);
        }
        assert!((lens_area(1.0, 0.5, 0.25) - PI * 0.25).abs() < 1e-15);
        assert!((lens_area(2.0, 1.0, 2.5) - lens_area(1.0, 2.0, 2.5)).abs() < 1e-15);
        // a tangency missed by one rounding step overlaps by ~eps^1.5
        let d = 1.0 - f64::EPSILON;
        assert!(lens_area(0.5, 0.5, d) < 1e-20);
    }
}
