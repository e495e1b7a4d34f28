//! Planar primitives: points, bounding boxes and boundary edges.
//!
//! Region boundaries are sequences of [`Edge`]s, each either a line segment
//! or a circular arc. Loops are oriented counterclockwise around the region
//! they bound, so the region lies to the left of every edge.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { x: c, y: s }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Clockwise quarter turn. For a counterclockwise boundary this maps the
    /// tangent to the outward normal.
    pub fn rot_cw(self) -> Point {
        Point::new(self.y, -self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point::new(v[0], v[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub const EMPTY: BBox = BBox {
        min: Point::new(f64::INFINITY, f64::INFINITY),
        max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    };

    pub fn from_points(points: impl IntoIterator<Item = Point>) -> BBox {
        points.into_iter().fold(BBox::EMPTY, |b, p| b.with_point(p))
    }

    pub fn with_point(self, p: Point) -> BBox {
        BBox {
            min: Point::new(self.min.x.min(p.x), self.min.y.min(p.y)),
            max: Point::new(self.max.x.max(p.x), self.max.y.max(p.y)),
        }
    }

    pub fn union(self, o: BBox) -> BBox {
        self.with_point(o.min).with_point(o.max)
    }

    pub fn expand(self, eps: f64) -> BBox {
        BBox {
            min: Point::new(self.min.x - eps, self.min.y - eps),
            max: Point::new(self.max.x + eps, self.max.y + eps),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.min.x > self.max.x || self.min.y > self.max.y
    }

    pub fn overlaps(&self, o: &BBox) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diagonal(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.width().hypot(self.height())
        }
    }

    pub fn center(&self) -> Point {
        (self.min + self.max) * 0.5
    }
}

/// One piece of an oriented boundary.
///
/// Arcs are parametrised by angle: the point at parameter `t` in `[0, 1]`
/// sits at angle `start + t * sweep` on the circle. A positive sweep runs
/// counterclockwise around the center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Edge {
    Segment {
        a: Point,
        b: Point,
    },
    Arc {
        center: Point,
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

impl Edge {
    pub fn full_circle(center: Point, radius: f64) -> Edge {
        Edge::Arc {
            center,
            radius,
            start: 0.0,
            sweep: TAU,
        }
    }

    pub fn point_at(&self, t: f64) -> Point {
        match *self {
            Edge::Segment { a, b } => a + (b - a) * t,
            Edge::Arc {
                center,
                radius,
                start,
                sweep,
            } => center + Point::polar(start + t * sweep) * radius,
        }
    }

    pub fn start_point(&self) -> Point {
        match *self {
            Edge::Segment { a, .. } => a,
            _ => self.point_at(0.0),
        }
    }

    pub fn end_point(&self) -> Point {
        match *self {
            Edge::Segment { b, .. } => b,
            _ => self.point_at(1.0),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Edge::Segment { a, b } => a.dist(b),
            Edge::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Signed curvature; positive when the edge turns counterclockwise.
    pub fn curvature(&self) -> f64 {
        match *self {
            Edge::Segment { .. } => 0.0,
            Edge::Arc { radius, sweep, .. } => sweep.signum() / radius,
        }
    }

    /// Outward unit normal at parameter `t` for a counterclockwise loop.
    pub fn outward_normal(&self, t: f64) -> Point {
        match *self {
            Edge::Segment { a, b } => {
                let d = b - a;
                d.rot_cw() * (1.0 / d.norm())
            }
            Edge::Arc { start, sweep, .. } => Point::polar(start + t * sweep) * sweep.signum(),
        }
    }

    /// `1/2 * integral of (x dy - y dx)` along the edge.
    pub fn green_area(&self) -> f64 {
        match *self {
            Edge::Segment { a, b } => 0.5 * a.cross(b),
            Edge::Arc {
                center: c,
                radius: r,
                start,
                sweep,
            } => {
                let t0 = start;
                let t1 = start + sweep;
                0.5 * (r * (c.x * (t1.sin() - t0.sin()) - c.y * (t1.cos() - t0.cos())) + r * r * sweep)
            }
        }
    }

    pub fn reversed(&self) -> Edge {
        match *self {
            Edge::Segment { a, b } => Edge::Segment { a: b, b: a },
            Edge::Arc {
                center,
                radius,
                start,
                sweep,
            } => Edge::Arc {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
        }
    }

    /// Sub-edge between parameters `t0 < t1`.
    pub fn sub(&self, t0: f64, t1: f64) -> Edge {
        match *self {
            Edge::Segment { .. } => Edge::Segment {
                a: self.point_at(t0),
                b: self.point_at(t1),
            },
            Edge::Arc {
                center,
                radius,
                start,
                sweep,
            } => Edge::Arc {
                center,
                radius,
                start: start + t0 * sweep,
                sweep: (t1 - t0) * sweep,
            },
        }
    }

    pub fn transformed(&self, scale: f64, offset: Point) -> Edge {
        match *self {
            Edge::Segment { a, b } => Edge::Segment {
                a: a * scale + offset,
                b: b * scale + offset,
            },
            Edge::Arc {
                center,
                radius,
                start,
                sweep,
            } => Edge::Arc {
                center: center * scale + offset,
                radius: radius * scale,
                start,
                sweep,
            },
        }
    }

    pub fn bbox(&self) -> BBox {
        match *self {
            Edge::Segment { a, b } => BBox::from_points([a, b]),
            Edge::Arc { center, radius, .. } => {
                let mut bb = BBox::from_points([self.start_point(), self.end_point()]);
                for k in 0..4 {
                    let ang = k as f64 * PI / 2.0;
                    if self.param_of_angle(ang, 1e-12).is_some() {
                        bb = bb.with_point(center + Point::polar(ang) * radius);
                    }
                }
                bb
            }
        }
    }

    /// Counterclockwise angular interval `[lo, lo + width]` covered by an arc.
    fn ccw_interval(start: f64, sweep: f64) -> (f64, f64) {
        if sweep >= 0.0 {
            (start, sweep)
        } else {
            (start + sweep, -sweep)
        }
    }

    /// Parameter of the point at polar angle `angle`, if it lies on the arc.
    pub fn param_of_angle(&self, angle: f64, eps: f64) -> Option<f64> {
        let Edge::Arc { start, sweep, .. } = *self else {
            return None;
        };
        let span = sweep.abs();
        let d = ((angle - start) * sweep.signum()).rem_euclid(TAU);
        if d <= span + eps {
            Some((d / span).min(1.0))
        } else if d >= TAU - eps {
            Some(0.0)
        } else {
            None
        }
    }

    /// Parameter of the point on the edge closest to `p`, with its distance.
    pub fn closest(&self, p: Point) -> (f64, f64) {
        match *self {
            Edge::Segment { a, b } => {
                let d = b - a;
                let l2 = d.dot(d);
                let t = if l2 > 0.0 { ((p - a).dot(d) / l2).clamp(0.0, 1.0) } else { 0.0 };
                (t, self.point_at(t).dist(p))
            }
            Edge::Arc { center, radius, .. } => {
                let v = p - center;
                if v.norm() > 0.0 {
                    if let Some(t) = self.param_of_angle(v.angle(), 0.0) {
                        return (t, (v.norm() - radius).abs());
                    }
                }
                let d0 = self.start_point().dist(p);
                let d1 = self.end_point().dist(p);
                if d0 <= d1 {
                    (0.0, d0)
                } else {
                    (1.0, d1)
                }
            }
        }
    }

    /// Contribution of this edge to the winding angle around `p`.
    ///
    /// `p` must not lie on the edge.
    pub fn winding_angle(&self, p: Point) -> f64 {
        let a = self.start_point() - p;
        let b = self.end_point() - p;
        let chord = a.cross(b).atan2(a.dot(b));
        match *self {
            Edge::Segment { .. } => chord,
            Edge::Arc {
                center,
                radius,
                sweep,
                ..
            } => {
                // arc + reversed chord is a simple loop; add its winding when p is inside it
                if p.dist(center) >= radius {
                    return chord;
                }
                let inside = if sweep.abs() >= TAU - 1e-12 {
                    true
                } else {
                    let s = self.start_point();
                    let e = self.end_point();
                    let m = self.point_at(0.5);
                    let side_m = (e - s).cross(m - s);
                    let side_p = (e - s).cross(p - s);
                    side_m * side_p > 0.0
                };
                if inside {
                    chord + TAU * sweep.signum()
                } else {
                    chord
                }
            }
        }
    }

    /// Angular (for arcs) or linear samples used for extreme-point searches.
    pub fn sample_points(&self, max_step: f64) -> Vec<Point> {
        match *self {
            Edge::Segment { a, b } => vec![a, b],
            Edge::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let mut pts = vec![self.start_point(), self.end_point()];
                let (lo, width) = Edge::ccw_interval(start, sweep);
                let k0 = (lo / max_step).ceil() as i64;
                let k1 = ((lo + width) / max_step).floor() as i64;
                for k in k0..=k1 {
                    pts.push(center + Point::polar(k as f64 * max_step) * radius);
                }
                pts
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            Edge::Segment { a, b } => a.is_finite() && b.is_finite(),
            Edge::Arc {
                center,
                radius,
                start,
                sweep,
            } => center.is_finite() && radius.is_finite() && start.is_finite() && sweep.is_finite(),
        }
    }
}

/// Parameter intervals on `e1` along which `e2` runs over the same curve.
///
/// Returns `(t_lo, t_hi, opposite)` triples in `e1`'s parametrisation, where
/// `opposite` is true when the two edges traverse the shared piece in
/// opposite directions (a proper interface between two regions).
pub fn shared_intervals(e1: &Edge, e2: &Edge, tol: f64) -> Vec<(f64, f64, bool)> {
    match (*e1, *e2) {
        (Edge::Segment { a: a1, b: b1 }, Edge::Segment { a: a2, b: b2 }) => {
            let d1 = b1 - a1;
            let l1 = d1.norm();
            let d2 = b2 - a2;
            if l1 <= tol || d2.norm() <= tol {
                return Vec::new();
            }
            let n = d1.rot_cw() * (1.0 / l1);
            if n.dot(a2 - a1).abs() > tol || n.dot(b2 - a1).abs() > tol {
                return Vec::new();
            }
            let ta = (a2 - a1).dot(d1) / (l1 * l1);
            let tb = (b2 - a1).dot(d1) / (l1 * l1);
            let lo = ta.min(tb).max(0.0);
            let hi = ta.max(tb).min(1.0);
            if (hi - lo) * l1 > tol {
                vec![(lo, hi, d1.dot(d2) < 0.0)]
            } else {
                Vec::new()
            }
        }
        (
            Edge::Arc {
                center: c1,
                radius: r1,
                start: s1,
                sweep: w1,
            },
            Edge::Arc {
                center: c2,
                radius: r2,
                start: s2,
                sweep: w2,
            },
        ) => {
            if c1.dist(c2) > tol || (r1 - r2).abs() > tol {
                return Vec::new();
            }
            let (lo1, span1) = Edge::ccw_interval(s1, w1);
            let (lo2, span2) = Edge::ccw_interval(s2, w2);
            let ang_tol = tol / r1;
            let opposite = w1.signum() != w2.signum();
            let mut out = Vec::new();
            // shift the second interval so its start sits just above lo1
            let base = lo2 + ((lo1 - lo2) / TAU).floor() * TAU;
            for k in -1..=1 {
                let b_lo = base + k as f64 * TAU;
                let lo = lo1.max(b_lo);
                let hi = (lo1 + span1).min(b_lo + span2);
                if hi - lo > ang_tol {
                    // map the angular interval back to e1's parameter
                    let (t_lo, t_hi) = if w1 >= 0.0 {
                        ((lo - lo1) / span1, (hi - lo1) / span1)
                    } else {
                        (1.0 - (hi - lo1) / span1, 1.0 - (lo - lo1) / span1)
                    };
                    out.push((t_lo.clamp(0.0, 1.0), t_hi.clamp(0.0, 1.0), opposite));
                }
            }
            out.sort_by(|a, b| a.0.total_cmp(&b.0));
            out
        }
        _ => Vec::new(),
    }
}

/// Crossing or touching points of two edges, as `(t1, t2)` parameter pairs.
///
/// Collinear or concentric overlaps are not reported; see [`shared_intervals`].
pub fn intersections(e1: &Edge, e2: &Edge, tol: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    match (*e1, *e2) {
        (Edge::Segment { a: a1, b: b1 }, Edge::Segment { a: a2, b: b2 }) => {
            let d1 = b1 - a1;
            let d2 = b2 - a2;
            let den = d1.cross(d2);
            let scale = d1.norm() * d2.norm();
            if den.abs() <= 1e-14 * scale {
                // parallel: only endpoint contacts matter
                for (t, p) in [(0.0, a1), (1.0, b1)] {
                    let (u, d) = e2.closest(p);
                    if d <= tol {
                        out.push((t, u));
                    }
                }
                for (u, p) in [(0.0, a2), (1.0, b2)] {
                    let (t, d) = e1.closest(p);
                    if d <= tol {
                        out.push((t, u));
                    }
                }
                return out;
            }
            let w = a2 - a1;
            let t = w.cross(d2) / den;
            let u = w.cross(d1) / den;
            let et = tol / d1.norm();
            let eu = tol / d2.norm();
            if t >= -et && t <= 1.0 + et && u >= -eu && u <= 1.0 + eu {
                out.push((t.clamp(0.0, 1.0), u.clamp(0.0, 1.0)));
            }
        }
        (Edge::Segment { .. }, Edge::Arc { .. }) => {
            for (u, t) in segment_arc(e1, e2, tol) {
                out.push((u, t));
            }
        }
        (Edge::Arc { .. }, Edge::Segment { .. }) => {
            for (u, t) in segment_arc(e2, e1, tol) {
                out.push((t, u));
            }
        }
        (
            Edge::Arc {
                center: c1,
                radius: r1,
                ..
            },
            Edge::Arc {
                center: c2,
                radius: r2,
                ..
            },
        ) => {
            let dv = c2 - c1;
            let d = dv.norm();
            if d <= tol {
                return out;
            }
            let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
            let h2 = r1 * r1 - a * a;
            // tangency shows up as a slightly negative h^2
            if h2 < -2.0 * tol * (r1 + r2) {
                return out;
            }
            let h = h2.max(0.0).sqrt();
            let base = c1 + dv * (a / d);
            let perp = Point::new(-dv.y, dv.x) * (1.0 / d);
            let cands: Vec<Point> = if h <= tol {
                vec![base]
            } else {
                vec![base + perp * h, base - perp * h]
            };
            for p in cands {
                let t = e1.param_of_angle((p - c1).angle(), tol / r1);
                let u = e2.param_of_angle((p - c2).angle(), tol / r2);
                if let (Some(t), Some(u)) = (t, u) {
                    out.push((t, u));
                }
            }
        }
    }
    out
}

fn segment_arc(seg: &Edge, arc: &Edge, tol: f64) -> Vec<(f64, f64)> {
    let (Edge::Segment { a, b }, Edge::Arc { center, radius, .. }) = (*seg, *arc) else {
        return Vec::new();
    };
    let d = b - a;
    let f = a - center;
    let qa = d.dot(d);
    let qb = 2.0 * f.dot(d);
    let qc = f.dot(f) - radius * radius;
    let disc = qb * qb - 4.0 * qa * qc;
    // allow tangency within tolerance
    let slack = 4.0 * qa * (2.0 * tol * radius);
    if disc < -slack {
        return Vec::new();
    }
    let sq = disc.max(0.0).sqrt();
    let roots: Vec<f64> = if sq == 0.0 {
        vec![-qb / (2.0 * qa)]
    } else {
        vec![(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)]
    };
    let et = tol / d.norm();
    let mut out = Vec::new();
    for u in roots {
        if u < -et || u > 1.0 + et {
            continue;
        }
        let p = a + d * u;
        if let Some(t) = arc.param_of_angle((p - center).angle(), tol / radius) {
            out.push((u.clamp(0.0, 1.0), t));
        }
    }
    out
}

/// Winding number of a set of closed loops around `p`.
pub fn winding_number(loops: &[Vec<Edge>], p: Point) -> i64 {
    let total: f64 = loops.iter().flatten().map(|e| e.winding_angle(p)).sum();
    (total / TAU).round() as i64
}

/// Candidate pairs `(i, j)`, `i < j`, whose boxes overlap after expansion by `eps`.
pub fn overlapping_pairs(boxes: &[BBox], eps: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[a].min.x.total_cmp(&boxes[b].min.x));
    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for &i in &order {
        let bi = boxes[i].expand(eps);
        active.retain(|&j| boxes[j].max.x + eps >= bi.min.x);
        for &j in &active {
            if bi.overlaps(&boxes[j].expand(eps)) {
                out.push((i.min(j), i.max(j)));
            }
        }
        active.push(i);
    }
    out.sort_unstable();
    out
}

/// Convex hull (counterclockwise, no collinear points) by monotone chain.
pub fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Largest pairwise distance in a point set.
pub fn point_set_diameter(pts: Vec<Point>) -> f64 {
    let hull = convex_hull(pts);
    let mut best: f64 = 0.0;
    for (i, &p) in hull.iter().enumerate() {
        for &q in &hull[i + 1..] {
            best = best.max(p.dist(q));
        }
    }
    best
}
