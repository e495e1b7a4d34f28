//! Cluster regions and their classical measures.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{winding_number, BBox, Edge, Point};
use crate::marching;

/// Relative tolerance for consecutive edge endpoints to coincide.
pub const CLOSURE_TOL: f64 = 1e-12;

/// A disk `B_r(x)`. The curvature is `+1/r`, or `-1/r` when the circle is
/// used as an enclosing boundary in a packing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
    pub curvature: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Self {
        Disk {
            center,
            radius,
            curvature: 1.0 / radius,
        }
    }

    pub fn enclosing(center: Point, radius: f64) -> Self {
        Disk {
            center,
            radius,
            curvature: -1.0 / radius,
        }
    }

    /// Disk with the given signed curvature; the radius is `1/|k|`.
    pub fn from_curvature(center: Point, curvature: f64) -> Self {
        Disk {
            center,
            radius: 1.0 / curvature.abs(),
            curvature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite() && self.center.is_finite()) {
            return Err(Error::InvalidRegion(format!("disk radius {} must be positive and finite", self.radius)));
        }
        let kr = self.curvature * self.radius;
        if (kr.abs() - 1.0).abs() > 4.0 * f64::EPSILON {
            return Err(Error::InvalidRegion(format!(
                "disk curvature {} is not +-1/radius for radius {}",
                self.curvature, self.radius
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRect {
    pub min: Point,
    pub max: Point,
}

impl AxisRect {
    pub fn new(min: Point, max: Point) -> Self {
        AxisRect { min, max }
    }

    pub fn square(min: Point, side: f64) -> Self {
        AxisRect {
            min,
            max: Point::new(min.x + side, min.y + side),
        }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.max.x > self.min.x && self.max.y > self.min.y) {
            return Err(Error::InvalidRegion(format!(
                "rectangle corners {:?} .. {:?} do not span a positive area",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn edges(&self) -> Vec<Edge> {
        let (a, c) = (self.min, self.max);
        let b = Point::new(c.x, a.y);
        let d = Point::new(a.x, c.y);
        vec![
            Edge::Segment { a, b },
            Edge::Segment { a: b, b: c },
            Edge::Segment { a: c, b: d },
            Edge::Segment { a: d, b: a },
        ]
    }
}

/// Region bounded by one or more counterclockwise loops of segments and arcs.
/// Holes are loops with clockwise orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcPolygon {
    pub loops: Vec<Vec<Edge>>,
}

impl ArcPolygon {
    pub fn new(loops: Vec<Vec<Edge>>) -> Result<Self> {
        let p = ArcPolygon { loops };
        p.validate()?;
        Ok(p)
    }

    pub fn signed_area(&self) -> f64 {
        self.loops.iter().flatten().map(Edge::green_area).sum()
    }

    pub fn bbox(&self) -> BBox {
        self.loops
            .iter()
            .flatten()
            .fold(BBox::EMPTY, |b, e| b.union(e.bbox()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.loops.is_empty() || self.loops.iter().any(Vec::is_empty) {
            return Err(Error::InvalidRegion("arc polygon needs non-empty loops".into()));
        }
        for e in self.loops.iter().flatten() {
            if !e.is_finite() {
                return Err(Error::InvalidRegion("arc polygon has non-finite coordinates".into()));
            }
            if let Edge::Arc { radius, sweep, .. } = *e {
                if !(radius > 0.0) || sweep == 0.0 || sweep.abs() > TAU * (1.0 + 1e-15) {
                    return Err(Error::InvalidRegion(format!("bad arc radius {radius} / sweep {sweep}")));
                }
            }
        }
        let scale = self.bbox().diagonal().max(f64::MIN_POSITIVE);
        for (li, lp) in self.loops.iter().enumerate() {
            for (k, e) in lp.iter().enumerate() {
                let next = &lp[(k + 1) % lp.len()];
                let gap = e.end_point().dist(next.start_point());
                if gap > CLOSURE_TOL * scale {
                    return Err(Error::InvalidRegion(format!(
                        "loop {li} is open after edge {k} (gap {gap:e})"
                    )));
                }
            }
        }
        if !(self.signed_area() > 0.0) {
            return Err(Error::InvalidRegion("arc polygon must have positive signed area".into()));
        }
        Ok(())
    }

    fn loop_boxes(&self) -> Vec<BBox> {
        self.loops
            .iter()
            .map(|l| l.iter().fold(BBox::EMPTY, |b, e| b.union(e.bbox())))
            .collect()
    }

    pub fn contains(&self, p: Point) -> bool {
        let boxes = self.loop_boxes();
        let mut total = 0.0;
        for (lp, bb) in self.loops.iter().zip(&boxes) {
            if bb.contains(p) {
                total += lp.iter().map(|e| e.winding_angle(p)).sum::<f64>();
            }
        }
        (total / TAU).round() as i64 != 0
    }
}

/// Cell set on a uniform grid with spacing `h`; cell `(i, j)` covers
/// `origin + h * [i, i+1] x [j, j+1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PixelMaskRepr", into = "PixelMaskRepr")]
pub struct PixelMask {
    pub origin: Point,
    pub h: f64,
    pub width: usize,
    pub height: usize,
    cells: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct PixelMaskRepr {
    origin: Point,
    h: f64,
    width: usize,
    height: usize,
    /// One string of '0'/'1' per row, bottom row first.
    rows: Vec<String>,
}

impl TryFrom<PixelMaskRepr> for PixelMask {
    type Error = Error;
    fn try_from(r: PixelMaskRepr) -> Result<Self> {
        if r.rows.len() != r.height {
            return Err(Error::InvalidRegion(format!("pixel mask has {} rows, expected {}", r.rows.len(), r.height)));
        }
        let mut cells = Vec::with_capacity(r.width * r.height);
        for row in &r.rows {
            if row.len() != r.width {
                return Err(Error::InvalidRegion("pixel mask row has wrong length".into()));
            }
            for c in row.chars() {
                match c {
                    '0' => cells.push(false),
                    '1' => cells.push(true),
                    _ => return Err(Error::InvalidRegion(format!("bad pixel mask character {c:?}"))),
                }
            }
        }
        PixelMask::new(r.origin, r.h, r.width, r.height, cells)
    }
}

impl From<PixelMask> for PixelMaskRepr {
    fn from(m: PixelMask) -> Self {
        let rows = m
            .cells
            .chunks(m.width.max(1))
            .take(m.height)
            .map(|row| row.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect();
        PixelMaskRepr {
            origin: m.origin,
            h: m.h,
            width: m.width,
            height: m.height,
            rows,
        }
    }
}

impl PixelMask {
    pub fn new(origin: Point, h: f64, width: usize, height: usize, cells: Vec<bool>) -> Result<Self> {
        let m = PixelMask {
            origin,
            h,
            width,
            height,
            cells,
        };
        m.validate()?;
        Ok(m)
    }

    /// Rasterises `inside` at cell centers.
    pub fn from_fn(origin: Point, h: f64, width: usize, height: usize, inside: impl Fn(Point) -> bool) -> Result<Self> {
        let mut cells = Vec::with_capacity(width * height);
        for j in 0..height {
            for i in 0..width {
                cells.push(inside(origin + Point::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)));
            }
        }
        PixelMask::new(origin, h, width, height, cells)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite() && self.origin.is_finite()) {
            return Err(Error::InvalidRegion(format!("pixel size {} must be positive", self.h)));
        }
        if self.cells.len() != self.width * self.height {
            return Err(Error::InvalidRegion("pixel mask cell count does not match its size".into()));
        }
        if self.count() == 0 {
            return Err(Error::InvalidRegion("pixel mask is empty".into()));
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[j * self.width + i]
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn same_grid(&self, o: &PixelMask) -> bool {
        self.origin == o.origin && self.h == o.h && self.width == o.width && self.height == o.height
    }

    pub fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        let u = (p.x - self.origin.x) / self.h;
        let v = (p.y - self.origin.y) / self.h;
        if u < 0.0 || v < 0.0 {
            return None;
        }
        let (i, j) = (u as usize, v as usize);
        (i < self.width && j < self.height).then_some((i, j))
    }

    pub fn bbox(&self) -> BBox {
        let mut bb = BBox::EMPTY;
        for j in 0..self.height {
            for i in 0..self.width {
                if self.get(i, j) {
                    let lo = self.origin + Point::new(i as f64 * self.h, j as f64 * self.h);
                    bb = bb.with_point(lo).with_point(lo + Point::new(self.h, self.h));
                }
            }
        }
        bb
    }

    pub fn perimeter(&self) -> f64 {
        marching::smoothed_perimeter(self.width, self.height, |i, j| self.get(i, j)) * self.h
    }

    pub fn edge_count_perimeter(&self) -> f64 {
        marching::edge_count_perimeter(self.width, self.height, |i, j| self.get(i, j)) as f64 * self.h
    }
}

/// One region of a cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Region {
    #[serde(rename = "disk")]
    Disk(Disk),
    #[serde(rename = "rect")]
    Rect(AxisRect),
    #[serde(rename = "arcpoly")]
    ArcPoly(ArcPolygon),
    #[serde(rename = "pixels")]
    Pixels(PixelMask),
}

impl Region {
    pub fn validate(&self) -> Result<()> {
        match self {
            Region::Disk(d) => d.validate(),
            Region::Rect(r) => r.validate(),
            Region::ArcPoly(p) => p.validate(),
            Region::Pixels(m) => m.validate(),
        }
    }

    /// Lebesgue measure of the region.
    pub fn area(&self) -> f64 {
        match self {
            Region::Disk(d) => PI * d.radius * d.radius,
            Region::Rect(r) => r.width() * r.height(),
            Region::ArcPoly(p) => p.signed_area(),
            Region::Pixels(m) => m.count() as f64 * m.h * m.h,
        }
    }

    /// Classical perimeter `H^1` of the boundary.
    pub fn perimeter(&self) -> f64 {
        match self {
            Region::Disk(d) => TAU * d.radius,
            Region::Rect(r) => 2.0 * (r.width() + r.height()),
            Region::ArcPoly(p) => p.loops.iter().flatten().map(Edge::length).sum(),
            Region::Pixels(m) => m.perimeter(),
        }
    }

    pub fn bbox(&self) -> BBox {
        match self {
            Region::Disk(d) => BBox {
                min: d.center - Point::new(d.radius, d.radius),
                max: d.center + Point::new(d.radius, d.radius),
            },
            Region::Rect(r) => BBox { min: r.min, max: r.max },
            Region::ArcPoly(p) => p.bbox(),
            Region::Pixels(m) => m.bbox(),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Region::Disk(d) => p.dist(d.center) < d.radius,
            Region::Rect(r) => p.x > r.min.x && p.x < r.max.x && p.y > r.min.y && p.y < r.max.y,
            Region::ArcPoly(poly) => poly.contains(p),
            Region::Pixels(m) => m.cell_of(p).is_some_and(|(i, j)| m.get(i, j)),
        }
    }

    /// Boundary as counterclockwise loops of exact edges.
    pub fn boundary_loops(&self) -> Result<Vec<Vec<Edge>>> {
        match self {
            Region::Disk(d) => Ok(vec![vec![Edge::full_circle(d.center, d.radius)]]),
            Region::Rect(r) => Ok(vec![r.edges()]),
            Region::ArcPoly(p) => Ok(p.loops.clone()),
            Region::Pixels(_) => Err(Error::Unsupported(
                "pixel masks have no exact boundary; polygonize first".into(),
            )),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Region::Pixels(_))
    }

    /// Image under `x -> scale * x + offset`.
    pub fn transformed(&self, scale: f64, offset: Point) -> Region {
        match self {
            Region::Disk(d) => Region::Disk(Disk {
                center: d.center * scale + offset,
                radius: d.radius * scale,
                curvature: d.curvature / scale,
            }),
            Region::Rect(r) => Region::Rect(AxisRect {
                min: r.min * scale + offset,
                max: r.max * scale + offset,
            }),
            Region::ArcPoly(p) => Region::ArcPoly(ArcPolygon {
                loops: p
                    .loops
                    .iter()
                    .map(|l| l.iter().map(|e| e.transformed(scale, offset)).collect())
                    .collect(),
            }),
            Region::Pixels(m) => Region::Pixels(PixelMask {
                origin: m.origin * scale + offset,
                h: m.h * scale,
                ..m.clone()
            }),
        }
    }
}

/// Point-in-region test for exact regions given their loops.
pub fn loops_contain(loops: &[Vec<Edge>], p: Point) -> bool {
    winding_number(loops, p) != 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn upper_half_disk() -> ArcPolygon {
        ArcPolygon::new(vec![vec![
            Edge::Segment {
                a: Point::new(-1.0, 0.0),
                b: Point::new(1.0, 0.0),
            },
            Edge::Arc {
                center: Point::new(0.0, 0.0),
                radius: 1.0,
                start: 0.0,
                sweep: PI,
            },
        ]])
        .unwrap()
    }

    #[test]
    fn closed_form_areas() {
        assert_eq!(Region::Disk(Disk::new(Point::default(), 1.0)).area(), PI);
        let r = Region::Rect(AxisRect::new(Point::new(0.0, 0.0), Point::new(1.0, 1.0)));
        assert_eq!(r.area(), 1.0);
        assert_eq!(r.perimeter(), 4.0);
        assert_eq!(Region::Rect(AxisRect::square(Point::default(), 2.0)).perimeter(), 8.0);
    }

    #[test]
    fn half_disk_area_against_point_count() {
        let half = upper_half_disk();
        let green = half.signed_area();
        assert!((green - PI / 2.0).abs() < 1e-15);
        // independent estimate: fraction of random points of [-1,1]x[0,1] inside
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10_000;
        let mut hits = 0;
        for _ in 0..n {
            let p = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.0..1.0));
            if p.norm() < 1.0 {
                hits += 1;
            }
            assert_eq!(half.contains(p), p.norm() < 1.0);
        }
        let mc = 2.0 * hits as f64 / n as f64;
        let se = 2.0 * (0.25f64 * PI * (1.0 - 0.25 * PI) / n as f64).sqrt();
        assert!((mc - green).abs() < 4.0 * se);
    }

    #[test]
    fn degenerate_geometry_is_rejected() {
        assert!(Disk::new(Point::default(), 0.0).validate().is_err());
        assert!(AxisRect::new(Point::new(0.0, 0.0), Point::new(0.0, 1.0)).validate().is_err());
        let mut d = Disk::new(Point::default(), 2.0);
        d.curvature = 1.0;
        assert!(d.validate().is_err());
        // clockwise loop has negative area
        let cw = ArcPolygon {
            loops: vec![AxisRect::square(Point::default(), 1.0)
                .edges()
                .iter()
                .rev()
                .map(Edge::reversed)
                .collect()],
        };
        assert!(cw.validate().is_err());
        let open = ArcPolygon {
            loops: vec![AxisRect::square(Point::default(), 1.0).edges()[..3].to_vec()],
        };
        assert!(open.validate().is_err());
    }

    #[test]
    fn pixel_disk_perimeter_within_two_percent() {
        let h = 1.0 / 128.0;
        let m = PixelMask::from_fn(Point::new(-1.25, -1.25), h, 320, 320, |p| p.norm() <= 1.0).unwrap();
        let r = Region::Pixels(m);
        let rel = r.perimeter() / TAU - 1.0;
        assert!(rel.abs() < 0.02, "{rel}");
        assert!((r.area() / PI - 1.0).abs() < 0.01);
    }

    #[test]
    fn pixel_mask_json_round_trip() {
        let m = PixelMask::from_fn(Point::new(0.1, -0.3), 0.1, 5, 4, |p| p.x > 0.3).unwrap();
        let r = Region::Pixels(m);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"type\":\"pixels\""));
        let back: Region = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
