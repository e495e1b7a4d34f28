//! SVG pictures of clusters: one element per region, the y axis pointing up.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::cluster::Cluster;
use crate::error::{Error, Result};
use crate::geometry::{BBox, Edge, Point};
use crate::minimizer::GridCluster;
use crate::region::{PixelMask, Region};

pub const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

fn num(v: f64) -> String {
    let s = format!("{v:.7}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

struct Canvas {
    bbox: BBox,
    out: String,
}

impl Canvas {
    fn new(bbox: BBox) -> Canvas {
        let bbox = if bbox.is_empty() {
            BBox {
                min: Point::new(0.0, 0.0),
                max: Point::new(1.0, 1.0),
            }
        } else {
            bbox
        };
        let (w, h) = (bbox.width(), bbox.height());
        let m = 0.02 * w.max(h);
        let stroke = 0.002 * w.max(h);
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
            num(-m),
            num(-m),
            num(w + 2.0 * m),
            num(h + 2.0 * m)
        )
        .unwrap();
        writeln!(
            out,
            r##"<g stroke="#222222" stroke-width="{}" stroke-linejoin="round" fill-rule="evenodd">"##,
            num(stroke)
        )
        .unwrap();
        Canvas { bbox, out }
    }

    fn map(&self, p: Point) -> (String, String) {
        (num(p.x - self.bbox.min.x), num(self.bbox.max.y - p.y))
    }

    fn fill(k: usize) -> &'static str {
        PALETTE[k % PALETTE.len()]
    }

    fn circle(&mut self, k: usize, c: Point, r: f64) {
        let (x, y) = self.map(c);
        writeln!(self.out, r#"<circle cx="{x}" cy="{y}" r="{}" fill="{}"/>"#, num(r), Canvas::fill(k)).unwrap();
    }

    fn path(&mut self, k: usize, d: &str) {
        writeln!(self.out, r#"<path d="{d}" fill="{}"/>"#, Canvas::fill(k)).unwrap();
    }

    fn loop_data(&self, edges: &[Edge], d: &mut String) {
        let Some(first) = edges.first() else { return };
        let (x, y) = self.map(first.start_point());
        write!(d, "M{x} {y}").unwrap();
        for e in edges {
            match *e {
                Edge::Segment { b, .. } => {
                    let (x, y) = self.map(b);
                    write!(d, "L{x} {y}").unwrap();
                }
                Edge::Arc { radius, sweep, .. } => {
                    // an SVG arc cannot close on itself, so long arcs go in halves
                    let parts = if sweep.abs() > 1.5 * PI { 2 } else { 1 };
                    for i in 1..=parts {
                        let (x, y) = self.map(e.point_at(i as f64 / parts as f64));
                        let large = (sweep.abs() / parts as f64 > PI) as u8;
                        // with y flipped, counterclockwise is the positive SVG direction
                        let positive = (sweep > 0.0) as u8;
                        write!(d, "A{r} {r} 0 {large} {positive} {x} {y}", r = num(radius)).unwrap();
                    }
                }
            }
        }
        d.push('Z');
    }

    fn pixel_data(&self, origin: Point, h: f64, width: usize, height: usize, inside: impl Fn(usize, usize) -> bool) -> String {
        let mut d = String::new();
        for j in 0..height {
            let mut i = 0;
            while i < width {
                if !inside(i, j) {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < width && inside(i, j) {
                    i += 1;
                }
                let (x, y) = self.map(origin + Point::new(start as f64 * h, (j + 1) as f64 * h));
                write!(d, "M{x} {y}h{}v{}h-{}Z", num((i - start) as f64 * h), num(h), num((i - start) as f64 * h))
                    .unwrap();
            }
        }
        d
    }

    fn region(&mut self, k: usize, r: &Region) {
        match r {
            Region::Disk(disk) => self.circle(k, disk.center, disk.radius),
            Region::Rect(q) => {
                let (x, y) = self.map(Point::new(q.min.x, q.max.y));
                writeln!(
                    self.out,
                    r#"<rect x="{x}" y="{y}" width="{}" height="{}" fill="{}"/>"#,
                    num(q.width()),
                    num(q.height()),
                    Canvas::fill(k)
                )
                .unwrap();
            }
            Region::ArcPoly(p) => {
                let mut d = String::new();
                for l in &p.loops {
                    self.loop_data(l, &mut d);
                }
                self.path(k, &d);
            }
            Region::Pixels(m) => {
                let d = self.mask_data(m);
                self.path(k, &d);
            }
        }
    }

    fn mask_data(&self, m: &PixelMask) -> String {
        self.pixel_data(m.origin, m.h, m.width, m.height, |i, j| m.get(i, j))
    }

    fn finish(mut self) -> String {
        self.out.push_str("</g>\n</svg>\n");
        self.out
    }
}

/// Region `k` is filled with `PALETTE[k % 10]`.
pub fn cluster_svg(c: &Cluster) -> String {
    let mut canvas = Canvas::new(c.bbox());
    for (k, r) in c.regions().iter().enumerate() {
        canvas.region(k, r);
    }
    canvas.finish()
}

/// One path per label `1..=N`; the external region is left blank.
pub fn grid_svg(g: &GridCluster) -> String {
    let s = g.spec;
    let bbox = BBox {
        min: s.origin,
        max: s.origin + Point::new(s.width as f64 * s.h, s.height as f64 * s.h),
    };
    let mut canvas = Canvas::new(bbox);
    let (x, y) = canvas.map(Point::new(bbox.min.x, bbox.max.y));
    writeln!(
        canvas.out,
        r##"<rect x="{x}" y="{y}" width="{}" height="{}" fill="none" stroke="#999999"/>"##,
        num(bbox.width()),
        num(bbox.height())
    )
    .unwrap();
    for k in 1..=g.regions() {
        let d = canvas.pixel_data(s.origin, s.h, s.width, s.height, |i, j| g.label(i, j) as usize == k);
        // paths carry no stroke so that cell seams do not show
        writeln!(canvas.out, r#"<path d="{d}" fill="{}" stroke="none"/>"#, Canvas::fill(k - 1)).unwrap();
    }
    canvas.finish()
}

pub fn write_svg(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimizer::GridSpec;
    use crate::packings::{build_square_gasket, figure_areas, standard_double_bubble};
    use crate::region::Disk;

    #[test]
    fn unit_disk_is_one_circle() {
        let c = Cluster::new(vec![Region::Disk(Disk::new(Point::new(0.0, 0.0), 1.0))]).unwrap();
        let svg = cluster_svg(&c);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(r#"cx="1" cy="1" r="1""#), "{svg}");
    }

    #[test]
    fn one_element_per_region_and_deterministic() {
        let c = build_square_gasket(&figure_areas(3)).unwrap();
        let a = cluster_svg(&c);
        assert_eq!(a.matches("<rect").count(), 10);
        assert_eq!(a, cluster_svg(&c));
        let b = cluster_svg(&standard_double_bubble(1.0, Point::default()).unwrap());
        assert_eq!(b.matches("<path").count(), 2);
        // the upper left square is drawn at the top of the picture
        assert!(a.contains(r#"<rect x="0" y="0" width="0.5" height="0.5""#), "{a}");
    }

    #[test]
    fn grid_paths_per_label() {
        let spec = GridSpec::new(4, 2, 1.0);
        let g = GridCluster::new(spec, vec![1, 1, 0, 2, 0, 2, 2, 0], vec![2.0, 3.0]).unwrap();
        let svg = grid_svg(&g);
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains("M0 1h2v1h-2Z"), "{svg}");
        assert!(svg.contains("M1 0h2v1h-2Z"), "{svg}");
    }
}
