//! Norms on the plane used by anisotropic perimeters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// A norm given by a centrally symmetric convex polygon as its unit ball.
///
/// The norm is evaluated as `phi(u) = max_j g_j . u` where `g_j` is the
/// outward normal of edge `j` divided by its distance from the origin. The
/// points `g_j` are the vertices of the Wulff shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct PolygonalNorm {
    vertices: Vec<Point>,
    duals: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    vertices: Vec<Point>,
}

impl TryFrom<PolygonRepr> for PolygonalNorm {
    type Error = Error;

    fn try_from(r: PolygonRepr) -> Result<Self> {
        PolygonalNorm::new(r.vertices)
    }
}

impl From<PolygonalNorm> for PolygonRepr {
    fn from(n: PolygonalNorm) -> Self {
        PolygonRepr { vertices: n.vertices }
    }
}

impl PolygonalNorm {
    /// `vertices` lists the unit ball counterclockwise.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        let bad = |msg: &str| Err(Error::InvalidArgument(format!("unit ball polygon: {msg}")));
        if n < 4 || n % 2 == 1 {
            return bad("needs an even number of at least 4 vertices");
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return bad("vertices must be finite");
        }
        let scale = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for k in 0..n / 2 {
            if vertices[k].dist(-vertices[k + n / 2]) > 1e-12 * scale {
                return bad("must be centrally symmetric");
            }
        }
        let mut duals = Vec::with_capacity(n);
        for k in 0..n {
            let a = vertices[k];
            let b = vertices[(k + 1) % n];
            let c = vertices[(k + 2) % n];
            if (b - a).cross(c - b) <= 0.0 {
                return bad("must be strictly convex and counterclockwise");
            }
            let d = b - a;
            let normal = d.rot_cw() * (1.0 / d.norm());
            let h = normal.dot(a);
            if h <= 0.0 {
                return bad("must contain the origin in its interior");
            }
            duals.push(normal * (1.0 / h));
        }
        Ok(PolygonalNorm { vertices, duals })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Vertices of the Wulff shape.
    pub fn duals(&self) -> &[Point] {
        &self.duals
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Norm {
    Euclidean,
    /// `|x| + |y|`
    Manhattan,
    Polygonal(PolygonalNorm),
}

fn manhattan_duals() -> [Point; 4] {
    [
        Point::new(1.0, -1.0),
        Point::new(1.0, 1.0),
        Point::new(-1.0, 1.0),
        Point::new(-1.0, -1.0),
    ]
}

impl Norm {
    pub fn eval(&self, v: Point) -> f64 {
        match self {
            Norm::Euclidean => v.norm(),
            Norm::Manhattan => v.x.abs() + v.y.abs(),
            Norm::Polygonal(p) => p.duals.iter().map(|g| g.dot(v)).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Wulff shape vertices, or `None` for the Euclidean norm.
    pub fn wulff_vertices(&self) -> Option<Vec<Point>> {
        match self {
            Norm::Euclidean => None,
            Norm::Manhattan => Some(manhattan_duals().to_vec()),
            Norm::Polygonal(p) => Some(p.duals.clone()),
        }
    }

    /// Directions in which `phi` restricted to the unit circle has a kink:
    /// the polar angles of the unit-ball vertices.
    pub fn kink_angles(&self) -> Vec<f64> {
        match self {
            Norm::Euclidean => Vec::new(),
            Norm::Manhattan => (0..4).map(|k| k as f64 * std::f64::consts::FRAC_PI_2).collect(),
            Norm::Polygonal(p) => p.vertices.iter().map(|v| v.angle()).collect(),
        }
    }

    /// Area of the Wulff shape `{x : x . u <= phi(u) for all u}`.
    pub fn wulff_area(&self) -> f64 {
        match self.wulff_vertices() {
            None => std::f64::consts::PI,
            Some(w) => {
                let n = w.len();
                0.5 * (0..n).map(|k| w[k].cross(w[(k + 1) % n])).sum::<f64>()
            }
        }
    }

    /// Parses `euclid`, `manhattan`, or a JSON polygonal norm object.
    pub fn from_json(text: &str) -> Result<Norm> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Least anisotropic perimeter of a set of area `a`, attained by the scaled
/// Wulff shape: `2 sqrt(a |W|)`.
pub fn wulff_lower_bound(a: f64, norm: &Norm) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("area {a} must be positive")));
    }
    Ok(2.0 * (a * norm.wulff_area()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn octagon() -> PolygonalNorm {
        PolygonalNorm::new((0..8).map(|k| Point::polar(k as f64 * PI / 4.0)).collect()).unwrap()
    }

    #[test]
    fn manhattan_as_polygon_agrees() {
        let diamond = PolygonalNorm::new(vec![
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(-1.0, 0.0),
            Point::new(0.0, -1.0),
        ])
        .unwrap();
        let p = Norm::Polygonal(diamond);
        for k in 0..50 {
            let v = Point::polar(k as f64 * 0.37) * 1.7;
            assert!((p.eval(v) - Norm::Manhattan.eval(v)).abs() < 1e-14);
        }
        assert!((p.wulff_area() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn wulff_bounds() {
        assert_eq!(wulff_lower_bound(1.0, &Norm::Manhattan).unwrap(), 4.0);
        assert_eq!(wulff_lower_bound(0.25, &Norm::Manhattan).unwrap(), 2.0);
        assert!((wulff_lower_bound(PI, &Norm::Euclidean).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!(wulff_lower_bound(0.0, &Norm::Euclidean).is_err());
    }

    #[test]
    fn octagon_norm_is_one_on_vertices() {
        let n = Norm::Polygonal(octagon());
        for v in octagon().vertices() {
            assert!((n.eval(*v) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_polygons() {
        let skew = vec![
            Point::new(2.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(-1.0, 0.0),
            Point::new(0.0, -1.0),
        ];
        assert!(PolygonalNorm::new(skew).is_err());
        let cw: Vec<Point> = octagon().vertices().iter().rev().copied().collect();
        assert!(PolygonalNorm::new(cw).is_err());
    }

    #[test]
    fn json_forms() {
        assert_eq!(Norm::from_json(r#"{"kind":"manhattan"}"#).unwrap(), Norm::Manhattan);
        let text = r#"{"kind":"polygonal","vertices":[[1,0],[0,1],[-1,0],[0,-1]]}"#;
        let n = Norm::from_json(text).unwrap();
        assert_eq!(n.eval(Point::new(0.5, -0.5)), 1.0);
    }
}
