//! The standard double bubble with two equal areas.
//!
//! Two outer arcs of 240 degrees on circles of radius `R` centered at
//! `(-R/2, 0)` and `(R/2, 0)`, joined by the straight chord `x = 0` of length
//! `sqrt(3) R`. The three curves meet at 120 degrees at `(0, +-sqrt(3) R / 2)`.

use std::f64::consts::PI;

use crate::cluster::Cluster;
use crate::error::{Error, Result};
use crate::geometry::{Edge, Point};
use crate::region::{ArcPolygon, Region};

/// Radius of the outer arcs for enclosed area `area` per region:
/// each region is a 240 degree sector plus a triangle,
/// `area = R^2 (2 pi / 3 + sqrt(3) / 4)`.
pub fn double_bubble_radius(area: f64) -> f64 {
    (area / (2.0 * PI / 3.0 + 3f64.sqrt() / 4.0)).sqrt()
}

/// `(8 pi / 3 + sqrt(3)) R`: two outer arcs and the shared chord.
pub fn double_bubble_perimeter(area: f64) -> f64 {
    (8.0 * PI / 3.0 + 3f64.sqrt()) * double_bubble_radius(area)
}

/// The two regions as arc polygons, centered at `center`.
pub fn standard_double_bubble(area: f64, center: Point) -> Result<Cluster> {
    if !(area > 0.0 && area.is_finite()) {
        return Err(Error::InvalidArgument(format!("area {area} must be positive")));
    }
    let r = double_bubble_radius(area);
    let top = center + Point::new(0.0, 0.5 * 3f64.sqrt() * r);
    let bottom = center - Point::new(0.0, 0.5 * 3f64.sqrt() * r);
    let left = vec![
        Edge::Arc {
            center: center - Point::new(0.5 * r, 0.0),
            radius: r,
            start: PI / 3.0,
            sweep: 4.0 * PI / 3.0,
        },
        Edge::Segment { a: bottom, b: top },
    ];
    let right = vec![
        Edge::Arc {
            center: center + Point::new(0.5 * r, 0.0),
            radius: r,
            start: -2.0 * PI / 3.0,
            sweep: 4.0 * PI / 3.0,
        },
        Edge::Segment { a: top, b: bottom },
    ];
    Ok(Cluster::new_unchecked(vec![
        Region::ArcPoly(ArcPolygon::new(vec![left])?),
        Region::ArcPoly(ArcPolygon::new(vec![right])?),
    ]))
}
