//! Planar clusters: exact and pixel regions, classical, anisotropic and
//! fractional perimeters, packings, and an annealed grid minimizer.

pub mod areaspec;
pub mod boundary;
pub mod cluster;
pub mod error;
pub mod functionals;
pub mod geometry;
pub mod manifest;
pub mod marching;
pub mod minimizer;
pub mod packings;
pub mod region;
pub mod report;
pub mod svg;

pub use boundary::{BoundaryMesh, MeshSegment};
pub use cluster::Cluster;
pub use error::{Error, Result};
pub use geometry::{Edge, Point};
pub use region::{ArcPolygon, AxisRect, Disk, PixelMask, Region};
