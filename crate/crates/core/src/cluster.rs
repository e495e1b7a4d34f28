//! Finite clusters and the classical cluster perimeter.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::boundary::{overlap_area, BoundaryMesh};
use crate::error::{Error, Result};
use crate::geometry::{overlapping_pairs, BBox};
use crate::marching;
use crate::region::{PixelMask, Region};

/// Largest overlap between two regions, relative to the smaller area, that
/// still counts as essentially disjoint.
pub const OVERLAP_TOL: f64 = 1e-10;

/// An ordered sequence of essentially disjoint regions. The external region
/// is the complement of their union and is never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ClusterRepr", into = "ClusterRepr")]
pub struct Cluster {
    regions: Vec<Region>,
}

#[derive(Serialize, Deserialize)]
struct ClusterRepr {
    regions: Vec<Region>,
}

impl TryFrom<ClusterRepr> for Cluster {
    type Error = Error;

    fn try_from(r: ClusterRepr) -> Result<Cluster> {
        Cluster::new(r.regions)
    }
}

impl From<Cluster> for ClusterRepr {
    fn from(c: Cluster) -> ClusterRepr {
        ClusterRepr { regions: c.regions }
    }
}

impl Cluster {
    /// Validates every region and checks pairwise essential disjointness.
    pub fn new(regions: Vec<Region>) -> Result<Cluster> {
        for (k, r) in regions.iter().enumerate() {
            r.validate()
                .map_err(|e| Error::InvalidRegion(format!("region {k}: {e}")))?;
        }
        let boxes: Vec<BBox> = regions.iter().map(Region::bbox).collect();
        let areas: Vec<f64> = regions.iter().map(Region::area).collect();
        for (i, j) in overlapping_pairs(&boxes, 0.0) {
            let (i, j) = (i.min(j), i.max(j));
            let area = overlap_area(&regions[i], &regions[j])?;
            if area > OVERLAP_TOL * areas[i].min(areas[j]) {
                return Err(Error::Overlap {
                    first: i,
                    second: j,
                    area,
                });
            }
        }
        Ok(Cluster { regions })
    }

    /// For constructions that are disjoint by design; skips the pairwise
    /// overlap check, which is quadratic in the worst case.
    pub(crate) fn new_unchecked(regions: Vec<Region>) -> Cluster {
        Cluster { regions }
    }

    pub fn empty() -> Cluster {
        Cluster { regions: Vec::new() }
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn into_regions(self) -> Vec<Region> {
        self.regions
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    /// Areas `|E_1|, |E_2|, ...` in order.
    pub fn measures(&self) -> Vec<f64> {
        self.regions.iter().map(Region::area).collect()
    }

    pub fn bbox(&self) -> BBox {
        self.regions.iter().fold(BBox::EMPTY, |b, r| b.union(r.bbox()))
    }

    /// The first `n` regions (all of them if there are fewer).
    pub fn truncate(&self, n: usize) -> Result<Cluster> {
        if n == 0 {
            return Err(Error::InvalidArgument("truncation length must be at least 1".into()));
        }
        Ok(Cluster {
            regions: self.regions[..n.min(self.len())].to_vec(),
        })
    }

    pub fn mesh(&self) -> Result<BoundaryMesh> {
        BoundaryMesh::from_regions(&self.regions)
    }

    fn pixel_union(&self) -> Result<Option<PixelMask>> {
        let Some(Region::Pixels(first)) = self.regions.first() else {
            if self.regions.iter().any(|r| !r.is_exact()) {
                return Err(Error::Unsupported("cannot mix pixel masks with exact regions".into()));
            }
            return Ok(None);
        };
        let mut cells = first.cells().to_vec();
        for r in &self.regions[1..] {
            match r {
                Region::Pixels(m) if m.same_grid(first) => {
                    cells.iter_mut().zip(m.cells()).for_each(|(c, &v)| *c |= v);
                }
                Region::Pixels(_) => return Err(Error::Unsupported("pixel masks on different grids".into())),
                _ => return Err(Error::Unsupported("cannot mix pixel masks with exact regions".into())),
            }
        }
        PixelMask::new(first.origin, first.h, first.width, first.height, cells).map(Some)
    }

    /// Perimeter of the union of all regions, which is `P(E_0)`.
    pub fn union_perimeter(&self) -> Result<f64> {
        if self.is_empty() {
            return Ok(0.0);
        }
        match self.pixel_union()? {
            Some(u) => Ok(marching::smoothed_perimeter(u.width, u.height, |i, j| u.get(i, j)) * u.h),
            None => Ok(self.mesh()?.external_length()),
        }
    }

    /// `P = (P(E_0) + sum_k P(E_k)) / 2`.
    pub fn perimeter(&self) -> Result<f64> {
        let own: f64 = self.regions.iter().map(Region::perimeter).sum();
        Ok(0.5 * (self.union_perimeter()? + own))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("clusters always serialize")
    }

    pub fn from_json(text: &str) -> Result<Cluster> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Cluster> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Cluster::from_json(&text)
    }
}

pub fn cluster_perimeter(c: &Cluster) -> Result<f64> {
    c.perimeter()
}

pub fn interface_length(mesh: &BoundaryMesh) -> Result<f64> {
    mesh.interface_length()
}

pub fn diameter_of_boundary(mesh: &BoundaryMesh) -> Result<f64> {
    mesh.diameter()
}
