//! Labelled cell grids and the diagnostics run on annealed clusters.

use serde::{Deserialize, Serialize};

use crate::boundary::UnionFind;
use crate::error::{Error, Result};
use crate::geometry::{point_set_diameter, Point};
use crate::marching::BlurField;

/// Cell grid geometry: `width x height` cells of side `h`, lower-left
/// corner at `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    pub h: f64,
    #[serde(default)]
    pub origin: Point,
}

impl GridSpec {
    pub fn new(width: usize, height: usize, h: f64) -> Self {
        GridSpec {
            width,
            height,
            h,
            origin: Point::default(),
        }
    }

    pub fn domain_area(&self) -> f64 {
        (self.width * self.height) as f64 * self.h * self.h
    }
}

/// A grid cluster: every cell carries a label in `0..=N`, `0` being the
/// external region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCluster {
    pub spec: GridSpec,
    /// Row-major, bottom row first.
    pub labels: Vec<u8>,
    pub targets: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locality {
    Empty,
    Full,
    Mixed,
}

/// Cell rectangle `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellWindow {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    /// Per region `1..=N`.
    pub classes: Vec<Locality>,
    /// Whether a boundary cell of that region lies in the window.
    pub boundary_present: Vec<bool>,
    /// No region without boundary in the window is mixed there.
    pub dichotomy_holds: bool,
}

impl GridCluster {
    pub fn new(spec: GridSpec, labels: Vec<u8>, targets: Vec<f64>) -> Result<Self> {
        if labels.len() != spec.width * spec.height {
            return Err(Error::InvalidArgument(format!(
                "{} labels for a {}x{} grid",
                labels.len(),
                spec.width,
                spec.height
            )));
        }
        if let Some(&l) = labels.iter().find(|&&l| l as usize > targets.len()) {
            return Err(Error::InvalidArgument(format!(
                "label {l} exceeds the {} regions",
                targets.len()
            )));
        }
        Ok(GridCluster { spec, labels, targets })
    }

    pub fn regions(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn label(&self, i: usize, j: usize) -> u8 {
        self.labels[j * self.spec.width + i]
    }

    /// Label with cells outside the grid counted as external.
    fn label_or_zero(&self, i: isize, j: isize) -> u8 {
        if i < 0 || j < 0 || i as usize >= self.spec.width || j as usize >= self.spec.height {
            0
        } else {
            self.label(i as usize, j as usize)
        }
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.regions() + 1];
        for &l in &self.labels {
            c[l as usize] += 1;
        }
        c
    }

    /// Areas of regions `1..=N`.
    pub fn areas(&self) -> Vec<f64> {
        let h2 = self.spec.h * self.spec.h;
        self.counts()[1..].iter().map(|&n| n as f64 * h2).collect()
    }

    /// `|area_k - a_k| / a_k`, or the absolute area when `a_k = 0`.
    pub fn area_errors(&self) -> Vec<f64> {
        self.areas()
            .iter()
            .zip(&self.targets)
            .map(|(&a, &t)| if t > 0.0 { (a - t).abs() / t } else { a })
            .collect()
    }

    fn indicator_length(&self, member: impl Fn(u8) -> bool) -> f64 {
        let w = self.spec.width;
        BlurField::new(w, self.spec.height, |i, j| member(self.labels[j * w + i])).contour_length() * self.spec.h
    }

    /// Smoothed marching-squares perimeter of each region `1..=N`.
    pub fn region_perimeters(&self) -> Vec<f64> {
        (1..=self.regions() as u8).map(|k| self.indicator_length(|l| l == k)).collect()
    }

    /// `(L(union) + sum_k L(E_k)) / 2` with smoothed contour lengths.
    pub fn perimeter(&self) -> f64 {
        let own: f64 = self.region_perimeters().iter().sum();
        0.5 * (self.indicator_length(|l| l != 0) + own)
    }

    /// Copy with regions after the first `n` made external.
    pub fn truncated(&self, n: usize) -> GridCluster {
        GridCluster {
            spec: self.spec,
            labels: self.labels.iter().map(|&l| if l as usize > n { 0 } else { l }).collect(),
            targets: self.targets[..n.min(self.regions())].to_vec(),
        }
    }

    fn is_boundary_cell(&self, i: usize, j: usize) -> bool {
        let l = self.label(i, j);
        let (i, j) = (i as isize, j as isize);
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .any(|&(di, dj)| self.label_or_zero(i + di, j + dj) != l)
    }

    /// Cells having a 4-neighbour with another label; the outside of the
    /// grid is external. Cells of the external region that touch nothing but
    /// the outside are not boundary cells.
    pub fn boundary_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.spec.height {
            for i in 0..self.spec.width {
                if self.is_boundary_cell(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Point {
        self.spec.origin + Point::new(i as f64 + 0.5, j as f64 + 0.5) * self.spec.h
    }

    /// Number of 8-connected components of the boundary cells.
    pub fn boundary_components(&self) -> usize {
        let w = self.spec.width;
        let cells = self.boundary_cells();
        let mut index = vec![usize::MAX; w * self.spec.height];
        for (n, &(i, j)) in cells.iter().enumerate() {
            index[j * w + i] = n;
        }
        let mut uf = UnionFind::new(cells.len());
        for (n, &(i, j)) in cells.iter().enumerate() {
            for (di, dj) in [(1isize, 0isize), (-1, 1), (0, 1), (1, 1)] {
                let (x, y) = (i as isize + di, j as isize + dj);
                if x < 0 || y < 0 || x as usize >= w || y as usize >= self.spec.height {
                    continue;
                }
                let m = index[y as usize * w + x as usize];
                if m != usize::MAX {
                    uf.union(n, m);
                }
            }
        }
        uf.count()
    }

    /// 2x2 plaquettes in which at least three labels meet.
    pub fn triple_points(&self) -> usize {
        let mut n = 0;
        for j in -1..self.spec.height as isize {
            for i in -1..self.spec.width as isize {
                let mut ls = [
                    self.label_or_zero(i, j),
                    self.label_or_zero(i + 1, j),
                    self.label_or_zero(i, j + 1),
                    self.label_or_zero(i + 1, j + 1),
                ];
                ls.sort_unstable();
                let distinct = 1 + ls.windows(2).filter(|w| w[0] != w[1]).count();
                if distinct >= 3 {
                    n += 1;
                }
            }
        }
        n
    }

    /// Diameter of the set of boundary-cell centers.
    pub fn boundary_diameter(&self) -> f64 {
        point_set_diameter(
            self.boundary_cells()
                .into_iter()
                .map(|(i, j)| self.cell_center(i, j))
                .collect(),
        )
    }

    /// Centroid of all non-external cells.
    pub fn centroid(&self) -> Point {
        let mut sum = Point::default();
        let mut n = 0usize;
        for j in 0..self.spec.height {
            for i in 0..self.spec.width {
                if self.label(i, j) != 0 {
                    sum = sum + self.cell_center(i, j);
                    n += 1;
                }
            }
        }
        if n == 0 {
            sum
        } else {
            sum * (1.0 / n as f64)
        }
    }

    pub fn locality_check(&self, window: CellWindow) -> Result<LocalityReport> {
        let CellWindow { x0, y0, x1, y1 } = window;
        if !(x0 < x1 && y0 < y1 && x1 <= self.spec.width && y1 <= self.spec.height) {
            return Err(Error::InvalidArgument(format!("window {window:?} is not inside the grid")));
        }
        let n = self.regions();
        let mut inside = vec![0usize; n + 1];
        let mut boundary = vec![false; n + 1];
        for j in y0..y1 {
            for i in x0..x1 {
                let l = self.label(i, j);
                inside[l as usize] += 1;
                let (si, sj) = (i as isize, j as isize);
                for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let m = self.label_or_zero(si + di, sj + dj);
                    if m != l {
                        // the cell is on the boundary of both regions
                        boundary[l as usize] = true;
                        boundary[m as usize] = true;
                    }
                }
            }
        }
        let total = (x1 - x0) * (y1 - y0);
        let classes: Vec<Locality> = (1..=n)
            .map(|k| match inside[k] {
                0 => Locality::Empty,
                c if c == total => Locality::Full,
                _ => Locality::Mixed,
            })
            .collect();
        let boundary_present = boundary[1..].to_vec();
        let dichotomy_holds = classes
            .iter()
            .zip(&boundary_present)
            .all(|(c, &b)| b || *c != Locality::Mixed);
        Ok(LocalityReport {
            classes,
            boundary_present,
            dichotomy_holds,
        })
    }
}

/// Symmetric Hausdorff distance between boundary-cell centers, after
/// translating the second set by `shift`.
fn hausdorff(a: &[Point], b: &[Point]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let directed = |p: &[Point], q: &[Point]| {
        p.iter()
            .map(|x| q.iter().map(|y| x.dist(*y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

fn boundary_points(g: &GridCluster, shift: Point) -> Vec<Point> {
    g.boundary_cells()
        .into_iter()
        .map(|(i, j)| g.cell_center(i, j) + shift)
        .collect()
}

pub fn boundary_hausdorff_distance(g1: &GridCluster, g2: &GridCluster) -> Result<f64> {
    if g1.spec != g2.spec {
        return Err(Error::InvalidArgument("grids have different geometry".into()));
    }
    Ok(hausdorff(&boundary_points(g1, Point::default()), &boundary_points(g2, Point::default())))
}

/// Hausdorff distance after moving `g2` so that the centroids coincide.
pub fn aligned_hausdorff_distance(g1: &GridCluster, g2: &GridCluster) -> Result<f64> {
    if g1.spec != g2.spec {
        return Err(Error::InvalidArgument("grids have different geometry".into()));
    }
    let shift = g1.centroid() - g2.centroid();
    Ok(hausdorff(&boundary_points(g1, Point::default()), &boundary_points(g2, shift)))
}

/// Component count of the boundary and whether it is exactly one.
pub fn boundary_connectivity(g: &GridCluster) -> (bool, usize) {
    let n = g.boundary_components();
    (n == 1, n)
}
