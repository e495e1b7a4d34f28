//! Fractional perimeter
//! `P_s(E) = integral over x in E, y outside E of |x - y|^(-2-s)`.
//!
//! The estimator samples `x` uniformly in `E` and the offset `y - x` in
//! polar coordinates. The radial range is cut at `R_out = 4 diam(E)`, beyond
//! which every `y` lies outside `E` and the integral is closed form, and at a
//! tiny inner radius `rho_0`, below which the boundary looks straight and
//! the first-order term `2 P(E) rho_0^(1-s) / (1-s)` is used. In between,
//! geometric radial strata are sampled with density proportional to
//! `rho^(-1-s)`, so every sample carries the same weight inside a stratum.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cluster::Cluster;
use crate::error::{Error, Result};
use crate::geometry::{BBox, Point};
use crate::region::{Disk, Region};

/// Number of radial strata between `rho_0` and `R_out`; each spans a factor 2.
pub const STRATA: usize = 32;
pub const MIN_SAMPLES: u64 = 10_000;
/// Sample count used for the disk constant `C(s)`.
pub const CONSTANT_SAMPLES: u64 = 10_000_000;
pub const CONSTANT_SEED: u64 = 0x00C0_FFEE;

/// Order `s` of the fractional perimeter.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    /// Accepts `0 < s < 2`.
    pub fn new(s: f64) -> Result<Self> {
        if s > 0.0 && s < 2.0 {
            Ok(FractionalOrder(s))
        } else {
            Err(Error::InvalidArgument(format!("fractional order {s} outside (0, 2)")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Sets with a rectifiable boundary have finite `P_s` only for `s < 1`.
    fn finite(self) -> Result<f64> {
        if self.0 >= 1.0 {
            return Err(Error::Divergent(format!(
                "P_s is infinite for s = {} >= 1 on any set with nonempty boundary",
                self.0
            )));
        }
        Ok(self.0)
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;

    fn try_from(s: f64) -> Result<Self> {
        FractionalOrder::new(s)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(s: FractionalOrder) -> f64 {
        s.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub standard_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// What the estimator needs to know about the set `E`.
trait Body: Sync {
    fn area(&self) -> f64;
    fn perimeter(&self) -> f64;
    fn bbox(&self) -> BBox;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Point;
    fn contains(&self, p: Point) -> bool;
}

fn sample_region(r: &Region, rng: &mut ChaCha8Rng, cells: &[(usize, usize)]) -> Point {
    match r {
        Region::Disk(d) => {
            let rho = d.radius * rng.gen::<f64>().sqrt();
            d.center + Point::polar(TAU * rng.gen::<f64>()) * rho
        }
        Region::Rect(q) => Point::new(
            q.min.x + q.width() * rng.gen::<f64>(),
            q.min.y + q.height() * rng.gen::<f64>(),
        ),
        Region::ArcPoly(p) => {
            let b = p.bbox();
            loop {
                let q = Point::new(
                    b.min.x + b.width() * rng.gen::<f64>(),
                    b.min.y + b.height() * rng.gen::<f64>(),
                );
                if p.contains(q) {
                    return q;
                }
            }
        }
        Region::Pixels(m) => {
            let (i, j) = cells[rng.gen_range(0..cells.len())];
            m.origin + Point::new(i as f64 + rng.gen::<f64>(), j as f64 + rng.gen::<f64>()) * m.h
        }
    }
}

fn pixel_cells(r: &Region) -> Vec<(usize, usize)> {
    match r {
        Region::Pixels(m) => (0..m.height)
            .flat_map(|j| (0..m.width).map(move |i| (i, j)))
            .filter(|&(i, j)| m.get(i, j))
            .collect(),
        _ => Vec::new(),
    }
}

struct RegionBody<'a> {
    region: &'a Region,
    cells: Vec<(usize, usize)>,
}

impl Body for RegionBody<'_> {
    fn area(&self) -> f64 {
        self.region.area()
    }
    fn perimeter(&self) -> f64 {
        self.region.perimeter()
    }
    fn bbox(&self) -> BBox {
        self.region.bbox()
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        sample_region(self.region, rng, &self.cells)
    }
    fn contains(&self, p: Point) -> bool {
        self.region.contains(p)
    }
}

/// Union of the regions of a cluster, with a uniform bucket grid for
/// membership queries.
struct UnionBody<'a> {
    regions: &'a [Region],
    cells: Vec<Vec<(usize, usize)>>,
    cumulative: Vec<f64>,
    perimeter: f64,
    bbox: BBox,
    grid: usize,
    buckets: Vec<Vec<u32>>,
}

impl<'a> UnionBody<'a> {
    fn new(c: &'a Cluster) -> Result<Self> {
        let regions = c.regions();
        let mut acc = 0.0;
        let cumulative = regions
            .iter()
            .map(|r| {
                acc += r.area();
                acc
            })
            .collect();
        let bbox = c.bbox();
        let grid = ((regions.len() as f64).sqrt().ceil() as usize * 2).clamp(1, 1024);
        let mut buckets = vec![Vec::new(); grid * grid];
        let cell_w = bbox.width() / grid as f64;
        let cell_h = bbox.height() / grid as f64;
        let idx = |v: f64, lo: f64, w: f64| (((v - lo) / w).floor().max(0.0) as usize).min(grid - 1);
        for (k, r) in regions.iter().enumerate() {
            let b = r.bbox();
            let (i0, i1) = (idx(b.min.x, bbox.min.x, cell_w), idx(b.max.x, bbox.min.x, cell_w));
            let (j0, j1) = (idx(b.min.y, bbox.min.y, cell_h), idx(b.max.y, bbox.min.y, cell_h));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    buckets[j * grid + i].push(k as u32);
                }
            }
        }
        Ok(UnionBody {
            regions,
            cells: regions.iter().map(pixel_cells).collect(),
            cumulative,
            perimeter: c.union_perimeter()?,
            bbox,
            grid,
            buckets,
        })
    }
}

impl Body for UnionBody<'_> {
    fn area(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }
    fn perimeter(&self) -> f64 {
        self.perimeter
    }
    fn bbox(&self) -> BBox {
        self.bbox
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        let u = rng.gen::<f64>() * self.area();
        let k = self.cumulative.partition_point(|&c| c <= u).min(self.regions.len() - 1);
        sample_region(&self.regions[k], rng, &self.cells[k])
    }
    fn contains(&self, p: Point) -> bool {
        if !self.bbox.contains(p) {
            return false;
        }
        let g = self.grid;
        let i = (((p.x - self.bbox.min.x) / self.bbox.width() * g as f64) as usize).min(g - 1);
        let j = (((p.y - self.bbox.min.y) / self.bbox.height() * g as f64) as usize).min(g - 1);
        self.buckets[j * g + i]
            .iter()
            .any(|&k| self.regions[k as usize].contains(p))
    }
}

struct Stratum {
    sum: f64,
    var: f64,
}

fn run_stratum(body: &dyn Body, s: f64, a: f64, b: f64, n: u64, seed: u64, stream: u64) -> Stratum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let (ia, ib) = (a.powf(-s), b.powf(-s));
    let weight = body.area() * (ia - ib) / s * TAU;
    let mut hits = 0u64;
    for _ in 0..n {
        let x = body.sample(&mut rng);
        // inverse CDF of density proportional to rho^(-1-s) on [a, b]
        let u: f64 = rng.gen();
        let rho = (ia - u * (ia - ib)).powf(-1.0 / s);
        let y = x + Point::polar(TAU * rng.gen::<f64>()) * rho;
        if !body.contains(y) {
            hits += 1;
        }
    }
    let p = hits as f64 / n as f64;
    Stratum {
        sum: weight * p,
        var: weight * weight * p * (1.0 - p) / (n.max(2) - 1) as f64,
    }
}

fn estimate(body: &dyn Body, s: FractionalOrder, samples: u64, seed: u64) -> Result<McEstimate> {
    let s = s.finite()?;
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "{samples} samples requested, at least {MIN_SAMPLES} required"
        )));
    }
    let area = body.area();
    let diam = body.bbox().diagonal();
    if !(area > 0.0 && diam > 0.0 && area.is_finite() && diam.is_finite()) {
        return Err(Error::InvalidArgument("region has empty interior".into()));
    }
    let r_out = 4.0 * diam;
    let rho0 = r_out * 0.5f64.powi(STRATA as i32);
    let per = samples / STRATA as u64;
    let extra = samples % STRATA as u64;
    let bounds: Vec<(f64, f64, u64)> = (0..STRATA)
        .map(|j| {
            let a = rho0 * 2f64.powi(j as i32);
            (a, 2.0 * a, per + u64::from((j as u64) < extra))
        })
        .collect();
    let run = |j: usize| {
        let (a, b, n) = bounds[j];
        run_stratum(body, s, a, b, n, seed, j as u64)
    };
    #[cfg(feature = "parallel")]
    let strata: Vec<Stratum> = {
        use rayon::prelude::*;
        (0..STRATA).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let strata: Vec<Stratum> = (0..STRATA).map(run).collect();

    let cap = 2.0 * body.perimeter() * rho0.powf(1.0 - s) / (1.0 - s);
    let far = TAU * area * r_out.powf(-s) / s;
    let mut value = cap;
    let mut var = 0.0;
    for st in &strata {
        value += st.sum;
        var += st.var;
    }
    value += far;
    Ok(McEstimate {
        value,
        standard_error: var.sqrt(),
        samples,
        seed,
    })
}

/// Monte Carlo estimate of `P_s` for one bounded region. Deterministic in
/// `(region, s, samples, seed)`.
pub fn fractional_perimeter_mc(region: &Region, s: FractionalOrder, samples: u64, seed: u64) -> Result<McEstimate> {
    region.validate()?;
    let body = RegionBody {
        region,
        cells: pixel_cells(region),
    };
    estimate(&body, s, samples, seed)
}

/// Monte Carlo estimate of `P_s` of the union of a cluster's regions.
pub fn fractional_union_mc(c: &Cluster, s: FractionalOrder, samples: u64, seed: u64) -> Result<McEstimate> {
    if c.is_empty() {
        return Err(Error::InvalidArgument("empty cluster has no union".into()));
    }
    estimate(&UnionBody::new(c)?, s, samples, seed)
}

/// `C(s) = P_s(B_1)`, estimated once per `s` and cached.
pub fn disk_constant(s: FractionalOrder) -> Result<f64> {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    s.finite()?;
    let key = s.get().to_bits();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&c) = cache.lock().unwrap().get(&key) {
        return Ok(c);
    }
    let unit = Region::Disk(Disk::new(Point::default(), 1.0));
    let c = fractional_perimeter_mc(&unit, s, CONSTANT_SAMPLES, CONSTANT_SEED)?.value;
    cache.lock().unwrap().insert(key, c);
    Ok(c)
}

/// `P_s(B_r) = C(s) r^(2-s)`.
pub fn fractional_perimeter_disk(r: f64, s: FractionalOrder) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius {r} must be positive")));
    }
    Ok(disk_constant(s)? * r.powf(2.0 - s.get()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalClusterValue {
    pub value: f64,
    pub standard_error: f64,
    /// Upper bound on what the ungenerated regions would add.
    pub tail_bound: f64,
}

/// Half-sum of fractional perimeters of the regions and of their union.
///
/// Disks use the scaling law; other regions and the union are estimated by
/// Monte Carlo with `samples` points each. `tail_areas` are the areas of
/// regions left out of a truncated cluster; each adds at most the
/// fractional perimeter of a disk of the same area.
pub fn fractional_cluster_perimeter(
    c: &Cluster,
    s: FractionalOrder,
    tail_areas: &[f64],
    samples: u64,
    seed: u64,
) -> Result<FractionalClusterValue> {
    let constant = disk_constant(s)?;
    let exponent = (2.0 - s.get()) / 2.0;
    let tail_bound = tail_areas.iter().map(|a| constant * (a / PI).powf(exponent)).sum();
    let mut own = 0.0;
    let mut var = 0.0;
    for (k, r) in c.regions().iter().enumerate() {
        match r {
            Region::Disk(d) => own += fractional_perimeter_disk(d.radius, s)?,
            _ => {
                let e = fractional_perimeter_mc(r, s, samples, seed.wrapping_add(k as u64 + 1))?;
                own += e.value;
                var += e.standard_error * e.standard_error;
            }
        }
    }
    let union = match c.regions() {
        [] => 0.0,
        // the union is the region itself; reuse its value and its noise
        [_] => {
            var *= 4.0;
            own
        }
        _ => {
            let e = fractional_union_mc(c, s, samples, seed)?;
            var += e.standard_error * e.standard_error;
            e.value
        }
    };
    Ok(FractionalClusterValue {
        value: 0.5 * (union + own),
        standard_error: 0.5 * var.sqrt(),
        tail_bound,
    })
}
