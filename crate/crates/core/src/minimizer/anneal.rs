//! Simulated annealing of grid clusters.
//!
//! The energy is a cut length plus `lambda * sum_k |area_k - a_k|`: every
//! pair of cells within the 16-cell neighbourhood carrying different labels
//! adds a Cauchy-Crofton weight, which counts each interface once. A blurred
//! contour length would be cheaper for half-density checkerboards than for
//! any real boundary, so it is only used to measure the final state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::grid::{boundary_connectivity, GridCluster, GridSpec};

/// Largest relative area deviation of a successful run.
pub const AREA_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    /// Starting temperature in units of `h` (energy of one cell edge).
    pub initial_temperature: f64,
    /// Geometric factor applied after each temperature level.
    pub cooling: f64,
    /// Number of temperature levels.
    pub levels: u32,
    /// Proposals per level, in multiples of the current boundary size.
    pub sweeps_per_temperature: u32,
    /// Area penalty per unit area; `None` picks
    /// `10 * initial perimeter / domain area`.
    pub lambda: Option<f64>,
    /// Independent runs with seeds `seed, seed + 1, ...`; the one with the
    /// lowest final energy wins.
    pub restarts: u32,
    pub seed: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            initial_temperature: 0.5,
            cooling: 0.9,
            levels: 60,
            sweeps_per_temperature: 40,
            lambda: None,
            restarts: 1,
            seed: 1,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(Error::InvalidArgument(format!("cooling factor {} outside (0, 1)", self.cooling)));
        }
        if !(self.initial_temperature >= 0.0 && self.initial_temperature.is_finite()) {
            return Err(Error::InvalidArgument("initial temperature must be finite and >= 0".into()));
        }
        if let Some(l) = self.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidArgument(format!("area penalty {l} must be positive")));
            }
        }
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("at least one run is needed".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    pub grid: GridCluster,
    pub p_estimate: f64,
    pub region_perimeters: Vec<f64>,
    pub area_errors: Vec<f64>,
    /// All area errors within [`AREA_TOLERANCE`].
    pub success: bool,
    pub boundary_connected: bool,
    pub boundary_components: usize,
    pub triple_points: usize,
    pub boundary_diameter: f64,
    pub energy: f64,
    pub lambda: f64,
    /// Seed of the winning run.
    pub seed: u64,
    /// Best energy seen at the end of each temperature level.
    pub best_energy_trace: Vec<f64>,
    pub config: AnnealConfig,
}

const NEIGHBORS: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// Half of the 16-cell neighbourhood; the other half is the negatives.
const CUT_OFFSETS: [(isize, isize); 8] = [(1, 0), (2, 1), (1, 1), (1, 2), (0, 1), (-1, 2), (-1, 1), (-2, 1)];

/// Cauchy-Crofton weights: offset `e_k` at angle `t_k` gets
/// `(t_{k+1} - t_{k-1}) / (4 |e_k|)`, so that the weighted count of cut
/// pairs approximates Euclidean length in cell units.
fn cut_weights() -> [f64; 8] {
    let angle = |k: usize| {
        let (x, y) = CUT_OFFSETS[k % 8];
        (y as f64).atan2(x as f64) + if k >= 8 { std::f64::consts::PI } else { 0.0 }
    };
    let mut w = [0.0; 8];
    for (k, wk) in w.iter_mut().enumerate() {
        let prev = if k == 0 { angle(7) - std::f64::consts::PI } else { angle(k - 1) };
        let (x, y) = CUT_OFFSETS[k];
        *wk = (angle(k + 1) - prev) / (4.0 * (x as f64).hypot(y as f64));
    }
    w
}

struct State {
    spec: GridSpec,
    /// Padded width; grid cell `(i, j)` sits at `(i + 2, j + 2)`.
    pw: usize,
    labels: Vec<u8>,
    /// Signed index offsets of the 16 neighbours and their weights.
    offsets: [(isize, f64); 16],
    /// Weighted count of neighbour pairs with different labels.
    cut: f64,
    counts: Vec<usize>,
    targets: Vec<f64>,
    lambda: f64,
    active: Vec<u32>,
    slot: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl State {
    fn new(grid: &GridCluster, lambda: f64) -> State {
        let spec = grid.spec;
        let (w, h) = (spec.width, spec.height);
        let pw = w + 4;
        let mut labels = vec![0u8; pw * (h + 4)];
        for j in 0..h {
            for i in 0..w {
                labels[(j + 2) * pw + i + 2] = grid.label(i, j);
            }
        }
        let weights = cut_weights();
        let mut offsets = [(0isize, 0.0); 16];
        for (k, (&(x, y), &wk)) in CUT_OFFSETS.iter().zip(&weights).enumerate() {
            let d = x + y * pw as isize;
            offsets[2 * k] = (d, wk);
            offsets[2 * k + 1] = (-d, wk);
        }
        let mut s = State {
            spec,
            pw,
            labels,
            offsets,
            cut: 0.0,
            counts: grid.counts(),
            targets: grid.targets.clone(),
            lambda,
            active: Vec::new(),
            slot: vec![NONE; pw * (h + 4)],
        };
        s.resync();
        for j in 0..h {
            for i in 0..w {
                s.refresh((j + 2) * pw + i + 2);
            }
        }
        s
    }

    fn in_grid(&self, idx: usize) -> bool {
        let (x, y) = (idx % self.pw, idx / self.pw);
        x >= 2 && y >= 2 && x < self.spec.width + 2 && y < self.spec.height + 2
    }

    fn neighbor(&self, idx: usize, d: (isize, isize)) -> usize {
        (idx as isize + d.0 + d.1 * self.pw as isize) as usize
    }

    fn refresh(&mut self, idx: usize) {
        if !self.in_grid(idx) {
            return;
        }
        let l = self.labels[idx];
        let on = NEIGHBORS.iter().any(|&d| self.labels[self.neighbor(idx, d)] != l);
        let slot = self.slot[idx];
        if on && slot == NONE {
            self.slot[idx] = self.active.len() as u32;
            self.active.push(idx as u32);
        } else if !on && slot != NONE {
            let last = *self.active.last().unwrap();
            self.active.swap_remove(slot as usize);
            if last as usize != idx {
                self.slot[last as usize] = slot;
            }
            self.slot[idx] = NONE;
        }
    }

    fn h2(&self) -> f64 {
        self.spec.h * self.spec.h
    }

    fn penalty_of(&self, k: usize, count: usize) -> f64 {
        self.lambda * (count as f64 * self.h2() - self.targets[k - 1]).abs()
    }

    fn energy(&self) -> f64 {
        self.spec.h * self.cut + (1..self.counts.len()).map(|k| self.penalty_of(k, self.counts[k])).sum::<f64>()
    }

    /// Energy and cut changes for relabelling `idx` to `b`.
    fn delta(&self, idx: usize, b: u8) -> (f64, f64) {
        let a = self.labels[idx];
        let mut dc = 0.0;
        for &(d, w) in &self.offsets {
            let l = self.labels[(idx as isize + d) as usize];
            dc += w * ((l != b) as i32 - (l != a) as i32) as f64;
        }
        let mut de = self.spec.h * dc;
        if a != 0 {
            let k = a as usize;
            de += self.penalty_of(k, self.counts[k] - 1) - self.penalty_of(k, self.counts[k]);
        }
        if b != 0 {
            let k = b as usize;
            de += self.penalty_of(k, self.counts[k] + 1) - self.penalty_of(k, self.counts[k]);
        }
        (de, dc)
    }

    fn apply(&mut self, idx: usize, b: u8, dc: f64) {
        let a = self.labels[idx];
        self.cut += dc;
        self.counts[a as usize] -= 1;
        self.counts[b as usize] += 1;
        self.labels[idx] = b;
        self.refresh(idx);
        for d in NEIGHBORS {
            let m = self.neighbor(idx, d);
            self.refresh(m);
        }
    }

    /// Recomputes the cut, dropping accumulated rounding.
    fn resync(&mut self) {
        let (w, h, pw) = (self.spec.width, self.spec.height, self.pw);
        let mut cut = 0.0;
        // every pair with a grid cell is seen from that cell; pairs of two
        // grid cells are seen twice
        for j in 0..h {
            for i in 0..w {
                let idx = (j + 2) * pw + i + 2;
                let l = self.labels[idx];
                for &(d, wk) in &self.offsets {
                    let m = (idx as isize + d) as usize;
                    if self.labels[m] != l {
                        cut += if self.in_grid(m) { 0.5 * wk } else { wk };
                    }
                }
            }
        }
        self.cut = cut;
    }

    fn grid_labels(&self) -> Vec<u8> {
        let (w, h, pw) = (self.spec.width, self.spec.height, self.pw);
        let mut out = Vec::with_capacity(w * h);
        for j in 0..h {
            out.extend_from_slice(&self.labels[(j + 2) * pw + 2..(j + 2) * pw + 2 + w]);
        }
        out
    }
}

/// Square blocks of the target areas around the grid center, laid out in a
/// near-square arrangement of slots that all touch the center.
pub fn initial_grid(spec: GridSpec, areas: &[f64]) -> Result<GridCluster> {
    let n = areas.len();
    if n > u8::MAX as usize {
        return Err(Error::InvalidArgument(format!("{n} regions, at most 255 supported")));
    }
    let mut labels = vec![0u8; spec.width * spec.height];
    let cols = (n as f64).sqrt().ceil().max(1.0) as usize;
    let rows = n.div_ceil(cols).max(1);
    let sides: Vec<usize> = areas.iter().map(|a| (a.sqrt() / spec.h).round() as usize).collect();
    let col_w: Vec<usize> = (0..cols)
        .map(|c| (0..rows).filter_map(|r| sides.get(r * cols + c)).copied().max().unwrap_or(0))
        .collect();
    let row_h: Vec<usize> = (0..rows)
        .map(|r| (0..cols).filter_map(|c| sides.get(r * cols + c)).copied().max().unwrap_or(0))
        .collect();
    let total_w: usize = col_w.iter().sum();
    let total_h: usize = row_h.iter().sum();
    if total_w > spec.width || total_h > spec.height {
        return Err(Error::InvalidArgument("initial blocks do not fit in the grid".into()));
    }
    let x0 = (spec.width - total_w) / 2;
    let y0 = (spec.height - total_h) / 2;
    for (k, &s) in sides.iter().enumerate() {
        let (r, c) = (k / cols, k % cols);
        // top rows first so that region 1 sits upper left; blocks are pushed
        // towards the middle lines of the arrangement
        let slot_x = x0 + col_w[..c].iter().sum::<usize>();
        let slot_y = y0 + row_h[r + 1..].iter().sum::<usize>();
        let bx = if 2 * c + 1 < cols { slot_x + col_w[c] - s } else { slot_x };
        let by = if 2 * r + 1 < rows { slot_y } else { slot_y + row_h[r] - s };
        for j in by..by + s {
            for i in bx..bx + s {
                labels[j * spec.width + i] = k as u8 + 1;
            }
        }
    }
    GridCluster::new(spec, labels, areas.to_vec())
}

fn check_problem(areas: &[f64], spec: GridSpec) -> Result<()> {
    if spec.width < 128 || spec.height < 128 {
        return Err(Error::InvalidArgument(format!(
            "grid {}x{} is smaller than 128x128",
            spec.width, spec.height
        )));
    }
    if !(spec.h > 0.0 && spec.h.is_finite()) {
        return Err(Error::InvalidArgument(format!("cell size {} must be positive", spec.h)));
    }
    if areas.is_empty() {
        return Err(Error::InvalidArgument("no areas given".into()));
    }
    if let Some((k, a)) = areas.iter().enumerate().find(|(_, a)| !(**a >= 0.0 && a.is_finite())) {
        return Err(Error::InvalidArgument(format!("area {k} = {a} must be nonnegative")));
    }
    let total: f64 = areas.iter().sum();
    if total > 0.8 * spec.domain_area() {
        return Err(Error::InvalidArgument(format!(
            "total area {total} exceeds 80% of the domain area {}",
            spec.domain_area()
        )));
    }
    Ok(())
}

fn run_once(start: &GridCluster, lambda: f64, cfg: &AnnealConfig, seed: u64) -> (Vec<u8>, f64, Vec<f64>) {
    let mut s = State::new(start, lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut energy = s.energy();
    let mut best = energy;
    let mut best_labels = s.grid_labels();
    let mut trace = Vec::with_capacity(cfg.levels as usize + 1);
    let h = s.spec.h;
    let mut temp = cfg.initial_temperature * h;
    // the last level runs at zero temperature
    for level in 0..=cfg.levels {
        if level == cfg.levels {
            temp = 0.0;
        }
        for _ in 0..cfg.sweeps_per_temperature {
            let proposals = s.active.len();
            for _ in 0..proposals {
                if s.active.is_empty() {
                    break;
                }
                let idx = s.active[rng.gen_range(0..s.active.len())] as usize;
                let a = s.labels[idx];
                let mut options = [0u8; 4];
                let mut n = 0;
                for d in NEIGHBORS {
                    let l = s.labels[s.neighbor(idx, d)];
                    if l != a {
                        options[n] = l;
                        n += 1;
                    }
                }
                let b = options[rng.gen_range(0..n)];
                let (de, dl) = s.delta(idx, b);
                let accept = de <= 0.0 || (temp > 0.0 && rng.gen::<f64>() < (-de / temp).exp());
                if accept {
                    s.apply(idx, b, dl);
                    energy += de;
                }
            }
            if energy < best {
                best = energy;
                best_labels = s.grid_labels();
            }
        }
        s.resync();
        energy = s.energy();
        if energy < best {
            best = energy;
            best_labels = s.grid_labels();
        }
        trace.push(best);
        temp *= cfg.cooling;
    }
    (best_labels, best, trace)
}

/// Anneals a cluster with the given target areas on the grid.
pub fn minimize_n_cluster(areas: &[f64], spec: GridSpec, cfg: &AnnealConfig) -> Result<MinimizeResult> {
    cfg.validate()?;
    check_problem(areas, spec)?;
    let start = initial_grid(spec, areas)?;
    let lambda = cfg.lambda.unwrap_or(10.0 * start.perimeter() / spec.domain_area());
    let seeds: Vec<u64> = (0..cfg.restarts as u64).map(|r| cfg.seed.wrapping_add(r)).collect();
    let run = |&seed: &u64| {
        let (labels, energy, trace) = run_once(&start, lambda, cfg, seed);
        (energy, seed, labels, trace)
    };
    #[cfg(feature = "parallel")]
    let runs: Vec<_> = {
        use rayon::prelude::*;
        seeds.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<_> = seeds.iter().map(run).collect();
    let (_, seed, labels, trace) = runs
        .into_iter()
        .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)))
        .expect("at least one run");
    let grid = GridCluster::new(spec, labels, areas.to_vec())?;
    Ok(finish(grid, lambda, seed, trace, *cfg))
}

fn finish(grid: GridCluster, lambda: f64, seed: u64, trace: Vec<f64>, config: AnnealConfig) -> MinimizeResult {
    let region_perimeters = grid.region_perimeters();
    let p_estimate = grid.perimeter();
    let area_errors = grid.area_errors();
    let energy = p_estimate
        + lambda
            * grid
                .areas()
                .iter()
                .zip(&grid.targets)
                .map(|(a, t)| (a - t).abs())
                .sum::<f64>();
    let (boundary_connected, boundary_components) = boundary_connectivity(&grid);
    MinimizeResult {
        p_estimate,
        region_perimeters,
        success: area_errors
            .iter()
            .zip(&grid.targets)
            .all(|(&e, &t)| if t > 0.0 { e <= AREA_TOLERANCE } else { e == 0.0 }),
        area_errors,
        boundary_connected,
        boundary_components,
        triple_points: grid.triple_points(),
        boundary_diameter: grid.boundary_diameter(),
        energy,
        lambda,
        seed,
        best_energy_trace: trace,
        config,
        grid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> AnnealConfig {
        AnnealConfig {
            levels: 20,
            sweeps_per_temperature: 10,
            ..AnnealConfig::default()
        }
    }

    #[test]
    fn incremental_cut_matches_recomputation() {
        let spec = GridSpec::new(40, 40, 1.0);
        let start = initial_grid(spec, &[100.0, 64.0, 49.0]).unwrap();
        let mut s = State::new(&start, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..3000 {
            let idx = s.active[rng.gen_range(0..s.active.len())] as usize;
            let b = rng.gen_range(0..4u8);
            if b == s.labels[idx] {
                continue;
            }
            let (de, dl) = s.delta(idx, b);
            let before = s.energy();
            s.apply(idx, b, dl);
            assert!((s.energy() - before - de).abs() < 1e-9);
        }
        let g = GridCluster::new(spec, s.grid_labels(), start.targets.clone()).unwrap();
        let fresh = State::new(&g, 1.0);
        assert!((s.cut - fresh.cut).abs() < 1e-8, "{} vs {}", s.cut, fresh.cut);
        assert_eq!(s.counts, g.counts());
        let mut sorted = s.active.clone();
        sorted.sort_unstable();
        let mut expect = fresh.active.clone();
        expect.sort_unstable();
        assert_eq!(sorted, expect);
    }

    #[test]
    fn cut_length_of_a_disk_and_a_checkerboard() {
        let spec = GridSpec::new(200, 200, 1.0);
        let disk = GridCluster::new(
            spec,
            (0..200 * 200)
                .map(|c| {
                    let (x, y) = ((c % 200) as f64 - 99.5, (c / 200) as f64 - 99.5);
                    (x.hypot(y) < 60.0) as u8
                })
                .collect(),
            vec![1.0],
        )
        .unwrap();
        let cut = State::new(&disk, 1.0).cut;
        let exact = 2.0 * std::f64::consts::PI * 60.0;
        assert!((cut / exact - 1.0).abs() < 0.02, "{cut} vs {exact}");
        let board = GridCluster::new(
            GridSpec::new(128, 128, 1.0),
            (0..128 * 128).map(|c| ((c % 128 + c / 128) % 2) as u8).collect(),
            vec![1.0],
        )
        .unwrap();
        assert!(State::new(&board, 1.0).cut > 0.5 * 128.0 * 128.0);
    }

    #[test]
    fn initial_blocks_have_target_areas() {
        let spec = GridSpec::new(128, 128, 1.0 / 128.0);
        let g = initial_grid(spec, &[0.25, 1.0 / 16.0, 1.0 / 64.0, 1.0 / 256.0]).unwrap();
        for e in g.area_errors() {
            assert!(e < 1e-12, "{e}");
        }
        assert!(g.boundary_components() == 1);
    }

    #[test]
    fn deterministic_and_descending() {
        let spec = GridSpec::new(128, 128, 1.0 / 128.0);
        let a = minimize_n_cluster(&[0.1], spec, &small_cfg()).unwrap();
        let b = minimize_n_cluster(&[0.1], spec, &small_cfg()).unwrap();
        assert_eq!(a, b);
        assert!(a.best_energy_trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn rejects_infeasible_problems() {
        let spec = GridSpec::new(128, 128, 1.0 / 128.0);
        assert!(minimize_n_cluster(&[0.9], spec, &small_cfg()).is_err());
        assert!(minimize_n_cluster(&[0.1], GridSpec::new(64, 64, 0.1), &small_cfg()).is_err());
        assert!(minimize_n_cluster(&[-0.1], spec, &small_cfg()).is_err());
        let bad = AnnealConfig {
            cooling: 1.0,
            ..small_cfg()
        };
        assert!(minimize_n_cluster(&[0.1], spec, &bad).is_err());
    }
}
