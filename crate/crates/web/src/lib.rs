//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each export returns a JSON object with an `svg` field and a few numbers.

use std::f64::consts::PI;

use cluster_lab::areaspec::AreaSpec;
use cluster_lab::minimizer::{minimize_n_cluster, AnnealConfig, GridSpec};
use cluster_lab::packings::{apollonian_cluster, build_cantor_cluster, covered_area, generate_apollonian, CantorSchedule};
use cluster_lab::svg::{cluster_svg, grid_svg};
use cluster_lab::{Cluster, Result};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Smallest disk radius drawn; keeps the SVG below a few MB.
pub const MIN_RADIUS_FLOOR: f64 = 1e-3;
/// Grid side of the in-browser minimizer.
pub const DEMO_GRID: usize = 128;

#[derive(Debug, Serialize)]
pub struct ClusterView {
    pub svg: String,
    pub regions: usize,
    pub perimeter: f64,
    pub disk_bound: f64,
    pub total_area: f64,
}

#[derive(Debug, Serialize)]
pub struct MinimizeView {
    pub svg: String,
    pub p_estimate: f64,
    pub p_bar: f64,
    pub area_errors: Vec<f64>,
    pub success: bool,
    pub boundary_connected: bool,
    pub triple_points: usize,
}

fn view(c: &Cluster) -> Result<ClusterView> {
    let areas = c.measures();
    Ok(ClusterView {
        svg: cluster_svg(c),
        regions: c.len(),
        perimeter: c.perimeter()?,
        disk_bound: 2.0 * PI.sqrt() * areas.iter().map(|a| a.sqrt()).sum::<f64>(),
        total_area: areas.iter().sum(),
    })
}

pub fn apollonian_view(min_radius: f64) -> Result<ClusterView> {
    let nodes = generate_apollonian(min_radius.max(MIN_RADIUS_FLOOR))?;
    let mut v = view(&apollonian_cluster(&nodes))?;
    v.total_area = covered_area(&nodes);
    Ok(v)
}

pub fn cantor_view(depth: u32, ratio: f64) -> Result<ClusterView> {
    view(&build_cantor_cluster(depth, CantorSchedule { ratio })?)
}

pub fn minimize_view(areas: &str, seed: u64) -> Result<MinimizeView> {
    let spec = AreaSpec::parse(areas)?;
    let targets = spec.truncated();
    let grid = GridSpec::new(DEMO_GRID, DEMO_GRID, 1.0 / DEMO_GRID as f64);
    let cfg = AnnealConfig {
        seed,
        ..AnnealConfig::default()
    };
    let r = minimize_n_cluster(&targets, grid, &cfg)?;
    Ok(MinimizeView {
        svg: grid_svg(&r.grid),
        p_estimate: r.p_estimate,
        p_bar: 2.0 * PI.sqrt() * targets.iter().map(|a| a.sqrt()).sum::<f64>(),
        area_errors: r.area_errors,
        success: r.success,
        boundary_connected: r.boundary_connected,
        triple_points: r.triple_points,
    })
}

fn to_js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn apollonian(min_radius: f64) -> std::result::Result<String, JsError> {
    to_js(apollonian_view(min_radius))
}

#[wasm_bindgen]
pub fn cantor(depth: u32, ratio: f64) -> std::result::Result<String, JsError> {
    to_js(cantor_view(depth, ratio))
}

/// Anneals a cluster on a 128 x 128 grid of the unit square.
#[wasm_bindgen]
pub fn minimize(areas: &str, seed: u64) -> std::result::Result<String, JsError> {
    to_js(minimize_view(areas, seed))
}
