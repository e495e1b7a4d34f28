//! Summary records for each kind of output file.

use std::f64::consts::PI;

use anyhow::Result;
use cluster_lab::functionals::{anisotropic_cluster_perimeter, anisotropic_perimeter, wulff_lower_bound, Norm};
use cluster_lab::minimizer::{MinimizeResult, PSequence};
use cluster_lab::packings::{estimate_packing_exponent, ExponentEstimate};
use cluster_lab::report::RunRecord;
use cluster_lab::{Cluster, Region};

/// Relative slack of the diameter bound on minimizer outputs.
pub const DIAMETER_SLACK: f64 = 0.02;
/// Relative slack of the isoperimetric floor on minimizer outputs.
pub const FLOOR_SLACK: f64 = 0.02;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn disk_bound(areas: &[f64]) -> f64 {
    2.0 * PI.sqrt() * areas.iter().map(|a| a.sqrt()).sum::<f64>()
}

pub fn cluster_record(c: &Cluster) -> Result<RunRecord> {
    let measures = c.measures();
    let own: Vec<f64> = c.regions().iter().map(Region::perimeter).collect();
    let mesh = c.mesh()?;
    let perimeter = c.perimeter()?;
    let interface = mesh.interface_length()?;
    let floors_hold = own
        .iter()
        .zip(&measures)
        .all(|(p, a)| *p >= 2.0 * (PI * a).sqrt() * (1.0 - 1e-9));
    let mut rec = RunRecord::new("cluster")
        .value("regions", c.len())
        .value("total_area", measures.iter().sum::<f64>())
        .value("perimeter", perimeter)
        .value("interface_length", interface)
        .value("union_perimeter", c.union_perimeter()?)
        .bound("disk_bound", disk_bound(&measures))
        .check("half_sum_identity", close(perimeter, interface, 1e-10))
        .check("isoperimetric_floors", floors_hold);

    let disks: Vec<f64> = c
        .regions()
        .iter()
        .filter_map(|r| match r {
            Region::Disk(d) => Some(d.radius),
            _ => None,
        })
        .collect();
    if !disks.is_empty() && disks.len() == c.len() {
        rec = packing_values(rec, c, &disks);
    }

    let squares = c.regions().iter().all(|r| matches!(r, Region::Rect(q) if q.width() == q.height()));
    if squares && !c.is_empty() {
        let norm = Norm::Manhattan;
        let p_m = anisotropic_cluster_perimeter(c, &norm)?;
        let union_m = 2.0 * (c.bbox().width() + c.bbox().height());
        let formula = 0.5 * (union_m + measures.iter().map(|a| 4.0 * a.sqrt()).sum::<f64>());
        let mut tight = true;
        for (r, &a) in c.regions().iter().zip(&measures) {
            tight &= close(anisotropic_perimeter(r, &norm)?, wulff_lower_bound(a, &norm)?, 1e-12);
        }
        rec = rec
            .value("manhattan_perimeter", p_m)
            .bound("manhattan_half_sum", formula)
            .check("manhattan_half_sum", close(p_m, formula, 1e-12))
            .check("wulff_floors_tight", tight);
    }
    Ok(rec)
}

/// Coverage, length partial sums per radius decade and the exponent bracket.
fn packing_values(rec: RunRecord, c: &Cluster, radii: &[f64]) -> RunRecord {
    let bbox = c.bbox();
    let enclosing = 0.5 * bbox.width().max(bbox.height());
    let covered: f64 = radii.iter().map(|r| PI * r * r).sum();
    let min_r = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let mut cutoffs = Vec::new();
    let mut cut = 0.1;
    while cut >= min_r * (1.0 - 1e-12) {
        cutoffs.push(cut);
        cut /= 10.0;
    }
    let sums: Vec<(f64, f64)> = cutoffs
        .iter()
        .map(|&c| (c, radii.iter().filter(|&&r| r >= c).map(|r| 2.0 * PI * r).sum()))
        .collect();
    let mut rec = rec
        .value("coverage", covered / (PI * enclosing * enclosing))
        .value("length_partial_sums", sums);
    if cutoffs.len() >= 2 {
        let fine = cutoffs[cutoffs.len() - 1];
        let coarse = cutoffs[cutoffs.len() - 2];
        match estimate_packing_exponent(radii, coarse, fine, 0.01) {
            Ok(e) => {
                rec = rec
                    .value("alpha_hat", e.alpha_hat)
                    .value("alpha_bracket", e.bracket)
                    .check("alpha_bracket_contains_estimate", e.bracket.0 <= e.alpha_hat && e.alpha_hat <= e.bracket.1)
            }
            Err(err) => rec = rec.value("alpha_error", err.to_string()),
        }
    }
    rec
}

pub fn minimize_record(r: &MinimizeResult) -> RunRecord {
    let p = r.p_estimate;
    let targets = &r.grid.targets;
    let floor = targets.iter().map(|a| 2.0 * (PI * a).sqrt()).fold(0.0, f64::max);
    let p_bar = disk_bound(targets);
    let mut rec = RunRecord::new("minimize")
        .value("n", targets.len())
        .value("p_estimate", p)
        .value("region_perimeters", &r.region_perimeters)
        .value("area_errors", &r.area_errors)
        .value("boundary_components", r.boundary_components)
        .value("triple_points", r.triple_points)
        .value("boundary_diameter", r.boundary_diameter)
        .value("energy", r.energy)
        .value("seed", r.seed)
        .bound("p_bar", p_bar)
        .bound("isoperimetric_floor", floor)
        .check("area_converged", r.success)
        .check("boundary_connected", r.boundary_connected)
        .check("below_p_bar", p <= 1.03 * p_bar)
        .check("isoperimetric_floor", p >= (1.0 - FLOOR_SLACK) * floor)
        .check(
            "best_energy_nonincreasing",
            r.best_energy_trace.windows(2).all(|w| w[1] <= w[0]),
        );
    if r.boundary_connected {
        rec = rec.check("diameter_bound", r.boundary_diameter <= (1.0 + DIAMETER_SLACK) * p);
    }
    rec
}

pub fn sequence_record(s: &PSequence) -> RunRecord {
    RunRecord::new("p_sequence")
        .value("areas", s.areas.to_string())
        .value("p", &s.p)
        .value("hausdorff", &s.hausdorff)
        .value("successes", s.runs.iter().filter(|r| r.success).count())
        .bound("p_bar", s.p_bar)
        .check("monotone", s.monotone)
        .check("bounded", s.bounded)
        .check(
            "successful_runs_connected",
            s.runs.iter().filter(|r| r.success).all(|r| r.boundary_connected),
        )
}

pub fn exponent_record(e: &ExponentEstimate) -> RunRecord {
    RunRecord::new("exponent")
        .value("alpha_hat", e.alpha_hat)
        .value("bracket", e.bracket)
        .value("cutoff", e.cutoff)
        .value("probes", e.probes.len())
        .check("bracket_contains_estimate", e.bracket.0 <= e.alpha_hat && e.alpha_hat <= e.bracket.1)
}
