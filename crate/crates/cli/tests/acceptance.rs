//! Acceptance criteria, one line of output each. Exits nonzero when any
//! criterion fails.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use cluster_lab::areaspec::AreaSpec;
use cluster_lab::functionals::{
    anisotropic_cluster_perimeter, anisotropic_perimeter, fractional_cluster_perimeter, fractional_perimeter_mc,
    FractionalOrder, Norm,
};
use cluster_lab::marching::edge_count_perimeter;
use cluster_lab::minimizer::{minimize_n_cluster, p_sequence, AnnealConfig, GridSpec, MinimizeResult};
use cluster_lab::packings::apollonian::{descartes_residual, tangency_residual, DESCARTES_TOL};
use cluster_lab::packings::exponent::partial_sum;
use cluster_lab::packings::{
    apollonian_cluster, build_cantor_cluster, build_square_gasket, cantor_report, covered_area,
    double_bubble_perimeter, estimate_packing_exponent, figure_areas, generate_apollonian, standard_double_bubble,
    CantorSchedule,
};
use cluster_lab::{AxisRect, Cluster, Disk, Point, Region};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn half_sum_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut clusters = Vec::new();
    for depth in 1..=5 {
        clusters.push(build_square_gasket(&figure_areas(depth)).unwrap());
    }
    clusters.push(standard_double_bubble(1.0, Point::default()).unwrap());
    for depth in 1..=12 {
        clusters.push(build_cantor_cluster(depth, CantorSchedule::default()).unwrap());
    }
    for c in &clusters {
        let p = c.perimeter().unwrap();
        let i = c.mesh().unwrap().interface_length().unwrap();
        worst = worst.max(rel(p, i));
    }
    outcome(
        worst <= 1e-10,
        format!("{} clusters, worst relative gap {worst:.2e}", clusters.len()),
    )
}

/// Unit squares on lattice cells (some of them adjacent) and disks in cells
/// of their own, in random order.
fn random_cluster(rng: &mut ChaCha8Rng) -> Cluster {
    let mut used = std::collections::HashSet::new();
    let mut regions = Vec::new();
    let n = rng.gen_range(1..=8);
    while regions.len() < n {
        let cell = (rng.gen_range(0..5i32), rng.gen_range(0..5i32));
        if !used.insert(cell) {
            continue;
        }
        let origin = Point::new(cell.0 as f64, cell.1 as f64);
        if rng.gen_bool(0.7) {
            regions.push(Region::Rect(AxisRect::square(origin, 1.0)));
        } else {
            let r = rng.gen_range(0.1..0.5);
            regions.push(Region::Disk(Disk::new(origin + Point::new(0.5, 0.5), r)));
        }
    }
    Cluster::new(regions).unwrap()
}

fn random_mask(rng: &mut ChaCha8Rng) -> Vec<bool> {
    let density = rng.gen_range(0.1..0.9);
    (0..64 * 64).map(|_| rng.gen_bool(density)).collect()
}

fn truncation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut violations = 0;
    let mut pairs = 0;
    for _ in 0..100 {
        let c = random_cluster(&mut rng);
        let p = c.perimeter().unwrap();
        let prefix: Vec<f64> = (1..=c.len()).map(|n| c.truncate(n).unwrap().perimeter().unwrap()).collect();
        for n in 0..prefix.len() {
            for m in n..prefix.len() {
                pairs += 1;
                if prefix[n] > prefix[m] + 1e-10 * p {
                    violations += 1;
                }
            }
        }
    }
    let mut sub_violations = 0;
    for _ in 0..1000 {
        let a = random_mask(&mut rng);
        let b = random_mask(&mut rng);
        let per = |f: &dyn Fn(usize) -> bool| edge_count_perimeter(64, 64, |i, j| f(j * 64 + i));
        let pa = per(&|k| a[k]);
        let pb = per(&|k| b[k]);
        let pu = per(&|k| a[k] || b[k]);
        let pi = per(&|k| a[k] && b[k]);
        if pu + pi > pa + pb {
            sub_violations += 1;
        }
    }
    outcome(
        violations == 0 && sub_violations == 0,
        format!(
            "{pairs} prefix pairs, {violations} violations; 1000 pixel-set pairs, {sub_violations} submodularity violations"
        ),
    )
}

fn apollonian() -> Outcome {
    let nodes = generate_apollonian(1e-3).unwrap();
    let outer = Disk::enclosing(Point::default(), 1.0);
    let mut by_curvature: HashMap<u64, Vec<Disk>> = HashMap::new();
    by_curvature.entry(outer.curvature.to_bits()).or_default().push(outer);
    for n in &nodes {
        by_curvature.entry(n.disk.curvature.to_bits()).or_default().push(n.disk);
    }
    let mut worst_descartes: f64 = 0.0;
    let mut worst_tangency: f64 = 0.0;
    let mut missing = 0;
    let mut quadruples = 0;
    for n in nodes.iter().filter(|n| n.depth > 0) {
        quadruples += 1;
        let mut k = [0.0; 4];
        k[..3].copy_from_slice(&n.parents);
        k[3] = n.disk.curvature;
        worst_descartes = worst_descartes.max(descartes_residual(k));
        for pk in n.parents {
            let best = by_curvature[&pk.to_bits()]
                .iter()
                .map(|d| tangency_residual(d, &n.disk).abs() / d.radius.min(n.disk.radius))
                .fold(f64::INFINITY, f64::min);
            if !best.is_finite() {
                missing += 1;
            } else {
                worst_tangency = worst_tangency.max(best);
            }
        }
    }
    let fine = generate_apollonian(1e-4).unwrap();
    let coverage = covered_area(&fine) / PI;
    outcome(
        worst_descartes <= DESCARTES_TOL && worst_tangency <= DESCARTES_TOL && missing == 0 && coverage >= 0.95,
        format!(
            "{quadruples} quadruples, Descartes residual {worst_descartes:.1e}, tangency residual {worst_tangency:.1e}; coverage {:.2}% at 1e-4",
            100.0 * coverage
        ),
    )
}

fn exponent() -> Outcome {
    let radii: Vec<f64> = generate_apollonian(1e-4).unwrap().iter().map(|n| n.disk.radius).collect();
    let growth = partial_sum(&radii, 1.0, 1e-4) / partial_sum(&radii, 1.0, 1e-2);
    let change14 = partial_sum(&radii, 1.4, 1e-4) / partial_sum(&radii, 1.4, 1e-2) - 1.0;
    let e = estimate_packing_exponent(&radii, 1e-3, 1e-4, 0.01).unwrap();
    let width = e.bracket.1 - e.bracket.0;
    let pass = growth >= 1.5 && change14 < 0.05 && (1.25..=1.40).contains(&e.alpha_hat) && width <= 0.05;
    outcome(
        pass,
        format!(
            "sum r grows {growth:.2}x (>= 1.5), sum r^1.4 changes {:.1}% (< 5%), alpha_hat {:.4} in [{:.4}, {:.4}]",
            100.0 * change14,
            e.alpha_hat,
            e.bracket.0,
            e.bracket.1
        ),
    )
}

fn fractional() -> Outcome {
    let s = FractionalOrder::new(0.5).unwrap();
    let disk = |r: f64| Region::Disk(Disk::new(Point::default(), r));
    let a = fractional_perimeter_mc(&disk(1.0), s, 1_000_000, 11).unwrap();
    let b = fractional_perimeter_mc(&disk(2.0), s, 1_000_000, 12).unwrap();
    let ratio = b.value / a.value;
    let se = ratio * ((a.standard_error / a.value).powi(2) + (b.standard_error / b.value).powi(2)).sqrt();
    let scaling_ok = (ratio - 2f64.powf(1.5)).abs() <= 3.0 * se;

    let cutoffs = [1e-2, 1e-3, 1e-4, 1e-5];
    let values: Vec<f64> = cutoffs
        .iter()
        .map(|&c| {
            let cluster = apollonian_cluster(&generate_apollonian(c).unwrap());
            fractional_cluster_perimeter(&cluster, s, &[], 1_000_000, 7).unwrap().value
        })
        .collect();
    let changes: Vec<f64> = values.windows(2).map(|w| rel(w[1], w[0])).collect();
    let cauchy = changes.iter().all(|&c| c < 0.05);
    outcome(
        scaling_ok && cauchy,
        format!(
            "P_s(B_2)/P_s(B_1) = {ratio:.4} vs {:.4} (3 s.e. = {:.4}); Apollonian decade changes {} (< 5% each)",
            2f64.powf(1.5),
            3.0 * se,
            changes.iter().map(|c| format!("{:.1}%", 100.0 * c)).collect::<Vec<_>>().join(", ")
        ),
    )
}

/// Minimizer runs shared by the closed-form and diameter criteria.
struct MinimizerRuns {
    single: MinimizeResult,
    double: MinimizeResult,
    sequence: cluster_lab::minimizer::PSequence,
    seconds: f64,
}

fn minimizer_runs() -> MinimizerRuns {
    let t = Instant::now();
    let cfg = AnnealConfig::default();
    let single = minimize_n_cluster(&[0.04 * PI], GridSpec::new(256, 256, 1.0 / 200.0), &cfg).unwrap();
    let double = minimize_n_cluster(&[0.15, 0.15], GridSpec::new(256, 256, 1.0 / 256.0), &cfg).unwrap();
    let areas = AreaSpec::parse("geom:0.25,0.25").unwrap();
    let sequence = p_sequence(&areas, 4, GridSpec::new(256, 256, 1.0 / 256.0), &cfg).unwrap();
    MinimizerRuns {
        single,
        double,
        sequence,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn diameter(runs: &MinimizerRuns) -> Outcome {
    let all: Vec<&MinimizeResult> = [&runs.single, &runs.double].into_iter().chain(&runs.sequence.runs).collect();
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for r in all.iter().filter(|r| r.boundary_connected) {
        checked += 1;
        worst = worst.max(r.boundary_diameter / r.p_estimate);
    }
    outcome(
        checked > 0 && worst <= 1.02,
        format!("{checked} connected outputs, largest diam/p = {worst:.3} (<= 1.02)"),
    )
}

fn minimizer(runs: &MinimizerRuns) -> Outcome {
    let a = 0.04 * PI;
    let e1 = rel(runs.single.p_estimate, 2.0 * (PI * a).sqrt());
    let e2 = rel(runs.double.p_estimate, double_bubble_perimeter(0.15));
    let p = &runs.sequence.p;
    let monotone = p.windows(2).all(|w| w[1] >= 0.98 * w[0]);
    let bound = 2.0 * PI.sqrt() * (1..=60).map(|k| 0.5f64.powi(k)).sum::<f64>() * 1.03;
    let bounded = p.iter().all(|&x| x <= bound);
    let all: Vec<&MinimizeResult> = [&runs.single, &runs.double].into_iter().chain(&runs.sequence.runs).collect();
    let connected = all.iter().filter(|r| r.success).all(|r| r.boundary_connected);
    let successes = all.iter().filter(|r| r.success).count();
    outcome(
        e1 <= 0.03 && e2 <= 0.05 && monotone && bounded && connected && runs.seconds < 600.0,
        format!(
            "N=1 off by {:.2}%, N=2 off by {:.2}%, p_1..p_4 = {} (bound {bound:.4}), {successes}/{} runs converged and connected={connected}, {:.1} s",
            100.0 * e1,
            100.0 * e2,
            p.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" <= "),
            all.len(),
            runs.seconds
        ),
    )
}

fn cantor() -> Outcome {
    let mut gaps = Vec::new();
    for depth in 1..=12 {
        gaps.push(cantor_report(depth, CantorSchedule::default()).unwrap().gap);
    }
    let last = gaps[11];
    // |S| = 1
    let pass = rel(last, 0.5) <= 0.01 && gaps.iter().all(|&g| g > 0.0);
    outcome(pass, format!("gap at depth 12 = {last:.6} (1/2 within 1%), min over depths {:.6}", gaps.iter().copied().fold(f64::INFINITY, f64::min)))
}

fn anisotropic() -> Outcome {
    let norm = Norm::Manhattan;
    let mut worst: f64 = 0.0;
    let mut worst_floor: f64 = 0.0;
    for depth in 1..=5 {
        let areas = figure_areas(depth);
        let c = build_square_gasket(&areas).unwrap();
        let p = anisotropic_cluster_perimeter(&c, &norm).unwrap();
        let formula = 0.5 * (4.0 + areas.iter().map(|a| 4.0 * a.sqrt()).sum::<f64>());
        worst = worst.max(rel(p, formula));
        for (r, a) in c.regions().iter().zip(&areas) {
            worst_floor = worst_floor.max(rel(anisotropic_perimeter(r, &norm).unwrap(), 4.0 * a.sqrt()));
        }
    }
    outcome(
        worst <= 1e-12 && worst_floor == 0.0,
        format!("depths 1-5: worst relative gap to the half-sum formula {worst:.1e}, to the Wulff floor {worst_floor:.1e}"),
    )
}

fn cli(dir: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_cluster-lab"))
        .current_dir(dir)
        .args(args)
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let runs: [&[&str]; 5] = [
        &["gen", "apollonian", "--min-radius", "1e-3", "--out", "ap.json", "--svg", "ap.svg", "--manifest", "m1.json"],
        &["gen", "squares", "--figure", "4", "--out", "sq.json", "--manifest", "m2.json"],
        &["--seed", "9", "perim", "sq.json", "--norm", "manhattan", "--s", "0.5", "--samples", "20000", "--out", "perim.json", "--manifest", "m3.json"],
        &["--seed", "5", "minimize", "--areas", "geom:0.25,0.25", "--n", "2", "--grid", "128x128", "--levels", "20", "--sweeps", "10", "--sequence", "--out", "min.json", "--svg", "min.svg", "--manifest", "m4.json"],
        &["report", "ap.json", "sq.json", "perim.json", "min.json", "--out", "report.json", "--manifest", "m5.json"],
    ];
    for args in runs {
        if !cli(d, args) {
            return outcome(false, format!("run failed: {}", args.join(" ")));
        }
    }
    let outputs = ["ap.json", "ap.svg", "sq.json", "perim.json", "min.json", "min.svg", "report.json"];
    let snapshot = || outputs.iter().map(|f| std::fs::read(d.join(f)).unwrap()).collect::<Vec<_>>();
    let before = snapshot();
    let mut replays = 0;
    for _ in 0..2 {
        for m in ["m1.json", "m2.json", "m3.json", "m4.json", "m5.json"] {
            if !cli(d, &["replay", m]) {
                return outcome(false, format!("replay of {m} reported a mismatch"));
            }
            replays += 1;
        }
    }
    let identical = before == snapshot();
    outcome(
        identical,
        format!("{replays} replays of 5 manifests, {} output files byte-identical: {identical}", outputs.len()),
    )
}

fn main() {
    let mut failures = 0;
    let mut report = |n: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {n:>2} {name:<26} {} ({:.1} s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    };
    report(1, "half-sum identity", &mut half_sum_identity);
    report(2, "truncation inequality", &mut truncation);
    let runs = minimizer_runs();
    report(3, "diameter estimate", &mut || diameter(&runs));
    report(4, "apollonian generator", &mut apollonian);
    report(5, "exponent bracket", &mut exponent);
    report(6, "fractional perimeter", &mut fractional);
    report(7, "minimizer closed forms", &mut || minimizer(&runs));
    report(8, "cantor gap", &mut cantor);
    report(9, "anisotropic exactness", &mut anisotropic);
    report(10, "determinism", &mut determinism);
    println!("{failures} of 10 criteria failed");
    if failures > 0 {
        std::process::exit(1);
    }
}
