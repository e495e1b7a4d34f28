//! Minimizers for growing prefixes of an area sequence.

use serde::{Deserialize, Serialize};

use crate::areaspec::AreaSpec;
use crate::error::{Error, Result};

use super::anneal::{minimize_n_cluster, AnnealConfig, MinimizeResult};
use super::grid::{aligned_hausdorff_distance, GridSpec};

/// Relative drop allowed between `p_n` and `p_{n+1}`.
pub const MONOTONE_SLACK: f64 = 0.02;
/// Relative excess allowed over the disk bound.
pub const BOUND_SLACK: f64 = 0.03;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PSequence {
    pub areas: AreaSpec,
    /// `p_1..p_nmax`.
    pub p: Vec<f64>,
    /// `2 sqrt(pi) sum_k sqrt(a_k)` over the whole sequence.
    pub p_bar: f64,
    /// `p_{n+1} >= (1 - MONOTONE_SLACK) p_n` for every `n`.
    pub monotone: bool,
    /// `p_n <= (1 + BOUND_SLACK) p_bar` for every `n`.
    pub bounded: bool,
    /// Boundary Hausdorff distance between successive minimizers after
    /// centroid alignment.
    pub hausdorff: Vec<f64>,
    pub runs: Vec<MinimizeResult>,
}

/// Runs the minimizer on `a_1..a_n` for `n = 1..=n_max`, every run with the
/// same config.
pub fn p_sequence(areas: &AreaSpec, n_max: usize, spec: GridSpec, cfg: &AnnealConfig) -> Result<PSequence> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let all = areas.areas(n_max);
    let ns: Vec<usize> = (1..=n_max).collect();
    let run = |&n: &usize| minimize_n_cluster(&all[..n], spec, cfg);
    #[cfg(feature = "parallel")]
    let runs: Vec<Result<MinimizeResult>> = {
        use rayon::prelude::*;
        ns.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<Result<MinimizeResult>> = ns.iter().map(run).collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let p: Vec<f64> = runs.iter().map(|r| r.p_estimate).collect();
    let p_bar = areas.disk_bound();
    let hausdorff = runs
        .windows(2)
        .map(|w| aligned_hausdorff_distance(&w[0].grid, &w[1].grid))
        .collect::<Result<Vec<_>>>()?;
    Ok(PSequence {
        areas: areas.clone(),
        monotone: p.windows(2).all(|w| w[1] >= (1.0 - MONOTONE_SLACK) * w[0]),
        bounded: p.iter().all(|&x| x <= (1.0 + BOUND_SLACK) * p_bar),
        p,
        p_bar,
        hausdorff,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry_equals_direct_run() {
        let spec = GridSpec::new(128, 128, 1.0 / 128.0);
        let cfg = AnnealConfig {
            levels: 10,
            sweeps_per_temperature: 5,
            ..AnnealConfig::default()
        };
        let areas = AreaSpec::parse("geom:0.25,0.25").unwrap();
        let seq = p_sequence(&areas, 1, spec, &cfg).unwrap();
        let direct = minimize_n_cluster(&[0.25], spec, &cfg).unwrap();
        assert_eq!(seq.runs, vec![direct]);
        assert!(seq.hausdorff.is_empty());
        assert!(seq.monotone);
    }
}
