//! Bracketing the exponent at which `sum r_k^alpha` switches from diverging
//! to converging.
//!
//! Partial sums are compared over two consecutive radius decades: with
//! cutoffs `c0 > c1 > c2` in geometric progression, the ratio
//! `rho(alpha) = D[c2, c1) / D[c1, c0)` of the increments contributed by the
//! radii in each decade stays above 1 while the series diverges and drops
//! below 1 once it converges. Values within `BAND` of 1 are left undecided.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width of the undecided band around a ratio of 1.
pub const BAND: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Diverging,
    Converging,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub alpha: f64,
    /// Partial sums over radii `>= c0`, `>= c1`, `>= c2`.
    pub partial_sums: [f64; 3],
    pub ratio: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub alpha_hat: f64,
    /// Smallest radius used.
    pub cutoff: f64,
    pub bracket: (f64, f64),
    pub probes: Vec<Probe>,
}

/// `sum r^alpha` over radii `>= cutoff`.
pub fn partial_sum(radii: &[f64], alpha: f64, cutoff: f64) -> f64 {
    radii.iter().filter(|&&r| r >= cutoff).map(|r| r.powf(alpha)).sum()
}

/// `S(fine) / S(coarse)` for the partial sums at two cutoffs.
pub fn growth_factor(radii: &[f64], alpha: f64, coarse: f64, fine: f64) -> f64 {
    partial_sum(radii, alpha, fine) / partial_sum(radii, alpha, coarse)
}

pub fn probe(radii: &[f64], alpha: f64, coarse: f64, fine: f64) -> Probe {
    let c0 = coarse * (coarse / fine);
    let sums = [
        partial_sum(radii, alpha, c0),
        partial_sum(radii, alpha, coarse),
        partial_sum(radii, alpha, fine),
    ];
    let ratio = (sums[2] - sums[1]) / (sums[1] - sums[0]);
    let verdict = if ratio > 1.0 + BAND {
        Verdict::Diverging
    } else if ratio < 1.0 - BAND {
        Verdict::Converging
    } else {
        Verdict::Undecided
    };
    Probe {
        alpha,
        partial_sums: sums,
        ratio,
        verdict,
    }
}

/// Brackets the critical exponent in `(1, 2)` to width `tolerance` using
/// radii down to `fine`. `coarse / fine` must be at least 2.
pub fn estimate_packing_exponent(radii: &[f64], coarse: f64, fine: f64, tolerance: f64) -> Result<ExponentEstimate> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tolerance} must be positive")));
    }
    if !(fine > 0.0 && coarse / fine >= 2.0) {
        return Err(Error::InsufficientDepth(format!(
            "cutoffs {coarse} and {fine} are too close to compare decades"
        )));
    }
    let c0 = coarse * (coarse / fine);
    let count = |lo: f64, hi: f64| radii.iter().filter(|&&r| r >= lo && r < hi).count();
    if count(fine, coarse) == 0 || count(coarse, c0) == 0 {
        return Err(Error::InsufficientDepth(format!(
            "no radii between cutoffs {c0}, {coarse}, {fine}"
        )));
    }
    let mut probes = Vec::new();
    let mut classify = |alpha: f64| {
        let p = probe(radii, alpha, coarse, fine);
        probes.push(p);
        p.verdict
    };
    if classify(1.0) != Verdict::Diverging || classify(2.0) != Verdict::Converging {
        return Err(Error::InsufficientDepth(
            "endpoints alpha = 1 and alpha = 2 are not classified as diverging and converging".into(),
        ));
    }
    let step = tolerance / 8.0;
    // last alpha known to diverge, first alpha known not to diverge
    let (mut dlo, mut dhi) = (1.0, 2.0);
    while dhi - dlo > step {
        let mid = 0.5 * (dlo + dhi);
        if classify(mid) == Verdict::Diverging {
            dlo = mid;
        } else {
            dhi = mid;
        }
    }
    let (mut clo, mut chi) = (1.0, 2.0);
    while chi - clo > step {
        let mid = 0.5 * (clo + chi);
        if classify(mid) == Verdict::Converging {
            chi = mid;
        } else {
            clo = mid;
        }
    }
    let bracket = (dlo, chi);
    if bracket.1 - bracket.0 > tolerance {
        return Err(Error::InsufficientDepth(format!(
            "bracket [{:.4}, {:.4}] is wider than {tolerance}",
            bracket.0, bracket.1
        )));
    }
    Ok(ExponentEstimate {
        alpha_hat: 0.5 * (bracket.0 + bracket.1),
        cutoff: fine,
        bracket,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Radii `n^(-1/d)` have counting function `N(r) ~ r^(-d)`, so the
    /// series switches at exactly `alpha = d`.
    fn synthetic(d: f64, n: usize) -> Vec<f64> {
        (1..=n).map(|k| (k as f64).powf(-1.0 / d)).collect()
    }

    #[test]
    fn recovers_synthetic_exponent() {
        let radii = synthetic(1.5, 2_000_000);
        let e = estimate_packing_exponent(&radii, 1e-2, 1e-3, 0.05).unwrap();
        assert!(e.bracket.0 < 1.5 && 1.5 < e.bracket.1, "{:?}", e.bracket);
        assert!(e.bracket.0 < e.alpha_hat && e.alpha_hat < e.bracket.1);
    }

    #[test]
    fn close_cutoffs_are_rejected() {
        let radii = synthetic(1.5, 1000);
        assert!(matches!(
            estimate_packing_exponent(&radii, 0.1, 0.08, 0.05),
            Err(Error::InsufficientDepth(_))
        ));
        assert!(matches!(
            estimate_packing_exponent(&radii, 1e-3, 1e-4, 0.05),
            Err(Error::InsufficientDepth(_))
        ));
    }
}
