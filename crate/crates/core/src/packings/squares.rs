//! Tilings of the unit square by squares whose areas are powers of 1/4.

use crate::cluster::Cluster;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::region::{AxisRect, Region};

/// Finest level accepted; coordinates then need at most 52 significant bits
/// and stay exact in `f64`.
pub const MAX_LEVEL: u32 = 52;

/// `m` with `a = 4^(-m)` and `m >= 1`, read off the bits of `a`.
pub fn quarter_power(a: f64) -> Option<u32> {
    if !(a > 0.0 && a.is_finite()) {
        return None;
    }
    let bits = a.to_bits();
    let mantissa = bits & ((1u64 << 52) - 1);
    let exp = ((bits >> 52) & 0x7ff) as i64 - 1023;
    if mantissa != 0 || exp >= 0 || exp % 2 != 0 || bits >> 63 != 0 || exp == -1023 {
        return None;
    }
    Some((-exp / 2) as u32)
}

/// Places squares of the given areas in the unit square.
///
/// Squares are placed largest first. The free space is kept as a quadtree:
/// free cells of one size are used upper-left, upper-right, lower-right and
/// lower-left in turn, and when no cell of the needed size is left the
/// smallest larger free cell is split into four. This gives the staircase
/// into the lower-left corner for the three-per-level sequence.
pub fn build_square_gasket(areas: &[f64]) -> Result<Cluster> {
    let mut levels = Vec::with_capacity(areas.len());
    for (k, &a) in areas.iter().enumerate() {
        match quarter_power(a) {
            Some(m) if m <= MAX_LEVEL => levels.push(m),
            Some(m) => {
                return Err(Error::InvalidArgument(format!(
                    "area {k} is 4^-{m}, finer than 4^-{MAX_LEVEL}"
                )))
            }
            None => {
                return Err(Error::InvalidArgument(format!(
                    "area {k} = {a} is not a power of 1/4 with exponent at least 1"
                )))
            }
        }
    }
    let top = levels.iter().copied().max().unwrap_or(0);
    // exact dyadic sum: sum 4^(top - m) == 4^top
    let mut total: u128 = 0;
    for (k, &m) in levels.iter().enumerate() {
        total += 1u128 << (2 * (top - m));
        if total > 1u128 << (2 * top) {
            return Err(Error::InvalidArgument(format!(
                "areas exceed 1 at index {k}"
            )));
        }
    }
    if total != 1u128 << (2 * top) {
        return Err(Error::InvalidArgument(format!(
            "areas sum to {} / 4^{top}, not 1",
            total
        )));
    }

    let mut order: Vec<usize> = (0..levels.len()).collect();
    order.sort_by_key(|&k| levels[k]);
    // free cells by level, as integer corners in units of 2^-top
    let mut free: Vec<Vec<(u64, u64)>> = vec![Vec::new(); top as usize + 1];
    free[0].push((0, 0));
    let mut corners = vec![(0u64, 0u64); levels.len()];
    for k in order {
        let m = levels[k] as usize;
        while free[m].is_empty() {
            let l = (0..m).rev().find(|&l| !free[l].is_empty()).expect("sum check guarantees space");
            let (x, y) = free[l].pop().unwrap();
            let half = 1u64 << (top as usize - l - 1);
            // pushed so that pops give upper-left, upper-right, lower-right, lower-left
            free[l + 1].extend([(x, y), (x + half, y), (x + half, y + half), (x, y + half)]);
        }
        corners[k] = free[m].pop().unwrap();
    }
    let unit = 0.5f64.powi(top as i32);
    let regions = levels
        .iter()
        .zip(corners)
        .map(|(&m, (x, y))| {
            let side = 0.5f64.powi(m as i32);
            Region::Rect(AxisRect::square(Point::new(x as f64 * unit, y as f64 * unit), side))
        })
        .collect();
    Ok(Cluster::new_unchecked(regions))
}

/// Areas of the staircase pattern: three squares of area `4^-l` for each
/// level `l < depth` and four at level `depth`.
pub fn figure_areas(depth: u32) -> Vec<f64> {
    let mut out = Vec::new();
    for l in 1..=depth {
        let n = if l == depth { 4 } else { 3 };
        out.extend(std::iter::repeat_n(0.25f64.powi(l as i32), n));
    }
    out
}
