//! Perimeter estimation on cell grids.
//!
//! Indicators are first smoothed with the separable `[1, 2, 1] / 4` kernel,
//! which leaves integer values in `0..=16` after scaling by 16, and then
//! contoured at level 8 by marching squares with linear interpolation.
//! Samples sit at cell centers and everything outside the grid counts as
//! empty, so contours always close.

use std::sync::OnceLock;

/// Iso-level on the 0..=16 scale.
const ISO: u8 = 8;
/// Number of distinct blurred values.
const LEVELS: usize = 17;

pub(crate) const BLUR_WEIGHTS: [u8; 3] = [1, 2, 1];

fn quad_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; LEVELS.pow(4)];
        for v0 in 0..LEVELS {
            for v1 in 0..LEVELS {
                for v2 in 0..LEVELS {
                    for v3 in 0..LEVELS {
                        t[quad_index(v0 as u8, v1 as u8, v2 as u8, v3 as u8)] =
                            quad_length([v0 as f64, v1 as f64, v2 as f64, v3 as f64]);
                    }
                }
            }
        }
        t
    })
}

#[inline]
fn quad_index(v0: u8, v1: u8, v2: u8, v3: u8) -> usize {
    ((v0 as usize * LEVELS + v1 as usize) * LEVELS + v2 as usize) * LEVELS + v3 as usize
}

/// Contour length inside one unit quad. Corners are ordered
/// (0,0), (1,0), (1,1), (0,1).
fn quad_length(v: [f64; 4]) -> f64 {
    const CORNERS: [(f64, f64); 4] = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    let iso = ISO as f64;
    let inside = v.map(|x| x >= iso);
    let n_in = inside.iter().filter(|&&b| b).count();
    if n_in == 0 || n_in == 4 {
        return 0.0;
    }
    let mut pts = Vec::with_capacity(4);
    for e in 0..4 {
        let (a, b) = (e, (e + 1) % 4);
        if inside[a] != inside[b] {
            let t = (iso - v[a]) / (v[b] - v[a]);
            let (xa, ya) = CORNERS[a];
            let (xb, yb) = CORNERS[b];
            pts.push((xa + t * (xb - xa), ya + t * (yb - ya)));
        }
    }
    let d = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0).hypot(p.1 - q.1);
    if pts.len() == 2 {
        d(pts[0], pts[1])
    } else {
        // saddle: crossings on all four edges; the center value picks the pairing
        let center_inside = v.iter().sum::<f64>() / 4.0 >= iso;
        if center_inside == inside[0] {
            d(pts[0], pts[1]) + d(pts[2], pts[3])
        } else {
            d(pts[3], pts[0]) + d(pts[1], pts[2])
        }
    }
}

/// Length (in cell units) contributed by the quad whose corners carry these
/// blurred values.
#[inline]
pub(crate) fn quad_len(v0: u8, v1: u8, v2: u8, v3: u8) -> f64 {
    quad_table()[quad_index(v0, v1, v2, v3)]
}

/// Blurred indicator on a lattice padded by two cells on every side.
pub(crate) struct BlurField {
    pub width: usize,
    pub values: Vec<u8>,
}

impl BlurField {
    /// `inside(i, j)` is queried for grid cells `0..w` x `0..h` only.
    pub fn new(w: usize, h: usize, inside: impl Fn(usize, usize) -> bool) -> Self {
        let pw = w + 4;
        let ph = h + 4;
        let mut raw = vec![0u8; pw * ph];
        for j in 0..h {
            for i in 0..w {
                if inside(i, j) {
                    raw[(j + 2) * pw + i + 2] = 1;
                }
            }
        }
        let mut values = vec![0u8; pw * ph];
        for y in 1..ph - 1 {
            for x in 1..pw - 1 {
                let mut s = 0u8;
                for (dy, wy) in BLUR_WEIGHTS.iter().enumerate() {
                    for (dx, wx) in BLUR_WEIGHTS.iter().enumerate() {
                        s += wy * wx * raw[(y + dy - 1) * pw + x + dx - 1];
                    }
                }
                values[y * pw + x] = s;
            }
        }
        BlurField { width: pw, values }
    }

    pub fn height(&self) -> usize {
        self.values.len() / self.width
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> u8 {
        self.values[y * self.width + x]
    }

    /// Total contour length in cell units.
    pub fn contour_length(&self) -> f64 {
        let pw = self.width;
        let ph = self.height();
        let mut total = 0.0;
        for y in 0..ph - 1 {
            for x in 0..pw - 1 {
                total += quad_len(self.at(x, y), self.at(x + 1, y), self.at(x + 1, y + 1), self.at(x, y + 1));
            }
        }
        total
    }
}

/// Smoothed marching-squares perimeter of a cell set, in cell units.
pub fn smoothed_perimeter(width: usize, height: usize, inside: impl Fn(usize, usize) -> bool) -> f64 {
    BlurField::new(width, height, inside).contour_length()
}

/// Number of unit cell edges separating a cell of the set from a cell
/// outside it (the grid exterior counts as outside).
pub fn edge_count_perimeter(width: usize, height: usize, inside: impl Fn(usize, usize) -> bool) -> usize {
    let at = |i: isize, j: isize| -> bool {
        i >= 0 && j >= 0 && (i as usize) < width && (j as usize) < height && inside(i as usize, j as usize)
    };
    let mut count = 0;
    for j in -1..height as isize {
        for i in -1..width as isize {
            let c = at(i, j);
            if c != at(i + 1, j) && j >= 0 {
                count += 1;
            }
            if c != at(i, j + 1) && i >= 0 {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_edge_has_unit_length_per_cell() {
        // a wide band; the interior horizontal edges contribute length 1 per column
        let w = 40;
        let inside = |_i: usize, j: usize| j < 10;
        let short = smoothed_perimeter(w, 20, inside);
        let long = smoothed_perimeter(w + 10, 20, inside);
        assert!(((long - short) - 20.0).abs() < 1e-9, "{}", long - short);
    }

    #[test]
    fn edge_count_of_single_cell() {
        assert_eq!(edge_count_perimeter(3, 3, |i, j| i == 1 && j == 1), 4);
        assert_eq!(edge_count_perimeter(2, 2, |_, _| true), 8);
    }

    #[test]
    fn digital_disk_within_two_percent() {
        let n = 256;
        let r = 100.0;
        let inside = |i: usize, j: usize| {
            let x = i as f64 + 0.5 - n as f64 / 2.0;
            let y = j as f64 + 0.5 - n as f64 / 2.0;
            x * x + y * y <= r * r
        };
        let p = smoothed_perimeter(n, n, inside);
        let rel = p / (2.0 * std::f64::consts::PI * r) - 1.0;
        assert!(rel.abs() < 0.02, "{rel}");
    }
}
