//! The dilogarithm, the limit law for diagonal intersections, and an exact
//! counter for crossings of diagonals of a regular polygon.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{f_value, Angle};

/// Largest polygon accepted by [`polygon_intersections`] by default.
pub const DEFAULT_POLYGON_BUDGET: usize = 300;

/// Crossing points within this distance outside `C_r` still count as inside.
pub const POLYGON_TIE_TOLERANCE: f64 = 1e-12;

/// Euler's dilogarithm `Li₂(x) = Σ_{k≥1} x^k / k²` on `[0, 1]`.
///
/// Direct series for `x <= 1/2`, reflection
/// `Li₂(x) = π²/6 − ln(x)·ln(1−x) − Li₂(1−x)` above.
pub fn dilog(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("dilog is defined here on [0, 1], got {x}")));
    }
    Ok(if x == 1.0 {
        PI * PI / 6.0
    } else if x <= 0.5 {
        dilog_series(x)
    } else {
        PI * PI / 6.0 - x.ln() * (1.0 - x).ln() - dilog_series(1.0 - x)
    })
}

fn dilog_series(x: f64) -> f64 {
    let mut terms = Vec::with_capacity(64);
    let mut pow = x;
    let mut k = 1.0f64;
    while pow > 1e-18 * k * k {
        terms.push(pow / (k * k));
        pow *= x;
        k += 1.0;
    }
    // smallest terms first
    terms.iter().rev().sum()
}

/// Limit law `(2/π²)·Li₂(r²)`: the probability that two chords drawn from
/// four uniform points meet inside the circle of radius `r`.
pub fn karamata_law(r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("radius must lie in [0, 1], got {r}")));
    }
    Ok(2.0 / (PI * PI) * dilog(r * r)?)
}

/// Crossings of diagonals of the regular `n`-gon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolygonCount {
    pub n: usize,
    pub r: f64,
    /// Crossing pairs with crossing point inside `C_r`.
    pub inside: u64,
    /// All crossing pairs, i.e. the count at `r = 1`.
    pub total: u64,
}

impl PolygonCount {
    pub fn ratio(&self) -> f64 {
        self.inside as f64 / self.total as f64
    }
}

fn binomial4(n: usize) -> u64 {
    let n = n as u64;
    if n < 4 {
        return 0;
    }
    n * (n - 1) * (n - 2) * (n - 3) / 24
}

/// Lexicographically smallest cyclic rotation of a gap sequence.
fn canonical_rotation(g: [usize; 4]) -> [usize; 4] {
    (0..4)
        .map(|s| [g[s], g[(s + 1) % 4], g[(s + 2) % 4], g[(s + 3) % 4]])
        .min()
        .expect("four rotations")
}

/// Norm of the crossing point of the two diagonals of the quadrilateral with
/// consecutive vertex gaps `g` (in units of `1/n` turns).
fn crossing_norm(g: [usize; 4], n: usize) -> f64 {
    let v1 = g[0];
    let v2 = v1 + g[1];
    let v3 = v2 + g[2];
    f_value(
        Angle::polygon_vertex(0, n),
        Angle::polygon_vertex(v2, n),
        Angle::polygon_vertex(v1, n),
        Angle::polygon_vertex(v3, n),
    )
}

/// Counts pairs of diagonals of the regular `n`-gon crossing strictly inside
/// `C_r`, each pair counted once even when several diagonals are concurrent.
pub fn polygon_intersections(n: usize, r: f64) -> Result<PolygonCount> {
    polygon_intersections_with_budget(n, r, DEFAULT_POLYGON_BUDGET)
}

pub fn polygon_intersections_with_budget(n: usize, r: f64, budget: usize) -> Result<PolygonCount> {
    if n < 4 {
        return Err(Error::domain(format!(
            "polygon needs at least 4 vertices, got {n}"
        )));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::domain(format!("radius must lie in (0, 1], got {r}")));
    }
    if n > budget {
        return Err(Error::Budget {
            what: "polygon crossing enumeration",
            requested: n,
            limit: budget,
            hint: "use a smaller polygon or raise the budget",
        });
    }
    // Every crossing pair is the pair of diagonals of a unique 4-subset of
    // vertices. A 4-subset with a marked vertex is a start vertex plus a gap
    // composition (g1..g4) of n, so #subsets = (n/4)·#{compositions}. The
    // predicate is evaluated on the canonical rotation so that all four
    // rotations of a subset agree bit for bit.
    let inside_compositions: u64 = (1..n)
        .into_par_iter()
        .map(|g1| {
            let mut count = 0u64;
            for g2 in 1..n - g1 {
                for g3 in 1..n - g1 - g2 {
                    let g4 = n - g1 - g2 - g3;
                    let canon = canonical_rotation([g1, g2, g3, g4]);
                    if r >= 1.0 || crossing_norm(canon, n) < r + POLYGON_TIE_TOLERANCE {
                        count += 1;
                    }
                }
            }
            count
        })
        .sum();
    let scaled = n as u64 * inside_compositions;
    debug_assert_eq!(scaled % 4, 0);
    Ok(PolygonCount {
        n,
        r,
        inside: scaled / 4,
        total: binomial4(n),
    })
}
