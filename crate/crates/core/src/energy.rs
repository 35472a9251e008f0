//! Fourier evaluation of `E|X ± Y|/2` for independent `X, Y ~ μ`.
//!
//! With `aₙ` the Fourier coefficients of `μ`,
//! `E|X ± Y|/2 = Σₙ hₙ |aₙ|²` where `hₙ = (√2/2)·cₙ` and `cₙ` is the
//! coefficient of `√(1 ± cos 2πu)`. Since `|aₙ| ≤ 1`, truncating at `N`
//! costs at most `Σ_{|n|>N} |hₙ| = (2/π)/(2N + 1)`.

use std::f64::consts::{FRAC_2_PI, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::MixtureMeasure;
use crate::numeric::CompensatedSum;

pub const DEFAULT_TRUNCATION: usize = 2000;

/// Added to the analytic tail so the bound also covers rounding in the sum.
pub const ROUNDING_ALLOWANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// `|X + Y|`
    Plus,
    /// `|X − Y|`
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub value: f64,
    pub truncation: usize,
    /// The true expectation lies within this distance of `value`.
    pub tail_bound: f64,
    pub kernel: Kernel,
}

/// `hₙ`: twice the coefficient of `|cos πu|` (plus) or `|sin πu|` (minus).
fn half_coefficient(n: i64, kernel: Kernel) -> f64 {
    let n = n.unsigned_abs();
    if n == 0 {
        return FRAC_2_PI;
    }
    let nf = n as f64;
    let mag = 2.0 / (PI * (4.0 * nf * nf - 1.0));
    match kernel {
        Kernel::Plus if n % 2 == 1 => mag,
        _ => -mag,
    }
}

/// Fourier coefficient `cₙ` of `√(1 + cos 2πu)` (plus) or `√(1 − cos 2πu)`
/// (minus).
pub fn kernel_coefficient(n: i64, kernel: Kernel) -> f64 {
    SQRT_2 * half_coefficient(n, kernel)
}

/// Bound on `Σ_{|n|>N} |hₙ|` (by telescoping `1/(4n²−1)`) plus
/// [`ROUNDING_ALLOWANCE`].
pub fn tail_bound(truncation: usize) -> f64 {
    FRAC_2_PI / (2 * truncation + 1) as f64 + ROUNDING_ALLOWANCE
}

/// `E|X + Y|/2` or `E|X − Y|/2`, truncated at `|n| ≤ truncation`.
pub fn expected_half(m: &MixtureMeasure, truncation: usize, kernel: Kernel) -> Result<EnergyReport> {
    if truncation == 0 {
        return Err(Error::domain("truncation must be at least 1"));
    }
    let mut acc = CompensatedSum::new();
    // smallest terms first
    for n in (1..=truncation as i64).rev() {
        let a = m.fourier_coefficient(n);
        acc.add(2.0 * half_coefficient(n, kernel) * a.norm_sqr());
    }
    acc.add(half_coefficient(0, kernel));
    Ok(EnergyReport {
        value: acc.value(),
        truncation,
        tail_bound: tail_bound(truncation),
        kernel,
    })
}

/// `E|X + Y|/2`; lies in `[1/2, 1]` for every probability measure.
pub fn expected_half_sum(m: &MixtureMeasure, truncation: usize) -> Result<EnergyReport> {
    expected_half(m, truncation, Kernel::Plus)
}

/// `E|X − Y|/2`.
pub fn expected_half_diff(m: &MixtureMeasure, truncation: usize) -> Result<EnergyReport> {
    expected_half(m, truncation, Kernel::Minus)
}

fn check_fr_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::domain(format!("radius must lie in (0, 1], got {r}")));
    }
    Ok(())
}

/// Fourier coefficient `−sin(k·arccos(r − 1))/(πk)` of the indicator
/// `F_r(t) = 𝟙{cos 2πt ≤ r − 1}`, for `k ≠ 0`.
pub fn f_r_fourier(k: i64, r: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("k = 0 is the mass term; use f_r_mass for it"));
    }
    check_fr_radius(r)?;
    let kf = k as f64;
    Ok(-(kf * (r - 1.0).acos()).sin() / (PI * kf))
}

/// Mass `∫F_r = arccos(1 − r)/π` of the indicator `F_r`.
pub fn f_r_mass(r: f64) -> Result<f64> {
    check_fr_radius(r)?;
    Ok((1.0 - r).acos() / PI)
}
