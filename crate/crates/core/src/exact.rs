//! Exact evaluation of chord probabilities for discrete measures.
//!
//! For `μ = Σ αᵢ δ_{aᵢ}` the probability `P_μ(ℓ < r)` is a finite sum over
//! ordered atom quadruples. [`prob_enumerate`] performs that sum directly
//! through [`geometry::f_value`]; at `r = 1` the power-sum closed form
//! [`prob_closed_form_r1`] gives the same number in `O(n)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, chord_distance_to_origin, compare, crosses_unchecked, f_value};
use crate::measure::DiscreteMeasure;
use crate::numeric::CompensatedSum;

/// Largest atom count enumerated by default (about 1.3e7 quadruples).
pub const DEFAULT_ENUMERATION_BUDGET: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strictness {
    Strict,
    NonStrict,
}

impl Strictness {
    pub fn from_strict(strict: bool) -> Self {
        if strict {
            Strictness::Strict
        } else {
            Strictness::NonStrict
        }
    }

    pub fn is_strict(self) -> bool {
        self == Strictness::Strict
    }
}

/// A probability together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub value: f64,
    pub method: Method,
    pub strictness: Strictness,
    pub r: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    /// Maximal number of atoms.
    pub budget: usize,
    /// At `r = 1` (strict) count crossings combinatorially instead of
    /// evaluating `f`.
    pub crossing_fast_path: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            budget: DEFAULT_ENUMERATION_BUDGET,
            crossing_fast_path: true,
        }
    }
}

/// Power sums `Σαᵢ^k` for `k = 1..=4`.
pub(crate) fn power_sums(weights: &[f64]) -> [f64; 4] {
    let mut s = [CompensatedSum::new(); 4];
    for &a in weights {
        let a2 = a * a;
        s[0].add(a);
        s[1].add(a2);
        s[2].add(a2 * a);
        s[3].add(a2 * a2);
    }
    s.map(|x| x.value())
}

/// `P_μ(ℓ < 1)` in closed form, branching on the number of atoms.
pub fn prob_closed_form_r1(m: &DiscreteMeasure) -> Result<EvalReport> {
    let w = m.weights();
    let value = match w.len() {
        0 | 1 => {
            return Err(Error::domain(
                "closed form needs at least two atoms (a single atom has probability 0)",
            ))
        }
        2 => 4.0 * w[0] * w[0] * w[1] * w[1],
        3 => {
            let sq: Vec<f64> = w.iter().map(|a| a * a).collect();
            4.0 * (sq[0] * sq[1] + sq[0] * sq[2] + sq[1] * sq[2])
        }
        _ => {
            let [_, s2, s3, s4] = power_sums(&w);
            // three times the value, so that every coefficient is an integer
            let terms = [1.0, -6.0 * s2, 8.0 * s3, 9.0 * s2 * s2, -12.0 * s4];
            terms.into_iter().collect::<CompensatedSum>().value() / 3.0
        }
    };
    Ok(EvalReport {
        value,
        method: Method::ClosedForm,
        strictness: Strictness::Strict,
        r: 1.0,
    })
}

fn check_r(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("radius must lie in [0, 1], got {r}")));
    }
    Ok(())
}

pub(crate) fn check_budget(n: usize, budget: usize) -> Result<()> {
    if n > budget {
        return Err(Error::Budget {
            what: "quadruple enumeration",
            requested: n,
            limit: budget,
            hint: "raise the budget or use the Monte Carlo estimator",
        });
    }
    Ok(())
}

/// `P_μ(ℓ < r)` (or `≤ r`) by summing over all ordered atom quadruples.
pub fn prob_enumerate(m: &DiscreteMeasure, r: f64, strict: bool) -> Result<EvalReport> {
    prob_enumerate_with(m, r, strict, &EnumerateOptions::default())
}

pub fn prob_enumerate_with(
    m: &DiscreteMeasure,
    r: f64,
    strict: bool,
    opts: &EnumerateOptions,
) -> Result<EvalReport> {
    check_r(r)?;
    let n = m.len();
    check_budget(n, opts.budget)?;
    let angles = m.angles();
    let w = m.weights();

    let fast = opts.crossing_fast_path && strict && r == 1.0;
    // one partial sum per leading index, reduced in index order
    let partials: Vec<CompensatedSum> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = CompensatedSum::new();
            for j in 0..n {
                let wij = w[i] * w[j];
                for k in 0..n {
                    let wijk = wij * w[k];
                    for l in 0..n {
                        let hit = if fast {
                            crossing_or_same_chord(i, j, k, l, &angles)
                        } else {
                            compare(f_value(angles[i], angles[j], angles[k], angles[l]), r, strict)
                        };
                        if hit {
                            acc.add(wijk * w[l]);
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = CompensatedSum::new();
    for p in partials {
        total.merge(p);
    }
    Ok(EvalReport {
        value: total.value(),
        method: Method::Enumeration,
        strictness: Strictness::from_strict(strict),
        r,
    })
}

/// `f < 1` for atom indices: four distinct interleaved atoms, or the same
/// non-degenerate chord drawn twice.
fn crossing_or_same_chord(i: usize, j: usize, k: usize, l: usize, a: &[geometry::Angle]) -> bool {
    if i == j || k == l {
        return false;
    }
    if (i == k && j == l) || (i == l && j == k) {
        return true;
    }
    if i == k || i == l || j == k || j == l {
        return false;
    }
    crosses_unchecked(a[i], a[j], a[k], a[l])
}

/// `∫ μ(I_r(x)) dμ(x)`: the probability that one random chord meets the
/// disk of radius `r` (closed disk unless `strict`).
pub fn one_chord_functional(m: &DiscreteMeasure, r: f64, strict: bool) -> Result<f64> {
    check_r(r)?;
    let atoms = m.atoms();
    let mut acc = CompensatedSum::new();
    for a in atoms {
        for b in atoms {
            if compare(chord_distance_to_origin(a.angle, b.angle), r, strict) {
                acc.add(a.weight * b.weight);
            }
        }
    }
    Ok(acc.value())
}

/// `w(α) = 2Σα² − (8/3)Σα³ − 3(Σα²)² + 4Σα⁴` on the open simplex.
pub fn w_function(weights: &[f64]) -> Result<f64> {
    if weights.is_empty() {
        return Err(Error::domain("empty weight vector"));
    }
    if let Some(a) = weights.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        return Err(Error::domain(format!(
            "weights must be strictly positive, found {a}"
        )));
    }
    let [s1, s2, s3, s4] = power_sums(weights);
    if (s1 - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("weights sum to {s1}, not 1")));
    }
    Ok(2.0 * s2 - (8.0 / 3.0) * s3 - 3.0 * s2 * s2 + 4.0 * s4)
}
