//! Seeded Monte Carlo estimators.
//!
//! Trials are split into fixed blocks of [`BLOCK_TRIALS`]; block `b` draws
//! from stream `b` of the master seed. Block results are combined in block
//! order, so an estimate depends only on `(measure, r, trials, seed)` and not
//! on how rayon schedules the blocks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{chord_distance_to_origin, compare, f_value};
use crate::measure::{stream_rng, MixtureMeasure};
use crate::numeric::CompensatedSum;

pub const BLOCK_TRIALS: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: f64,
    /// Binomial standard error `sqrt(mean(1 − mean)/trials)`.
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
    pub r: f64,
    pub strict: bool,
}

impl MCEstimate {
    /// Distance from `target` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target) / self.std_error
    }
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

fn check_inputs(r: f64, trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("radius must lie in [0, 1], got {r}")));
    }
    Ok(())
}

fn blocks(trials: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let n_blocks = trials.div_ceil(BLOCK_TRIALS) as usize;
    (0..n_blocks).into_par_iter().map(move |b| {
        let b = b as u64;
        let len = BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
        (b, len)
    })
}

fn count_hits<F>(trials: u64, seed: u64, hit: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    blocks(trials)
        .map(|(b, len)| {
            let mut rng = stream_rng(seed, b);
            (0..len).filter(|_| hit(&mut rng)).count() as u64
        })
        .sum()
}

fn binomial(hits: u64, trials: u64, seed: u64, r: f64, strict: bool) -> MCEstimate {
    let mean = hits as f64 / trials as f64;
    MCEstimate {
        mean,
        std_error: (mean * (1.0 - mean) / trials as f64).sqrt(),
        trials,
        seed,
        r,
        strict,
    }
}

/// Estimates `P_μ(ℓ < r)` (or `≤ r`) from four independent points per trial.
pub fn estimate_two_chord(
    m: &MixtureMeasure,
    r: f64,
    trials: u64,
    seed: u64,
    strict: bool,
) -> Result<MCEstimate> {
    check_inputs(r, trials)?;
    let hits = count_hits(trials, seed, |rng| {
        let (a, b, c, d) = (m.sample(rng), m.sample(rng), m.sample(rng), m.sample(rng));
        compare(f_value(a, b, c, d), r, strict)
    });
    Ok(binomial(hits, trials, seed, r, strict))
}

/// Estimates the probability that the chord through two independent points
/// passes within distance `r` of the origin.
pub fn estimate_one_chord(
    m: &MixtureMeasure,
    r: f64,
    trials: u64,
    seed: u64,
    strict: bool,
) -> Result<MCEstimate> {
    check_inputs(r, trials)?;
    let hits = count_hits(trials, seed, |rng| {
        let (a, b) = (m.sample(rng), m.sample(rng));
        compare(chord_distance_to_origin(a, b), r, strict)
    });
    Ok(binomial(hits, trials, seed, r, strict))
}

/// Estimates `E[g]` where `g` draws whatever it needs from the generator.
pub fn estimate_expectation<F>(trials: u64, seed: u64, g: F) -> Result<MeanEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    let partials: Vec<(CompensatedSum, CompensatedSum)> = blocks(trials)
        .map(|(b, len)| {
            let mut rng = stream_rng(seed, b);
            let mut s = CompensatedSum::new();
            let mut s2 = CompensatedSum::new();
            for _ in 0..len {
                let x = g(&mut rng);
                s.add(x);
                s2.add(x * x);
            }
            (s, s2)
        })
        .collect();
    let mut s = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for (a, b) in partials {
        s.merge(a);
        s2.merge(b);
    }
    let n = trials as f64;
    let mean = s.value() / n;
    let var = if trials > 1 {
        ((s2.value() - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(MeanEstimate {
        mean,
        std_error: (var / n).sqrt(),
        trials,
    })
}

/// Draws two independent points and returns `|X + Y|/2` for them.
pub fn half_sum_sample<R: Rng + ?Sized>(m: &MixtureMeasure, rng: &mut R) -> f64 {
    let (x, y) = (m.sample(rng), m.sample(rng));
    let d = x.offset_to(y);
    crate::numeric::cos_pi(d).abs()
}
