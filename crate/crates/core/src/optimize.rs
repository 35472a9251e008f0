//! Search for discrete measures maximizing the one-chord probability
//! `∫ μ(I_r(x)) dμ(x)` and the two-chord probability `P_μ(ℓ < r)`.
//!
//! For fixed atom angles both objectives are homogeneous polynomials with
//! non-negative coefficients in the weights: a quadratic form over atoms
//! (one chord) and a quadratic form over chord masses (two chords). Weights
//! are climbed by Baum–Eagon (replicator) steps and finished with a Newton
//! solve of the Karush–Kuhn–Tucker system on the support. The objectives are
//! piecewise constant in the angles, which are searched by simulated
//! annealing with restarts.
//!
//! Every reported value is recomputed by [`crate::exact`] on the reported
//! measure, so it is always attained.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{check_budget, one_chord_functional, prob_enumerate, DEFAULT_ENUMERATION_BUDGET};
use crate::geometry::{chord_distance_to_origin, compare, f_value, Angle};
use crate::measure::{stream_rng, DiscreteMeasure};
use crate::numeric::CompensatedSum;

/// Atoms lighter than this are dropped from reported measures.
pub const PRUNE_WEIGHT: f64 = 1e-9;
/// Proposals closer than this to another atom are rejected.
const MIN_SEPARATION: f64 = 1e-9;
/// Share of proposals that redraw an angle uniformly.
const GLOBAL_MOVE_RATE: f64 = 0.1;
/// Weight and width of the smoothed objective used to break plateaus.
const SURROGATE_WEIGHT: f64 = 0.02;
const SURROGATE_WIDTH: f64 = 0.03;
/// Final proposal width as a fraction of the initial one.
const WIDTH_DECAY: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    OneChord,
    TwoChord,
}

impl Objective {
    /// Closed disk for the one-chord kernel, open disk for two chords.
    pub fn default_strict(self) -> bool {
        self == Objective::TwoChord
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub n_atoms: usize,
    pub restarts: usize,
    pub anneal_steps: usize,
    pub anneal_temp_initial: f64,
    pub anneal_temp_final: f64,
    /// Replicator steps after each angle proposal.
    pub weight_iterations: usize,
    /// Initial angular proposal width in turns.
    pub step_size: f64,
    pub seed: u64,
    pub r: f64,
    pub strict: bool,
}

impl OptimizeConfig {
    /// Defaults for `objective` at radius `r`.
    pub fn new(objective: Objective, r: f64) -> Self {
        OptimizeConfig {
            n_atoms: 4,
            restarts: 20,
            anneal_steps: 300,
            anneal_temp_initial: 0.05,
            anneal_temp_final: 1e-4,
            weight_iterations: 100,
            step_size: 0.25,
            seed: 0,
            r,
            strict: objective.default_strict(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_atoms", self.n_atoms),
            ("restarts", self.restarts),
            ("anneal_steps", self.anneal_steps),
            ("weight_iterations", self.weight_iterations),
        ];
        for (name, c) in counts {
            if c == 0 {
                return Err(Error::domain(format!("{name} must be at least 1")));
            }
        }
        if !(0.0..=1.0).contains(&self.r) {
            return Err(Error::domain(format!(
                "radius must lie in [0, 1], got {}",
                self.r
            )));
        }
        let (t0, t1) = (self.anneal_temp_initial, self.anneal_temp_final);
        if !(t0.is_finite() && t1 > 0.0 && t1 <= t0) {
            return Err(Error::domain(format!(
                "temperatures must be positive and decreasing, got {t0} -> {t1}"
            )));
        }
        if !(self.step_size > 0.0 && self.step_size <= 0.5) {
            return Err(Error::domain(format!(
                "step_size must lie in (0, 1/2] turns, got {}",
                self.step_size
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumReport {
    pub best_measure: DiscreteMeasure,
    pub best_value: f64,
    pub objective: Objective,
    pub r: f64,
    pub strict: bool,
    /// `(restart, best value over restarts 0..=restart)`.
    pub trace: Vec<(usize, f64)>,
    pub el_residual: f64,
}

pub fn maximize_one_chord(cfg: &OptimizeConfig) -> Result<OptimumReport> {
    maximize(Objective::OneChord, cfg)
}

pub fn maximize_two_chord(cfg: &OptimizeConfig) -> Result<OptimumReport> {
    maximize(Objective::TwoChord, cfg)
}

pub fn maximize(objective: Objective, cfg: &OptimizeConfig) -> Result<OptimumReport> {
    cfg.validate()?;
    if objective == Objective::TwoChord {
        check_budget(cfg.n_atoms, DEFAULT_ENUMERATION_BUDGET)?;
    }
    let results: Vec<(DiscreteMeasure, f64)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| run_restart(objective, cfg, k))
        .collect::<Result<_>>()?;

    let mut best = 0;
    let mut trace = Vec::with_capacity(results.len());
    for (k, (_, v)) in results.iter().enumerate() {
        if *v > results[best].1 {
            best = k;
        }
        trace.push((k, results[best].1));
    }
    let (best_measure, best_value) = results.into_iter().nth(best).expect("restarts >= 1");
    let el_residual = check_euler_lagrange(&best_measure, cfg.r, objective, cfg.strict)?;
    Ok(OptimumReport {
        best_measure,
        best_value,
        objective,
        r: cfg.r,
        strict: cfg.strict,
        trace,
        el_residual,
    })
}

/// Largest deviation, over the atoms of `m`, of the marginal from the
/// objective value: `|μ(I_r(aᵢ)) − ∫μ(I_r)dμ|` for one chord and
/// `|μ⊗μ⊗μ{f(aᵢ,·,·,·) < r} − P_μ(ℓ < r)|` for two chords (`≤ r` unless
/// `strict`). Zero at every local maximizer.
pub fn check_euler_lagrange(m: &DiscreteMeasure, r: f64, objective: Objective, strict: bool) -> Result<f64> {
    let a = m.angles();
    let w = m.weights();
    let n = a.len();
    let (value, marginals): (f64, Vec<f64>) = match objective {
        Objective::OneChord => {
            let value = one_chord_functional(m, r, strict)?;
            let g = (0..n)
                .map(|i| {
                    (0..n)
                        .filter(|&j| compare(chord_distance_to_origin(a[i], a[j]), r, strict))
                        .map(|j| w[j])
                        .collect::<CompensatedSum>()
                        .value()
                })
                .collect();
            (value, g)
        }
        Objective::TwoChord => {
            let value = prob_enumerate(m, r, strict)?.value;
            let g = (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut acc = CompensatedSum::new();
                    for j in 0..n {
                        for k in 0..n {
                            for l in 0..n {
                                if compare(f_value(a[i], a[j], a[k], a[l]), r, strict) {
                                    acc.add(w[j] * w[k] * w[l]);
                                }
                            }
                        }
                    }
                    acc.value()
                })
                .collect();
            (value, g)
        }
    };
    Ok(marginals.iter().map(|g| (g - value).abs()).fold(0.0, f64::max))
}

/// The objective for fixed angles as a quadratic form `mᵀHm` in unit masses:
/// atoms for one chord, unordered chords `{i, j}` (with `i = j` allowed) for
/// two chords.
struct Landscape {
    objective: Objective,
    r: f64,
    strict: bool,
    angles: Vec<Angle>,
    units: Vec<(usize, usize)>,
    /// `unit_of[i * n + j]` for two chords.
    unit_of: Vec<usize>,
    hit: Vec<f64>,
    soft: Vec<f64>,
}

impl Landscape {
    fn new(objective: Objective, r: f64, strict: bool, angles: Vec<Angle>) -> Self {
        let n = angles.len();
        let (units, unit_of) = match objective {
            Objective::OneChord => ((0..n).map(|i| (i, i)).collect(), Vec::new()),
            Objective::TwoChord => {
                let mut units = Vec::new();
                let mut unit_of = vec![0; n * n];
                for i in 0..n {
                    for j in i..n {
                        unit_of[i * n + j] = units.len();
                        unit_of[j * n + i] = units.len();
                        units.push((i, j));
                    }
                }
                (units, unit_of)
            }
        };
        let u = units.len();
        let mut l = Landscape {
            objective,
            r,
            strict,
            angles,
            units,
            unit_of,
            hit: vec![0.0; u * u],
            soft: vec![0.0; u * u],
        };
        for p in 0..u {
            for q in p..u {
                l.fill(p, q);
            }
        }
        l
    }

    fn n(&self) -> usize {
        self.angles.len()
    }

    fn distance(&self, p: usize, q: usize) -> f64 {
        let a = &self.angles;
        match self.objective {
            Objective::OneChord => chord_distance_to_origin(a[p], a[q]),
            Objective::TwoChord => {
                let ((i, j), (k, l)) = (self.units[p], self.units[q]);
                f_value(a[i], a[j], a[k], a[l])
            }
        }
    }

    fn fill(&mut self, p: usize, q: usize) {
        let d = self.distance(p, q);
        let u = self.units.len();
        let h = if compare(d, self.r, self.strict) { 1.0 } else { 0.0 };
        let s = if d.is_finite() {
            1.0 / (1.0 + ((d - self.r) / SURROGATE_WIDTH).exp())
        } else {
            0.0
        };
        for (x, y) in [(p, q), (q, p)] {
            self.hit[x * u + y] = h;
            self.soft[x * u + y] = s;
        }
    }

    fn move_atom(&mut self, i: usize, to: Angle) {
        self.angles[i] = to;
        let u = self.units.len();
        let touched: Vec<usize> = (0..u)
            .filter(|&p| self.units[p].0 == i || self.units[p].1 == i)
            .collect();
        for &p in &touched {
            for q in 0..u {
                self.fill(p, q);
            }
        }
    }

    fn masses(&self, w: &[f64]) -> Vec<f64> {
        match self.objective {
            Objective::OneChord => w.to_vec(),
            Objective::TwoChord => self
                .units
                .iter()
                .map(|&(i, j)| if i == j { w[i] * w[i] } else { 2.0 * w[i] * w[j] })
                .collect(),
        }
    }

    fn form(matrix: &[f64], m: &[f64]) -> Vec<f64> {
        let u = m.len();
        (0..u)
            .map(|p| matrix[p * u..(p + 1) * u].iter().zip(m).map(|(h, x)| h * x).sum())
            .collect()
    }

    /// Marginals `gᵢ = ∂P/∂wᵢ / degree` and the value `P = Σ wᵢgᵢ`.
    fn marginals(&self, w: &[f64]) -> (Vec<f64>, f64) {
        let q = Self::form(&self.hit, &self.masses(w));
        let n = self.n();
        let g: Vec<f64> = match self.objective {
            Objective::OneChord => q,
            Objective::TwoChord => (0..n)
                .map(|i| (0..n).map(|j| w[j] * q[self.unit_of[i * n + j]]).sum())
                .collect(),
        };
        let value = w.iter().zip(&g).map(|(a, b)| a * b).sum();
        (g, value)
    }

    fn value(&self, w: &[f64]) -> f64 {
        self.marginals(w).1
    }

    fn surrogate(&self, w: &[f64]) -> f64 {
        let m = self.masses(w);
        let q = Self::form(&self.soft, &m);
        m.iter().zip(&q).map(|(a, b)| a * b).sum()
    }

    /// Baum–Eagon steps `wᵢ ← wᵢ·gᵢ/P`; each step does not decrease `P`.
    fn replicate(&self, w: &mut [f64], iterations: usize) {
        for _ in 0..iterations {
            let (g, value) = self.marginals(w);
            if value <= 0.0 {
                return;
            }
            let mut change: f64 = 0.0;
            for (wi, gi) in w.iter_mut().zip(&g) {
                let next = *wi * gi / value;
                change = change.max((next - *wi).abs());
                *wi = next;
            }
            normalize(w);
            if change < 1e-16 {
                return;
            }
        }
    }

    /// Jacobian `∂gᵢ/∂w_k` restricted to `support`.
    fn jacobian(&self, w: &[f64], support: &[usize]) -> Vec<f64> {
        let s = support.len();
        let u = self.units.len();
        let n = self.n();
        let mut jac = vec![0.0; s * s];
        match self.objective {
            Objective::OneChord => {
                for (x, &i) in support.iter().enumerate() {
                    for (y, &k) in support.iter().enumerate() {
                        jac[x * s + y] = self.hit[i * u + k];
                    }
                }
            }
            Objective::TwoChord => {
                let q = Self::form(&self.hit, &self.masses(w));
                for (x, &i) in support.iter().enumerate() {
                    for (y, &k) in support.iter().enumerate() {
                        let mut acc = q[self.unit_of[i * n + k]];
                        for &j in support {
                            let row = self.unit_of[i * n + j] * u;
                            for &l in support {
                                acc += 2.0 * w[j] * w[l] * self.hit[row + self.unit_of[k * n + l]];
                            }
                        }
                        jac[x * s + y] = acc;
                    }
                }
            }
        }
        jac
    }

    /// Newton iteration for `gᵢ = P` on the atoms above `threshold`, with the
    /// others set to zero. `None` if it leaves the simplex or stalls.
    fn newton(&self, w: &[f64], threshold: f64) -> Option<Vec<f64>> {
        let support: Vec<usize> = (0..w.len()).filter(|&i| w[i] > threshold).collect();
        let s = support.len();
        let mut cur = vec![0.0; w.len()];
        for &i in &support {
            cur[i] = w[i];
        }
        normalize(&mut cur);
        for _ in 0..30 {
            let (g, value) = self.marginals(&cur);
            let res: f64 = support.iter().map(|&i| (g[i] - value).abs()).fold(0.0, f64::max);
            if res < 1e-15 {
                break;
            }
            // [[J, -1], [1ᵀ, 0]] (dw, dμ) = (value - g, 0)
            let dim = s + 1;
            let jac = self.jacobian(&cur, &support);
            let mut a = vec![0.0; dim * (dim + 1)];
            for x in 0..s {
                for y in 0..s {
                    a[x * (dim + 1) + y] = jac[x * s + y];
                }
                a[x * (dim + 1) + s] = -1.0;
                a[x * (dim + 1) + dim] = value - g[support[x]];
                a[s * (dim + 1) + x] = 1.0;
            }
            let step = solve_augmented(&mut a, dim)?;
            for (x, &i) in support.iter().enumerate() {
                cur[i] += step[x];
                if cur[i] <= 0.0 {
                    return None;
                }
            }
            normalize(&mut cur);
        }
        Some(cur)
    }

    fn residual(&self, w: &[f64]) -> f64 {
        let (g, value) = self.marginals(w);
        (0..w.len())
            .filter(|&i| w[i] > 0.0)
            .map(|i| (g[i] - value).abs())
            .fold(0.0, f64::max)
    }

    /// Long replicator run, then the best of the Newton refinements.
    fn polish(&self, w: &mut Vec<f64>, iterations: usize) {
        self.replicate(w, iterations);
        let base = self.value(w);
        let max = w.iter().cloned().fold(0.0, f64::max);
        let mut best = (base, self.residual(w), w.clone());
        for threshold in [1e-7, 1e-3 * max] {
            if let Some(c) = self.newton(w, threshold) {
                let (v, res) = (self.value(&c), self.residual(&c));
                let better = v > best.0 + 1e-14 || (v >= best.0 - 1e-14 && res < best.1);
                if v >= base - 1e-14 && better {
                    best = (v, res, c);
                }
            }
        }
        *w = best.2;
        for wi in w.iter_mut() {
            if *wi < PRUNE_WEIGHT {
                *wi = 0.0;
            }
        }
        normalize(w);
    }
}

fn normalize(w: &mut [f64]) {
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        w.iter_mut().for_each(|x| *x /= total);
    }
}

/// Gaussian elimination with partial pivoting on the `dim × (dim + 1)`
/// augmented matrix.
fn solve_augmented(a: &mut [f64], dim: usize) -> Option<Vec<f64>> {
    let cols = dim + 1;
    for c in 0..dim {
        let p = (c..dim).max_by(|&x, &y| a[x * cols + c].abs().total_cmp(&a[y * cols + c].abs()))?;
        if a[p * cols + c].abs() < 1e-12 {
            return None;
        }
        for k in 0..cols {
            a.swap(c * cols + k, p * cols + k);
        }
        for row in c + 1..dim {
            let f = a[row * cols + c] / a[c * cols + c];
            for k in c..cols {
                a[row * cols + k] -= f * a[c * cols + k];
            }
        }
    }
    let mut x = vec![0.0; dim];
    for c in (0..dim).rev() {
        let mut v = a[c * cols + dim];
        for k in c + 1..dim {
            v -= a[c * cols + k] * x[k];
        }
        x[c] = v / a[c * cols + c];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn too_close(angles: &[Angle], skip: usize, a: Angle) -> bool {
    angles
        .iter()
        .enumerate()
        .any(|(k, b)| k != skip && b.circular_distance(a) < MIN_SEPARATION)
}

fn random_angle(rng: &mut ChaCha8Rng) -> Angle {
    Angle::from_turns(rng.random::<f64>()).expect("finite")
}

/// Even restarts start near a rotated regular polygon, odd ones uniformly.
fn initial_angles(n: usize, restart: usize, rng: &mut ChaCha8Rng) -> Vec<Angle> {
    let offset: f64 = rng.random();
    let jitter = 0.02 / n as f64;
    let mut angles: Vec<Angle> = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            let a = if restart.is_multiple_of(2) {
                let t = offset + k as f64 / n as f64 + jitter * (2.0 * rng.random::<f64>() - 1.0);
                Angle::from_turns(t).expect("finite")
            } else {
                random_angle(rng)
            };
            if !too_close(&angles, usize::MAX, a) {
                angles.push(a);
                break;
            }
        }
    }
    angles
}

/// Random weights on a random subset of at least two atoms.
fn sparse_weights(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let k = if n > 2 { rng.random_range(2..=n) } else { n };
    let mut idx: Vec<usize> = (0..n).collect();
    let mut w = vec![0.0; n];
    for j in 0..k {
        let pick = rng.random_range(j..n);
        idx.swap(j, pick);
        // exponential draws give uniform points on the face
        w[idx[j]] = 1e-3 - (1.0 - rng.random::<f64>()).ln();
    }
    normalize(&mut w);
    w
}

fn run_restart(objective: Objective, cfg: &OptimizeConfig, restart: usize) -> Result<(DiscreteMeasure, f64)> {
    let n = cfg.n_atoms;
    let mut rng = stream_rng(cfg.seed, restart as u64);
    let mut land = Landscape::new(objective, cfg.r, cfg.strict, initial_angles(n, restart, &mut rng));
    let mut w = vec![1.0 / n as f64; n];
    land.replicate(&mut w, cfg.weight_iterations);
    let mut value = land.value(&w);
    let mut score = value + SURROGATE_WEIGHT * land.surrogate(&w);
    let mut best = (value, land.angles.clone(), w.clone());

    let steps = cfg.anneal_steps;
    let ratio = cfg.anneal_temp_final / cfg.anneal_temp_initial;
    for step in 0..steps {
        let progress = if steps > 1 {
            step as f64 / (steps - 1) as f64
        } else {
            1.0
        };
        let temp = cfg.anneal_temp_initial * ratio.powf(progress);
        let width = cfg.step_size * WIDTH_DECAY.powf(progress);

        let i = rng.random_range(0..n);
        let old = land.angles[i];
        let proposal = if rng.random::<f64>() < GLOBAL_MOVE_RATE {
            random_angle(&mut rng)
        } else {
            old.rotate(width * (2.0 * rng.random::<f64>() - 1.0))
        };
        if too_close(&land.angles, i, proposal) {
            continue;
        }
        land.move_atom(i, proposal);
        let mut trial: Vec<f64> = w.iter().map(|x| 0.9 * x + 0.1 / n as f64).collect();
        land.replicate(&mut trial, cfg.weight_iterations);
        let trial_value = land.value(&trial);
        let trial_score = trial_value + SURROGATE_WEIGHT * land.surrogate(&trial);
        let accept = trial_score >= score || rng.random::<f64>() < ((trial_score - score) / temp).exp();
        if accept {
            w = trial;
            value = trial_value;
            score = trial_score;
            if value > best.0 {
                best = (value, land.angles.clone(), w.clone());
            }
        } else {
            land.move_atom(i, old);
        }
    }

    let (_, angles, w) = best;
    let land = Landscape::new(objective, cfg.r, cfg.strict, angles);
    // Replicator steps never revive a zero weight and rarely empty a positive
    // one, so also try sparse random starting weights on the final angles.
    let mut w = (0..n)
        .map(|_| sparse_weights(n, &mut rng))
        .fold((land.value(&w), w), |acc, mut start| {
            land.replicate(&mut start, 5 * cfg.weight_iterations);
            let v = land.value(&start);
            if v > acc.0 {
                (v, start)
            } else {
                acc
            }
        })
        .1;
    land.polish(&mut w, 20 * cfg.weight_iterations);
    let (kept_angles, kept_weights): (Vec<Angle>, Vec<f64>) = land
        .angles
        .iter()
        .zip(&w)
        .filter(|(_, &x)| x > 0.0)
        .map(|(a, x)| (*a, *x))
        .unzip();
    let measure = DiscreteMeasure::normalized(&kept_angles, &kept_weights)?;
    let value = match objective {
        Objective::OneChord => one_chord_functional(&measure, cfg.r, cfg.strict)?,
        Objective::TwoChord => prob_enumerate(&measure, cfg.r, cfg.strict)?.value,
    };
    Ok((measure, value))
}

/// `sin(3π/14)`: below this radius the one-chord optimum over measures is
/// at most 2/3.
pub const TWO_THIRDS_LIMIT: f64 = 0.623_489_801_858_733_5;
