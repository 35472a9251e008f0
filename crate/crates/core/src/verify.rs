//! Self-check suites run by `chords verify`.

use std::f64::consts::FRAC_2_PI;

use serde::Serialize;

use crate::energy::{expected_half_sum, DEFAULT_TRUNCATION};
use crate::error::Result;
use crate::exact::{prob_closed_form_r1, prob_enumerate, w_function};
use crate::measure::{random, stream_rng, DiscreteMeasure, MixtureMeasure};
use crate::montecarlo::estimate_two_chord;
use crate::optimize::{check_euler_lagrange, Objective};
use crate::special::{karamata_law, polygon_intersections};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma1,
    WBound,
    Karamata,
    El,
    Energy,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Lemma1,
                Suite::WBound,
                Suite::Karamata,
                Suite::El,
                Suite::Energy,
            ],
            s => vec![s],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Added to the closed form in the lemma1 suite to prove it can fail.
    pub perturb_closed_form: f64,
    pub mc_trials: u64,
    pub polygon_n: usize,
}

impl VerifyOptions {
    pub fn new(seed: u64) -> Self {
        VerifyOptions {
            seed,
            perturb_closed_form: 0.0,
            mc_trials: 1_000_000,
            polygon_n: 200,
        }
    }
}

fn check(suite: Suite, name: &str, passed: bool, detail: String) -> Check {
    Check {
        suite,
        name: name.to_string(),
        passed,
        detail,
    }
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in suite.expand() {
        match s {
            Suite::Lemma1 => out.extend(lemma1(opts)?),
            Suite::WBound => out.extend(w_bound(opts)?),
            Suite::Karamata => out.extend(karamata(opts)?),
            Suite::El => out.extend(euler_lagrange()?),
            Suite::Energy => out.extend(energy(opts)?),
            Suite::All => unreachable!("expanded"),
        }
    }
    Ok(out)
}

fn lemma1(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut rng = stream_rng(opts.seed, 1);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let m = random::discrete(2 + k % 7, &mut rng);
        let closed = prob_closed_form_r1(&m)?.value + opts.perturb_closed_form;
        let direct = prob_enumerate(&m, 1.0, true)?.value;
        worst = worst.max((closed - direct).abs());
    }
    Ok(vec![check(
        Suite::Lemma1,
        "closed form equals enumeration",
        worst < 1e-12,
        format!("200 measures, max deviation {worst:.3e} (limit 1e-12)"),
    )])
}

fn w_bound(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut rng = stream_rng(opts.seed, 2);
    let (mut below, mut nonpositive) = (0usize, 0usize);
    let mut min_ratio = f64::INFINITY;
    for k in 0..100_000 {
        let w = random::simplex_point(2 + k % 11, &mut rng);
        let v = w_function(&w)?;
        let s2: f64 = w.iter().map(|a| a * a).sum();
        min_ratio = min_ratio.min(v / s2);
        below += usize::from(v < 0.01 * s2);
        nonpositive += usize::from(v <= 0.0);
    }
    Ok(vec![
        check(
            Suite::WBound,
            "w >= 0.01 sum of squares",
            below == 0,
            format!("100000 points, {below} violations, min w/sum(a^2) = {min_ratio:.4}"),
        ),
        check(
            Suite::WBound,
            "w positive",
            nonpositive == 0,
            format!("{nonpositive} non-positive values"),
        ),
    ])
}

fn karamata(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let n = opts.polygon_n;
    for r in [0.4, 0.6, 0.8] {
        let c = polygon_intersections(n, r)?;
        // crossings are a third of all chord pairs, so the crossing ratio
        // tends to three times the law
        let target = 3.0 * karamata_law(r)?;
        let err = (c.ratio() - target).abs();
        out.push(check(
            Suite::Karamata,
            &format!("polygon n={n} r={r}"),
            err < 0.02,
            format!("ratio {:.6}, 3*law {target:.6}, |diff| {err:.2e}", c.ratio()),
        ));
    }
    let u = MixtureMeasure::uniform();
    for (k, r) in [0.25, 0.5, 0.75, 0.9].into_iter().enumerate() {
        let e = estimate_two_chord(&u, r, opts.mc_trials, opts.seed.wrapping_add(k as u64), true)?;
        let law = karamata_law(r)?;
        let z = e.z_score(law);
        out.push(check(
            Suite::Karamata,
            &format!("uniform Monte Carlo r={r}"),
            z.abs() <= 4.0,
            format!(
                "mean {:.6} +- {:.1e}, law {law:.6}, z {z:.2}",
                e.mean, e.std_error
            ),
        ));
    }
    Ok(out)
}

fn euler_lagrange() -> Result<Vec<Check>> {
    let pair = DiscreteMeasure::antipodal_pair(0.0)?;
    let tri = DiscreteMeasure::regular_polygon(3)?;
    let cases = [
        ("antipodal pair r=0.4 one chord", &pair, 0.4, Objective::OneChord),
        ("antipodal pair r=0.4 two chords", &pair, 0.4, Objective::TwoChord),
        (
            "equilateral triangle r=0.55 one chord",
            &tri,
            0.55,
            Objective::OneChord,
        ),
    ];
    cases
        .into_iter()
        .map(|(name, m, r, obj)| {
            let res = check_euler_lagrange(m, r, obj, obj.default_strict())?;
            Ok(check(Suite::El, name, res < 1e-6, format!("residual {res:.3e}")))
        })
        .collect()
}

fn energy(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let u = expected_half_sum(&MixtureMeasure::uniform(), DEFAULT_TRUNCATION)?;
    out.push(check(
        Suite::Energy,
        "uniform measure attains 2/pi",
        u.value == FRAC_2_PI,
        format!("value {:.17}", u.value),
    ));
    let pair: MixtureMeasure = DiscreteMeasure::antipodal_pair(0.0)?.into();
    let p = expected_half_sum(&pair, DEFAULT_TRUNCATION)?;
    out.push(check(
        Suite::Energy,
        "antipodal pair attains 1/2",
        (p.value - 0.5).abs() <= p.tail_bound && p.tail_bound <= 3e-4,
        format!("value {:.8}, tail bound {:.2e}", p.value, p.tail_bound),
    ));
    let mut rng = stream_rng(opts.seed, 3);
    let (mut upper_bad, mut lower_bad) = (0, 0);
    for _ in 0..20 {
        let s = expected_half_sum(&random::symmetric_mixture(&mut rng), DEFAULT_TRUNCATION)?;
        upper_bad += usize::from(s.value > FRAC_2_PI + s.tail_bound);
        let a = expected_half_sum(&random::mixture(&mut rng), DEFAULT_TRUNCATION)?;
        lower_bad += usize::from(a.value < 0.5 - a.tail_bound);
    }
    out.push(check(
        Suite::Energy,
        "symmetric measures stay below 2/pi",
        upper_bad == 0,
        format!("20 measures, {upper_bad} violations"),
    ));
    out.push(check(
        Suite::Energy,
        "all measures stay above 1/2",
        lower_bad == 0,
        format!("20 measures, {lower_bad} violations"),
    ));
    Ok(out)
}
