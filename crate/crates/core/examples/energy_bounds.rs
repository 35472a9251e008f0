//! E|X + Y|/2 for a few measures, between the bounds 1/2 and 2/π.

use std::f64::consts::FRAC_2_PI;

use random_chords::energy::{
    expected_half_diff, expected_half_sum, f_r_fourier, f_r_mass, DEFAULT_TRUNCATION,
};
use random_chords::measure::{random, stream_rng};
use random_chords::{DiscreteMeasure, MixtureMeasure};

fn main() -> random_chords::Result<()> {
    let mut rng = stream_rng(3, 0);
    let measures: Vec<(&str, MixtureMeasure)> = vec![
        ("uniform", MixtureMeasure::uniform()),
        ("antipodal pair", DiscreteMeasure::antipodal_pair(0.1)?.into()),
        ("point mass", DiscreteMeasure::delta(0.3)?.into()),
        ("half circle", MixtureMeasure::uniform_arc(0.0, 0.5)?),
        ("random symmetric", random::symmetric_mixture(&mut rng)),
        ("random", random::mixture(&mut rng)),
    ];
    println!("bounds: 1/2 and 2/pi = {FRAC_2_PI:.10}");
    for (name, m) in &measures {
        let p = expected_half_sum(m, DEFAULT_TRUNCATION)?;
        let q = expected_half_diff(m, DEFAULT_TRUNCATION)?;
        println!(
            "{name:>17}: E|X+Y|/2 = {:.10}  E|X-Y|/2 = {:.10}  (± {:.1e})",
            p.value, q.value, p.tail_bound
        );
    }
    let r = 0.7;
    let coeffs: Vec<String> = (1..=5)
        .map(|k| f_r_fourier(k, r).map(|c| format!("{c:+.5}")))
        .collect::<Result<_, _>>()?;
    println!(
        "indicator at r = {r}: mass {:.6}, coefficients {}",
        f_r_mass(r)?,
        coeffs.join(" ")
    );
    Ok(())
}
