//! Monte Carlo for the uniform measure against the limit law.

use random_chords::montecarlo::{estimate_one_chord, estimate_two_chord};
use random_chords::special::karamata_law;
use random_chords::MixtureMeasure;

fn main() -> random_chords::Result<()> {
    let u = MixtureMeasure::uniform();
    println!("   r   two-chord MC        law       z   one-chord MC");
    for (k, r) in [0.25, 0.5, 0.75, 0.9, 1.0].into_iter().enumerate() {
        let two = estimate_two_chord(&u, r, 1_000_000, k as u64, true)?;
        let law = karamata_law(r)?;
        let one = estimate_one_chord(&u, r, 1_000_000, k as u64, false)?;
        println!(
            "{r:>4}   {:.6} ± {:.1e}   {law:.6}   {:>5.2}   {:.6}",
            two.mean,
            two.std_error,
            two.z_score(law),
            one.mean
        );
    }
    Ok(())
}
