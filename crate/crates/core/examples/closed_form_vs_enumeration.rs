//! The crossing probability of a discrete measure, computed two ways.

use random_chords::exact::{prob_closed_form_r1, prob_enumerate, w_function};
use random_chords::measure::{random, stream_rng};
use random_chords::DiscreteMeasure;

fn main() -> random_chords::Result<()> {
    for n in [2, 3, 4, 5, 8, 100, 10_000] {
        let m = DiscreteMeasure::regular_polygon(n)?;
        println!(
            "regular {n:>5}-gon: P(cross) = {:.12}",
            prob_closed_form_r1(&m)?.value
        );
    }
    println!("the uniform measure gives 1/3 = {:.12}", 1.0 / 3.0);

    let mut rng = stream_rng(42, 0);
    for n in [3, 5, 7] {
        let m = random::discrete(n, &mut rng);
        let closed = prob_closed_form_r1(&m)?.value;
        let direct = prob_enumerate(&m, 1.0, true)?.value;
        let w = w_function(&m.weights())?;
        println!(
            "random {n} atoms: closed {closed:.15}  enumerated {direct:.15}  1/3 - w {:.15}",
            1.0 / 3.0 - w
        );
    }
    Ok(())
}
