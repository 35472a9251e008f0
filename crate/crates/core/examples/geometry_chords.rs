//! Where do two chords meet? Classifies a few configurations and shows the
//! arc of partners whose chord passes near the centre.

use random_chords::geometry::{chords_cross_strictly_inside, classify_lines, f_value, i_r_arc};
use random_chords::Angle;

fn main() -> random_chords::Result<()> {
    let t = |x: f64| Angle::from_turns(x);
    let configs = [
        ("square diagonals", [0.0, 0.5, 0.25, 0.75]),
        ("skewed crossing", [0.05, 0.55, 0.3, 0.9]),
        ("disjoint chords", [0.0, 0.1, 0.4, 0.6]),
        ("parallel chords", [0.1, 0.4, 0.6, 0.9]),
        ("same chord", [0.1, 0.3, 0.3, 0.1]),
    ];
    for (name, [a, b, c, d]) in configs {
        let (a, b, c, d) = (t(a)?, t(b)?, t(c)?, t(d)?);
        // the crossing predicate needs four distinct endpoints
        let cross = match chords_cross_strictly_inside(a, b, c, d) {
            Ok(x) => x.to_string(),
            Err(_) => "n/a".into(),
        };
        println!(
            "{name:>16}: f = {:<22} cross = {cross:<5} {:?}",
            f_value(a, b, c, d),
            classify_lines(a, b, c, d)
        );
    }
    let arc = i_r_arc(Angle::ZERO, 0.5)?;
    println!(
        "chords from 0 within distance 0.5 of the centre end in [{:.6}, {:.6}] (length {:.6} turns)",
        arc.start().turns(),
        arc.end().turns(),
        arc.length()
    );
    Ok(())
}
