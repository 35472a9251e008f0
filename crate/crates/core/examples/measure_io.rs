//! Reading, validating and writing measures.

use random_chords::measure::MeasureSpec;
use random_chords::{AngleUnit, MixtureMeasure};

fn main() -> random_chords::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    for name in ["square", "mixed", "uniform", "bad_mass"] {
        match MixtureMeasure::read(format!("{dir}/{name}.json"), AngleUnit::Turns) {
            Ok(m) => println!(
                "{name}: {} atoms, {} arcs, discrete = {}, |a_1| = {:.6}",
                m.atoms().len(),
                m.arcs().len(),
                m.is_discrete(),
                m.fourier_coefficient(1).norm()
            ),
            Err(e) => println!("{name}: rejected ({e})"),
        }
    }
    let spec = MeasureSpec::from_json(r#"{"atoms":[{"angle_turns":3.14159265358979,"weight":1}]}"#)?;
    let m = spec.from_radians().validate()?;
    println!("half a turn given in radians: {}", m.to_spec().to_json());
    Ok(())
}
