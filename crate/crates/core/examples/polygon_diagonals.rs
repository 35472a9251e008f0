//! Diagonal crossings of regular polygons that fall inside radius r.

use random_chords::special::{dilog, karamata_law, polygon_intersections};

fn main() -> random_chords::Result<()> {
    println!("Li2(1/4) = {:.15}, Li2(1) = {:.15}", dilog(0.25)?, dilog(1.0)?);
    for r in [0.4, 0.6, 0.8] {
        let law = karamata_law(r)?;
        println!("r = {r}: law {law:.6}, three times the law {:.6}", 3.0 * law);
        for n in [25, 50, 100, 200] {
            let c = polygon_intersections(n, r)?;
            println!(
                "  n = {n:>3}: {:>8} of {:>8} crossings inside, ratio {:.6}",
                c.inside,
                c.total,
                c.ratio()
            );
        }
    }
    Ok(())
}
