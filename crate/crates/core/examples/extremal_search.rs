//! Searches for measures maximizing one- and two-chord probabilities.

use random_chords::optimize::{check_euler_lagrange, maximize, Objective, OptimizeConfig};

fn main() -> random_chords::Result<()> {
    let runs = [
        (Objective::TwoChord, 0.4, 4),
        (Objective::TwoChord, 0.9, 8),
        (Objective::OneChord, 0.3, 6),
        (Objective::OneChord, 0.55, 6),
    ];
    for (objective, r, n_atoms) in runs {
        let cfg = OptimizeConfig {
            n_atoms,
            restarts: 8,
            ..OptimizeConfig::new(objective, r)
        };
        let rep = maximize(objective, &cfg)?;
        println!(
            "{objective:?} r = {r}: best {:.12}, residual {:.1e}",
            rep.best_value, rep.el_residual
        );
        for a in rep.best_measure.atoms() {
            println!("    atom at {:.6} turns, weight {:.6}", a.angle.turns(), a.weight);
        }
        let check = check_euler_lagrange(&rep.best_measure, r, objective, cfg.strict)?;
        assert_eq!(check, rep.el_residual);
    }
    Ok(())
}
