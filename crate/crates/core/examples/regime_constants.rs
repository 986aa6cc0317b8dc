//! Limiting constants over a grid of difficulty indices, and the inverse map
//! from C₀ back to C.

use abos::distributions::{TailKind, TailModel};
use abos::regime::{c_from_c0, AsymptoticRegime};

fn main() -> abos::Result<()> {
    println!("{:<14} {:>5} {:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}", "dist", "γ", "C", "C0", "C1", "C2", "C_B", "α∞", "β*∞");
    for kind in TailKind::ALL {
        for gamma in [1.0, 3.0, 10.0] {
            let model = TailModel::new(kind, gamma)?;
            for c in [0.1, 1.0, 10.0] {
                let r = AsymptoticRegime::new(&model, c, 1.0)?;
                println!(
                    "{:<14} {:>5} {:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.4} {:>10.6} {:>10.6}",
                    kind.name(), gamma, c, r.c0, r.c1, r.c2, r.c_b, r.alpha_inf, r.beta_star_inf
                );
            }
        }
    }

    let pareto = TailModel::pareto(3.0)?;
    println!("\nPareto γ=3: C0 = 0.0625 ↔ C = {}", c_from_c0(&pareto, 0.0625)?);
    Ok(())
}
