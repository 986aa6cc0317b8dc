//! Densities, tails and monotonicity diagnostics for the three tail models.
//!
//! ```bash
//! cargo run --example tail_models
//! ```

use abos::distributions::{check_monotonicity, tail_diagnostics, TailKind, TailModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> abos::Result<()> {
    let grid: Vec<f64> = (0..=40).map(|i| 10f64.powf(-1.0 + i as f64 * 0.1)).collect();
    for kind in TailKind::ALL {
        let model = TailModel::new(kind, 3.0)?;
        println!("{kind} (γ = 3, C_d = {:.6}, {:?})", model.c_d(), model.sides());
        println!("  d(1) = {:.6}  D(1) = {:.6}  1-D(100) = {:.4e}", model.density(1.0)?, model.cdf(1.0), model.survival(100.0));
        println!("  median = {:.6}", model.quantile(0.5)?);

        let rows = tail_diagnostics(&model, &grid);
        let last = rows.last().unwrap();
        println!("  at x = {}: g = {:.6} (→ {:.6}), h = {:.6} (→ {:.6})", last.x, last.g, model.c_d(), last.h, model.c_d() / 3.0);
        println!("  monotone on grid: {:?}", check_monotonicity(&rows));

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draws = model.sample(1.0, 5, &mut rng)?;
        println!("  draws: {draws:.3?}");
    }
    Ok(())
}
