//! Count-based calibration of C₀ and C from a single large sample.

use abos::distributions::{TailKind, TailModel};
use abos::regime::c0_from_c;
use abos::simlab::{estimate_c0, generate_dataset, replicate_rng, CellSpec};

fn main() -> abos::Result<()> {
    let model = TailModel::pareto(3.0)?;
    let cell = CellSpec { dist: TailKind::Pareto, gamma: 3.0, c: 1.0, m: 1_000_000, p: 1e-3, delta0: 1.0, delta_a: 1.0 };
    let ctx = cell.context()?;
    let data = generate_dataset(&model, &ctx.problem, &mut replicate_rng(8, 0, 0));
    println!("true C0 = {}", c0_from_c(&model, 1.0)?);
    for (a1, a2, b) in [(1.0, 4.0, 30.0), (2.0, 8.0, 40.0), (2.0, 8.0, 60.0)] {
        match estimate_c0(&model, &data.x, 1.0, a1, a2, b) {
            Ok(e) => println!("a1={a1} a2={a2} b={b}: m0={} m1={} C0_hat={:.4} C_hat={:?}", e.m0, e.m1, e.c0_hat, e.c_hat),
            Err(e) => println!("a1={a1} a2={a2} b={b}: {e}"),
        }
    }
    Ok(())
}
