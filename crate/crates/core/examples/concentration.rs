//! How often the BH threshold at α∞ strays from the oracle by more than ε,
//! next to 1/v.

use abos::distributions::TailModel;
use abos::regime::{AsymptoticRegime, TestingProblem};
use abos::simlab::{bh_estimator, concentration_diagnostic};

fn main() -> abos::Result<()> {
    let model = TailModel::student_t(3.0)?;
    let regime = AsymptoticRegime::new(&model, 1.0, 1.0)?;
    for m in [1_000u64, 10_000, 100_000] {
        let p = (m as f64).powf(-0.5);
        let problem = TestingProblem::on_manifold(&model, 1.0, m, p, 1.0, 1.0)?;
        let est = concentration_diagnostic(&model, &problem, bh_estimator(model, regime.alpha_inf), 0.25, 200, 9)?;
        println!(
            "m = {m:>6}: P(|ω̂/ω − 1| > 0.25) ≈ {:.3} ± {:.3}, 1/v = {:.4}, estimate·v = {:.2}",
            est.probability,
            est.standard_error,
            est.inverse_v,
            est.probability / est.inverse_v
        );
    }
    Ok(())
}
