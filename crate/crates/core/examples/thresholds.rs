//! Oracle, BFDR and GW thresholds for one problem, with their asymptotic
//! approximations.

use abos::distributions::TailModel;
use abos::regime::{bfdr_floor, AsymptoticRegime, TestingProblem};
use abos::thresholds::{
    bfdr_threshold, bfdr_threshold_asymptotic, gw_threshold, oracle_threshold, oracle_threshold_asymptotic,
    oracle_threshold_t_closed_form,
};

fn main() -> abos::Result<()> {
    let model = TailModel::student_t(3.0)?;
    let c = 1.0;
    let regime = AsymptoticRegime::new(&model, c, 1.0)?;
    for m in [1e4f64, 1e6, 1e8] {
        let p = m.powf(-0.5);
        let problem = TestingProblem::on_manifold(&model, c, m as u64, p, 1.0, 1.0)?;
        let v = problem.v();
        let oracle = oracle_threshold(&model, &problem);
        let closed = oracle_threshold_t_closed_form(3.0, problem.theta(), v)?;
        println!("m = {m:e}, p = {p:.2e}, u = {:.2}", problem.u);
        println!(
            "  oracle ω² = {:.6} (closed form {:.6}, asymptotic {:.6}), residual {:.1e}",
            oracle.omega_squared().unwrap(),
            closed,
            oracle_threshold_asymptotic(&regime, v, 3.0),
            oracle.residual
        );
        let floor = bfdr_floor(&model, &problem);
        for alpha in [regime.alpha_inf, 0.5] {
            let b = bfdr_threshold(&model, &problem, alpha);
            let gw = gw_threshold(&model, &problem, alpha);
            println!(
                "  α = {alpha:.4}: BFDR ω² = {:.4} (asymptotic {:.4}), GW ω² = {:.4}  [β* = {floor:.4}]",
                b.omega_squared().unwrap_or(f64::INFINITY),
                bfdr_threshold_asymptotic(&model, &regime, problem.f(), alpha),
                gw.omega_squared().unwrap_or(f64::INFINITY),
            );
        }
        let below = bfdr_threshold(&model, &problem, floor / 2.0);
        println!("  α = β*/2: {}", below.status.name());
    }
    Ok(())
}
