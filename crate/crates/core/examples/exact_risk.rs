//! Exact Bayes risk of fixed thresholds, compared with the oracle.

use abos::distributions::TailModel;
use abos::procedures::{exact_fixed_risk, threshold_error_probs};
use abos::regime::{AsymptoticRegime, TestingProblem};
use abos::thresholds::{bfdr_threshold, oracle_threshold};

fn main() -> abos::Result<()> {
    let model = TailModel::student_t(3.0)?;
    let regime = AsymptoticRegime::new(&model, 1.0, 1.0)?;
    let problem = TestingProblem::on_manifold(&model, 1.0, 1_000_000, 1e-3, 1.0, 1.0)?;

    let oracle = oracle_threshold(&model, &problem);
    let e = threshold_error_probs(&model, &problem, &oracle);
    let r_opt = exact_fixed_risk(&problem, e.t1, e.t2);
    println!("oracle: t1 = {:.4e}, t2 = {:.6}, risk = {:.3} (asymptote {:.3})", e.t1, e.t2, r_opt, regime.oracle_risk_asymptote(&problem));

    for alpha in [0.01, 0.05, 0.1, regime.alpha_inf, 0.4, 0.7] {
        let rule = bfdr_threshold(&model, &problem, alpha);
        let e = threshold_error_probs(&model, &problem, &rule);
        let r = exact_fixed_risk(&problem, e.t1, e.t2);
        println!("BFDR α = {alpha:.4}: {:<10} risk ratio {:.4}", rule.status.name(), r / r_opt);
    }
    Ok(())
}
