//! Benjamini–Hochberg on simulated data: decisions, k̂, the equivalent
//! threshold, and error counts against the truth.

use abos::distributions::TailModel;
use abos::procedures::{bh_decide, bh_threshold, error_counts, pvalues, RankedPvalues};
use abos::regime::TestingProblem;
use abos::simlab::{generate_dataset, replicate_rng};

fn main() -> abos::Result<()> {
    let model = TailModel::student_t(3.0)?;
    let problem = TestingProblem::on_manifold(&model, 1.0, 10_000, 0.01, 1.0, 1.0)?;
    let data = generate_dataset(&model, &problem, &mut replicate_rng(42, 0, 0));
    let z = data.statistics(problem.sigma0);
    let p = pvalues(&model, &z);

    let out = bh_decide(&p, 0.1);
    let counts = error_counts(&out.decisions, &data.truth, 1.0, 1.0)?;
    println!("BH at 0.1: k̂ = {}, p cutoff = {:?}, threshold = {:?}", out.k_hat, out.p_cutoff, bh_threshold(&z, &out).omega());
    println!("  V = {}, T = {}, loss = {}", counts.false_rejections, counts.missed_signals, counts.realized_loss);

    // many levels on one dataset
    let ranked = RankedPvalues::new(&p, &data.truth)?;
    for alpha in [0.01, 0.05, 0.1, 0.2, 0.4] {
        let s = ranked.summary(alpha, 1.0, 1.0);
        println!("  α = {alpha:<4}: R = {:>4}, V = {:>4}, T = {:>4}", s.rejections, s.false_rejections, s.missed_signals);
    }
    Ok(())
}
