//! MP, P1 and P2 against sparsity for the oracle and BH at α∞ and 1/log m.

use abos::simlab::{scenario_error_rates, ExperimentConfig, Scenario};

fn main() -> abos::Result<()> {
    let mut cfg = ExperimentConfig::desk(Scenario::ErrorRatesVsP);
    cfg.gammas = vec![3.0];
    cfg.c_grid = vec![1.0, 10.0];
    cfg.m = 2000;
    cfg.replicates = 50;
    cfg.p_grid = vec![0.005, 0.02, 0.1, 0.3];
    let run = scenario_error_rates(&cfg)?;
    println!("{:>5} {:>6} {:<14} {:>9} {:>9} {:>9}", "C", "p", "procedure", "MP", "P1", "P2");
    for r in &run.records {
        println!("{:>5} {:>6} {:<14} {:>9.5} {:>9.5} {:>9.4}", r.c, r.p, r.procedure, r.mp.mean, r.p1.mean, r.p2.mean);
    }
    Ok(())
}
