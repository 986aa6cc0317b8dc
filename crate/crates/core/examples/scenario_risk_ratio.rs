//! Risk ratio to the oracle across the α-grid at p = m^(-1/2), written as CSV
//! to stdout.
//!
//! ```bash
//! cargo run --release --example scenario_risk_ratio > scenario1.csv
//! ```

use abos::simlab::{scenario_risk_ratio, write_scenario1_csv, ExperimentConfig, ProcedureSpec, Scenario};

fn main() -> abos::Result<()> {
    let mut cfg = ExperimentConfig::desk(Scenario::RiskRatioVsAlpha);
    cfg.gammas = vec![3.0];
    cfg.c_grid = vec![1.0];
    cfg.m = 2000;
    cfg.replicates = 50;
    cfg.procedures = vec![ProcedureSpec::Oracle, ProcedureSpec::Bh, ProcedureSpec::Gw];
    let run = scenario_risk_ratio(&cfg)?;
    for f in &run.failures {
        eprintln!("{f}");
    }
    write_scenario1_csv(std::io::stdout().lock(), &run.records)
}
