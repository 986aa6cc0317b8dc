//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use abos::distributions::{check_monotonicity, tail_diagnostics_at, Sides, TailKind, TailModel};
use abos::procedures::{bh_decide, exact_error_probs, exact_fixed_risk, pvalues, RankedPvalues};
use abos::regime::{bfdr_floor, u_from_difficulty, AsymptoticRegime, TestingProblem};
use abos::simlab::{
    default_alpha_grid, generate_dataset, replicate_rng, run_cell, run_scenario, CellSpec, Evaluation,
    ExperimentConfig, ProcedureSpec, Scenario,
};
use abos::thresholds::{
    bfdr_of_threshold, bfdr_threshold, gw_threshold, oracle_threshold, oracle_threshold_t_closed_form,
    ThresholdStatus,
};
use common::{integrate_half_line, log_grid, rel_diff};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn problem_with_v(m: u64, p: f64, u: f64, v: f64) -> TestingProblem {
    let f = (1.0 - p) / p;
    TestingProblem::new(m, p, 1.0, u, v / f, 1.0).unwrap()
}

fn solver_cross_validation() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cells = 0;
    for gamma in [1.0, 3.0, 10.0] {
        let model = TailModel::student_t(gamma).unwrap();
        for c in [0.1, 1.0, 10.0] {
            for v in [10.0, 1e3, 1e5] {
                let u = u_from_difficulty(&model, c, v).unwrap();
                let theta = 1.0 + u;
                let Ok(closed) = oracle_threshold_t_closed_form(gamma, theta, v) else { continue };
                let t = oracle_threshold(&model, &problem_with_v(1000, 0.01, u, v));
                let Some(w2) = t.omega_squared() else {
                    return outcome(false, format!("γ={gamma} C={c} v={v}: status {}", t.status.name()));
                };
                worst = worst.max(rel_diff(w2, closed));
                cells += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-10 && cells == 27 && elapsed < Duration::from_secs(1),
        format!("{cells} cells, max relative difference {worst:.2e} (tol 1e-10), {}", secs(elapsed)),
    )
}

fn plug_back_residuals() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20160);
    let (mut worst_bfdr, mut worst_gw) = (0.0f64, 0.0f64);
    let mut n = 0;
    while n < 100 {
        let kind = TailKind::ALL[rng.random_range(0..3)];
        let model = TailModel::new(kind, rng.random_range(1.0..10.0)).unwrap();
        let u = rng.random_range(1.0f64..12.0).exp();
        let p = rng.random_range(0.0005..0.3);
        let problem = TestingProblem::new(10_000, p, 1.0, u, 1.0, 1.0).unwrap();
        let floor = bfdr_floor(&model, &problem);
        let alpha = floor + rng.random_range(0.01..0.99) * (1.0 - p - floor);
        let b = bfdr_threshold(&model, &problem, alpha);
        if b.status != ThresholdStatus::Interior {
            continue;
        }
        n += 1;
        let back = bfdr_of_threshold(&model, &problem, b.omega().unwrap());
        worst_bfdr = worst_bfdr.max((back - alpha).abs());
        let gw = gw_threshold(&model, &problem, alpha / (1.0 - p));
        match gw.omega() {
            Some(w) if gw.status == ThresholdStatus::Interior => {
                worst_gw = worst_gw.max(rel_diff(w, b.omega().unwrap()));
            }
            _ => return outcome(false, format!("GW status {} where BFDR is interior", gw.status.name())),
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst_bfdr <= 1e-8 && worst_gw <= 1e-10 && elapsed < Duration::from_secs(1),
        format!(
            "100 draws, max |BFDR(ω)−α| {worst_bfdr:.2e} (tol 1e-8), max GW/BFDR ω difference {worst_gw:.2e} (tol 1e-10), {}",
            secs(elapsed)
        ),
    )
}

/// (v·t₁/C₁, t₂/C₂, risk/asymptote) at the oracle for `m`.
fn oracle_component_ratios(m: f64) -> [f64; 3] {
    let model = TailModel::student_t(3.0).unwrap();
    let regime = AsymptoticRegime::new(&model, 1.0, 1.0).unwrap();
    let p = m.powf(-0.5);
    let problem = TestingProblem::on_manifold(&model, 1.0, m as u64, p, 1.0, 1.0).unwrap();
    let w = oracle_threshold(&model, &problem).omega().unwrap();
    let probs = exact_error_probs(&model, &problem, w);
    let risk = exact_fixed_risk(&problem, probs.t1, probs.t2);
    [
        problem.v() * probs.t1 / regime.c1,
        probs.t2 / regime.c2,
        risk / regime.oracle_risk_asymptote(&problem),
    ]
}

fn oracle_risk_convergence() -> Outcome {
    let start = Instant::now();
    let small = oracle_component_ratios(1e4);
    let large = oracle_component_ratios(1e8);
    let elapsed = start.elapsed();
    let pass = (0..3).all(|i| (large[i] - 1.0).abs() <= 0.1 && (large[i] - 1.0).abs() < (small[i] - 1.0).abs())
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "m=1e4: vt1/C1={:.4} t2/C2={:.4} risk ratio={:.4}; m=1e8: {:.4} {:.4} {:.4}; {}",
            small[0], small[1], small[2], large[0], large[1], large[2], secs(elapsed)
        ),
    )
}

fn t3_cell(m: u64, p: f64) -> CellSpec {
    CellSpec { dist: TailKind::StudentT, gamma: 3.0, c: 1.0, m, p, delta0: 1.0, delta_a: 1.0 }
}

fn mc_vs_exact() -> Outcome {
    let start = Instant::now();
    let ctx = t3_cell(10_000, 0.01).context().unwrap();
    let evals: Vec<Evaluation> = [ProcedureSpec::Oracle, ProcedureSpec::BfdrFixed(0.1)]
        .iter()
        .map(|s| s.resolve(&ctx, None).unwrap())
        .collect();
    let stats = run_cell(&ctx, &evals, 1000, 7, 0);
    let mut pass = true;
    let mut parts = Vec::new();
    for s in &stats {
        let exact = s.exact_risk.unwrap();
        let z = (s.risk.mean - exact) / s.risk.se;
        pass &= z.abs() <= 3.0;
        parts.push(format!("{} mean {:.3} exact {:.3} ({:+.2} SE)", s.label, s.risk.mean, exact, z));
    }
    outcome(pass, format!("{}; {}", parts.join(", "), secs(start.elapsed())))
}

fn scenario1_surrogate() -> Outcome {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        scenario: Scenario::RiskRatioVsAlpha,
        dists: vec![TailKind::StudentT],
        gammas: vec![3.0],
        c_grid: vec![1.0],
        m: 10_000,
        replicates: 200,
        seed: 101,
        alpha_grid: default_alpha_grid(),
        p_grid: vec![],
        delta0: 1.0,
        delta_a: 1.0,
        procedures: vec![ProcedureSpec::Oracle, ProcedureSpec::Bh],
    };
    let run = run_scenario(&cfg).unwrap();
    if !run.failures.is_empty() {
        return outcome(false, format!("cell failures: {:?}", run.failures));
    }
    let bh: Vec<_> = run.records.iter().filter(|r| r.procedure == "bh").collect();
    let alpha_inf = bh[0].alpha_inf;
    let nearest = bh
        .iter()
        .min_by(|a, b| (a.alpha.unwrap() - alpha_inf).abs().total_cmp(&(b.alpha.unwrap() - alpha_inf).abs()))
        .unwrap();
    let min = bh.iter().map(|r| r.risk_ratio).fold(f64::INFINITY, f64::min);
    let at = nearest.risk_ratio;
    outcome(
        at <= 1.1 * min && (1.0..=1.5).contains(&at),
        format!(
            "α∞={alpha_inf:.4}, nearest grid α={:.4} ratio {at:.4}, grid minimum {min:.4}; {}",
            nearest.alpha.unwrap(),
            secs(start.elapsed())
        ),
    )
}

fn scenario2_surrogate() -> Outcome {
    let start = Instant::now();
    let ctx = t3_cell(10_000, 0.01).context().unwrap();
    let evals: Vec<Evaluation> = [ProcedureSpec::Oracle, ProcedureSpec::BhAlphaInf]
        .iter()
        .map(|s| s.resolve(&ctx, None).unwrap())
        .collect();
    let stats = run_cell(&ctx, &evals, 500, 202, 0);
    let (o, b) = (&stats[0].mp, &stats[1].mp);
    let diff = (b.mean - o.mean).abs();
    let se = (o.se * o.se + b.se * b.se).sqrt();
    outcome(
        diff <= 3.0 * se,
        format!(
            "MP oracle {:.6} ± {:.6}, BH(α∞) {:.6} ± {:.6}, |diff| = {:.2} combined SE; {}",
            o.mean,
            o.se,
            b.mean,
            b.se,
            diff / se,
            secs(start.elapsed())
        ),
    )
}

fn criticality() -> Outcome {
    let start = Instant::now();
    let m = 100_000u64;
    let ctx = t3_cell(m, (m as f64).powf(-0.5)).context().unwrap();
    let alpha = ctx.regime.beta_star_inf / 2.0;
    let eval = ProcedureSpec::BhCustom(alpha).resolve(&ctx, None).unwrap();
    let stats = run_cell(&ctx, &[eval], 100, 303, 0);
    let p2 = stats[0].p2;
    outcome(
        p2.mean >= 0.9,
        format!("α = β*∞/2 = {alpha:.5}, mean P2 {:.4} ± {:.4} (need ≥ 0.9); {}", p2.mean, p2.se, secs(start.elapsed())),
    )
}

fn brute_force_bh(p: &[f64], alpha: f64) -> (usize, Vec<bool>) {
    let m = p.len();
    let mut k_hat = 0;
    for k in 1..=m {
        let cut = alpha * k as f64 / m as f64;
        if p.iter().filter(|&&x| x <= cut).count() >= k {
            k_hat = k;
        }
    }
    if k_hat == 0 {
        return (0, vec![false; m]);
    }
    let cut = alpha * k_hat as f64 / m as f64;
    (k_hat, p.iter().map(|&x| x <= cut).collect())
}

fn bh_correctness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let m = rng.random_range(1..=50);
        let coarse = rng.random_bool(0.3);
        let p: Vec<f64> = (0..m)
            .map(|_| {
                if coarse {
                    rng.random_range(0..20) as f64 / 200.0
                } else {
                    rng.random::<f64>().powi(rng.random_range(1..4))
                }
            })
            .collect();
        let alpha = rng.random_range(0.001..0.5);
        let (k, decisions) = brute_force_bh(&p, alpha);
        let fast = bh_decide(&p, alpha);
        let ranked = RankedPvalues::new(&p, &vec![false; m]).unwrap();
        if fast.k_hat != k || fast.decisions != decisions || ranked.k_hat(alpha) != k {
            mismatches += 1;
        }
    }
    // Empirical FDR at m = 10³, α = 0.2.
    let model = TailModel::student_t(3.0).unwrap();
    let problem = TestingProblem::on_manifold(&model, 1.0, 1000, 0.1, 1.0, 1.0).unwrap();
    let fdp: Vec<f64> = (0..1000u64)
        .map(|r| {
            let mut rng = replicate_rng(505, 0, r);
            let data = generate_dataset(&model, &problem, &mut rng);
            let out = bh_decide(&pvalues(&model, &data.statistics(1.0)), 0.2);
            let v = out.decisions.iter().zip(&data.truth).filter(|(&d, &s)| d && !s).count();
            let rej = out.k_hat.max(1);
            v as f64 / rej as f64
        })
        .collect();
    let n = fdp.len() as f64;
    let mean = fdp.iter().sum::<f64>() / n;
    let sd = (fdp.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let se = sd / n.sqrt();
    outcome(
        mismatches == 0 && mean <= 0.2 + 3.0 * se,
        format!(
            "{mismatches} mismatches in 1000 brute-force instances; FDR {mean:.4} ± {se:.4} at α = 0.2; {}",
            secs(start.elapsed())
        ),
    )
}

fn distribution_suite() -> Outcome {
    let start = Instant::now();
    let grid = log_grid(1e-2, 1e3, 200);
    let mut problems = Vec::new();
    let (mut worst_mass, mut worst_tail, mut worst_ks) = (0.0f64, 0.0f64, 0.0f64);
    for kind in TailKind::ALL {
        for gamma in [1.0, 3.0, 10.0] {
            let model = TailModel::new(kind, gamma).unwrap();
            let half = integrate_half_line(|x| model.density(x).unwrap(), 1e-13);
            let mass = if model.sides() == Sides::TwoSided { 2.0 * half } else { half };
            worst_mass = worst_mass.max((mass - 1.0).abs());
            for theta in [2.0, 10.0, 100.0] {
                let mlr = grid.iter().map(|&x| model.ln_density(x / theta).unwrap() - model.ln_density(x).unwrap());
                let check = check_monotonicity(&tail_diagnostics_at(&model, &grid, theta));
                if !abos::distributions::is_strictly_increasing(mlr) || !check.all() {
                    problems.push(format!("{kind} γ={gamma} θ={theta}: {check:?}"));
                }
            }
            let x = 1e6;
            let g = model.density(x).unwrap() * x.powf(gamma + 1.0);
            let h = model.survival(x) * x.powf(gamma);
            worst_tail = worst_tail.max(rel_diff(g, model.c_d())).max(rel_diff(h, model.c_d() / gamma));
            let mut rng = ChaCha8Rng::seed_from_u64(606);
            let mut xs = model.sample(1.0, 100_000, &mut rng).unwrap();
            xs.sort_by(f64::total_cmp);
            let n = xs.len() as f64;
            let ks = xs
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let f = model.cdf(x);
                    (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
                })
                .fold(0.0, f64::max);
            worst_ks = worst_ks.max(ks);
        }
    }
    outcome(
        problems.is_empty() && worst_mass <= 1e-8 && worst_tail <= 0.01 && worst_ks <= 0.01,
        format!(
            "9 models: max |mass−1| {worst_mass:.1e}, max tail-limit error {worst_tail:.1e}, max KS {worst_ks:.4}, monotonicity failures {:?}; {}",
            problems,
            secs(start.elapsed())
        ),
    )
}

const DETERMINISM_CONFIG: &str = r#"
seed = 99
[scenario1]
dist = ["student-t", "pareto"]
gamma = [3, 10]
C = [0.1, 1, 10]
m = 2000
replicates = 24
alpha = [0.01, 0.1, 0.3]
procedures = ["oracle", "bh", "bfdr", "gw"]
[scenario2]
dist = ["inverse-gamma"]
gamma = [3]
C = [1]
m = 2000
replicates = 24
p = [0.01, 0.1]
procedures = ["oracle", "bh_alpha_inf", "bh_log", "bfdr_fixed(0.1)"]
"#;

fn determinism() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("det.cfg");
    std::fs::write(&config, DETERMINISM_CONFIG).unwrap();
    let mut outputs: Vec<(String, Vec<u8>, Vec<u8>)> = Vec::new();
    for (i, workers) in [1, 4, 16, 16, 1].iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        let status = Command::new(env!("CARGO_BIN_EXE_abos"))
            .args(["simulate", "--config"])
            .arg(&config)
            .arg("--out-dir")
            .arg(&out)
            .env("ABOS_THREADS", workers.to_string())
            .output()
            .unwrap();
        if !status.status.success() {
            return outcome(false, format!("simulate failed: {}", String::from_utf8_lossy(&status.stderr)));
        }
        outputs.push((
            format!("{workers} workers"),
            std::fs::read(out.join("scenario1.csv")).unwrap(),
            std::fs::read(out.join("scenario2.csv")).unwrap(),
        ));
    }
    let same = outputs.iter().all(|o| o.1 == outputs[0].1 && o.2 == outputs[0].2);
    outcome(
        same,
        format!(
            "{} runs under 1, 4, 16, 16, 1 workers; scenario1.csv {} bytes, scenario2.csv {} bytes, identical: {same}; {}",
            outputs.len(),
            outputs[0].1.len(),
            outputs[0].2.len(),
            secs(start.elapsed())
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("solver cross-validation", solver_cross_validation),
        ("plug-back residuals", plug_back_residuals),
        ("oracle risk component convergence", oracle_risk_convergence),
        ("Monte Carlo vs exact risk", mc_vs_exact),
        ("scenario 1 surrogate (risk ratio near α∞)", scenario1_surrogate),
        ("scenario 2 surrogate (MP of BH at α∞ vs oracle)", scenario2_surrogate),
        ("criticality surrogate (BH below β*∞)", criticality),
        ("BH correctness", bh_correctness),
        ("distribution property suite", distribution_suite),
        ("determinism across worker counts", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let result = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                outcome(false, format!("panicked: {msg}"))
            });
        if !result.pass {
            failed += 1;
        }
        println!("{} {name}: {}", if result.pass { "PASS" } else { "FAIL" }, result.detail);
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
