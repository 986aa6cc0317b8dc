//! Monte Carlo laboratory: mixture data, replicated decision rules and
//! aggregated error/risk estimates over parameter grids.
//!
//! Every replicate draws from its own ChaCha substream keyed by
//! `(seed, cell index)` with the replicate index as stream id, and replicate
//! results are reduced in index order, so output does not depend on how work
//! is scheduled across threads.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{TailKind, TailModel};
use crate::error::{Error, Result};
use crate::procedures::{bh_decide, bh_threshold, pvalues, threshold_error_probs, exact_fixed_risk, RankedPvalues};
use crate::regime::{c_from_c0, AsymptoticRegime, TestingProblem};
use crate::thresholds::{bfdr_threshold, gw_threshold, oracle_threshold, ThresholdResult, ThresholdStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Risk ratio of each rule to the oracle across an α-grid, `p = m^(−1/2)`.
    RiskRatioVsAlpha,
    /// MP / P1 / P2 across a grid of sparsity levels at fixed `m`.
    ErrorRatesVsP,
}

/// A decision rule requested in an experiment.
///
/// `Bh`, `Bfdr` and `Gw` take their level from the α-grid row and only make
/// sense in [`Scenario::RiskRatioVsAlpha`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProcedureSpec {
    Oracle,
    Bh,
    Bfdr,
    Gw,
    BhAlphaInf,
    BhLog,
    BhCustom(f64),
    BfdrFixed(f64),
    GwFixed(f64),
}

impl ProcedureSpec {
    pub fn uses_grid_alpha(self) -> bool {
        matches!(self, ProcedureSpec::Bh | ProcedureSpec::Bfdr | ProcedureSpec::Gw)
    }

    /// Resolve to a concrete rule inside a cell. `row_alpha` is the α-grid
    /// value for grid-relative procedures.
    pub fn resolve(self, ctx: &CellContext, row_alpha: Option<f64>) -> Result<Evaluation> {
        let grid = || {
            row_alpha.ok_or_else(|| Error::Config(format!("procedure `{self}` needs an α-grid")))
        };
        let (rule, alpha) = match self {
            ProcedureSpec::Oracle => (Rule::Fixed(ctx.oracle), None),
            ProcedureSpec::Bh => {
                let a = grid()?;
                (Rule::Bh(a), Some(a))
            }
            ProcedureSpec::Bfdr => {
                let a = grid()?;
                (Rule::Fixed(bfdr_threshold(&ctx.model, &ctx.problem, a)), Some(a))
            }
            ProcedureSpec::Gw => {
                let a = grid()?;
                (Rule::Fixed(gw_threshold(&ctx.model, &ctx.problem, a)), Some(a))
            }
            ProcedureSpec::BhAlphaInf => (Rule::Bh(ctx.regime.alpha_inf), Some(ctx.regime.alpha_inf)),
            ProcedureSpec::BhLog => (Rule::Bh(ctx.alpha_log), Some(ctx.alpha_log)),
            ProcedureSpec::BhCustom(a) => (Rule::Bh(a), Some(a)),
            ProcedureSpec::BfdrFixed(a) => (Rule::Fixed(bfdr_threshold(&ctx.model, &ctx.problem, a)), Some(a)),
            ProcedureSpec::GwFixed(a) => (Rule::Fixed(gw_threshold(&ctx.model, &ctx.problem, a)), Some(a)),
        };
        Ok(Evaluation { label: self.to_string(), alpha, rule })
    }
}

impl fmt::Display for ProcedureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcedureSpec::Oracle => f.write_str("oracle"),
            ProcedureSpec::Bh => f.write_str("bh"),
            ProcedureSpec::Bfdr => f.write_str("bfdr"),
            ProcedureSpec::Gw => f.write_str("gw"),
            ProcedureSpec::BhAlphaInf => f.write_str("bh_alpha_inf"),
            ProcedureSpec::BhLog => f.write_str("bh_log"),
            ProcedureSpec::BhCustom(a) => write!(f, "bh_custom({a})"),
            ProcedureSpec::BfdrFixed(a) => write!(f, "bfdr_fixed({a})"),
            ProcedureSpec::GwFixed(a) => write!(f, "gw_fixed({a})"),
        }
    }
}

impl FromStr for ProcedureSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let level = |name: &str| -> Result<Option<f64>> {
            match s.strip_prefix(name).and_then(|r| r.strip_prefix('(')).and_then(|r| r.strip_suffix(')')) {
                None => Ok(None),
                Some(inner) => {
                    let a: f64 = inner
                        .trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bad level in procedure `{s}`")))?;
                    if !(a > 0.0 && a < 1.0) {
                        return Err(Error::Config(format!("level in `{s}` must lie in (0, 1)")));
                    }
                    Ok(Some(a))
                }
            }
        };
        match s {
            "oracle" => return Ok(ProcedureSpec::Oracle),
            "bh" => return Ok(ProcedureSpec::Bh),
            "bfdr" => return Ok(ProcedureSpec::Bfdr),
            "gw" => return Ok(ProcedureSpec::Gw),
            "bh_alpha_inf" => return Ok(ProcedureSpec::BhAlphaInf),
            "bh_log" => return Ok(ProcedureSpec::BhLog),
            _ => {}
        }
        if let Some(a) = level("bh_custom")? {
            return Ok(ProcedureSpec::BhCustom(a));
        }
        if let Some(a) = level("bfdr_fixed")? {
            return Ok(ProcedureSpec::BfdrFixed(a));
        }
        if let Some(a) = level("gw_fixed")? {
            return Ok(ProcedureSpec::GwFixed(a));
        }
        Err(Error::Config(format!("unknown procedure `{s}`")))
    }
}

impl Serialize for ProcedureSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ProcedureSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// 30 levels spanning `[0.001, 0.95]`: ten log-spaced below 0.05, twenty
/// evenly spaced from 0.05 to 0.95.
pub fn default_alpha_grid() -> Vec<f64> {
    let geometric = (0..10).map(|i| 0.001 * 50f64.powf(i as f64 / 10.0));
    let linear = (0..20).map(|i| 0.05 + 0.9 * i as f64 / 19.0);
    geometric.chain(linear).collect()
}

/// Sparsity levels for the error-rate scenario.
pub fn default_p_grid() -> Vec<f64> {
    vec![0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub dists: Vec<TailKind>,
    pub gammas: Vec<f64>,
    pub c_grid: Vec<f64>,
    pub m: u64,
    pub replicates: usize,
    pub seed: u64,
    pub alpha_grid: Vec<f64>,
    pub p_grid: Vec<f64>,
    pub delta0: f64,
    pub delta_a: f64,
    pub procedures: Vec<ProcedureSpec>,
}

impl ExperimentConfig {
    /// Desk-scale defaults for a scenario: Student's t, γ ∈ {3, 10},
    /// C ∈ {0.1, 1, 10}, m = 10⁴, 200 replicates, unit losses.
    pub fn desk(scenario: Scenario) -> Self {
        let procedures = match scenario {
            Scenario::RiskRatioVsAlpha => vec![ProcedureSpec::Oracle, ProcedureSpec::Bh],
            Scenario::ErrorRatesVsP => vec![ProcedureSpec::Oracle, ProcedureSpec::BhAlphaInf, ProcedureSpec::BhLog],
        };
        Self {
            scenario,
            dists: vec![TailKind::StudentT],
            gammas: vec![3.0, 10.0],
            c_grid: vec![0.1, 1.0, 10.0],
            m: 10_000,
            replicates: 200,
            seed: 2016,
            alpha_grid: default_alpha_grid(),
            p_grid: default_p_grid(),
            delta0: 1.0,
            delta_a: 1.0,
            procedures,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.dists.is_empty() || self.gammas.is_empty() || self.c_grid.is_empty() {
            return bad("dist, gamma and C grids must be nonempty".into());
        }
        if self.m < 1 {
            return bad("m must be at least 1".into());
        }
        if self.m > u32::MAX as u64 {
            return bad(format!("m = {} exceeds the supported maximum {}", self.m, u32::MAX));
        }
        if self.replicates == 0 {
            return bad("replicates must be at least 1".into());
        }
        if self.procedures.is_empty() {
            return bad("at least one procedure is required".into());
        }
        for &g in &self.gammas {
            if !(g.is_finite() && g > 0.0) {
                return bad(format!("gamma must be positive, got {g}"));
            }
        }
        for &c in &self.c_grid {
            if !(c.is_finite() && c > 0.0) {
                return bad(format!("C must be positive, got {c}"));
            }
        }
        if !(self.delta0 > 0.0 && self.delta_a > 0.0) {
            return bad("loss weights must be positive".into());
        }
        match self.scenario {
            Scenario::RiskRatioVsAlpha => {
                if self.alpha_grid.is_empty() {
                    return bad("the risk-ratio scenario needs a nonempty alpha grid".into());
                }
                if let Some(a) = self.alpha_grid.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
                    return bad(format!("alpha grid values must lie in (0, 1), got {a}"));
                }
                if self.m < 2 {
                    return bad("the risk-ratio scenario needs m ≥ 2 so that p = m^(-1/2) < 1".into());
                }
            }
            Scenario::ErrorRatesVsP => {
                if self.p_grid.is_empty() {
                    return bad("the error-rate scenario needs a nonempty p grid".into());
                }
                if let Some(p) = self.p_grid.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
                    return bad(format!("p grid values must lie in (0, 1), got {p}"));
                }
                if let Some(proc_) = self.procedures.iter().find(|p| p.uses_grid_alpha()) {
                    return bad(format!("procedure `{proc_}` needs an alpha grid; use its fixed-level form"));
                }
            }
        }
        Ok(())
    }

    /// Cells in output order.
    pub fn cells(&self) -> Vec<CellSpec> {
        let mut cells = Vec::new();
        for &dist in &self.dists {
            for &gamma in &self.gammas {
                for &c in &self.c_grid {
                    let ps: Vec<f64> = match self.scenario {
                        Scenario::RiskRatioVsAlpha => vec![(self.m as f64).powf(-0.5)],
                        Scenario::ErrorRatesVsP => self.p_grid.clone(),
                    };
                    for p in ps {
                        cells.push(CellSpec { dist, gamma, c, m: self.m, p, delta0: self.delta0, delta_a: self.delta_a });
                    }
                }
            }
        }
        cells
    }
}

/// One `(distribution, γ, C, m, p)` combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSpec {
    pub dist: TailKind,
    pub gamma: f64,
    pub c: f64,
    pub m: u64,
    pub p: f64,
    pub delta0: f64,
    pub delta_a: f64,
}

impl fmt::Display for CellSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} gamma={:?} C={:?} m={} p={:?}", self.dist, self.gamma, self.c, self.m, self.p)
    }
}

/// Everything a cell derives before sampling.
#[derive(Debug, Clone, Copy)]
pub struct CellContext {
    pub spec: CellSpec,
    pub model: TailModel,
    pub problem: TestingProblem,
    pub regime: AsymptoticRegime,
    pub oracle: ThresholdResult,
    /// `1/ln(m)`
    pub alpha_log: f64,
}

impl CellSpec {
    pub fn context(&self) -> Result<CellContext> {
        let cell_err = |reason: String| Error::Cell { cell: self.to_string(), reason };
        let model = TailModel::new(self.dist, self.gamma).map_err(|e| cell_err(e.to_string()))?;
        let problem = TestingProblem::on_manifold(&model, self.c, self.m, self.p, self.delta0, self.delta_a)
            .map_err(|e| cell_err(e.to_string()))?;
        let regime = AsymptoticRegime::new(&model, self.c, self.delta0 / self.delta_a)
            .map_err(|e| cell_err(e.to_string()))?;
        let oracle = oracle_threshold(&model, &problem);
        if oracle.status != ThresholdStatus::Interior {
            return Err(cell_err(format!(
                "oracle threshold is {} (v = {}, u = {}); the cell lies outside the asymptotic framework",
                oracle.status.name(),
                problem.v(),
                problem.u
            )));
        }
        Ok(CellContext { spec: *self, model, problem, regime, oracle, alpha_log: 1.0 / (self.m as f64).ln() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule {
    Fixed(ThresholdResult),
    Bh(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub label: String,
    pub alpha: Option<f64>,
    pub rule: Rule,
}

/// Sample mean and its standard error `sd/√n`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

impl MeanSe {
    pub fn from_samples(xs: impl ExactSizeIterator<Item = f64> + Clone) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self { mean: f64::NAN, se: f64::NAN };
        }
        let mean = xs.clone().sum::<f64>() / n as f64;
        if n == 1 {
            return Self { mean, se: 0.0 };
        }
        let ss: f64 = xs.map(|x| (x - mean) * (x - mean)).sum();
        let sd = (ss / (n - 1) as f64).sqrt();
        Self { mean, se: sd / (n as f64).sqrt() }
    }
}

/// Aggregated replicate results for one rule in one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcedureStats {
    pub label: String,
    pub alpha: Option<f64>,
    pub risk: MeanSe,
    pub mp: MeanSe,
    pub p1: MeanSe,
    pub p2: MeanSe,
    /// Closed-form Bayes risk, available for fixed rules.
    pub exact_risk: Option<f64>,
}

/// Per-replicate metrics: realized loss, MP, P1, P2.
type Metrics = [f64; 4];

/// Labelled mixture sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// `sᵢ = 1` for signals.
    pub truth: Vec<bool>,
    pub x: Vec<f64>,
}

impl Dataset {
    /// `|Xᵢ|/σ₀`
    pub fn statistics(&self, sigma0: f64) -> Vec<f64> {
        self.x.iter().map(|x| x.abs() / sigma0).collect()
    }
}

/// `m` draws from `p·D(x/σ₁) + (1−p)·D(x/σ₀)`; `p` may be 0 or 1.
pub fn generate_mixture<R: Rng + ?Sized>(
    model: &TailModel,
    m: usize,
    p: f64,
    sigma0: f64,
    sigma1: f64,
    rng: &mut R,
) -> Dataset {
    let sampler = model.sampler();
    let mut truth = Vec::with_capacity(m);
    let mut x = Vec::with_capacity(m);
    for _ in 0..m {
        let signal = rng.random::<f64>() < p;
        let scale = if signal { sigma1 } else { sigma0 };
        truth.push(signal);
        x.push(scale * sampler.sample(rng));
    }
    Dataset { truth, x }
}

pub fn generate_dataset<R: Rng + ?Sized>(model: &TailModel, problem: &TestingProblem, rng: &mut R) -> Dataset {
    generate_mixture(model, problem.m as usize, problem.p, problem.sigma0, problem.sigma1(), rng)
}

/// Substream for replicate `replicate` of cell `cell`.
pub fn replicate_rng(seed: u64, cell: u64, replicate: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&cell.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replicate);
    rng
}

fn metrics(v: usize, t: usize, nulls: usize, signals: usize, delta0: f64, delta_a: f64) -> Metrics {
    let m = (nulls + signals) as f64;
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    [
        delta0 * v as f64 + delta_a * t as f64,
        (v + t) as f64 / m,
        ratio(v, nulls),
        ratio(t, signals),
    ]
}

fn replicate_metrics(ctx: &CellContext, evaluations: &[Evaluation], data: &Dataset) -> Vec<Metrics> {
    let pb = &ctx.problem;
    let z = data.statistics(pb.sigma0);
    let signals = data.truth.iter().filter(|&&s| s).count();
    let nulls = data.truth.len() - signals;
    let ranked = evaluations
        .iter()
        .any(|e| matches!(e.rule, Rule::Bh(_)))
        .then(|| RankedPvalues::new(&pvalues(&ctx.model, &z), &data.truth).expect("equal lengths"));
    evaluations
        .iter()
        .map(|e| match e.rule {
            Rule::Fixed(rule) => {
                let (mut v, mut t) = (0usize, 0usize);
                for (&zi, &s) in z.iter().zip(&data.truth) {
                    match (rule.rejects(zi), s) {
                        (true, false) => v += 1,
                        (false, true) => t += 1,
                        _ => {}
                    }
                }
                metrics(v, t, nulls, signals, pb.delta0, pb.delta_a)
            }
            Rule::Bh(alpha) => {
                let s = ranked.as_ref().expect("ranked p-values").summary(alpha, pb.delta0, pb.delta_a);
                metrics(s.false_rejections, s.missed_signals, nulls, signals, pb.delta0, pb.delta_a)
            }
        })
        .collect()
}

/// Run `replicates` independent datasets through every evaluation.
pub fn run_cell(
    ctx: &CellContext,
    evaluations: &[Evaluation],
    replicates: usize,
    seed: u64,
    cell_index: u64,
) -> Vec<ProcedureStats> {
    let per_replicate: Vec<Vec<Metrics>> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, cell_index, r);
            let data = generate_dataset(&ctx.model, &ctx.problem, &mut rng);
            replicate_metrics(ctx, evaluations, &data)
        })
        .collect();
    evaluations
        .iter()
        .enumerate()
        .map(|(j, e)| {
            let col = |k: usize| MeanSe::from_samples(per_replicate.iter().map(move |row| row[j][k]));
            let exact_risk = match e.rule {
                Rule::Fixed(rule) => {
                    let probs = threshold_error_probs(&ctx.model, &ctx.problem, &rule);
                    Some(exact_fixed_risk(&ctx.problem, probs.t1, probs.t2))
                }
                Rule::Bh(_) => None,
            };
            ProcedureStats {
                label: e.label.clone(),
                alpha: e.alpha,
                risk: col(0),
                mp: col(1),
                p1: col(2),
                p2: col(3),
                exact_risk,
            }
        })
        .collect()
}

/// One aggregated output row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub dist: TailKind,
    pub gamma: f64,
    pub c: f64,
    pub m: u64,
    pub p: f64,
    pub alpha: Option<f64>,
    pub procedure: String,
    pub replicates: usize,
    pub risk: MeanSe,
    /// Mean loss of this rule over mean oracle loss (risk-ratio scenario).
    pub risk_ratio: f64,
    pub mp: MeanSe,
    pub p1: MeanSe,
    pub p2: MeanSe,
    pub alpha_inf: f64,
    pub alpha_log: f64,
    pub beta_star_inf: f64,
}

/// Records of the completed cells plus the cells that could not run.
#[derive(Debug, Default)]
pub struct ScenarioRun {
    pub records: Vec<ResultRecord>,
    pub failures: Vec<Error>,
}

fn record(ctx: &CellContext, stats: &ProcedureStats, alpha: Option<f64>, oracle_mean: f64, replicates: usize) -> ResultRecord {
    ResultRecord {
        dist: ctx.spec.dist,
        gamma: ctx.spec.gamma,
        c: ctx.spec.c,
        m: ctx.spec.m,
        p: ctx.spec.p,
        alpha,
        procedure: stats.label.clone(),
        replicates,
        risk: stats.risk,
        risk_ratio: stats.risk.mean / oracle_mean,
        mp: stats.mp,
        p1: stats.p1,
        p2: stats.p2,
        alpha_inf: ctx.regime.alpha_inf,
        alpha_log: ctx.alpha_log,
        beta_star_inf: ctx.regime.beta_star_inf,
    }
}

/// Rows of one cell: the oracle is evaluated once and reported against
/// every requested level.
fn cell_records(config: &ExperimentConfig, ctx: &CellContext, cell_index: u64) -> Result<Vec<ResultRecord>> {
    let oracle = ProcedureSpec::Oracle.resolve(ctx, None)?;
    let mut evaluations = vec![oracle];
    // (row alpha, procedure position) → evaluation index
    let mut layout: Vec<(Option<f64>, usize)> = Vec::new();
    let rows: Vec<Option<f64>> = match config.scenario {
        Scenario::RiskRatioVsAlpha => config.alpha_grid.iter().map(|&a| Some(a)).collect(),
        Scenario::ErrorRatesVsP => vec![None],
    };
    for &row_alpha in &rows {
        for &spec in &config.procedures {
            if spec == ProcedureSpec::Oracle {
                layout.push((row_alpha, 0));
            } else {
                evaluations.push(spec.resolve(ctx, row_alpha)?);
                layout.push((row_alpha, evaluations.len() - 1));
            }
        }
    }
    let stats = run_cell(ctx, &evaluations, config.replicates, config.seed, cell_index);
    let oracle_mean = stats[0].risk.mean;
    Ok(layout
        .into_iter()
        .map(|(row_alpha, j)| record(ctx, &stats[j], row_alpha.or(stats[j].alpha), oracle_mean, config.replicates))
        .collect())
}

/// Run every cell of `config`; failing cells are collected, not fatal.
pub fn run_scenario(config: &ExperimentConfig) -> Result<ScenarioRun> {
    config.validate()?;
    let cells = config.cells();
    let outcomes: Vec<Result<Vec<ResultRecord>>> = cells
        .par_iter()
        .enumerate()
        .map(|(i, cell)| {
            let ctx = cell.context()?;
            cell_records(config, &ctx, i as u64)
        })
        .collect();
    let mut run = ScenarioRun::default();
    for outcome in outcomes {
        match outcome {
            Ok(rows) => run.records.extend(rows),
            Err(e) => run.failures.push(e),
        }
    }
    Ok(run)
}

pub fn scenario_risk_ratio(config: &ExperimentConfig) -> Result<ScenarioRun> {
    if config.scenario != Scenario::RiskRatioVsAlpha {
        return Err(Error::Config("expected the risk-ratio scenario".into()));
    }
    run_scenario(config)
}

pub fn scenario_error_rates(config: &ExperimentConfig) -> Result<ScenarioRun> {
    if config.scenario != Scenario::ErrorRatesVsP {
        return Err(Error::Config("expected the error-rate scenario".into()));
    }
    run_scenario(config)
}

/// Run `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}

pub const SCENARIO1_HEADER: [&str; 16] = [
    "dist", "gamma", "C", "m", "p", "alpha", "procedure", "replicates", "risk_mean", "risk_se", "risk_ratio",
    "p2_mean", "p2_se", "alpha_inf", "alpha_log", "beta_star_inf",
];

pub const SCENARIO2_HEADER: [&str; 13] = [
    "dist", "gamma", "C", "m", "p", "procedure", "replicates", "mp_mean", "mp_se", "p1_mean", "p1_se", "p2_mean",
    "p2_se",
];

fn num(x: f64) -> String {
    format!("{x}")
}

pub fn write_scenario1_csv<W: Write>(out: W, records: &[ResultRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SCENARIO1_HEADER)?;
    for r in records {
        w.write_record([
            r.dist.name().to_string(),
            num(r.gamma),
            num(r.c),
            r.m.to_string(),
            num(r.p),
            r.alpha.map_or_else(String::new, num),
            r.procedure.clone(),
            r.replicates.to_string(),
            num(r.risk.mean),
            num(r.risk.se),
            num(r.risk_ratio),
            num(r.p2.mean),
            num(r.p2.se),
            num(r.alpha_inf),
            num(r.alpha_log),
            num(r.beta_star_inf),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_scenario2_csv<W: Write>(out: W, records: &[ResultRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SCENARIO2_HEADER)?;
    for r in records {
        w.write_record([
            r.dist.name().to_string(),
            num(r.gamma),
            num(r.c),
            r.m.to_string(),
            num(r.p),
            r.procedure.clone(),
            r.replicates.to_string(),
            num(r.mp.mean),
            num(r.mp.se),
            num(r.p1.mean),
            num(r.p1.se),
            num(r.p2.mean),
            num(r.p2.se),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Monte Carlo estimate of `P(|ω̂/ω_opt − 1| > ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcentrationEstimate {
    pub probability: f64,
    pub standard_error: f64,
    pub exceedances: usize,
    pub replicates: usize,
    /// `1/v`, the rate the probability should beat.
    pub inverse_v: f64,
}

/// Concentration of a data-driven threshold around the oracle. An infinite
/// `ω̂` counts as an exceedance.
pub fn concentration_diagnostic<F>(
    model: &TailModel,
    problem: &TestingProblem,
    estimator: F,
    epsilon: f64,
    replicates: usize,
    seed: u64,
) -> Result<ConcentrationEstimate>
where
    F: Fn(&[f64]) -> ThresholdResult + Sync,
{
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let oracle = oracle_threshold(model, problem);
    let omega_opt = match (oracle.status, oracle.omega()) {
        (ThresholdStatus::Interior, Some(w)) => w,
        _ => return Err(Error::Domain(format!("oracle threshold is {}", oracle.status.name()))),
    };
    let hits: Vec<bool> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, u64::MAX, r);
            let data = generate_dataset(model, problem, &mut rng);
            let z = data.statistics(problem.sigma0);
            match estimator(&z).omega() {
                None => true,
                Some(w) => (w / omega_opt - 1.0).abs() > epsilon,
            }
        })
        .collect();
    let exceedances = hits.iter().filter(|&&h| h).count();
    let n = replicates.max(1) as f64;
    let probability = exceedances as f64 / n;
    Ok(ConcentrationEstimate {
        probability,
        standard_error: (probability * (1.0 - probability) / n).sqrt(),
        exceedances,
        replicates,
        inverse_v: 1.0 / problem.v(),
    })
}

/// BH at `alpha` as a threshold estimator on `|X|/σ₀`.
pub fn bh_estimator(model: TailModel, alpha: f64) -> impl Fn(&[f64]) -> ThresholdResult + Sync {
    move |z: &[f64]| {
        let outcome = bh_decide(&pvalues(&model, z), alpha);
        bh_threshold(z, &outcome)
    }
}

/// Count-based calibration of `C₀` from a bulk window `(a₁, a₂)` and a tail
/// cut `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C0Estimate {
    pub c0_hat: f64,
    /// `None` when `Ĉ₀ ≥ 1` lies outside the range of `C ↦ C₀`.
    pub c_hat: Option<f64>,
    /// `#{a₁ < |Xᵢ| < a₂}`
    pub m0: usize,
    /// `#{|Xᵢ| > b}`
    pub m1: usize,
}

/// `Ĉ₀ = (δ∞·m₀/m₁)·[(b/a₁)^γ − (b/a₂)^γ]^(−1)` and `Ĉ` solving `C₀(Ĉ) = Ĉ₀`.
pub fn estimate_c0(
    model: &TailModel,
    observations: &[f64],
    delta_inf: f64,
    a1: f64,
    a2: f64,
    b: f64,
) -> Result<C0Estimate> {
    if !(a1 > 0.0 && a1 < a2 && a2 < b) {
        return Err(Error::Degenerate(format!("need 0 < a1 < a2 < b, got a1={a1}, a2={a2}, b={b}")));
    }
    let m1 = observations.iter().filter(|x| x.abs() > b).count();
    let m0 = observations.iter().filter(|x| x.abs() > a1 && x.abs() < a2).count();
    if m1 == 0 {
        return Err(Error::Degenerate(format!("no observation exceeds b = {b}")));
    }
    let g = model.gamma();
    let window = (b / a1).powf(g) - (b / a2).powf(g);
    let c0_hat = delta_inf * m0 as f64 / m1 as f64 / window;
    let c_hat = c_from_c0(model, c0_hat).ok();
    Ok(C0Estimate { c0_hat, c_hat, m0, m1 })
}
