//! Command-line front end: argument parsing, config files, output files and
//! the run manifest. The `abos` binary is a thin wrapper around [`run`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::distributions::{TailKind, TailModel};
use crate::error::{Error, Result};
use crate::regime::{c_b, u_from_difficulty, AsymptoticRegime, TestingProblem};
use crate::simlab::{
    estimate_c0, run_scenario, with_workers, write_scenario1_csv,
    write_scenario2_csv, ExperimentConfig, ProcedureSpec, Scenario,
};
use crate::thresholds::{bfdr_threshold, gw_threshold, oracle_threshold, ThresholdResult};

/// Environment variable fixing the number of simulation workers.
pub const THREADS_ENV: &str = "ABOS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "abos", version, about = "Sparse multiple testing under polynomial-tailed scale mixtures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the limiting constants for a model and difficulty index.
    Constants(ConstantsArgs),
    /// Solve for the oracle, BFDR or GW threshold.
    Threshold(ThresholdArgs),
    /// Run the simulation scenarios and write CSVs plus a manifest.
    Simulate(SimulateArgs),
    /// Estimate C₀ (and C) from a file of observations.
    EstimateC0(EstimateArgs),
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, default_value = "student-t")]
    pub dist: TailKind,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long = "C")]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub delta_inf: f64,
    /// Also write the table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleKind {
    Oracle,
    Bfdr,
    Gw,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, value_enum, default_value = "oracle")]
    pub rule: RuleKind,
    #[arg(long, default_value = "student-t")]
    pub dist: TailKind,
    #[arg(long)]
    pub gamma: f64,
    /// Signal variance inflation; `σ₁² = (1+u)σ₀²`.
    #[arg(long, conflicts_with = "c")]
    pub u: Option<f64>,
    /// Derive `u` from the difficulty index instead.
    #[arg(long = "C")]
    pub c: Option<f64>,
    /// Posterior odds cut `v = δ(1−p)/p`.
    #[arg(long)]
    pub v: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// `δ₀/δ_A`; ignored when both `--v` and `--p` are given.
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 10_000)]
    pub m: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioChoice {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    All,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// TOML file with `[scenario1]` and/or `[scenario2]` sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Restrict to one scenario. Defaults to every section in the config, or
    /// both desk presets without a config.
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioChoice>,
    #[arg(long, default_value = "abos-out")]
    pub out_dir: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub dist: Option<Vec<TailKind>>,
    #[arg(long, value_delimiter = ',')]
    pub gamma: Option<Vec<f64>>,
    #[arg(long = "C", value_delimiter = ',')]
    pub c: Option<Vec<f64>>,
    #[arg(long)]
    pub m: Option<u64>,
    /// Sparsity grid (scenario 2).
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Level grid (scenario 1).
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub procedures: Option<Vec<ProcedureSpec>>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Whitespace- or comma-separated observations.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "student-t")]
    pub dist: TailKind,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub delta_inf: f64,
    #[arg(long)]
    pub a1: f64,
    #[arg(long)]
    pub a2: f64,
    #[arg(long)]
    pub b: f64,
}

/// One scenario section of a config file. Missing keys take desk defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<TailKind>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,
    #[serde(default, rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    /// Accepts `1e6` as well as `1000000`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub procedures: Option<Vec<ProcedureSpec>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario1: Option<SectionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario2: Option<SectionFile>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Resolved experiments in scenario order.
    pub fn experiments(&self) -> Result<Vec<ExperimentConfig>> {
        let mut out = Vec::new();
        for (scenario, section) in
            [(Scenario::RiskRatioVsAlpha, &self.scenario1), (Scenario::ErrorRatesVsP, &self.scenario2)]
        {
            if let Some(section) = section {
                out.push(section.resolve(scenario, self.seed)?);
            }
        }
        Ok(out)
    }
}

impl SectionFile {
    pub fn resolve(&self, scenario: Scenario, file_seed: Option<u64>) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::desk(scenario);
        if let Some(v) = &self.dist {
            cfg.dists = v.clone();
        }
        if let Some(v) = &self.gamma {
            cfg.gammas = v.clone();
        }
        if let Some(v) = &self.c {
            cfg.c_grid = v.clone();
        }
        if let Some(m) = self.m {
            if !(m >= 1.0 && m.fract() == 0.0 && m <= u64::MAX as f64) {
                return Err(Error::Config(format!("m must be a positive integer, got {m}")));
            }
            cfg.m = m as u64;
        }
        if let Some(r) = self.replicates {
            cfg.replicates = r;
        }
        if let Some(s) = self.seed.or(file_seed) {
            cfg.seed = s;
        }
        if let Some(v) = &self.alpha {
            cfg.alpha_grid = v.clone();
        }
        if let Some(v) = &self.p {
            cfg.p_grid = v.clone();
        }
        if let Some(d) = self.delta0 {
            cfg.delta0 = d;
        }
        if let Some(d) = self.delta_a {
            cfg.delta_a = d;
        }
        if let Some(v) = &self.procedures {
            cfg.procedures = v.clone();
        }
        Ok(cfg)
    }

    /// Full section for an already resolved experiment.
    pub fn from_experiment(cfg: &ExperimentConfig) -> Self {
        Self {
            dist: Some(cfg.dists.clone()),
            gamma: Some(cfg.gammas.clone()),
            c: Some(cfg.c_grid.clone()),
            m: Some(cfg.m as f64),
            replicates: Some(cfg.replicates),
            seed: Some(cfg.seed),
            alpha: (cfg.scenario == Scenario::RiskRatioVsAlpha).then(|| cfg.alpha_grid.clone()),
            p: (cfg.scenario == Scenario::ErrorRatesVsP).then(|| cfg.p_grid.clone()),
            delta0: Some(cfg.delta0),
            delta_a: Some(cfg.delta_a),
            procedures: Some(cfg.procedures.clone()),
        }
    }
}

/// Written next to the CSVs as `manifest.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub seed: Option<u64>,
    pub workers: usize,
    pub experiments: Vec<ExperimentConfig>,
    /// The same experiments as a config file; `simulate --config` on it
    /// reproduces the CSVs.
    pub resolved_config: String,
    pub duration_seconds: f64,
    pub outputs: Vec<PathBuf>,
    pub failed_cells: Vec<String>,
}

/// Worker count from [`THREADS_ENV`], else the available parallelism.
pub fn worker_count() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// `%.12g`-style rendering.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = trim(format!("{x:.decimals$}"));
        // rounding can carry into a new digit, e.g. 9.99999999999951
        if s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() <= 12 {
            return s;
        }
    }
    let s = format!("{x:.11e}");
    let (mantissa, e) = s.split_once('e').expect("exponent");
    format!("{}e{e}", trim(mantissa.to_string()))
}

/// Run a parsed command. `Ok(false)` means the command finished but some
/// simulation cells failed.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match cli.command {
        Command::Constants(a) => cmd_constants(&a, out).map(|_| true),
        Command::Threshold(a) => cmd_threshold(&a, out).map(|_| true),
        Command::Simulate(a) => cmd_simulate(&a, out, err),
        Command::EstimateC0(a) => cmd_estimate_c0(&a, out).map(|_| true),
    }
}

pub fn cmd_constants(args: &ConstantsArgs, out: &mut dyn Write) -> Result<()> {
    let model = TailModel::new(args.dist, args.gamma)?;
    let regime = AsymptoticRegime::new(&model, args.c, args.delta_inf)?;
    let rows = [
        ("dist", args.dist.name().to_string()),
        ("gamma", sig12(args.gamma)),
        ("C", sig12(args.c)),
        ("delta_inf", sig12(args.delta_inf)),
        ("C_d", sig12(model.c_d())),
        ("C0", sig12(regime.c0)),
        ("C1", sig12(regime.c1)),
        ("C2", sig12(regime.c2)),
        ("C_B", sig12(c_b(&model, args.c)?)),
        ("alpha_inf", sig12(regime.alpha_inf)),
        ("beta_star_inf", sig12(regime.beta_star_inf)),
    ];
    for (name, value) in &rows {
        writeln!(out, "{name:<14} {value}")?;
    }
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(rows.iter().map(|(n, _)| *n))?;
        w.write_record(rows.iter().map(|(_, v)| v.as_str()))?;
        w.flush()?;
    }
    Ok(())
}

fn threshold_problem(args: &ThresholdArgs, model: &TailModel) -> Result<TestingProblem> {
    let (p, delta) = match (args.v, args.p) {
        (Some(v), Some(p)) => {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Config(format!("--p must lie in (0, 1), got {p}")));
            }
            (p, v * p / (1.0 - p))
        }
        (Some(v), None) => {
            if !(v > 0.0) {
                return Err(Error::Config(format!("--v must be positive, got {v}")));
            }
            (args.delta / (args.delta + v), args.delta)
        }
        (None, Some(p)) => (p, args.delta),
        (None, None) => return Err(Error::Config("one of --v or --p is required".into())),
    };
    let v = delta * (1.0 - p) / p;
    let u = match (args.u, args.c) {
        (Some(u), _) => u,
        (None, Some(c)) => u_from_difficulty(model, c, v)?,
        (None, None) => return Err(Error::Config("one of --u or --C is required".into())),
    };
    TestingProblem::new(args.m, p, 1.0, u, delta, 1.0)
}

pub fn cmd_threshold(args: &ThresholdArgs, out: &mut dyn Write) -> Result<ThresholdResult> {
    let model = TailModel::new(args.dist, args.gamma)?;
    let problem = threshold_problem(args, &model)?;
    let alpha = || {
        let name = args.rule.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
        args.alpha.ok_or_else(|| Error::Config(format!("--rule {name} requires --alpha")))
    };
    let result = match args.rule {
        RuleKind::Oracle => oracle_threshold(&model, &problem),
        RuleKind::Bfdr => bfdr_threshold(&model, &problem, alpha()?),
        RuleKind::Gw => gw_threshold(&model, &problem, alpha()?),
    };
    let omega = result.omega().unwrap_or(f64::INFINITY);
    writeln!(out, "status         {}", result.status.name())?;
    writeln!(out, "omega          {}", sig12(omega))?;
    writeln!(out, "omega_squared  {}", sig12(omega * omega))?;
    writeln!(out, "residual       {}", sig12(result.residual))?;
    writeln!(out, "u              {}", sig12(problem.u))?;
    writeln!(out, "v              {}", sig12(problem.v()))?;
    writeln!(out, "p              {}", sig12(problem.p))?;
    Ok(result)
}

fn apply_overrides(cfg: &mut ExperimentConfig, args: &SimulateArgs) {
    if let Some(v) = &args.dist {
        cfg.dists = v.clone();
    }
    if let Some(v) = &args.gamma {
        cfg.gammas = v.clone();
    }
    if let Some(v) = &args.c {
        cfg.c_grid = v.clone();
    }
    if let Some(m) = args.m {
        cfg.m = m;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(r) = args.replicates {
        cfg.replicates = r;
    }
    match cfg.scenario {
        Scenario::RiskRatioVsAlpha => {
            if let Some(v) = &args.alpha {
                cfg.alpha_grid = v.clone();
            }
        }
        Scenario::ErrorRatesVsP => {
            if let Some(v) = &args.p {
                cfg.p_grid = v.clone();
            }
        }
    }
    if let Some(v) = &args.procedures {
        cfg.procedures = v.clone();
    }
}

/// Experiments a `simulate` invocation would run, after config and flags.
pub fn resolve_experiments(args: &SimulateArgs) -> Result<Vec<ExperimentConfig>> {
    let mut experiments = match &args.config {
        Some(path) => ConfigFile::load(path)?.experiments()?,
        None => vec![
            ExperimentConfig::desk(Scenario::RiskRatioVsAlpha),
            ExperimentConfig::desk(Scenario::ErrorRatesVsP),
        ],
    };
    if let Some(choice) = args.scenario {
        experiments.retain(|e| match choice {
            ScenarioChoice::One => e.scenario == Scenario::RiskRatioVsAlpha,
            ScenarioChoice::Two => e.scenario == Scenario::ErrorRatesVsP,
            ScenarioChoice::All => true,
        });
    }
    if experiments.is_empty() {
        return Err(Error::Config("no scenario selected".into()));
    }
    for cfg in &mut experiments {
        apply_overrides(cfg, args);
        cfg.validate()?;
    }
    Ok(experiments)
}

fn resolved_config_text(experiments: &[ExperimentConfig]) -> Result<String> {
    let mut file = ConfigFile::default();
    for cfg in experiments {
        let section = Some(SectionFile::from_experiment(cfg));
        match cfg.scenario {
            Scenario::RiskRatioVsAlpha => file.scenario1 = section,
            Scenario::ErrorRatesVsP => file.scenario2 = section,
        }
    }
    toml::to_string(&file).map_err(|e| Error::Config(e.to_string()))
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let started = Instant::now();
    let experiments = resolve_experiments(args)?;
    let workers = worker_count()?;
    fs::create_dir_all(&args.out_dir)?;
    let mut outputs = Vec::new();
    let mut failed_cells = Vec::new();
    for cfg in &experiments {
        let run = with_workers(workers, || run_scenario(cfg))??;
        let (name, path) = match cfg.scenario {
            Scenario::RiskRatioVsAlpha => ("scenario1", args.out_dir.join("scenario1.csv")),
            Scenario::ErrorRatesVsP => ("scenario2", args.out_dir.join("scenario2.csv")),
        };
        let mut buf = Vec::new();
        match cfg.scenario {
            Scenario::RiskRatioVsAlpha => write_scenario1_csv(&mut buf, &run.records)?,
            Scenario::ErrorRatesVsP => write_scenario2_csv(&mut buf, &run.records)?,
        }
        fs::write(&path, buf)?;
        writeln!(out, "{name}: {} rows -> {}", run.records.len(), path.display())?;
        for failure in run.failures {
            writeln!(err, "{name}: {failure}")?;
            failed_cells.push(format!("{name}: {failure}"));
        }
        outputs.push(path);
    }
    let resolved_config = resolved_config_text(&experiments)?;
    let resolved_path = args.out_dir.join("resolved.cfg");
    fs::write(&resolved_path, &resolved_config)?;
    outputs.push(resolved_path);
    let manifest_path = args.out_dir.join("manifest.json");
    outputs.push(manifest_path.clone());
    let seeds: Vec<u64> = experiments.iter().map(|e| e.seed).collect();
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: seeds.first().copied().filter(|s| seeds.iter().all(|t| t == s)),
        workers,
        experiments,
        resolved_config,
        duration_seconds: started.elapsed().as_secs_f64(),
        outputs,
        failed_cells,
    };
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest.failed_cells.is_empty())
}

/// Numbers separated by whitespace or commas; `#` starts a comment.
pub fn parse_observations(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|tok| !tok.is_empty())
        .map(|tok| tok.parse::<f64>().map_err(|_| Error::Config(format!("not a number: `{tok}`"))))
        .collect()
}

pub fn cmd_estimate_c0(args: &EstimateArgs, out: &mut dyn Write) -> Result<()> {
    let model = TailModel::new(args.dist, args.gamma)?;
    let obs = parse_observations(&fs::read_to_string(&args.input)?)?;
    let est = estimate_c0(&model, &obs, args.delta_inf, args.a1, args.a2, args.b)?;
    writeln!(out, "n       {}", obs.len())?;
    writeln!(out, "m0      {}", est.m0)?;
    writeln!(out, "m1      {}", est.m1)?;
    writeln!(out, "C0_hat  {}", sig12(est.c0_hat))?;
    match est.c_hat {
        Some(c) => writeln!(out, "C_hat   {}", sig12(c))?,
        None => writeln!(out, "C_hat   none (C0_hat >= 1 is outside the range of C0)")?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_formatting() {
        assert_eq!(sig12(0.0625), "0.0625");
        assert_eq!(sig12(98.0), "98");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(2.0f64.powi(50)), "1.12589990684e15");
        assert_eq!(sig12(1e-9), "1e-9");
        assert_eq!(sig12(9.999999999999951), "10");
        assert_eq!(sig12(f64::INFINITY), "inf");
    }

    #[test]
    fn config_sections_resolve() {
        let text = r#"
            seed = 7
            [scenario1]
            gamma = [3]
            C = [1]
            m = 1e3
            alpha = [0.1, 0.2]
            procedures = ["oracle", "bh", "gw"]
            [scenario2]
            p = [0.01]
            seed = 9
            procedures = ["oracle", "bh_custom(0.1)"]
        "#;
        let file = ConfigFile::parse(text).unwrap();
        let exps = file.experiments().unwrap();
        assert_eq!(exps.len(), 2);
        assert_eq!(exps[0].seed, 7);
        assert_eq!(exps[0].m, 1000);
        assert_eq!(exps[0].alpha_grid, vec![0.1, 0.2]);
        assert_eq!(exps[1].seed, 9);
        assert_eq!(exps[1].procedures[1], ProcedureSpec::BhCustom(0.1));
        let again = ConfigFile::parse(&resolved_config_text(&exps).unwrap()).unwrap().experiments().unwrap();
        assert_eq!(again, exps);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(ConfigFile::parse("[scenario1]\nkappa = 0.5\n").is_err());
        assert!(ConfigFile::parse("[scenario1]\nm = 10.5\n").unwrap().experiments().is_err());
    }

    #[test]
    fn observations_parse() {
        assert_eq!(parse_observations("1, 2\n# skip\n3 -4.5 # tail\n").unwrap(), vec![1.0, 2.0, 3.0, -4.5]);
        assert!(parse_observations("1 x").is_err());
    }
}
