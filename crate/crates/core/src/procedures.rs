//! Decision rules, error counting and exact fixed-threshold risks.

use serde::{Deserialize, Serialize};

use crate::distributions::TailModel;
use crate::error::{Error, Result};
use crate::regime::TestingProblem;
use crate::thresholds::ThresholdResult;

/// Outcome counts of one multiple testing run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DecisionSummary {
    /// `R`
    pub rejections: usize,
    /// `V`, nulls rejected.
    pub false_rejections: usize,
    /// `T`, signals kept.
    pub missed_signals: usize,
    /// `δ₀·V + δ_A·T`
    pub realized_loss: f64,
    /// BH step-up index; 0 for fixed rules.
    pub k_hat: usize,
}

/// p-values `s·(1 − D(zᵢ))` with `s = 2` for even densities, 1 on the half-line.
pub fn pvalues(model: &TailModel, z: &[f64]) -> Vec<f64> {
    let s = model.sides().factor();
    z.iter().map(|&zi| s * model.survival(zi)).collect()
}

/// Reject iff `zᵢ ≥ ω`.
pub fn decide_fixed(z: &[f64], omega: &ThresholdResult) -> Vec<bool> {
    z.iter().map(|&zi| omega.rejects(zi)).collect()
}

/// Result of the Benjamini–Hochberg step-up.
#[derive(Debug, Clone, PartialEq)]
pub struct BhOutcome {
    pub decisions: Vec<bool>,
    /// `k̂ = max{k : p₍ₖ₎ ≤ αk/m}`, 0 when no such `k`.
    pub k_hat: usize,
    /// `p₍k̂₎`, the largest rejected p-value.
    pub p_cutoff: Option<f64>,
}

/// Benjamini–Hochberg step-up at level `alpha`: rejects every test with
/// `pᵢ ≤ p₍k̂₎`.
pub fn bh_decide(pvals: &[f64], alpha: f64) -> BhOutcome {
    let m = pvals.len();
    let mut sorted: Vec<f64> = pvals.to_vec();
    sorted.sort_by(f64::total_cmp);
    let k_hat = step_up_index(&sorted, alpha, m);
    let p_cutoff = (k_hat > 0).then(|| sorted[k_hat - 1]);
    let decisions = match p_cutoff {
        Some(cut) => pvals.iter().map(|&p| p <= cut).collect(),
        None => vec![false; m],
    };
    BhOutcome { decisions, k_hat, p_cutoff }
}

/// Largest `k` with `sorted[k−1] ≤ α·k/m`.
fn step_up_index(sorted: &[f64], alpha: f64, m: usize) -> usize {
    let mf = m as f64;
    (1..=sorted.len())
        .rev()
        .find(|&k| sorted[k - 1] <= alpha * k as f64 / mf)
        .unwrap_or(0)
}

/// The statistic-scale threshold equivalent to a BH outcome: the smallest
/// rejected `zᵢ`. Thresholding `z` there reproduces the step-up decisions
/// whenever p-values are monotone in `z`. Infinite when nothing is rejected.
pub fn bh_threshold(z: &[f64], outcome: &BhOutcome) -> ThresholdResult {
    z.iter()
        .zip(&outcome.decisions)
        .filter(|(_, &d)| d)
        .map(|(&zi, _)| zi)
        .min_by(f64::total_cmp)
        .map_or_else(ThresholdResult::reject_none, |w| ThresholdResult::interior(w, 0.0))
}

/// Type I and type II error probabilities of a fixed rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorProbs {
    pub t1: f64,
    pub t2: f64,
}

/// `t₁ = s(1 − D(ω))`, `t₂ = 1 − s(1 − D(ω/√θ))` for a finite `ω ≥ 0`.
pub fn exact_error_probs(model: &TailModel, problem: &TestingProblem, omega: f64) -> ErrorProbs {
    let s = model.sides().factor();
    let t1 = s * model.survival(omega);
    let t2 = 1.0 - s * model.survival(omega / problem.theta().sqrt());
    ErrorProbs { t1, t2 }
}

/// Error probabilities of any fixed rule, including the degenerate ones.
pub fn threshold_error_probs(model: &TailModel, problem: &TestingProblem, rule: &ThresholdResult) -> ErrorProbs {
    match rule.omega() {
        Some(w) => exact_error_probs(model, problem, w),
        None => ErrorProbs { t1: 0.0, t2: 1.0 },
    }
}

/// `R = m·p·δ_A·(v·t₁ + t₂)`.
pub fn exact_fixed_risk(problem: &TestingProblem, t1: f64, t2: f64) -> f64 {
    problem.m as f64 * problem.p * problem.delta_a * (problem.v() * t1 + t2)
}

pub fn error_counts(decisions: &[bool], truth: &[bool], delta0: f64, delta_a: f64) -> Result<DecisionSummary> {
    if decisions.len() != truth.len() {
        return Err(Error::LengthMismatch { left: decisions.len(), right: truth.len() });
    }
    let mut summary = DecisionSummary::default();
    for (&d, &s) in decisions.iter().zip(truth) {
        match (d, s) {
            (true, false) => {
                summary.rejections += 1;
                summary.false_rejections += 1;
            }
            (true, true) => summary.rejections += 1,
            (false, true) => summary.missed_signals += 1,
            (false, false) => {}
        }
    }
    summary.realized_loss =
        delta0 * summary.false_rejections as f64 + delta_a * summary.missed_signals as f64;
    Ok(summary)
}

/// p-values sorted once, with running null counts, so that BH can be applied
/// at many levels to the same data in `O(m)` each.
#[derive(Debug, Clone)]
pub struct RankedPvalues {
    sorted: Vec<f64>,
    /// Index into the caller's arrays, in sorted order.
    order: Vec<u32>,
    /// `nulls_upto[k]` = nulls among the `k` smallest p-values.
    nulls_upto: Vec<u32>,
    signals: usize,
}

impl RankedPvalues {
    pub fn new(pvals: &[f64], truth: &[bool]) -> Result<Self> {
        if pvals.len() != truth.len() {
            return Err(Error::LengthMismatch { left: pvals.len(), right: truth.len() });
        }
        let mut order: Vec<u32> = (0..pvals.len() as u32).collect();
        order.sort_by(|&a, &b| pvals[a as usize].total_cmp(&pvals[b as usize]));
        let sorted: Vec<f64> = order.iter().map(|&i| pvals[i as usize]).collect();
        let mut nulls_upto = Vec::with_capacity(pvals.len() + 1);
        nulls_upto.push(0);
        let mut nulls = 0u32;
        for &i in &order {
            if !truth[i as usize] {
                nulls += 1;
            }
            nulls_upto.push(nulls);
        }
        let signals = truth.iter().filter(|&&s| s).count();
        Ok(Self { sorted, order, nulls_upto, signals })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn k_hat(&self, alpha: f64) -> usize {
        step_up_index(&self.sorted, alpha, self.sorted.len())
    }

    /// Counts for BH at `alpha`. A tie at `p₍k̂₎` cannot extend past `k̂`
    /// (it would itself satisfy the step-up bound), so the rejections are
    /// exactly the `k̂` smallest.
    pub fn summary(&self, alpha: f64, delta0: f64, delta_a: f64) -> DecisionSummary {
        let k = self.k_hat(alpha);
        let v = self.nulls_upto[k] as usize;
        let t = self.signals - (k - v);
        DecisionSummary {
            rejections: k,
            false_rejections: v,
            missed_signals: t,
            realized_loss: delta0 * v as f64 + delta_a * t as f64,
            k_hat: k,
        }
    }

    /// Smallest rejected statistic among the `k` smallest p-values.
    pub fn threshold(&self, z: &[f64], k: usize) -> ThresholdResult {
        self.order[..k]
            .iter()
            .map(|&i| z[i as usize])
            .min_by(f64::total_cmp)
            .map_or_else(ThresholdResult::reject_none, |w| ThresholdResult::interior(w, 0.0))
    }
}
