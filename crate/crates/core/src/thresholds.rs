//! Fixed thresholds on the `|X|/σ₀` scale.
//!
//! All defining equations are solved in log form by bracketed bisection; the
//! left-hand sides are strictly monotone by the MLR property, so each has at
//! most one root. Thresholds that escape to 0 or ∞ are reported through
//! [`ThresholdStatus`] rather than a numeric sentinel.

use serde::{Deserialize, Serialize};

use crate::distributions::TailModel;
use crate::error::{domain, Result};
use crate::regime::{AsymptoticRegime, TestingProblem};
use crate::roots::{bisect_increasing, expand_upper};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdStatus {
    Interior,
    /// `ω = 0`: every hypothesis is rejected.
    RejectAll,
    /// `ω = ∞`: nothing is rejected.
    RejectNone,
}

impl ThresholdStatus {
    pub fn name(self) -> &'static str {
        match self {
            ThresholdStatus::Interior => "Interior",
            ThresholdStatus::RejectAll => "RejectAll",
            ThresholdStatus::RejectNone => "RejectNone",
        }
    }
}

/// A rule rejecting `H₀ᵢ` iff `|Xᵢ|/σ₀ ≥ ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    omega: f64,
    /// Relative residual `|LHS/RHS − 1|` of the defining equation at `ω`.
    pub residual: f64,
    pub status: ThresholdStatus,
}

impl ThresholdResult {
    pub fn interior(omega: f64, residual: f64) -> Self {
        if omega == 0.0 {
            return Self::reject_all();
        }
        Self { omega, residual, status: ThresholdStatus::Interior }
    }

    pub fn reject_all() -> Self {
        Self { omega: 0.0, residual: 0.0, status: ThresholdStatus::RejectAll }
    }

    pub fn reject_none() -> Self {
        Self { omega: 0.0, residual: 0.0, status: ThresholdStatus::RejectNone }
    }

    /// `None` for an infinite threshold.
    pub fn omega(&self) -> Option<f64> {
        match self.status {
            ThresholdStatus::RejectNone => None,
            _ => Some(self.omega),
        }
    }

    pub fn omega_squared(&self) -> Option<f64> {
        self.omega().map(|w| w * w)
    }

    pub fn rejects(&self, z: f64) -> bool {
        match self.status {
            ThresholdStatus::RejectAll => true,
            ThresholdStatus::RejectNone => false,
            ThresholdStatus::Interior => z >= self.omega,
        }
    }
}

/// Solve `ln lhs(ω) = 0` for strictly increasing `ln_lhs` on `ω ≥ 0`, with
/// `ln_lhs(0) < 0` already established.
fn solve_increasing<F>(ln_lhs: F) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let (lo, hi) = expand_upper(0.0, 1.0, &ln_lhs)?;
    Some(bisect_increasing(lo, hi, &ln_lhs))
}

/// Bayes oracle threshold: root of `θ^(−1/2)·d(ω θ^(−1/2))/d(ω) = v`, `θ = 1+u`.
pub fn oracle_threshold(model: &TailModel, problem: &TestingProblem) -> ThresholdResult {
    let theta = problem.theta();
    let ln_v = problem.v().ln();
    if ln_v >= 0.5 * model.gamma() * theta.ln() {
        return ThresholdResult::reject_none();
    }
    if ln_v <= model.ln_likelihood_ratio_floor(theta) {
        return ThresholdResult::reject_all();
    }
    let f = |w: f64| model.ln_scale_likelihood_ratio(w, theta) - ln_v;
    match solve_increasing(f) {
        Some(w) => ThresholdResult::interior(w, f(w).exp_m1().abs()),
        None => ThresholdResult::reject_none(),
    }
}

/// Closed-form oracle `ω²` for Student's t:
/// `ω² = γ(A−1)/(1 − A/θ)` with `A = (v√θ)^(2/(γ+1))`.
pub fn oracle_threshold_t_closed_form(gamma: f64, theta: f64, v: f64) -> Result<f64> {
    if !(gamma > 0.0 && theta > 1.0 && v > 0.0) {
        return domain(format!("need γ > 0, θ > 1, v > 0; got γ={gamma}, θ={theta}, v={v}"));
    }
    if !(v > theta.powf(-0.5) && v < theta.powf(0.5 * gamma)) {
        return domain(format!("v = {v} outside (θ^(-1/2), θ^(γ/2)) for θ = {theta}"));
    }
    let a = ((v.ln() + 0.5 * theta.ln()) * 2.0 / (gamma + 1.0)).exp();
    Ok(gamma * (a - 1.0) / (1.0 - a / theta))
}

/// `C·(v/C₀)^(2/γ)`, the large-`m` approximation of the oracle `ω²`.
pub fn oracle_threshold_asymptotic(regime: &AsymptoticRegime, v: f64, gamma: f64) -> f64 {
    regime.c * (v / regime.c0).powf(2.0 / gamma)
}

/// `ln[(1 − D(ω)) / (1 − D(ω/√θ))]`, decreasing from 0 to `−(γ/2) ln θ`.
fn ln_survival_ratio(model: &TailModel, omega: f64, theta: f64) -> f64 {
    if omega == 0.0 {
        return 0.0;
    }
    model.ln_survival(omega) - model.ln_survival(omega / theta.sqrt())
}

/// Fixed threshold with Bayesian FDR exactly `alpha`:
/// `(1 − D(ω)) / (1 − D(ω/√θ)) = r_α/f`, `r_α = α/(1−α)`.
///
/// Attainable levels form `(β*, 1−p]`; below `β*` the threshold is infinite,
/// at or above `1−p` it is zero.
pub fn bfdr_threshold(model: &TailModel, problem: &TestingProblem, alpha: f64) -> ThresholdResult {
    if alpha >= 1.0 - problem.p {
        return ThresholdResult::reject_all();
    }
    if !(alpha > crate::regime::bfdr_floor(model, problem)) {
        return ThresholdResult::reject_none();
    }
    let theta = problem.theta();
    let ln_target = (alpha / (1.0 - alpha)).ln() - problem.f().ln();
    let f = |w: f64| ln_target - ln_survival_ratio(model, w, theta);
    match solve_increasing(f) {
        Some(w) => ThresholdResult::interior(w, f(w).exp_m1().abs()),
        None => ThresholdResult::reject_none(),
    }
}

/// `C_B·(f/r_α)^(2/γ)`, the large-`m` approximation of the BFDR `ω²`.
pub fn bfdr_threshold_asymptotic(model: &TailModel, regime: &AsymptoticRegime, f: f64, alpha: f64) -> f64 {
    let r = alpha / (1.0 - alpha);
    regime.c_b * (f / r).powf(2.0 / model.gamma())
}

/// `ln` of the Genovese–Wasserman left-hand side
/// `(1 − D(ω)) / [(1−p)(1 − D(ω)) + p(1 − D(ω/√θ))]`.
fn ln_gw_lhs(model: &TailModel, problem: &TestingProblem, omega: f64) -> f64 {
    let ln_r = ln_survival_ratio(model, omega, problem.theta());
    let p = problem.p;
    // ratio R/((1−p)R + p) = 1/((1−p) + p/R)
    -((1.0 - p) + p * (-ln_r).exp()).ln()
}

/// Genovese–Wasserman fixed approximation of BH at level `alpha`.
pub fn gw_threshold(model: &TailModel, problem: &TestingProblem, alpha: f64) -> ThresholdResult {
    if alpha >= 1.0 {
        return ThresholdResult::reject_all();
    }
    let p = problem.p;
    let floor_ratio = 1.0 / model.likelihood_ratio_ceiling(problem.theta());
    let lhs_limit = floor_ratio / ((1.0 - p) * floor_ratio + p);
    if !(alpha > lhs_limit) {
        return ThresholdResult::reject_none();
    }
    let ln_alpha = alpha.ln();
    let f = |w: f64| ln_alpha - ln_gw_lhs(model, problem, w);
    match solve_increasing(f) {
        Some(w) => ThresholdResult::interior(w, f(w).exp_m1().abs()),
        None => ThresholdResult::reject_none(),
    }
}

/// Bayesian FDR of the fixed rule at `omega`: `1−p` at zero, decreasing to
/// `β*` as `omega → ∞`.
pub fn bfdr_of_threshold(model: &TailModel, problem: &TestingProblem, omega: f64) -> f64 {
    if omega.is_infinite() {
        return crate::regime::bfdr_floor(model, problem);
    }
    let p = problem.p;
    let r = ln_survival_ratio(model, omega.max(0.0), problem.theta()).exp();
    (1.0 - p) * r / ((1.0 - p) * r + p)
}
