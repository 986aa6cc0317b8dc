//! Problem parameters and the constants of the sparse asymptotic framework
//! `p → 0, u → ∞, v·u^(−γ/2) → C₀`.

use serde::{Deserialize, Serialize};

use crate::distributions::TailModel;
use crate::error::{domain, Result};
use crate::roots::bisect_increasing;

/// One configuration of `m` simultaneous tests.
///
/// Signals have scale `σ₁ = σ₀·√(1+u)`; a type I error costs `δ₀`, a type II
/// error costs `δ_A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestingProblem {
    pub m: u64,
    pub p: f64,
    pub sigma0: f64,
    pub u: f64,
    pub delta0: f64,
    pub delta_a: f64,
}

impl TestingProblem {
    pub fn new(m: u64, p: f64, sigma0: f64, u: f64, delta0: f64, delta_a: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("signal probability must lie in (0, 1), got {p}"));
        }
        for (name, value) in [("sigma0", sigma0), ("u", u), ("delta0", delta0), ("delta_a", delta_a)] {
            if !(value.is_finite() && value > 0.0) {
                return domain(format!("{name} must be positive and finite, got {value}"));
            }
        }
        Ok(Self { m, p, sigma0, u, delta0, delta_a })
    }

    /// A problem placed exactly on the asymptotic manifold for difficulty
    /// `c`: `σ₀ = 1` and `u = (v/C₀)^(2/γ)`.
    pub fn on_manifold(model: &TailModel, c: f64, m: u64, p: f64, delta0: f64, delta_a: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("signal probability must lie in (0, 1), got {p}"));
        }
        let v = delta0 / delta_a * (1.0 - p) / p;
        let u = u_from_difficulty(model, c, v)?;
        Self::new(m, p, 1.0, u, delta0, delta_a)
    }

    /// `f = (1−p)/p`.
    pub fn f(&self) -> f64 {
        (1.0 - self.p) / self.p
    }

    /// `δ = δ₀/δ_A`.
    pub fn delta(&self) -> f64 {
        self.delta0 / self.delta_a
    }

    /// `v = δ·f`, the posterior-odds cut the Bayes rule compares against.
    pub fn v(&self) -> f64 {
        self.delta() * self.f()
    }

    /// `θ = 1 + u = σ₁²/σ₀²`.
    pub fn theta(&self) -> f64 {
        1.0 + self.u
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma0 * self.theta().sqrt()
    }
}

/// Limiting constants for difficulty index `C` and loss ratio `δ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRegime {
    pub c: f64,
    pub c0: f64,
    /// Limit of the oracle's type I risk component `v·t₁`.
    pub c1: f64,
    /// Limit of the oracle's type II error probability `t₂`.
    pub c2: f64,
    pub c_b: f64,
    pub alpha_inf: f64,
    pub beta_star_inf: f64,
    pub delta_inf: f64,
}

impl AsymptoticRegime {
    pub fn new(model: &TailModel, c: f64, delta_inf: f64) -> Result<Self> {
        if !(delta_inf.is_finite() && delta_inf > 0.0) {
            return domain(format!("limiting loss ratio must be positive, got {delta_inf}"));
        }
        let c0 = c0_from_c(model, c)?;
        let (c1, c2) = risk_components(model, c)?;
        let c_b = c_b(model, c)?;
        let mut regime = Self {
            c,
            c0,
            c1,
            c2,
            c_b,
            alpha_inf: 0.0,
            beta_star_inf: 1.0 / (1.0 + delta_inf / c0),
            delta_inf,
        };
        regime.alpha_inf = optimal_alpha(&regime);
        Ok(regime)
    }

    /// `m·p·δ_A·(C₁ + C₂)`, the leading term of the oracle Bayes risk.
    pub fn oracle_risk_asymptote(&self, problem: &TestingProblem) -> f64 {
        problem.m as f64 * problem.p * problem.delta_a * (self.c1 + self.c2)
    }
}

fn check_difficulty(c: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) {
        return domain(format!("difficulty index must be positive and finite, got {c}"));
    }
    Ok(())
}

fn ln_c0(model: &TailModel, c: f64) -> f64 {
    0.5 * (model.gamma() + 1.0) * c.ln() + model.ln_density_abs(c.sqrt()) - model.c_d().ln()
}

/// `C₀ = C^((γ+1)/2)·d(√C)/C_d`, strictly increasing in `C` with limit 1.
pub fn c0_from_c(model: &TailModel, c: f64) -> Result<f64> {
    check_difficulty(c)?;
    Ok(ln_c0(model, c).exp())
}

/// Inverse of [`c0_from_c`]. `C₀` must lie in `(0, 1)`, the range of the map.
pub fn c_from_c0(model: &TailModel, c0: f64) -> Result<f64> {
    if !(c0 > 0.0 && c0 < 1.0) {
        return domain(format!("C0 must lie in (0, 1), the range of C ↦ C0, got {c0}"));
    }
    let target = c0.ln();
    let f = |ln_c: f64| ln_c0(model, ln_c.exp()) - target;
    // ln C₀ ~ ln C·(γ+1)/2 near 0, so −700 brackets any representable C₀ from below.
    let lo = -700.0;
    let mut hi = 1.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 700.0 {
            return domain(format!("C0 = {c0} is too close to 1 to invert"));
        }
    }
    if f(lo) > 0.0 {
        return domain(format!("C0 = {c0} is too small to invert"));
    }
    Ok(bisect_increasing(lo, hi, f).exp())
}

/// `(C₁, C₂)` with side factor `s` (2 for even densities, 1 on the half-line):
/// `C₁ = s·√C·d(√C)/γ` and `C₂ = 1 − s·(1 − D(√C))`.
pub fn risk_components(model: &TailModel, c: f64) -> Result<(f64, f64)> {
    check_difficulty(c)?;
    let s = model.sides().factor();
    let root = c.sqrt();
    let c1 = s * root * model.ln_density_abs(root).exp() / model.gamma();
    let c2 = 1.0 - s * model.survival(root);
    Ok((c1, c2))
}

/// `C_B = [(C_d/γ) / (1 − D(√C))]^(2/γ)`.
pub fn c_b(model: &TailModel, c: f64) -> Result<f64> {
    check_difficulty(c)?;
    let g = model.gamma();
    Ok((((model.c_d() / g).ln() - model.ln_survival(c.sqrt())) * 2.0 / g).exp())
}

/// `α∞ = 1 / (1 + δ∞(1 − C₂)/C₁)`.
pub fn optimal_alpha(regime: &AsymptoticRegime) -> f64 {
    1.0 / (1.0 + regime.delta_inf * (1.0 - regime.c2) / regime.c1)
}

/// `β* = {1 + (1+u)^(γ/2)/f}^(−1)`, the infimum of BFDR over finite fixed
/// thresholds.
pub fn bfdr_floor(model: &TailModel, problem: &TestingProblem) -> f64 {
    1.0 / (1.0 + model.likelihood_ratio_ceiling(problem.theta()) / problem.f())
}

/// `u = (v/C₀)^(2/γ)`: the signal inflation that puts `v·u^(−γ/2)` exactly at `C₀`.
pub fn u_from_difficulty(model: &TailModel, c: f64, v: f64) -> Result<f64> {
    if !(v.is_finite() && v > 0.0) {
        return domain(format!("v must be positive, got {v}"));
    }
    let c0 = c0_from_c(model, c)?;
    Ok((v / c0).powf(2.0 / model.gamma()))
}
