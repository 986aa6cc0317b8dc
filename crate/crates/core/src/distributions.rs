//! Monotone polynomial tail (MPT) distributions.
//!
//! A member has a density `d` that is either even or supported on `[0, ∞)`,
//! a polynomial tail `d(x)·x^(γ+1) → C_d`, and scale likelihood ratios
//! `d(x/θ)/d(x)` strictly increasing in `x > 0` for every `θ > 1`. Three
//! members are provided:
//!
//! | kind          | density                          | `C_d`                                |
//! |---------------|----------------------------------|--------------------------------------|
//! | Student's t   | `C_d (x² + γ)^(−(γ+1)/2)`        | `γ^(γ/2) Γ((γ+1)/2) / (√π Γ(γ/2))`   |
//! | Pareto        | `C_d (x + 1)^(−(γ+1))`, `x > 0`  | `γ`                                  |
//! | Inverse Gamma | `C_d x^(−γ−1) e^(−1/x)`, `x > 0` | `1 / Γ(γ)`                           |
//!
//! Upper tail probabilities `1 − D(x)` always come from a dedicated survival
//! routine; the thresholds of interest sit far out in the tail where `1 − cdf`
//! would cancel.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StudentT};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::error::{domain, Error, Result};
use crate::roots::bisect_increasing;

/// Survival values below this are replaced by the polynomial tail asymptote
/// when taking logarithms.
const SURVIVAL_UNDERFLOW: f64 = 1e-280;

/// Scale ratio used by [`tail_diagnostics`] for the survival-ratio column.
pub const REFERENCE_THETA: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailKind {
    StudentT,
    Pareto,
    InverseGamma,
}

impl TailKind {
    pub fn name(self) -> &'static str {
        match self {
            TailKind::StudentT => "student-t",
            TailKind::Pareto => "pareto",
            TailKind::InverseGamma => "inverse-gamma",
        }
    }

    pub const ALL: [TailKind; 3] = [TailKind::StudentT, TailKind::Pareto, TailKind::InverseGamma];
}

impl fmt::Display for TailKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TailKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "student-t" | "t" | "studentt" | "student_t" => Ok(TailKind::StudentT),
            "pareto" | "lomax" => Ok(TailKind::Pareto),
            "inverse-gamma" | "inverse_gamma" | "invgamma" | "ig" => Ok(TailKind::InverseGamma),
            other => Err(Error::Config(format!("unknown distribution `{other}`"))),
        }
    }
}

/// Whether the density is even or lives on the nonnegative half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sides {
    TwoSided,
    OneSided,
}

impl Sides {
    /// Multiplicity of the rejection region `{|x| ≥ ω}`: 2 or 1.
    pub fn factor(self) -> f64 {
        match self {
            Sides::TwoSided => 2.0,
            Sides::OneSided => 1.0,
        }
    }
}

/// An MPT distribution at unit scale.
///
/// Immutable after construction; share freely between threads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    kind: TailKind,
    gamma: f64,
    c_d: f64,
    #[serde(skip)]
    ln_c_d: f64,
}

impl TailModel {
    pub fn new(kind: TailKind, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return domain(format!("tail index must be positive and finite, got {gamma}"));
        }
        let ln_c_d = match kind {
            TailKind::StudentT => {
                0.5 * gamma * gamma.ln() + ln_gamma(0.5 * (gamma + 1.0))
                    - 0.5 * PI.ln()
                    - ln_gamma(0.5 * gamma)
            }
            TailKind::Pareto => gamma.ln(),
            TailKind::InverseGamma => -ln_gamma(gamma),
        };
        let c_d = match kind {
            TailKind::Pareto => gamma,
            _ => ln_c_d.exp(),
        };
        Ok(Self { kind, gamma, c_d, ln_c_d })
    }

    pub fn student_t(gamma: f64) -> Result<Self> {
        Self::new(TailKind::StudentT, gamma)
    }

    pub fn pareto(gamma: f64) -> Result<Self> {
        Self::new(TailKind::Pareto, gamma)
    }

    pub fn inverse_gamma(gamma: f64) -> Result<Self> {
        Self::new(TailKind::InverseGamma, gamma)
    }

    pub fn kind(&self) -> TailKind {
        self.kind
    }

    /// Tail heaviness index γ.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Tail constant `C_d = lim d(x)·x^(γ+1)`.
    pub fn c_d(&self) -> f64 {
        self.c_d
    }

    pub fn sides(&self) -> Sides {
        match self.kind {
            TailKind::StudentT => Sides::TwoSided,
            TailKind::Pareto | TailKind::InverseGamma => Sides::OneSided,
        }
    }

    fn check_support(&self, x: f64) -> Result<()> {
        if x.is_nan() {
            return domain("NaN argument");
        }
        if self.sides() == Sides::OneSided && x < 0.0 {
            return domain(format!("{} is supported on x ≥ 0, got {x}", self.kind));
        }
        Ok(())
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        self.check_support(x)?;
        Ok(self.ln_density_abs(x.abs()).exp())
    }

    /// `ln d(x)`, finite wherever the density is positive even if `d(x)`
    /// itself underflows.
    pub fn ln_density(&self, x: f64) -> Result<f64> {
        self.check_support(x)?;
        Ok(self.ln_density_abs(x.abs()))
    }

    /// `ln d(x)` for `x ≥ 0`; `−∞` where the density vanishes.
    pub(crate) fn ln_density_abs(&self, x: f64) -> f64 {
        let g = self.gamma;
        match self.kind {
            TailKind::StudentT => {
                let ln_q = if x > 1e100 {
                    2.0 * x.ln() + (g / (x * x)).ln_1p()
                } else {
                    (x * x + g).ln()
                };
                self.ln_c_d - 0.5 * (g + 1.0) * ln_q
            }
            TailKind::Pareto => self.ln_c_d - (g + 1.0) * x.ln_1p(),
            TailKind::InverseGamma => {
                if x == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    self.ln_c_d - (g + 1.0) * x.ln() - 1.0 / x
                }
            }
        }
    }

    /// `D(x)`; zero below the support of one-sided models.
    pub fn cdf(&self, x: f64) -> f64 {
        match self.kind {
            TailKind::StudentT => {
                if x < 0.0 {
                    self.survival(-x)
                } else if x * x < self.gamma {
                    0.5 + 0.5 * self.t_central(x)
                } else {
                    1.0 - self.survival(x)
                }
            }
            TailKind::Pareto => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-self.gamma * x.ln_1p()).exp_m1()
                }
            }
            TailKind::InverseGamma => {
                if x <= 0.0 {
                    0.0
                } else if x.is_infinite() {
                    1.0
                } else {
                    gamma_ur(self.gamma, 1.0 / x)
                }
            }
        }
    }

    /// `1 − D(x)`, computed directly in the tail.
    pub fn survival(&self, x: f64) -> f64 {
        let g = self.gamma;
        match self.kind {
            TailKind::StudentT => {
                if x < 0.0 {
                    return self.cdf(-x);
                }
                if x.is_infinite() {
                    return 0.0;
                }
                if g == 1.0 {
                    return 1.0f64.atan2(x) / PI;
                }
                if g == 2.0 {
                    let s = if x > 1e100 { x * (1.0 + 2.0 / (x * x)).sqrt() } else { (x * x + 2.0).sqrt() };
                    return 1.0 / (s * (s + x));
                }
                if x * x < g {
                    0.5 - 0.5 * self.t_central(x)
                } else {
                    0.5 * beta_reg(0.5 * g, 0.5, g / (g + x * x))
                }
            }
            TailKind::Pareto => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-g * x.ln_1p()).exp()
                }
            }
            TailKind::InverseGamma => {
                if x <= 0.0 {
                    1.0
                } else if x.is_infinite() {
                    0.0
                } else {
                    gamma_lr(g, 1.0 / x)
                }
            }
        }
    }

    /// `P(|T| ≤ x)` for the Student's t member, accurate near the centre.
    fn t_central(&self, x: f64) -> f64 {
        let g = self.gamma;
        if g == 1.0 {
            return 2.0 * x.atan() / PI;
        }
        if g == 2.0 {
            return x / (x * x + 2.0).sqrt();
        }
        if x == 0.0 {
            return 0.0;
        }
        beta_reg(0.5, 0.5 * g, x * x / (g + x * x))
    }

    /// `ln(1 − D(x))` for `x ≥ 0`, switching to `ln(C_d/γ) − γ ln x` once the
    /// survival underflows.
    pub fn ln_survival(&self, x: f64) -> f64 {
        if self.kind == TailKind::Pareto {
            return -self.gamma * x.max(0.0).ln_1p();
        }
        let s = self.survival(x);
        if s > SURVIVAL_UNDERFLOW {
            s.ln()
        } else {
            (self.c_d / self.gamma).ln() - self.gamma * x.ln()
        }
    }

    /// Inverse of `D` by bracketed bisection.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return domain(format!("quantile level must lie in (0, 1), got {q}"));
        }
        if self.sides() == Sides::TwoSided {
            if q == 0.5 {
                return Ok(0.0);
            }
            if q < 0.5 {
                return Ok(-self.upper_quantile(1.0 - q));
            }
        }
        Ok(self.upper_quantile(q))
    }

    /// Quantile on the nonnegative half-line.
    fn upper_quantile(&self, q: f64) -> f64 {
        let tail = 1.0 - q;
        // Initial guess from 1 − D(x) ≈ (C_d/γ)·x^(−γ).
        let guess = ((self.c_d / self.gamma) / tail).powf(1.0 / self.gamma).clamp(1e-3, 1e300);
        let mut hi = guess;
        while self.survival(hi) > tail && hi < f64::MAX / 2.0 {
            hi *= 2.0;
        }
        let mut lo = hi;
        while lo > 0.0 && self.survival(lo) < tail {
            lo = if lo < 1e-300 { 0.0 } else { lo * 0.5 };
        }
        if q < 0.5 {
            bisect_increasing(lo, hi, |x| self.cdf(x) - q)
        } else {
            bisect_increasing(lo, hi, |x| tail - self.survival(x))
        }
    }

    /// A reusable unit-scale sampler.
    pub fn sampler(&self) -> TailSampler {
        let inner = match self.kind {
            TailKind::StudentT => {
                SamplerKind::StudentT(StudentT::new(self.gamma).expect("validated tail index"))
            }
            TailKind::Pareto => SamplerKind::Pareto { inv_gamma: 1.0 / self.gamma },
            TailKind::InverseGamma => {
                SamplerKind::InverseGamma(Gamma::new(self.gamma, 1.0).expect("validated tail index"))
            }
        };
        TailSampler { inner }
    }

    /// `n` i.i.d. draws with cdf `D(x/scale)`.
    pub fn sample<R: Rng + ?Sized>(&self, scale: f64, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        if !(scale.is_finite() && scale > 0.0) {
            return domain(format!("scale must be positive, got {scale}"));
        }
        let sampler = self.sampler();
        Ok((0..n).map(|_| scale * sampler.sample(rng)).collect())
    }

    /// `θ^(−1/2)·d(x·θ^(−1/2)) / d(x)`, the likelihood ratio of the signal
    /// scale `√θ` against the null scale.
    pub fn scale_likelihood_ratio(&self, x: f64, theta: f64) -> Result<f64> {
        self.check_support(x)?;
        if !(theta > 1.0) {
            return domain(format!("scale ratio must exceed 1, got {theta}"));
        }
        Ok(self.ln_scale_likelihood_ratio(x.abs(), theta).exp())
    }

    pub(crate) fn ln_scale_likelihood_ratio(&self, x: f64, theta: f64) -> f64 {
        let half_ln_theta = 0.5 * theta.ln();
        if x == 0.0 {
            return self.ln_likelihood_ratio_floor(theta);
        }
        if self.kind == TailKind::StudentT {
            let g = self.gamma;
            if x < 1e100 {
                let x2 = x * x;
                return 0.5 * (g + 1.0) * ((x2 + g) / (x2 / theta + g)).ln() - half_ln_theta;
            }
        }
        -half_ln_theta + self.ln_density_abs(x / theta.sqrt()) - self.ln_density_abs(x)
    }

    /// `ln inf_x` of the scale likelihood ratio, attained as `x → 0⁺`.
    pub(crate) fn ln_likelihood_ratio_floor(&self, theta: f64) -> f64 {
        match self.kind {
            TailKind::InverseGamma => f64::NEG_INFINITY,
            _ => -0.5 * theta.ln(),
        }
    }

    /// `inf_x θ^(−1/2)·d(xθ^(−1/2))/d(x)`: `θ^(−1/2)` when `d(0) > 0`, else 0.
    pub fn likelihood_ratio_floor(&self, theta: f64) -> f64 {
        self.ln_likelihood_ratio_floor(theta).exp()
    }

    /// `sup_x` of the scale likelihood ratio: `θ^(γ/2)`.
    pub fn likelihood_ratio_ceiling(&self, theta: f64) -> f64 {
        theta.powf(0.5 * self.gamma)
    }
}

enum SamplerKind {
    StudentT(StudentT<f64>),
    Pareto { inv_gamma: f64 },
    InverseGamma(Gamma<f64>),
}

/// Unit-scale sampler for a [`TailModel`].
pub struct TailSampler {
    inner: SamplerKind,
}

impl Distribution<f64> for TailSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.inner {
            SamplerKind::StudentT(t) => t.sample(rng),
            SamplerKind::Pareto { inv_gamma } => {
                // 1 − U lies in (0, 1]; invert the survival (1 + x)^(−γ).
                let u = 1.0 - rng.random::<f64>();
                (-u.ln() * inv_gamma).exp_m1()
            }
            SamplerKind::InverseGamma(g) => 1.0 / g.sample(rng),
        }
    }
}

/// One row of [`tail_diagnostics`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailRow {
    pub x: f64,
    /// `d(x)·x^(γ+1)`, increasing to `C_d`.
    pub g: f64,
    /// `x^γ·(1 − D(x))`, increasing to `C_d/γ`.
    pub h: f64,
    /// `(1 − D(x/θ₀)) / (1 − D(x))`, increasing.
    pub lr_ratio: f64,
    /// `lr_ratio − 1`, computed from cdf differences where `1 − D` is near 1
    /// so that increments below machine epsilon stay visible.
    pub lr_excess: f64,
    /// `1 − f(x)` with `f(x) = 2x·d(x)/γ + 2D(x) − 1`; `f` increases to 1, so
    /// this column decreases. Kept in complement form since `f` rounds to 1
    /// long before its increments vanish.
    pub f_complement: f64,
    /// `1 + f(x) = 2x·d(x)/γ + 2D(x)`, the resolved form of `f` where `D` is small.
    pub f_shifted: f64,
}

/// Outcome of the four monotonicity checks over a diagnostics table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotonicityCheck {
    pub g: bool,
    pub h: bool,
    pub lr_ratio: bool,
    pub f: bool,
}

impl MonotonicityCheck {
    pub fn all(&self) -> bool {
        self.g && self.h && self.lr_ratio && self.f
    }
}

/// Strict monotonicity of every column of `rows`, each compared in its
/// well-conditioned form.
pub fn check_monotonicity(rows: &[TailRow]) -> MonotonicityCheck {
    let f = rows.windows(2).all(|w| {
        if w[1].f_shifted < 1.0 {
            w[1].f_shifted > w[0].f_shifted
        } else {
            w[1].f_complement < w[0].f_complement
        }
    });
    MonotonicityCheck {
        g: is_strictly_increasing(rows.iter().map(|r| r.g)),
        h: is_strictly_increasing(rows.iter().map(|r| r.h)),
        lr_ratio: is_strictly_increasing(rows.iter().map(|r| r.lr_excess)),
        f,
    }
}

/// Tail monotonicity diagnostics on a grid of positive points, with the
/// survival ratio taken at [`REFERENCE_THETA`].
pub fn tail_diagnostics(model: &TailModel, grid: &[f64]) -> Vec<TailRow> {
    tail_diagnostics_at(model, grid, REFERENCE_THETA)
}

pub fn tail_diagnostics_at(model: &TailModel, grid: &[f64], theta: f64) -> Vec<TailRow> {
    let g = model.gamma;
    grid.iter()
        .map(|&x| {
            let ln_x = x.ln();
            let ln_d = model.ln_density_abs(x);
            let ln_s = model.ln_survival(x);
            TailRow {
                x,
                g: (ln_d + (g + 1.0) * ln_x).exp(),
                h: (ln_s + g * ln_x).exp(),
                lr_ratio: (model.ln_survival(x / theta) - ln_s).exp(),
                lr_excess: survival_ratio_excess(model, x, theta),
                f_complement: 2.0 * (model.survival(x) - x * ln_d.exp() / g),
                f_shifted: 2.0 * (x * ln_d.exp() / g + model.cdf(x)),
            }
        })
        .collect()
}

fn survival_ratio_excess(model: &TailModel, x: f64, theta: f64) -> f64 {
    let s = model.survival(x);
    if s > 0.5 {
        (model.cdf(x) - model.cdf(x / theta)) / s
    } else {
        (model.ln_survival(x / theta) - model.ln_survival(x)).exp_m1()
    }
}

pub fn is_strictly_increasing(values: impl IntoIterator<Item = f64>) -> bool {
    let mut prev = f64::NEG_INFINITY;
    for v in values {
        if !(v > prev) {
            return false;
        }
        prev = v;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn tail_constants() {
        assert!(close(TailModel::student_t(1.0).unwrap().c_d(), 1.0 / PI, 1e-14));
        assert_eq!(TailModel::pareto(3.0).unwrap().c_d(), 3.0);
        assert!(close(TailModel::inverse_gamma(3.0).unwrap().c_d(), 0.5, 1e-14));
    }

    #[test]
    fn density_examples() {
        let pareto = TailModel::pareto(3.0).unwrap();
        assert!(close(pareto.density(0.0).unwrap(), 3.0, 1e-15));
        let cauchy = TailModel::student_t(1.0).unwrap();
        assert!(close(cauchy.density(0.0).unwrap(), 1.0 / PI, 1e-14));
        let t3 = TailModel::student_t(3.0).unwrap();
        assert!(close(t3.density(0.0).unwrap(), 0.367_552_596_947_861_35, 1e-13));
        assert_eq!(t3.density(-1.5).unwrap(), t3.density(1.5).unwrap());
    }

    #[test]
    fn negative_argument_on_half_line() {
        let pareto = TailModel::pareto(3.0).unwrap();
        assert!(matches!(pareto.density(-1.0), Err(Error::Domain(_))));
        assert!(TailModel::inverse_gamma(2.0).unwrap().density(-0.1).is_err());
        assert_eq!(pareto.cdf(-1.0), 0.0);
    }

    #[test]
    fn invalid_tail_index() {
        assert!(TailModel::student_t(0.0).is_err());
        assert!(TailModel::pareto(-1.0).is_err());
        assert!(TailModel::inverse_gamma(f64::NAN).is_err());
    }

    #[test]
    fn cdf_examples() {
        let cauchy = TailModel::student_t(1.0).unwrap();
        assert_eq!(cauchy.cdf(0.0), 0.5);
        assert!(close(cauchy.cdf(1.0), 0.75, 1e-15));
        assert!(close(TailModel::pareto(3.0).unwrap().cdf(1.0), 0.875, 1e-15));
    }

    #[test]
    fn t_branches_agree() {
        // Generic incomplete-beta path against the closed forms at γ = 1, 2.
        for &g in &[1.0, 2.0] {
            let closed = TailModel::student_t(g).unwrap();
            let generic = TailModel::student_t(g + 1e-12).unwrap();
            for &x in &[0.1, 0.9, 1.5, 7.0, 120.0] {
                assert!(close(closed.survival(x), generic.survival(x), 1e-9), "γ={g} x={x}");
                assert!(close(closed.cdf(-x), generic.cdf(-x), 1e-9));
            }
        }
    }

    #[test]
    fn survival_is_complement() {
        for kind in TailKind::ALL {
            let model = TailModel::new(kind, 3.0).unwrap();
            for &x in &[0.01, 0.5, 1.0, 2.0, 10.0] {
                assert!((model.cdf(x) + model.survival(x) - 1.0).abs() < 1e-14, "{kind} {x}");
            }
        }
    }

    #[test]
    fn quantile_examples() {
        let pareto = TailModel::pareto(3.0).unwrap();
        assert!(close(pareto.quantile(0.875).unwrap(), 1.0, 1e-14));
        assert_eq!(TailModel::student_t(1.0).unwrap().quantile(0.5).unwrap(), 0.0);
        let ig = TailModel::inverse_gamma(2.0).unwrap();
        assert!(close(ig.quantile(ig.cdf(1.0)).unwrap(), 1.0, 1e-12));
        assert!(pareto.quantile(0.0).is_err());
        assert!(pareto.quantile(1.0).is_err());
    }

    #[test]
    fn quantile_round_trip() {
        for kind in TailKind::ALL {
            for &g in &[1.0, 3.0, 10.0] {
                let model = TailModel::new(kind, g).unwrap();
                for &q in &[1e-9, 1e-4, 0.1, 0.37, 0.5, 0.8, 0.999, 1.0 - 1e-9] {
                    let x = model.quantile(q).unwrap();
                    assert!((model.cdf(x) - q).abs() <= 1e-12, "{kind} γ={g} q={q}");
                }
            }
        }
    }

    #[test]
    fn sampling_contract() {
        let model = TailModel::student_t(3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(model.sample(1.0, 0, &mut rng).unwrap().is_empty());
        let a = model.sample(2.0, 50, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let b = model.sample(2.0, 50, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        assert_eq!(a, b);
        assert!(model.sample(0.0, 1, &mut rng).is_err());
        let ig = TailModel::inverse_gamma(2.0).unwrap();
        assert!(ig.sample(1.0, 1000, &mut rng).unwrap().iter().all(|&x| x > 0.0));
    }

    #[test]
    fn likelihood_ratio_examples() {
        let cauchy = TailModel::student_t(1.0).unwrap();
        assert!(close(cauchy.scale_likelihood_ratio(98f64.sqrt(), 100.0).unwrap(), 5.0, 1e-13));
        for model in [cauchy, TailModel::pareto(3.0).unwrap()] {
            assert!(close(model.scale_likelihood_ratio(1e-12, 4.0).unwrap(), 0.5, 1e-9));
        }
        let pareto = TailModel::pareto(3.0).unwrap();
        assert!(close(pareto.scale_likelihood_ratio(1e6, 100.0).unwrap(), 1e3, 1e-2));
        assert!(pareto.scale_likelihood_ratio(1.0, 1.0).is_err());
        let ig = TailModel::inverse_gamma(3.0).unwrap();
        assert_eq!(ig.scale_likelihood_ratio(0.0, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn diagnostics_examples() {
        let pareto = TailModel::pareto(3.0).unwrap();
        let rows = tail_diagnostics(&pareto, &[1.0]);
        assert_eq!(rows.len(), 1);
        assert!(close(rows[0].g, 0.1875, 1e-14));
        assert!(close(rows[0].h, 0.125, 1e-14));
        let far = tail_diagnostics(&pareto, &[1e6])[0];
        assert!(close(far.g, 3.0, 1e-5));
        assert!(close(far.h, 1.0, 1e-5));
    }

    #[test]
    fn strictly_increasing_helper() {
        assert!(is_strictly_increasing([1.0]));
        assert!(is_strictly_increasing([1.0, 2.0, 3.0]));
        assert!(!is_strictly_increasing([1.0, 1.0]));
        assert!(!is_strictly_increasing([1.0, f64::NAN]));
    }
}
