//! Bayesian multiple testing under sparsity for polynomial-tailed scale
//! mixtures.
//!
//! Observations follow the two-groups model `p·D(x/σ₁) + (1−p)·D(x/σ₀)` where
//! `D` belongs to the monotone polynomial tail (MPT) family: densities with
//! `d(x)·x^(γ+1) → C_d` and a scale family with monotone likelihood ratio.
//! The crate computes the Bayes oracle threshold, BFDR and Genovese–Wasserman
//! fixed thresholds, Benjamini–Hochberg decisions, exact fixed-threshold Bayes
//! risks, the constants that govern their large-`m` behaviour, and runs Monte
//! Carlo experiments over parameter grids.
//!
//! ```
//! use abos::distributions::TailModel;
//! use abos::regime::{AsymptoticRegime, TestingProblem};
//! use abos::thresholds::oracle_threshold;
//!
//! let model = TailModel::student_t(3.0).unwrap();
//! let regime = AsymptoticRegime::new(&model, 1.0, 1.0).unwrap();
//! let problem = TestingProblem::on_manifold(&model, 1.0, 10_000, 0.01, 1.0, 1.0).unwrap();
//! let omega = oracle_threshold(&model, &problem);
//! assert!(omega.omega().unwrap() > 0.0);
//! assert!(regime.alpha_inf > 0.2 && regime.alpha_inf < 0.3);
//! ```

pub mod cli;
pub mod distributions;
pub mod error;
pub mod procedures;
pub mod regime;
pub mod roots;
pub mod simlab;
pub mod thresholds;

pub use distributions::{Sides, TailKind, TailModel};
pub use error::{Error, Result};
pub use procedures::DecisionSummary;
pub use regime::{AsymptoticRegime, TestingProblem};
pub use thresholds::{ThresholdResult, ThresholdStatus};
