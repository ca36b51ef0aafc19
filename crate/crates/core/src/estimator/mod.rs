//! Replication averages, per-checkpoint statistics and extrapolation of
//! `ln(z_t)/t` to infinite time.
//!
//! With `z_t` the mean weight over replications, the lowest energy is
//! `lambda1 = lambda0 - lim_{t->inf} ln(z_t)/t`. Both fits model
//! `ln(z_t)/t` directly, weighting each checkpoint by `1/sigma^2`.

mod linear;
mod nonlinear;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use linear::fit_linear;
pub use nonlinear::{fit_nonlinear, MAX_ITERATIONS};

/// Statistics of one checkpoint time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointStat {
    pub t: f64,
    pub z_mean: f64,
    pub ln_z: f64,
    pub ln_z_over_t: f64,
    /// Standard error of `ln_z_over_t` (delta method).
    pub sigma: f64,
    /// Fitted `ln(z_t)/t`, once a fit has been attached.
    pub ls_fit: Option<f64>,
}

impl CheckpointStat {
    /// Row built from a mean weight and its uncertainty.
    pub fn from_mean(t: f64, z_mean: f64, sigma: f64) -> Result<Self> {
        if !(z_mean > 0.0 && z_mean.is_finite()) {
            return Err(Error::DegenerateInput(format!(
                "mean weight at t = {t} is {z_mean}; it must be positive and finite"
            )));
        }
        let ln_z = z_mean.ln();
        Ok(Self {
            t,
            z_mean,
            ln_z,
            ln_z_over_t: ln_z / t,
            sigma,
            ls_fit: None,
        })
    }

    /// Row built from a printed `ln(z_t)/t` value, e.g. a reference table.
    pub fn from_ln_z_over_t(t: f64, ln_z_over_t: f64, sigma: f64) -> Self {
        let ln_z = ln_z_over_t * t;
        Self {
            t,
            z_mean: ln_z.exp(),
            ln_z,
            ln_z_over_t,
            sigma,
            ls_fit: None,
        }
    }
}

/// Averages per-replication `(t, Z)` traces into checkpoint statistics.
///
/// Replications are reduced in index order. `sigma = SE(Z) / (z_mean t)`
/// with `SE` the sample standard deviation over `sqrt(N)`.
pub fn aggregate(replications: &[Vec<(f64, f64)>]) -> Result<Vec<CheckpointStat>> {
    let n = replications.len();
    if n < 2 {
        return Err(Error::DegenerateInput(format!(
            "at least two replications are needed for an error estimate, got {n}"
        )));
    }
    let times: Vec<f64> = replications[0].iter().map(|&(t, _)| t).collect();
    if times.is_empty() {
        return Err(Error::DegenerateInput("replications carry no checkpoints".into()));
    }
    for (i, rep) in replications.iter().enumerate() {
        if rep.len() != times.len() || rep.iter().zip(&times).any(|(&(t, _), &t0)| t != t0) {
            return Err(Error::DegenerateInput(format!(
                "replication {i} does not share the checkpoint times of replication 0"
            )));
        }
    }
    let nf = n as f64;
    times
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let mean = replications.iter().map(|rep| rep[j].1).sum::<f64>() / nf;
            let ss: f64 = replications
                .iter()
                .map(|rep| {
                    let d = rep[j].1 - mean;
                    d * d
                })
                .sum();
            let se = (ss / (nf - 1.0)).sqrt() / nf.sqrt();
            CheckpointStat::from_mean(t, mean, se / (mean * t))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitModel {
    /// `ln(z_t)/t = A + B/t`.
    Linear,
    /// `ln(z_t)/t = A + B/t + C e^{-D t}/t`.
    Nonlinear,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Weights `1/sigma^2`; parameter errors from the absolute covariance.
    #[default]
    Weighted,
    /// Equal weights; parameter errors scaled by the residual variance.
    Unweighted,
}

/// Outcome of an extrapolation fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    /// Weighting actually used. A weighted request falls back to equal
    /// weights when some `sigma` is zero.
    pub weighting: Weighting,
    pub lambda0: f64,
    pub lambda1: f64,
    /// Standard error of the asymptote `A`, hence of `lambda1`.
    pub extrapolation_error: f64,
    /// `[A, B]` or `[A, B, C, D]`.
    pub params: Vec<f64>,
    pub param_errors: Vec<f64>,
    pub weighted_rms_residual: f64,
    /// Whether the fitted values are monotone over the checkpoints.
    pub monotone: bool,
    pub iterations: usize,
}

impl FitResult {
    /// Fitted `ln(z_t)/t`.
    pub fn evaluate(&self, t: f64) -> f64 {
        let p = &self.params;
        match self.model {
            FitModel::Linear => p[0] + p[1] / t,
            FitModel::Nonlinear => p[0] + p[1] / t + p[2] * (-p[3] * t).exp() / t,
        }
    }
}

/// Writes the fitted value of `fit` into every row's `ls_fit`.
pub fn attach_fit(stats: &mut [CheckpointStat], fit: &FitResult) {
    for s in stats {
        s.ls_fit = Some(fit.evaluate(s.t));
    }
}

/// Per-row weights, or `None` when equal weights must be used.
pub(crate) fn weights(stats: &[CheckpointStat], weighting: Weighting) -> Option<Vec<f64>> {
    match weighting {
        Weighting::Unweighted => None,
        Weighting::Weighted => {
            if stats.iter().all(|s| s.sigma > 0.0 && s.sigma.is_finite()) {
                Some(stats.iter().map(|s| 1.0 / (s.sigma * s.sigma)).collect())
            } else {
                log::warn!("some checkpoint has zero or non-finite sigma; falling back to an unweighted fit");
                None
            }
        }
    }
}

pub(crate) fn check_monotone(stats: &[CheckpointStat], f: impl Fn(f64) -> f64) -> bool {
    let values: Vec<f64> = stats.iter().map(|s| f(s.t)).collect();
    let up = values.windows(2).all(|w| w[1] >= w[0]);
    let down = values.windows(2).all(|w| w[1] <= w[0]);
    if !(up || down) {
        log::warn!("fitted ln(z_t)/t is not monotone in t");
    }
    up || down
}
