use nalgebra::{Matrix4, Vector4};

use super::{check_monotone, fit_linear, weights, CheckpointStat, FitModel, FitResult, Weighting};
use crate::error::{Error, Result};

/// Levenberg-Marquardt iteration cap.
pub const MAX_ITERATIONS: usize = 500;

/// Parameters are `[A, B, C, ln D]`, so `D` stays positive.
fn model(p: &Vector4<f64>, t: f64) -> f64 {
    let d = p[3].exp();
    p[0] + p[1] / t + p[2] * (-d * t).exp() / t
}

fn gradient(p: &Vector4<f64>, t: f64) -> Vector4<f64> {
    let d = p[3].exp();
    let e = (-d * t).exp();
    Vector4::new(1.0, 1.0 / t, e / t, -p[2] * d * e)
}

fn chi2(p: &Vector4<f64>, t: &[f64], y: &[f64], w: &[f64]) -> f64 {
    t.iter()
        .zip(y)
        .zip(w)
        .map(|((&t, &y), &w)| w * (y - model(p, t)).powi(2))
        .sum()
}

/// Least squares of `ln(z_t)/t = A + B/t + C e^{-D t}/t`, `D > 0`.
///
/// Seeded from [`fit_linear`] with `C = ln z(t1) - A t1 - B`, `D = 1/t1`.
pub fn fit_nonlinear(stats: &[CheckpointStat], lambda0: f64, weighting: Weighting) -> Result<FitResult> {
    if stats.len() < 4 {
        return Err(Error::DegenerateInput(format!(
            "nonlinear extrapolation needs at least 4 checkpoints, got {}",
            stats.len()
        )));
    }
    let seed = fit_linear(stats, lambda0, weighting)?;
    let used = seed.weighting;
    let w = weights(stats, used).unwrap_or_else(|| vec![1.0; stats.len()]);
    let t: Vec<f64> = stats.iter().map(|s| s.t).collect();
    let y: Vec<f64> = stats.iter().map(|s| s.ln_z_over_t).collect();

    let (a, b) = (seed.params[0], seed.params[1]);
    let t1 = t[0];
    let mut p = Vector4::new(a, b, stats[0].ln_z - a * t1 - b, (1.0 / t1).ln());
    let mut current = chi2(&p, &t, &y, &w);
    let mut mu = 1e-3;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (jtj, jtr) = normal_equations(&p, &t, &y, &w);
        if current == 0.0 || jtr.amax() == 0.0 {
            converged = true;
            break;
        }
        let floor = 1e-12 * jtj.diagonal().amax();
        let mut accepted = false;
        while mu < 1e16 {
            let mut damped = jtj;
            for i in 0..4 {
                damped[(i, i)] += mu * jtj[(i, i)].max(floor);
            }
            let Some(delta) = damped.lu().solve(&jtr) else {
                mu *= 10.0;
                continue;
            };
            let trial = p + delta;
            let next = chi2(&trial, &t, &y, &w);
            if next.is_finite() && next < current {
                let small_step = (0..4).all(|i| delta[i].abs() <= 1e-12 * (p[i].abs() + 1e-12));
                let small_gain = current - next <= 1e-12 * current;
                p = trial;
                current = next;
                mu = (mu / 10.0).max(1e-15);
                accepted = true;
                if small_step || small_gain {
                    converged = true;
                }
                break;
            }
            mu *= 10.0;
        }
        if !accepted {
            // No descent direction left at machine precision.
            converged = true;
        }
        if converged {
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { iterations });
    }

    let (jtj, _) = normal_equations(&p, &t, &y, &w);
    let cov = jtj
        .pseudo_inverse(1e-14 * jtj.diagonal().amax())
        .map_err(|e| Error::SingularFit(e.to_string()))?;
    let scale = match used {
        Weighting::Weighted => 1.0,
        Weighting::Unweighted => current / (stats.len().saturating_sub(4).max(1)) as f64,
    };
    let d = p[3].exp();
    let params = vec![p[0], p[1], p[2], d];
    let mut param_errors: Vec<f64> = (0..4).map(|i| (scale * cov[(i, i)]).max(0.0).sqrt()).collect();
    param_errors[3] *= d;

    let sw: f64 = w.iter().sum();
    let monotone = check_monotone(stats, |t| model(&p, t));
    Ok(FitResult {
        model: FitModel::Nonlinear,
        weighting: used,
        lambda0,
        lambda1: lambda0 - p[0],
        extrapolation_error: param_errors[0],
        params,
        param_errors,
        weighted_rms_residual: (current / sw).sqrt(),
        monotone,
        iterations,
    })
}

fn normal_equations(p: &Vector4<f64>, t: &[f64], y: &[f64], w: &[f64]) -> (Matrix4<f64>, Vector4<f64>) {
    let mut jtj = Matrix4::zeros();
    let mut jtr = Vector4::zeros();
    for ((&t, &y), &w) in t.iter().zip(y).zip(w) {
        let g = gradient(p, t);
        let r = y - model(p, t);
        jtj += w * g * g.transpose();
        jtr += w * r * g;
    }
    (jtj, jtr)
}
