use super::{check_monotone, weights, CheckpointStat, FitModel, FitResult, Weighting};
use crate::error::{Error, Result};

/// Least squares of `ln(z_t)/t = A + B/t`; `lambda1 = lambda0 - A`.
pub fn fit_linear(stats: &[CheckpointStat], lambda0: f64, weighting: Weighting) -> Result<FitResult> {
    if stats.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "linear extrapolation needs at least 3 checkpoints, got {}",
            stats.len()
        )));
    }
    let w = weights(stats, weighting);
    let used = if w.is_some() {
        Weighting::Weighted
    } else {
        Weighting::Unweighted
    };
    let w = w.unwrap_or_else(|| vec![1.0; stats.len()]);
    let x: Vec<f64> = stats.iter().map(|s| 1.0 / s.t).collect();
    let y: Vec<f64> = stats.iter().map(|s| s.ln_z_over_t).collect();

    // Centered normal equations.
    let sw: f64 = w.iter().sum();
    let x_bar = w.iter().zip(&x).map(|(w, x)| w * x).sum::<f64>() / sw;
    let y_bar = w.iter().zip(&y).map(|(w, y)| w * y).sum::<f64>() / sw;
    let sxx: f64 = w.iter().zip(&x).map(|(w, x)| w * (x - x_bar).powi(2)).sum();
    let sxy: f64 = w
        .iter()
        .zip(x.iter().zip(&y))
        .map(|(w, (x, y))| w * (x - x_bar) * (y - y_bar))
        .sum();
    if sxx.is_nan() || sxx <= 1e-14 * sw * x_bar * x_bar {
        return Err(Error::SingularFit("all checkpoint times coincide".into()));
    }
    let b = sxy / sxx;
    let a = y_bar - b * x_bar;

    let rss: f64 = w
        .iter()
        .zip(x.iter().zip(&y))
        .map(|(w, (x, y))| w * (y - a - b * x).powi(2))
        .sum();
    let scale = match used {
        Weighting::Weighted => 1.0,
        Weighting::Unweighted => rss / (stats.len() - 2) as f64,
    };
    let var_a = scale * (1.0 / sw + x_bar * x_bar / sxx);
    let var_b = scale / sxx;

    let monotone = check_monotone(stats, |t| a + b / t);
    Ok(FitResult {
        model: FitModel::Linear,
        weighting: used,
        lambda0,
        lambda1: lambda0 - a,
        extrapolation_error: var_a.sqrt(),
        params: vec![a, b],
        param_errors: vec![var_a.sqrt(), var_b.sqrt()],
        weighted_rms_residual: (rss / sw).sqrt(),
        monotone,
        iterations: 1,
    })
}
