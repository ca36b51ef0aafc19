use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::estimator::{CheckpointStat, FitModel, FitResult};

/// Column titles of the checkpoint table.
pub const TABLE_COLUMNS: [&str; 6] = ["t", "zt", "ln(zt)", "ln(zt)/t", "σ", "ln(zt)/t (ls fit)"];

/// `value(error)` with the error as one significant digit in units of the
/// last printed decimal, e.g. `-2.1752508(1)`.
pub fn format_with_error(value: f64, error: f64) -> String {
    if !(error.is_finite() && error > 0.0) {
        return format!("{value}({})", if error == 0.0 { "0" } else { "?" });
    }
    let decimals = (-error.log10()).ceil().clamp(0.0, 15.0) as usize;
    let digit = (error * 10f64.powi(decimals as i32)).round() as u64;
    format!("{value:.decimals$}({digit})")
}

fn format_time(t: f64) -> String {
    if t.fract() == 0.0 && t.abs() < 1e15 {
        format!("{t:.0}")
    } else {
        format!("{t}")
    }
}

fn fit_label(model: FitModel) -> &'static str {
    match model {
        FitModel::Linear => "lin fit",
        FitModel::Nonlinear => "nlin fit",
    }
}

/// `λ0 = ...  λ1 = ...(err)  lin fit`, one line per fit.
pub fn energy_lines(lambda0: f64, fits: &[FitResult]) -> Vec<String> {
    if fits.is_empty() {
        return vec![format!("λ0 = {lambda0}")];
    }
    fits.iter()
        .map(|f| {
            format!(
                "λ0 = {}  λ1 = {}  {}",
                f.lambda0,
                format_with_error(f.lambda1, f.extrapolation_error),
                fit_label(f.model)
            )
        })
        .collect()
}

fn check_rows(stats: &[CheckpointStat]) -> Result<()> {
    if stats.is_empty() {
        return Err(Error::DegenerateInput("no checkpoint statistics to write".into()));
    }
    if stats.windows(2).any(|w| w[1].t <= w[0].t) {
        return Err(Error::DegenerateInput("checkpoint times are not ascending".into()));
    }
    Ok(())
}

fn fitted(s: &CheckpointStat, decimals: Option<usize>) -> String {
    match (s.ls_fit, decimals) {
        (Some(v), Some(d)) => format!("{v:.d$}"),
        (Some(v), None) => format!("{v}"),
        (None, _) => "nan".to_string(),
    }
}

/// Tab-separated checkpoint table with six decimals, preceded by `#`
/// lines carrying the reference and extrapolated energies.
///
/// The last column is each row's attached fit value (`nan` when none).
pub fn emit_table(stats: &[CheckpointStat], lambda0: f64, fits: &[FitResult]) -> Result<String> {
    check_rows(stats)?;
    let mut out = String::new();
    for line in energy_lines(lambda0, fits) {
        writeln!(out, "# {line}").unwrap();
    }
    writeln!(out, "{}", TABLE_COLUMNS.join("\t")).unwrap();
    for s in stats {
        writeln!(
            out,
            "{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{}",
            format_time(s.t),
            s.z_mean,
            s.ln_z,
            s.ln_z_over_t,
            s.sigma,
            fitted(s, Some(6))
        )
        .unwrap();
    }
    Ok(out)
}

/// Whitespace-separated `t  ln(zt)/t  σ  fit` rows at full precision, for
/// plotting with `σ` as the error bar.
pub fn emit_plot_data(stats: &[CheckpointStat]) -> Result<String> {
    check_rows(stats)?;
    let mut out = String::from("# t\tln(zt)/t\tsigma\tfit\n");
    for s in stats {
        writeln!(out, "{}\t{}\t{}\t{}", format_time(s.t), s.ln_z_over_t, s.sigma, fitted(s, None)).unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_notation() {
        assert_eq!(format_with_error(-2.17525081, 1e-7), "-2.1752508(1)");
        assert_eq!(format_with_error(-2.17536239, 9e-8), "-2.17536239(9)");
        assert_eq!(format_with_error(-2.9001983, 2.7e-6), "-2.900198(3)");
        assert_eq!(format_with_error(1.5, 0.0), "1.5(0)");
        assert_eq!(format_with_error(1.5, f64::NAN), "1.5(?)");
    }

    #[test]
    fn time_column() {
        assert_eq!(format_time(8.0), "8");
        assert_eq!(format_time(0.25), "0.25");
    }

    #[test]
    fn empty_and_unordered_rows_are_refused() {
        assert!(emit_table(&[], 0.0, &[]).is_err());
        assert!(emit_plot_data(&[]).is_err());
        let rows = [
            CheckpointStat::from_ln_z_over_t(2.0, 0.1, 0.01),
            CheckpointStat::from_ln_z_over_t(1.0, 0.1, 0.01),
        ];
        assert!(emit_table(&rows, 0.0, &[]).is_err());
    }
}
