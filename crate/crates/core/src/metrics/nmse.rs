use crate::error::{Error, Result};

/// Value reported when predictions match the target exactly.
pub const LOG_NMSE_PERFECT: f64 = -1e9;
pub const LOG_NMSE_BASE: u32 = 10;

/// `log10(⟨(ŷ - y)²⟩ / ⟨(y - ⟨y⟩)²⟩)` over the whole window.
///
/// Non-finite predictions yield `+∞`; an exact match yields
/// [`LOG_NMSE_PERFECT`].
pub fn log_nmse(y: &[f64], y_hat: &[f64]) -> Result<f64> {
    if y.len() != y_hat.len() {
        return Err(Error::Dimension {
            what: "prediction length",
            expected: y.len(),
            got: y_hat.len(),
        });
    }
    if y.len() < 2 {
        return Err(Error::SeriesTooShort { needed: 1, have: y.len() });
    }
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    if var == 0.0 || !var.is_finite() {
        return Err(Error::ZeroVariance);
    }
    if y_hat.iter().any(|v| !v.is_finite()) {
        return Ok(f64::INFINITY);
    }
    let mse = y.iter().zip(y_hat).map(|(a, b)| (b - a).powi(2)).sum::<f64>() / n;
    if mse == 0.0 {
        return Ok(LOG_NMSE_PERFECT);
    }
    Ok((mse / var).log10())
}
