//! Calibration of the three bubble models on a window of observed data.

use serde::{Deserialize, Serialize};

use super::ols::{ols2_tagged, Confidence, ModelTag, OlsFit};
use crate::error::{Error, Result};
use crate::series::{log_growth, ExcessSeries, PriceSeries, Window};

/// Absolute resolution of a computed log growth rate. Residual scatter below
/// this is floating-point rounding, so it never counts as evidence.
pub const LOG_GROWTH_RESOLUTION: f64 = 256.0 * f64::EPSILON;

/// Regressor/response pairs for the price-anchoring model:
/// `x = pbar_{t-1}`, `y = ln(pbar_t / pbar_{t-1})` for `t` in `(start, end]`.
pub fn price_model_pairs(excess: &ExcessSeries, window: Window) -> Result<(Vec<f64>, Vec<f64>)> {
    let values = excess.window(window)?;
    let y = log_growth(window.start, values)?;
    let x = values[..values.len() - 1].to_vec();
    Ok((x, y))
}

/// Pairs for the return-anchoring model: `x` is the lagged log growth, `y`
/// the following one. All data come from inside the window, so a window of
/// `k` prices yields `k - 2` pairs.
pub fn return_model_pairs(excess: &ExcessSeries, window: Window) -> Result<(Vec<f64>, Vec<f64>)> {
    let values = excess.window(window)?;
    let g = log_growth(window.start, values)?;
    if g.len() < 2 {
        return Ok((Vec::new(), Vec::new()));
    }
    Ok((g[..g.len() - 1].to_vec(), g[1..].to_vec()))
}

pub fn fit_price_model(excess: &ExcessSeries, window: Window) -> Result<OlsFit> {
    fit_price_model_with(excess, window, Confidence::TwoSided)
}

pub fn fit_price_model_with(
    excess: &ExcessSeries,
    window: Window,
    confidence: Confidence,
) -> Result<OlsFit> {
    let (x, y) = price_model_pairs(excess, window)?;
    ols2_tagged(&x, &y, confidence, ModelTag::Price, LOG_GROWTH_RESOLUTION)
}

pub fn fit_return_model(excess: &ExcessSeries, window: Window) -> Result<OlsFit> {
    fit_return_model_with(excess, window, Confidence::TwoSided)
}

pub fn fit_return_model_with(
    excess: &ExcessSeries,
    window: Window,
    confidence: Confidence,
) -> Result<OlsFit> {
    let (x, y) = return_model_pairs(excess, window)?;
    ols2_tagged(&x, &y, confidence, ModelTag::Return, LOG_GROWTH_RESOLUTION)
}

/// Constant-rate bubble `p_t = a1 (1 + r_hat)^t + b1` fitted on a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalFit {
    pub r_hat: f64,
    pub a1: f64,
    pub b1: f64,
    /// Confidence interval for `r_hat`, mapped from the log-slope interval.
    pub r_hat_lower: f64,
    pub r_hat_upper: f64,
    pub fit: OlsFit,
}

impl RationalFit {
    /// Whether the whole interval for `r_hat` lies above `rate`.
    pub fn exceeds_rate(&self, rate: f64) -> bool {
        self.r_hat_lower > rate
    }
}

pub fn fit_rational_bubble(prices: &PriceSeries, window: Window, b1: f64) -> Result<RationalFit> {
    fit_rational_bubble_with(prices, window, b1, Confidence::TwoSided)
}

/// Regresses `ln(p_t - b1)` on absolute time `t`; slope maps to
/// `r_hat = e^slope - 1` and intercept to `a1 = e^intercept`.
pub fn fit_rational_bubble_with(
    prices: &PriceSeries,
    window: Window,
    b1: f64,
    confidence: Confidence,
) -> Result<RationalFit> {
    let values = prices.window(window)?;
    if let Some(i) = values.iter().position(|&p| !(p > b1)) {
        return Err(Error::NonPositiveExcess {
            index: window.start + i as i64,
        });
    }
    let t: Vec<f64> = (window.start..=window.end).map(|t| t as f64).collect();
    let y: Vec<f64> = values.iter().map(|p| (p - b1).ln()).collect();
    let fit = ols2_tagged(
        &t,
        &y,
        confidence,
        ModelTag::Rational,
        LOG_GROWTH_RESOLUTION,
    )?;
    let q = confidence.critical_value(fit.df)?;
    Ok(RationalFit {
        r_hat: fit.b.exp_m1(),
        a1: fit.a.exp(),
        b1,
        r_hat_lower: fit.b_lower.exp_m1(),
        r_hat_upper: (fit.b + q * fit.se_b).exp_m1(),
        fit,
    })
}
