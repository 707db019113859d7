//! Least squares with Student-t confidence bounds, and the model fits built on it.

mod models;
mod ols;
mod tdist;

pub use models::{
    fit_price_model, fit_price_model_with, fit_rational_bubble, fit_rational_bubble_with,
    fit_return_model, fit_return_model_with, price_model_pairs, return_model_pairs, RationalFit,
    LOG_GROWTH_RESOLUTION,
};
pub use ols::{ols2, ols2_with, Confidence, ModelTag, OlsFit};
pub use tdist::{inc_beta, ln_gamma, t_cdf, t_quantile};
