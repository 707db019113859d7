use serde::{Deserialize, Serialize};

use super::tdist::t_quantile;
use crate::error::{Error, Result};

/// Which regression produced a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    /// Plain `y = a + b x`.
    Linear,
    /// Log growth of the excess price against the lagged excess price.
    Price,
    /// Log growth against the lagged log growth.
    Return,
    /// `ln(p_t - b1)` against `t`.
    Rational,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Linear => "linear",
            ModelTag::Price => "price",
            ModelTag::Return => "return",
            ModelTag::Rational => "rational",
        }
    }
}

/// How the lower confidence bounds are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    /// Lower end of the two-sided 95% interval: `t(0.975, df)`.
    #[default]
    TwoSided,
    /// One-sided 95% lower bound: `t(0.95, df)`.
    OneSided,
}

impl Confidence {
    pub fn quantile_level(self) -> f64 {
        match self {
            Confidence::TwoSided => 0.975,
            Confidence::OneSided => 0.95,
        }
    }

    pub fn critical_value(self, df: usize) -> Result<f64> {
        let df = u32::try_from(df).map_err(|_| Error::Domain(format!("df {df} too large")))?;
        t_quantile(self.quantile_level(), df)
    }
}

impl std::str::FromStr for Confidence {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "two-sided" => Ok(Confidence::TwoSided),
            "one-sided" => Ok(Confidence::OneSided),
            other => Err(format!("expected two-sided or one-sided, got `{other}`")),
        }
    }
}

/// A two-parameter least-squares fit `y = a + b x` with inference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub model: ModelTag,
    pub a: f64,
    pub b: f64,
    pub se_a: f64,
    pub se_b: f64,
    pub a_lower: f64,
    pub b_lower: f64,
    pub n: usize,
    pub df: usize,
    pub r2: f64,
    pub ssr: f64,
    pub confidence: Confidence,
}

impl OlsFit {
    /// Exact fit: zero residual sum of squares, so both bounds equal the estimates.
    pub fn is_perfect(&self) -> bool {
        self.ssr == 0.0
    }

    /// `b / se_b`; infinite for a perfect fit with nonzero slope.
    pub fn t_b(&self) -> f64 {
        self.b / self.se_b
    }

    pub fn t_a(&self) -> f64 {
        self.a / self.se_a
    }

    /// Both lower bounds strictly positive.
    pub fn jointly_significant(&self) -> bool {
        self.a_lower > 0.0 && self.b_lower > 0.0
    }

    fn tagged(mut self, model: ModelTag) -> Self {
        self.model = model;
        self
    }
}

pub fn ols2(x: &[f64], y: &[f64]) -> Result<OlsFit> {
    ols2_with(x, y, Confidence::TwoSided)
}

pub fn ols2_with(x: &[f64], y: &[f64], confidence: Confidence) -> Result<OlsFit> {
    ols2_floored(x, y, confidence, 0.0)
}

/// OLS where the residual standard deviation is not allowed below
/// `resid_sd_floor`, the resolution at which `y` is known.
pub(crate) fn ols2_floored(
    x: &[f64],
    y: &[f64],
    confidence: Confidence,
    resid_sd_floor: f64,
) -> Result<OlsFit> {
    if x.len() != y.len() {
        return Err(Error::Domain(format!(
            "x and y lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    let nf = n as f64;
    let x_mean = x.iter().sum::<f64>() / nf;
    let y_mean = y.iter().sum::<f64>() / nf;

    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - x_mean;
        let dy = yi - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // Spread at the level of a few ulps is rounding, not variation.
    let x_scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let x_resolution = 64.0 * f64::EPSILON * x_scale;
    if !(sxx > nf * x_resolution * x_resolution) {
        return Err(Error::DegenerateRegressor);
    }

    let b = sxy / sxx;
    let a = y_mean - b * x_mean;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let e = yi - a - b * xi;
            e * e
        })
        .sum();

    let df = n - 2;
    let s2 = (ssr / df as f64).max(resid_sd_floor * resid_sd_floor);
    let se_b = (s2 / sxx).sqrt();
    let se_a = (s2 * (1.0 / nf + x_mean * x_mean / sxx)).sqrt();
    let q = confidence.critical_value(df)?;
    let r2 = if syy > 0.0 {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };

    Ok(OlsFit {
        model: ModelTag::Linear,
        a,
        b,
        se_a,
        se_b,
        a_lower: a - q * se_a,
        b_lower: b - q * se_b,
        n,
        df,
        r2,
        ssr,
        confidence,
    })
}

pub(crate) fn ols2_tagged(
    x: &[f64],
    y: &[f64],
    confidence: Confidence,
    model: ModelTag,
    resid_sd_floor: f64,
) -> Result<OlsFit> {
    ols2_floored(x, y, confidence, resid_sd_floor).map(|f| f.tagged(model))
}
