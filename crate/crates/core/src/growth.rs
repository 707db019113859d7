//! Generative iteration of the exponential, price-feedback and
//! return-feedback bubble maps on the excess price.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::ExcessSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum GrowthModel {
    /// Constant log growth `a1`.
    Exponential { a1: f64 },
    /// Log growth `a2 + b2 * pbar_{t-1}`.
    PriceFeedback { a2: f64, b2: f64 },
    /// Log growth `g_t = a3 + b3 * g_{t-1}`, starting from `g0`.
    ReturnFeedback { a3: f64, b3: f64, g0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub model: GrowthModel,
    /// Initial excess price, must be positive.
    pub initial_excess: f64,
}

impl ModelParams {
    pub fn new(model: GrowthModel, initial_excess: f64) -> Result<Self> {
        let p = Self {
            model,
            initial_excess,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.initial_excess > 0.0) || !self.initial_excess.is_finite() {
            return Err(Error::InvalidParams(format!(
                "initial excess price must be positive, got {}",
                self.initial_excess
            )));
        }
        let finite = match self.model {
            GrowthModel::Exponential { a1 } => a1.is_finite(),
            GrowthModel::PriceFeedback { a2, b2 } => a2.is_finite() && b2.is_finite(),
            GrowthModel::ReturnFeedback { a3, b3, g0 } => {
                a3.is_finite() && b3.is_finite() && g0.is_finite()
            }
        };
        if !finite {
            return Err(Error::InvalidParams(
                "model parameters must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// Iterates the noise-free map for `steps` steps; the result has `steps + 1`
/// points starting at `t = 0`.
pub fn iterate(params: &ModelParams, steps: usize) -> Result<ExcessSeries> {
    run(params, steps, || 0.0)
}

/// Like [`iterate`], with i.i.d. `N(0, sigma)` shocks added to each step's log
/// growth. For the return-feedback map the shock enters the growth state, so
/// the data follow the autoregression exactly up to the shock.
pub fn iterate_noisy<R: Rng + ?Sized>(
    params: &ModelParams,
    steps: usize,
    sigma: f64,
    rng: &mut R,
) -> Result<ExcessSeries> {
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidParams(format!("noise sigma {sigma}: {e}")))?;
    run(params, steps, || normal.sample(rng))
}

fn run(params: &ModelParams, steps: usize, mut shock: impl FnMut() -> f64) -> Result<ExcessSeries> {
    params.validate()?;
    let mut values = Vec::with_capacity(steps + 1);
    let mut p = params.initial_excess;
    values.push(p);
    let mut g = match params.model {
        GrowthModel::ReturnFeedback { g0, .. } => g0,
        _ => 0.0,
    };
    for t in 1..=steps {
        let growth = match params.model {
            GrowthModel::Exponential { a1 } => a1 + shock(),
            GrowthModel::PriceFeedback { a2, b2 } => a2 + b2 * p + shock(),
            GrowthModel::ReturnFeedback { a3, b3, .. } => {
                g = a3 + b3 * g + shock();
                g
            }
        };
        let next = p * growth.exp();
        if !next.is_finite() || next == 0.0 {
            return Err(Error::FiniteHorizonSingularity { last_finite: t - 1 });
        }
        p = next;
        values.push(p);
    }
    Ok(ExcessSeries::new(0, values))
}

/// One row of the exponential-versus-feedback comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub t: usize,
    pub exponential: f64,
    /// Whole-percent discrete growth; `None` for the first row.
    pub exponential_pct: Option<i64>,
    pub feedback: f64,
    pub feedback_pct: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSpec {
    pub a1: f64,
    pub a2: f64,
    pub b2: f64,
    pub initial_excess: f64,
    pub steps: usize,
}

impl Default for ComparisonSpec {
    /// Ten percent exponential growth against nine percent plus price
    /// feedback, both from an excess price of 60, over 23 steps.
    fn default() -> Self {
        Self {
            a1: 1.1f64.ln(),
            a2: 1.09f64.ln(),
            b2: 1e-4,
            initial_excess: 60.0,
            steps: 23,
        }
    }
}

pub fn comparison_table(spec: &ComparisonSpec) -> Result<Vec<ComparisonRow>> {
    let exp = iterate(
        &ModelParams::new(
            GrowthModel::Exponential { a1: spec.a1 },
            spec.initial_excess,
        )?,
        spec.steps,
    )?;
    let fb = iterate(
        &ModelParams::new(
            GrowthModel::PriceFeedback {
                a2: spec.a2,
                b2: spec.b2,
            },
            spec.initial_excess,
        )?,
        spec.steps,
    )?;
    let pct =
        |v: &[f64], t: usize| (t > 0).then(|| ((v[t] / v[t - 1] - 1.0) * 100.0).round() as i64);
    Ok((0..=spec.steps)
        .map(|t| ComparisonRow {
            t,
            exponential: exp.values()[t],
            exponential_pct: pct(exp.values(), t),
            feedback: fb.values()[t],
            feedback_pct: pct(fb.values(), t),
        })
        .collect())
}

/// The default 24-row table.
pub fn table2() -> Vec<ComparisonRow> {
    comparison_table(&ComparisonSpec::default()).expect("default comparison parameters are valid")
}

/// First `t` at which the feedback path exceeds the exponential one.
pub fn crossover(rows: &[ComparisonRow]) -> Option<usize> {
    rows.iter()
        .find(|r| r.feedback > r.exponential)
        .map(|r| r.t)
}

/// Renders the table as CSV, prices at two decimals and growth as whole percents.
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("t,exponential,exponential_pct,feedback,feedback_pct\n");
    let pct = |p: Option<i64>| p.map_or_else(|| "--".to_string(), |v| format!("{v}%"));
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.2},{},{:.2},{}",
            r.t,
            r.exponential,
            pct(r.exponential_pct),
            r.feedback,
            pct(r.feedback_pct)
        );
    }
    out
}
