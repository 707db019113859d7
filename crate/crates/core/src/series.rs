//! Market constants, price/excess/return series, calibration windows and the
//! `t,price[,h1..hH]` CSV format.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible calibration window, in price points.
///
/// Five prices give four log-returns; the return model then has three pairs
/// and every two-parameter fit keeps at least one residual degree of freedom.
pub const MIN_WINDOW: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentParams {
    /// Interest rate per period.
    pub r: f64,
    /// Dividend per period.
    pub dividend: f64,
    /// Number of forecasters in the group.
    pub traders: usize,
    pub p_min: f64,
    pub p_max: f64,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        Self {
            r: 0.05,
            dividend: 3.0,
            traders: 6,
            p_min: 0.0,
            p_max: 1000.0,
        }
    }
}

impl ExperimentParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.r > 0.0) || !self.r.is_finite() {
            return bad(format!("interest rate must be positive, got {}", self.r));
        }
        if !(self.dividend >= 0.0) || !self.dividend.is_finite() {
            return bad(format!(
                "dividend must be non-negative, got {}",
                self.dividend
            ));
        }
        if self.traders == 0 {
            return bad("trader count must be at least 1".into());
        }
        if !(self.p_min < self.p_max) || !self.p_min.is_finite() || !self.p_max.is_finite() {
            return bad(format!(
                "price bounds must satisfy p_min < p_max, got [{}, {}]",
                self.p_min, self.p_max
            ));
        }
        let pf = self.dividend / self.r;
        if pf < self.p_min || pf > self.p_max {
            return bad(format!(
                "fundamental price {pf} outside [{}, {}]",
                self.p_min, self.p_max
            ));
        }
        Ok(())
    }

    /// The fundamental price `D / r`. Assumes validated parameters.
    pub fn fundamental(&self) -> f64 {
        self.dividend / self.r
    }

    pub fn clamp(&self, price: f64) -> f64 {
        price.clamp(self.p_min, self.p_max)
    }

    pub fn contains(&self, price: f64) -> bool {
        price >= self.p_min && price <= self.p_max
    }
}

/// Discounted-dividend equilibrium price `D / r`.
pub fn fundamental_price(params: &ExperimentParams) -> Result<f64> {
    if !(params.r > 0.0) {
        return Err(Error::InvalidParams(format!(
            "interest rate must be positive, got {}",
            params.r
        )));
    }
    Ok(params.dividend / params.r)
}

/// Realized prices on a contiguous integer time index starting at `t0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    t0: i64,
    values: Vec<f64>,
}

impl PriceSeries {
    pub fn new(t0: i64, values: Vec<f64>, params: &ExperimentParams) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooFewPoints { needed: 1, got: 0 });
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || !params.contains(v) {
                return Err(Error::InvalidParams(format!(
                    "price {v} at t={} outside [{}, {}]",
                    t0 + i as i64,
                    params.p_min,
                    params.p_max
                )));
            }
        }
        Ok(Self { t0, values })
    }

    pub fn t0(&self) -> i64 {
        self.t0
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last time index.
    pub fn t_end(&self) -> i64 {
        self.t0 + self.values.len() as i64 - 1
    }

    pub fn get(&self, t: i64) -> Option<f64> {
        index_of(self.t0, self.values.len(), t).map(|i| self.values[i])
    }

    /// Same prices on a shifted time axis.
    pub fn reindexed(&self, t0: i64) -> Self {
        Self {
            t0,
            values: self.values.clone(),
        }
    }

    pub fn window(&self, w: Window) -> Result<&[f64]> {
        slice_window(self.t0, &self.values, w)
    }
}

/// Excess prices `p_t - p^f`; may be negative outside bubble regimes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcessSeries {
    t0: i64,
    values: Vec<f64>,
}

impl ExcessSeries {
    pub fn new(t0: i64, values: Vec<f64>) -> Self {
        Self { t0, values }
    }

    pub fn t0(&self) -> i64 {
        self.t0
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t_end(&self) -> i64 {
        self.t0 + self.values.len() as i64 - 1
    }

    pub fn get(&self, t: i64) -> Option<f64> {
        index_of(self.t0, self.values.len(), t).map(|i| self.values[i])
    }

    pub fn window(&self, w: Window) -> Result<&[f64]> {
        slice_window(self.t0, &self.values, w)
    }

    /// Adds `fundamental` back to obtain price levels.
    pub fn to_prices(&self, fundamental: f64, params: &ExperimentParams) -> Result<PriceSeries> {
        PriceSeries::new(
            self.t0,
            self.values.iter().map(|v| v + fundamental).collect(),
            params,
        )
    }
}

pub fn excess_series(prices: &PriceSeries, params: &ExperimentParams) -> ExcessSeries {
    let pf = params.fundamental();
    ExcessSeries {
        t0: prices.t0,
        values: prices.values.iter().map(|p| p - pf).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnKind {
    /// `p_t / p_{t-1} - 1`
    Discrete,
    /// `ln(pbar_t / pbar_{t-1})`
    LogExcess,
}

/// Returns indexed by the time of their right endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub t0: i64,
    pub kind: ReturnKind,
    pub values: Vec<f64>,
}

pub fn discrete_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    simple_returns(prices.t0, &prices.values)
}

/// Discrete returns of the excess price itself, `pbar_t / pbar_{t-1} - 1`.
pub fn discrete_excess_returns(excess: &ExcessSeries) -> Result<ReturnSeries> {
    simple_returns(excess.t0, &excess.values)
}

fn simple_returns(t0: i64, values: &[f64]) -> Result<ReturnSeries> {
    if let Some(i) = values.iter().position(|&p| !(p > 0.0)) {
        return Err(Error::Domain(format!(
            "discrete returns need positive values; got {} at t={}",
            values[i],
            t0 + i as i64
        )));
    }
    Ok(ReturnSeries {
        t0: t0 + 1,
        kind: ReturnKind::Discrete,
        values: values.windows(2).map(|w| w[1] / w[0] - 1.0).collect(),
    })
}

pub fn log_excess_returns(excess: &ExcessSeries) -> Result<ReturnSeries> {
    Ok(ReturnSeries {
        t0: excess.t0 + 1,
        kind: ReturnKind::LogExcess,
        values: log_growth(excess.t0, &excess.values)?,
    })
}

/// `ln(v[i+1] / v[i])` for a slice starting at time `t0`; errors on the
/// first non-positive value.
pub(crate) fn log_growth(t0: i64, values: &[f64]) -> Result<Vec<f64>> {
    if let Some(i) = values.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveExcess {
            index: t0 + i as i64,
        });
    }
    Ok(values.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

/// One point of the next-return versus current-return diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    /// Time of the current return.
    pub t: i64,
    pub current: f64,
    pub next: f64,
}

impl ScatterPoint {
    /// Signed distance above the constant-growth diagonal.
    pub fn above_diagonal(&self) -> f64 {
        self.next - self.current
    }
}

/// Pairs each return with its successor; points above the diagonal mark
/// accelerating growth.
pub fn return_scatter(returns: &ReturnSeries) -> Vec<ScatterPoint> {
    returns
        .values
        .windows(2)
        .enumerate()
        .map(|(i, w)| ScatterPoint {
            t: returns.t0 + i as i64,
            current: w[0],
            next: w[1],
        })
        .collect()
}

/// Inclusive `[start, end]` range of time indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Window {
    pub start: i64,
    pub end: i64,
}

impl Window {
    pub fn new(start: i64, end: i64, min_window: usize) -> Result<Self> {
        let w = Self { start, end };
        if w.len() < min_window as i64 {
            return Err(Error::TooFewPoints {
                needed: min_window,
                got: w.len().max(0) as usize,
            });
        }
        Ok(w)
    }

    /// Number of price points covered (may be non-positive for an inverted pair).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> i64 {
        self.end - self.start + 1
    }

    pub fn contains(&self, t: i64) -> bool {
        t >= self.start && t <= self.end
    }
}

fn index_of(t0: i64, len: usize, t: i64) -> Option<usize> {
    let i = t.checked_sub(t0)?;
    (i >= 0 && (i as usize) < len).then_some(i as usize)
}

fn slice_window(t0: i64, values: &[f64], w: Window) -> Result<&[f64]> {
    let last = t0 + values.len() as i64 - 1;
    if w.start < t0 || w.end > last || w.end < w.start {
        return Err(Error::WindowOutOfRange {
            start: w.start,
            end: w.end,
            first: t0,
            last,
        });
    }
    let lo = (w.start - t0) as usize;
    let hi = (w.end - t0) as usize;
    Ok(&values[lo..=hi])
}

/// A price series plus the per-trader forecast columns that formed it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub prices: PriceSeries,
    /// `forecasts[h][i]` is trader `h`'s forecast entering the price at row `i`.
    pub forecasts: Option<Vec<Vec<f64>>>,
}

pub fn load_csv(path: impl AsRef<Path>, params: &ExperimentParams) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, params)
}

pub fn read_csv<R: Read>(reader: R, params: &ExperimentParams) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr.headers()?.clone();
    let names: Vec<&str> = headers.iter().collect();
    if names.len() < 2 || names[0] != "t" || names[1] != "price" {
        return Err(Error::Malformed {
            line: 1,
            msg: format!(
                "header must start with `t,price`, got `{}`",
                names.join(",")
            ),
        });
    }
    let traders = names.len() - 2;
    for (h, name) in names[2..].iter().enumerate() {
        if *name != format!("h{}", h + 1) {
            return Err(Error::Malformed {
                line: 1,
                msg: format!(
                    "forecast column {} must be named h{}, got `{name}`",
                    h + 3,
                    h + 1
                ),
            });
        }
    }

    let mut t0 = None;
    let mut prev: Option<i64> = None;
    let mut prices = Vec::new();
    let mut forecasts = vec![Vec::new(); traders];

    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != names.len() {
            return Err(Error::Malformed {
                line,
                msg: format!("expected {} fields, got {}", names.len(), record.len()),
            });
        }
        let t: i64 = record[0].parse().map_err(|_| Error::Malformed {
            line,
            msg: format!("bad time index `{}`", &record[0]),
        })?;
        let parse = |field: &str, what: &str| -> Result<f64> {
            field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Malformed {
                    line,
                    msg: format!("bad {what} `{field}`"),
                })
        };
        let price = parse(&record[1], "price")?;
        if let Some(p) = prev {
            if t != p + 1 {
                return Err(Error::NonContiguous {
                    line,
                    expected_prev: p,
                    found: t,
                });
            }
        }
        if !params.contains(price) {
            return Err(Error::OutOfRange {
                line,
                value: price,
                min: params.p_min,
                max: params.p_max,
            });
        }
        for (h, col) in forecasts.iter_mut().enumerate() {
            col.push(parse(&record[h + 2], "forecast")?);
        }
        t0.get_or_insert(t);
        prev = Some(t);
        prices.push(price);
    }

    let Some(t0) = t0 else {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    };
    Ok(Dataset {
        prices: PriceSeries { t0, values: prices },
        forecasts: (traders > 0).then_some(forecasts),
    })
}

/// Writes `t,price[,h1..hH]` with shortest round-trip decimal formatting.
pub fn write_csv<W: Write>(
    writer: W,
    prices: &PriceSeries,
    forecasts: Option<&[Vec<f64>]>,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let traders = forecasts.map_or(0, |f| f.len());
    let mut header = vec!["t".to_string(), "price".to_string()];
    header.extend((1..=traders).map(|h| format!("h{h}")));
    wtr.write_record(&header)?;

    for (i, p) in prices.values.iter().enumerate() {
        let mut row = vec![(prices.t0 + i as i64).to_string(), p.to_string()];
        if let Some(f) = forecasts {
            row.extend(f.iter().map(|col| col[i].to_string()));
        }
        wtr.write_record(&row)?;
    }
    wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}
