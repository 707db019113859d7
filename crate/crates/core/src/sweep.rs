//! Triangular sweep of a feedback model over every admissible
//! `[start, end]` calibration window.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{ExcessSeries, Window};
use crate::stats::{fit_price_model_with, fit_return_model_with, Confidence, ModelTag, OlsFit};

/// Which feedback regression a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackModel {
    Price,
    Return,
}

impl FeedbackModel {
    pub fn tag(self) -> ModelTag {
        match self {
            FeedbackModel::Price => ModelTag::Price,
            FeedbackModel::Return => ModelTag::Return,
        }
    }

    pub fn fit(
        self,
        excess: &ExcessSeries,
        window: Window,
        confidence: Confidence,
    ) -> Result<OlsFit> {
        match self {
            FeedbackModel::Price => fit_price_model_with(excess, window, confidence),
            FeedbackModel::Return => fit_return_model_with(excess, window, confidence),
        }
    }
}

/// Why a cell has no fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellError {
    NonPositiveExcess,
    TooFewPoints,
    DegenerateRegressor,
    OutOfSeries,
    Numerical,
}

impl CellError {
    pub fn as_str(self) -> &'static str {
        match self {
            CellError::NonPositiveExcess => "NonPositiveExcess",
            CellError::TooFewPoints => "TooFewPoints",
            CellError::DegenerateRegressor => "DegenerateRegressor",
            CellError::OutOfSeries => "OutOfSeries",
            CellError::Numerical => "Numerical",
        }
    }
}

impl From<&Error> for CellError {
    fn from(e: &Error) -> Self {
        match e {
            Error::NonPositiveExcess { .. } => CellError::NonPositiveExcess,
            Error::TooFewPoints { .. } => CellError::TooFewPoints,
            Error::DegenerateRegressor => CellError::DegenerateRegressor,
            Error::WindowOutOfRange { .. } => CellError::OutOfSeries,
            _ => CellError::Numerical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Cell {
    Valid { fit: OlsFit },
    Invalid { error: CellError },
}

impl Cell {
    pub fn fit(&self) -> Option<&OlsFit> {
        match self {
            Cell::Valid { fit } => Some(fit),
            Cell::Invalid { .. } => None,
        }
    }
}

/// Inclusive ranges for window starts and ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepBounds {
    pub start_min: i64,
    pub start_max: i64,
    pub end_min: i64,
    pub end_max: i64,
}

impl SweepBounds {
    /// Starts and ends both ranging over `window`.
    pub fn over(window: Window) -> Self {
        Self {
            start_min: window.start,
            start_max: window.end,
            end_min: window.start,
            end_max: window.end,
        }
    }

    /// Every admissible window, ordered by `(start, end)`.
    pub fn windows(&self, min_window: usize) -> Vec<Window> {
        let mut out = Vec::new();
        for start in self.start_min..=self.start_max {
            let lo = self.end_min.max(start + min_window as i64 - 1);
            for end in lo..=self.end_max {
                out.push(Window { start, end });
            }
        }
        out
    }

    /// Closed-form count of admissible windows.
    pub fn admissible_count(&self, min_window: usize) -> usize {
        let span = min_window as i64 - 1;
        (self.start_min..=self.start_max)
            .map(|s| (self.end_max - self.end_min.max(s + span) + 1).max(0) as usize)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub min_window: usize,
    pub confidence: Confidence,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            min_window: crate::series::MIN_WINDOW,
            confidence: Confidence::TwoSided,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub model: FeedbackModel,
    pub bounds: SweepBounds,
    pub options: SweepOptions,
    pub cells: BTreeMap<Window, Cell>,
}

impl SweepGrid {
    pub fn valid_count(&self) -> usize {
        self.cells.values().filter(|c| c.fit().is_some()).count()
    }

    pub fn valid_fits(&self) -> impl Iterator<Item = (&Window, &OlsFit)> {
        self.cells
            .iter()
            .filter_map(|(w, c)| c.fit().map(|f| (w, f)))
    }

    /// Tally of invalid cells by reason.
    pub fn error_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for c in self.cells.values() {
            if let Cell::Invalid { error } = c {
                *out.entry(error.as_str()).or_insert(0) += 1;
            }
        }
        out
    }

    /// Long-format CSV, one row per cell.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record([
            "model",
            "start",
            "end",
            "a",
            "b",
            "se_a",
            "se_b",
            "a_lower",
            "b_lower",
            "n",
            "r2",
            "valid",
            "error_kind",
        ])?;
        let model = self.model.tag().as_str();
        for (w, cell) in &self.cells {
            let row: Vec<String> = match cell {
                Cell::Valid { fit } => vec![
                    model.into(),
                    w.start.to_string(),
                    w.end.to_string(),
                    fmt17(fit.a),
                    fmt17(fit.b),
                    fmt17(fit.se_a),
                    fmt17(fit.se_b),
                    fmt17(fit.a_lower),
                    fmt17(fit.b_lower),
                    fit.n.to_string(),
                    fmt17(fit.r2),
                    "true".into(),
                    String::new(),
                ],
                Cell::Invalid { error } => {
                    let mut r = vec![model.into(), w.start.to_string(), w.end.to_string()];
                    r.extend(std::iter::repeat_n(String::new(), 8));
                    r.push("false".into());
                    r.push(error.as_str().into());
                    r
                }
            };
            wtr.write_record(&row)?;
        }
        wtr.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Fits one cell from scratch.
pub fn evaluate_cell(
    excess: &ExcessSeries,
    model: FeedbackModel,
    window: Window,
    confidence: Confidence,
) -> Cell {
    match model.fit(excess, window, confidence) {
        Ok(fit) => Cell::Valid { fit },
        Err(e) => Cell::Invalid { error: (&e).into() },
    }
}

/// Evaluates every admissible window in `bounds`; cells are independent and
/// computed in parallel.
pub fn sweep(
    excess: &ExcessSeries,
    model: FeedbackModel,
    bounds: SweepBounds,
    options: SweepOptions,
) -> SweepGrid {
    let cells = bounds
        .windows(options.min_window)
        .into_par_iter()
        .map(|w| (w, evaluate_cell(excess, model, w, options.confidence)))
        .collect();
    SweepGrid {
        model,
        bounds,
        options,
        cells,
    }
}

/// Serial variant, for callers already running many sweeps in parallel.
pub fn sweep_serial(
    excess: &ExcessSeries,
    model: FeedbackModel,
    bounds: SweepBounds,
    options: SweepOptions,
) -> SweepGrid {
    let cells = bounds
        .windows(options.min_window)
        .into_iter()
        .map(|w| (w, evaluate_cell(excess, model, w, options.confidence)))
        .collect();
    SweepGrid {
        model,
        bounds,
        options,
        cells,
    }
}

/// `true` where both lower bounds are strictly positive; invalid cells are `false`.
pub fn significance_mask(grid: &SweepGrid) -> BTreeMap<Window, bool> {
    grid.cells
        .iter()
        .map(|(w, c)| (*w, c.fit().is_some_and(OlsFit::jointly_significant)))
        .collect()
}

/// Share of valid cells that are jointly significant.
pub fn significant_fraction(grid: &SweepGrid) -> Result<f64> {
    let valid = grid.valid_count();
    if valid == 0 {
        return Err(Error::NoValidCells);
    }
    let hits = grid
        .valid_fits()
        .filter(|(_, f)| f.jointly_significant())
        .count();
    Ok(hits as f64 / valid as f64)
}
