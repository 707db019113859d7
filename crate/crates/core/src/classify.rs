//! Bubble taxonomy: erratic, too short, constant-rate, or anchored on price
//! versus return, decided from the two models' significance surfaces.

use serde::{Deserialize, Serialize};

use crate::series::{excess_series, ExperimentParams, PriceSeries, Window, MIN_WINDOW};
use crate::stats::{fit_rational_bubble_with, Confidence, RationalFit};
use crate::sweep::{
    significant_fraction, sweep, sweep_serial, FeedbackModel, SweepBounds, SweepGrid, SweepOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BubbleLabel {
    Erratic,
    TooShort,
    RationalExponential,
    AnchoringOnPrice,
    AnchoringOnReturn,
}

impl BubbleLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            BubbleLabel::Erratic => "erratic",
            BubbleLabel::TooShort => "too_short",
            BubbleLabel::RationalExponential => "rational_exponential",
            BubbleLabel::AnchoringOnPrice => "anchoring_on_price",
            BubbleLabel::AnchoringOnReturn => "anchoring_on_return",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            BubbleLabel::Erratic => "erratic (no bubble)",
            BubbleLabel::TooShort => "bubble too short for analysis",
            BubbleLabel::RationalExponential => "rational (exponential) bubble",
            BubbleLabel::AnchoringOnPrice => "anchoring on price",
            BubbleLabel::AnchoringOnReturn => "anchoring on return",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Minimum significant fraction for either anchoring label.
    pub theta: f64,
    pub min_window: usize,
    pub confidence: Confidence,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            theta: 0.1,
            min_window: MIN_WINDOW,
            confidence: Confidence::TwoSided,
        }
    }
}

impl Thresholds {
    fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            min_window: self.min_window,
            confidence: self.confidence,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub cells: usize,
    pub valid: usize,
    pub significant: usize,
    /// Window with the largest `b_lower` among valid cells.
    pub best_window: Option<Window>,
    pub best_b_lower: Option<f64>,
}

impl GridSummary {
    pub fn of(grid: &SweepGrid) -> Self {
        let best = grid
            .valid_fits()
            .max_by(|a, b| a.1.b_lower.total_cmp(&b.1.b_lower));
        Self {
            cells: grid.cells.len(),
            valid: grid.valid_count(),
            significant: grid
                .valid_fits()
                .filter(|(_, f)| f.jointly_significant())
                .count(),
            best_window: best.map(|(w, _)| *w),
            best_b_lower: best.map(|(_, f)| f.b_lower),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BubbleVerdict {
    pub label: BubbleLabel,
    pub price_fraction: f64,
    pub return_fraction: f64,
    pub bubble_window: Option<Window>,
    pub rational_fit: Option<RationalFit>,
    pub price_grid: Option<GridSummary>,
    pub return_grid: Option<GridSummary>,
    pub thresholds: Thresholds,
}

impl BubbleVerdict {
    fn without_sweep(label: BubbleLabel, window: Option<Window>, thresholds: Thresholds) -> Self {
        Self {
            label,
            price_fraction: 0.0,
            return_fraction: 0.0,
            bubble_window: window,
            rational_fit: None,
            price_grid: None,
            return_grid: None,
            thresholds,
        }
    }

    pub fn summary_line(&self) -> String {
        let window = self
            .bubble_window
            .map_or_else(|| "none".to_string(), |w| format!("{}..{}", w.start, w.end));
        format!(
            "{} (window {window}, price fraction {:.2}, return fraction {:.2})",
            self.label.describe(),
            self.price_fraction,
            self.return_fraction
        )
    }
}

/// Longest run of strictly positive excess price that ends above where it
/// started; ties go to the earliest run.
pub fn detect_bubble_window(
    prices: &PriceSeries,
    params: &ExperimentParams,
    min_window: usize,
) -> Option<Window> {
    let excess = excess_series(prices, params);
    let v = excess.values();
    let mut best: Option<(usize, usize)> = None;
    let mut i = 0;
    while i < v.len() {
        if v[i] > 0.0 {
            let mut j = i;
            while j + 1 < v.len() && v[j + 1] > 0.0 {
                j += 1;
            }
            let len = j - i + 1;
            if len >= min_window && v[j] > v[i] && best.is_none_or(|(a, b)| len > b - a + 1) {
                best = Some((i, j));
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    best.map(|(a, b)| Window {
        start: prices.t0() + a as i64,
        end: prices.t0() + b as i64,
    })
}

pub fn classify_series(
    prices: &PriceSeries,
    params: &ExperimentParams,
    thresholds: &Thresholds,
) -> BubbleVerdict {
    match detect_bubble_window(prices, params, thresholds.min_window) {
        None => BubbleVerdict::without_sweep(BubbleLabel::Erratic, None, *thresholds),
        Some(w) => classify_window_impl(prices, params, w, thresholds, true),
    }
}

/// Classifies a caller-chosen bubble window, skipping detection.
pub fn classify_window(
    prices: &PriceSeries,
    params: &ExperimentParams,
    window: Window,
    thresholds: &Thresholds,
) -> BubbleVerdict {
    classify_window_impl(prices, params, window, thresholds, true)
}

/// Same as [`classify_series`] without nested parallelism; for Monte Carlo
/// loops that parallelize across runs.
pub fn classify_series_serial(
    prices: &PriceSeries,
    params: &ExperimentParams,
    thresholds: &Thresholds,
) -> BubbleVerdict {
    match detect_bubble_window(prices, params, thresholds.min_window) {
        None => BubbleVerdict::without_sweep(BubbleLabel::Erratic, None, *thresholds),
        Some(w) => classify_window_impl(prices, params, w, thresholds, false),
    }
}

fn classify_window_impl(
    prices: &PriceSeries,
    params: &ExperimentParams,
    window: Window,
    thresholds: &Thresholds,
    parallel: bool,
) -> BubbleVerdict {
    if window.len() < (thresholds.min_window + 2) as i64 {
        return BubbleVerdict::without_sweep(BubbleLabel::TooShort, Some(window), *thresholds);
    }
    let excess = excess_series(prices, params);
    let bounds = SweepBounds::over(window);
    let opts = thresholds.sweep_options();
    let run = |model| {
        if parallel {
            sweep(&excess, model, bounds, opts)
        } else {
            sweep_serial(&excess, model, bounds, opts)
        }
    };
    let price_grid = run(FeedbackModel::Price);
    let return_grid = run(FeedbackModel::Return);
    let price_fraction = significant_fraction(&price_grid).unwrap_or(0.0);
    let return_fraction = significant_fraction(&return_grid).unwrap_or(0.0);

    let label = if price_fraction < thresholds.theta && return_fraction < thresholds.theta {
        BubbleLabel::RationalExponential
    } else if price_fraction >= return_fraction {
        BubbleLabel::AnchoringOnPrice
    } else {
        BubbleLabel::AnchoringOnReturn
    };

    BubbleVerdict {
        label,
        price_fraction,
        return_fraction,
        bubble_window: Some(window),
        rational_fit: fit_rational_bubble_with(
            prices,
            window,
            params.fundamental(),
            thresholds.confidence,
        )
        .ok(),
        price_grid: Some(GridSummary::of(&price_grid)),
        return_grid: Some(GridSummary::of(&return_grid)),
        thresholds: *thresholds,
    }
}

/// Bubble windows reported for the six experimental groups, for use with
/// the original data set. `None` marks the group without a bubble.
pub const REFERENCE_WINDOWS: [(u8, Option<(i64, i64)>); 6] = [
    (1, None),
    (2, Some((7, 26))),
    (3, Some((7, 29))),
    (4, Some((7, 21))),
    (5, Some((29, 37))),
    (6, Some((23, 29))),
];
