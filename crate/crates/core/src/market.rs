//! Learning-to-forecast market: agents submit two-period-ahead forecasts,
//! the price clears at the discounted mean forecast plus dividend, and each
//! forecast is paid by a quadratic scoring rule once its target is realized.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{write_csv, ExperimentParams, PriceSeries};

/// Identifier of the random source, stored with every result.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.9+rand_distr-0.5-normal";

/// Forecasting rule of a single agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AgentSpec {
    Fundamentalist,
    /// `a1 (1 + r_hat)^(t+1) + b1`
    RationalBubble {
        r_hat: f64,
        a1: f64,
        b1: f64,
    },
    /// Extrapolates the price-anchored log growth two steps.
    PriceAnchor {
        a2: f64,
        b2: f64,
    },
    /// Extrapolates the return-anchored log growth two steps.
    ReturnAnchor {
        a3: f64,
        b3: f64,
    },
    /// Last observed price.
    Naive,
    /// Fundamental price plus `N(0, sigma)`.
    Noise {
        sigma: f64,
    },
}

impl AgentSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            AgentSpec::Fundamentalist | AgentSpec::Naive => true,
            AgentSpec::RationalBubble { r_hat, a1, b1 } => {
                r_hat.is_finite() && a1.is_finite() && b1.is_finite() && r_hat > -1.0
            }
            AgentSpec::PriceAnchor { a2, b2 } => a2.is_finite() && b2.is_finite(),
            AgentSpec::ReturnAnchor { a3, b3 } => a3.is_finite() && b3.is_finite(),
            AgentSpec::Noise { sigma } => sigma.is_finite() && sigma >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "invalid agent parameters: {self:?}"
            )))
        }
    }

    fn min_history(&self) -> usize {
        match self {
            AgentSpec::ReturnAnchor { .. } | AgentSpec::Naive => 2,
            _ => 1,
        }
    }
}

/// Quadratic scoring rule: `max(max_payoff - scale * err^2, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardRule {
    pub max_payoff: f64,
    pub scale: f64,
}

impl Default for RewardRule {
    fn default() -> Self {
        Self {
            max_payoff: 1300.0,
            scale: 1300.0 / 49.0,
        }
    }
}

pub fn score_forecast(realized: f64, forecast: f64, rule: &RewardRule) -> f64 {
    let err = realized - forecast;
    (rule.max_payoff - rule.scale * err * err).max(0.0)
}

/// `(mean(forecasts) + D) / (1 + r)`, clamped to the admissible range.
pub fn clearing_price(forecasts: &[f64], params: &ExperimentParams) -> Result<f64> {
    if forecasts.len() != params.traders {
        return Err(Error::WrongForecastCount {
            expected: params.traders,
            got: forecasts.len(),
        });
    }
    let mean = forecasts.iter().sum::<f64>() / forecasts.len() as f64;
    Ok(params.clamp((mean + params.dividend) / (1.0 + params.r)))
}

/// Forecast for `t + 1` from prices observed through `t - 1`.
///
/// `history` holds those prices, oldest first, and `t` is the current period.
/// Every result is clamped to the admissible price range.
pub fn agent_forecast<R: Rng + ?Sized>(
    spec: &AgentSpec,
    history: &[f64],
    t: i64,
    params: &ExperimentParams,
    rng: &mut R,
) -> Result<f64> {
    let needed = spec.min_history();
    if history.len() < needed {
        return Err(Error::InsufficientHistory {
            needed,
            got: history.len(),
        });
    }
    let pf = params.fundamental();
    let last = history[history.len() - 1];
    let raw = match *spec {
        AgentSpec::Fundamentalist => pf,
        AgentSpec::RationalBubble { r_hat, a1, b1 } => a1 * (1.0 + r_hat).powf((t + 1) as f64) + b1,
        AgentSpec::PriceAnchor { a2, b2 } => {
            let excess = last - pf;
            if excess > 0.0 {
                pf + excess * (2.0 * (a2 + b2 * excess)).exp()
            } else {
                pf
            }
        }
        AgentSpec::ReturnAnchor { a3, b3 } => {
            let excess = last - pf;
            let before = history[history.len() - 2] - pf;
            if excess > 0.0 && before > 0.0 {
                let g1 = a3 + b3 * (excess / before).ln();
                let g2 = a3 + b3 * g1;
                pf + excess * (g1 + g2).exp()
            } else {
                pf
            }
        }
        AgentSpec::Naive => last,
        AgentSpec::Noise { sigma } => {
            if sigma > 0.0 {
                pf + Normal::new(0.0, sigma)
                    .map_err(|e| Error::InvalidConfig(e.to_string()))?
                    .sample(rng)
            } else {
                pf
            }
        }
    };
    Ok(clamp_forecast(raw, params))
}

fn clamp_forecast(v: f64, params: &ExperimentParams) -> f64 {
    if v.is_nan() {
        params.fundamental()
    } else {
        params.clamp(v)
    }
}

/// Shifts the decimal point one place either way with probability `prob`.
pub fn inject_mistrade<R: Rng + ?Sized>(
    forecast: f64,
    prob: f64,
    params: &ExperimentParams,
    rng: &mut R,
) -> f64 {
    if prob <= 0.0 || !rng.random_bool(prob.min(1.0)) {
        return forecast;
    }
    let factor = if rng.random_bool(0.5) { 10.0 } else { 0.1 };
    params.clamp(forecast * factor)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: ExperimentParams,
    pub agents: Vec<AgentSpec>,
    pub horizon: usize,
    pub seed: u64,
    /// Std-dev of Gaussian noise added to each log-forecast.
    pub return_noise_sigma: f64,
    pub mistrade_prob: f64,
    /// Prices observed before the first simulated period, oldest first.
    pub initial_prices: [f64; 2],
    pub reward: RewardRule,
}

impl SimConfig {
    pub fn new(
        params: ExperimentParams,
        agents: Vec<AgentSpec>,
        horizon: usize,
        seed: u64,
    ) -> Self {
        let pf = params.fundamental();
        Self {
            params,
            agents,
            horizon,
            seed,
            return_noise_sigma: 0.0,
            mistrade_prob: 0.0,
            initial_prices: [pf, pf],
            reward: RewardRule::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be at least 1".into()));
        }
        if self.agents.len() != self.params.traders {
            return Err(Error::InvalidConfig(format!(
                "{} agents configured for {} traders",
                self.agents.len(),
                self.params.traders
            )));
        }
        for a in &self.agents {
            a.validate()?;
        }
        if !(0.0..=1.0).contains(&self.mistrade_prob) {
            return Err(Error::InvalidConfig(format!(
                "mistrade probability {} outside [0, 1]",
                self.mistrade_prob
            )));
        }
        if !(self.return_noise_sigma >= 0.0) || !self.return_noise_sigma.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "noise sigma must be non-negative, got {}",
                self.return_noise_sigma
            )));
        }
        if self
            .initial_prices
            .iter()
            .any(|p| !self.params.contains(*p))
        {
            return Err(Error::InvalidConfig(format!(
                "initial prices {:?} outside the admissible range",
                self.initial_prices
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimMetadata {
    pub rng: String,
    pub seed: u64,
    pub horizon: usize,
    pub params: ExperimentParams,
    pub agents: Vec<AgentSpec>,
    pub return_noise_sigma: f64,
    pub mistrade_prob: f64,
    pub initial_prices: [f64; 2],
    pub reward: RewardRule,
    pub mistrades: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    /// Prices for periods `0..horizon`.
    pub prices: PriceSeries,
    /// `forecasts[h][t]`: agent `h`'s forecast submitted in period `t`, which
    /// entered `p_t` and targets `p_{t+1}`.
    pub forecasts: Vec<Vec<f64>>,
    /// `payoffs[h][t]`: points for the forecast submitted in period `t`,
    /// scored against `p_{t+1}`; one column fewer than `forecasts`.
    pub payoffs: Vec<Vec<f64>>,
    pub metadata: SimMetadata,
}

impl SimResult {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_csv(writer, &self.prices, Some(&self.forecasts))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn run(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let params = &config.params;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let log_noise = if config.return_noise_sigma > 0.0 {
        Some(
            Normal::new(0.0, config.return_noise_sigma)
                .map_err(|e| Error::InvalidConfig(e.to_string()))?,
        )
    } else {
        None
    };

    let agents = config.agents.len();
    let mut history: Vec<f64> = config.initial_prices.to_vec();
    let mut prices = Vec::with_capacity(config.horizon);
    let mut forecasts = vec![Vec::with_capacity(config.horizon); agents];
    let mut mistrades = 0;
    let mut round = vec![0.0; agents];

    for t in 0..config.horizon as i64 {
        for (h, spec) in config.agents.iter().enumerate() {
            let mut f = agent_forecast(spec, &history, t, params, &mut rng)?;
            if let Some(noise) = &log_noise {
                f = params.clamp(f * noise.sample(&mut rng).exp());
            }
            let shifted = inject_mistrade(f, config.mistrade_prob, params, &mut rng);
            if shifted != f {
                mistrades += 1;
            }
            round[h] = shifted;
            forecasts[h].push(shifted);
        }
        let p = clearing_price(&round, params)?;
        prices.push(p);
        history.push(p);
    }

    let payoffs = forecasts
        .iter()
        .map(|col| {
            col.iter()
                .zip(&prices[1..])
                .map(|(&f, &p)| score_forecast(p, f, &config.reward))
                .collect()
        })
        .collect();

    Ok(SimResult {
        prices: PriceSeries::new(0, prices, params)?,
        forecasts,
        payoffs,
        metadata: SimMetadata {
            rng: RNG_ALGORITHM.to_string(),
            seed: config.seed,
            horizon: config.horizon,
            params: *params,
            agents: config.agents.clone(),
            return_noise_sigma: config.return_noise_sigma,
            mistrade_prob: config.mistrade_prob,
            initial_prices: config.initial_prices,
            reward: config.reward,
            mistrades,
        },
    })
}

/// Five price anchors and a naive forecaster,
/// seeded slightly above the fundamental so a bubble can start.
pub fn bubble_preset(seed: u64, horizon: usize) -> SimConfig {
    let params = ExperimentParams::default();
    let agents = vec![
        AgentSpec::PriceAnchor { a2: 0.10, b2: 2e-4 },
        AgentSpec::PriceAnchor { a2: 0.12, b2: 1e-4 },
        AgentSpec::PriceAnchor { a2: 0.09, b2: 3e-4 },
        AgentSpec::PriceAnchor {
            a2: 0.11,
            b2: 1.5e-4,
        },
        AgentSpec::PriceAnchor { a2: 0.10, b2: 1e-4 },
        AgentSpec::Naive,
    ];
    let mut cfg = SimConfig::new(params, agents, horizon, seed);
    cfg.initial_prices = [62.0, 64.0];
    cfg.return_noise_sigma = 0.01;
    cfg
}
