//! Command-line front end: argument parsing, `key=value` config files and
//! the file outputs of each subcommand.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classify::{classify_series, classify_window, BubbleVerdict, GridSummary, Thresholds};
use crate::error::{Error, Result};
use crate::growth::{comparison_csv, comparison_table, ComparisonSpec};
use crate::market::{self, AgentSpec, SimConfig};
use crate::series::{
    discrete_excess_returns, discrete_returns, excess_series, load_csv, return_scatter, write_csv,
    Dataset, ExperimentParams, Window, MIN_WINDOW,
};
use crate::stats::Confidence;
use crate::sweep::{
    significant_fraction, sweep, FeedbackModel, SweepBounds, SweepGrid, SweepOptions,
};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INGESTION: i32 = 3;
pub const EXIT_COMPUTATION: i32 = 4;

/// Maps an error to the process exit status.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidConfig(_) | Error::InvalidParams(_) => EXIT_CONFIG,
        e if e.is_ingestion() => EXIT_INGESTION,
        _ => EXIT_COMPUTATION,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bubblelab",
    version,
    about = "Simulate learning-to-forecast markets and calibrate bubble growth models"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Plain-text `key=value` configuration; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Input CSV with header `t,price[,h1..hH]`.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, env = "BUBBLELAB_OUTDIR")]
    pub outdir: Option<PathBuf>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long = "min-window", global = true)]
    pub min_window: Option<usize>,

    /// Significant-fraction threshold for the anchoring labels.
    #[arg(long, global = true)]
    pub theta: Option<f64>,

    #[arg(long, global = true, value_enum)]
    pub confidence: Option<ConfidenceArg>,

    /// Market constants, e.g. `r=0.05,D=3,H=6,p_min=0,p_max=1000`.
    #[arg(long, global = true)]
    pub params: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConfidenceArg {
    TwoSided,
    OneSided,
}

impl From<ConfidenceArg> for Confidence {
    fn from(c: ConfidenceArg) -> Self {
        match c {
            ConfidenceArg::TwoSided => Confidence::TwoSided,
            ConfidenceArg::OneSided => Confidence::OneSided,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the market simulator and write the price/forecast CSV plus JSON.
    Simulate(SimulateArgs),
    /// Sweep both feedback models over every window and write the grids.
    Sweep(WindowArgs),
    /// Label the bubble in a price series.
    Classify(WindowArgs),
    /// Print the exponential-versus-feedback comparison table.
    Table2(Table2Args),
    /// Write plot-ready CSVs: prices and forecasts, return scatter, grids.
    Plotdata(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Six fundamentalists.
    Fundamentalists,
    /// Price-anchoring group that inflates a bubble.
    Bubble,
    /// Six agents forecasting the self-confirming constant-rate bubble.
    Rational,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub horizon: Option<usize>,

    #[arg(long, value_enum)]
    pub preset: Option<Preset>,

    /// Comma-separated agents, e.g. `price_anchor:0.1:2e-4,naive,fundamentalist`.
    #[arg(long)]
    pub agents: Option<String>,

    #[arg(long = "noise-sigma")]
    pub noise_sigma: Option<f64>,

    #[arg(long = "mistrade-prob")]
    pub mistrade_prob: Option<f64>,

    /// Two seed prices, `p_-2,p_-1`.
    #[arg(long)]
    pub initial: Option<String>,

    /// File stem for the outputs.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    /// Explicit `start:end` window instead of detection / the full series.
    #[arg(long)]
    pub window: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Table2Args {
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub a2: Option<f64>,
    #[arg(long)]
    pub b2: Option<f64>,
    /// Initial excess price.
    #[arg(long)]
    pub p0: Option<f64>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScatterBasis {
    Price,
    Excess,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub window: Option<String>,
    /// Series whose discrete returns go into the scatter.
    #[arg(long, value_enum)]
    pub basis: Option<ScatterBasis>,
}

/// `key=value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!(
                "config line {}: expected key=value, got `{raw}`",
                i + 1
            ))
        })?;
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

/// Parameters resolved from flags, the optional config file and defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub outdir: PathBuf,
    pub seed: u64,
    pub params: ExperimentParams,
    pub thresholds: Thresholds,
    #[serde(skip)]
    file: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn resolve(common: &CommonArgs) -> Result<Self> {
        let file = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        let cfg = Self {
            input: None,
            outdir: PathBuf::from("."),
            seed: 0,
            params: ExperimentParams::default(),
            thresholds: Thresholds::default(),
            file,
        };

        let input = common
            .input
            .clone()
            .or_else(|| cfg.file.get("input").map(PathBuf::from));
        let outdir = common
            .outdir
            .clone()
            .or_else(|| cfg.file.get("outdir").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let seed = pick(common.seed, cfg.file_value::<u64>("seed")?, 0);
        let min_window = pick(
            common.min_window,
            cfg.file_value::<usize>("min_window")?,
            MIN_WINDOW,
        );
        let theta = pick(
            common.theta,
            cfg.file_value::<f64>("theta")?,
            Thresholds::default().theta,
        );
        let confidence = match common.confidence {
            Some(c) => c.into(),
            None => cfg
                .file
                .get("confidence")
                .map(|s| s.parse::<Confidence>().map_err(Error::InvalidConfig))
                .transpose()?
                .unwrap_or_default(),
        };

        let mut params = ExperimentParams::default();
        if let Some(text) = cfg.file.get("params") {
            apply_params(&mut params, text)?;
        }
        for key in ["r", "D", "H", "p_min", "p_max"] {
            if let Some(v) = cfg.file.get(key) {
                apply_params(&mut params, &format!("{key}={v}"))?;
            }
        }
        if let Some(text) = &common.params {
            apply_params(&mut params, text)?;
        }
        params.validate()?;

        if min_window < 5 {
            return Err(Error::InvalidConfig(format!(
                "min-window must be at least 5, got {min_window}"
            )));
        }
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidConfig(format!(
                "theta must lie in [0, 1], got {theta}"
            )));
        }
        if let Some(path) = &input {
            if !path.is_file() {
                return Err(Error::io(
                    path,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "input file not found"),
                ));
            }
        }

        Ok(Self {
            input,
            outdir,
            seed,
            params,
            thresholds: Thresholds {
                theta,
                min_window,
                confidence,
            },
            ..cfg
        })
    }

    fn file_value<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.file
            .get(key)
            .map(|v| {
                v.parse::<T>().map_err(|_| {
                    Error::InvalidConfig(format!("config key `{key}`: bad value `{v}`"))
                })
            })
            .transpose()
    }

    fn input_path(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| Error::InvalidConfig("--input is required".into()))
    }

    fn load_input(&self) -> Result<Dataset> {
        load_csv(self.input_path()?, &self.params)
    }

    fn output(&self, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.outdir).map_err(|e| Error::io(&self.outdir, e))?;
        Ok(self.outdir.join(name))
    }
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Applies `r=..,D=..,H=..,p_min=..,p_max=..` overrides.
pub fn apply_params(params: &mut ExperimentParams, text: &str) -> Result<()> {
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("param `{part}`: expected key=value")))?;
        let bad = || Error::InvalidConfig(format!("param `{part}`: bad value"));
        match k.trim() {
            "r" => params.r = v.trim().parse().map_err(|_| bad())?,
            "D" | "d" => params.dividend = v.trim().parse().map_err(|_| bad())?,
            "H" | "h" => params.traders = v.trim().parse().map_err(|_| bad())?,
            "p_min" => params.p_min = v.trim().parse().map_err(|_| bad())?,
            "p_max" => params.p_max = v.trim().parse().map_err(|_| bad())?,
            other => return Err(Error::InvalidConfig(format!("unknown param `{other}`"))),
        }
    }
    Ok(())
}

/// Parses `kind[:p1[:p2[:p3]]]` agent lists.
pub fn parse_agents(text: &str) -> Result<Vec<AgentSpec>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let mut it = item.split(':');
            let kind = it.next().unwrap_or_default();
            let nums: Vec<f64> = it
                .map(|v| {
                    v.parse::<f64>().map_err(|_| {
                        Error::InvalidConfig(format!("agent `{item}`: bad number `{v}`"))
                    })
                })
                .collect::<Result<_>>()?;
            let want = |n: usize| {
                if nums.len() == n {
                    Ok(())
                } else {
                    Err(Error::InvalidConfig(format!(
                        "agent `{item}`: expected {n} parameters, got {}",
                        nums.len()
                    )))
                }
            };
            let spec = match kind {
                "fundamentalist" => want(0).map(|_| AgentSpec::Fundamentalist),
                "naive" => want(0).map(|_| AgentSpec::Naive),
                "noise" => want(1).map(|_| AgentSpec::Noise { sigma: nums[0] }),
                "rational_bubble" => want(3).map(|_| AgentSpec::RationalBubble {
                    r_hat: nums[0],
                    a1: nums[1],
                    b1: nums[2],
                }),
                "price_anchor" => want(2).map(|_| AgentSpec::PriceAnchor {
                    a2: nums[0],
                    b2: nums[1],
                }),
                "return_anchor" => want(2).map(|_| AgentSpec::ReturnAnchor {
                    a3: nums[0],
                    b3: nums[1],
                }),
                other => Err(Error::InvalidConfig(format!(
                    "unknown agent kind `{other}`"
                ))),
            }?;
            Ok(spec)
        })
        .collect()
}

/// Parses `start:end`.
pub fn parse_window(text: &str, min_window: usize) -> Result<Window> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| Error::InvalidConfig(format!("window `{text}`: expected start:end")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| Error::InvalidConfig(format!("window `{text}`: bad index `{s}`")))
    };
    Window::new(parse(a)?, parse(b)?, min_window)
        .map_err(|e| Error::InvalidConfig(format!("window `{text}`: {e}")))
}

/// Parses arguments, runs the subcommand, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let cfg = RunConfig::resolve(&cli.common)?;
    match &cli.command {
        Command::Simulate(args) => cmd_simulate(&cfg, args).map(|_| ()),
        Command::Sweep(args) => cmd_sweep(&cfg, args).map(|_| ()),
        Command::Classify(args) => {
            let verdict = cmd_classify(&cfg, args)?;
            println!("{}", verdict.summary_line());
            Ok(())
        }
        Command::Table2(args) => cmd_table2(&cfg, args),
        Command::Plotdata(args) => cmd_plotdata(&cfg, args).map(|_| ()),
    }
}

pub fn cmd_simulate(cfg: &RunConfig, args: &SimulateArgs) -> Result<Vec<PathBuf>> {
    let horizon = pick(args.horizon, cfg.file_value("horizon")?, 50);
    let preset = match args.preset {
        Some(p) => p,
        None => match cfg.file.get("preset").map(String::as_str) {
            None | Some("bubble") => Preset::Bubble,
            Some("fundamentalists") => Preset::Fundamentalists,
            Some("rational") => Preset::Rational,
            Some(other) => return Err(Error::InvalidConfig(format!("unknown preset `{other}`"))),
        },
    };
    let mut sim = match preset {
        Preset::Bubble => {
            let mut s = market::bubble_preset(cfg.seed, horizon);
            s.params = cfg.params;
            s
        }
        Preset::Fundamentalists => SimConfig::new(
            cfg.params,
            vec![AgentSpec::Fundamentalist; cfg.params.traders],
            horizon,
            cfg.seed,
        ),
        Preset::Rational => SimConfig::new(
            cfg.params,
            vec![
                AgentSpec::RationalBubble {
                    r_hat: cfg.params.r,
                    a1: 1.0,
                    b1: cfg.params.fundamental(),
                };
                cfg.params.traders
            ],
            horizon,
            cfg.seed,
        ),
    };
    let agents = args
        .agents
        .clone()
        .or_else(|| cfg.file.get("agents").cloned());
    if let Some(text) = agents {
        sim.agents = parse_agents(&text)?;
    }
    if let Some(s) = args.noise_sigma.or(cfg.file_value("noise_sigma")?) {
        sim.return_noise_sigma = s;
    }
    if let Some(p) = args.mistrade_prob.or(cfg.file_value("mistrade_prob")?) {
        sim.mistrade_prob = p;
    }
    if let Some(text) = args
        .initial
        .clone()
        .or_else(|| cfg.file.get("initial").cloned())
    {
        let v: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidConfig(format!("initial prices `{text}`")))?;
        let [a, b] = v[..] else {
            return Err(Error::InvalidConfig(
                "exactly two initial prices are required".into(),
            ));
        };
        sim.initial_prices = [a, b];
    }

    let result = market::run(&sim)?;
    let stem = args.name.clone().unwrap_or_else(|| "simulated".into());
    let csv_path = cfg.output(&format!("{stem}.csv"))?;
    let json_path = cfg.output(&format!("{stem}.json"))?;
    let mut buf = Vec::new();
    result.write_csv(&mut buf)?;
    write_file(&csv_path, &buf)?;
    write_file(&json_path, result.to_json()?.as_bytes())?;
    Ok(vec![csv_path, json_path])
}

#[derive(Debug, Serialize)]
struct GridReport {
    summary: GridSummary,
    significant_fraction: Option<f64>,
    invalid: BTreeMap<&'static str, usize>,
}

impl GridReport {
    fn of(grid: &SweepGrid) -> Self {
        Self {
            summary: GridSummary::of(grid),
            significant_fraction: significant_fraction(grid).ok(),
            invalid: grid.error_counts(),
        }
    }
}

#[derive(Debug, Serialize)]
struct SweepReport {
    bounds: SweepBounds,
    thresholds: Thresholds,
    price: GridReport,
    #[serde(rename = "return")]
    ret: GridReport,
}

fn sweep_bounds(cfg: &RunConfig, window: &Option<String>, data: &Dataset) -> Result<SweepBounds> {
    Ok(match window {
        Some(text) => SweepBounds::over(parse_window(text, cfg.thresholds.min_window)?),
        None => SweepBounds::over(Window {
            start: data.prices.t0(),
            end: data.prices.t_end(),
        }),
    })
}

fn both_grids(cfg: &RunConfig, data: &Dataset, bounds: SweepBounds) -> (SweepGrid, SweepGrid) {
    let excess = excess_series(&data.prices, &cfg.params);
    let opts = SweepOptions {
        min_window: cfg.thresholds.min_window,
        confidence: cfg.thresholds.confidence,
    };
    (
        sweep(&excess, FeedbackModel::Price, bounds, opts),
        sweep(&excess, FeedbackModel::Return, bounds, opts),
    )
}

fn write_grid(cfg: &RunConfig, grid: &SweepGrid, name: &str) -> Result<PathBuf> {
    let path = cfg.output(name)?;
    let mut buf = Vec::new();
    grid.write_csv(&mut buf)?;
    write_file(&path, &buf)?;
    Ok(path)
}

pub fn cmd_sweep(cfg: &RunConfig, args: &WindowArgs) -> Result<Vec<PathBuf>> {
    let data = cfg.load_input()?;
    let bounds = sweep_bounds(cfg, &args.window, &data)?;
    let (price, ret) = both_grids(cfg, &data, bounds);
    let report = SweepReport {
        bounds,
        thresholds: cfg.thresholds,
        price: GridReport::of(&price),
        ret: GridReport::of(&ret),
    };
    let summary = cfg.output("sweep_summary.json")?;
    write_file(&summary, serde_json::to_string_pretty(&report)?.as_bytes())?;
    Ok(vec![
        write_grid(cfg, &price, "price_grid.csv")?,
        write_grid(cfg, &ret, "return_grid.csv")?,
        summary,
    ])
}

pub fn cmd_classify(cfg: &RunConfig, args: &WindowArgs) -> Result<BubbleVerdict> {
    let data = cfg.load_input()?;
    let verdict = match &args.window {
        Some(text) => classify_window(
            &data.prices,
            &cfg.params,
            parse_window(text, cfg.thresholds.min_window)?,
            &cfg.thresholds,
        ),
        None => classify_series(&data.prices, &cfg.params, &cfg.thresholds),
    };
    let path = cfg.output("verdict.json")?;
    write_file(&path, serde_json::to_string_pretty(&verdict)?.as_bytes())?;
    Ok(verdict)
}

pub fn table2_text(cfg: &RunConfig, args: &Table2Args) -> Result<String> {
    let d = ComparisonSpec::default();
    let spec = ComparisonSpec {
        a1: pick(args.a1, cfg.file_value("a1")?, d.a1),
        a2: pick(args.a2, cfg.file_value("a2")?, d.a2),
        b2: pick(args.b2, cfg.file_value("b2")?, d.b2),
        initial_excess: pick(args.p0, cfg.file_value("p0")?, d.initial_excess),
        steps: pick(args.steps, cfg.file_value("steps")?, d.steps),
    };
    Ok(comparison_csv(&comparison_table(&spec)?))
}

pub fn cmd_table2(cfg: &RunConfig, args: &Table2Args) -> Result<()> {
    let text = table2_text(cfg, args)?;
    match &args.output {
        Some(path) => write_file(path, text.as_bytes()),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

pub fn cmd_plotdata(cfg: &RunConfig, args: &PlotArgs) -> Result<Vec<PathBuf>> {
    let data = cfg.load_input()?;
    let mut written = Vec::new();

    match &data.forecasts {
        Some(f) => {
            let path = cfg.output("prices_forecasts.csv")?;
            let mut buf = Vec::new();
            write_csv(&mut buf, &data.prices, Some(f))?;
            write_file(&path, &buf)?;
            written.push(path);
        }
        None => eprintln!("notice: input has no forecast columns; skipping prices_forecasts.csv"),
    }

    let returns = match args.basis.unwrap_or(ScatterBasis::Price) {
        ScatterBasis::Price => discrete_returns(&data.prices)?,
        ScatterBasis::Excess => discrete_excess_returns(&excess_series(&data.prices, &cfg.params))?,
    };
    let path = cfg.output("return_scatter.csv")?;
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["t", "r_t", "r_next", "diagonal", "above_diagonal"])?;
    for p in return_scatter(&returns) {
        wtr.write_record([
            p.t.to_string(),
            p.current.to_string(),
            p.next.to_string(),
            p.current.to_string(),
            p.above_diagonal().to_string(),
        ])?;
    }
    let buf = wtr
        .into_inner()
        .map_err(|e| Error::io(&path, e.into_error()))?;
    write_file(&path, &buf)?;
    written.push(path);

    let bounds = sweep_bounds(cfg, &args.window, &data)?;
    let (price, ret) = both_grids(cfg, &data, bounds);
    written.push(write_grid(cfg, &price, "price_grid.csv")?);
    written.push(write_grid(cfg, &ret, "return_grid.csv")?);
    Ok(written)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text() {
        let m = parse_config_text("# comment\nseed = 7\nmin-window=6 # trailing\n\n").unwrap();
        assert_eq!(m.get("seed").unwrap(), "7");
        assert_eq!(m.get("min_window").unwrap(), "6");
        assert!(parse_config_text("nonsense").is_err());
    }

    #[test]
    fn params_override() {
        let mut p = ExperimentParams::default();
        apply_params(&mut p, "r=0.1, D=5,H=4,p_max=2000").unwrap();
        assert_eq!((p.r, p.dividend, p.traders, p.p_max), (0.1, 5.0, 4, 2000.0));
        assert!(apply_params(&mut p, "x=1").is_err());
        assert!(apply_params(&mut p, "r=abc").is_err());
    }

    #[test]
    fn agents_list() {
        let a = parse_agents("price_anchor:0.1:2e-4, naive,fundamentalist,noise:2,return_anchor:0.02:0.6,rational_bubble:0.05:1:60")
            .unwrap();
        assert_eq!(a.len(), 6);
        assert_eq!(a[0], AgentSpec::PriceAnchor { a2: 0.1, b2: 2e-4 });
        assert!(parse_agents("price_anchor:0.1").is_err());
        assert!(parse_agents("chartist").is_err());
    }

    #[test]
    fn windows() {
        assert_eq!(
            parse_window("7:26", 5).unwrap(),
            Window { start: 7, end: 26 }
        );
        assert!(parse_window("7:9", 5).is_err());
        assert!(parse_window("7-26", 5).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::InvalidConfig("x".into())), EXIT_CONFIG);
        assert_eq!(
            exit_code(&Error::NonContiguous {
                line: 2,
                expected_prev: 0,
                found: 2
            }),
            EXIT_INGESTION
        );
        assert_eq!(exit_code(&Error::NoValidCells), EXIT_COMPUTATION);
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "seed=5\ntheta=0.3\nparams=r=0.1\n").unwrap();
        let common = CommonArgs {
            config: Some(path),
            seed: Some(9),
            ..CommonArgs::default()
        };
        let cfg = RunConfig::resolve(&common).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.thresholds.theta, 0.3);
        assert_eq!(cfg.params.r, 0.1);
    }
}
