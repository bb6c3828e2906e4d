use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use redundancy_core::lcwt::SignRoles;
use redundancy_core::stats::{LagSpec, RegressionKind};
use redundancy_core::synth::SyntheticKind;

#[derive(Debug, Parser)]
#[command(name = "redundancy", version, about = "Mutual redundancy, soliton decomposition and cointegration tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy, mutual information and redundancy of categorical columns.
    Entropy(EntropyArgs),
    /// Sliding-window redundancy over an event stream.
    Synergy(SynergyArgs),
    /// Soliton-chain fit with the data-on-model regression.
    Fit(FitArgs),
    /// Logistic wavelet scalogram.
    Cwt(CwtArgs),
    /// Augmented Dickey-Fuller test.
    Adf(AdfArgs),
    /// Engle-Granger cointegration test of two columns.
    Coint(CointArgs),
    /// Fit, wave extraction, trains, redundancy split and validation.
    Pipeline(PipelineArgs),
    /// Write a seeded synthetic dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Directory for artifacts.
    #[arg(long, env = "REDUNDANCY_OUT_DIR", default_value = "redundancy-out")]
    #[serde(skip)]
    pub out_dir: PathBuf,
    /// Recorded in every artifact.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeriesInput {
    /// CSV file with a header row.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Value column; defaults to the first column other than the time column and t/time/index.
    #[arg(long)]
    pub column: Option<String>,
    /// Explicit, uniformly spaced time column; otherwise rows are numbered 0..n-1.
    #[arg(long)]
    pub time_column: Option<String>,
    /// Fill missing values by linear interpolation.
    #[arg(long)]
    pub fill: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EntropyArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Comma-separated variables; all columns by default.
    #[arg(long, value_delimiter = ',')]
    pub variables: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynergyArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Comma-separated subset (at least two variables).
    #[arg(long, value_delimiter = ',', required = true)]
    pub subset: Vec<String>,
    #[arg(long, default_value_t = 64)]
    pub window: usize,
    #[arg(long, default_value_t = 16)]
    pub stride: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    pub series: SeriesInput,
    #[arg(long, default_value_t = 3)]
    pub components: usize,
    /// Choose the component count up to --components by AIC.
    #[arg(long)]
    pub auto_components: bool,
    /// Hold the vertical shift at the series minimum.
    #[arg(long)]
    pub fix_beta: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CwtArgs {
    #[command(flatten)]
    pub series: SeriesInput,
    /// Number of logarithmic scales.
    #[arg(long, default_value_t = 64)]
    pub scales: usize,
    /// Logistic derivative order of the mother wavelet (2 or 3).
    #[arg(long, default_value_t = 3)]
    pub order: u32,
    /// Also write an SVG heatmap.
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    None,
    Constant,
    #[value(name = "constant+trend", alias = "constant-trend")]
    #[serde(rename = "constant+trend")]
    ConstantTrend,
}

impl From<KindArg> for RegressionKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::None => RegressionKind::None,
            KindArg::Constant => RegressionKind::Constant,
            KindArg::ConstantTrend => RegressionKind::ConstantTrend,
        }
    }
}

/// `auto` or a lag count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(into = "String")]
pub struct Lags(pub LagSpec);

impl From<Lags> for String {
    fn from(l: Lags) -> Self {
        match l.0 {
            LagSpec::Auto => "auto".into(),
            LagSpec::Fixed(p) => p.to_string(),
        }
    }
}

impl std::str::FromStr for Lags {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Lags(LagSpec::Auto));
        }
        s.parse::<usize>()
            .map(|p| Lags(LagSpec::Fixed(p)))
            .map_err(|_| format!("expected `auto` or a lag count, got `{s}`"))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AdfArgs {
    #[command(flatten)]
    pub series: SeriesInput,
    #[arg(long, default_value = "auto")]
    pub lags: Lags,
    #[arg(long, value_enum, default_value_t = KindArg::Constant)]
    pub kind: KindArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CointArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Dependent column.
    #[arg(long)]
    pub y: String,
    /// Regressor column.
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub time_column: Option<String>,
    #[arg(long)]
    pub fill: bool,
    #[arg(long, default_value = "auto")]
    pub lags: Lags,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RolesArg {
    /// Positive waves are historical, negative waves synergetic.
    PositiveHistorical,
    /// Positive waves are synergetic, negative waves historical.
    PositiveSynergetic,
}

impl From<RolesArg> for SignRoles {
    fn from(r: RolesArg) -> Self {
        match r {
            RolesArg::PositiveHistorical => SignRoles::PositiveHistorical,
            RolesArg::PositiveSynergetic => SignRoles::PositiveSynergetic,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub series: SeriesInput,
    #[arg(long, default_value_t = 3)]
    pub components: usize,
    #[arg(long)]
    pub auto_components: bool,
    #[arg(long)]
    pub fix_beta: bool,
    #[arg(long, default_value_t = 64)]
    pub scales: usize,
    #[arg(long, default_value_t = 10)]
    pub max_waves: usize,
    #[arg(long, default_value_t = 0.05)]
    pub energy_stop: f64,
    #[arg(long, default_value = "auto")]
    pub lags: Lags,
    /// Deterministic terms of the ADF test on the data.
    #[arg(long, value_enum, default_value_t = KindArg::Constant)]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value_t = RolesArg::PositiveHistorical)]
    pub roles: RolesArg,
    /// Minimum adjusted R² of the data-on-model regression.
    #[arg(long, default_value_t = 0.5)]
    pub min_r2: f64,
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthKindArg {
    CornLike,
    PatentLike,
    Noise,
}

impl From<SynthKindArg> for SyntheticKind {
    fn from(k: SynthKindArg) -> Self {
        match k {
            SynthKindArg::CornLike => SyntheticKind::CornLike,
            SynthKindArg::PatentLike => SyntheticKind::PatentLike,
            SynthKindArg::Noise => SyntheticKind::Noise,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: SynthKindArg,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Destination file.
    #[arg(long, short)]
    pub output: PathBuf,
}
