//! Logistic continuous wavelet transform, dominant-wave extraction and
//! wave-train analysis.

mod extract;
mod svg;
mod trains;
mod transform;
mod wavelet;

pub use extract::{dominant_wave, extract_waves, ExtractOptions, Extraction, StopReason, WaveEstimate};
pub use svg::scalogram_svg;
pub use trains::{
    group_wave_trains, redundancy_split, redundancy_split_at, RedundancyDecomposition, Sign, SignRoles,
    Trend, WaveTrain,
};
pub use transform::{cwt, default_scales, log_scales, Scalogram, ScalogramPeak, DEFAULT_SCALE_COUNT};
pub use wavelet::{mother_wavelet, MotherWavelet, TRUNCATION};
