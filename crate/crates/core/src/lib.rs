//! Information-theoretic redundancy measures and soliton-based decomposition
//! of longitudinal data.
//!
//! The crate is organised around the analysis chain used on market and
//! patent series:
//!
//! * [`infotheory`] - entropies, configurational information and mutual
//!   redundancy over categorical tables, plus a sliding-window indicator.
//! * [`models`] - logistic curves, sech² solitons, soliton chains and
//!   finite-difference residual checks for KdV-type equations.
//! * [`fit`] - damped least-squares decomposition into soliton chains or
//!   logistic sums, and simple OLS regression.
//! * [`lcwt`] - continuous wavelet transform with logistic-derivative mother
//!   wavelets, iterative dominant-wave extraction and wave-train analysis.
//! * [`stats`] - augmented Dickey-Fuller and Engle-Granger tests.
//! * [`synth`] - seeded generators for the synthetic datasets used as oracles.

pub mod error;
pub mod fit;
pub mod infotheory;
pub mod lcwt;
pub mod models;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use fit::TimeSeries;
