//! Least-squares fitting of soliton chains and logistic sums, and OLS
//! regression.

mod chain;
mod init;
mod lm;
mod logistic;
mod regression;
mod series;

pub use chain::{
    aic, fit_soliton_chain, select_component_count, ComponentErrors, FitOptions, FitResult,
    StandardErrors,
};
pub use init::{initialize_components, Initialization, HALF_MAX_ARG};
pub use lm::{minimize, LmOptions, LmReport, Termination};
pub use logistic::{fit_logistic_sum, LogisticFit};
pub use regression::{linear_fit, ols, LinearFit, RegressionResult};
pub use series::TimeSeries;
