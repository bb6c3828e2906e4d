//! Shannon measures over categorical data: entropy, mutual
//! (configurational) information and mutual redundancy.
//!
//! All measures are in bits. Redundancy follows the sign law
//! `R = (-1)^{n-1} T`, so for two variables it is never positive.

mod measures;
mod table;
mod window;

pub use measures::{
    entropy, mutual_information, mutual_redundancy, redundancy_from_information, report,
    report_all, InformationReport,
};
pub use table::{CategoricalData, ProbabilityTable};
pub use window::{synergy_indicator, RedundancySeries, MIN_WINDOW};
