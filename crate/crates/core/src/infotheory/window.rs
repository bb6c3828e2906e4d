use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::measures::mutual_redundancy;
use super::table::ProbabilityTable;
use crate::error::{Error, Result};

/// Smallest window accepted regardless of the number of joint states.
pub const MIN_WINDOW: usize = 8;

/// Time-resolved mutual redundancy over half-open windows
/// `[start, start + window_length)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RedundancySeries {
    pub subset: Vec<String>,
    pub window_length: usize,
    pub stride: usize,
    pub window_starts: Vec<usize>,
    pub redundancy_bits: Vec<f64>,
}

/// Slides a window of `window` samples over `stream` in steps of `stride`
/// and reports the mutual redundancy of `subset` in each complete window.
/// Incomplete tail windows are dropped.
///
/// The window must hold at least `max(8, Π cardinalities)` samples, where
/// the cardinalities are the distinct categories of each subset variable
/// over the whole stream.
pub fn synergy_indicator<R, S, L, M>(
    stream: &[R],
    variables: &[L],
    subset: &[M],
    window: usize,
    stride: usize,
) -> Result<RedundancySeries>
where
    R: AsRef<[S]> + Sync,
    S: AsRef<str> + Sync,
    L: AsRef<str>,
    M: AsRef<str>,
{
    if stride == 0 {
        return Err(Error::InvalidArgument("stride must be >= 1".into()));
    }
    if subset.len() < 2 {
        return Err(Error::SubsetTooSmall {
            required: 2,
            found: subset.len(),
        });
    }
    if stream.is_empty() {
        return Err(Error::EmptyInput);
    }
    if window > stream.len() {
        return Err(Error::WindowTooLong {
            window,
            len: stream.len(),
        });
    }
    let columns = resolve_columns(variables, subset)?;
    let mut projected: Vec<Vec<&str>> = Vec::with_capacity(stream.len());
    for (r, row) in stream.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != variables.len() {
            return Err(Error::RaggedRow {
                row: r,
                expected: variables.len(),
                found: row.len(),
            });
        }
        projected.push(columns.iter().map(|&c| row[c].as_ref()).collect());
    }

    let joint_states: usize = (0..columns.len())
        .map(|j| {
            projected
                .iter()
                .map(|row| row[j])
                .collect::<HashSet<_>>()
                .len()
        })
        .product();
    let minimum = joint_states.max(MIN_WINDOW);
    if window < minimum {
        return Err(Error::WindowTooShort { window, minimum });
    }

    let labels: Vec<&str> = subset.iter().map(AsRef::as_ref).collect();
    let starts: Vec<usize> = (0..=stream.len() - window).step_by(stride).collect();
    let values = starts
        .par_iter()
        .map(|&s| {
            let table = ProbabilityTable::from_observations(&projected[s..s + window], &labels)?;
            mutual_redundancy(&table, &labels)
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(RedundancySeries {
        subset: labels.iter().map(|s| s.to_string()).collect(),
        window_length: window,
        stride,
        window_starts: starts,
        redundancy_bits: values,
    })
}

fn resolve_columns<L: AsRef<str>, M: AsRef<str>>(variables: &[L], subset: &[M]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(subset.len());
    for label in subset {
        let label = label.as_ref();
        let idx = variables
            .iter()
            .position(|v| v.as_ref() == label)
            .ok_or_else(|| Error::UnknownVariable(label.to_string()))?;
        if out.contains(&idx) {
            return Err(Error::DuplicateVariable(label.to_string()));
        }
        out.push(idx);
    }
    Ok(out)
}
