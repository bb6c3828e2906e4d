use std::fs::File;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use redundancy_core::TimeSeries;

/// A numeric table read from CSV; `None` marks a missing cell.
pub struct NumericTable {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<Option<f64>>>,
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("nan")
}

pub fn read_numeric(path: &Path) -> Result<NumericTable> {
    let file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers: Vec<String> = rdr
        .headers()
        .with_context(|| format!("cannot parse header of {}", path.display()))?
        .iter()
        .map(str::to_string)
        .collect();
    if headers.is_empty() || headers.iter().all(String::is_empty) {
        bail!("{} has no header row", path.display());
    }
    let mut columns = vec![Vec::new(); headers.len()];
    for (r, record) in rdr.records().enumerate() {
        let record = record.with_context(|| format!("{}: bad row {}", path.display(), r + 2))?;
        for (j, cell) in record.iter().enumerate() {
            let v = if is_missing(cell) {
                None
            } else {
                Some(cell.parse::<f64>().map_err(|_| {
                    anyhow!("{}: row {}, column `{}`: `{cell}` is not numeric", path.display(), r + 2, headers[j])
                })?)
            };
            columns[j].push(v);
        }
    }
    if columns[0].is_empty() {
        bail!("{} has no data rows", path.display());
    }
    Ok(NumericTable { headers, columns })
}

impl NumericTable {
    pub fn index(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("no column `{name}` (have: {})", self.headers.join(", ")))
    }
}

/// Linear interpolation across gaps; leading and trailing gaps take the
/// nearest observed value. Returns the number of filled cells.
pub fn fill_linear(values: &mut [Option<f64>]) -> Result<usize> {
    let known: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_some()).collect();
    let Some((&first, &last)) = known.first().zip(known.last()) else {
        bail!("column has no observed values");
    };
    let mut filled = 0;
    for i in 0..values.len() {
        if values[i].is_some() {
            continue;
        }
        let v = if i < first {
            values[first].unwrap()
        } else if i > last {
            values[last].unwrap()
        } else {
            let hi = known.partition_point(|&k| k < i);
            let (a, b) = (known[hi - 1], known[hi]);
            let (va, vb) = (values[a].unwrap(), values[b].unwrap());
            va + (vb - va) * (i - a) as f64 / (b - a) as f64
        };
        values[i] = Some(v);
        filled += 1;
    }
    Ok(filled)
}

/// Extracts a value column, filling gaps when `fill` is set (each fill is
/// reported in the returned warnings).
pub fn take_column(table: &NumericTable, name: &str, fill: bool, warnings: &mut Vec<String>) -> Result<Vec<f64>> {
    let mut col = table.columns[table.index(name)?].clone();
    let missing = col.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        if !fill {
            bail!("column `{name}` has {missing} missing values (use --fill to interpolate)");
        }
        fill_linear(&mut col)?;
        warnings.push(format!("filled {missing} missing values in column `{name}` by linear interpolation"));
    }
    Ok(col.into_iter().map(|v| v.expect("filled")).collect())
}

pub fn time_axis(table: &NumericTable, time_column: Option<&str>) -> Result<Option<Vec<f64>>> {
    let Some(name) = time_column else { return Ok(None) };
    let col = &table.columns[table.index(name)?];
    if col.iter().any(Option::is_none) {
        bail!("time column `{name}` has missing values");
    }
    Ok(Some(col.iter().map(|v| v.unwrap()).collect()))
}

pub fn build_series(times: Option<Vec<f64>>, values: Vec<f64>) -> Result<TimeSeries> {
    match times {
        Some(t) => TimeSeries::new(t, values).map_err(|e| anyhow!("{e}")),
        None => Ok(TimeSeries::from_values(values)),
    }
}

fn is_index_name(h: &str) -> bool {
    matches!(h.to_ascii_lowercase().as_str(), "t" | "time" | "index")
}

/// Reads one value column as a time series. Without `column`, the first
/// column that is neither the time column nor named `t`, `time` or `index`
/// is used.
pub fn ingest_timeseries(
    path: &Path,
    column: Option<&str>,
    time_column: Option<&str>,
    fill: bool,
    warnings: &mut Vec<String>,
) -> Result<TimeSeries> {
    let table = read_numeric(path)?;
    let name = match column {
        Some(c) => c.to_string(),
        None => table
            .headers
            .iter()
            .find(|h| Some(h.as_str()) != time_column && !is_index_name(h))
            .cloned()
            .ok_or_else(|| anyhow!("{} has no value column", path.display()))?,
    };
    let values = take_column(&table, &name, fill, warnings)?;
    build_series(time_axis(&table, time_column)?, values)
}
