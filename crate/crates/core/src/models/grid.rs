use std::io::{Read, Write};

use crate::error::{Error, Result};

/// A field sampled on a uniform (X, T) lattice. Row `j` holds the samples
/// at time `t_grid[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    x_grid: Vec<f64>,
    t_grid: Vec<f64>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(x_grid: Vec<f64>, t_grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_axis("x", &x_grid)?;
        check_axis("t", &t_grid)?;
        if values.len() != x_grid.len() * t_grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {}x{} values, got {}",
                t_grid.len(),
                x_grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            x_grid,
            t_grid,
            values,
        })
    }

    /// Samples `f(x, t)` on the given axes.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(x_grid: Vec<f64>, t_grid: Vec<f64>, f: F) -> Result<Self> {
        let mut values = Vec::with_capacity(x_grid.len() * t_grid.len());
        for &t in &t_grid {
            values.extend(x_grid.iter().map(|&x| f(x, t)));
        }
        Self::new(x_grid, t_grid, values)
    }

    /// `n` points `start, start + step, ...`.
    pub fn axis(start: f64, step: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| start + step * i as f64).collect()
    }

    pub fn x_grid(&self) -> &[f64] {
        &self.x_grid
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nx(&self) -> usize {
        self.x_grid.len()
    }

    pub fn nt(&self) -> usize {
        self.t_grid.len()
    }

    pub fn dx(&self) -> f64 {
        (self.x_grid[self.nx() - 1] - self.x_grid[0]) / (self.nx() - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        (self.t_grid[self.nt() - 1] - self.t_grid[0]) / (self.nt() - 1) as f64
    }

    pub fn at(&self, t_index: usize, x_index: usize) -> f64 {
        self.values[t_index * self.nx() + x_index]
    }

    pub fn row(&self, t_index: usize) -> &[f64] {
        let nx = self.nx();
        &self.values[t_index * nx..(t_index + 1) * nx]
    }

    /// CSV matrix: the first row is `x_grid` (after an empty corner cell),
    /// the first column is `t_grid`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec![String::new()];
        header.extend(self.x_grid.iter().map(|x| x.to_string()));
        w.write_record(&header)?;
        for (j, t) in self.t_grid.iter().enumerate() {
            let mut rec = vec![t.to_string()];
            rec.extend(self.row(j).iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut records = rdr.records();
        let header = records
            .next()
            .ok_or_else(|| Error::Io("empty grid file".into()))??;
        let x_grid = header.iter().skip(1).map(parse_cell).collect::<Result<Vec<_>>>()?;
        let mut t_grid = Vec::new();
        let mut values = Vec::new();
        for rec in records {
            let rec = rec?;
            let mut cells = rec.iter();
            let t = cells.next().ok_or_else(|| Error::Io("empty grid row".into()))?;
            t_grid.push(parse_cell(t)?);
            for c in cells {
                values.push(parse_cell(c)?);
            }
        }
        Self::new(x_grid, t_grid, values)
    }
}

fn parse_cell(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Io(format!("non-numeric grid cell `{s}`")))
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::GridTooSmall(format!("{name} axis has {} points", axis.len())));
    }
    if axis.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonUniformGrid(format!("{name} axis has non-finite values")));
    }
    let step = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
    if step <= 0.0 {
        return Err(Error::NonUniformGrid(format!("{name} axis is not increasing")));
    }
    for w in axis.windows(2) {
        let d = w[1] - w[0];
        if d <= 0.0 || (d - step).abs() > 1e-6 * step {
            return Err(Error::NonUniformGrid(format!(
                "{name} axis step {d} differs from {step}"
            )));
        }
    }
    Ok(())
}
