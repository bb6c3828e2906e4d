use std::collections::HashMap;
use std::io::Read;

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;

/// Dense joint distribution over categorical variables.
///
/// Cells are stored row-major with the last variable varying fastest, so the
/// state `(i_0, .., i_{n-1})` lives at `Σ i_j · stride_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    variables: Vec<String>,
    cardinalities: Vec<usize>,
    categories: Vec<Vec<String>>,
    probabilities: Vec<f64>,
}

impl ProbabilityTable {
    /// Builds a table from explicit cell probabilities. Category labels
    /// default to `"0"`, `"1"`, ...
    pub fn new<S: AsRef<str>>(
        variables: &[S],
        cardinalities: &[usize],
        probabilities: Vec<f64>,
    ) -> Result<Self> {
        let variables = owned_labels(variables)?;
        if variables.len() != cardinalities.len() {
            return Err(Error::InvalidTable(format!(
                "{} variables but {} cardinalities",
                variables.len(),
                cardinalities.len()
            )));
        }
        if cardinalities.contains(&0) {
            return Err(Error::InvalidTable("zero cardinality".into()));
        }
        let cells: usize = cardinalities.iter().product();
        if probabilities.len() != cells {
            return Err(Error::InvalidTable(format!(
                "expected {cells} cells, got {}",
                probabilities.len()
            )));
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidTable(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidTable(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let categories = cardinalities
            .iter()
            .map(|&c| (0..c).map(|i| i.to_string()).collect())
            .collect();
        Ok(Self {
            variables,
            cardinalities: cardinalities.to_vec(),
            categories,
            probabilities,
        })
    }

    /// Maximum-likelihood estimate from observation rows. Categories are
    /// indexed by order of first appearance.
    pub fn from_observations<R, S, L>(rows: &[R], variables: &[L]) -> Result<Self>
    where
        R: AsRef<[S]>,
        S: AsRef<str>,
        L: AsRef<str>,
    {
        Self::from_observations_with_pseudocount(rows, variables, 0.0)
    }

    /// Like [`from_observations`](Self::from_observations) but adds
    /// `pseudocount` to every cell of the observed category product before
    /// normalising.
    pub fn from_observations_with_pseudocount<R, S, L>(
        rows: &[R],
        variables: &[L],
        pseudocount: f64,
    ) -> Result<Self>
    where
        R: AsRef<[S]>,
        S: AsRef<str>,
        L: AsRef<str>,
    {
        if !(pseudocount.is_finite() && pseudocount >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "pseudocount must be finite and >= 0, got {pseudocount}"
            )));
        }
        let variables = owned_labels(variables)?;
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let arity = variables.len();
        let mut lookup: Vec<HashMap<String, usize>> = vec![HashMap::new(); arity];
        let mut categories: Vec<Vec<String>> = vec![Vec::new(); arity];
        let mut encoded = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != arity {
                return Err(Error::RaggedRow {
                    row: r,
                    expected: arity,
                    found: row.len(),
                });
            }
            let mut state = Vec::with_capacity(arity);
            for (j, value) in row.iter().enumerate() {
                let value = value.as_ref();
                let next = categories[j].len();
                let idx = *lookup[j].entry(value.to_string()).or_insert_with(|| {
                    categories[j].push(value.to_string());
                    next
                });
                state.push(idx);
            }
            encoded.push(state);
        }
        let cardinalities: Vec<usize> = categories.iter().map(Vec::len).collect();
        let strides = strides(&cardinalities);
        let cells: usize = cardinalities.iter().product();
        let mut counts = vec![pseudocount; cells];
        for state in &encoded {
            let idx: usize = state.iter().zip(&strides).map(|(i, s)| i * s).sum();
            counts[idx] += 1.0;
        }
        let total = rows.len() as f64 + pseudocount * cells as f64;
        let probabilities = counts.into_iter().map(|c| c / total).collect();
        Ok(Self {
            variables,
            cardinalities,
            categories,
            probabilities,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    /// Category labels of variable `var` in index order.
    pub fn categories(&self, var: usize) -> &[String] {
        &self.categories[var]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, state: &[usize]) -> f64 {
        let strides = strides(&self.cardinalities);
        let idx: usize = state.iter().zip(&strides).map(|(i, s)| i * s).sum();
        self.probabilities[idx]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownVariable(label.to_string()))
    }

    /// Resolves labels to variable indices, rejecting an empty subset,
    /// unknown labels and repeats.
    pub fn resolve<S: AsRef<str>>(&self, subset: &[S]) -> Result<Vec<usize>> {
        if subset.is_empty() {
            return Err(Error::SubsetTooSmall {
                required: 1,
                found: 0,
            });
        }
        let mut out = Vec::with_capacity(subset.len());
        for label in subset {
            let idx = self.index_of(label.as_ref())?;
            if out.contains(&idx) {
                return Err(Error::DuplicateVariable(label.as_ref().to_string()));
            }
            out.push(idx);
        }
        Ok(out)
    }

    /// Marginal distribution over the labelled subset, with variables in
    /// the order given.
    pub fn marginal<S: AsRef<str>>(&self, subset: &[S]) -> Result<ProbabilityTable> {
        let idx = self.resolve(subset)?;
        Ok(self.marginal_by_index(&idx))
    }

    pub(crate) fn marginal_by_index(&self, keep: &[usize]) -> ProbabilityTable {
        let out_cards: Vec<usize> = keep.iter().map(|&k| self.cardinalities[k]).collect();
        let out_strides = strides(&out_cards);
        // Stride in the output table contributed by each source variable.
        let mut contribution = vec![0usize; self.cardinalities.len()];
        for (pos, &k) in keep.iter().enumerate() {
            contribution[k] = out_strides[pos];
        }
        let mut out = vec![0.0; out_cards.iter().product()];
        let mut counter = vec![0usize; self.cardinalities.len()];
        let mut target = 0usize;
        for &p in &self.probabilities {
            out[target] += p;
            // Mixed-radix increment, last variable fastest.
            for j in (0..counter.len()).rev() {
                counter[j] += 1;
                target += contribution[j];
                if counter[j] < self.cardinalities[j] {
                    break;
                }
                target -= contribution[j] * counter[j];
                counter[j] = 0;
            }
        }
        ProbabilityTable {
            variables: keep.iter().map(|&k| self.variables[k].clone()).collect(),
            cardinalities: out_cards,
            categories: keep.iter().map(|&k| self.categories[k].clone()).collect(),
            probabilities: out,
        }
    }

    /// Shannon entropy of the full table in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.probabilities
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }
}

fn strides(cardinalities: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; cardinalities.len()];
    for j in (0..cardinalities.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * cardinalities[j + 1];
    }
    strides
}

fn owned_labels<S: AsRef<str>>(labels: &[S]) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::with_capacity(labels.len());
    for l in labels {
        let l = l.as_ref();
        if out.iter().any(|o| o == l) {
            return Err(Error::DuplicateVariable(l.to_string()));
        }
        out.push(l.to_string());
    }
    Ok(out)
}

/// Categorical observations read from CSV: a header row naming variables
/// and one observation per row.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalData {
    pub variables: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CategoricalData {
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let variables: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if variables.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut rows = Vec::new();
        for (r, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != variables.len() {
                return Err(Error::RaggedRow {
                    row: r,
                    expected: variables.len(),
                    found: record.len(),
                });
            }
            rows.push(record.iter().map(str::to_string).collect());
        }
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self { variables, rows })
    }

    pub fn table(&self) -> Result<ProbabilityTable> {
        ProbabilityTable::from_observations(&self.rows, &self.variables)
    }
}
