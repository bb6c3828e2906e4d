use serde::Serialize;

use super::table::ProbabilityTable;
use crate::error::{Error, Result};

/// All measures for one subset of variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InformationReport {
    pub subset: Vec<String>,
    pub n: usize,
    #[serde(rename = "H")]
    pub entropy_bits: f64,
    /// `None` for single-variable subsets.
    #[serde(rename = "T")]
    pub mutual_information_bits: Option<f64>,
    #[serde(rename = "R")]
    pub redundancy_bits: Option<f64>,
}

/// Shannon entropy (bits) of the marginal over `subset`, with 0·log 0 = 0.
pub fn entropy<S: AsRef<str>>(table: &ProbabilityTable, subset: &[S]) -> Result<f64> {
    Ok(table.marginal(subset)?.entropy_bits())
}

/// Configurational (co-)information of the subset:
/// `T = Σ_{∅≠S⊆subset} (-1)^{|S|+1} H(S)`.
///
/// For two variables this is Shannon's mutual information `H1 + H2 - H12`;
/// from three variables on it may be negative.
pub fn mutual_information<S: AsRef<str>>(table: &ProbabilityTable, subset: &[S]) -> Result<f64> {
    let idx = table.resolve(subset)?;
    if idx.len() < 2 {
        return Err(Error::SubsetTooSmall {
            required: 2,
            found: idx.len(),
        });
    }
    Ok(signed_entropy_sum(&table.marginal_by_index(&idx)))
}

/// Mutual redundancy `R = (-1)^{n-1} T`. Negative values indicate a
/// reduction of uncertainty.
pub fn mutual_redundancy<S: AsRef<str>>(table: &ProbabilityTable, subset: &[S]) -> Result<f64> {
    let t = mutual_information(table, subset)?;
    Ok(redundancy_from_information(t, subset.len()))
}

/// Applies the sign law `R = (-1)^{n-1} T`.
pub fn redundancy_from_information(t: f64, n: usize) -> f64 {
    if n.is_multiple_of(2) {
        -t
    } else {
        t
    }
}

pub fn report<S: AsRef<str>>(table: &ProbabilityTable, subset: &[S]) -> Result<InformationReport> {
    let idx = table.resolve(subset)?;
    let marginal = table.marginal_by_index(&idx);
    let n = idx.len();
    let (t, r) = if n >= 2 {
        let t = signed_entropy_sum(&marginal);
        (Some(t), Some(redundancy_from_information(t, n)))
    } else {
        (None, None)
    };
    Ok(InformationReport {
        subset: marginal.variables().to_vec(),
        n,
        entropy_bits: marginal.entropy_bits(),
        mutual_information_bits: t,
        redundancy_bits: r,
    })
}

/// Reports for every nonempty subset of the table's variables, ordered by
/// size and then by variable position.
pub fn report_all(table: &ProbabilityTable) -> Vec<InformationReport> {
    let n = table.variables().len();
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by_key(|m| (m.count_ones(), std::cmp::Reverse(m.reverse_bits())));
    masks
        .into_iter()
        .map(|mask| {
            let subset: Vec<&str> = (0..n)
                .filter(|j| mask & (1 << j) != 0)
                .map(|j| table.variables()[j].as_str())
                .collect();
            report(table, &subset).expect("subset drawn from table")
        })
        .collect()
}

/// Inclusion-exclusion over all nonempty sub-marginals of `joint`.
fn signed_entropy_sum(joint: &ProbabilityTable) -> f64 {
    let n = joint.variables().len();
    let mut total = 0.0;
    for mask in 1u32..(1u32 << n) {
        let keep: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let h = joint.marginal_by_index(&keep).entropy_bits();
        if keep.len() % 2 == 1 {
            total += h;
        } else {
            total -= h;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(vars: &[&str], cards: &[usize], p: &[f64]) -> ProbabilityTable {
        ProbabilityTable::new(vars, cards, p.to_vec()).unwrap()
    }

    fn xor_triple() -> ProbabilityTable {
        let mut p = vec![0.0; 8];
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let c = a ^ b;
            p[a * 4 + b * 2 + c] = 0.25;
        }
        table(&["x", "y", "z"], &[2, 2, 2], &p)
    }

    #[test]
    fn entropy_examples() {
        let uniform = table(&["a"], &[2], &[0.5, 0.5]);
        assert_eq!(entropy(&uniform, &["a"]).unwrap(), 1.0);
        let certain = table(&["a"], &[2], &[1.0, 0.0]);
        assert_eq!(entropy(&certain, &["a"]).unwrap(), 0.0);
        let four = table(&["a", "b"], &[2, 2], &[0.25; 4]);
        assert_eq!(entropy(&four, &["a", "b"]).unwrap(), 2.0);
        assert!(matches!(
            entropy(&four, &["c"]),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn mutual_information_examples() {
        let indep = table(&["a", "b"], &[2, 2], &[0.25; 4]);
        assert!(mutual_information(&indep, &["a", "b"]).unwrap().abs() < 1e-15);

        // H1 = H2 = 1, H12 = -(0.8 log2 0.4 + 0.2 log2 0.1)
        let corr = table(&["a", "b"], &[2, 2], &[0.4, 0.1, 0.1, 0.4]);
        let h12 = -(0.8 * 0.4f64.log2() + 0.2 * 0.1f64.log2());
        let expected = 2.0 - h12;
        let t = mutual_information(&corr, &["a", "b"]).unwrap();
        assert!((t - expected).abs() < 1e-15);
        assert!((t - 0.278072).abs() < 1e-6);

        // 3·1 - 3·2 + 2 = -1
        let t123 = mutual_information(&xor_triple(), &["x", "y", "z"]).unwrap();
        assert!((t123 + 1.0).abs() < 1e-12);

        assert!(matches!(
            mutual_information(&corr, &["a"]),
            Err(Error::SubsetTooSmall { .. })
        ));
    }

    #[test]
    fn redundancy_sign_law_examples() {
        let perfect = table(&["a", "b"], &[2, 2], &[0.5, 0.0, 0.0, 0.5]);
        assert!((mutual_information(&perfect, &["a", "b"]).unwrap() - 1.0).abs() < 1e-15);
        assert!((mutual_redundancy(&perfect, &["a", "b"]).unwrap() + 1.0).abs() < 1e-15);

        let xor = xor_triple();
        let r = mutual_redundancy(&xor, &["x", "y", "z"]).unwrap();
        let t = mutual_information(&xor, &["x", "y", "z"]).unwrap();
        assert_eq!(r, t);
        assert!((r + 1.0).abs() < 1e-12);

        let four = table(&["a", "b", "c", "d"], &[2, 2, 2, 2], &[1.0 / 16.0; 16]);
        assert!(mutual_redundancy(&four, &["a", "b", "c", "d"]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn report_fields_and_json_keys() {
        let xor = xor_triple();
        let rep = report(&xor, &["x", "y", "z"]).unwrap();
        assert_eq!(rep.n, 3);
        assert_eq!(rep.entropy_bits, 2.0);
        let json = serde_json::to_value(&rep).unwrap();
        for key in ["subset", "n", "H", "T", "R"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let single = report(&xor, &["x"]).unwrap();
        assert_eq!(single.mutual_information_bits, None);
        assert_eq!(report_all(&xor).len(), 7);
        assert_eq!(report_all(&xor)[0].subset, vec!["x"]);
        assert_eq!(report_all(&xor)[6].n, 3);
    }

    #[test]
    fn duplicate_subset_labels_rejected() {
        let xor = xor_triple();
        assert!(matches!(
            mutual_information(&xor, &["x", "x"]),
            Err(Error::DuplicateVariable(_))
        ));
    }
}
