//! Exact distribution tables and popularity rows.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::perm::{Class, Stat};

/// `rows[n][k]` is the number of class members of length `n` with statistic
/// value `k`. Rows are stored with trailing zeros trimmed (never shorter than
/// one entry). `stat == None` means a plain count: every row has a single entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionTable {
    pub class: Class,
    pub stat: Option<Stat>,
    rows: Vec<Vec<BigUint>>,
}

/// First cell at which two tables differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub n: usize,
    pub k: usize,
    pub left: BigUint,
    pub right: BigUint,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} k={}: {} vs {}",
            self.n, self.k, self.left, self.right
        )
    }
}

fn trim(mut row: Vec<BigUint>) -> Vec<BigUint> {
    while row.len() > 1 && row.last().is_some_and(Zero::is_zero) {
        row.pop();
    }
    if row.is_empty() {
        row.push(BigUint::zero());
    }
    row
}

impl DistributionTable {
    pub fn new(class: Class, stat: Option<Stat>, rows: Vec<Vec<BigUint>>) -> Self {
        DistributionTable {
            class,
            stat,
            rows: rows.into_iter().map(trim).collect(),
        }
    }

    pub fn from_u64(class: Class, stat: Option<Stat>, rows: &[&[u64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&c| BigUint::from(c)).collect())
            .collect();
        Self::new(class, stat, rows)
    }

    pub fn n_max(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }

    pub fn get(&self, n: usize, k: usize) -> BigUint {
        self.rows
            .get(n)
            .and_then(|r| r.get(k))
            .cloned()
            .unwrap_or_default()
    }

    pub fn row_sum(&self, n: usize) -> BigUint {
        self.rows[n].iter().sum()
    }

    pub fn row_sums(&self) -> Vec<BigUint> {
        (0..self.rows.len()).map(|n| self.row_sum(n)).collect()
    }

    /// Rows `0..=n_max` only.
    pub fn truncated(&self, n_max: usize) -> Self {
        DistributionTable {
            class: self.class.clone(),
            stat: self.stat,
            rows: self.rows.iter().take(n_max + 1).cloned().collect(),
        }
    }

    pub fn popularity(&self) -> PopularityRow {
        let totals = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(k, c)| c * BigUint::from(k))
                    .sum()
            })
            .collect();
        PopularityRow {
            class: self.class.clone(),
            stat: self.stat,
            totals,
        }
    }

    /// Compares rows present in both tables, cell by cell.
    pub fn first_mismatch(&self, other: &DistributionTable) -> Option<Mismatch> {
        for (n, (a, b)) in self.rows.iter().zip(&other.rows).enumerate() {
            for k in 0..a.len().max(b.len()) {
                let left = a.get(k).cloned().unwrap_or_default();
                let right = b.get(k).cloned().unwrap_or_default();
                if left != right {
                    return Some(Mismatch { n, k, left, right });
                }
            }
        }
        None
    }

    /// Checks a printed (possibly column-truncated) row prefix against row `n`.
    pub fn row_starts_with(&self, n: usize, prefix: &[u64]) -> bool {
        prefix
            .iter()
            .enumerate()
            .all(|(k, &c)| self.get(n, k) == BigUint::from(c))
    }
}

/// `totals[n] = Σ_k k·rows[n][k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PopularityRow {
    pub class: Class,
    pub stat: Option<Stat>,
    pub totals: Vec<BigUint>,
}

impl PopularityRow {
    pub fn totals_u64(&self) -> Vec<u64> {
        self.totals
            .iter()
            .map(|t| u64::try_from(t).expect("total fits in u64"))
            .collect()
    }

    pub fn first_mismatch(&self, other: &PopularityRow) -> Option<Mismatch> {
        self.totals
            .iter()
            .zip(&other.totals)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(n, (a, b))| Mismatch {
                n,
                k: 0,
                left: a.clone(),
                right: b.clone(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::ClassName;

    #[test]
    fn rows_are_trimmed_and_compared_cellwise() {
        let c = Class::of(ClassName::Increasing);
        let a =
            DistributionTable::from_u64(c.clone(), Some(Stat::Val), &[&[1, 0, 0], &[1], &[2, 0]]);
        assert_eq!(a.row(0).len(), 1);
        let b = DistributionTable::from_u64(c, Some(Stat::Val), &[&[1], &[1], &[2, 1]]);
        let m = a.first_mismatch(&b).unwrap();
        assert_eq!((m.n, m.k), (2, 1));
        assert_eq!(a.first_mismatch(&a.clone()), None);
    }

    #[test]
    fn popularity_weights_columns() {
        let t = DistributionTable::from_u64(
            Class::all(),
            Some(Stat::Run),
            &[&[1], &[0, 1], &[0, 1, 1]],
        );
        assert_eq!(t.popularity().totals_u64(), vec![0, 1, 3]);
        assert_eq!(t.row_sums(), vec![1u32.into(), 1u32.into(), 2u32.into()]);
        assert!(t.row_starts_with(2, &[0, 1]));
    }
}
