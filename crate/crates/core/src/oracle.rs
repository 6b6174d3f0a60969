//! Exhaustive ground truth: enumerate `S_n`, filter by class, tally statistics.

use num_bigint::BigUint;
use thiserror::Error;

use crate::perm::{permutations, Class, Permutation, Stat};
use crate::table::{DistributionTable, PopularityRow};

pub const DEFAULT_LIMIT: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("length {n} exceeds the enumeration capacity {limit}")]
    Capacity { n: usize, limit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    limit: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            limit: DEFAULT_LIMIT,
        }
    }
}

impl Oracle {
    pub fn with_limit(limit: usize) -> Self {
        Oracle { limit }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn check(&self, n: usize) -> Result<(), OracleError> {
        if n > self.limit {
            return Err(OracleError::Capacity {
                n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// Members of `class` of length `n`, in lexicographic order.
    pub fn enumerate<'a>(
        &self,
        n: usize,
        class: &'a Class,
    ) -> Result<impl Iterator<Item = Permutation> + 'a, OracleError> {
        self.check(n)?;
        Ok(permutations(n).filter(move |p| class.contains(p)))
    }

    /// Members of `class` of length `n` whose statistic equals `k`.
    pub fn witnesses(
        &self,
        n: usize,
        class: &Class,
        stat: Stat,
        k: usize,
    ) -> Result<Vec<Permutation>, OracleError> {
        Ok(self
            .enumerate(n, class)?
            .filter(|p| p.stat(stat) == k)
            .collect())
    }

    pub fn distribution(
        &self,
        class: &Class,
        stat: Stat,
        n_max: usize,
    ) -> Result<DistributionTable, OracleError> {
        self.check(n_max)?;
        let rows = (0..=n_max)
            .map(|n| {
                let mut row = vec![0u64; n + 1];
                for p in permutations(n).filter(|p| class.contains(p)) {
                    row[p.stat(stat)] += 1;
                }
                row.into_iter().map(BigUint::from).collect()
            })
            .collect();
        Ok(DistributionTable::new(class.clone(), Some(stat), rows))
    }

    /// Class sizes as a single-column table.
    pub fn counts(&self, class: &Class, n_max: usize) -> Result<DistributionTable, OracleError> {
        self.check(n_max)?;
        let rows = (0..=n_max)
            .map(|n| {
                vec![BigUint::from(
                    permutations(n).filter(|p| class.contains(p)).count(),
                )]
            })
            .collect();
        Ok(DistributionTable::new(class.clone(), None, rows))
    }

    pub fn popularity(
        &self,
        class: &Class,
        stat: Stat,
        n_max: usize,
    ) -> Result<PopularityRow, OracleError> {
        Ok(self.distribution(class, stat, n_max)?.popularity())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::ClassName;

    fn inc() -> Class {
        Class::of(ClassName::Increasing)
    }

    fn flat() -> Class {
        Class::of(ClassName::Flattened)
    }

    #[test]
    fn witnesses_for_increasing_valleys() {
        let got: Vec<String> = Oracle::default()
            .witnesses(4, &inc(), Stat::Val, 1)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        let expected =
            "1324 1423 2134 2143 2314 2413 3124 3142 3214 3241 3412 4123 4132 4213 4231 4312";
        assert_eq!(got.join(" "), expected);
    }

    #[test]
    fn enumerate_edge_cases() {
        let o = Oracle::default();
        let empty: Vec<_> = o.enumerate(0, &inc()).unwrap().collect();
        assert_eq!(empty, vec![Permutation::empty()]);
        assert_eq!(o.enumerate(5, &flat()).unwrap().count(), 15);
        assert_eq!(
            o.enumerate(10, &inc()).err(),
            Some(OracleError::Capacity { n: 10, limit: 9 })
        );
        assert!(Oracle::with_limit(3)
            .distribution(&inc(), Stat::Val, 4)
            .is_err());
    }

    #[test]
    fn distribution_rows() {
        let o = Oracle::default();
        let t = o.distribution(&inc(), Stat::Val, 4).unwrap();
        assert!(t.row_starts_with(4, &[8, 16]));
        assert_eq!(t.row(4).len(), 2);
        let t = o.distribution(&flat(), Stat::Run, 5).unwrap();
        assert!(t.row_starts_with(5, &[0, 1, 11, 3]));
        let t = o.distribution(&inc(), Stat::Rlm, 4).unwrap();
        assert!(t.row_starts_with(4, &[0, 6, 11, 6, 1]));
    }

    #[test]
    fn popularity_rows() {
        let o = Oracle::default();
        let p = o.popularity(&inc(), Stat::Val, 7).unwrap().totals_u64();
        assert_eq!(&p[3..], &[2, 16, 104, 688, 4848]);
        let p = o.popularity(&inc(), Stat::Peak, 8).unwrap().totals_u64();
        assert_eq!(&p[3..], &[2, 16, 112, 763, 5399, 40496]);
        // Σ_k k·S(n-1,k-1) collapses to Bell(n).
        let p = o.popularity(&flat(), Stat::Rlm, 7).unwrap().totals_u64();
        assert_eq!(&p[1..], &[1, 2, 5, 15, 52, 203, 877]);
    }

    #[test]
    fn symmetric_group_reproduces_classical_triangles() {
        let o = Oracle::default();
        let des = o.distribution(&Class::all(), Stat::Des, 5).unwrap();
        assert!(des.row_starts_with(5, &[1, 26, 66, 26, 1]));
        let rlm = o.distribution(&Class::all(), Stat::Rlm, 5).unwrap();
        assert!(rlm.row_starts_with(5, &[0, 24, 50, 35, 10, 1]));
    }
}
