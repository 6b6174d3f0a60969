//! One distribution table per (class, statistic, method), from whichever of the
//! three independent sources can produce it.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::models::{self, ModelError, ModelId};
use crate::oracle::{Oracle, OracleError};
use crate::perm::{Class, ClassName, Stat};
use crate::recurrences::{Family, Recurrences};
use crate::table::{DistributionTable, Mismatch};

#[derive(Debug, Error)]
pub enum SourceError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no {method} source for class {class} and statistic {stat}")]
    Unsupported {
        method: Method,
        class: Class,
        stat: Stat,
    },
    #[error("unknown method {0:?}")]
    UnknownMethod(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Oracle,
    Recurrence,
    Series,
    /// Every source available for the pair; they must agree.
    All,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Recurrence => "recurrence",
            Method::Series => "series",
            Method::All => "all",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = SourceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Method::Oracle,
            Method::Recurrence,
            Method::Series,
            Method::All,
        ]
        .into_iter()
        .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
        .ok_or_else(|| SourceError::UnknownMethod(s.to_string()))
    }
}

fn relabel(t: DistributionTable, class: &Class, stat: Stat) -> DistributionTable {
    DistributionTable::new(class.clone(), Some(stat), t.rows().to_vec())
}

fn is(class: &Class, name: ClassName) -> bool {
    class == &Class::of(name)
}

/// Run tables for the classes whose descent, ascent and peak tables are
/// derived from runs.
fn run_family(class: &Class) -> Option<(Family, ModelId)> {
    if is(class, ClassName::Increasing) {
        Some((Family::IncRun, ModelId::IRun))
    } else if is(class, ClassName::Flattened) {
        Some((Family::FlatRun, ModelId::FRun))
    } else {
        None
    }
}

fn derived_from_runs(
    run: DistributionTable,
    class: &Class,
    stat: Stat,
) -> Option<DistributionTable> {
    let (des, asc) = models::transforms_des_asc(&run);
    match stat {
        Stat::Des => Some(des),
        Stat::Asc => Some(asc),
        // Flattened permutations have a peak at every descent top.
        Stat::Peak if is(class, ClassName::Flattened) => Some(relabel(des, class, Stat::Peak)),
        _ => None,
    }
}

fn recurrence_table(class: &Class, stat: Stat, n_max: usize) -> Option<DistributionTable> {
    let rec = Recurrences::new(n_max);
    if let Some(family) = Family::for_pair(class, stat) {
        return Some(rec.table(family, n_max));
    }
    if let Some((family, _)) = run_family(class) {
        return derived_from_runs(rec.table(family, n_max), class, stat);
    }
    if is(class, ClassName::Valleyless) && stat == Stat::Run {
        return Some(rec.valleyless_runs_table(n_max));
    }
    if class.is_all() {
        return rec.symmetric_group_table(stat, n_max);
    }
    None
}

fn boundary_of(class: &Class) -> Option<(bool, bool)> {
    let names: Vec<ClassName> = class.names().collect();
    match names.as_slice() {
        [ClassName::Increasing, ClassName::Boundary {
            starts_desc,
            ends_asc,
        }] => Some((*starts_desc, *ends_asc)),
        _ => None,
    }
}

fn series_table(
    class: &Class,
    stat: Stat,
    n_max: usize,
) -> Result<Option<DistributionTable>, ModelError> {
    if let Some(id) = ModelId::for_pair(class, stat) {
        return models::table_from_model(id, n_max).map(Some);
    }
    if let Some((_, id)) = run_family(class) {
        let run = models::table_from_model(id, n_max)?;
        return Ok(derived_from_runs(run, class, stat));
    }
    if is(class, ClassName::Valleyless) && stat == Stat::Run {
        return models::table_from_model(ModelId::VXy, n_max).map(Some);
    }
    if let (Some(_), Stat::Val) = (boundary_of(class), stat) {
        let tables = models::boundary_tables(n_max)?;
        return Ok(tables.into_iter().find(|t| &t.class == class));
    }
    Ok(None)
}

/// The table of `(class, stat)` from a single source, rows `0..=n_max`.
pub fn table(
    class: &Class,
    stat: Stat,
    method: Method,
    n_max: usize,
    oracle: &Oracle,
) -> Result<DistributionTable, SourceError> {
    let unsupported = || SourceError::Unsupported {
        method,
        class: class.clone(),
        stat,
    };
    match method {
        Method::Oracle => Ok(oracle.distribution(class, stat, n_max)?),
        Method::Recurrence => recurrence_table(class, stat, n_max).ok_or_else(unsupported),
        Method::Series => series_table(class, stat, n_max)?.ok_or_else(unsupported),
        Method::All => Err(unsupported()),
    }
}

/// Methods able to produce `(class, stat)` at all.
pub fn available(class: &Class, stat: Stat) -> Vec<Method> {
    let mut out = vec![Method::Oracle];
    if recurrence_table(class, stat, 2).is_some() {
        out.push(Method::Recurrence);
    }
    if series_table(class, stat, 2).ok().flatten().is_some() {
        out.push(Method::Series);
    }
    out
}

/// A disagreement between two sources.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub left: Method,
    pub right: Method,
    pub mismatch: Mismatch,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vs {} at n={} k={}: {} vs {}",
            self.left,
            self.right,
            self.mismatch.n,
            self.mismatch.k,
            self.mismatch.left,
            self.mismatch.right
        )
    }
}

/// Tables from every requested source, compared pairwise against the first.
/// `Err` on a source failure; `Ok((table, disagreements))` otherwise.
pub fn agreed_table(
    class: &Class,
    stat: Stat,
    method: Method,
    n_max: usize,
    oracle: &Oracle,
) -> Result<(DistributionTable, Vec<Disagreement>), SourceError> {
    let methods = match method {
        Method::All => available(class, stat),
        m => vec![m],
    };
    let tables = methods
        .iter()
        .map(|&m| table(class, stat, m, n_max, oracle).map(|t| (m, t)))
        .collect::<Result<Vec<_>, _>>()?;
    let (first_method, first) = tables[0].clone();
    let disagreements = tables[1..]
        .iter()
        .filter_map(|(m, t)| {
            first.first_mismatch(t).map(|mismatch| Disagreement {
                left: first_method,
                right: *m,
                mismatch,
            })
        })
        .collect();
    Ok((first, disagreements))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Class {
        s.parse().unwrap()
    }

    #[test]
    fn availability() {
        let all = vec![Method::Oracle, Method::Recurrence, Method::Series];
        assert_eq!(available(&c("increasing"), Stat::Val), all);
        assert_eq!(available(&c("flattened"), Stat::Peak), all);
        assert_eq!(
            available(&c("increasing"), Stat::Peak),
            vec![Method::Oracle, Method::Series]
        );
        assert_eq!(
            available(&c("all"), Stat::Des),
            vec![Method::Oracle, Method::Recurrence]
        );
        assert_eq!(
            available(&c("increasing+boundary(1,1)"), Stat::Val),
            vec![Method::Oracle, Method::Series]
        );
        assert_eq!(
            available(&c("alternating"), Stat::Val),
            vec![Method::Oracle]
        );
    }

    #[test]
    fn all_sources_agree() {
        let o = Oracle::default();
        for (class, stat) in [
            ("increasing", Stat::Asc),
            ("flattened", Stat::Des),
            ("flattened", Stat::Peak),
            ("valleyless", Stat::Run),
            ("increasing+boundary(0,1)", Stat::Val),
            ("all", Stat::Rlm),
        ] {
            let (_, diffs) = agreed_table(&c(class), stat, Method::All, 6, &o).unwrap();
            assert!(diffs.is_empty(), "{class}/{stat}: {diffs:?}");
        }
        let (t, _) = agreed_table(&c("flattened"), Stat::Rlm, Method::All, 6, &o).unwrap();
        assert!(t.row_starts_with(6, &[0, 0, 1, 15, 25, 10, 1]));
    }

    #[test]
    fn unsupported_method_is_an_error() {
        let err = table(
            &c("alternating"),
            Stat::Val,
            Method::Series,
            4,
            &Oracle::default(),
        )
        .unwrap_err();
        assert!(matches!(err, SourceError::Unsupported { .. }));
    }
}
