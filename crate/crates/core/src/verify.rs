//! Cross-checks between the three independent sources (exhaustive oracle,
//! recurrences, series models) and against published reference values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bijections::{
    all_partitions, flat_partition_forward, flat_partition_inverse, gould_forward, gould_inverse,
    phi,
};
use crate::models::{self, ModelError, ModelId, ModelRun};
use crate::oracle::{Oracle, OracleError};
use crate::perm::{Class, ClassName, Permutation, Stat, StatProfile};
use crate::recurrences::{Family, Perturbation, Recurrences, ValEqDesClass};
use crate::series::Rational;
use crate::table::DistributionTable;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown check group {0:?}")]
    UnknownGroup(String),
}

/// Families of checks, selectable with `--only`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Tables,
    Witnesses,
    Agreement,
    Popularity,
    Counts,
    Alternating,
    Bijections,
    ValEqDes,
    Residuals,
}

impl Group {
    pub const ALL: [Group; 9] = [
        Group::Tables,
        Group::Witnesses,
        Group::Agreement,
        Group::Popularity,
        Group::Counts,
        Group::Alternating,
        Group::Bijections,
        Group::ValEqDes,
        Group::Residuals,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::Tables => "tables",
            Group::Witnesses => "witnesses",
            Group::Agreement => "agreement",
            Group::Popularity => "popularity",
            Group::Counts => "counts",
            Group::Alternating => "alternating",
            Group::Bijections => "bijections",
            Group::ValEqDes => "val-eq-des",
            Group::Residuals => "residuals",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase().replace('_', "-");
        Group::ALL
            .into_iter()
            .find(|g| g.name() == t)
            .ok_or_else(|| VerifyError::UnknownGroup(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub order: usize,
    pub only: Option<Group>,
    pub perturbation: Option<Perturbation>,
    pub oracle: Oracle,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 8,
            order: models::DEFAULT_ORDER,
            only: None,
            perturbation: None,
            oracle: Oracle::default(),
        }
    }
}

/// The first cell at which a computed table departs from the expected one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub class: Class,
    pub stat: Option<Stat>,
    pub n: usize,
    pub k: usize,
    pub expected: BigUint,
    pub computed: BigUint,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stat = self.stat.map_or("count".to_string(), |s| s.to_string());
        write!(
            f,
            "class={} stat={} n={} k={}: expected {}, computed {}",
            self.class, stat, self.n, self.k, self.expected, self.computed
        )
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub group: Group,
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
    pub failure: Option<Failure>,
}

impl Check {
    fn values(
        group: Group,
        name: impl Into<String>,
        expected: impl fmt::Display,
        computed: impl fmt::Display,
    ) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        Check {
            group,
            name: name.into(),
            passed: expected == computed,
            expected,
            computed,
            failure: None,
        }
    }

    fn holds(group: Group, name: impl Into<String>, ok: bool, detail: impl fmt::Display) -> Self {
        Check {
            group,
            name: name.into(),
            expected: "holds".into(),
            computed: if ok {
                "holds".into()
            } else {
                detail.to_string()
            },
            passed: ok,
            failure: None,
        }
    }

    /// Compares rows `n_min..=n_max` cell by cell.
    fn tables(
        group: Group,
        name: impl Into<String>,
        expected: &DistributionTable,
        computed: &DistributionTable,
        n_min: usize,
        n_max: usize,
    ) -> Self {
        let failure = (n_min..=n_max).find_map(|n| {
            let width = expected.row(n).len().max(computed.row(n).len());
            (0..width).find_map(|k| {
                let (e, c) = (expected.get(n, k), computed.get(n, k));
                (e != c).then(|| Failure {
                    class: expected.class.clone(),
                    stat: expected.stat,
                    n,
                    k,
                    expected: e,
                    computed: c,
                })
            })
        });
        Check {
            group,
            name: name.into(),
            expected: render(expected, n_min, n_max),
            computed: render(computed, n_min, n_max),
            passed: failure.is_none(),
            failure,
        }
    }

    pub fn to_json(&self) -> Value {
        let failure = self.failure.as_ref().map_or(Value::Null, |f| {
            json!({
                "class": f.class.to_string(),
                "stat": f.stat.map(|s| s.to_string()),
                "n": f.n,
                "k": f.k,
                "expected": f.expected.to_string(),
                "computed": f.computed.to_string(),
            })
        });
        json!({
            "group": self.group.name(),
            "name": self.name,
            "expected": self.expected,
            "computed": self.computed,
            "passed": self.passed,
            "first_failure": failure,
        })
    }
}

fn render(t: &DistributionTable, n_min: usize, n_max: usize) -> String {
    (n_min..=n_max)
        .map(|n| {
            let cells: Vec<String> = t.row(n).iter().map(BigUint::to_string).collect();
            cells.join(" ")
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn join<T: fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures().find_map(|c| c.failure.as_ref())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "total": self.checks.len(),
            "failed": self.failures().count(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Published arrays, rows `0..`. Some rows are printed only up to a column
/// bound; those are compared as prefixes.
pub mod published {
    pub const INC_VAL: &[&[u64]] = &[
        &[1],
        &[1],
        &[2],
        &[4, 2],
        &[8, 16],
        &[16, 88, 8],
        &[32, 416, 136],
        &[64, 1824, 1440, 48],
        &[128, 7680, 12288, 1384],
    ];
    pub const INC_RUN: &[&[u64]] = &[
        &[1],
        &[0, 1],
        &[0, 1, 1],
        &[0, 1, 4, 1],
        &[0, 1, 11, 11, 1],
        &[0, 1, 26, 58, 26, 1],
        &[0, 1, 57, 234, 234, 57, 1],
        &[0, 1, 120, 831, 1472, 831, 120],
        &[0, 1, 247, 2757, 7735, 7735, 2757],
    ];
    pub const INC_RLM: &[&[u64]] = &[
        &[1],
        &[0, 1],
        &[0, 1, 1],
        &[0, 2, 3, 1],
        &[0, 6, 11, 6, 1],
        &[0, 24, 42, 35, 10, 1],
        &[0, 112, 174, 197, 85, 15, 1],
        &[0, 584, 812, 1116, 667, 175, 21],
        &[0, 3376, 4836, 6510, 5085, 1822, 322],
    ];
    pub const INC_PEAK: &[&[u64]] = &[
        &[1],
        &[1],
        &[2],
        &[4, 2],
        &[8, 16],
        &[16, 80, 16],
        &[32, 341, 211],
        &[64, 1361, 1815, 136],
        &[128, 5286, 12988, 3078],
    ];
    pub const FLAT_VAL: &[&[u64]] = &[
        &[1],
        &[1],
        &[1],
        &[2],
        &[3, 2],
        &[4, 11],
        &[5, 39, 8],
        &[6, 114, 83],
        &[7, 300, 522, 48],
        &[8, 741, 2594, 797],
    ];
    pub const FLAT_RUN: &[&[u64]] = &[
        &[1],
        &[0, 1],
        &[0, 1],
        &[0, 1, 1],
        &[0, 1, 4],
        &[0, 1, 11, 3],
        &[0, 1, 26, 25],
        &[0, 1, 57, 130, 15],
        &[0, 1, 120, 546, 210],
    ];
    pub const FLAT_RLM: &[&[u64]] = &[
        &[1],
        &[0, 1],
        &[0, 0, 1],
        &[0, 0, 1, 1],
        &[0, 0, 1, 3, 1],
        &[0, 0, 1, 7, 6, 1],
        &[0, 0, 1, 15, 25, 10, 1],
        &[0, 0, 1, 31, 90, 65, 15],
    ];

    /// `(n, k)` of rows printed only up to column `k`.
    pub const PREFIX_ROWS: &[(&str, usize, usize)] = &[
        ("I_run", 7, 6),
        ("I_run", 8, 6),
        ("I_rlm", 7, 6),
        ("I_rlm", 8, 6),
        ("F_rlm", 7, 6),
    ];

    /// Printed cells contradicted by the row-sum identity, as `(model, n, k, printed)`.
    pub const ERRATA: &[(&str, usize, usize, u64)] = &[("I_rlm", 8, 2, 4836)];

    /// `(model, first n, totals from that n)`.
    pub const POPULARITY: &[(&str, usize, &[u64])] = &[
        ("I_val", 3, &[2, 16, 104, 688, 4848]),
        ("I_run", 1, &[1, 3, 12, 60, 336, 2044, 13504]),
        ("I_rlm", 1, &[1, 3, 11, 50, 258, 1472, 9232]),
        ("I_peak", 3, &[2, 16, 112, 763, 5399, 40496]),
        ("F_val", 4, &[2, 11, 55, 280, 1488]),
        ("F_run", 1, &[1, 1, 3, 9, 32, 128, 565, 2719]),
    ];

    /// `(class, stat, n, k, sorted witnesses)`.
    pub const WITNESSES: &[(&str, &str, usize, usize, &str)] = &[
        (
            "increasing",
            "val",
            4,
            1,
            "1324 1423 2134 2143 2314 2413 3124 3142 3214 3241 3412 4123 4132 4213 4231 4312",
        ),
        (
            "increasing",
            "run",
            4,
            2,
            "1243 1324 1342 1423 2134 2314 2341 2413 3124 3412 4123",
        ),
        (
            "increasing",
            "rlm",
            4,
            2,
            "1342 1432 2143 2314 2413 3142 3214 3412 4132 4213 4312",
        ),
        (
            "increasing",
            "peak",
            4,
            1,
            "1243 1324 1342 1423 1432 2143 2314 2341 2413 2431 3142 3241 3412 3421 4132 4231",
        ),
        (
            "flattened",
            "val",
            5,
            1,
            "12435 12534 13245 13254 13425 13524 14235 14253 14523 15234 15243",
        ),
        (
            "flattened",
            "run",
            5,
            2,
            "12354 12435 12453 12534 13245 13425 13452 13524 14235 14523 15234",
        ),
        (
            "flattened",
            "rlm",
            5,
            3,
            "12453 13254 13425 13524 14253 14523 15243",
        ),
    ];

    pub const PHI_RUN_TWO_IMAGES: &str = "3421 3241 2431 4231 2143 3214 1432 4213 3142 4312 4132";
    pub const INC_COUNTS: &[u64] = &[1, 1, 2, 6, 24, 112, 584, 3376];
    pub const ALTERNATING: &[u64] = &[1, 1, 1, 2, 5, 8, 33, 48, 279];
    pub const INC_VAL_EQ_DES: &[u64] = &[1, 1, 3, 9, 31];
}

/// Statistic profiles of every class member, computed once per class.
struct OracleCache {
    oracle: Oracle,
    n_max: usize,
    members: BTreeMap<Class, Vec<Vec<(Permutation, StatProfile)>>>,
}

impl OracleCache {
    fn new(oracle: Oracle, n_max: usize) -> Self {
        OracleCache {
            oracle,
            n_max,
            members: BTreeMap::new(),
        }
    }

    fn members(
        &mut self,
        class: &Class,
    ) -> Result<&[Vec<(Permutation, StatProfile)>], OracleError> {
        if !self.members.contains_key(class) {
            let rows = (0..=self.n_max)
                .map(|n| {
                    Ok(self
                        .oracle
                        .enumerate(n, class)?
                        .map(|p| {
                            let s = p.statistics();
                            (p, s)
                        })
                        .collect())
                })
                .collect::<Result<Vec<_>, OracleError>>()?;
            self.members.insert(class.clone(), rows);
        }
        Ok(&self.members[class])
    }

    fn distribution(
        &mut self,
        class: &Class,
        stat: Stat,
    ) -> Result<DistributionTable, OracleError> {
        let rows = self
            .members(class)?
            .iter()
            .enumerate()
            .map(|(n, ps)| {
                let mut row = vec![0u64; n + 1];
                for (_, s) in ps {
                    row[s.get(stat)] += 1;
                }
                row.into_iter().map(BigUint::from).collect()
            })
            .collect();
        Ok(DistributionTable::new(class.clone(), Some(stat), rows))
    }

    fn counts(&mut self, class: &Class) -> Result<Vec<usize>, OracleError> {
        Ok(self.members(class)?.iter().map(Vec::len).collect())
    }
}

struct Verifier {
    cfg: VerifyConfig,
    series_order: usize,
    oracle: OracleCache,
    rec: Recurrences,
    runs: BTreeMap<ModelId, ModelRun>,
    report: Report,
}

fn inc() -> Class {
    Class::of(ClassName::Increasing)
}

fn flat() -> Class {
    Class::of(ClassName::Flattened)
}

fn relabel(t: &DistributionTable, class: Class, stat: Option<Stat>) -> DistributionTable {
    DistributionTable::new(class, stat, t.rows().to_vec())
}

fn published_table(id: ModelId) -> &'static [&'static [u64]] {
    match id {
        ModelId::IVal => published::INC_VAL,
        ModelId::IRun => published::INC_RUN,
        ModelId::IRlm => published::INC_RLM,
        ModelId::IPeak => published::INC_PEAK,
        ModelId::FVal => published::FLAT_VAL,
        ModelId::FRun => published::FLAT_RUN,
        ModelId::FRlm => published::FLAT_RLM,
        _ => &[],
    }
}

impl Verifier {
    fn model_run(&mut self, id: ModelId) -> Result<&ModelRun, VerifyError> {
        if !self.runs.contains_key(&id) {
            let run = models::model_run(id, self.series_order)?;
            self.runs.insert(id, run);
        }
        Ok(&self.runs[&id])
    }

    fn series_table(
        &mut self,
        id: ModelId,
        n_max: usize,
    ) -> Result<DistributionTable, VerifyError> {
        let series = self.model_run(id)?.series.clone();
        Ok(models::table_from_series(
            id,
            &series,
            id.class(),
            id.stat(),
            n_max,
        )?)
    }

    fn push(&mut self, check: Check) {
        self.report.checks.push(check);
    }

    fn tables(&mut self) -> Result<(), VerifyError> {
        let n_oracle = self.cfg.n_max;
        for id in [
            ModelId::IVal,
            ModelId::IRun,
            ModelId::IRlm,
            ModelId::IPeak,
            ModelId::FVal,
            ModelId::FRun,
            ModelId::FRlm,
        ] {
            let printed = published_table(id);
            let last = printed.len() - 1;
            let series = self.series_table(id, last)?;
            let prefix: Vec<(usize, usize)> = published::PREFIX_ROWS
                .iter()
                .filter(|(m, _, _)| *m == id.name())
                .map(|&(_, n, k)| (n, k))
                .collect();
            // Printed prefixes are padded with the computed tail so that only
            // printed cells take part in the comparison.
            let expected_rows: Vec<Vec<BigUint>> = printed
                .iter()
                .enumerate()
                .map(|(n, row)| {
                    let mut r: Vec<BigUint> = row.iter().map(|&c| BigUint::from(c)).collect();
                    if let Some(&(_, k)) = prefix.iter().find(|(pn, _)| *pn == n) {
                        r.extend(series.row(n).iter().skip(k + 1).cloned());
                    }
                    // Errata are checked separately below.
                    for &(_, en, ek, _) in published::ERRATA.iter().filter(|e| e.0 == id.name()) {
                        if en == n {
                            r[ek] = series.get(n, ek);
                        }
                    }
                    r
                })
                .collect();
            let expected = DistributionTable::new(id.class(), id.stat(), expected_rows);
            self.push(Check::tables(
                Group::Tables,
                format!("{} printed array = series", id.name()),
                &expected,
                &series,
                0,
                last,
            ));
            let stat = id.stat().expect("distribution model");
            let top = last.min(n_oracle);
            let oracle = self.oracle.distribution(&id.class(), stat)?;
            self.push(Check::tables(
                Group::Tables,
                format!("{} printed array = oracle", id.name()),
                &expected,
                &oracle,
                0,
                top,
            ));
        }
        for &(name, n, k, printed) in published::ERRATA {
            let id: ModelId = name.parse().expect("static model");
            let series = self.series_table(id, n)?;
            let size = match id.class().has(ClassName::Flattened) {
                true => self.rec.cache().bell(n - 1),
                false => self.rec.inc_count(n),
            };
            // Other printed cells of the row, plus computed cells past the printed columns.
            let row = published_table(id)[n];
            let printed_rest: BigUint = row
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &c)| BigUint::from(c))
                .sum();
            let tail: BigUint = series.row(n).iter().skip(row.len()).sum();
            let forced = &size - printed_rest - tail;
            let ok = forced != BigUint::from(printed) && forced == series.get(n, k);
            self.push(Check::holds(
                Group::Tables,
                format!("{name}({n},{k}) printed {printed} contradicts row sum {size}; forced value {forced}"),
                ok,
                format!("series gives {}", series.get(n, k)),
            ));
        }
        Ok(())
    }

    fn witnesses(&mut self) -> Result<(), VerifyError> {
        for &(class, stat, n, k, list) in published::WITNESSES {
            let class: Class = class.parse().expect("static class");
            let stat: Stat = stat.parse().expect("static stat");
            let got = self.cfg.oracle.witnesses(n, &class, stat, k)?;
            let rendered = got
                .iter()
                .map(Permutation::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            self.push(Check::values(
                Group::Witnesses,
                format!("{class}/{stat} witnesses at n={n} k={k}"),
                list,
                rendered,
            ));
            let id = ModelId::for_pair(&class, stat).expect("modelled pair");
            let series = self.series_table(id, n)?;
            self.push(Check::values(
                Group::Witnesses,
                format!("{class}/{stat} count at n={n} k={k}"),
                list.split(' ').count(),
                series.get(n, k),
            ));
        }
        Ok(())
    }

    fn agree(
        &mut self,
        name: &str,
        expected: &DistributionTable,
        computed: &DistributionTable,
        n_min: usize,
        n_max: usize,
    ) {
        let n_max = n_max.min(expected.n_max()).min(computed.n_max());
        self.push(Check::tables(
            Group::Agreement,
            name,
            expected,
            computed,
            n_min,
            n_max,
        ));
    }

    fn agreement(&mut self) -> Result<(), VerifyError> {
        let n = self.cfg.n_max;
        let order = self.series_order;
        for family in Family::ALL {
            let class = family.class();
            let stat = family.stat();
            let id = ModelId::for_pair(&class, stat).expect("every family has a model");
            let oracle = self.oracle.distribution(&class, stat)?;
            let rec = self.rec.table(family, order);
            let series = self.series_table(id, order)?;
            let label = format!("{class}/{stat}");
            self.agree(&format!("{label} oracle = recurrence"), &oracle, &rec, 0, n);
            self.agree(&format!("{label} oracle = series"), &oracle, &series, 0, n);
            self.agree(
                &format!("{label} recurrence = series"),
                &rec,
                &series,
                0,
                order,
            );
        }

        let oracle = self.oracle.distribution(&inc(), Stat::Peak)?;
        let series = self.series_table(ModelId::IPeak, order)?;
        self.agree("increasing/peak oracle = series", &oracle, &series, 0, n);

        for (class, family, id) in [
            (inc(), Family::IncRun, ModelId::IRun),
            (flat(), Family::FlatRun, ModelId::FRun),
        ] {
            let (rec_des, rec_asc) = models::transforms_des_asc(&self.rec.table(family, order));
            let (ser_des, ser_asc) = models::transforms_des_asc(&self.series_table(id, order)?);
            for (stat, rec, ser) in [(Stat::Des, rec_des, ser_des), (Stat::Asc, rec_asc, ser_asc)] {
                let oracle = self.oracle.distribution(&class, stat)?;
                let label = format!("{class}/{stat}");
                self.agree(&format!("{label} oracle = recurrence"), &oracle, &rec, 0, n);
                self.agree(&format!("{label} oracle = series"), &oracle, &ser, 0, n);
                self.agree(
                    &format!("{label} recurrence = series"),
                    &rec,
                    &ser,
                    0,
                    order,
                );
            }
        }

        // On flattened permutations every descent top is a peak, so peak = des.
        let (ser_des, _) = models::transforms_des_asc(&self.series_table(ModelId::FRun, order)?);
        let (rec_des, _) = models::transforms_des_asc(&self.rec.table(Family::FlatRun, order));
        let oracle = self.oracle.distribution(&flat(), Stat::Peak)?;
        let ser = relabel(&ser_des, flat(), Some(Stat::Peak));
        let rec = relabel(&rec_des, flat(), Some(Stat::Peak));
        self.agree("flattened/peak oracle = series", &oracle, &ser, 0, n);
        self.agree("flattened/peak oracle = recurrence", &oracle, &rec, 0, n);

        let valleyless = Class::of(ClassName::Valleyless);
        let oracle = self.oracle.distribution(&valleyless, Stat::Run)?;
        let rec = self.rec.valleyless_runs_table(order);
        let ser = self.series_table(ModelId::VXy, order)?;
        self.agree("valleyless/run oracle = recurrence", &oracle, &rec, 0, n);
        self.agree("valleyless/run oracle = series", &oracle, &ser, 0, n);
        self.agree("valleyless/run recurrence = series", &rec, &ser, 0, order);

        for stat in [Stat::Des, Stat::Asc, Stat::Rlm] {
            let oracle = self.oracle.distribution(&Class::all(), stat)?;
            let rec = self
                .rec
                .symmetric_group_table(stat, n)
                .expect("classical triangle");
            self.agree(
                &format!("all/{stat} oracle = recurrence"),
                &oracle,
                &rec,
                0,
                n,
            );
        }

        let boundary = models::boundary_tables(order)?;
        for table in boundary {
            let oracle = self.oracle.distribution(&table.class, Stat::Val)?;
            self.agree(
                &format!("{}/val oracle = series", table.class),
                &oracle,
                &table,
                0,
                n,
            );
        }
        Ok(())
    }

    fn popularity(&mut self) -> Result<(), VerifyError> {
        for &(name, from, totals) in published::POPULARITY {
            let id: ModelId = name.parse().expect("static model");
            let top = from + totals.len() - 1;
            let series = models::popularity_from_model(id, top)?;
            self.push(Check::values(
                Group::Popularity,
                format!("{name} popularity n={from}..{top} (series)"),
                join(totals),
                join(&series.totals[from..=top]),
            ));
            let stat = id.stat().expect("distribution model");
            let n = top.min(self.cfg.n_max);
            if n >= from {
                let oracle = self.oracle.distribution(&id.class(), stat)?.popularity();
                self.push(Check::values(
                    Group::Popularity,
                    format!("{name} popularity n={from}..{n} (oracle)"),
                    join(&totals[..=n - from]),
                    join(&oracle.totals[from..=n]),
                ));
            }
        }
        let bell: Vec<BigUint> = (1..=self.cfg.n_max)
            .map(|n| self.rec.cache().bell(n))
            .collect();
        let oracle = self.oracle.distribution(&flat(), Stat::Rlm)?.popularity();
        self.push(Check::values(
            Group::Popularity,
            "F_rlm popularity = Bell(n) (oracle)",
            join(&bell),
            join(&oracle.totals[1..]),
        ));
        let series = models::popularity_from_model(ModelId::FRlm, self.cfg.n_max)?;
        self.push(Check::values(
            Group::Popularity,
            "F_rlm popularity = Bell(n) (series)",
            join(&bell),
            join(&series.totals[1..]),
        ));
        Ok(())
    }

    fn counts(&mut self) -> Result<(), VerifyError> {
        let n = self.cfg.n_max;
        let top = (published::INC_COUNTS.len() - 1).min(n);
        let oracle = self.oracle.counts(&inc())?;
        self.push(Check::values(
            Group::Counts,
            format!("inc(n), n=0..{top} (oracle)"),
            join(&published::INC_COUNTS[..=top]),
            join(&oracle[..=top]),
        ));
        let rec: Vec<BigUint> = (0..published::INC_COUNTS.len())
            .map(|m| self.rec.inc_count(m))
            .collect();
        self.push(Check::values(
            Group::Counts,
            "inc(n), n=0..7 (recurrence)",
            join(published::INC_COUNTS),
            join(&rec),
        ));

        let flat_counts = self.oracle.counts(&flat())?;
        let bell: Vec<BigUint> = (1..=n).map(|m| self.rec.cache().bell(m - 1)).collect();
        self.push(Check::values(
            Group::Counts,
            "flattened count = Bell(n-1)",
            join(&bell),
            join(&flat_counts[1..]),
        ));
        if n >= 7 {
            self.push(Check::values(
                Group::Counts,
                "flattened count at n=7",
                203,
                flat_counts[7],
            ));
        }

        // Capacity allows n = 9 for this single small filter.
        let vf = Class::of(ClassName::Valleyless).and(ClassName::Flattened);
        let top = 9.min(self.cfg.oracle.limit());
        let got: Vec<usize> = (2..=top)
            .map(|m| self.cfg.oracle.enumerate(m, &vf).map(Iterator::count))
            .collect::<Result<_, _>>()?;
        self.push(Check::values(
            Group::Counts,
            format!("valleyless flattened count = n-1, n=2..{top}"),
            join(1..top),
            join(got),
        ));

        let valleyless = self.oracle.counts(&Class::of(ClassName::Valleyless))?;
        let pow: Vec<u64> = (1..=n).map(|m| 1u64 << (m - 1)).collect();
        self.push(Check::values(
            Group::Counts,
            "valleyless count = 2^(n-1)",
            join(pow),
            join(&valleyless[1..]),
        ));

        let inc_val = self.oracle.distribution(&inc(), Stat::Val)?;
        let inc_run = self.oracle.distribution(&inc(), Stat::Run)?;
        let c = self.rec.cache().clone();
        let a431: Vec<BigUint> = (3..=n)
            .map(|m| c.reference(crate::recurrences::Reference::A000431(m)))
            .collect();
        let a295: Vec<BigUint> = (2..=n)
            .map(|m| c.reference(crate::recurrences::Reference::A000295(m)))
            .collect();
        self.push(Check::values(
            Group::Counts,
            format!("inc_val(n,1) = 2^(n-2)(2^(n-1)-n), n=3..{n} (oracle)"),
            join(&a431),
            join((3..=n).map(|m| inc_val.get(m, 1))),
        ));
        self.push(Check::values(
            Group::Counts,
            format!("inc_val(n,1) = 2^(n-2)(2^(n-1)-n), n=3..{n} (recurrence)"),
            join(&a431),
            join((3..=n).map(|m| self.rec.inc_val(m, 1))),
        ));
        self.push(Check::values(
            Group::Counts,
            format!("inc_run(n,2) = 2^n-n-1, n=2..{n} (oracle)"),
            join(&a295),
            join((2..=n).map(|m| inc_run.get(m, 2))),
        ));
        self.push(Check::values(
            Group::Counts,
            format!("inc_run(n,2) = 2^n-n-1, n=2..{n} (recurrence)"),
            join(&a295),
            join((2..=n).map(|m| self.rec.inc_run(m, 2))),
        ));
        Ok(())
    }

    fn alternating(&mut self) -> Result<(), VerifyError> {
        let expected = published::ALTERNATING;
        let top = expected.len() - 1;
        let series = models::model(ModelId::AAlt, top)?;
        let got = models::egf_counts(&series);
        self.push(Check::values(
            Group::Alternating,
            "A_alt coefficients",
            join(expected),
            join(&got),
        ));
        let formula: Vec<Rational> = (0..=top)
            .map(|n| Rational::from_integer(self.rec.alternating_count(n).into()))
            .collect();
        self.push(Check::values(
            Group::Alternating,
            "A_alt = double factorial formulas",
            join(&formula),
            join(&got),
        ));
        let class = inc().and(ClassName::Alternating);
        let n = self.cfg.n_max.min(top);
        let oracle = self.oracle.counts(&class)?;
        self.push(Check::values(
            Group::Alternating,
            format!("alternating increasing count n=0..{n} (oracle)"),
            join(&expected[..=n]),
            join(&oracle[..=n]),
        ));
        Ok(())
    }

    fn bijections(&mut self) -> Result<(), VerifyError> {
        let n_max = self.cfg.n_max;
        let mut bad = Vec::new();
        for n in 0..=n_max {
            for (p, s) in self.oracle.members(&inc())?[n].clone() {
                match phi(&p) {
                    Ok(image) => {
                        let back = phi(&image).ok();
                        let complement = n == 0 || image.stat(Stat::Run) == n + 1 - s.run;
                        if !image.is(ClassName::Increasing)
                            || back.as_ref() != Some(&p)
                            || !complement
                        {
                            bad.push(p.to_string());
                        }
                    }
                    Err(e) => bad.push(format!("{p}: {e}")),
                }
            }
        }
        self.push(Check::holds(
            Group::Bijections,
            format!("phi is a run-complementing involution on increasing, n<={n_max}"),
            bad.is_empty(),
            format!("fails at {}", bad.join(" ")),
        ));

        let two_runs = self.cfg.oracle.witnesses(4, &inc(), Stat::Run, 2)?;
        let images: Vec<String> = two_runs
            .iter()
            .map(|p| phi(p).map_or_else(|e| e.to_string(), |q| q.to_string()))
            .collect();
        self.push(Check::values(
            Group::Bijections,
            "phi images of the run-2 permutations of length 4",
            published::PHI_RUN_TWO_IMAGES,
            images.join(" "),
        ));

        let val_eq_des = inc().and(ClassName::ValEqDes);
        for n in 1..=n_max {
            let domain: Vec<Permutation> = self.oracle.members(&val_eq_des)?[n]
                .iter()
                .map(|(p, _)| p.clone())
                .collect();
            let mut images = BTreeSet::new();
            let mut roundtrip = true;
            for p in &domain {
                match gould_forward(p) {
                    Ok(b) => {
                        roundtrip &= gould_inverse(&b).as_ref() == Ok(p);
                        images.insert(b);
                    }
                    Err(_) => roundtrip = false,
                }
            }
            let targets: BTreeSet<_> = all_partitions(n)
                .into_iter()
                .filter(|b| b.last_block_is_singleton())
                .collect();
            self.push(Check::holds(
                Group::Bijections,
                format!("gould roundtrip and image = singleton-last partitions, n={n}"),
                roundtrip && images.len() == domain.len() && images == targets,
                format!(
                    "{} images, {} domain, {} targets",
                    images.len(),
                    domain.len(),
                    targets.len()
                ),
            ));
            if n == 4 {
                self.push(Check::values(
                    Group::Bijections,
                    "gould image count at n=4",
                    9,
                    images.len(),
                ));
            }
        }

        for n in 2..=n_max {
            let mut by_blocks = vec![0u64; n];
            let mut roundtrip = true;
            for (p, _) in &self.oracle.members(&flat())?[n] {
                match flat_partition_forward(p) {
                    Ok(b) => {
                        roundtrip &= &flat_partition_inverse(&b) == p;
                        by_blocks[b.block_count()] += 1;
                    }
                    Err(_) => roundtrip = false,
                }
            }
            let stirling: Vec<BigUint> = (0..n)
                .map(|j| self.rec.cache().stirling2(n - 1, j))
                .collect();
            self.push(Check::holds(
                Group::Bijections,
                format!("flat-partition roundtrip, n={n}"),
                roundtrip,
                "roundtrip fails",
            ));
            self.push(Check::values(
                Group::Bijections,
                format!("flat-partition images by block count = Stirling2(n-1,.), n={n}"),
                join(&stirling),
                join(&by_blocks),
            ));
        }
        Ok(())
    }

    fn val_eq_des(&mut self) -> Result<(), VerifyError> {
        let n = self.cfg.n_max;
        let formula_inc: Vec<BigUint> = (1..=n)
            .map(|m| self.rec.val_eq_des_count(m, ValEqDesClass::Increasing))
            .collect();
        let k = published::INC_VAL_EQ_DES.len().min(n);
        self.push(Check::values(
            Group::ValEqDes,
            format!("increasing val=des formula n=1..{k}"),
            join(&published::INC_VAL_EQ_DES[..k]),
            join(&formula_inc[..k]),
        ));
        let oracle = self.oracle.counts(&inc().and(ClassName::ValEqDes))?;
        self.push(Check::values(
            Group::ValEqDes,
            format!("increasing val=des formula = oracle, n=1..{n}"),
            join(&formula_inc),
            join(&oracle[1..]),
        ));
        let partitions: Vec<usize> = (1..=n)
            .map(|m| {
                all_partitions(m)
                    .iter()
                    .filter(|b| b.last_block_is_singleton())
                    .count()
            })
            .collect();
        self.push(Check::values(
            Group::ValEqDes,
            format!("increasing val=des formula = singleton-last partitions, n=1..{n}"),
            join(&formula_inc),
            join(partitions),
        ));
        let formula_flat: Vec<BigUint> = (2..=n)
            .map(|m| self.rec.val_eq_des_count(m, ValEqDesClass::Flattened))
            .collect();
        if n >= 4 {
            self.push(Check::values(
                Group::ValEqDes,
                "flattened val=des at n=4",
                3,
                &formula_flat[2],
            ));
        }
        let oracle = self.oracle.counts(&flat().and(ClassName::ValEqDes))?;
        self.push(Check::values(
            Group::ValEqDes,
            format!("flattened val=des formula = oracle, n=2..{n}"),
            join(&formula_flat),
            join(&oracle[2..]),
        ));
        Ok(())
    }

    fn residuals(&mut self) -> Result<(), VerifyError> {
        for id in ModelId::ALL {
            let run = self.model_run(id)?.clone();
            for check in &run.checks {
                let nonzero = check
                    .residual
                    .coeffs()
                    .iter()
                    .position(|c| !c.is_zero())
                    .map_or(String::new(), |n| format!("residual nonzero at x^{n}"));
                self.push(Check::holds(
                    Group::Residuals,
                    format!(
                        "{}: {} (order {})",
                        id.name(),
                        check.equation,
                        self.series_order
                    ),
                    check.holds(),
                    nonzero,
                ));
            }
        }
        let sys = models::peak_system(self.series_order)?;
        let divisible = sys.i11.divide_by_y();
        self.push(Check::holds(
            Group::Residuals,
            "I11 is divisible by y",
            divisible.is_ok(),
            divisible.err().map_or(String::new(), |e| e.to_string()),
        ));
        Ok(())
    }
}

pub fn run(cfg: &VerifyConfig) -> Result<Report, VerifyError> {
    if cfg.n_max > cfg.oracle.limit() {
        return Err(OracleError::Capacity {
            n: cfg.n_max,
            limit: cfg.oracle.limit(),
        }
        .into());
    }
    let series_order = cfg.order.max(cfg.n_max).max(published::FLAT_VAL.len() - 1);
    let mut v = Verifier {
        series_order,
        oracle: OracleCache::new(cfg.oracle, cfg.n_max),
        rec: Recurrences::with_perturbation(series_order, cfg.perturbation),
        runs: BTreeMap::new(),
        report: Report::default(),
        cfg: cfg.clone(),
    };
    let wanted = |g: Group| cfg.only.is_none_or(|o| o == g);
    for group in Group::ALL.into_iter().filter(|&g| wanted(g)) {
        match group {
            Group::Tables => v.tables()?,
            Group::Witnesses => v.witnesses()?,
            Group::Agreement => v.agreement()?,
            Group::Popularity => v.popularity()?,
            Group::Counts => v.counts()?,
            Group::Alternating => v.alternating()?,
            Group::Bijections => v.bijections()?,
            Group::ValEqDes => v.val_eq_des()?,
            Group::Residuals => v.residuals()?,
        }
    }
    Ok(v.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bounds_pass() {
        let cfg = VerifyConfig {
            n_max: 5,
            order: 9,
            ..VerifyConfig::default()
        };
        let report = run(&cfg).unwrap();
        let failed: Vec<String> = report
            .failures()
            .map(|c| format!("{}: {} vs {}", c.name, c.expected, c.computed))
            .collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn perturbation_names_the_first_cell() {
        let cfg = VerifyConfig {
            n_max: 5,
            order: 9,
            only: Some(Group::Agreement),
            perturbation: Some("inc_run:3:2".parse().unwrap()),
            ..VerifyConfig::default()
        };
        let report = run(&cfg).unwrap();
        assert!(!report.passed());
        let f = report.first_failure().unwrap();
        assert_eq!(
            (f.class.to_string(), f.stat, f.n, f.k),
            ("increasing".into(), Some(Stat::Run), 3, 2)
        );
    }

    #[test]
    fn groups_parse() {
        assert_eq!("val_eq_des".parse::<Group>().unwrap(), Group::ValEqDes);
        assert!("nope".parse::<Group>().is_err());
    }
}
