//! Closed recurrences and classical number triangles, computed with integer
//! arithmetic only and independently of both the oracle and the series engine.
//!
//! Tables are filled once, up to a fixed length, and read many times.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::perm::{Class, ClassName, Stat};
use crate::table::DistributionTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecurrenceError {
    #[error("unknown recurrence family {0:?}")]
    UnknownFamily(String),
    #[error("malformed perturbation {0:?}, expected FAMILY:N:K")]
    BadPerturbation(String),
}

/// The two-parameter recurrences with a distribution-table interpretation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    IncVal,
    IncRun,
    IncRlm,
    FlatVal,
    FlatRun,
    FlatRlm,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::IncVal,
        Family::IncRun,
        Family::IncRlm,
        Family::FlatVal,
        Family::FlatRun,
        Family::FlatRlm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::IncVal => "inc_val",
            Family::IncRun => "inc_run",
            Family::IncRlm => "inc_rlm",
            Family::FlatVal => "flat_val",
            Family::FlatRun => "flat_run",
            Family::FlatRlm => "flat_rlm",
        }
    }

    pub fn class(self) -> Class {
        match self {
            Family::IncVal | Family::IncRun | Family::IncRlm => Class::of(ClassName::Increasing),
            _ => Class::of(ClassName::Flattened),
        }
    }

    pub fn stat(self) -> Stat {
        match self {
            Family::IncVal | Family::FlatVal => Stat::Val,
            Family::IncRun | Family::FlatRun => Stat::Run,
            Family::IncRlm | Family::FlatRlm => Stat::Rlm,
        }
    }

    pub fn for_pair(class: &Class, stat: Stat) -> Option<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.stat() == stat && &f.class() == class)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = RecurrenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().replace('-', "_").to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name() == t)
            .ok_or_else(|| RecurrenceError::UnknownFamily(s.to_string()))
    }
}

/// Test hook: adds `delta` to entry `(n, k)` of a family while its table is
/// being filled, so the error propagates through the recurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub delta: u32,
}

impl FromStr for Perturbation {
    type Err = RecurrenceError;

    /// `FAMILY:N:K` with an optional `:DELTA` (default 1).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RecurrenceError::BadPerturbation(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        Ok(Perturbation {
            family: parts[0].parse()?,
            n: parts[1].parse().map_err(|_| bad())?,
            k: parts[2].parse().map_err(|_| bad())?,
            delta: match parts.get(3) {
                Some(d) => d.parse().map_err(|_| bad())?,
                None => 1,
            },
        })
    }
}

/// Classical sequences, for cross-checks and row sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reference {
    Bell(usize),
    Stirling2(usize, usize),
    Stirling1Unsigned(usize, usize),
    Eulerian(usize, usize),
    Binomial(usize, usize),
    DoubleFactorial(usize),
    /// `2^{n−2}(2^{n−1} − n)`, `n ≥ 3`.
    A000431(usize),
    /// `2^n − n − 1`.
    A000295(usize),
}

type Triangle = Vec<Vec<BigUint>>;

fn triangle(n_max: usize, mut cell: impl FnMut(&Triangle, usize, usize) -> BigUint) -> Triangle {
    let mut t: Triangle = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut row = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let v = cell(&t, n, k);
            row.push(v);
        }
        t.push(row);
    }
    t
}

fn at(t: &Triangle, n: usize, k: isize) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    t.get(n)
        .and_then(|r| r.get(k as usize))
        .cloned()
        .unwrap_or_default()
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// Binomials, Stirling numbers, Eulerian numbers, Bell numbers and double
/// factorials up to a fixed size.
#[derive(Clone, Debug)]
pub struct SequenceCache {
    n_max: usize,
    binomial: Triangle,
    stirling2: Triangle,
    stirling1: Triangle,
    eulerian: Triangle,
    bell: Vec<BigUint>,
    double_factorial: Vec<BigUint>,
}

impl SequenceCache {
    pub fn new(n_max: usize) -> Self {
        let binomial = triangle(n_max, |t, n, k| {
            if k == 0 || k == n {
                BigUint::one()
            } else {
                &t[n - 1][k - 1] + &t[n - 1][k]
            }
        });
        let stirling2 = triangle(n_max, |t, n, k| match (n, k) {
            (0, 0) => BigUint::one(),
            (_, 0) => BigUint::zero(),
            _ => BigUint::from(k) * at(t, n - 1, k as isize) + at(t, n - 1, k as isize - 1),
        });
        let stirling1 = triangle(n_max, |t, n, k| match (n, k) {
            (0, 0) => BigUint::one(),
            (_, 0) => BigUint::zero(),
            _ => BigUint::from(n - 1) * at(t, n - 1, k as isize) + at(t, n - 1, k as isize - 1),
        });
        let eulerian = triangle(n_max, |t, n, k| match (n, k) {
            (0, 0) => BigUint::one(),
            (0, _) => BigUint::zero(),
            _ => {
                BigUint::from(k + 1) * at(t, n - 1, k as isize)
                    + BigUint::from(n - k) * at(t, n - 1, k as isize - 1)
            }
        });
        let bell = stirling2.iter().map(|r| r.iter().sum()).collect();
        let mut double_factorial = vec![BigUint::one(), BigUint::one()];
        for n in 2..=n_max.max(1) {
            let v = BigUint::from(n) * &double_factorial[n - 2];
            double_factorial.push(v);
        }
        SequenceCache {
            n_max,
            binomial,
            stirling2,
            stirling1,
            eulerian,
            bell,
            double_factorial,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn binomial(&self, n: usize, k: usize) -> BigUint {
        at(&self.binomial, n, k as isize)
    }

    pub fn stirling2(&self, n: usize, k: usize) -> BigUint {
        at(&self.stirling2, n, k as isize)
    }

    pub fn stirling1(&self, n: usize, k: usize) -> BigUint {
        at(&self.stirling1, n, k as isize)
    }

    pub fn eulerian(&self, n: usize, k: usize) -> BigUint {
        at(&self.eulerian, n, k as isize)
    }

    pub fn bell(&self, n: usize) -> BigUint {
        self.bell[n].clone()
    }

    /// `n!!`, with `0!! = 1`.
    pub fn double_factorial(&self, n: usize) -> BigUint {
        self.double_factorial[n].clone()
    }

    pub fn reference(&self, r: Reference) -> BigUint {
        match r {
            Reference::Bell(n) => self.bell(n),
            Reference::Stirling2(n, k) => self.stirling2(n, k),
            Reference::Stirling1Unsigned(n, k) => self.stirling1(n, k),
            Reference::Eulerian(n, k) => self.eulerian(n, k),
            Reference::Binomial(n, k) => self.binomial(n, k),
            Reference::DoubleFactorial(n) => self.double_factorial(n),
            Reference::A000431(n) => {
                let v = BigInt::from(pow2(n - 2)) * (BigInt::from(pow2(n - 1)) - BigInt::from(n));
                v.try_into().expect("A000431 is nonnegative for n >= 3")
            }
            Reference::A000295(n) => pow2(n) - BigUint::from(n + 1),
        }
    }
}

/// Which side of the val = des identity to count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValEqDesClass {
    Increasing,
    Flattened,
}

/// All recurrence tables up to a fixed length.
#[derive(Clone, Debug)]
pub struct Recurrences {
    n_max: usize,
    cache: SequenceCache,
    inc: Vec<BigUint>,
    inc_val: Triangle,
    inc_run: Triangle,
    inc_rlm: Triangle,
    flat_aux: Triangle,
    flat_run: Triangle,
}

impl Recurrences {
    pub fn new(n_max: usize) -> Self {
        Self::build(n_max, None)
    }

    pub fn with_perturbation(n_max: usize, perturbation: Option<Perturbation>) -> Self {
        Self::build(n_max, perturbation)
    }

    fn build(n_max: usize, perturbation: Option<Perturbation>) -> Self {
        let cache = SequenceCache::new(n_max + 1);
        let bump = |family: Family, n: usize, k: usize, v: BigUint| -> BigUint {
            match perturbation {
                Some(p) if p.family == family && p.n == n && p.k == k => v + p.delta,
                _ => v,
            }
        };
        let c = |n: usize, i: usize| cache.binomial(n, i);

        // inc(n+1) = 2 inc(n) + Σ_{i=1}^{n-1} C(n,i) 2^{i-1} inc(n-i), inc(0) = inc(1) = 1
        let mut inc: Vec<BigUint> = vec![BigUint::one(), BigUint::one()];
        for m in 2..=n_max.max(1) {
            let n = m - 1;
            let mut v = BigUint::from(2u32) * &inc[n];
            for i in 1..n {
                v += c(n, i) * pow2(i - 1) * &inc[n - i];
            }
            inc.push(v);
        }
        inc.truncate(n_max + 1);

        // inc_val(n+1,k) = 2 inc_val(n,k) + Σ_{i=1}^{n-1} C(n,i) 2^{i-1} inc_val(n-i,k-1)
        let inc_val = triangle(n_max, |t, m, k| {
            let v = match (m, k) {
                (0, 0) => BigUint::one(),
                (_, 0) => pow2(m - 1),
                (0, _) => BigUint::zero(),
                _ => {
                    let n = m - 1;
                    let mut v = BigUint::from(2u32) * at(t, n, k as isize);
                    for i in 1..n {
                        v += c(n, i) * pow2(i - 1) * at(t, n - i, k as isize - 1);
                    }
                    v
                }
            };
            bump(Family::IncVal, m, k, v)
        });

        // inc_run(n+1,k) = inc_run(n,k) + inc_run(n,k-1)
        //   + Σ_{i=1}^{n-1} Σ_{j=1}^{k-1} C(n,i) C(i-1,k-j-1) inc_run(n-i,j), for k ≥ 1
        let inc_run = triangle(n_max, |t, m, k| {
            let v = match (m, k) {
                (0, 0) => BigUint::one(),
                (_, 0) | (0, _) => BigUint::zero(),
                _ => {
                    let n = m - 1;
                    let mut v = at(t, n, k as isize) + at(t, n, k as isize - 1);
                    for i in 1..n {
                        for j in 1..k {
                            let r = k - j - 1;
                            if r < i {
                                v += c(n, i) * c(i - 1, r) * at(t, n - i, j as isize);
                            }
                        }
                    }
                    v
                }
            };
            bump(Family::IncRun, m, k, v)
        });

        // inc_rlm(n+1,k) = inc_rlm(n,k-1) + Σ_{i=1}^{n-1} C(n,i) 2^{i-1} inc_rlm(n-i,k-1), k ≥ 2;
        // inc_rlm(n,1) = inc(n-1)
        let inc_rlm = triangle(n_max, |t, m, k| {
            let v = match (m, k) {
                (0, 0) => BigUint::one(),
                (_, 0) | (0, _) => BigUint::zero(),
                (_, 1) => inc[m - 1].clone(),
                _ => {
                    let n = m - 1;
                    let mut v = at(t, n, k as isize - 1);
                    for i in 1..n {
                        v += c(n, i) * pow2(i - 1) * at(t, n - i, k as isize - 1);
                    }
                    v
                }
            };
            bump(Family::IncRlm, m, k, v)
        });

        // b(n+1,k) = b(n,k) + Σ_{i=1}^{n-1} C(n,i) b(i,k-1); b(0,0) = 1, b(n,0) = n.
        // The perturbation hook addresses f_val(n,k) = b(n-1,k).
        let flat_aux = triangle(n_max, |t, m, k| {
            let v = match (m, k) {
                (0, 0) => BigUint::one(),
                (_, 0) => BigUint::from(m),
                (0, _) => BigUint::zero(),
                _ => {
                    let n = m - 1;
                    let mut v = at(t, n, k as isize);
                    for i in 1..n {
                        v += c(n, i) * at(t, i, k as isize - 1);
                    }
                    v
                }
            };
            bump(Family::FlatVal, m + 1, k, v)
        });

        // f_run(n,k) = k f_run(n-1,k) + (n-2) f_run(n-2,k-1); f_run(0,0) = f_run(1,1) = 1
        let flat_run = triangle(n_max, |t, n, k| {
            let v = match (n, k) {
                (0, 0) | (1, 1) => BigUint::one(),
                (0, _) | (1, _) => BigUint::zero(),
                _ => {
                    BigUint::from(k) * at(t, n - 1, k as isize)
                        + BigUint::from(n - 2) * at(t, n - 2, k as isize - 1)
                }
            };
            bump(Family::FlatRun, n, k, v)
        });

        let mut rec = Recurrences {
            n_max,
            cache,
            inc,
            inc_val,
            inc_run,
            inc_rlm,
            flat_aux,
            flat_run,
        };
        if let Some(p) = perturbation.filter(|p| p.family == Family::FlatRlm) {
            // flat_rlm has no recurrence of its own; perturb the underlying Stirling table.
            if p.n >= 1 && p.k >= 1 && p.n - 1 <= n_max {
                let row = &mut rec.cache.stirling2[p.n - 1];
                if p.k - 1 < row.len() {
                    row[p.k - 1] += p.delta;
                }
            }
        }
        rec
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn cache(&self) -> &SequenceCache {
        &self.cache
    }

    pub fn inc_count(&self, n: usize) -> BigUint {
        self.inc[n].clone()
    }

    pub fn inc_val(&self, n: usize, k: usize) -> BigUint {
        at(&self.inc_val, n, k as isize)
    }

    pub fn inc_run(&self, n: usize, k: usize) -> BigUint {
        at(&self.inc_run, n, k as isize)
    }

    pub fn inc_rlm(&self, n: usize, k: usize) -> BigUint {
        at(&self.inc_rlm, n, k as isize)
    }

    /// `f_val(n+1, k) = b(n, k)`, `f_val(0,0) = 1`.
    pub fn flat_val(&self, n: usize, k: usize) -> BigUint {
        match n {
            0 => BigUint::from((k == 0) as u32),
            _ => at(&self.flat_aux, n - 1, k as isize),
        }
    }

    pub fn flat_run(&self, n: usize, k: usize) -> BigUint {
        at(&self.flat_run, n, k as isize)
    }

    /// `f_rlm(n, k) = S(n−1, k−1)`.
    pub fn flat_rlm(&self, n: usize, k: usize) -> BigUint {
        match (n, k) {
            (0, 0) => BigUint::one(),
            (0, _) | (_, 0) => BigUint::zero(),
            _ => self.cache.stirling2(n - 1, k - 1),
        }
    }

    pub fn family(&self, family: Family, n: usize, k: usize) -> BigUint {
        match family {
            Family::IncVal => self.inc_val(n, k),
            Family::IncRun => self.inc_run(n, k),
            Family::IncRlm => self.inc_rlm(n, k),
            Family::FlatVal => self.flat_val(n, k),
            Family::FlatRun => self.flat_run(n, k),
            Family::FlatRlm => self.flat_rlm(n, k),
        }
    }

    pub fn table(&self, family: Family, n_max: usize) -> DistributionTable {
        let n_max = n_max.min(self.n_max);
        let rows = (0..=n_max)
            .map(|n| (0..=n).map(|k| self.family(family, n, k)).collect())
            .collect();
        DistributionTable::new(family.class(), Some(family.stat()), rows)
    }

    /// Valleyless permutations by runs: `C(n−1, k−1)` for `n ≥ 1`.
    pub fn valleyless_runs_table(&self, n_max: usize) -> DistributionTable {
        let rows = (0..=n_max.min(self.n_max))
            .map(|n| {
                (0..=n)
                    .map(|k| match (n, k) {
                        (0, 0) => BigUint::one(),
                        (0, _) | (_, 0) => BigUint::zero(),
                        _ => self.cache.binomial(n - 1, k - 1),
                    })
                    .collect()
            })
            .collect();
        DistributionTable::new(Class::of(ClassName::Valleyless), Some(Stat::Run), rows)
    }

    /// Alternating increasing permutations: `a_{2m+1} = (2m)!!`,
    /// `a_{2m+2} = (2m+2)!! − (2m+1)!!`, `a_0 = 1`.
    pub fn alternating_count(&self, n: usize) -> BigUint {
        let df = |m: usize| self.cache.double_factorial(m);
        match n {
            0 => BigUint::one(),
            _ if n % 2 == 1 => df(n - 1),
            _ => df(n) - df(n - 1),
        }
    }

    pub fn alternating_table(&self, n_max: usize) -> DistributionTable {
        let rows = (0..=n_max.min(self.n_max))
            .map(|n| vec![self.alternating_count(n)])
            .collect();
        DistributionTable::new(
            Class::of(ClassName::Increasing).and(ClassName::Alternating),
            None,
            rows,
        )
    }

    /// Eulerian numbers (descents, ascents) or unsigned Stirling numbers of the first
    /// kind (right-to-left minima) over all of `S_n`.
    pub fn symmetric_group_table(&self, stat: Stat, n_max: usize) -> Option<DistributionTable> {
        let n_max = n_max.min(self.n_max);
        let cell = |n: usize, k: usize| match stat {
            Stat::Des | Stat::Asc => Some(self.cache.eulerian(n, k)),
            Stat::Rlm => Some(self.cache.stirling1(n, k)),
            _ => None,
        };
        let rows = (0..=n_max)
            .map(|n| (0..=n).map(|k| cell(n, k)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(DistributionTable::new(Class::all(), Some(stat), rows))
    }

    /// The double sum `Σ_{k=0}^{m} Σ_{j=k}^{m} S(j,k) k^{m−j}` with `m = n − 1`
    /// (increasing) or `m = n − 2` (flattened), and `0^0 = 1`.
    pub fn val_eq_des_count(&self, n: usize, class: ValEqDesClass) -> BigUint {
        let shift = match class {
            ValEqDesClass::Increasing => 1,
            ValEqDesClass::Flattened => 2,
        };
        // Below the range of the double sum only ε and the one-element
        // permutation exist, both with val = des = 0.
        if n < shift {
            return BigUint::one();
        }
        let m = n - shift;
        let mut total = BigUint::zero();
        for k in 0..=m {
            for j in k..=m {
                total += self.cache.stirling2(j, k) * BigUint::from(k).pow((m - j) as u32);
            }
        }
        total
    }
}

impl Default for Recurrences {
    fn default() -> Self {
        Recurrences::new(12)
    }
}
