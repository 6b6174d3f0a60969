//! Permutation words, the six statistics and class membership.
//!
//! Entries are 1-based, as in one-line notation. A [`Word`] is any sequence of
//! distinct positive integers; a [`Permutation`] is a word whose value set is
//! exactly `{1, ..., n}`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("entry {0} is repeated")]
    Repeated(u32),
    #[error("entries must be positive, found 0")]
    ZeroEntry,
    #[error("value set is not {{1..{0}}}")]
    NotBijection(usize),
    #[error("size mismatch: permutation has length {perm}, value set has {set} elements")]
    SizeMismatch { perm: usize, set: usize },
    #[error("cannot parse {0:?} as a permutation")]
    Parse(String),
    #[error("unknown class {0:?}")]
    UnknownClass(String),
    #[error("unknown statistic {0:?}")]
    UnknownStat(String),
}

/// A sequence of pairwise-distinct positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(entries: Vec<u32>) -> Result<Self, PermError> {
        let mut seen = BTreeSet::new();
        for &e in &entries {
            if e == 0 {
                return Err(PermError::ZeroEntry);
            }
            if !seen.insert(e) {
                return Err(PermError::Repeated(e));
            }
        }
        Ok(Word(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Permutation> for Word {
    fn from(p: Permutation) -> Self {
        Word(p.0)
    }
}

/// A permutation of `[n]` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(entries: Vec<u32>) -> Result<Self, PermError> {
        let n = entries.len();
        let mut seen = vec![false; n];
        for &e in &entries {
            let idx = e as usize;
            if idx == 0 || idx > n || seen[idx - 1] {
                return Err(PermError::NotBijection(n));
            }
            seen[idx - 1] = true;
        }
        Ok(Permutation(entries))
    }

    /// The empty permutation.
    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn statistics(&self) -> StatProfile {
        StatProfile::of(&self.0)
    }

    pub fn stat(&self, stat: Stat) -> usize {
        self.statistics().get(stat)
    }

    pub fn valley_heights(&self) -> Vec<u32> {
        valley_heights(&self.0)
    }

    pub fn is(&self, class: ClassName) -> bool {
        class.contains(&self.0)
    }

    /// Adds `shift` to every entry, producing a word over `{shift+1, ..., shift+n}`.
    pub fn shifted(&self, shift: u32) -> Word {
        Word(self.0.iter().map(|&e| e + shift).collect())
    }

    pub fn reversed(&self) -> Permutation {
        Permutation(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for Permutation {
    /// Concatenated digits when every entry is below 10, space separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let sep = if self.0.len() < 10 { "" } else { " " };
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(sep))
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts `"23154"`, `"2 3 1 5 4"`, `"2,3,1,5,4"`, and `""`/`"ε"` for the empty permutation.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "e" {
            return Ok(Permutation::empty());
        }
        let parse_err = || PermError::Parse(s.to_string());
        let entries: Vec<u32> = if s.contains(|c: char| c == ',' || c.is_whitespace()) {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| parse_err()))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(parse_err))
                .collect::<Result<_, _>>()?
        };
        Permutation::new(entries)
    }
}

/// The permutation order-isomorphic to `w` (`red`).
pub fn reduce(w: &Word) -> Permutation {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by_key(|&i| w.0[i]);
    let mut out = vec![0u32; w.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank as u32 + 1;
    }
    Permutation(out)
}

/// The value set of `w` (`dom`).
pub fn support(w: &Word) -> BTreeSet<u32> {
    w.0.iter().copied().collect()
}

/// The unique word with value set `s` that reduces to `p` (`χ`).
pub fn embed(p: &Permutation, s: &BTreeSet<u32>) -> Result<Word, PermError> {
    if p.len() != s.len() {
        return Err(PermError::SizeMismatch {
            perm: p.len(),
            set: s.len(),
        });
    }
    let values: Vec<u32> = s.iter().copied().collect();
    let entries = p.0.iter().map(|&e| values[e as usize - 1]).collect();
    Word::new(entries)
}

/// The statistics tracked on permutations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stat {
    Val,
    Peak,
    Des,
    Asc,
    Run,
    Rlm,
}

impl Stat {
    pub const ALL: [Stat; 6] = [
        Stat::Val,
        Stat::Peak,
        Stat::Des,
        Stat::Asc,
        Stat::Run,
        Stat::Rlm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stat::Val => "val",
            Stat::Peak => "peak",
            Stat::Des => "des",
            Stat::Asc => "asc",
            Stat::Run => "run",
            Stat::Rlm => "rlm",
        }
    }
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stat {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stat::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| PermError::UnknownStat(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct StatProfile {
    pub val: usize,
    pub peak: usize,
    pub des: usize,
    pub asc: usize,
    pub run: usize,
    pub rlm: usize,
}

impl StatProfile {
    /// One left-to-right pass for the local statistics, one right-to-left
    /// running-minimum scan for `rlm`.
    pub fn of(w: &[u32]) -> Self {
        let n = w.len();
        let mut p = StatProfile::default();
        if n == 0 {
            return p;
        }
        for i in 0..n - 1 {
            if w[i] < w[i + 1] {
                p.asc += 1;
            } else {
                p.des += 1;
            }
            if i >= 1 {
                if w[i - 1] > w[i] && w[i] < w[i + 1] {
                    p.val += 1;
                } else if w[i - 1] < w[i] && w[i] > w[i + 1] {
                    p.peak += 1;
                }
            }
        }
        p.run = p.des + 1;
        let mut min = u32::MAX;
        for &e in w.iter().rev() {
            if e < min {
                min = e;
                p.rlm += 1;
            }
        }
        p
    }

    pub fn get(&self, stat: Stat) -> usize {
        match stat {
            Stat::Val => self.val,
            Stat::Peak => self.peak,
            Stat::Des => self.des,
            Stat::Asc => self.asc,
            Stat::Run => self.run,
            Stat::Rlm => self.rlm,
        }
    }
}

pub fn valley_heights(w: &[u32]) -> Vec<u32> {
    w.windows(3)
        .filter(|t| t[0] > t[1] && t[1] < t[2])
        .map(|t| t[1])
        .collect()
}

/// Heads of the maximal ascending runs, left to right.
pub fn run_heads(w: &[u32]) -> Vec<u32> {
    let mut heads = Vec::new();
    for (i, &e) in w.iter().enumerate() {
        if i == 0 || w[i - 1] > e {
            heads.push(e);
        }
    }
    heads
}

/// Right-to-left minima, left to right (hence increasing).
pub fn right_to_left_minima(w: &[u32]) -> Vec<usize> {
    let mut idx = Vec::new();
    let mut min = u32::MAX;
    for (i, &e) in w.iter().enumerate().rev() {
        if e < min {
            min = e;
            idx.push(i);
        }
    }
    idx.reverse();
    idx
}

fn strictly_increasing(xs: &[u32]) -> bool {
    xs.windows(2).all(|p| p[0] < p[1])
}

/// Elementary permutation classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassName {
    Increasing,
    Flattened,
    Valleyless,
    Alternating,
    Identity,
    /// `starts_desc` is `a = 1`, `ends_asc` is `b = 1`. Length 0 and 1 belong to `(0,0)`.
    Boundary {
        starts_desc: bool,
        ends_asc: bool,
    },
    ValEqDes,
}

impl ClassName {
    pub fn boundary(a: u8, b: u8) -> Self {
        ClassName::Boundary {
            starts_desc: a == 1,
            ends_asc: b == 1,
        }
    }

    pub fn contains(self, w: &[u32]) -> bool {
        let n = w.len();
        match self {
            ClassName::Increasing => strictly_increasing(&valley_heights(w)),
            ClassName::Flattened => strictly_increasing(&run_heads(w)),
            ClassName::Valleyless => valley_heights(w).is_empty(),
            ClassName::Alternating => {
                w.windows(2)
                    .enumerate()
                    .all(|(i, p)| if i % 2 == 0 { p[0] > p[1] } else { p[0] < p[1] })
            }
            ClassName::Identity => w.iter().enumerate().all(|(i, &e)| e as usize == i + 1),
            ClassName::Boundary {
                starts_desc,
                ends_asc,
            } => {
                if n < 2 {
                    !starts_desc && !ends_asc
                } else {
                    (w[0] > w[1]) == starts_desc && (w[n - 2] < w[n - 1]) == ends_asc
                }
            }
            ClassName::ValEqDes => {
                let p = StatProfile::of(w);
                p.val == p.des
            }
        }
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassName::Increasing => f.write_str("increasing"),
            ClassName::Flattened => f.write_str("flattened"),
            ClassName::Valleyless => f.write_str("valleyless"),
            ClassName::Alternating => f.write_str("alternating"),
            ClassName::Identity => f.write_str("identity"),
            ClassName::Boundary {
                starts_desc,
                ends_asc,
            } => write!(f, "boundary({},{})", *starts_desc as u8, *ends_asc as u8),
            ClassName::ValEqDes => f.write_str("val=des"),
        }
    }
}

impl FromStr for ClassName {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let class = match t.as_str() {
            "increasing" => ClassName::Increasing,
            "flattened" => ClassName::Flattened,
            "valleyless" => ClassName::Valleyless,
            "alternating" => ClassName::Alternating,
            "identity" => ClassName::Identity,
            "val=des" | "val_eq_des" | "val-eq-des" => ClassName::ValEqDes,
            _ => {
                let inner = t
                    .strip_prefix("boundary(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| PermError::UnknownClass(s.to_string()))?;
                match inner.replace(' ', "").as_str() {
                    "0,0" => ClassName::boundary(0, 0),
                    "0,1" => ClassName::boundary(0, 1),
                    "1,0" => ClassName::boundary(1, 0),
                    "1,1" => ClassName::boundary(1, 1),
                    _ => return Err(PermError::UnknownClass(s.to_string())),
                }
            }
        };
        Ok(class)
    }
}

/// A conjunction of elementary classes; the empty conjunction is all of `S`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Class(BTreeSet<ClassName>);

impl Class {
    pub fn all() -> Self {
        Class(BTreeSet::new())
    }

    pub fn of(name: ClassName) -> Self {
        Class(BTreeSet::from([name]))
    }

    pub fn and(mut self, name: ClassName) -> Self {
        self.0.insert(name);
        self
    }

    pub fn names(&self) -> impl Iterator<Item = ClassName> + '_ {
        self.0.iter().copied()
    }

    pub fn is_all(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has(&self, name: ClassName) -> bool {
        self.0.contains(&name)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.0.iter().all(|c| c.contains(p.entries()))
    }
}

impl From<ClassName> for Class {
    fn from(name: ClassName) -> Self {
        Class::of(name)
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("all");
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for Class {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("all") {
            return Ok(Class::all());
        }
        t.split('+')
            .map(str::parse)
            .collect::<Result<BTreeSet<_>, _>>()
            .map(Class)
    }
}

/// All permutations of `[n]` in lexicographic order.
pub fn permutations(n: usize) -> Permutations {
    Permutations {
        next: Some((1..=n as u32).collect()),
    }
}

pub struct Permutations {
    next: Option<Vec<u32>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation(current))
    }
}

/// Advances `v` to its lexicographic successor; false if `v` was the last one.
fn next_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn w(v: &[u32]) -> Word {
        Word::new(v.to_vec()).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&w(&[3, 6, 1, 4])), p("2413"));
        assert_eq!(reduce(&Word::default()), Permutation::empty());
        assert_eq!(reduce(&w(&[9, 7, 5])), p("321"));
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&w(&[3, 6, 1, 4])), BTreeSet::from([1, 3, 4, 6]));
        assert!(support(&Word::default()).is_empty());
        assert_eq!(support(&w(&[2, 1])), BTreeSet::from([1, 2]));
    }

    #[test]
    fn embed_examples() {
        let s = BTreeSet::from([2, 6, 7, 9]);
        assert_eq!(embed(&p("4132"), &s).unwrap(), w(&[9, 2, 7, 6]));
        assert_eq!(
            embed(&p("12"), &BTreeSet::from([4, 5])).unwrap(),
            w(&[4, 5])
        );
        assert_eq!(embed(&p("1"), &BTreeSet::from([7])).unwrap(), w(&[7]));
        assert_eq!(
            embed(&p("12"), &BTreeSet::from([7])),
            Err(PermError::SizeMismatch { perm: 2, set: 1 })
        );
    }

    #[test]
    fn statistics_examples() {
        let s = p("152436978").statistics();
        assert_eq!((s.run, s.des, s.rlm), (4, 3, 6));
        let s = p("612847593").statistics();
        assert_eq!(s.val, 3);
        assert_eq!(p("612847593").valley_heights(), vec![1, 4, 5]);
        for n in 0..7 {
            let s = Permutation::identity(n).statistics();
            assert_eq!(s.val, 0);
            assert_eq!(s.peak, 0);
            assert_eq!(s.des, 0);
            assert_eq!(s.asc, n.saturating_sub(1));
            assert_eq!(s.run, usize::from(n > 0));
            assert_eq!(s.rlm, n);
        }
        assert_eq!(p("3142").valley_heights(), vec![1]);
        assert!(Permutation::identity(5).valley_heights().is_empty());
    }

    #[test]
    fn classify_examples() {
        assert!(p("612847593").is(ClassName::Increasing));
        assert!(p("152436978").is(ClassName::Flattened));
        assert!(!p("536142").is(ClassName::Increasing));
        assert!(!p("21").is(ClassName::Flattened));
        assert!(p("2143").is(ClassName::Alternating));
        assert!(!p("1243").is(ClassName::Alternating));
        assert!(p("").is(ClassName::boundary(0, 0)));
        assert!(p("1").is(ClassName::boundary(0, 0)));
        assert!(p("2134").is(ClassName::boundary(1, 1)));
        assert!(p("1243").is(ClassName::boundary(0, 0)));
        assert!(p("2134").is(ClassName::ValEqDes));
        assert!(!p("2143").is(ClassName::ValEqDes));
        assert!(!p("2341").is(ClassName::ValEqDes));
    }

    #[test]
    fn parsing_round_trips() {
        assert_eq!(p("23154").to_string(), "23154");
        assert_eq!(p("2 3 1 5 4"), p("23154"));
        assert_eq!(p("ε").to_string(), "ε");
        assert!("1 1".parse::<Permutation>().is_err());
        assert!("13".parse::<Permutation>().is_err());
        let c: Class = "increasing+alternating".parse().unwrap();
        assert_eq!(c.to_string(), "increasing+alternating");
        let c: Class = "increasing+boundary(1,0)".parse().unwrap();
        assert!(c.has(ClassName::boundary(1, 0)));
        assert_eq!("all".parse::<Class>().unwrap(), Class::all());
        assert!("sorted".parse::<Class>().is_err());
        assert_eq!("RLM".parse::<Stat>().unwrap(), Stat::Rlm);
    }

    #[test]
    fn lexicographic_order() {
        let all: Vec<String> = permutations(3).map(|q| q.to_string()).collect();
        assert_eq!(all, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(permutations(0).count(), 1);
        assert_eq!(permutations(6).count(), 720);
    }

    #[test]
    fn profile_identities_hold_on_small_symmetric_groups() {
        for n in 1..=8 {
            for q in permutations(n) {
                let s = q.statistics();
                assert_eq!(s.run, s.des + 1);
                assert_eq!(s.asc + s.des, n - 1);
                assert!(s.val <= s.des && s.peak <= s.asc);
            }
        }
    }

    #[test]
    fn valleyless_is_unimodal_and_counted_by_powers_of_two() {
        fn unimodal(w: &[u32]) -> bool {
            let top = w.iter().position(|&e| e as usize == w.len()).unwrap_or(0);
            w[..=top].windows(2).all(|p| p[0] < p[1]) && w[top..].windows(2).all(|p| p[0] > p[1])
        }
        for n in 1..=8 {
            let mut count = 0;
            for q in permutations(n) {
                let vl = q.is(ClassName::Valleyless);
                assert_eq!(vl, unimodal(q.entries()));
                count += vl as usize;
            }
            assert_eq!(count, 1 << (n - 1));
        }
    }

    #[test]
    fn flattened_properties() {
        for n in 0..=8 {
            for q in permutations(n) {
                if q.is(ClassName::Flattened) {
                    assert!(q.is(ClassName::Increasing), "{q}");
                    if n >= 1 {
                        let s = q.statistics();
                        assert_eq!(s.run, s.peak + 1, "{q}");
                        assert_eq!(s.run, s.des + 1, "{q}");
                    }
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm_and_set() -> impl Strategy<Value = (Permutation, BTreeSet<u32>)> {
            (0usize..=6).prop_flat_map(|n| {
                let perm = Just((1..=n as u32).collect::<Vec<_>>())
                    .prop_shuffle()
                    .prop_map(|v| Permutation::new(v).unwrap());
                let set = proptest::collection::btree_set(1u32..100, n);
                (perm, set)
            })
        }

        proptest! {
            #[test]
            fn embed_then_reduce_is_identity((perm, set) in perm_and_set()) {
                let word = embed(&perm, &set).unwrap();
                prop_assert_eq!(reduce(&word), perm);
                prop_assert_eq!(support(&word), set);
            }
        }
    }
}
