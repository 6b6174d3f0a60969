//! Constructive correspondences: the run-complement involution on increasing
//! permutations and two maps onto set partitions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::{
    embed, reduce, right_to_left_minima, support, ClassName, Permutation, Stat, Word,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BijectionError {
    #[error("{0} is not an increasing permutation")]
    NotIncreasing(Permutation),
    #[error("{0} is not flattened")]
    NotFlattened(Permutation),
    #[error("{0} does not satisfy val = des")]
    NotValEqDes(Permutation),
    #[error("the empty permutation has no partition image")]
    Empty,
    #[error("last block of {0} is not a singleton")]
    LastBlockNotSingleton(SetPartition),
    #[error("invalid set partition: {0}")]
    InvalidPartition(String),
    #[error("recursive call left the increasing class at {0}")]
    ClosureViolation(Permutation),
}

/// A partition of `[m]`, blocks ordered by their minima.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    ground: usize,
    blocks: Vec<BTreeSet<u32>>,
}

impl SetPartition {
    pub fn new(ground: usize, blocks: Vec<BTreeSet<u32>>) -> Result<Self, BijectionError> {
        let mut seen = BTreeSet::new();
        for b in &blocks {
            if b.is_empty() {
                return Err(BijectionError::InvalidPartition("empty block".into()));
            }
            for &e in b {
                if e == 0 || e as usize > ground {
                    return Err(BijectionError::InvalidPartition(format!(
                        "{e} is outside [{ground}]"
                    )));
                }
                if !seen.insert(e) {
                    return Err(BijectionError::InvalidPartition(format!(
                        "{e} appears twice"
                    )));
                }
            }
        }
        if seen.len() != ground {
            return Err(BijectionError::InvalidPartition(format!(
                "blocks do not cover [{ground}]"
            )));
        }
        let mut blocks = blocks;
        blocks.sort_by_key(|b| *b.first().expect("nonempty"));
        Ok(SetPartition { ground, blocks })
    }

    /// The partition of `[0]`.
    pub fn empty() -> Self {
        SetPartition {
            ground: 0,
            blocks: Vec::new(),
        }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn blocks(&self) -> &[BTreeSet<u32>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn last_block_is_singleton(&self) -> bool {
        self.blocks.last().is_some_and(|b| b.len() == 1)
    }
}

impl fmt::Display for SetPartition {
    /// `{1,4}/{2,3}`; the empty partition prints as `∅`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(u32::to_string).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        f.write_str(&parts.join("/"))
    }
}

impl FromStr for SetPartition {
    type Err = BijectionError;

    /// Parses `{1,4}/{2,3}`; the ground set is inferred from the union.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(SetPartition::empty());
        }
        let bad = || BijectionError::InvalidPartition(s.to_string());
        let blocks = s
            .split('/')
            .map(|b| {
                let inner = b
                    .trim()
                    .strip_prefix('{')
                    .and_then(|r| r.strip_suffix('}'))
                    .ok_or_else(bad)?;
                inner
                    .split(',')
                    .map(|e| e.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<BTreeSet<u32>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ground = blocks.iter().map(BTreeSet::len).sum();
        SetPartition::new(ground, blocks)
    }
}

/// Every partition of `[m]`, generated from restricted growth strings.
pub fn all_partitions(m: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; m];
    loop {
        let k = rgs.iter().max().map_or(0, |&x| x + 1);
        let mut blocks = vec![BTreeSet::new(); k];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].insert(i as u32 + 1);
        }
        out.push(SetPartition { ground: m, blocks });
        // Next restricted growth string: rgs[i] ≤ 1 + max(rgs[..i]).
        let mut i = m;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let bound = rgs[..i].iter().max().copied().unwrap_or(0) + 1;
            if rgs[i] < bound {
                rgs[i] += 1;
                for r in &mut rgs[i + 1..] {
                    *r = 0;
                }
                break;
            }
        }
    }
}

fn perm(entries: Vec<u32>) -> Permutation {
    Permutation::new(entries).expect("construction yields a permutation")
}

fn require_increasing(p: &Permutation) -> Result<(), BijectionError> {
    if p.is(ClassName::Increasing) {
        Ok(())
    } else {
        Err(BijectionError::ClosureViolation(p.clone()))
    }
}

/// The run-complement involution on increasing permutations.
pub fn phi(p: &Permutation) -> Result<Permutation, BijectionError> {
    if !p.is(ClassName::Increasing) {
        return Err(BijectionError::NotIncreasing(p.clone()));
    }
    phi_rec(p)
}

fn phi_rec(p: &Permutation) -> Result<Permutation, BijectionError> {
    require_increasing(p)?;
    let e = p.entries();
    let n = e.len();
    if n == 0 {
        return Ok(Permutation::empty());
    }
    let one = e
        .iter()
        .position(|&x| x == 1)
        .expect("permutation contains 1");
    if one == 0 {
        let rest = phi_rec(&perm(e[1..].iter().map(|x| x - 1).collect()))?;
        let mut out: Vec<u32> = rest.entries().iter().map(|x| x + 1).collect();
        out.push(1);
        return Ok(perm(out));
    }
    if one == n - 1 {
        let rest = phi_rec(&perm(e[..n - 1].iter().map(|x| x - 1).collect()))?;
        let mut out = vec![1];
        out.extend(rest.entries().iter().map(|x| x + 1));
        return Ok(perm(out));
    }
    let tail = Word::new(e[one + 1..].to_vec()).expect("distinct entries");
    let image = phi_rec(&reduce(&tail))?;
    let tail = embed(&image, &support(&tail)).expect("sizes agree");
    let mut out: Vec<u32> = e[..one].iter().rev().copied().collect();
    out.push(1);
    out.extend_from_slice(tail.entries());
    Ok(perm(out))
}

/// Splits `p` after each right-to-left minimum: `π_1 a_1 | π_2 a_2 | ⋯`.
fn rlm_segments(e: &[u32]) -> Vec<&[u32]> {
    let mut start = 0;
    right_to_left_minima(e)
        .into_iter()
        .map(|i| {
            let seg = &e[start..=i];
            start = i + 1;
            seg
        })
        .collect()
}

/// Increasing permutations with `val = des` to partitions of `[n]` whose last
/// block is a singleton.
pub fn gould_forward(p: &Permutation) -> Result<SetPartition, BijectionError> {
    if p.is_empty() {
        return Err(BijectionError::Empty);
    }
    if !p.is(ClassName::Increasing) {
        return Err(BijectionError::NotIncreasing(p.clone()));
    }
    if p.stat(Stat::Val) != p.stat(Stat::Des) {
        return Err(BijectionError::NotValEqDes(p.clone()));
    }
    let blocks = rlm_segments(p.entries())
        .into_iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    SetPartition::new(p.len(), blocks)
}

pub fn gould_inverse(b: &SetPartition) -> Result<Permutation, BijectionError> {
    if !b.last_block_is_singleton() {
        return Err(BijectionError::LastBlockNotSingleton(b.clone()));
    }
    let mut out = Vec::with_capacity(b.ground());
    for block in b.blocks() {
        let mut it = block.iter().copied();
        let min = it.next().expect("nonempty block");
        out.extend(it);
        out.push(min);
    }
    Ok(perm(out))
}

/// Flattened permutations of `[n]` to partitions of `[n−1]`.
pub fn flat_partition_forward(p: &Permutation) -> Result<SetPartition, BijectionError> {
    if p.is_empty() {
        return Err(BijectionError::Empty);
    }
    if !p.is(ClassName::Flattened) {
        return Err(BijectionError::NotFlattened(p.clone()));
    }
    let blocks = rlm_segments(p.entries())
        .into_iter()
        .skip(1)
        .map(|s| s.iter().map(|x| x - 1).collect())
        .collect();
    SetPartition::new(p.len() - 1, blocks)
}

pub fn flat_partition_inverse(b: &SetPartition) -> Permutation {
    let mut out = vec![1];
    for block in b.blocks() {
        let mut it = block.iter().map(|x| x + 1);
        let min = it.next().expect("nonempty block");
        out.extend(it);
        out.push(min);
    }
    perm(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;
    use crate::perm::{permutations, Class};
    use crate::recurrences::SequenceCache;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn part(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&p("23154")).unwrap(), p("32145"));
        assert_eq!(phi(&p("1")).unwrap(), p("1"));
        assert_eq!(phi(&p("12")).unwrap(), p("21"));
        assert_eq!(phi(&p("21")).unwrap(), p("12"));
        assert_eq!(phi(&p("1243")).unwrap(), p("3421"));
        assert_eq!(phi(&Permutation::empty()).unwrap(), Permutation::empty());
        assert_eq!(
            phi(&p("253614")),
            Err(BijectionError::NotIncreasing(p("253614")))
        );
    }

    #[test]
    fn phi_image_list_for_two_runs() {
        let inc = Class::of(ClassName::Increasing);
        let images: Vec<String> = Oracle::default()
            .witnesses(4, &inc, Stat::Run, 2)
            .unwrap()
            .iter()
            .map(|q| phi(q).unwrap().to_string())
            .collect();
        assert_eq!(
            images.join(" "),
            "3421 3241 2431 4231 2143 3214 1432 4213 3142 4312 4132"
        );
    }

    #[test]
    fn phi_is_a_run_complementing_involution() {
        for n in 0..=8 {
            for q in permutations(n).filter(|q| q.is(ClassName::Increasing)) {
                let image = phi(&q).unwrap();
                assert!(image.is(ClassName::Increasing), "{q}");
                assert_eq!(phi(&image).unwrap(), q);
                if n > 0 {
                    assert_eq!(image.stat(Stat::Run), n + 1 - q.stat(Stat::Run), "{q}");
                }
            }
        }
    }

    #[test]
    fn gould_examples() {
        assert_eq!(gould_forward(&p("123")).unwrap(), part("{1}/{2}/{3}"));
        assert_eq!(gould_forward(&p("213")).unwrap(), part("{1,2}/{3}"));
        assert_eq!(gould_inverse(&part("{1,3}/{2}")).unwrap(), p("312"));
        assert_eq!(gould_inverse(&part("{1,2}/{3}")).unwrap(), p("213"));
        assert!(gould_inverse(&part("{1}/{2,3}")).is_err());
        assert!(gould_forward(&p("132")).is_err());
        assert_eq!(
            gould_forward(&Permutation::empty()),
            Err(BijectionError::Empty)
        );
    }

    #[test]
    fn gould_is_a_bijection() {
        for n in 1..=8 {
            let domain: Vec<Permutation> = permutations(n)
                .filter(|q| q.is(ClassName::Increasing) && q.is(ClassName::ValEqDes))
                .collect();
            let images: BTreeSet<SetPartition> = domain
                .iter()
                .map(|q| {
                    let b = gould_forward(q).unwrap();
                    assert_eq!(&gould_inverse(&b).unwrap(), q);
                    b
                })
                .collect();
            let targets: BTreeSet<SetPartition> = all_partitions(n)
                .into_iter()
                .filter(|b| b.last_block_is_singleton())
                .collect();
            assert_eq!(images.len(), domain.len());
            assert_eq!(images, targets, "n={n}");
            if n == 4 {
                assert_eq!(images.len(), 9);
            }
        }
    }

    #[test]
    fn flat_partition_examples() {
        assert_eq!(
            flat_partition_forward(&p("15243")).unwrap(),
            part("{1,4}/{2,3}")
        );
        assert_eq!(
            flat_partition_forward(&p("12345")).unwrap(),
            part("{1}/{2}/{3}/{4}")
        );
        assert_eq!(
            flat_partition_forward(&p("1")).unwrap(),
            SetPartition::empty()
        );
        assert_eq!(flat_partition_inverse(&part("{1,2,3}")), p("1342"));
        assert_eq!(flat_partition_inverse(&part("{1,4}/{2,3}")), p("15243"));
        assert_eq!(flat_partition_inverse(&SetPartition::empty()), p("1"));
        assert!(flat_partition_forward(&p("2143")).is_err());
    }

    #[test]
    fn flat_partition_refines_by_stirling() {
        let s = SequenceCache::new(8);
        for n in 2..=8 {
            let mut by_blocks = vec![0u64; n];
            for q in permutations(n).filter(|q| q.is(ClassName::Flattened)) {
                let b = flat_partition_forward(&q).unwrap();
                assert_eq!(flat_partition_inverse(&b), q);
                assert_eq!(b.block_count() + 1, q.stat(Stat::Rlm));
                by_blocks[b.block_count()] += 1;
            }
            for (j, &c) in by_blocks.iter().enumerate() {
                assert_eq!(s.stirling2(n - 1, j), c.into(), "n={n} blocks={j}");
            }
        }
    }

    #[test]
    fn partition_enumeration_counts_bell() {
        let s = SequenceCache::new(8);
        for m in 0..=8 {
            assert_eq!(s.bell(m), all_partitions(m).len().into());
        }
        assert!(SetPartition::new(3, vec![BTreeSet::from([1, 2])]).is_err());
        assert!("{1,2}/{2}".parse::<SetPartition>().is_err());
        assert_eq!(part("{2,3}/{1}").to_string(), "{1}/{2,3}");
    }

    proptest! {
        #[test]
        fn flat_inverse_then_forward_is_identity(m in 0usize..8, seed in any::<u64>()) {
            let all = all_partitions(m);
            let b = &all[(seed % all.len() as u64) as usize];
            let q = flat_partition_inverse(b);
            prop_assert!(q.is(ClassName::Flattened));
            prop_assert_eq!(&flat_partition_forward(&q).unwrap(), b);
        }
    }
}
