//! Set partitions of `{1, .., n}`: all partitions, non-crossing partitions
//! and pair partitions.
//!
//! Partitions are produced as a stream in restricted-growth-string (RGS)
//! lexicographic order. A restricted growth string `a_1 .. a_n` labels each
//! element with its block index, with `a_1 = 0` and
//! `a_i <= 1 + max(a_1 .. a_{i-1})`; blocks are therefore numbered by their
//! least element. The non-crossing and pair families are generated directly by
//! pruning the RGS search tree, so their order is the order induced from the
//! full family.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A set partition of `{1, .., n}` in canonical form.
///
/// Blocks are sorted by least element and each block is sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from arbitrary blocks, validating and canonicalising.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let mut seen = vec![false; n + 1];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &e in block.iter() {
                if e == 0 || e > n {
                    return Err(Error::InvalidPartition(format!(
                        "element {e} outside 1..={n}"
                    )));
                }
                if seen[e] {
                    return Err(Error::InvalidPartition(format!(
                        "element {e} appears twice"
                    )));
                }
                seen[e] = true;
            }
        }
        if let Some(missing) = (1..=n).find(|&e| !seen[e]) {
            return Err(Error::InvalidPartition(format!(
                "element {missing} not covered"
            )));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { n, blocks })
    }

    /// Builds the partition encoded by a restricted growth string.
    ///
    /// Panics if `rgs` is not a valid restricted growth string.
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &label) in rgs.iter().enumerate() {
            assert!(label <= blocks.len(), "not a restricted growth string");
            if label == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[label].push(i + 1);
        }
        Self {
            n: rgs.len(),
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(Vec::len)
    }

    /// Block label of every element, i.e. the restricted growth string.
    pub fn rgs(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (label, block) in self.blocks.iter().enumerate() {
            for &e in block {
                labels[e - 1] = label;
            }
        }
        labels
    }

    pub fn is_pair(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// True iff no `a < b < c < d` has `a, c` in one block and `b, d` in
    /// another.
    pub fn is_noncrossing(&self) -> bool {
        let labels = self.rgs();
        let n = self.n;
        for a in 0..n {
            for c in a + 2..n {
                if labels[a] != labels[c] {
                    continue;
                }
                for b in a + 1..c {
                    if labels[b] == labels[a] {
                        continue;
                    }
                    if labels[c + 1..].contains(&labels[b]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Number of crossing pairs `{a, c}, {b, d}` with `a < b < c < d`.
    pub fn crossing_count(&self) -> Result<usize> {
        if !self.is_pair() {
            return Err(Error::NotPairPartition);
        }
        let mut count = 0;
        for (i, p) in self.blocks.iter().enumerate() {
            for q in &self.blocks[i + 1..] {
                // p[0] < q[0] by canonical order
                if q[0] < p[1] && p[1] < q[1] {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Image under the reflection `i -> n + 1 - i`.
    pub fn reflect(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&e| self.n + 1 - e).collect())
            .collect();
        Self::new(self.n, blocks).expect("reflection of a valid partition")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, e) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PartitionKind {
    All,
    NonCrossing,
    Pair,
}

impl PartitionKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::All => "all",
            Self::NonCrossing => "non-crossing",
            Self::Pair => "pair",
        }
    }
}

/// A family of partitions of `{1, .., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartitionFamily {
    kind: PartitionKind,
    n: usize,
}

impl PartitionFamily {
    pub fn new(kind: PartitionKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if kind == PartitionKind::Pair && n % 2 == 1 {
            return Err(Error::OddPairSize(n));
        }
        Ok(Self { kind, n })
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Largest ground-set size each family may enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ceilings {
    pub all: usize,
    pub noncrossing: usize,
    pub pair: usize,
}

impl Default for Ceilings {
    fn default() -> Self {
        Self {
            all: 14,
            noncrossing: 18,
            pair: 18,
        }
    }
}

impl Ceilings {
    pub fn for_kind(&self, kind: PartitionKind) -> usize {
        match kind {
            PartitionKind::All => self.all,
            PartitionKind::NonCrossing => self.noncrossing,
            PartitionKind::Pair => self.pair,
        }
    }

    pub fn check(&self, kind: PartitionKind, n: usize) -> Result<()> {
        let ceiling = self.for_kind(kind);
        if n > ceiling {
            return Err(Error::SizeExceeded {
                kind: kind.name(),
                n,
                ceiling,
            });
        }
        Ok(())
    }
}

/// Streams every partition of `family` exactly once, in RGS lexicographic
/// order.
pub fn enumerate(family: PartitionFamily, ceilings: &Ceilings) -> Result<Partitions> {
    ceilings.check(family.kind, family.n)?;
    Ok(Partitions::new(family))
}

/// Number of partitions in `family`, counted by enumeration.
pub fn count(family: PartitionFamily, ceilings: &Ceilings) -> Result<u64> {
    ceilings.check(family.kind, family.n)?;
    let mut walker = RgsWalker::new(family);
    let mut total = 0u64;
    while walker.advance() {
        total += 1;
    }
    Ok(total)
}

/// Coefficients of `sum_{pi in P_2(n)} q^cross(pi)`, lowest degree first.
pub fn crossing_polynomial(n: usize, ceilings: &Ceilings) -> Result<Vec<u64>> {
    let family = PartitionFamily::new(PartitionKind::Pair, n)?;
    let mut coeffs = Vec::new();
    for p in enumerate(family, ceilings)? {
        let c = p.crossing_count()?;
        if coeffs.len() <= c {
            coeffs.resize(c + 1, 0);
        }
        coeffs[c] += 1;
    }
    Ok(coeffs)
}

/// Iterator over a partition family. See [`enumerate`].
pub struct Partitions {
    walker: RgsWalker,
}

impl Partitions {
    fn new(family: PartitionFamily) -> Self {
        Self {
            walker: RgsWalker::new(family),
        }
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.walker.advance() {
            Some(Partition::from_rgs(&self.walker.labels))
        } else {
            None
        }
    }
}

/// Depth-first walk over restricted growth strings, pruned to the family.
///
/// For the non-crossing family the search keeps a stack of open blocks: an
/// element may join only a block on the stack, which closes every block opened
/// after it; a new block is pushed on top. For pairs, an element either closes
/// a singleton block or opens a new one.
struct RgsWalker {
    kind: PartitionKind,
    n: usize,
    labels: Vec<usize>,
    frames: Vec<Frame>,
    started: bool,
}

struct Frame {
    choices: Vec<usize>,
    next: usize,
}

impl RgsWalker {
    fn new(family: PartitionFamily) -> Self {
        Self {
            kind: family.kind,
            n: family.n,
            labels: Vec::with_capacity(family.n),
            frames: Vec::with_capacity(family.n),
            started: false,
        }
    }

    /// Labels the next element may take given the current prefix, ascending.
    fn choices(&self) -> Vec<usize> {
        let prefix = &self.labels;
        let fresh = prefix.iter().max().map_or(0, |m| m + 1);
        match self.kind {
            PartitionKind::All => (0..=fresh).collect(),
            PartitionKind::NonCrossing => {
                let mut open: Vec<usize> = Vec::new();
                for &label in prefix {
                    match open.iter().position(|&b| b == label) {
                        Some(pos) => open.truncate(pos + 1),
                        None => open.push(label),
                    }
                }
                open.push(fresh);
                open
            }
            PartitionKind::Pair => {
                let mut sizes = vec![0usize; fresh];
                for &label in prefix {
                    sizes[label] += 1;
                }
                let mut out: Vec<usize> = (0..fresh).filter(|&b| sizes[b] == 1).collect();
                let open = out.len();
                let remaining = self.n - prefix.len();
                // opening a block needs a later element to close it
                if open < remaining - 1 {
                    out.push(fresh);
                }
                out
            }
        }
    }

    fn push_frame(&mut self) {
        let choices = self.choices();
        self.frames.push(Frame { choices, next: 0 });
    }

    /// Moves to the next complete string; false when exhausted.
    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            self.push_frame();
        } else {
            // drop the last element of the current complete string
            self.labels.pop();
        }
        loop {
            let Some(frame) = self.frames.last_mut() else {
                return false;
            };
            if frame.next == frame.choices.len() {
                self.frames.pop();
                if self.labels.pop().is_none() {
                    return false;
                }
                continue;
            }
            let label = frame.choices[frame.next];
            frame.next += 1;
            self.labels.push(label);
            if self.labels.len() == self.n {
                return true;
            }
            self.push_frame();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(kind: PartitionKind, n: usize) -> PartitionFamily {
        PartitionFamily::new(kind, n).unwrap()
    }

    fn collect(kind: PartitionKind, n: usize) -> Vec<Partition> {
        enumerate(family(kind, n), &Ceilings::default())
            .unwrap()
            .collect()
    }

    fn p(n: usize, blocks: &[&[usize]]) -> Partition {
        Partition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn singleton() {
        let all = collect(PartitionKind::All, 1);
        assert_eq!(all, vec![p(1, &[&[1]])]);
    }

    #[test]
    fn small_counts() {
        assert_eq!(collect(PartitionKind::All, 4).len(), 15);
        assert_eq!(collect(PartitionKind::NonCrossing, 4).len(), 14);
        assert_eq!(collect(PartitionKind::Pair, 6).len(), 15);
        assert_eq!(collect(PartitionKind::Pair, 2).len(), 1);
    }

    #[test]
    fn all_four_is_in_rgs_order() {
        let rgs: Vec<Vec<usize>> = collect(PartitionKind::All, 3)
            .iter()
            .map(Partition::rgs)
            .collect();
        assert_eq!(
            rgs,
            vec![
                vec![0, 0, 0],
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![0, 1, 2]
            ]
        );
    }

    #[test]
    fn crossing_predicate() {
        assert!(!p(4, &[&[1, 3], &[2, 4]]).is_noncrossing());
        assert!(p(4, &[&[1, 4], &[2, 3]]).is_noncrossing());
        assert!(p(4, &[&[1, 2, 3, 4]]).is_noncrossing());
        assert!(!p(5, &[&[1, 3, 5], &[2, 4]]).is_noncrossing());
        assert!(p(5, &[&[1, 5], &[2], &[3, 4]]).is_noncrossing());
    }

    #[test]
    fn crossings() {
        assert_eq!(p(4, &[&[1, 3], &[2, 4]]).crossing_count(), Ok(1));
        assert_eq!(p(4, &[&[1, 2], &[3, 4]]).crossing_count(), Ok(0));
        assert_eq!(p(4, &[&[1, 4], &[2, 3]]).crossing_count(), Ok(0));
        assert_eq!(
            p(3, &[&[1, 2, 3]]).crossing_count(),
            Err(Error::NotPairPartition)
        );
    }

    #[test]
    fn p2_six_crossing_polynomial() {
        let coeffs = crossing_polynomial(6, &Ceilings::default()).unwrap();
        assert_eq!(coeffs, vec![5, 6, 3, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            PartitionFamily::new(PartitionKind::Pair, 5),
            Err(Error::OddPairSize(5))
        );
        assert_eq!(
            PartitionFamily::new(PartitionKind::All, 0),
            Err(Error::EmptyGroundSet)
        );
        assert!(Partition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(Partition::new(3, vec![vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![1, 2], vec![]]).is_err());
        assert!(Partition::new(2, vec![vec![1, 3]]).is_err());
    }

    #[test]
    fn canonicalises_blocks() {
        let q = Partition::new(4, vec![vec![4, 2], vec![3, 1]]).unwrap();
        assert_eq!(q.blocks(), &[vec![1, 3], vec![2, 4]]);
        assert_eq!(q.to_string(), "{{1,3},{2,4}}");
    }

    #[test]
    fn ceiling_is_enforced() {
        let tight = Ceilings {
            all: 5,
            noncrossing: 5,
            pair: 4,
        };
        let err = enumerate(family(PartitionKind::All, 6), &tight)
            .err()
            .unwrap();
        assert_eq!(
            err,
            Error::SizeExceeded {
                kind: "all",
                n: 6,
                ceiling: 5
            }
        );
        assert!(enumerate(family(PartitionKind::Pair, 6), &tight).is_err());
        assert!(enumerate(family(PartitionKind::NonCrossing, 5), &tight).is_ok());
    }

    #[test]
    fn count_matches_iterator() {
        for n in 1..=7 {
            for kind in [PartitionKind::All, PartitionKind::NonCrossing] {
                let f = family(kind, n);
                assert_eq!(
                    count(f, &Ceilings::default()).unwrap(),
                    collect(kind, n).len() as u64
                );
            }
        }
    }
}
