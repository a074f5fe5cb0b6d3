//! Moment-cumulant conversions for classical and free cumulants.
//!
//! Raw moments are sums over partitions of products of cumulants indexed by
//! block sizes: all set partitions for classical cumulants, non-crossing
//! partitions for free cumulants. The partition sums are compressed into a
//! table of integer coefficients per degree, keyed by block-size multiset,
//! built once by enumeration and cached for the lifetime of the process.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{self, Ceilings, PartitionFamily, PartitionKind};

/// Which convolution the cumulants linearise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Classical,
    Free,
}

impl Kind {
    /// Partition family governing the moment-cumulant formula.
    pub fn family(self) -> PartitionKind {
        match self {
            Kind::Classical => PartitionKind::All,
            Kind::Free => PartitionKind::NonCrossing,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Classical => "classical",
            Kind::Free => "free",
        }
    }
}

/// Raw moments `m_1 .. m_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSequence {
    values: Vec<f64>,
}

impl MomentSequence {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The `j`-th moment, 1-based.
    pub fn moment(&self, j: usize) -> Option<f64> {
        j.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    fn require(&self, needed: usize) -> Result<()> {
        if self.values.len() < needed {
            return Err(Error::TooShort {
                needed,
                got: self.values.len(),
            });
        }
        Ok(())
    }

    /// Second moment about the mean.
    pub fn central2(&self) -> Result<f64> {
        self.require(2)?;
        let (m1, m2) = (self.values[0], self.values[1]);
        Ok(m2 - m1 * m1)
    }

    /// Fourth moment about the mean.
    pub fn central4(&self) -> Result<f64> {
        self.require(4)?;
        let [m1, m2, m3, m4] = [0, 1, 2, 3].map(|i| self.values[i]);
        let m1sq = m1 * m1;
        Ok(m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1sq - 3.0 * m1sq * m1sq)
    }
}

/// Cumulants `c_1 .. c_n` (classical) or `k_1 .. k_n` (free).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulantSequence {
    kind: Kind,
    values: Vec<f64>,
}

impl CumulantSequence {
    pub fn new(kind: Kind, values: Vec<f64>) -> Self {
        Self { kind, values }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Cumulants of the convolution of two laws (componentwise sum).
    ///
    /// The shorter sequence bounds the result length. Panics if the kinds
    /// differ.
    pub fn convolve(&self, other: &Self) -> Self {
        assert_eq!(self.kind, other.kind, "cumulant kinds differ");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.kind, values)
    }
}

/// One term of a degree-`n` moment-cumulant formula: `count` partitions share
/// the block-size multiset `sizes` (sorted descending).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub sizes: Vec<usize>,
    pub count: u64,
}

/// All terms of the degree-`n` formula, ordered by `sizes` descending
/// lexicographically (so `[n]` comes first and `[1, .., 1]` last).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientTable {
    pub kind: Kind,
    pub degree: usize,
    pub terms: Vec<Term>,
}

impl CoefficientTable {
    fn build(kind: Kind, degree: usize, ceilings: &Ceilings) -> Result<Self> {
        let family = PartitionFamily::new(kind.family(), degree)?;
        let mut tally: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for p in partitions::enumerate(family, ceilings)? {
            let mut sizes: Vec<usize> = p.block_sizes().collect();
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            *tally.entry(sizes).or_insert(0) += 1;
        }
        let mut terms: Vec<Term> = tally
            .into_iter()
            .map(|(sizes, count)| Term { sizes, count })
            .collect();
        terms.reverse();
        Ok(Self {
            kind,
            degree,
            terms,
        })
    }

    /// Evaluates `sum_pi prod_{V in pi} c_{|V|}`. With `skip_single_block`
    /// the one-block term is left out.
    fn evaluate(&self, cumulants: &[f64], skip_single_block: bool) -> f64 {
        let terms = self
            .terms
            .iter()
            .filter(|t| !(skip_single_block && t.sizes.len() == 1))
            .map(|t| {
                let prod: f64 = t.sizes.iter().map(|&s| cumulants[s - 1]).product();
                t.count as f64 * prod
            });
        neumaier_sum(terms)
    }
}

/// Compensated summation; the partition sums mix terms of very different
/// magnitude with heavy cancellation.
fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

type TableCache = RwLock<HashMap<(Kind, usize), Arc<CoefficientTable>>>;

fn cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Cached integer coefficient table of the degree-`degree` formula.
pub fn coefficient_table(
    kind: Kind,
    degree: usize,
    ceilings: &Ceilings,
) -> Result<Arc<CoefficientTable>> {
    ceilings.check(kind.family(), degree)?;
    if let Some(table) = cache().read().unwrap().get(&(kind, degree)) {
        return Ok(Arc::clone(table));
    }
    let table = Arc::new(CoefficientTable::build(kind, degree, ceilings)?);
    let mut w = cache().write().unwrap();
    Ok(Arc::clone(w.entry((kind, degree)).or_insert(table)))
}

pub fn moments_from_cumulants(c: &CumulantSequence) -> Result<MomentSequence> {
    moments_from_cumulants_with(c, &Ceilings::default())
}

pub fn moments_from_cumulants_with(
    c: &CumulantSequence,
    ceilings: &Ceilings,
) -> Result<MomentSequence> {
    if c.is_empty() {
        return Err(Error::EmptyGroundSet);
    }
    let values = (1..=c.len())
        .map(|j| Ok(coefficient_table(c.kind, j, ceilings)?.evaluate(&c.values, false)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(MomentSequence::new(values))
}

pub fn cumulants_from_moments(m: &MomentSequence, kind: Kind) -> Result<CumulantSequence> {
    cumulants_from_moments_with(m, kind, &Ceilings::default())
}

/// Solves the triangular moment-cumulant system degree by degree.
pub fn cumulants_from_moments_with(
    m: &MomentSequence,
    kind: Kind,
    ceilings: &Ceilings,
) -> Result<CumulantSequence> {
    if m.is_empty() {
        return Err(Error::EmptyGroundSet);
    }
    let mut c: Vec<f64> = Vec::with_capacity(m.len());
    for j in 1..=m.len() {
        let table = coefficient_table(kind, j, ceilings)?;
        // only c_1 .. c_{j-1} are read when the one-block term is skipped
        c.push(0.0);
        let rest = table.evaluate(&c, true);
        c[j - 1] = m.values[j - 1] - rest;
    }
    Ok(CumulantSequence::new(kind, c))
}

/// Cumulants of the `t`-th convolution power: every cumulant scales by `t`.
pub fn scale_law(c: &CumulantSequence, t: f64) -> Result<CumulantSequence> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveScale(t));
    }
    Ok(CumulantSequence::new(
        c.kind,
        c.values.iter().map(|v| v * t).collect(),
    ))
}

/// Moments of `sX` given moments of `X`.
pub fn dilate_moments(m: &MomentSequence, s: f64) -> MomentSequence {
    let mut power = 1.0;
    let values = m
        .values
        .iter()
        .map(|v| {
            power *= s;
            v * power
        })
        .collect();
    MomentSequence::new(values)
}

/// Moments `m_1 .. m_n` of the q-Gaussian law: odd moments vanish and
/// `m_{2k}` is the crossing generating polynomial of `P_2(2k)` at `q`.
pub fn qgaussian_moments(q: f64, n: usize) -> Result<MomentSequence> {
    qgaussian_moments_with(q, n, &Ceilings::default())
}

pub fn qgaussian_moments_with(q: f64, n: usize, ceilings: &Ceilings) -> Result<MomentSequence> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::ParameterOutOfRange {
            name: "q",
            reason: format!("{q} not in [0, 1]"),
        });
    }
    let even_max = n - n % 2;
    ceilings.check(PartitionKind::Pair, even_max)?;
    let mut values = Vec::with_capacity(n);
    for j in 1..=n {
        if j % 2 == 1 {
            values.push(0.0);
            continue;
        }
        let coeffs = partitions::crossing_polynomial(j, ceilings)?;
        let value = coeffs.iter().rev().fold(0.0, |acc, &a| acc * q + a as f64);
        values.push(value);
    }
    Ok(MomentSequence::new(values))
}
