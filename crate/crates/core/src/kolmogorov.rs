//! Kolmogorov distance `sup_x |F(x) - G(x)|` with a certified error bound.
//!
//! Two engines:
//!
//! * **Atom scan** when at least one law is atomic. Between consecutive atoms
//!   a step CDF is constant and the other CDF is monotone, so the supremum is
//!   attained at an atom, either as the left limit or as the value there.
//! * **Grid refinement** when both laws are continuous: branch and bound over
//!   intervals, using that `|F - G|` is Lipschitz with constant `L_F + L_G`.
//!   On `[a, b]` the function cannot exceed
//!   `(h(a) + h(b)) / 2 + (L_F + L_G)(b - a) / 2`, and intervals are refined
//!   in decreasing order of that bound until it is within tolerance of the
//!   best value found.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::distributions::{AtomList, DistributionSpec};
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Cells the continuous range is cut into before refinement starts.
const INITIAL_CELLS: usize = 256;
/// Evaluation budget per distance; exhausting it widens the certificate.
const MAX_EVALUATIONS: usize = 8_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    AtomScan,
    GridRefine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceResult {
    pub value: f64,
    /// The true distance lies in `value +- error_bound`.
    pub error_bound: f64,
    pub witness_x: f64,
    pub method: Method,
}

impl DistanceResult {
    pub fn lower(&self) -> f64 {
        (self.value - self.error_bound).max(0.0)
    }

    pub fn upper(&self) -> f64 {
        (self.value + self.error_bound).min(1.0)
    }
}

/// Picks the engine from the laws: atom scan if either is atomic, grid
/// refinement otherwise.
pub fn distance(
    f: &DistributionSpec,
    g: &DistributionSpec,
    tolerance: f64,
) -> Result<DistanceResult> {
    match (f.is_atomic(), g.is_atomic()) {
        (true, true) => distance_atomic(f, g),
        (true, false) => distance_atomic_vs_continuous(f, g),
        (false, true) => distance_atomic_vs_continuous(g, f),
        (false, false) => distance_continuous(f, g, tolerance),
    }
}

fn require_cdf(d: &DistributionSpec) -> Result<()> {
    if d.has_cdf() {
        Ok(())
    } else {
        Err(Error::MissingCdf(d.name().to_string()))
    }
}

fn require_atoms(d: &DistributionSpec) -> Result<&AtomList> {
    d.atoms()
        .ok_or_else(|| Error::MissingAtoms(d.name().to_string()))
}

struct Tracker {
    best: f64,
    witness: f64,
}

impl Tracker {
    fn new() -> Self {
        Self {
            best: 0.0,
            witness: 0.0,
        }
    }

    fn offer(&mut self, gap: f64, x: f64) {
        if gap > self.best {
            self.best = gap;
            self.witness = x;
        }
    }
}

/// Exact scan of a (truncated) atomic law against a law with a CDF.
pub fn distance_atomic_vs_continuous(
    atoms: &DistributionSpec,
    cont: &DistributionSpec,
) -> Result<DistanceResult> {
    let list = require_atoms(atoms)?;
    require_cdf(cont)?;
    let mut track = Tracker::new();
    let mut eval_error: f64 = 0.0;
    let mut run = list.left_tail;
    track.offer(run, f64::NEG_INFINITY);
    for (&x, &p) in list.locations.iter().zip(&list.masses) {
        let (g, err) = cont.cdf_with_error(x)?;
        eval_error = eval_error.max(err);
        track.offer((run - g).abs(), x);
        run += p;
        track.offer((run - g).abs(), x);
    }
    track.offer((1.0 - run).abs(), f64::INFINITY);
    if !track.witness.is_finite() {
        track.witness = *if track.witness < 0.0 {
            list.locations.first()
        } else {
            list.locations.last()
        }
        .expect("non-empty atom list");
    }
    Ok(DistanceResult {
        value: track.best.min(1.0),
        error_bound: list.truncated_mass() + list.mass_error + eval_error,
        witness_x: track.witness,
        method: Method::AtomScan,
    })
}

/// Exact scan of two atomic laws over the union of their atoms.
pub fn distance_atomic(f: &DistributionSpec, g: &DistributionSpec) -> Result<DistanceResult> {
    let (a, b) = (require_atoms(f)?, require_atoms(g)?);
    let mut points: Vec<f64> = a.locations.iter().chain(&b.locations).copied().collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut track = Tracker::new();
    let (mut ia, mut ib) = (0, 0);
    let (mut fa, mut fb) = (a.left_tail, b.left_tail);
    track.offer((fa - fb).abs(), points[0]);
    for &x in &points {
        track.offer((fa - fb).abs(), x);
        if ia < a.locations.len() && a.locations[ia] == x {
            fa += a.masses[ia];
            ia += 1;
        }
        if ib < b.locations.len() && b.locations[ib] == x {
            fb += b.masses[ib];
            ib += 1;
        }
        track.offer((fa - fb).abs(), x);
    }
    Ok(DistanceResult {
        value: track.best.min(1.0),
        error_bound: a.truncated_mass() + b.truncated_mass() + a.mass_error + b.mass_error,
        witness_x: track.witness,
        method: Method::AtomScan,
    })
}

#[derive(Debug, Clone, Copy)]
struct Node {
    x: f64,
    f: f64,
    g: f64,
}

impl Node {
    fn gap(&self) -> f64 {
        (self.f - self.g).abs()
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    left: Node,
    right: Node,
    upper: f64,
}

impl Cell {
    /// The smaller of the Lipschitz bound and the monotone envelope
    /// `max(F(b) - G(a), G(b) - F(a))`.
    fn new(left: Node, right: Node, lipschitz: f64) -> Self {
        let width = right.x - left.x;
        let by_slope = 0.5 * (left.gap() + right.gap()) + 0.5 * lipschitz * width;
        let by_monotone = (right.f - left.g).max(right.g - left.f);
        Self {
            left,
            right,
            upper: by_slope.min(by_monotone),
        }
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    // max-heap on the upper bound; leftmost cell first among ties
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper
            .total_cmp(&other.upper)
            .then_with(|| other.left.x.total_cmp(&self.left.x))
    }
}

/// Branch-and-bound distance between two laws with CDFs and Lipschitz bounds.
///
/// Refines until `error_bound <= tolerance`. Nearly identical laws need on
/// the order of `1 / tolerance` evaluations; if the evaluation budget runs
/// out first the wider certificate actually achieved is returned.
pub fn distance_continuous(
    f: &DistributionSpec,
    g: &DistributionSpec,
    tolerance: f64,
) -> Result<DistanceResult> {
    distance_continuous_with_budget(f, g, tolerance, MAX_EVALUATIONS)
}

pub fn distance_continuous_with_budget(
    f: &DistributionSpec,
    g: &DistributionSpec,
    tolerance: f64,
    max_evaluations: usize,
) -> Result<DistanceResult> {
    require_cdf(f)?;
    require_cdf(g)?;
    let lf = f
        .lipschitz_bound()
        .ok_or_else(|| Error::MissingLipschitz(f.name().to_string()))?;
    let lg = g
        .lipschitz_bound()
        .ok_or_else(|| Error::MissingLipschitz(g.name().to_string()))?;
    let lipschitz = lf + lg;
    let (flo, fhi, ftail) = f
        .effective_range()
        .ok_or_else(|| Error::MissingCdf(f.name().to_string()))?;
    let (glo, ghi, gtail) = g
        .effective_range()
        .ok_or_else(|| Error::MissingCdf(g.name().to_string()))?;
    let (lo, hi) = (flo.min(glo), fhi.max(ghi));
    let outside = ftail.max(gtail);
    let eval_floor = f.cdf_error().unwrap_or(0.0) + g.cdf_error().unwrap_or(0.0);
    let budget = tolerance - eval_floor;
    if !(budget > 0.0) {
        return Err(Error::ToleranceTooSmall {
            requested: tolerance,
            floor: eval_floor,
        });
    }

    if f.same_law(g) {
        return Ok(DistanceResult {
            value: 0.0,
            error_bound: 0.0,
            witness_x: 0.0,
            method: Method::GridRefine,
        });
    }

    let mut eval_error: f64 = 0.0;
    let mut track = Tracker::new();
    let mut node = |x: f64| -> Result<Node> {
        let (fv, fe) = f.cdf_with_error(x)?;
        let (gv, ge) = g.cdf_with_error(x)?;
        eval_error = eval_error.max(fe + ge);
        Ok(Node { x, f: fv, g: gv })
    };

    let step = (hi - lo) / INITIAL_CELLS as f64;
    let mut heap = BinaryHeap::with_capacity(4 * INITIAL_CELLS);
    let mut left = node(lo)?;
    track.offer(left.gap(), lo);
    for i in 1..=INITIAL_CELLS {
        let x = if i == INITIAL_CELLS {
            hi
        } else {
            lo + i as f64 * step
        };
        let right = node(x)?;
        track.offer(right.gap(), x);
        heap.push(Cell::new(left, right, lipschitz));
        left = right;
    }

    let mut evaluations = INITIAL_CELLS + 1;
    let upper = loop {
        let top = heap.pop().expect("refinement keeps at least one cell");
        let mid = 0.5 * (top.left.x + top.right.x);
        let done = top.upper - track.best <= budget;
        if done || evaluations >= max_evaluations || mid <= top.left.x || mid >= top.right.x {
            break top.upper;
        }
        let centre = node(mid)?;
        evaluations += 1;
        track.offer(centre.gap(), mid);
        heap.push(Cell::new(top.left, centre, lipschitz));
        heap.push(Cell::new(centre, top.right, lipschitz));
    };

    let gap = (upper.max(outside) - track.best).max(0.0);
    Ok(DistanceResult {
        value: track.best.min(1.0),
        error_bound: gap + eval_error,
        witness_x: track.witness,
        method: Method::GridRefine,
    })
}
