//! Partitions of a ladder into intervals, described by their cut points.
//!
//! Every class met in practice is an interval `[c, c')` between consecutive
//! cuts, where cuts are limit positions. A cut set is a finite union of
//! segments "all multiples of ω^e in (lo, hi]".

use std::fmt;

use serde::Serialize;

use super::position::{Coef, Point, Pos};
use super::region::RegionSet;
use crate::ordinal::OrdinalCNF;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Segment {
    /// cuts are the multiples of `ω^exp`, `exp ≥ 1`
    pub exp: OrdinalCNF,
    /// exclusive
    pub above: Pos,
    /// inclusive
    pub through: Pos,
}

impl Segment {
    fn first(&self) -> Pos {
        self.above.next_multiple(&self.exp)
    }

    fn last(&self) -> Pos {
        self.through.truncate(&self.exp)
    }

    fn is_empty(&self) -> bool {
        self.first() > self.through
    }

    fn contains(&self, c: &Pos) -> bool {
        *c > self.above && *c <= self.through && c.is_multiple_of(&self.exp)
    }

    /// Largest cut of the segment not above `p`.
    fn at_or_below(&self, p: &Pos) -> Option<Pos> {
        let bound = if *p < self.through { p } else { &self.through };
        Some(bound.truncate(&self.exp)).filter(|c| *c > self.above)
    }

    /// Least cut of the segment strictly above `p`.
    fn above(&self, p: &Pos) -> Option<Pos> {
        let from = if *p > self.above { p } else { &self.above };
        Some(from.next_multiple(&self.exp)).filter(|c| *c <= self.through)
    }

    /// Number of cuts, `None` when infinite.
    fn count(&self) -> Option<u64> {
        if self.is_empty() {
            return Some(0);
        }
        let (a, b) = (self.first(), self.last());
        let high = |p: &Pos| -> Vec<_> {
            p.terms()
                .iter()
                .filter(|(e, _)| *e > self.exp)
                .cloned()
                .collect()
        };
        if high(&a) != high(&b) {
            return None;
        }
        match (a.coef_at(&self.exp), b.coef_at(&self.exp)) {
            (Coef::Nat(x), Coef::Nat(y)) => Some(y - x + 1),
            _ => None,
        }
    }
}

/// A set of limit positions at which classes start.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CutSet {
    segments: Vec<Segment>,
}

impl CutSet {
    pub fn none() -> Self {
        CutSet::default()
    }

    /// Every limit position in `(0, top]`.
    pub fn all_limits(top: &Pos) -> Self {
        Self::from_segments(vec![Segment {
            exp: OrdinalCNF::nat(1),
            above: Pos::zero(),
            through: top.clone(),
        }])
    }

    pub fn from_segments(mut segments: Vec<Segment>) -> Self {
        segments.retain(|s| !s.is_empty());
        segments.sort_by(|a, b| a.above.cmp(&b.above));
        CutSet { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn contains(&self, c: &Pos) -> bool {
        self.segments.iter().any(|s| s.contains(c))
    }

    /// Common cuts. Multiples of ω^a that are multiples of ω^b are exactly
    /// the multiples of ω^max(a,b).
    pub fn intersect(&self, other: &CutSet) -> CutSet {
        let mut out = Vec::new();
        for s in &self.segments {
            for t in &other.segments {
                out.push(Segment {
                    exp: s.exp.clone().max(t.exp.clone()),
                    above: s.above.clone().max(t.above.clone()),
                    through: s.through.clone().min(t.through.clone()),
                });
            }
        }
        Self::from_segments(out)
    }

    /// Every cut of `other` is a cut of `self`, checked segment by segment
    /// (each segment of `other` must fit inside one segment of `self`).
    pub fn includes(&self, other: &CutSet) -> bool {
        other.segments.iter().all(|t| {
            self.segments.iter().any(|s| {
                t.exp >= s.exp && s.above < t.first() && t.last() <= s.through
            })
        })
    }

    pub fn at_or_below(&self, p: &Pos) -> Option<Pos> {
        self.segments.iter().filter_map(|s| s.at_or_below(p)).max()
    }

    pub fn above(&self, p: &Pos) -> Option<Pos> {
        self.segments.iter().filter_map(|s| s.above(p)).min()
    }

    /// `None` when infinite.
    pub fn count(&self) -> Option<u64> {
        self.segments
            .iter()
            .map(Segment::count)
            .try_fold(0u64, |acc, c| c.map(|c| acc + c))
    }
}

/// A partition of the ladder with fixed-point set `[0, top]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SymPartition {
    pub top: Pos,
    pub cuts: CutSet,
}

impl SymPartition {
    pub fn single(top: &Pos) -> Self {
        SymPartition {
            top: top.clone(),
            cuts: CutSet::none(),
        }
    }

    pub fn is_single(&self) -> bool {
        self.cuts.is_empty()
    }

    /// `None` when there are infinitely many classes.
    pub fn class_count(&self) -> Option<u64> {
        self.cuts.count().map(|c| c + 1)
    }

    /// Bottom cut of the class of `p` (0 for the first class).
    pub fn class_bottom(&self, p: &Point) -> Pos {
        self.cuts.at_or_below(p.base()).unwrap_or_default()
    }

    /// A strand point belongs with the fixed point below it.
    pub fn class_of(&self, p: &Point) -> RegionSet {
        let lo = Point::Fixed(self.class_bottom(p));
        match self.cuts.above(p.base()) {
            Some(c) => RegionSet::half_open(lo, Point::Fixed(c)),
            None => RegionSet::closed(lo, Point::Fixed(self.top.clone())),
        }
    }

    pub fn same_class(&self, p: &Point, q: &Point) -> bool {
        self.class_bottom(p) == self.class_bottom(q)
    }

    /// `self` is finer than or equal to `coarser`.
    pub fn refines(&self, coarser: &SymPartition) -> bool {
        self.cuts.includes(&coarser.cuts)
    }
}

impl fmt::Display for SymPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_single() {
            return write!(f, "one class [0, {}]", self.top);
        }
        let n = self
            .class_count()
            .map_or_else(|| "infinitely many".to_owned(), |n| n.to_string());
        write!(f, "{n} classes, cuts at")?;
        for s in self.cuts.segments() {
            let e = match s.exp.as_nat() {
                Some(1) => "w".to_owned(),
                Some(k) => format!("w^{k}"),
                None => format!("w^({})", s.exp),
            };
            write!(f, " multiples of {e} in ({}, {}]", s.above, s.through)?;
        }
        Ok(())
    }
}
