//! Symbolic subsets of a ladder: finite unions of intervals of points.

use std::fmt;

use serde::Serialize;

use super::position::Point;
use crate::error::Result;

/// `[lo, hi]` or `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    pub lo: Point,
    pub hi: Point,
    pub hi_inclusive: bool,
}

impl Interval {
    pub fn contains(&self, p: &Point) -> bool {
        self.lo <= *p && (*p < self.hi || (self.hi_inclusive && *p == self.hi))
    }

    fn is_empty(&self) -> bool {
        self.hi < self.lo || (self.hi == self.lo && !self.hi_inclusive)
    }
}

/// Disjoint intervals in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct RegionSet {
    parts: Vec<Interval>,
}

impl RegionSet {
    pub fn empty() -> Self {
        RegionSet::default()
    }

    pub fn point(p: Point) -> Self {
        Self::closed(p.clone(), p)
    }

    pub fn closed(lo: Point, hi: Point) -> Self {
        Self::from_intervals(vec![Interval {
            lo,
            hi,
            hi_inclusive: true,
        }])
    }

    pub fn half_open(lo: Point, hi: Point) -> Self {
        Self::from_intervals(vec![Interval {
            lo,
            hi,
            hi_inclusive: false,
        }])
    }

    /// Sorts and merges overlapping intervals; touching `[a,b)` `[b,c]` merge too.
    pub fn from_intervals(mut parts: Vec<Interval>) -> Self {
        parts.retain(|i| !i.is_empty());
        parts.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for i in parts {
            match out.last_mut() {
                Some(last) if i.lo <= last.hi => {
                    if i.hi > last.hi {
                        last.hi = i.hi;
                        last.hi_inclusive = i.hi_inclusive;
                    } else if i.hi == last.hi {
                        last.hi_inclusive |= i.hi_inclusive;
                    }
                }
                _ => out.push(i),
            }
        }
        RegionSet { parts: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.parts.iter().any(|i| i.contains(p))
    }

    pub fn union(&self, other: &RegionSet) -> RegionSet {
        Self::from_intervals(self.parts.iter().chain(&other.parts).cloned().collect())
    }

    /// Removes a single point (used to build corrupted sets for audits).
    pub fn without(&self, p: &Point) -> RegionSet {
        let mut parts = Vec::new();
        for i in &self.parts {
            if !i.contains(p) {
                parts.push(i.clone());
                continue;
            }
            parts.push(Interval {
                lo: i.lo.clone(),
                hi: p.clone(),
                hi_inclusive: false,
            });
            // the part above p restarts at its immediate successor in the order,
            // which for a fixed point is the strand tail next to it
            if *p != i.hi {
                let next = match p {
                    Point::Fixed(a) => Point::Strand(a.clone(), i64::MAX),
                    Point::Strand(a, j) if *j > i64::MIN => Point::Strand(a.clone(), j - 1),
                    Point::Strand(a, _) => Point::Fixed(a.successor()),
                };
                parts.push(Interval {
                    lo: next,
                    hi: i.hi.clone(),
                    hi_inclusive: i.hi_inclusive,
                });
            }
        }
        Self::from_intervals(parts)
    }

    pub fn instantiate(&self, m: u64) -> Result<RegionSet> {
        Ok(Self::from_intervals(
            self.parts
                .iter()
                .map(|i| {
                    Ok(Interval {
                        lo: i.lo.instantiate(m)?,
                        hi: i.hi.instantiate(m)?,
                        hi_inclusive: i.hi_inclusive,
                    })
                })
                .collect::<Result<_>>()?,
        ))
    }
}

impl fmt::Display for RegionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("{}");
        }
        for (k, i) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(" u ")?;
            }
            let close = if i.hi_inclusive { ']' } else { ')' };
            write!(f, "[{}, {}{close}", i.lo, i.hi)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn membership_respects_strand_order() {
        // {2} ∪ strand 2 from index 3 on
        let s = RegionSet::closed(pt("2"), pt("2/3"));
        assert!(s.contains(&pt("2")));
        assert!(s.contains(&pt("2/3")) && s.contains(&pt("2/100")));
        assert!(!s.contains(&pt("2/2")) && !s.contains(&pt("3")) && !s.contains(&pt("1/5")));
    }

    #[test]
    fn merge_touching_and_overlapping() {
        let a = RegionSet::half_open(pt("0"), pt("w"));
        let b = RegionSet::closed(pt("w"), pt("w"));
        assert_eq!(a.union(&b), RegionSet::closed(pt("0"), pt("w")));
        let c = RegionSet::closed(pt("1"), pt("3"));
        let d = RegionSet::closed(pt("2"), pt("2"));
        assert_eq!(c.union(&d), c);
        let e = RegionSet::closed(pt("5"), pt("6"));
        assert_eq!(c.union(&e).intervals().len(), 2);
    }

    #[test]
    fn without_drops_exactly_one_point() {
        let s = RegionSet::closed(pt("1"), pt("2"));
        let t = s.without(&pt("1"));
        assert!(!t.contains(&pt("1")));
        for q in ["1/0", "1/-9", "1/9", "2"] {
            assert!(t.contains(&pt(q)), "{q}");
        }
        let u = s.without(&pt("1/0"));
        assert!(!u.contains(&pt("1/0")) && u.contains(&pt("1/1")) && u.contains(&pt("1/-1")));
    }

    #[test]
    fn generic_instantiation() {
        let s = RegionSet::closed(pt("m-1"), pt("m"));
        let t = s.instantiate(4).unwrap();
        assert!(t.contains(&pt("3/7")) && t.contains(&pt("4")) && !t.contains(&pt("4/1")));
    }
}
