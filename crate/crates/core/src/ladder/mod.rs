//! Countable compact ladder systems and their superorbit hierarchy.
//!
//! A term describes a ladder whose fixed points form the ordinal `[0, Λ]`
//! with the order topology, `Λ = ω^E`, and whose remaining points are one
//! two-sided orbit (a strand) in every gap `(α, α+1)`:
//!
//! * `strand`: `E = 0`, a single strand between the fixed points 0 and 1;
//! * `cat(T)`: ω copies of `T` end to end plus a point at infinity, `E = E_T + 1`;
//! * `ramp`: blocks `cat^k(strand)` for `k = 0, 1, …` in a row, `E = ω`.

mod cuts;
mod position;
mod region;
mod window;

use std::fmt;

use serde::Serialize;

pub use cuts::{CutSet, Segment, SymPartition};
pub use position::{Coef, Point, Pos};
pub use region::{Interval, RegionSet};
pub use window::{answers_stable, audit_ladder, window, window_check, Window, WindowReport, MIN_FAMILY_CUT};

use crate::error::{Error, Result};
use crate::ordinal::OrdinalCNF;

/// Default cap on `cat` nesting.
pub const NESTING_CAP: usize = 6;

/// Finite successor steps tried before giving up on stationarity.
const STEP_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LadderTerm {
    Strand,
    Ramp,
    Cat(Box<LadderTerm>),
}

impl LadderTerm {
    /// Number of `cat` wrappers.
    pub fn depth(&self) -> usize {
        match self {
            LadderTerm::Cat(t) => 1 + t.depth(),
            _ => 0,
        }
    }

    /// `E` with `Λ = ω^E`.
    pub fn exponent(&self) -> OrdinalCNF {
        match self {
            LadderTerm::Strand => OrdinalCNF::zero(),
            LadderTerm::Ramp => OrdinalCNF::omega(),
            LadderTerm::Cat(t) => t.exponent().successor(),
        }
    }
}

impl fmt::Display for LadderTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderTerm::Strand => f.write_str("strand"),
            LadderTerm::Ramp => f.write_str("ramp"),
            LadderTerm::Cat(t) => write!(f, "cat({t})"),
        }
    }
}

pub fn parse_term(text: &str) -> Result<LadderTerm> {
    parse_term_capped(text, NESTING_CAP)
}

pub fn parse_term_capped(text: &str, cap: usize) -> Result<LadderTerm> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = compact.as_str();
    let mut depth = 0;
    while let Some(inner) = rest.strip_prefix("cat(") {
        rest = inner
            .strip_suffix(')')
            .ok_or_else(|| Error::Term(format!("unbalanced `{text}`")))?;
        depth += 1;
        if depth > cap {
            return Err(Error::Depth { depth, cap });
        }
    }
    let mut term = match rest {
        "strand" => LadderTerm::Strand,
        "ramp" => LadderTerm::Ramp,
        _ => return Err(Error::Term(format!("unknown term `{text}`"))),
    };
    for _ in 0..depth {
        term = LadderTerm::Cat(Box::new(term));
    }
    Ok(term)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Fixed,
    Strand,
    Top,
}

/// A family of points sharing a shape; `lead` is the leading exponent of
/// their positions (`m` for the generic finite exponent of a ramp block).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    pub kind: RegionKind,
    pub lead: String,
    pub axes: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderSpace {
    term: LadderTerm,
    exponent: OrdinalCNF,
    top: Pos,
}

pub fn build_ladder(term: &LadderTerm) -> LadderSpace {
    let exponent = term.exponent();
    LadderSpace {
        term: term.clone(),
        top: Pos::omega_pow(exponent.clone()),
        exponent,
    }
}

impl LadderSpace {
    pub fn term(&self) -> &LadderTerm {
        &self.term
    }

    pub fn top(&self) -> &Pos {
        &self.top
    }

    pub fn top_point(&self) -> Point {
        Point::Fixed(self.top.clone())
    }

    /// Leading exponents `< E` grouped into families: each finite one
    /// separately when `E` is finite, one generic family otherwise, and each
    /// `ω + i` separately.
    pub fn regions(&self) -> Vec<Region> {
        let mut leads = Vec::new();
        match self.exponent.as_nat() {
            Some(e) => leads.extend((0..e.max(1)).map(|k| k.to_string())),
            None => {
                leads.push("m".to_owned());
                let finite = self.exponent.terms().last().map_or(0, |&(x, c)| if x == 0 { c } else { 0 });
                leads.extend((0..finite).map(|i| OrdinalCNF::omega().add(&OrdinalCNF::nat(i)).to_string()));
            }
        }
        let mut out = Vec::new();
        for lead in leads {
            out.push(Region {
                kind: RegionKind::Fixed,
                lead: lead.clone(),
                axes: "coefficients in N".into(),
            });
            out.push(Region {
                kind: RegionKind::Strand,
                lead,
                axes: "coefficients in N, orbit index in Z".into(),
            });
        }
        out.push(Region {
            kind: RegionKind::Top,
            lead: self.top.to_string(),
            axes: String::new(),
        });
        out
    }

    /// Parses and validates a locator: `top`, a position `α ≤ Λ`, or a strand
    /// point `α/j` with `α < Λ`. Coefficients may use the generic index `m`.
    pub fn locate(&self, text: &str) -> Result<Point> {
        let text = text.trim();
        if text == "top" {
            return Ok(self.top_point());
        }
        let p: Point = text.parse()?;
        let ok = match &p {
            Point::Fixed(a) => *a <= self.top,
            Point::Strand(a, _) => *a < self.top,
        };
        if !ok {
            return Err(Error::Locator(format!("`{text}` lies outside {}", self.term)));
        }
        Ok(p)
    }

    pub fn full(&self) -> RegionSet {
        RegionSet::closed(Point::Fixed(Pos::zero()), self.top_point())
    }
}

/// Degree-0 approximating orbit: the intersection over neighbourhoods `U` of
/// `x` of the closure of the forward orbit of `U`.
///
/// Basic neighbourhoods of a fixed point `α` are a backward tail of the strand
/// below (successor `α`) or an interval `(β, α]` (limit `α`), together with a
/// forward tail of the strand above. The orbit of a backward tail is the whole
/// strand, whose closure adds `α − 1`; forward tails and `(β, α]` shrink to
/// nothing. Strand points are isolated.
pub fn ladder_aorb0(space: &LadderSpace, x: &Point) -> Result<RegionSet> {
    match x {
        Point::Fixed(a) if *a > space.top => Err(Error::Locator(x.to_string())),
        Point::Strand(a, _) if *a >= space.top => Err(Error::Locator(x.to_string())),
        Point::Fixed(a) => Ok(match a.predecessor() {
            Some(b) => RegionSet::closed(Point::Fixed(b), x.clone()),
            None => RegionSet::point(x.clone()),
        }),
        Point::Strand(a, _) => Ok(RegionSet::closed(Point::Fixed(a.clone()), x.clone())),
    }
}

/// The partition generated by the degree-0 orbits: every successor joins its
/// predecessor and every strand its lower end, so classes start exactly at
/// the limit positions.
pub fn degree_zero_partition(space: &LadderSpace) -> SymPartition {
    SymPartition {
        top: space.top.clone(),
        cuts: CutSet::all_limits(&space.top),
    }
}

/// Least open saturated set containing `x`.
///
/// Such a set is down-closed: its least missing position below `x` can be
/// neither a successor, whose class holds its predecessor, nor a positive
/// limit, every neighbourhood of which reaches below it.
pub fn saturated_open_hull(space: &LadderSpace, p: &SymPartition, x: &Point) -> RegionSet {
    let zero = Point::Fixed(Pos::zero());
    match p.cuts.above(x.base()) {
        Some(c) => RegionSet::half_open(zero, Point::Fixed(c)),
        None => space.full(),
    }
}

/// Least closed saturated superset of a nonempty down-closed set.
///
/// Such a superset is down-closed too, and its least missing position would
/// be a limit of earlier positions or the successor of one.
pub fn saturated_closure(space: &LadderSpace, s: &RegionSet) -> RegionSet {
    if s.is_empty() {
        RegionSet::empty()
    } else {
        space.full()
    }
}

/// Orbit of `x` at the degree following partition `p`.
pub fn successor_aorb(space: &LadderSpace, p: &SymPartition, x: &Point) -> RegionSet {
    saturated_closure(space, &saturated_open_hull(space, p, x))
}

/// The partition generated by all successor orbits. Every orbit contains
/// position 0, so the orbits chain into one class: their union.
pub fn successor_step(space: &LadderSpace, p: &SymPartition) -> SymPartition {
    let zero = Point::Fixed(Pos::zero());
    let union = successor_aorb(space, p, &zero).union(&successor_aorb(space, p, &space.top_point()));
    debug_assert_eq!(union, space.full());
    SymPartition::single(&space.top)
}

/// Limit degree: classes are unions of the earlier (growing) classes, so a
/// position stays a cut only if it was a cut at every earlier degree.
pub fn limit_step(earlier: &[SymPartition]) -> Option<SymPartition> {
    let (first, rest) = earlier.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, p| SymPartition {
        top: acc.top,
        cuts: acc.cuts.intersect(&p.cuts),
    }))
}

/// Default degree cap `ω·2`.
pub fn default_degree_cap() -> OrdinalCNF {
    OrdinalCNF::from_terms(vec![(1, 2)]).expect("canonical")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderTrace {
    entries: Vec<(OrdinalCNF, SymPartition)>,
}

impl LadderTrace {
    pub fn entries(&self) -> &[(OrdinalCNF, SymPartition)] {
        &self.entries
    }

    pub fn stabilization_degree(&self) -> &OrdinalCNF {
        &self.entries.last().expect("nonempty trace").0
    }

    pub fn stationary(&self) -> &SymPartition {
        &self.entries.last().expect("nonempty trace").1
    }

    /// Partition at degree `d`; degrees past stabilization give the
    /// stationary one.
    pub fn partition_at(&self, d: &OrdinalCNF) -> &SymPartition {
        &self
            .entries
            .iter()
            .rev()
            .find(|(e, _)| e <= d)
            .expect("degree 0 present")
            .1
    }
}

/// Per-degree partitions up to stationarity.
pub fn ladder_trace(space: &LadderSpace, max_degree: &OrdinalCNF) -> Result<LadderTrace> {
    let mut entries = vec![(OrdinalCNF::zero(), degree_zero_partition(space))];
    for _ in 0..STEP_LIMIT {
        let (d, p) = entries.last().expect("nonempty");
        let next = successor_step(space, p);
        if next == *p {
            return Ok(LadderTrace { entries });
        }
        let nd = d.successor();
        if nd > *max_degree {
            return Err(Error::DegreeCap(format!(
                "{} not stationary by degree {max_degree}",
                space.term
            )));
        }
        entries.push((nd, next));
    }
    Err(Error::DegreeCap(format!(
        "{} not stationary within {STEP_LIMIT} successor steps",
        space.term
    )))
}
