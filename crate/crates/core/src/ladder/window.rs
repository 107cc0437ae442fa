//! Finite windows of a ladder, used to audit symbolic answers on concrete
//! points.
//!
//! A window holds the fixed points whose positions have at most two terms,
//! with coefficients at most `M` and exponents of at most two terms with
//! coefficients at most `M`, the top, and strand points with indices in
//! `[−J, J]`. A point is on the frontier when part of its neighbourhood basis
//! or its image is not materialized.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    ladder_aorb0, successor_aorb, LadderSpace, LadderTrace, Point, Pos, RegionSet, SymPartition,
};
use crate::error::Result;
use crate::ordinal::OrdinalCNF;

#[derive(Clone, Debug)]
pub struct Window {
    m: u64,
    j: i64,
    points: Vec<Point>,
    index: HashMap<Point, usize>,
    frontier: Vec<bool>,
    image: Vec<Option<usize>>,
    /// for each fixed point, pairs of window points whose joint presence in
    /// a closed set forces the fixed point in
    forcing: Vec<Vec<(usize, usize)>>,
}

fn exponents_below(e: &OrdinalCNF, m: u64) -> Vec<OrdinalCNF> {
    let mut out = vec![OrdinalCNF::zero()];
    for a in 0..=2u32 {
        for ca in 1..=m {
            let one = OrdinalCNF::from_terms(vec![(a, ca)]).expect("canonical");
            out.push(one);
            for b in 0..a {
                for cb in 1..=m {
                    out.push(OrdinalCNF::from_terms(vec![(a, ca), (b, cb)]).expect("canonical"));
                }
            }
        }
    }
    out.retain(|x| x < e);
    out.sort();
    out.dedup();
    out
}

fn positions(top: &Pos, m: u64) -> Vec<Pos> {
    let exps = exponents_below(&top.terms()[0].0, m);
    let mut out = vec![Pos::zero(), top.clone()];
    let nat = |c| super::Coef::Nat(c);
    for (i, e1) in exps.iter().enumerate() {
        for c1 in 1..=m {
            out.push(Pos::from_terms(vec![(e1.clone(), nat(c1))]).expect("canonical"));
            for e2 in &exps[..i] {
                for c2 in 1..=m {
                    out.push(
                        Pos::from_terms(vec![(e1.clone(), nat(c1)), (e2.clone(), nat(c2))])
                            .expect("canonical"),
                    );
                }
            }
        }
    }
    out.retain(|p| p <= top);
    out.sort();
    out.dedup();
    out
}

/// Smallest family cut. Limit forcing pairs sit at `approach(m − 1)` and
/// `approach(m)` and must lie beyond the sample coefficients (at most 2).
pub const MIN_FAMILY_CUT: u64 = 3;

/// Materializes the window with family cut `m` (raised to
/// [`MIN_FAMILY_CUT`]) and strand cut `j`.
pub fn window(space: &LadderSpace, m: u64, j: i64) -> Window {
    let m = m.max(MIN_FAMILY_CUT);
    let j = j.max(1);
    let top = space.top().clone();
    let mut points = Vec::new();
    for a in positions(&top, m) {
        if a < top {
            points.extend((-j..=j).map(|k| Point::Strand(a.clone(), k)));
        }
        points.push(Point::Fixed(a));
    }
    points.sort();
    let index: HashMap<Point, usize> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let at = |p: &Point| index.get(p).copied();
    let mut frontier = vec![false; points.len()];
    let mut image = vec![None; points.len()];
    let mut forcing = vec![Vec::new(); points.len()];
    for (i, p) in points.iter().enumerate() {
        match p {
            Point::Strand(_, k) => {
                image[i] = at(&p.image());
                frontier[i] = k.abs() == j;
            }
            Point::Fixed(a) => {
                image[i] = Some(i);
                let mut pairs = Vec::new();
                if *a < top {
                    pairs.push((
                        at(&Point::Strand(a.clone(), j - 1)),
                        at(&Point::Strand(a.clone(), j)),
                    ));
                }
                if let Some(b) = a.predecessor() {
                    pairs.push((
                        at(&Point::Strand(b.clone(), -j)),
                        at(&Point::Strand(b, 1 - j)),
                    ));
                } else if a.is_limit() {
                    let pair = (
                        a.approach(m - 1).filter(|_| m > 1).and_then(|q| at(&Point::Fixed(q))),
                        a.approach(m).and_then(|q| at(&Point::Fixed(q))),
                    );
                    frontier[i] = pair.0.is_none() || pair.1.is_none();
                    pairs.push(pair);
                }
                forcing[i] = pairs
                    .into_iter()
                    .filter_map(|(x, y)| Some((x?, y?)))
                    .collect();
            }
        }
    }
    Window {
        m,
        j,
        points,
        index,
        frontier,
        image,
        forcing,
    }
}

impl Window {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn cuts(&self) -> (u64, i64) {
        (self.m, self.j)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn is_frontier(&self, i: usize) -> bool {
        self.frontier[i]
    }

    pub fn frontier_count(&self) -> usize {
        self.frontier.iter().filter(|&&f| f).count()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Window members of a symbolic set; generic indices must be
    /// instantiated first.
    /// Index ranges of the members of `s`; points are sorted, so each
    /// interval is one contiguous range.
    pub fn member_ranges<'a>(&'a self, s: &'a RegionSet) -> impl Iterator<Item = Range<usize>> + 'a {
        s.intervals().iter().map(|iv| {
            let lo = self.points.partition_point(|p| *p < iv.lo);
            let hi = if iv.hi_inclusive {
                self.points.partition_point(|p| *p <= iv.hi)
            } else {
                self.points.partition_point(|p| *p < iv.hi)
            };
            lo..hi.max(lo)
        })
    }

    pub fn members(&self, s: &RegionSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.points.len());
        for r in self.member_ranges(s) {
            out.insert_range(r);
        }
        out
    }

    /// Non-frontier members, as points.
    pub fn restrict(&self, s: &RegionSet) -> BTreeSet<Point> {
        self.members(s)
            .ones()
            .filter(|&i| !self.frontier[i])
            .map(|i| self.points[i].clone())
            .collect()
    }

    /// Least superset closed under the window dynamics and the forcing pairs.
    fn orbit_closure(&self, seed: &FixedBitSet) -> FixedBitSet {
        let mut s = seed.clone();
        loop {
            let before = s.count_ones(..);
            for i in s.ones().collect::<Vec<_>>() {
                let mut k = i;
                while let Some(n) = self.image[k] {
                    if n == k || s.contains(n) {
                        break;
                    }
                    s.insert(n);
                    k = n;
                }
            }
            for (i, pairs) in self.forcing.iter().enumerate() {
                if !s.contains(i) && pairs.iter().any(|&(x, y)| s.contains(x) && s.contains(y)) {
                    s.insert(i);
                }
            }
            if s.count_ones(..) == before {
                return s;
            }
        }
    }

    /// Truncated basic neighbourhood of a window point.
    fn neighbourhood(&self, x: &Point) -> FixedBitSet {
        let mut u = FixedBitSet::with_capacity(self.points.len());
        let Some(i) = self.index_of(x) else {
            return u;
        };
        u.insert(i);
        if let Point::Fixed(a) = x {
            for &(p, q) in &self.forcing[i] {
                u.insert(p);
                u.insert(q);
            }
            if a.is_limit() {
                if let Some(lo) = a.approach(self.m).map(Point::Fixed) {
                    for (k, p) in self.points.iter().enumerate() {
                        if lo < *p && p < x {
                            u.insert(k);
                        }
                    }
                }
            }
        }
        u
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub points: usize,
    pub frontier: usize,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl WindowReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(&mut self, other: WindowReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

/// Necessary-condition audit of a concrete symbolic set `s` on the window:
/// closed under the forcing pairs, forward invariant on non-frontier points,
/// and, when it claims to be the degree-0 orbit of `x`, containing `x` and
/// contained in the orbit closure of the truncated neighbourhood of `x`.
pub fn window_check(w: &Window, label: &str, s: &RegionSet, x: Option<&Point>) -> WindowReport {
    let mem = w.members(s);
    let mut r = WindowReport {
        points: w.len(),
        frontier: w.frontier_count(),
        ..Default::default()
    };
    for (i, p) in w.points.iter().enumerate() {
        r.checked += 1;
        if mem.contains(i) {
            if let Some(n) = w.image[i] {
                if !w.frontier[i] && !mem.contains(n) {
                    r.violations
                        .push(format!("{label}: invariance fails at {p} -> {}", w.points[n]));
                }
            }
        } else if w.forcing[i]
            .iter()
            .any(|&(a, b)| mem.contains(a) && mem.contains(b))
        {
            r.violations.push(format!("{label}: closure misses {p}"));
        }
    }
    if let Some(x) = x {
        if !s.contains(x) {
            r.violations.push(format!("{label}: {x} not in its own orbit"));
        }
        if w.index_of(x).is_some() {
            let bound = w.orbit_closure(&w.neighbourhood(x));
            for i in mem.ones() {
                if !w.frontier[i] && !bound.contains(i) {
                    r.violations.push(format!(
                        "{label}: {} not forced by neighbourhoods of {x}",
                        w.points[i]
                    ));
                }
            }
        }
    }
    r
}

/// Checks that `s` is a union of classes of `p` on the window.
fn saturation_check(w: &Window, label: &str, p: &SymPartition, s: &RegionSet) -> WindowReport {
    let mem = w.members(s);
    let mut present: HashMap<Pos, (bool, bool)> = HashMap::new();
    for (i, q) in w.points.iter().enumerate() {
        let e = present.entry(p.class_bottom(q)).or_default();
        if mem.contains(i) {
            e.0 = true;
        } else {
            e.1 = true;
        }
    }
    let violations = present
        .into_iter()
        .filter(|(_, (a, b))| *a && *b)
        .map(|(c, _)| format!("{label}: splits the class at {c}"))
        .collect();
    WindowReport {
        points: w.len(),
        frontier: w.frontier_count(),
        checked: w.len(),
        violations,
    }
}

/// Checks a partition on the window: classes are forward invariant, and at
/// degree 0 each degree-0 orbit lies in one class and links every successor
/// to its predecessor and every strand point to its lower end.
fn partition_check(
    space: &LadderSpace,
    w: &Window,
    label: &str,
    p: &SymPartition,
    degree_zero: bool,
) -> Result<WindowReport> {
    let mut r = WindowReport {
        points: w.len(),
        frontier: w.frontier_count(),
        ..Default::default()
    };
    for (i, q) in w.points.iter().enumerate() {
        if w.frontier[i] {
            continue;
        }
        r.checked += 1;
        if let Some(n) = w.image[i] {
            if !p.same_class(q, &w.points[n]) {
                r.violations.push(format!("{label}: class of {q} not invariant"));
            }
        }
        if degree_zero {
            let orbit = ladder_aorb0(space, q)?;
            for k in w.member_ranges(&orbit).flatten() {
                if !p.same_class(q, &w.points[k]) {
                    r.violations
                        .push(format!("{label}: orbit of {q} leaves its class at {}", w.points[k]));
                }
            }
            let link = match q {
                Point::Fixed(a) => a.predecessor().map(Point::Fixed),
                Point::Strand(a, _) => Some(Point::Fixed(a.clone())),
            };
            if let Some(l) = link {
                if !orbit.contains(&l) || !p.same_class(q, &l) {
                    r.violations.push(format!("{label}: {q} not linked to {l}"));
                }
            }
        }
    }
    Ok(r)
}

/// Sample locators: fixed points with one term and coefficient at most 2,
/// the top, and the index-0 strand point above each.
fn samples(space: &LadderSpace, w: &Window) -> Vec<Point> {
    let mut out = Vec::new();
    for p in &w.points {
        if let Point::Fixed(a) = p {
            let small = a.terms().len() <= 1
                && a.terms()
                    .iter()
                    .all(|(_, c)| matches!(c, super::Coef::Nat(n) if *n <= 2));
            if small || a == space.top() {
                out.push(p.clone());
                if a < space.top() {
                    out.push(Point::Strand(a.clone(), 0));
                }
            }
        }
    }
    out
}

/// Audits every ladder answer on the window: degree-0 orbits of the sample
/// locators, every partition of the trace, and the successor orbits of the
/// sample locators at each degree.
pub fn audit_ladder(space: &LadderSpace, trace: &LadderTrace, w: &Window) -> Result<WindowReport> {
    let xs = samples(space, w);
    let mut parts: Vec<Result<WindowReport>> = xs
        .par_iter()
        .map(|x| {
            let s = ladder_aorb0(space, x)?;
            Ok(window_check(w, &format!("aorb0({x})"), &s, Some(x)))
        })
        .collect();
    for (k, (d, p)) in trace.entries().iter().enumerate() {
        parts.push(partition_check(space, w, &format!("degree {d}"), p, k == 0));
        let next = d.successor();
        parts.extend(xs.par_iter().map(|x| {
            let s = successor_aorb(space, p, x);
            let label = format!("aorb{next}({x})");
            let mut r = window_check(w, &label, &s, None);
            if !s.contains(x) {
                r.violations.push(format!("{label}: misses its point"));
            }
            r.merge(saturation_check(w, &label, p, &s));
            Ok(r)
        }).collect::<Vec<_>>());
    }
    let mut report = WindowReport {
        points: w.len(),
        frontier: w.frontier_count(),
        ..Default::default()
    };
    for r in parts {
        report.merge(r?);
    }
    Ok(report)
}

/// Restrictions of each answer to points that are materialized and
/// non-frontier in every window agree across the windows.
pub fn answers_stable(windows: &[Window], answers: &[RegionSet]) -> bool {
    let Some((first, rest)) = windows.split_first() else {
        return true;
    };
    let common: Vec<&Point> = first
        .points
        .iter()
        .enumerate()
        .filter(|&(i, p)| {
            !first.frontier[i]
                && rest
                    .iter()
                    .all(|w| w.index_of(p).is_some_and(|k| !w.frontier[k]))
        })
        .map(|(_, p)| p)
        .collect();
    answers.iter().all(|s| {
        let views: Vec<Vec<bool>> = windows
            .iter()
            .map(|w| {
                common
                    .iter()
                    .map(|p| w.members(s).contains(w.index_of(p).expect("common")))
                    .collect()
            })
            .collect();
        views.windows(2).all(|v| v[0] == v[1])
    })
}
