//! Approximating orbits, superorbits and their stabilization on finite
//! systems, together with the quotient (fixed factor) and the fixed-space
//! oracle they are checked against.
//!
//! On a finite space every point `x` has a least neighbourhood
//! `minimal_open(x)`, so the intersections over neighbourhood filters that
//! define approximating orbits collapse onto a single admissible set:
//!
//! * degree 0: `aorb0(x) = cl(orbit(minimal_open(x)))`, which is closed,
//!   invariant and a neighbourhood, and is contained in every other such set;
//! * successor degrees: the least open saturated set containing `x` is
//!   admissible and the saturated closure is monotone, so `aorb_succ(x)` is
//!   the saturated closure of that one set.
//!
//! [`reference_intersection`] evaluates both definitions by brute force and
//! is used to check the shortcuts.

use crate::error::{Error, Result};
use crate::ordinal::OrdinalCNF;
use crate::partition::Partition;
use crate::topology::{FiniteSpace, FiniteSystem, PointSet, SelfMap};

/// Default size bound for [`reference_intersection`].
pub const REFERENCE_BOUND: usize = 12;

/// Smallest closed invariant neighbourhood of `x`.
pub fn aorb0(sys: &FiniteSystem, x: usize) -> PointSet {
    let space = sys.space();
    space.closure(&sys.forward_saturation(space.minimal_open(x)))
}

/// Superorbits of degree 0.
pub fn sorb0_partition(sys: &FiniteSystem) -> Partition {
    let cover: Vec<PointSet> = (0..sys.len()).map(|x| aorb0(sys, x)).collect();
    Partition::generated_by_cover(sys.space(), &cover).expect("x ∈ aorb0(x)")
}

/// Least open `P`-saturated superset of `s`.
pub fn saturated_open_hull(sys: &FiniteSystem, p: &Partition, s: &PointSet) -> PointSet {
    let space = sys.space();
    let mut cur = s.clone();
    loop {
        let next = space.open_hull(&p.saturate(&cur));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Least open `P`-saturated set containing `x`.
pub fn min_saturated_open_nbhd(sys: &FiniteSystem, p: &Partition, x: usize) -> PointSet {
    saturated_open_hull(sys, p, &PointSet::singleton(sys.len(), x))
}

/// Least closed `P`-saturated superset of `u`.
pub fn sorb_closure(sys: &FiniteSystem, p: &Partition, u: &PointSet) -> PointSet {
    let space = sys.space();
    let mut cur = u.clone();
    loop {
        let next = space.closure(&p.saturate(&cur));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Approximating orbit of the degree following the one whose superorbits
/// form `p`.
pub fn aorb_succ(sys: &FiniteSystem, p: &Partition, x: usize) -> PointSet {
    sorb_closure(sys, p, &min_saturated_open_nbhd(sys, p, x))
}

/// Superorbits of the next degree.
pub fn degree_step(sys: &FiniteSystem, p: &Partition) -> Partition {
    let cover: Vec<PointSet> = (0..sys.len()).map(|x| aorb_succ(sys, p, x)).collect();
    Partition::generated_by_cover(sys.space(), &cover).expect("x ∈ aorb_succ(x)")
}

/// Which definition [`reference_intersection`] evaluates.
#[derive(Clone, Copy, Debug)]
pub enum ReferenceMode<'a> {
    /// ∩ of all closed invariant neighbourhoods of `x`.
    Base,
    /// ∩ over all open `P`-saturated `U ∋ x` of the saturated closure of `U`,
    /// the closure itself taken as ∩ of all closed saturated supersets.
    Succ(&'a Partition),
}

/// Definition-direct evaluation by exhaustive enumeration of subsets.
pub fn reference_intersection(
    sys: &FiniteSystem,
    mode: ReferenceMode<'_>,
    x: usize,
    bound: usize,
) -> Result<PointSet> {
    let n = sys.len();
    let bound = bound.min(20);
    if n > bound {
        return Err(Error::Size {
            what: "reference intersection",
            size: n,
            bound,
        });
    }
    let space = sys.space();
    let all = (1u64 << n) - 1;
    let subsets = || (0..=all).map(|m| PointSet::from_mask(n, m));
    let mut acc = all;
    match mode {
        ReferenceMode::Base => {
            let nbhd = space.minimal_open(x).mask();
            for f in subsets() {
                let m = f.mask();
                if m & nbhd == nbhd && space.is_closed(&f) && sys.is_invariant(&f) {
                    acc &= m;
                }
            }
        }
        ReferenceMode::Succ(p) => {
            let closed_saturated: Vec<u64> = subsets()
                .filter(|f| space.is_closed(f) && p.is_saturated(f))
                .map(|f| f.mask())
                .collect();
            for u in subsets() {
                let m = u.mask();
                if m >> x & 1 == 0 || !space.is_open(&u) || !p.is_saturated(&u) {
                    continue;
                }
                let hull = closed_saturated
                    .iter()
                    .filter(|&&f| f & m == m)
                    .fold(all, |h, &f| h & f);
                acc &= hull;
            }
        }
    }
    Ok(PointSet::from_mask(n, acc))
}

/// Superorbit partitions by degree, up to the first stationary degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTrace {
    entries: Vec<(OrdinalCNF, Partition)>,
}

impl DegreeTrace {
    pub fn entries(&self) -> &[(OrdinalCNF, Partition)] {
        &self.entries
    }

    /// Least degree `d` with `sorb_d = sorb_{d+1}`.
    pub fn stabilization_degree(&self) -> &OrdinalCNF {
        &self.entries.last().expect("trace is nonempty").0
    }

    pub fn stationary(&self) -> &Partition {
        &self.entries.last().expect("trace is nonempty").1
    }

    /// Partition at degree `d`; degrees past stabilization repeat the last one.
    pub fn partition_at(&self, d: &OrdinalCNF) -> &Partition {
        self.entries
            .iter()
            .rev()
            .find(|(deg, _)| deg <= d)
            .map(|(_, p)| p)
            .unwrap_or(&self.entries[0].1)
    }

    /// Re-checks that one more step leaves the last partition unchanged.
    pub fn is_stationary(&self, sys: &FiniteSystem) -> bool {
        degree_step(sys, self.stationary()) == *self.stationary()
    }
}

/// Iterates [`degree_step`] from the degree-0 superorbits to a fixpoint.
///
/// Partitions only coarsen, so this stops after fewer than `|K|` steps and
/// limit degrees never occur.
pub fn stabilize(sys: &FiniteSystem) -> DegreeTrace {
    let mut entries = vec![(OrdinalCNF::zero(), sorb0_partition(sys))];
    loop {
        let (deg, last) = entries.last().expect("nonempty");
        let next = degree_step(sys, last);
        if next == *last {
            return DegreeTrace { entries };
        }
        let deg = deg.successor();
        entries.push((deg, next));
    }
}

/// Equivalence generated by comparability and `x ∼ φ(x)`; its classes are
/// the maximal level sets of the Koopman fixed space, so its class count is
/// `dim fix T_φ`.
pub fn oracle_partition(sys: &FiniteSystem) -> Partition {
    let space = sys.space();
    let n = sys.len();
    let comparable = (0..n).flat_map(|x| space.minimal_open(x).iter().map(move |y| (x, y)));
    let graph = (0..n).map(|x| (x, sys.map().apply(x)));
    Partition::from_unions(n, comparable.chain(graph))
}

/// Dimension of the Koopman fixed space.
pub fn dim_fix(sys: &FiniteSystem) -> usize {
    oracle_partition(sys).class_count()
}

pub fn is_topologically_ergodic(sys: &FiniteSystem) -> bool {
    stabilize(sys).stationary().is_single()
}

/// The quotient system together with its projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientResult {
    pub quotient: FiniteSystem,
    /// `projection[x]` = index of the class point of `x` in `quotient`.
    pub projection: Vec<usize>,
}

/// Quotient of `sys` by a partition into invariant classes.
///
/// A class point `[x]` specializes `[y]` when some representatives do; the
/// transitive closure of that relation is the quotient topology.
pub fn quotient(sys: &FiniteSystem, p: &Partition) -> Result<QuotientResult> {
    let space = sys.space();
    for class in p.classes() {
        if !sys.is_invariant(class) {
            let x = class.first().expect("nonempty class");
            return Err(Error::Invariance(space.name(x).to_owned()));
        }
    }
    let names: Vec<String> = p
        .classes()
        .iter()
        .map(|c| format!("[{}]", space.names_of(c).join(",")))
        .collect();
    let n = space.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| space.minimal_open(x).iter().map(move |y| (x, y)))
        .map(|(x, y)| (p.class_id(x), p.class_id(y)))
        .collect();
    let qspace = FiniteSpace::from_indexed(names, &pairs)?;
    let qmap: Vec<usize> = p
        .classes()
        .iter()
        .map(|c| p.class_id(sys.map().apply(c.first().expect("nonempty class"))))
        .collect();
    let quotient = FiniteSystem::from_parts_unchecked(
        qspace.clone(),
        SelfMap::validate(&qspace, qmap).expect("induced map of a continuous map is continuous"),
    );
    Ok(QuotientResult {
        quotient,
        projection: p.labels().to_vec(),
    })
}

/// First prolongation: `cl(⋃_{n≥0} φⁿ(U))` at the least neighbourhood `U`
/// of `x`, accumulated image by image.
pub fn prolongation_d1(sys: &FiniteSystem, x: usize) -> PointSet {
    let space = sys.space();
    let mut image = space.minimal_open(x).clone();
    let mut seen = vec![image.clone()];
    let mut acc = image.clone();
    loop {
        image = sys.image(&image);
        if seen.contains(&image) {
            break;
        }
        acc.union_with(&image);
        seen.push(image.clone());
    }
    space.closure(&acc)
}

/// Second prolongation: `cl(⋃_n D1ⁿ(U))` at the least neighbourhood `U`.
pub fn prolongation_d2(sys: &FiniteSystem, x: usize) -> PointSet {
    let d1_of = |s: &PointSet| {
        let mut out = PointSet::empty(sys.len());
        for y in s.iter() {
            out.union_with(&prolongation_d1(sys, y));
        }
        out
    };
    let mut acc = sys.space().minimal_open(x).clone();
    loop {
        let next = acc.union(&d1_of(&acc));
        if next == acc {
            return sys.space().closure(&acc);
        }
        acc = next;
    }
}
