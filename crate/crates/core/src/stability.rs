//! Lyapunov stability and its degree hierarchy on finite systems.

use serde::Serialize;

use crate::decomposition::{oracle_partition, saturated_open_hull, sorb_closure, DegreeTrace};
use crate::error::{Error, Result};
use crate::ordinal::OrdinalCNF;
use crate::partition::Partition;
use crate::topology::{FiniteSystem, PointSet};

/// Default size bound for the partition searches.
pub const PARTITION_SEARCH_BOUND: usize = 6;

/// Intersection of all invariant neighbourhoods of `m`.
pub fn invariant_core(sys: &FiniteSystem, m: &PointSet) -> PointSet {
    sys.forward_saturation(&sys.space().open_hull(m))
}

/// `m` equals the intersection of its invariant neighbourhoods.
pub fn is_lyapunov_stable(sys: &FiniteSystem, m: &PointSet) -> bool {
    invariant_core(sys, m) == *m
}

/// Stability of degree `d`: `m` equals the saturated closure (w.r.t. the
/// degree-`d` superorbits) of its least open saturated neighbourhood.
/// Degrees past the trace's stabilization reuse the stationary partition.
pub fn is_stable_degree(
    sys: &FiniteSystem,
    m: &PointSet,
    d: &OrdinalCNF,
    trace: &DegreeTrace,
) -> bool {
    let p = trace.partition_at(d);
    sorb_closure(sys, p, &saturated_open_hull(sys, p, m)) == *m
}

/// Plain stability together with every degree up to stabilization; higher
/// degrees test against the same partition.
pub fn is_absolutely_stable(sys: &FiniteSystem, m: &PointSet, trace: &DegreeTrace) -> bool {
    is_lyapunov_stable(sys, m)
        && trace
            .entries()
            .iter()
            .all(|(d, _)| is_stable_degree(sys, m, d, trace))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub set: Vec<String>,
    pub stable_plain: bool,
    pub stable_by_degree: Vec<(OrdinalCNF, bool)>,
    pub absolutely_stable: bool,
}

pub fn stability_report(sys: &FiniteSystem, m: &PointSet, trace: &DegreeTrace) -> StabilityReport {
    let stable_plain = is_lyapunov_stable(sys, m);
    let stable_by_degree: Vec<(OrdinalCNF, bool)> = trace
        .entries()
        .iter()
        .map(|(d, _)| (d.clone(), is_stable_degree(sys, m, d, trace)))
        .collect();
    let absolutely_stable = stable_plain && stable_by_degree.iter().all(|(_, s)| *s);
    StabilityReport {
        set: sys.space().names_of(m),
        stable_plain,
        stable_by_degree,
        absolutely_stable,
    }
}

fn check_bound(sys: &FiniteSystem, bound: usize) -> Result<()> {
    let bound = bound.min(16);
    if sys.len() > bound {
        return Err(Error::Size {
            what: "partition search",
            size: sys.len(),
            bound,
        });
    }
    Ok(())
}

/// All partitions of the points into blocks drawn from `blocks` (bitmasks),
/// enumerated by always placing the least unassigned point first.
fn partitions_from_blocks(n: usize, blocks: &[u64]) -> Vec<Vec<u64>> {
    fn go(rest: u64, blocks: &[u64], cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        let x = rest.trailing_zeros();
        for &b in blocks {
            if b >> x & 1 == 1 && b & !rest == 0 {
                cur.push(b);
                go(rest & !b, blocks, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go((1u64 << n) - 1, blocks, &mut Vec::new(), &mut out);
    out
}

fn to_partition(n: usize, blocks: &[u64]) -> Partition {
    let mut labels = vec![0; n];
    for (i, b) in blocks.iter().enumerate() {
        for (x, l) in labels.iter_mut().enumerate() {
            if b >> x & 1 == 1 {
                *l = i;
            }
        }
    }
    Partition::from_labels(&labels)
}

/// All partitions whose every class is absolutely stable.
pub fn absolutely_stable_partitions(
    sys: &FiniteSystem,
    trace: &DegreeTrace,
    bound: usize,
) -> Result<Vec<Partition>> {
    check_bound(sys, bound)?;
    let n = sys.len();
    let blocks: Vec<u64> = (1..1u64 << n)
        .filter(|&m| is_absolutely_stable(sys, &PointSet::from_mask(n, m), trace))
        .collect();
    Ok(partitions_from_blocks(n, &blocks)
        .iter()
        .map(|b| to_partition(n, b))
        .collect())
}

/// Finest partition into absolutely stable sets.
///
/// Returns the candidate with the most classes (first in enumeration order);
/// when the candidates have a finest element this is it.
pub fn finest_abs_stable_partition(
    sys: &FiniteSystem,
    trace: &DegreeTrace,
    bound: usize,
) -> Result<Partition> {
    let all = absolutely_stable_partitions(sys, trace, bound)?;
    // The one-class partition is always a candidate: K is closed, open,
    // saturated and invariant.
    Ok(all
        .into_iter()
        .fold(None::<Partition>, |best, p| match best {
            Some(b) if b.class_count() >= p.class_count() => Some(b),
            _ => Some(p),
        })
        .expect("the trivial partition is absolutely stable"))
}

/// A partition into plain Lyapunov-stable sets strictly finer than the
/// fixed-space partition, if one exists (the finest such is returned).
pub fn finer_plain_stable_witness(sys: &FiniteSystem, bound: usize) -> Result<Option<Partition>> {
    check_bound(sys, bound)?;
    let n = sys.len();
    let oracle = oracle_partition(sys);
    let blocks: Vec<u64> = (1..1u64 << n)
        .filter(|&m| {
            let s = PointSet::from_mask(n, m);
            let first = s.first().expect("nonempty");
            s.is_subset(oracle.class_of(first)) && is_lyapunov_stable(sys, &s)
        })
        .collect();
    Ok(partitions_from_blocks(n, &blocks)
        .into_iter()
        .filter(|b| b.len() > oracle.class_count())
        .max_by_key(|b| std::cmp::Reverse(usize::MAX - b.len()))
        .map(|b| to_partition(n, &b)))
}
