//! Definition-direct oracles and property predicates shared by the
//! acceptance run and the property tests.
#![allow(dead_code)]

use fixfactor::decomposition::{aorb_succ, quotient, stabilize};
use fixfactor::{FiniteSystem, Partition, PointSet};

pub type Outcome = Result<(), String>;

fn all_sets(n: usize) -> impl Iterator<Item = PointSet> {
    (0..1u64 << n).map(move |m| PointSet::from_mask(n, m))
}

fn is_up(sys: &FiniteSystem, s: &PointSet) -> bool {
    s.iter().all(|x| (0..sys.len()).all(|y| !sys.space().specializes(x, y) || s.contains(y)))
}

fn is_down(sys: &FiniteSystem, s: &PointSet) -> bool {
    s.iter().all(|y| (0..sys.len()).all(|x| !sys.space().specializes(x, y) || s.contains(x)))
}

fn orbit(sys: &FiniteSystem, s: &PointSet) -> PointSet {
    let mut acc = s.clone();
    loop {
        let next = acc.union(&sys.image(&acc));
        if next == acc {
            return acc;
        }
        acc = next;
    }
}

/// Closure as the least down-set containing `s`.
fn closure(sys: &FiniteSystem, s: &PointSet) -> PointSet {
    all_sets(sys.len())
        .filter(|c| s.is_subset(c) && is_down(sys, c))
        .fold(PointSet::full(sys.len()), |a, c| a.intersection(&c))
}

/// Maximal level sets of the continuous invariant functions. Indicators of
/// invariant clopen sets separate exactly the points that some such
/// function separates.
pub fn level_sets(sys: &FiniteSystem) -> Partition {
    let n = sys.len();
    let separators: Vec<PointSet> = all_sets(n)
        .filter(|a| {
            let b = a.complement();
            is_up(sys, a) && is_down(sys, a) && sys.image(a).is_subset(a) && sys.image(&b).is_subset(&b)
        })
        .collect();
    let labels: Vec<usize> = (0..n)
        .map(|x| {
            (0..n)
                .find(|&y| separators.iter().all(|a| a.contains(x) == a.contains(y)))
                .expect("x agrees with itself")
        })
        .collect();
    Partition::from_labels(&labels)
}

fn open_nbhds(sys: &FiniteSystem, x: usize) -> Vec<PointSet> {
    all_sets(sys.len()).filter(|u| u.contains(x) && is_up(sys, u)).collect()
}

/// First prolongation: intersection over all open `U ∋ x` of `cl(orbit(U))`.
pub fn d1(sys: &FiniteSystem, x: usize) -> PointSet {
    open_nbhds(sys, x)
        .iter()
        .map(|u| closure(sys, &orbit(sys, u)))
        .fold(PointSet::full(sys.len()), |a, c| a.intersection(&c))
}

/// Second prolongation at every point: intersection over all open `U ∋ x`
/// of `cl(⋃ₙ D1ⁿ(U))`.
pub fn d2_all(sys: &FiniteSystem) -> Vec<PointSet> {
    let n = sys.len();
    let d1s: Vec<PointSet> = (0..n).map(|y| d1(sys, y)).collect();
    let lift = |s: &PointSet| {
        let mut out = PointSet::empty(n);
        for y in s.iter() {
            out.union_with(&d1s[y]);
        }
        out
    };
    (0..n)
        .map(|x| {
            open_nbhds(sys, x)
                .iter()
                .map(|u| {
                    let mut acc = lift(u);
                    loop {
                        let next = acc.union(&lift(&acc));
                        if next == acc {
                            break closure(sys, &acc);
                        }
                        acc = next;
                    }
                })
                .fold(PointSet::full(n), |a, c| a.intersection(&c))
        })
        .collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn kuratowski(sys: &FiniteSystem, s: &PointSet, t: &PointSet) -> Outcome {
    let sp = sys.space();
    let cl = |a: &PointSet| sp.closure(a);
    check(cl(s) == closure(sys, s), || format!("closure of {s:?}"))?;
    check(s.is_subset(&cl(s)), || format!("not extensive at {s:?}"))?;
    let meet = s.intersection(t);
    check(cl(&meet).is_subset(&cl(t)), || format!("not monotone at {meet:?} ⊆ {t:?}"))?;
    check(cl(&cl(s)) == cl(s), || format!("not idempotent at {s:?}"))?;
    check(cl(&s.union(t)) == cl(s).union(&cl(t)), || format!("union law at {s:?}, {t:?}"))?;
    check(cl(&PointSet::empty(sys.len())).is_empty(), || "closure of empty set".into())?;
    check(sp.interior(s) == cl(&s.complement()).complement(), || format!("interior duality at {s:?}"))
}

/// `classes(S) ⊆ S` ⇔ `classes(S) = S` ⇔ `S` is a union of classes.
pub fn saturation(sys: &FiniteSystem, s: &PointSet) -> Outcome {
    for (d, p) in stabilize(sys).entries() {
        let sat = p.saturate(s);
        let union = p
            .classes()
            .iter()
            .filter(|c| c.is_subset(s))
            .fold(PointSet::empty(sys.len()), |a, c| a.union(c));
        let (a, b, c) = (sat.is_subset(s), sat == *s, union == *s);
        check(a == b && b == c && p.is_saturated(s) == c, || {
            format!("degree {d}: {s:?} gives {a} {b} {c}")
        })?;
    }
    Ok(())
}

/// Each class of a trace entry lies inside one class of the next.
pub fn trace_monotone(sys: &FiniteSystem) -> Outcome {
    let trace = stabilize(sys);
    for w in trace.entries().windows(2) {
        let (a, b) = (&w[0].1, &w[1].1);
        for c in a.classes() {
            check(b.classes().iter().any(|k| c.is_subset(k)), || {
                format!("class {c:?} at {} split at {}", w[0].0, w[1].0)
            })?;
        }
    }
    Ok(())
}

pub fn level_refinement(sys: &FiniteSystem) -> Outcome {
    let oracle = level_sets(sys);
    for (d, p) in stabilize(sys).entries() {
        for c in p.classes() {
            check(oracle.classes().iter().any(|k| c.is_subset(k)), || {
                format!("degree {d} class {c:?} crosses level sets")
            })?;
            check(sys.image(c).is_subset(c), || format!("degree {d} class {c:?} not invariant"))?;
        }
    }
    Ok(())
}

/// Preimage of the intersection of closed neighbourhoods of `[x]` in the
/// stationary quotient equals the successor orbit of `x`.
pub fn quotient_neighbourhood(sys: &FiniteSystem) -> Outcome {
    let trace = stabilize(sys);
    let p = trace.stationary();
    let q = quotient(sys, p).map_err(|e| e.to_string())?;
    let qs = q.quotient.space();
    let k = q.quotient.len();
    for x in 0..sys.len() {
        let cx = q.projection[x];
        let nbhd = all_sets(k)
            .filter(|c| qs.is_closed(c) && qs.minimal_open(cx).is_subset(c))
            .fold(PointSet::full(k), |a, c| a.intersection(&c));
        let pre = PointSet::from_indices(sys.len(), (0..sys.len()).filter(|&y| nbhd.contains(q.projection[y])));
        check(pre == aorb_succ(sys, p, x), || {
            format!("at {}: preimage {pre:?}", sys.space().name(x))
        })?;
    }
    Ok(())
}

pub fn per_system(sys: &FiniteSystem) -> Outcome {
    trace_monotone(sys)?;
    level_refinement(sys)?;
    quotient_neighbourhood(sys)
}

pub fn per_subsets(sys: &FiniteSystem, s: &PointSet, t: &PointSet) -> Outcome {
    kuratowski(sys, s, t)?;
    saturation(sys, s)
}
