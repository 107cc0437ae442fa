//! Exhaustive enumeration of small finite systems and verification runs.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{
    aorb0, aorb_succ, oracle_partition, prolongation_d1, prolongation_d2, quotient,
    reference_intersection, stabilize, ReferenceMode, REFERENCE_BOUND,
};
use crate::error::{Error, Result};
use crate::io::{named_classes, SystemFile};
use crate::ordinal::OrdinalCNF;
use crate::partition::Partition;
use crate::stability::{
    finer_plain_stable_witness, finest_abs_stable_partition, is_absolutely_stable,
    is_lyapunov_stable, is_stable_degree, PARTITION_SEARCH_BOUND,
};
use crate::topology::{FiniteSpace, FiniteSystem, PointSet, SelfMap};

/// Largest size for labeled enumeration.
pub const LABELED_MAX: usize = 5;
/// Largest size with isomorph rejection.
pub const ISO_MAX: usize = 6;
/// Counterexample payloads kept per check.
const KEEP: usize = 5;

/// A preorder as rows: bit `y` of `rel[x]` is set iff `x ≼ y`.
pub type Preorder = Vec<u64>;

fn is_up_set(rel: &[u64], s: u64) -> bool {
    (0..rel.len()).all(|x| s >> x & 1 == 0 || rel[x] & !s == 0)
}

fn is_down_set(rel: &[u64], s: u64) -> bool {
    (0..rel.len()).all(|y| s >> y & 1 == 0 || (0..rel.len()).all(|x| rel[x] >> y & 1 == 0 || s >> x & 1 == 1))
}

/// All labeled preorders on `n` points, each built from one on `n−1` points
/// by choosing the up-set and down-set of the new point.
pub fn labeled_preorders(n: usize) -> Vec<Preorder> {
    let mut level: Vec<Preorder> = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for rel in &level {
            let all = 1u64 << k;
            let ups: Vec<u64> = (0..all).filter(|&s| is_up_set(rel, s)).collect();
            let downs: Vec<u64> = (0..all).filter(|&s| is_down_set(rel, s)).collect();
            for &d in &downs {
                for &u in &ups {
                    if (0..k).any(|x| d >> x & 1 == 1 && u & !rel[x] != 0) {
                        continue;
                    }
                    let mut r = rel.clone();
                    for (x, row) in r.iter_mut().enumerate() {
                        if d >> x & 1 == 1 {
                            *row |= 1 << k;
                        }
                    }
                    r.push(u | 1 << k);
                    next.push(r);
                }
            }
        }
        level = next;
    }
    level
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

fn canonical(rel: &[u64], perms: &[Vec<usize>]) -> Preorder {
    let n = rel.len();
    perms
        .iter()
        .map(|p| {
            let mut r = vec![0u64; n];
            for x in 0..n {
                for y in 0..n {
                    if rel[x] >> y & 1 == 1 {
                        r[p[x]] |= 1 << p[y];
                    }
                }
            }
            r
        })
        .min()
        .expect("at least one permutation")
}

/// Preorders on `n` points, optionally one per isomorphism class.
pub fn topologies(n: usize, up_to_iso: bool) -> Result<Vec<Preorder>> {
    let bound = if up_to_iso { ISO_MAX } else { LABELED_MAX };
    if n > bound {
        return Err(Error::Size {
            what: "census points",
            size: n,
            bound,
        });
    }
    let all = labeled_preorders(n);
    if !up_to_iso {
        return Ok(all);
    }
    let perms = permutations(n);
    let mut seen = HashSet::new();
    Ok(all
        .into_iter()
        .filter(|r| seen.insert(canonical(r, &perms)))
        .collect())
}

/// Monotone self-maps of a preorder, in lexicographic order.
pub fn monotone_maps(rel: &[u64]) -> Vec<Vec<usize>> {
    fn go(rel: &[u64], f: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = rel.len();
        let x = f.len();
        if x == n {
            out.push(f.clone());
            return;
        }
        for v in 0..n {
            let ok = (0..x).all(|y| {
                (rel[x] >> y & 1 == 0 || rel[v] >> f[y] & 1 == 1)
                    && (rel[y] >> x & 1 == 0 || rel[f[y]] >> v & 1 == 1)
            });
            if ok {
                f.push(v);
                go(rel, f, out);
                f.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(rel, &mut Vec::new(), &mut out);
    out
}

fn system(rel: &[u64], f: Vec<usize>) -> FiniteSystem {
    FiniteSystem::from_parts_unchecked(FiniteSpace::from_preorder_matrix(rel), SelfMap::unchecked(f))
}

/// All systems on `n` points: every preorder with every continuous map.
pub fn enumerate_systems(n: usize, up_to_iso: bool) -> Result<Vec<FiniteSystem>> {
    Ok(topologies(n, up_to_iso)?
        .iter()
        .flat_map(|rel| monotone_maps(rel).into_iter().map(move |f| system(rel, f)))
        .collect())
}

/// `count` deterministic systems on `n` points spread over all topologies.
pub fn sample_systems(n: usize, count: usize) -> Result<Vec<FiniteSystem>> {
    let topos = topologies(n, false)?;
    Ok((0..count)
        .map(|i| {
            let rel = &topos[i * topos.len() / count.max(1)];
            let maps = monotone_maps(rel);
            system(rel, maps[(i * 7919) % maps.len()].clone())
        })
        .collect())
}

/// A finite ladder: a chain `b0 ≼ … ≼ b{n−1}` of fixed points with one row
/// point above each, the row marching `r0 → … → r{n−1} → b{n−1}`.
pub fn ladder_generator(n: usize) -> FiniteSystem {
    let n = n.max(1);
    let names: Vec<String> = (0..n)
        .map(|k| format!("b{k}"))
        .chain((0..n).map(|k| format!("r{k}")))
        .collect();
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|k| (k - 1, k)).collect();
    pairs.extend((0..n).map(|k| (k, n + k)));
    let space = FiniteSpace::from_indexed(names, &pairs).expect("valid names");
    let map = (0..n)
        .chain((0..n).map(|k| if k + 1 < n { n + k + 1 } else { n - 1 }))
        .collect();
    FiniteSystem::new(space, map).expect("monotone by construction")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Oracle,
    Hausdorff,
    DegreeZero,
    Reference,
    Stability,
    Ergodic,
    Prolongation,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Oracle,
        Check::Hausdorff,
        Check::DegreeZero,
        Check::Reference,
        Check::Stability,
        Check::Ergodic,
        Check::Prolongation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Oracle => "oracle",
            Check::Hausdorff => "hausdorff",
            Check::DegreeZero => "degree-zero",
            Check::Reference => "reference",
            Check::Stability => "stability",
            Check::Ergodic => "ergodic",
            Check::Prolongation => "prolongation",
        }
    }

    /// Parses a comma-separated list; `all` selects every check.
    pub fn parse_list(text: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim) {
            if part == "all" {
                out.extend(Check::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// `Err` carries a description of the failure.
    pub fn run(self, sys: &FiniteSystem) -> std::result::Result<(), String> {
        match self {
            Check::Oracle => check_oracle(sys),
            Check::Hausdorff => check_hausdorff(sys),
            Check::DegreeZero => check_degree_zero(sys),
            Check::Reference => check_reference(sys),
            Check::Stability => check_stability(sys),
            Check::Ergodic => check_ergodic(sys),
            Check::Prolongation => check_prolongation(sys),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown check `{s}`")))
    }
}

fn fail(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_oracle(sys: &FiniteSystem) -> std::result::Result<(), String> {
    let trace = stabilize(sys);
    fail(trace.is_stationary(sys), || "trace not stationary".into())?;
    let oracle = oracle_partition(sys);
    fail(*trace.stationary() == oracle, || {
        format!(
            "stationary {:?} != oracle {:?}",
            named_classes(sys, trace.stationary()),
            named_classes(sys, &oracle)
        )
    })
}

fn check_hausdorff(sys: &FiniteSystem) -> std::result::Result<(), String> {
    let trace = stabilize(sys);
    let q = quotient(sys, trace.stationary()).map_err(|e| e.to_string())?;
    fail(q.quotient.space().is_discrete(), || "quotient not discrete".into())?;
    fail(*trace.stationary() == oracle_partition(sys), || {
        "classes are not the maximal level sets".into()
    })
}

fn check_degree_zero(sys: &FiniteSystem) -> std::result::Result<(), String> {
    let trace = stabilize(sys);
    fail(trace.stabilization_degree().is_zero(), || {
        format!("stabilizes at {}", trace.stabilization_degree())
    })
}

fn check_reference(sys: &FiniteSystem) -> std::result::Result<(), String> {
    let n = sys.len();
    let trace = stabilize(sys);
    let mut partitions: Vec<Partition> = trace.entries().iter().map(|(_, p)| p.clone()).collect();
    partitions.push(Partition::identity(n));
    partitions.push(Partition::single(n));
    for x in 0..n {
        let reference = reference_intersection(sys, ReferenceMode::Base, x, REFERENCE_BOUND)
            .map_err(|e| e.to_string())?;
        fail(aorb0(sys, x) == reference, || {
            format!("aorb0({}) differs from the definition", sys.space().name(x))
        })?;
        for p in &partitions {
            let reference =
                reference_intersection(sys, ReferenceMode::Succ(p), x, REFERENCE_BOUND)
                    .map_err(|e| e.to_string())?;
            fail(aorb_succ(sys, p, x) == reference, || {
                format!(
                    "successor orbit of {} under {:?} differs from the definition",
                    sys.space().name(x),
                    named_classes(sys, p)
                )
            })?;
        }
    }
    Ok(())
}

/// Sub-claims of the stability check, in reporting order.
pub const STABILITY_PARTS: [&str; 6] = [
    "classes-absolutely-stable",
    "finest-is-oracle",
    "degree-monotone",
    "plain-contains-aorb0",
    "plain-contains-sorb0",
    "degree-contains-successor",
];

/// First failure of each stability sub-claim, indexed like `STABILITY_PARTS`.
pub fn stability_parts(sys: &FiniteSystem) -> [Option<String>; 6] {
    let mut out: [Option<String>; 6] = Default::default();
    let mut note = |k: usize, msg: &dyn Fn() -> String| {
        if out[k].is_none() {
            out[k] = Some(msg());
        }
    };
    let n = sys.len();
    let trace = stabilize(sys);
    let oracle = oracle_partition(sys);
    for c in oracle.classes() {
        if !is_absolutely_stable(sys, c, &trace) {
            note(0, &|| format!("class {:?} not absolutely stable", sys.space().names_of(c)));
        }
    }
    match finest_abs_stable_partition(sys, &trace, PARTITION_SEARCH_BOUND) {
        Ok(finest) if finest == oracle => {}
        Ok(finest) => note(1, &|| {
            format!("finest absolutely stable partition {:?}", named_classes(sys, &finest))
        }),
        Err(e) => note(1, &|| e.to_string()),
    }
    let top = trace.stabilization_degree().as_nat().unwrap_or(0) + 1;
    let degrees: Vec<OrdinalCNF> = (0..=top).map(OrdinalCNF::nat).collect();
    for mask in 1..1u64 << n {
        let m = PointSet::from_mask(n, mask);
        let names = || sys.space().names_of(&m);
        let stable: Vec<bool> = degrees
            .iter()
            .map(|d| is_stable_degree(sys, &m, d, &trace))
            .collect();
        for k in 1..stable.len() {
            if stable[k] && !stable[k - 1] {
                note(2, &|| format!("{:?} stable at degree {k} but not {}", names(), k - 1));
            }
        }
        if is_lyapunov_stable(sys, &m) {
            let p0 = trace.partition_at(&degrees[0]);
            for x in m.iter() {
                let name = sys.space().name(x);
                if !aorb0(sys, x).is_subset(&m) {
                    note(3, &|| format!("plain stable {:?} misses aorb0({name})", names()));
                }
                if !p0.class_of(x).is_subset(&m) {
                    note(4, &|| format!("plain stable {:?} misses sorb0({name})", names()));
                }
            }
        }
        for (k, d) in degrees.iter().enumerate() {
            if !stable[k] {
                continue;
            }
            let p = trace.partition_at(d);
            let next = trace.partition_at(&d.successor());
            for x in m.iter() {
                if !(aorb_succ(sys, p, x).is_subset(&m) && next.class_of(x).is_subset(&m)) {
                    note(5, &|| {
                        format!("{:?} stable at degree {d} misses orbits of {}", names(), sys.space().name(x))
                    });
                }
            }
        }
    }
    out
}

fn check_stability(sys: &FiniteSystem) -> std::result::Result<(), String> {
    match stability_parts(sys).into_iter().flatten().next() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn check_ergodic(sys: &FiniteSystem) -> std::result::Result<(), String> {
    let trace = stabilize(sys);
    let ergodic = crate::decomposition::is_topologically_ergodic(sys);
    let one_class = oracle_partition(sys).is_single();
    let finest = finest_abs_stable_partition(sys, &trace, PARTITION_SEARCH_BOUND)
        .map_err(|e| e.to_string())?;
    fail(ergodic == one_class && one_class == finest.is_single(), || {
        format!(
            "ergodic={ergodic}, one oracle class={one_class}, trivial finest={}",
            finest.is_single()
        )
    })
}

fn check_prolongation(sys: &FiniteSystem) -> std::result::Result<(), String> {
    for x in 0..sys.len() {
        let d1 = prolongation_d1(sys, x);
        fail(d1 == aorb0(sys, x), || format!("D1({}) != aorb0", sys.space().name(x)))?;
        fail(prolongation_d2(sys, x) == d1, || format!("D2({}) != D1", sys.space().name(x)))?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub system: SystemFile,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub check: Check,
    pub pass: usize,
    pub fail: usize,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeCount {
    pub points: usize,
    pub topologies: usize,
    pub systems: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub system: SystemFile,
    pub classes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub points: usize,
    pub up_to_iso: bool,
    pub sizes: Vec<SizeCount>,
    pub topologies: usize,
    pub systems: usize,
    pub checks: Vec<CheckSummary>,
    pub degree_histogram: BTreeMap<OrdinalCNF, usize>,
    pub ergodic: usize,
    pub finer_plain_stable_witnesses: Vec<Witness>,
}

impl CensusReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.fail == 0)
    }
}

struct Outcome {
    failures: Vec<(Check, String)>,
    degree: OrdinalCNF,
    ergodic: bool,
    witness: Option<Partition>,
}

fn evaluate(sys: &FiniteSystem, checks: &[Check]) -> Outcome {
    let trace = stabilize(sys);
    let witness = if checks.contains(&Check::Stability) {
        finer_plain_stable_witness(sys, PARTITION_SEARCH_BOUND).ok().flatten()
    } else {
        None
    };
    Outcome {
        failures: checks
            .iter()
            .filter_map(|&c| c.run(sys).err().map(|e| (c, e)))
            .collect(),
        degree: trace.stabilization_degree().clone(),
        ergodic: trace.stationary().is_single(),
        witness,
    }
}

/// Runs the checks over every system with 1 to `n` points, smallest first,
/// so the first counterexample of each check is of minimal size.
pub fn run_census(n: usize, up_to_iso: bool, checks: &[Check]) -> Result<CensusReport> {
    let mut sizes = Vec::new();
    let mut systems = Vec::new();
    for k in 1..=n {
        let topos = topologies(k, up_to_iso)?;
        let before = systems.len();
        for rel in &topos {
            systems.extend(monotone_maps(rel).into_iter().map(|f| system(rel, f)));
        }
        sizes.push(SizeCount {
            points: k,
            topologies: topos.len(),
            systems: systems.len() - before,
        });
    }
    let outcomes: Vec<Outcome> = systems.par_iter().map(|s| evaluate(s, checks)).collect();
    Ok(summarize(n, up_to_iso, sizes, &systems, &outcomes, checks))
}

/// Runs the checks over an explicit list of systems.
pub fn run_checks(systems: &[FiniteSystem], checks: &[Check]) -> CensusReport {
    let outcomes: Vec<Outcome> = systems.par_iter().map(|s| evaluate(s, checks)).collect();
    let n = systems.iter().map(FiniteSystem::len).max().unwrap_or(0);
    summarize(n, false, Vec::new(), systems, &outcomes, checks)
}

fn summarize(
    n: usize,
    up_to_iso: bool,
    sizes: Vec<SizeCount>,
    systems: &[FiniteSystem],
    outcomes: &[Outcome],
    checks: &[Check],
) -> CensusReport {
    let mut summaries: Vec<CheckSummary> = checks
        .iter()
        .map(|&c| CheckSummary {
            check: c,
            pass: systems.len(),
            fail: 0,
            counterexamples: Vec::new(),
        })
        .collect();
    let mut degree_histogram = BTreeMap::new();
    let mut ergodic = 0;
    let mut witnesses = Vec::new();
    for (sys, o) in systems.iter().zip(outcomes) {
        *degree_histogram.entry(o.degree.clone()).or_insert(0) += 1;
        ergodic += usize::from(o.ergodic);
        for (c, detail) in &o.failures {
            let s = summaries.iter_mut().find(|s| s.check == *c).expect("selected");
            s.pass -= 1;
            s.fail += 1;
            if s.counterexamples.len() < KEEP {
                s.counterexamples.push(Counterexample {
                    system: SystemFile::from_system(sys),
                    detail: detail.clone(),
                });
            }
        }
        if let Some(p) = &o.witness {
            if witnesses.len() < KEEP {
                witnesses.push(Witness {
                    system: SystemFile::from_system(sys),
                    classes: named_classes(sys, p),
                });
            }
        }
    }
    CensusReport {
        points: n,
        up_to_iso,
        topologies: sizes.iter().map(|s| s.topologies).sum(),
        systems: systems.len(),
        sizes,
        checks: summaries,
        degree_histogram,
        ergodic,
        finer_plain_stable_witnesses: witnesses,
    }
}
