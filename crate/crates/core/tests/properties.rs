mod common;

use std::sync::OnceLock;

use fixfactor::census::{monotone_maps, run_census, topologies, Check, Preorder};
use fixfactor::decomposition::stabilize;
use fixfactor::io::{parse_system, system_to_json};
use fixfactor::ladder::{build_ladder, default_degree_cap, ladder_trace, parse_term, Point, Pos};
use fixfactor::stability::is_stable_degree;
use fixfactor::{FiniteSpace, FiniteSystem, OrdinalCNF, PointSet, SelfMap};
use proptest::prelude::*;

fn preorders(n: usize) -> &'static [Preorder] {
    static CACHE: OnceLock<Vec<Vec<Preorder>>> = OnceLock::new();
    &CACHE.get_or_init(|| (0..=5).map(|k| topologies(k, false).unwrap()).collect())[n]
}

fn space_of(rel: &[u64]) -> FiniteSpace {
    let n = rel.len();
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| rel[x] >> y & 1 == 1).map(move |y| (x, y)))
        .collect();
    FiniteSpace::from_indexed(names, &pairs).unwrap()
}

prop_compose! {
    fn system()(n in 1usize..=5, t in any::<prop::sample::Index>(), f in any::<prop::sample::Index>()) -> FiniteSystem {
        let rel = t.get(preorders(n));
        let maps = monotone_maps(rel);
        FiniteSystem::new(space_of(rel), f.get(&maps).clone()).unwrap()
    }
}

prop_compose! {
    fn with_sets()(sys in system(), a in any::<u64>(), b in any::<u64>()) -> (FiniteSystem, PointSet, PointSet) {
        let n = sys.len();
        let mask = (1u64 << n) - 1;
        (sys, PointSet::from_mask(n, a & mask), PointSet::from_mask(n, b & mask))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn kuratowski_and_saturation((sys, s, t) in with_sets()) {
        prop_assert_eq!(common::per_subsets(&sys, &s, &t), Ok(()));
    }

    #[test]
    fn trace_laws(sys in system()) {
        prop_assert_eq!(common::per_system(&sys), Ok(()));
    }

    #[test]
    fn stationary_is_level_sets(sys in system()) {
        let trace = stabilize(&sys);
        prop_assert_eq!(trace.stationary(), &common::level_sets(&sys));
        prop_assert!(trace.stabilization_degree().is_zero());
    }

    #[test]
    fn stability_monotone_in_degree((sys, m, _) in with_sets()) {
        let trace = stabilize(&sys);
        let stable: Vec<bool> = (0..3).map(|d| is_stable_degree(&sys, &m, &OrdinalCNF::nat(d), &trace)).collect();
        prop_assert!(stable.windows(2).all(|w| !w[1] || w[0]));
    }

    #[test]
    fn continuity_is_monotonicity(n in 1usize..=4, t in any::<prop::sample::Index>(), f in prop::collection::vec(0usize..4, 4)) {
        let rel = t.get(preorders(n));
        let space = space_of(rel);
        let f: Vec<usize> = f[..n].iter().map(|&v| v % n).collect();
        let up = |s: u64| (0..n).all(|x| s >> x & 1 == 0 || rel[x] & !s == 0);
        let preimages_open = (0..1u64 << n).filter(|&s| up(s)).all(|s| {
            up((0..n).filter(|&x| s >> f[x] & 1 == 1).fold(0, |a, x| a | 1 << x))
        });
        prop_assert_eq!(SelfMap::validate(&space, f).is_ok(), preimages_open);
    }

    #[test]
    fn json_roundtrip(sys in system()) {
        prop_assert_eq!(parse_system(&system_to_json(&sys)).unwrap(), sys);
    }

    #[test]
    fn ladder_classes_contain_their_points(k in 0u64..40, c in 1u64..5, j in -6i64..6) {
        let space = build_ladder(&parse_term("cat(ramp)").unwrap());
        let trace = ladder_trace(&space, &default_degree_cap()).unwrap();
        let a = Pos::from_terms(vec![(OrdinalCNF::nat(k % 7), fixfactor::ladder::Coef::Nat(c))]).unwrap();
        for x in [Point::Fixed(a.clone()), Point::Strand(a, j)] {
            for (_, p) in trace.entries() {
                prop_assert!(p.class_of(&x).contains(&x));
            }
        }
    }
}

#[test]
fn symbolic_traces_coarsen() {
    for t in ["strand", "cat(strand)", "ramp", "cat(ramp)", "cat(cat(ramp))"] {
        let space = build_ladder(&parse_term(t).unwrap());
        let trace = ladder_trace(&space, &default_degree_cap()).unwrap();
        for w in trace.entries().windows(2) {
            assert!(w[0].1.refines(&w[1].1), "{t}: {} to {}", w[0].0, w[1].0);
        }
    }
}

#[test]
fn census_is_deterministic_across_thread_counts() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_census(3, false, &Check::ALL).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
    let iso = run_census(4, true, &[Check::Oracle]).unwrap();
    assert_eq!(iso.topologies, 1 + 3 + 9 + 33);
}
