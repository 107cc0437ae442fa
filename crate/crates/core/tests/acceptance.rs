//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use fixfactor::census::{enumerate_systems, run_checks, sample_systems, stability_parts, Check, STABILITY_PARTS};
use fixfactor::cli::{window_summary, WINDOWS};
use fixfactor::decomposition::{
    aorb0, is_topologically_ergodic, oracle_partition, prolongation_d1, prolongation_d2, quotient,
    stabilize,
};
use fixfactor::ladder::{build_ladder, ladder_trace, parse_term, Point, Pos, RegionSet};
use fixfactor::stability::{finest_abs_stable_partition, PARTITION_SEARCH_BOUND};
use fixfactor::{FiniteSystem, OrdinalCNF, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CENSUS_POINTS: usize = 4;
const FIVE_POINT_SAMPLE: usize = 500;
const RAMP_DEGREES: u64 = 5;
const RANDOM_SUBSETS: usize = 10_000;
const SEED: u64 = 0x5eed_0001;
const LADDER_TERMS: [&str; 5] = ["strand", "cat(strand)", "ramp", "cat(ramp)", "cat(cat(strand))"];
/// Wall-clock budgets; `None` where no bound is set.
const BUDGETS: [Option<u64>; 10] = [Some(60), None, None, None, Some(10), None, None, None, None, Some(30)];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn count_failures(census: &[FiniteSystem], f: impl Fn(&FiniteSystem) -> bool) -> (usize, Option<String>) {
    let mut fails = 0;
    let mut first = None;
    for sys in census {
        if !f(sys) {
            fails += 1;
            first.get_or_insert_with(|| fixfactor::io::system_to_json(sys).replace(['\n', ' '], ""));
        }
    }
    (fails, first)
}

fn tally(name: &str, total: usize, (fails, first): (usize, Option<String>)) -> (bool, String) {
    let mut s = format!("{name} {}/{total}", total - fails);
    if let Some(sys) = first {
        s.push_str(&format!(" first counterexample {sys}"));
    }
    (fails == 0, s)
}

fn oracle_equivalence(census: &[FiniteSystem]) -> Verdict {
    let (ok, s) = tally(
        "stationary == level sets == oracle",
        census.len(),
        count_failures(census, |sys| {
            let st = stabilize(sys);
            let direct = common::level_sets(sys);
            *st.stationary() == direct && oracle_partition(sys) == direct && st.is_stationary(sys)
        }),
    );
    verdict(ok, s)
}

fn hausdorff(census: &[FiniteSystem]) -> Verdict {
    let (ok, s) = tally(
        "discrete quotient with level-set classes",
        census.len(),
        count_failures(census, |sys| {
            let st = stabilize(sys);
            quotient(sys, st.stationary()).is_ok_and(|q| q.quotient.space().is_discrete())
                && *st.stationary() == common::level_sets(sys)
        }),
    );
    verdict(ok, s)
}

fn degree_zero(census: &[FiniteSystem]) -> Verdict {
    let (ok, s) = tally(
        "stabilize at degree 0",
        census.len(),
        count_failures(census, |sys| stabilize(sys).stabilization_degree().is_zero()),
    );
    verdict(ok, s)
}

fn reference(census: &[FiniteSystem]) -> Verdict {
    let small = run_checks(census, &[Check::Reference]);
    let five = run_checks(&sample_systems(5, FIVE_POINT_SAMPLE).expect("5 points"), &[Check::Reference]);
    let (a, b) = (&small.checks[0], &five.checks[0]);
    verdict(
        a.fail == 0 && b.fail == 0,
        format!(
            "census {}/{}, five-point sample {}/{}",
            a.pass,
            small.systems,
            b.pass,
            five.systems
        ),
    )
}

fn pt(s: &str) -> Point {
    s.parse().expect("point")
}

fn ladder_reproductions() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    let mut note = |name: &str, pass: bool| {
        ok &= pass;
        parts.push(format!("{name} {}", if pass { "ok" } else { "FAIL" }));
    };
    let trace_of = |t: &str| {
        let space = build_ladder(&parse_term(t).expect("term"));
        let trace = ladder_trace(&space, &fixfactor::ladder::default_degree_cap()).expect("trace");
        (space, trace)
    };
    let deg = OrdinalCNF::nat;

    let (_, strand) = trace_of("strand");
    note("strand one class at 0", strand.partition_at(&deg(0)).is_single());

    let (space, cs) = trace_of("cat(strand)");
    let p0 = cs.partition_at(&deg(0));
    note(
        "cat(strand) {finite part, top} at 0",
        p0.class_count() == Some(2)
            && p0.class_of(&pt("0")) == RegionSet::half_open(pt("0"), pt("w"))
            && p0.class_of(&space.top_point()) == RegionSet::point(space.top_point()),
    );
    note("cat(strand) one class at 1", cs.partition_at(&deg(1)).is_single());

    let (_, ramp) = trace_of("ramp");
    for n in 0..=RAMP_DEGREES {
        let p = ramp.partition_at(&deg(n));
        let block = RegionSet::half_open(pt("0"), Point::Fixed(Pos::omega_pow(deg(n + 1))));
        note(
            &format!("ramp blocks 0..{n} merged, >=2 classes at {n}"),
            p.class_of(&pt("0")) == block && p.class_count() != Some(1),
        );
    }

    let (_, cr) = trace_of("cat(ramp)");
    note(
        "cat(ramp) >=2 classes at w",
        cr.partition_at(&OrdinalCNF::omega()).class_count() != Some(1),
    );
    verdict(ok, parts.join("; "))
}

fn window_audits() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for t in LADDER_TERMS {
        match window_summary(t, &WINDOWS, None) {
            Ok(s) => {
                let violations: usize = s.windows.iter().map(|w| w.report.violations.len()).sum();
                let checked: usize = s.windows.iter().map(|w| w.report.checked).sum();
                ok &= violations == 0 && s.answers_stable;
                parts.push(format!(
                    "{t}: {checked} checks, {violations} violations, stable across windows {}",
                    s.answers_stable
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{t}: {e}"));
            }
        }
    }
    verdict(ok, parts.join("; "))
}

fn stability(census: &[FiniteSystem]) -> Verdict {
    let mut fails = [0usize; 6];
    let mut discrete_fails = [0usize; 6];
    let mut first: [Option<String>; 6] = Default::default();
    for sys in census {
        for (k, f) in stability_parts(sys).into_iter().enumerate() {
            if let Some(detail) = f {
                fails[k] += 1;
                discrete_fails[k] += usize::from(sys.space().is_discrete());
                first[k].get_or_insert_with(|| {
                    format!("{detail} in {}", fixfactor::io::system_to_json(sys).replace(['\n', ' '], ""))
                });
            }
        }
    }
    let parts: Vec<String> = STABILITY_PARTS
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let mut s = format!("{name} {}/{}", census.len() - fails[k], census.len());
            if let Some(f) = &first[k] {
                s.push_str(&format!(", failures on discrete spaces {} (first: {f})", discrete_fails[k]));
            }
            s
        })
        .collect();
    verdict(fails.iter().all(|&f| f == 0), parts.join("; "))
}

fn ergodicity(census: &[FiniteSystem]) -> Verdict {
    let (ok, s) = tally(
        "ergodic <=> one level set <=> trivial finest stable partition",
        census.len(),
        count_failures(census, |sys| {
            let one = common::level_sets(sys).is_single();
            let finest = finest_abs_stable_partition(sys, &stabilize(sys), PARTITION_SEARCH_BOUND)
                .expect("within bound");
            is_topologically_ergodic(sys) == one && finest.is_single() == one
        }),
    );
    verdict(ok, s)
}

fn prolongations(census: &[FiniteSystem]) -> Verdict {
    let mut fails = [0usize; 3];
    let mut discrete_fails = 0;
    let mut first = None;
    for sys in census {
        let d1: Vec<PointSet> = (0..sys.len()).map(|x| common::d1(sys, x)).collect();
        let d2 = common::d2_all(sys);
        let matches = (0..sys.len())
            .all(|x| prolongation_d1(sys, x) == d1[x] && prolongation_d2(sys, x) == d2[x]);
        let first_ok = (0..sys.len()).all(|x| d1[x] == aorb0(sys, x));
        let second_ok = d1 == d2;
        for (k, ok) in [matches, first_ok, second_ok].into_iter().enumerate() {
            fails[k] += usize::from(!ok);
        }
        if !second_ok {
            discrete_fails += usize::from(sys.space().is_discrete());
            first.get_or_insert_with(|| fixfactor::io::system_to_json(sys).replace(['\n', ' '], ""));
        }
    }
    let total = census.len();
    let mut detail = format!(
        "D1, D2 match their definitions {}/{total}; D1 == aorb0 {}/{total}; D2 == D1 {}/{total}, \
         failures on discrete spaces {discrete_fails}",
        total - fails[0],
        total - fails[1],
        total - fails[2]
    );
    if let Some(f) = first {
        detail.push_str(&format!(" (first: {f})"));
    }
    verdict(fails.iter().all(|&f| f == 0), detail)
}

fn properties(census: &[FiniteSystem]) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut fails = 0;
    let mut first = None;
    for _ in 0..RANDOM_SUBSETS {
        let sys = &census[rng.random_range(0..census.len())];
        let n = sys.len();
        let s = PointSet::from_mask(n, rng.random_range(0..1u64 << n));
        let t = PointSet::from_mask(n, rng.random_range(0..1u64 << n));
        if let Err(e) = common::per_subsets(sys, &s, &t) {
            fails += 1;
            first.get_or_insert(e);
        }
    }
    let (ok_sys, s_sys) = tally(
        "trace monotone, level-set refinement, quotient neighbourhoods",
        census.len(),
        count_failures(census, |sys| common::per_system(sys).is_ok()),
    );
    let mut s = format!("Kuratowski and saturation on {}/{RANDOM_SUBSETS} random subsets", RANDOM_SUBSETS - fails);
    if let Some(e) = first {
        s.push_str(&format!(" (first: {e})"));
    }
    verdict(fails == 0 && ok_sys, format!("{s}; {s_sys}"))
}

fn main() {
    let census: Vec<FiniteSystem> = (1..=CENSUS_POINTS)
        .flat_map(|n| enumerate_systems(n, false).expect("census size"))
        .collect();
    println!("acceptance: census of {} systems on 1..={CENSUS_POINTS} points", census.len());
    let criteria: [(&str, &dyn Fn() -> Verdict); 10] = [
        ("oracle equivalence", &|| oracle_equivalence(&census)),
        ("Hausdorff quotient", &|| hausdorff(&census)),
        ("degree-0 collapse", &|| degree_zero(&census)),
        ("definition-direct agreement", &|| reference(&census)),
        ("ladder reproductions", &ladder_reproductions),
        ("window audits", &window_audits),
        ("stability theorems", &|| stability(&census)),
        ("ergodicity equivalences", &|| ergodicity(&census)),
        ("prolongation identities", &|| prolongations(&census)),
        ("property suites", &|| properties(&census)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut v = run();
        let took = start.elapsed();
        if let Some(b) = BUDGETS[k] {
            if took > Duration::from_secs(b) {
                v.pass = false;
                v.detail.push_str(&format!("; over the {b} s budget"));
            }
        }
        failed += usize::from(!v.pass);
        println!(
            "criterion {:>2} {}: {} [{:.2} s] {}",
            k + 1,
            name,
            if v.pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
