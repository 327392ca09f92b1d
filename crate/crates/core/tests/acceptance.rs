//! Acceptance gate. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use gwfs_core::io::{
    parse_document, serialize_document, serialize_fibration, serialize_functor, serialize_groupoid,
    serialize_problem, Document,
};
use gwfs_core::oracle::generate::{fibration_into, random_arrow, FibrationKind};
use gwfs_core::oracle::{
    decide_llp, enumerate_functors, filler_search_space, find_fillers, lifts_over, lifts_search_space, verify_wfs,
    SearchBudget, SizeBounds, DEFAULT_SEED,
};
use gwfs_core::standard::{discrete, interval, terminal, z2};
use gwfs_core::{
    factorize, functor_equal, path_object, solve_lifting, stability_iso, validate_fibration, Transport, Functor,
    Groupoid, LiftingProblem, NormalClovenFibration,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SUITE_SIZE: usize = 100;
const SUITE_SEED: u64 = 2024;
const FILLER_SPACE_LIMIT: f64 = 1e6;
// Largest path object built to generate a fibration for the lifting criterion.
const PATH_ARROW_LIMIT: usize = 2500;

struct Verdict {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict { ok: false, detail: detail.into() }
}

fn suite() -> Vec<Functor> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    (0..SUITE_SIZE).map(|_| random_arrow(&mut rng, SizeBounds::default())).collect()
}

// Fibrations into `b`, one of each kind. Path sources use `out_of_b`.
fn fibrations_into(seed: u64, b: &Arc<Groupoid>, out_of_b: &NormalClovenFibration) -> Vec<NormalClovenFibration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FibrationKind::ALL.iter().map(|&k| fibration_into(&mut rng, b, k, out_of_b)).collect()
}

fn terminal_fibration(g: &Arc<Groupoid>) -> NormalClovenFibration {
    NormalClovenFibration::terminal(g, &terminal())
}

fn compose(f: &Functor, g: &Functor) -> Functor {
    f.then(g).expect("composable")
}

/// Independent count of objects and arrows of the path object of `p`:
/// vertical arrows, and pairs of arrows out of their ends with equal image.
fn path_counts(p: &NormalClovenFibration) -> (usize, usize) {
    let e = p.total();
    let pf = p.functor();
    let vertical: Vec<_> = e.arrows().filter(|&a| p.base().is_identity(pf.arr(a))).collect();
    let mut arrows = 0;
    for &alpha in &vertical {
        for a in e.out_arrows(e.src(alpha)) {
            arrows += e.out_arrows(e.tgt(alpha)).filter(|&b| pf.arr(a) == pf.arr(b)).count();
        }
    }
    (vertical.len(), arrows)
}

fn path_object_counts() -> Verdict {
    let (z, i) = (z2(), interval());
    let mut notes = Vec::new();
    for (label, g, expected) in [("Z2", &z, (2, 8)), ("I", &i, (4, 16))] {
        let p = terminal_fibration(g);
        let path = path_object(&p).unwrap();
        let got = (path.groupoid().object_count(), path.groupoid().arrow_count());
        if got != expected || path_counts(&p) != expected {
            return fail(format!("Path({label} -> 1) has {got:?}, expected {expected:?}"));
        }
        notes.push(format!("{label}: {}/{}", got.0, got.1));
    }
    for (label, g) in [("Z2", z2()), ("I", interval()), ("2", discrete(2))] {
        let path = path_object(&NormalClovenFibration::identity(&g)).unwrap();
        let source = path.source().functor();
        if !source.is_bijective() || path_counts(&NormalClovenFibration::identity(&g)) != (g.object_count(), g.arrow_count()) {
            return fail(format!("Path(id_{label}) is not isomorphic to {label}"));
        }
    }
    notes.push("Path(id_E) = E for Z2, I, 2".into());
    pass(notes.join("; "))
}

fn factorization_axiom(suite: &[Functor]) -> Verdict {
    for (n, f) in suite.iter().enumerate() {
        let fact = match factorize(f) {
            Ok(fact) => fact,
            Err(e) => return fail(format!("instance {n}: {e}")),
        };
        let composite = compose(fact.lambda(), fact.rho().functor());
        if !functor_equal(&composite, f) {
            return fail(format!("instance {n}: rho . lambda != f"));
        }
        if validate_fibration(fact.rho()).is_err() {
            return fail(format!("instance {n}: rho is not a fibration"));
        }
    }
    pass(format!("{} / {} factorizations exact", suite.len(), suite.len()))
}

// Fibrations into Map(f), one of each kind. The path-source fibration comes
// from Path(pm0) or Path(ρ), whichever is smaller, if either is small enough.
fn fibrations_into_mapping(seed: u64, fact: &gwfs_core::Factorization) -> (Vec<NormalClovenFibration>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut skipped = 0;
    for kind in FibrationKind::ALL {
        if kind == FibrationKind::PathSource {
            let smaller = [fact.mapping().proj0(), fact.rho()]
                .into_iter()
                .map(|p| (path_counts(p).1, p))
                .min_by_key(|(arrows, _)| *arrows)
                .expect("two candidates");
            match smaller {
                (arrows, p) if arrows <= PATH_ARROW_LIMIT => out.push(path_object(p).unwrap().source().clone()),
                _ => skipped += 1,
            }
        } else {
            out.push(fibration_into(&mut rng, fact.mid(), kind, fact.rho()));
        }
    }
    (out, skipped)
}

fn lifting_soundness(suite: &[Functor]) -> Verdict {
    let budget = SearchBudget::new(10_000_000, Duration::from_secs(120)).unwrap();
    let (mut solved, mut skipped, mut fibrations, mut large) = (0usize, 0usize, 0usize, 0usize);
    for (n, f) in suite.iter().enumerate() {
        let fact = factorize(f).unwrap();
        let lambda = fact.lambda();
        let (qs, too_large) = fibrations_into_mapping(n as u64, &fact);
        large += too_large;
        for q in qs {
            fibrations += 1;
            if lifts_search_space(lambda, &q) > FILLER_SPACE_LIMIT {
                skipped += 1;
                continue;
            }
            let tops = match lifts_over(lambda, &q, budget) {
                Ok(tops) => tops,
                Err(e) => return fail(format!("instance {n}: enumerating tops: {e}")),
            };
            if tops.is_empty() {
                return fail(format!("instance {n}: no map over lambda"));
            }
            for top in tops {
                let prob = LiftingProblem::new(lambda.clone(), q.clone(), top, Functor::identity(fact.mid()))
                    .unwrap()
                    .with_witness(fact.witness());
                if filler_search_space(&prob) > FILLER_SPACE_LIMIT {
                    skipped += 1;
                    continue;
                }
                let filler = match solve_lifting(&prob) {
                    Ok(filler) => filler,
                    Err(e) => return fail(format!("instance {n}: {e}")),
                };
                if !prob.is_filler(&filler.j) {
                    return fail(format!("instance {n}: filler breaks a triangle"));
                }
                match find_fillers(&prob, budget) {
                    Ok(all) if all.contains(&filler) => solved += 1,
                    Ok(_) => return fail(format!("instance {n}: filler missing from the oracle list")),
                    Err(e) => return fail(format!("instance {n}: oracle: {e}")),
                }
            }
        }
    }
    pass(format!(
        "{solved} squares agree with the oracle over {fibrations} fibrations; {skipped} over the search limit, \
         {large} path sources over {PATH_ARROW_LIMIT} arrows"
    ))
}

fn stability(suite: &[Functor]) -> Verdict {
    let mut checked = 0;
    for (n, f) in suite.iter().enumerate() {
        let y = f.cod();
        for p in fibrations_into(n as u64, y, &terminal_fibration(y)) {
            let path = path_object(&p).unwrap();
            let stab = match stability_iso(&path, f) {
                Ok(stab) => stab,
                Err(e) => return fail(format!("instance {n}: {e}")),
            };
            if !stab.iso.is_bijective() {
                return fail(format!("instance {n}: comparison map is not a bijection"));
            }
            let unit = compose(&stab.unit_side(&path).unwrap(), &stab.iso);
            let boundary = compose(&stab.iso, stab.path.boundary().functor());
            if !functor_equal(&unit, stab.path.unit()) || !functor_equal(&boundary, &stab.boundary_side(&path).unwrap()) {
                return fail(format!("instance {n}: stability diagram does not commute"));
            }
            checked += 1;
        }
    }
    pass(format!("{checked} (p, f) pairs"))
}

fn transport_contracts(suite: &[Functor]) -> Verdict {
    let budget = SearchBudget::default();
    let probes = [terminal(), z2(), interval()];
    let (mut moves, mut squares, mut skipped) = (0usize, 0usize, 0usize);
    for (n, f) in suite.iter().enumerate() {
        let y = f.cod();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let out_of_y = terminal_fibration(y);
        for p in fibrations_into(n as u64, y, &out_of_y) {
            let path = path_object(&p).unwrap();
            for kind in [FibrationKind::Identity, FibrationKind::ProductDiscrete, FibrationKind::ProductZ2] {
                let q = fibration_into(&mut rng, p.total(), kind, &p);
                if lifts_search_space(q.functor(), path.source()) > FILLER_SPACE_LIMIT {
                    skipped += 1;
                    continue;
                }
                let e = Functor::identity(q.total());
                let constant = compose(&compose(&e, q.functor()), path.unit());
                let transporter = match Transport::new(&path, &q) {
                    Ok(t) => t,
                    Err(err) => return fail(format!("instance {n}: {err}")),
                };
                let mut probe_maps = Vec::new();
                for c in &probes {
                    probe_maps.extend(enumerate_functors(c, q.total(), budget).unwrap());
                }
                for u in lifts_over(q.functor(), path.source(), budget).unwrap() {
                    let moved = match transporter.apply(&e, &u) {
                        Ok(moved) => moved,
                        Err(err) => return fail(format!("instance {n}: {err}")),
                    };
                    if !functor_equal(&compose(&moved, q.functor()), &compose(&u, path.target())) {
                        return fail(format!("instance {n}: q . u_!e != target . u"));
                    }
                    moves += 1;
                    for g in &probe_maps {
                        if !functor_equal(&compose(g, &u), &compose(g, &constant)) {
                            continue;
                        }
                        if !functor_equal(&compose(g, &moved), &compose(g, &e)) {
                            return fail(format!("instance {n}: u_!e . g != e . g on a square with the unit"));
                        }
                        squares += 1;
                    }
                }
            }
        }
    }
    pass(format!("{moves} transports, {squares} squares through the unit, {skipped} over the search limit"))
}

fn negative_control() -> Verdict {
    let (two, pt) = (discrete(2), terminal());
    let inclusion = Functor::from_names(
        two.clone(),
        interval(),
        &[("0".into(), "0".into()), ("1".into(), "1".into())],
        &[("1_0".into(), "1_0".into()), ("1_1".into(), "1_1".into())],
    )
    .unwrap();
    let verdict = decide_llp(&inclusion, &terminal_fibration(&two), SearchBudget::default()).unwrap();
    if verdict.holds {
        return fail("inclusion 2 -> I reported as lifting against 2 -> 1");
    }
    let Some(cx) = verdict.counterexample else { return fail("no counterexample square") };
    if !find_fillers(&cx, SearchBudget::default()).unwrap().is_empty() {
        return fail("counterexample square has a filler");
    }
    if !functor_equal(&cx.top, &Functor::identity(&two)) || !functor_equal(&cx.bottom, &Functor::to_point(&interval(), &pt)) {
        return fail("unexpected counterexample square");
    }
    pass("false, with a filler-free square (top = id, bottom = I -> 1)")
}

fn round_trip(text: &str) -> bool {
    let again = serialize_document(&parse_document(text).unwrap());
    again == text
}

fn determinism(suite: &[Functor]) -> Verdict {
    let first = verify_wfs(DEFAULT_SEED, SizeBounds::default(), SearchBudget::default()).unwrap();
    let second = verify_wfs(DEFAULT_SEED, SizeBounds::default(), SearchBudget::default()).unwrap();
    let (a, b) = (serialize_document(&Document::Report(first.clone())), serialize_document(&Document::Report(second)));
    if a != b {
        return fail("reports differ between runs");
    }
    if !first.passed {
        return fail("default report has failures");
    }
    if !round_trip(&a) {
        return fail("report is not byte-stable");
    }
    let mut documents = 1;
    for f in suite.iter().take(20) {
        let fact = factorize(f).unwrap();
        let prob = LiftingProblem::new(
            fact.lambda().clone(),
            fact.rho().clone(),
            fact.lambda().clone(),
            fact.rho().functor().clone(),
        )
        .unwrap();
        for text in [
            serialize_groupoid(f.dom()),
            serialize_functor(f),
            serialize_fibration(fact.rho()),
            serialize_problem(&prob),
        ] {
            if !round_trip(&text) {
                return fail(format!("round trip changed bytes:\n{text}"));
            }
            documents += 1;
        }
    }
    pass(format!("identical reports; {documents} documents byte-stable"))
}

#[test]
fn acceptance() {
    let suite = suite();
    type Criterion<'a> = (&'a str, Option<Duration>, Box<dyn Fn() -> Verdict + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("1 path-object counts", Some(Duration::from_secs(1)), Box::new(path_object_counts)),
        ("2 factorization axiom", Some(Duration::from_secs(60)), Box::new(|| factorization_axiom(&suite))),
        ("3 lifting soundness", Some(Duration::from_secs(300)), Box::new(|| lifting_soundness(&suite))),
        ("4 stability", None, Box::new(|| stability(&suite))),
        ("5 transport contracts", None, Box::new(|| transport_contracts(&suite))),
        ("6 negative control", Some(Duration::from_secs(1)), Box::new(negative_control)),
        ("7 determinism and formats", None, Box::new(|| determinism(&suite))),
    ];
    let mut failed = Vec::new();
    for (name, limit, check) in &criteria {
        let start = Instant::now();
        let mut verdict = check();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > *limit {
                verdict = fail(format!("{} (took {elapsed:.2?}, limit {limit:.0?})", verdict.detail));
            }
        }
        let status = if verdict.ok { "PASS" } else { "FAIL" };
        println!("[{status}] {name}: {} ({elapsed:.2?})", verdict.detail);
        if !verdict.ok {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
