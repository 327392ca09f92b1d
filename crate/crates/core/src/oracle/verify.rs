//! Seeded end-to-end check of every construction against the oracle.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functor::Functor;
use crate::groupoid::hom_sets_are_torsors;
use crate::io::{Document, FibrationDocument, FunctorDocument, GroupoidDocument, ProblemDocument};
use crate::oracle::enumerate::{enumerate_functors, enumerate_functors_naive, SearchBudget};
use crate::oracle::fillers::{decide_llp, decide_llp_direct, filler_search_space, find_fillers, lifts_over, lifts_search_space};
use crate::oracle::generate::{fibration_into, random_arrow, FibrationKind, SizeBounds};
use crate::path::{path_object, stability_iso};
use crate::standard::{discrete, terminal};
use crate::tribe::{product, NormalClovenFibration};
use crate::wfs::{factorize, solve_lifting, transport, LiftingProblem};

pub const DEFAULT_SEED: u64 = 42;

/// Random arrows `f: X → Y` drawn per run.
pub const INSTANCES: usize = 8;

// Oracle searches above this many candidates are skipped, not attempted.
const SEARCH_SPACE_LIMIT: f64 = 1e6;
const NAIVE_LIMIT: u64 = 200_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawTally {
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterexample {
    pub law: String,
    pub instance: usize,
    pub message: String,
    pub documents: Vec<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub tool_version: String,
    pub seed: u64,
    pub bounds: SizeBounds,
    pub instances: usize,
    pub laws: BTreeMap<String, LawTally>,
    pub counterexamples: Vec<Counterexample>,
    pub passed: bool,
}

enum Outcome {
    Pass,
    Fail(String),
    Skip,
}

impl From<bool> for Outcome {
    fn from(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail("law does not hold".into())
        }
    }
}

fn outcome(r: Result<bool>) -> Outcome {
    match r {
        Ok(ok) => ok.into(),
        Err(Error::BudgetExceeded(_)) => Outcome::Skip,
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

struct Recorder {
    instance: usize,
    laws: BTreeMap<String, LawTally>,
    counterexamples: Vec<Counterexample>,
}

impl Recorder {
    fn record(&mut self, law: &str, result: Outcome, documents: impl FnOnce() -> Vec<Document>) {
        let tally = self.laws.entry(law.to_string()).or_default();
        match result {
            Outcome::Pass => tally.passed += 1,
            Outcome::Skip => tally.skipped += 1,
            Outcome::Fail(message) => {
                tally.failed += 1;
                let documents = documents()
                    .into_iter()
                    .map(|mut d| {
                        d.canonicalize();
                        serde_json::to_value(&d).expect("documents serialize")
                    })
                    .collect();
                self.counterexamples.push(Counterexample {
                    law: law.to_string(),
                    instance: self.instance,
                    message,
                    documents,
                });
            }
        }
    }
}

fn functor_doc(f: &Functor) -> Document {
    Document::Functor(FunctorDocument::from(f))
}

fn fibration_doc(p: &NormalClovenFibration) -> Document {
    Document::Fibration(FibrationDocument::from(p))
}

/// Runs every law on `INSTANCES` seeded random arrows within `bounds`.
pub fn verify_wfs(seed: u64, bounds: SizeBounds, budget: SearchBudget) -> Result<VerificationReport> {
    let cost = (bounds.max_arrows as u64)
        .saturating_pow(bounds.max_objects as u32)
        .saturating_mul(bounds.max_objects as u64);
    if cost > budget.max_candidates {
        return Err(Error::BudgetExceeded(format!(
            "bounds allow up to {cost} candidate functors, budget is {}",
            budget.max_candidates
        )));
    }
    if bounds.max_objects == 0 || bounds.max_arrows == 0 {
        return Err(Error::PreconditionViolated("size bounds must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rec = Recorder { instance: 0, laws: BTreeMap::new(), counterexamples: Vec::new() };
    for instance in 0..INSTANCES {
        rec.instance = instance;
        check_instance(&mut rng, bounds, budget, &mut rec);
    }
    let passed = rec.laws.values().all(|t| t.failed == 0);
    Ok(VerificationReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        bounds,
        instances: INSTANCES,
        laws: rec.laws,
        counterexamples: rec.counterexamples,
        passed,
    })
}

fn check_instance(rng: &mut ChaCha8Rng, bounds: SizeBounds, budget: SearchBudget, rec: &mut Recorder) {
    let f = random_arrow(rng, bounds);
    let (x, y) = (f.dom().clone(), f.cod().clone());

    for g in [&x, &y] {
        let ok = g.check_laws().is_empty() && hom_sets_are_torsors(g);
        rec.record("groupoid-laws", ok.into(), || vec![Document::Groupoid(GroupoidDocument::from(g.as_ref()))]);
    }
    rec.record("functor-laws", f.validate().is_ok().into(), || vec![functor_doc(&f)]);

    let naive_budget = SearchBudget { max_candidates: NAIVE_LIMIT, ..budget };
    let enumeration = (|| {
        let fast = enumerate_functors(&x, &y, budget)?;
        let slow = enumerate_functors_naive(&x, &y, naive_budget)?;
        Ok(fast == slow && fast.contains(&f))
    })();
    rec.record("enumeration", outcome(enumeration), || vec![functor_doc(&f)]);

    let pt = terminal();
    let out_of_y = NormalClovenFibration::terminal(&y, &pt);
    let kind = *FibrationKind::ALL.choose(rng).expect("non-empty");
    let p = fibration_into(rng, &y, kind, &out_of_y);
    rec.record("fibration-laws", (p.validate().is_ok() && p.functor().validate().is_ok()).into(), || {
        vec![fibration_doc(&p)]
    });

    check_path_and_stability(&f, &p, rec);
    check_transport(rng, &p, budget, rec);
    check_factorization(rng, &f, budget, rec);
}

fn check_path_and_stability(f: &Functor, p: &NormalClovenFibration, rec: &mut Recorder) {
    let path = match path_object(p) {
        Ok(path) => path,
        Err(e) => {
            rec.record("path-object", Outcome::Fail(e.to_string()), || vec![fibration_doc(p)]);
            return;
        }
    };
    let e_gpd = p.total();
    let vertical = e_gpd.arrows().filter(|&a| p.base().is_identity(p.functor().arr(a))).count();
    let objects_ok = path.groupoid().object_count() == vertical;
    let unit_ok = path.unit().then_unchecked(path.boundary().functor()) == path.diagonal();
    let valid = path.boundary().validate().is_ok() && path.source().validate().is_ok();
    rec.record("path-object", (objects_ok && unit_ok && valid).into(), || vec![fibration_doc(p)]);

    let stability = (|| {
        let stab = stability_iso(&path, f)?;
        Ok(stab.iso.is_bijective() && stab.diagram_commutes(&path)?)
    })();
    rec.record("stability", outcome(stability), || vec![fibration_doc(p), functor_doc(f)]);
}

// Transport along a fibration q over the total space of p.
fn check_transport(rng: &mut ChaCha8Rng, p: &NormalClovenFibration, budget: SearchBudget, rec: &mut Recorder) {
    let Ok(path) = path_object(p) else { return };
    let kind = *[FibrationKind::Identity, FibrationKind::ProductDiscrete, FibrationKind::ProductZ2]
        .choose(rng)
        .expect("non-empty");
    let q = fibration_into(rng, p.total(), kind, p);
    let e = Functor::identity(q.total());

    let constant = (|| {
        let u = q.functor().then_unchecked(path.unit());
        Ok(transport(&path, &q, &e, &u)? == e)
    })();
    rec.record("transport-identity", outcome(constant), || vec![fibration_doc(p), fibration_doc(&q)]);

    if lifts_search_space(q.functor(), path.source()) > SEARCH_SPACE_LIMIT {
        rec.record("transport-endpoint", Outcome::Skip, Vec::new);
        rec.record("transport-restriction", Outcome::Skip, Vec::new);
        return;
    }
    let endpoint = (|| -> Result<(bool, bool)> {
        let paths = lifts_over(q.functor(), path.source(), budget)?;
        let Some(u) = paths.choose(rng) else { return Ok((false, false)) };
        let moved = transport(&path, &q, &e, u)?;
        let endpoint = moved.then_unchecked(q.functor()) == u.then_unchecked(path.target());
        // Wherever u is constant at r_p, nothing moves. Checking arrow by
        // arrow covers every g with u∘g = r_p∘q∘e∘g.
        let constant = e.then_unchecked(q.functor()).then_unchecked(path.unit());
        let restriction = q
            .total()
            .arrows()
            .filter(|&a| u.arr(a) == constant.arr(a))
            .all(|a| moved.arr(a) == e.arr(a));
        Ok((endpoint, restriction))
    })();
    let (endpoint, restriction) = match endpoint {
        Ok((a, b)) => (Ok(a), Ok(b)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    rec.record("transport-endpoint", outcome(endpoint), || vec![fibration_doc(p), fibration_doc(&q)]);
    rec.record("transport-restriction", outcome(restriction), || vec![fibration_doc(p), fibration_doc(&q)]);
}

fn check_factorization(rng: &mut ChaCha8Rng, f: &Functor, budget: SearchBudget, rec: &mut Recorder) {
    let fact = match factorize(f) {
        Ok(fact) => fact,
        Err(e) => {
            rec.record("factorization", Outcome::Fail(e.to_string()), || vec![functor_doc(f)]);
            return;
        }
    };
    let ok = fact.is_exact() && fact.rho().validate().is_ok() && fact.lambda().validate().is_ok();
    rec.record("factorization", ok.into(), || vec![functor_doc(f)]);

    // λ against a fibration into Map(f), with a top found by the oracle.
    let kind = *[FibrationKind::Identity, FibrationKind::ProductDiscrete, FibrationKind::ProductZ2]
        .choose(rng)
        .expect("non-empty");
    let q = fibration_into(rng, fact.mid(), kind, fact.rho());
    let lambda = fact.lambda();
    if lifts_search_space(lambda, &q) > SEARCH_SPACE_LIMIT {
        rec.record("filler-membership", Outcome::Skip, Vec::new);
    } else {
        let membership = (|| -> Result<Option<(LiftingProblem, bool)>> {
            let tops = lifts_over(lambda, &q, budget)?;
            let Some(top) = tops.choose(rng) else { return Ok(None) };
            let prob = LiftingProblem::new(lambda.clone(), q.clone(), top.clone(), Functor::identity(fact.mid()))?
                .with_witness(fact.witness());
            if filler_search_space(&prob) > SEARCH_SPACE_LIMIT {
                return Err(Error::BudgetExceeded("filler search space".into()));
            }
            let solved = solve_lifting(&prob)?;
            let all = find_fillers(&prob, budget)?;
            let ok = prob.is_filler(&solved.j) && all.contains(&solved);
            Ok(Some((prob, ok)))
        })();
        match membership {
            Ok(Some((prob, ok))) => rec.record("filler-membership", ok.into(), || {
                vec![Document::Problem(ProblemDocument::from(&prob))]
            }),
            Ok(None) => rec.record("filler-membership", Outcome::Fail("no top map over λ".into()), || {
                vec![functor_doc(f), fibration_doc(&q)]
            }),
            Err(Error::BudgetExceeded(_)) => rec.record("filler-membership", Outcome::Skip, Vec::new),
            Err(e) => rec.record("filler-membership", Outcome::Fail(e.to_string()), || {
                vec![functor_doc(f), fibration_doc(&q)]
            }),
        }
    }

    // λ lifts against every square into a small fibration.
    let small = product(f.cod(), &discrete(2), &terminal()).proj0().clone();
    let llp = decide_llp(lambda, &small, budget);
    rec.record("llp", outcome(llp.as_ref().map(|v| v.holds).map_err(Clone::clone)), || {
        vec![functor_doc(lambda), fibration_doc(&small)]
    });
    // The reduction to identity bottoms never changes the verdict.
    let agree = llp.and_then(|v| Ok(decide_llp_direct(lambda, &small, budget)?.holds == v.holds));
    rec.record("llp-reduction", outcome(agree), || vec![functor_doc(lambda), fibration_doc(&small)]);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_deterministic_and_passes() {
        let bounds = SizeBounds { max_objects: 2, max_arrows: 4 };
        let a = verify_wfs(DEFAULT_SEED, bounds, SearchBudget::default()).unwrap();
        let b = verify_wfs(DEFAULT_SEED, bounds, SearchBudget::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.passed, "{:#?}", a.counterexamples);
        assert!(a.laws.values().map(|t| t.passed).sum::<u64>() > 0);
    }

    #[test]
    fn oversized_bounds_exceed_the_budget() {
        let bounds = SizeBounds { max_objects: 8, max_arrows: 64 };
        assert!(matches!(
            verify_wfs(DEFAULT_SEED, bounds, SearchBudget::default()),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
