//! Exhaustive filler search and lifting-property decisions.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::Result;
use crate::functor::Functor;
use crate::groupoid::{Arr, Groupoid, Obj};
use crate::oracle::enumerate::{collect_functors, enumerate_functors, search_functors, search_space, Constraints, Meter, SearchBudget};
use crate::tribe::{pullback, NormalClovenFibration};
use crate::wfs::{Filler, LiftingProblem};

// Values forced on the image of `left` by `top`; None when two elements of
// the domain disagree.
struct Pins {
    objects: Vec<Option<Obj>>,
    arrows: Vec<Option<Arr>>,
}

fn pins(prob: &LiftingProblem) -> Option<Pins> {
    let (left, top) = (&prob.left, &prob.top);
    let x = left.cod();
    let mut objects = vec![None; x.object_count()];
    for a in left.dom().objects() {
        let slot = &mut objects[left.obj(a).index()];
        match *slot {
            Some(b) if b != top.obj(a) => return None,
            _ => *slot = Some(top.obj(a)),
        }
    }
    let mut arrows = vec![None; x.arrow_count()];
    for a in left.dom().arrows() {
        let slot = &mut arrows[left.arr(a).index()];
        match *slot {
            Some(b) if b != top.arr(a) => return None,
            _ => *slot = Some(top.arr(a)),
        }
    }
    Some(Pins { objects, arrows })
}

fn with_filler_constraints<T>(prob: &LiftingProblem, pins: &Pins, run: impl FnOnce(&Constraints) -> T) -> T {
    let (right, bottom) = (prob.right.functor(), &prob.bottom);
    let object = |x: Obj, b: Obj| right.obj(b) == bottom.obj(x) && pins.objects[x.index()].is_none_or(|p| p == b);
    let arrow = |x: Arr, b: Arr| right.arr(b) == bottom.arr(x) && pins.arrows[x.index()].is_none_or(|p| p == b);
    run(&Constraints { object: &object, arrow: &arrow })
}

/// Every diagonal filler of the square, in canonical order.
pub fn find_fillers(prob: &LiftingProblem, budget: SearchBudget) -> Result<Vec<Filler>> {
    let Some(pins) = pins(prob) else { return Ok(Vec::new()) };
    let (x, b) = (prob.left.cod(), prob.right.total());
    let fs = with_filler_constraints(prob, &pins, |c| collect_functors(x, b, c, budget))?;
    Ok(fs.into_iter().map(|j| Filler { j }).collect())
}

/// Some filler, if one exists.
pub fn first_filler(prob: &LiftingProblem, budget: SearchBudget) -> Result<Option<Filler>> {
    let mut meter = Meter::new(budget);
    first_filler_metered(prob, &mut meter)
}

fn first_filler_metered(prob: &LiftingProblem, meter: &mut Meter) -> Result<Option<Filler>> {
    let Some(pins) = pins(prob) else { return Ok(None) };
    let (x, b) = (prob.left.cod(), prob.right.total());
    let mut found = None;
    with_filler_constraints(prob, &pins, |c| {
        search_functors(x, b, c, meter, &mut |j| {
            found = Some(Filler { j });
            ControlFlow::Break(())
        })
    })?;
    Ok(found)
}

/// Candidate count of the filler search for this square.
pub fn filler_search_space(prob: &LiftingProblem) -> f64 {
    match pins(prob) {
        Some(pins) => with_filler_constraints(prob, &pins, |c| search_space(prob.left.cod(), prob.right.total(), c)),
        None => 0.0,
    }
}

/// Outcome of deciding `f ⧄ g`.
#[derive(Clone, Debug)]
pub struct LlpVerdict {
    pub holds: bool,
    /// A square without filler when the property fails.
    pub counterexample: Option<LiftingProblem>,
    /// Number of squares examined.
    pub squares: usize,
}

// Functors t: A → E with p ∘ t = f.
fn search_over(
    f: &Functor,
    p: &Functor,
    meter: &mut Meter,
    visit: &mut dyn FnMut(Functor) -> ControlFlow<()>,
) -> Result<()> {
    let object = |a: Obj, e: Obj| p.obj(e) == f.obj(a);
    let arrow = |a: Arr, e: Arr| p.arr(e) == f.arr(a);
    search_functors(f.dom(), p.dom(), &Constraints { object: &object, arrow: &arrow }, meter, visit)
}

/// Decides `f ⧄ g` by reducing every bottom `k` to identity-bottom squares
/// against the base change `k*g`.
pub fn decide_llp(f: &Functor, g: &NormalClovenFibration, budget: SearchBudget) -> Result<LlpVerdict> {
    let bottoms = enumerate_functors(f.cod(), g.base(), budget)?;
    let mut meter = Meter::new(budget);
    let mut squares = 0;
    for k in bottoms {
        let sq = pullback(&k, g)?;
        let id = Functor::identity(f.cod());
        let mut failure: Option<Result<LiftingProblem>> = None;
        let mut inner = Meter::new(budget);
        search_over(f, sq.proj0().functor(), &mut meter, &mut |t| {
            squares += 1;
            let reduced = LiftingProblem::new(f.clone(), sq.proj0().clone(), t.clone(), id.clone());
            let outcome = reduced.and_then(|r| first_filler_metered(&r, &mut inner));
            match outcome {
                Ok(Some(_)) => ControlFlow::Continue(()),
                Ok(None) => {
                    failure = Some(LiftingProblem::new(f.clone(), g.clone(), t.then_unchecked(sq.proj1()), k.clone()));
                    ControlFlow::Break(())
                }
                Err(e) => {
                    failure = Some(Err(e));
                    ControlFlow::Break(())
                }
            }
        })?;
        if let Some(outcome) = failure {
            return Ok(LlpVerdict { holds: false, counterexample: Some(outcome?), squares });
        }
    }
    Ok(LlpVerdict { holds: true, counterexample: None, squares })
}

/// `f ⧄ g`.
pub fn has_llp(f: &Functor, g: &NormalClovenFibration, budget: SearchBudget) -> Result<bool> {
    Ok(decide_llp(f, g, budget)?.holds)
}

/// Decides `f ⧄ g` on every commuting square directly, without reduction.
pub fn decide_llp_direct(f: &Functor, g: &NormalClovenFibration, budget: SearchBudget) -> Result<LlpVerdict> {
    let bottoms = enumerate_functors(f.cod(), g.base(), budget)?;
    let mut meter = Meter::new(budget);
    let mut inner = Meter::new(budget);
    let mut squares = 0;
    for k in bottoms {
        let kf = f.then_unchecked(&k);
        let mut failure: Option<Result<LiftingProblem>> = None;
        search_over(&kf, g.functor(), &mut meter, &mut |t| {
            squares += 1;
            let prob = LiftingProblem::new(f.clone(), g.clone(), t, k.clone());
            match prob.and_then(|p| Ok((first_filler_metered(&p, &mut inner)?, p))) {
                Ok((Some(_), _)) => ControlFlow::Continue(()),
                Ok((None, p)) => {
                    failure = Some(Ok(p));
                    ControlFlow::Break(())
                }
                Err(e) => {
                    failure = Some(Err(e));
                    ControlFlow::Break(())
                }
            }
        })?;
        if let Some(outcome) = failure {
            return Ok(LlpVerdict { holds: false, counterexample: Some(outcome?), squares });
        }
    }
    Ok(LlpVerdict { holds: true, counterexample: None, squares })
}

/// Every `t: A → E` with `p ∘ t = f`, in canonical order.
pub fn lifts_over(f: &Functor, p: &NormalClovenFibration, budget: SearchBudget) -> Result<Vec<Functor>> {
    let pf = p.functor();
    let object = |a: Obj, e: Obj| pf.obj(e) == f.obj(a);
    let arrow = |a: Arr, e: Arr| pf.arr(e) == f.arr(a);
    collect_functors(f.dom(), p.total(), &Constraints { object: &object, arrow: &arrow }, budget)
}

/// Candidate count for [`lifts_over`].
pub fn lifts_search_space(f: &Functor, p: &NormalClovenFibration) -> f64 {
    let pf = p.functor();
    let object = |a: Obj, e: Obj| pf.obj(e) == f.obj(a);
    let arrow = |a: Arr, e: Arr| pf.arr(e) == f.arr(a);
    search_space(f.dom(), p.total(), &Constraints { object: &object, arrow: &arrow })
}

/// Every functor `X → B` satisfying `constraint`, used for uniqueness checks.
pub fn functors_agreeing(
    x: &Arc<Groupoid>,
    b: &Arc<Groupoid>,
    budget: SearchBudget,
    object: &dyn Fn(Obj, Obj) -> bool,
    arrow: &dyn Fn(Arr, Arr) -> bool,
) -> Result<Vec<Functor>> {
    collect_functors(x, b, &Constraints { object, arrow }, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{discrete, interval, terminal, z2};
    use crate::wfs::factorize;

    fn inclusion() -> Functor {
        Functor::from_names(
            discrete(2),
            interval(),
            &[("0".into(), "0".into()), ("1".into(), "1".into())],
            &[("1_0".into(), "1_0".into()), ("1_1".into(), "1_1".into())],
        )
        .unwrap()
    }

    #[test]
    fn identity_fibration_has_exactly_the_bottom_as_filler() {
        let g = z2();
        let id = Functor::identity(&g);
        let prob = LiftingProblem::new(id.clone(), NormalClovenFibration::identity(&g), id.clone(), id.clone()).unwrap();
        let fillers = find_fillers(&prob, SearchBudget::default()).unwrap();
        assert_eq!(fillers, vec![Filler { j: id }]);
    }

    #[test]
    fn inclusion_against_discrete_has_no_filler() {
        let (two, pt) = (discrete(2), terminal());
        let i = interval();
        let prob = LiftingProblem::new(
            inclusion(),
            NormalClovenFibration::terminal(&two, &pt),
            Functor::identity(&two),
            Functor::to_point(&i, &pt),
        )
        .unwrap();
        assert!(find_fillers(&prob, SearchBudget::default()).unwrap().is_empty());
    }

    #[test]
    fn negative_control_verdict() {
        let (two, pt) = (discrete(2), terminal());
        let verdict = decide_llp(&inclusion(), &NormalClovenFibration::terminal(&two, &pt), SearchBudget::default()).unwrap();
        assert!(!verdict.holds);
        let cx = verdict.counterexample.unwrap();
        assert_eq!(cx.top, Functor::identity(&two));
        assert!(find_fillers(&cx, SearchBudget::default()).unwrap().is_empty());
        let direct = decide_llp_direct(&inclusion(), &NormalClovenFibration::terminal(&two, &pt), SearchBudget::default()).unwrap();
        assert!(!direct.holds);
    }

    #[test]
    fn anything_lifts_against_identity() {
        let i = interval();
        assert!(has_llp(&inclusion(), &NormalClovenFibration::identity(&i), SearchBudget::default()).unwrap());
    }

    #[test]
    fn lambda_of_identity_lifts_against_boundary() {
        let g = z2();
        let fact = factorize(&Functor::identity(&g)).unwrap();
        let path = crate::path::path_object(&NormalClovenFibration::terminal(&g, &terminal())).unwrap();
        assert!(has_llp(fact.lambda(), path.boundary(), SearchBudget::default()).unwrap());
    }

    #[test]
    fn solver_output_is_among_the_fillers() {
        let fact = factorize(&inclusion()).unwrap();
        let lambda = fact.lambda().clone();
        let prob = LiftingProblem::new(lambda.clone(), fact.rho().clone(), lambda, fact.rho().functor().clone())
            .unwrap()
            .with_witness(fact.witness());
        let solved = crate::wfs::solve_lifting(&prob).unwrap();
        let all = find_fillers(&prob, SearchBudget::default()).unwrap();
        assert!(all.contains(&solved));
        assert!(filler_search_space(&prob) >= all.len() as f64);
    }
}
