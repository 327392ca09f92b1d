//! Lifting problems and their constructive solutions.
//!
//! Two kinds of left maps can be solved without search: base changes of a
//! path-object unit `r_p` along a fibration, and the first half
//! `λ = ⟨id_X, r_Y f⟩` of a factorization. Everything else is left to the
//! oracle.

use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::functor::{same_groupoid, Functor};
use crate::path::{path_object, stability_over, PathObject, Stability};
use crate::standard::terminal;
use crate::tribe::{compose_fibrations, pullback, NormalClovenFibration, PullbackSquare};

/// Why a left map is known to lift against every fibration.
#[derive(Clone)]
pub enum LeftWitness {
    /// The left map `A → B` is, up to the isomorphism `from_canonical`, the
    /// second projection of `square = pullback(r_p, q)` for a fibration `q`.
    UnitPullback {
        path: Arc<PathObject>,
        square: Arc<PullbackSquare>,
        from_canonical: Functor,
    },
    /// The left map is `λ` of this factorization.
    FactorizationUnit(Arc<Factorization>),
}

impl LeftWitness {
    /// Witness for a left map that literally is `pullback(r_p, q).proj1()`.
    pub fn unit_pullback(path: Arc<PathObject>, q: &NormalClovenFibration) -> Result<Self> {
        let square = pullback(path.unit(), q)?;
        let from_canonical = Functor::identity(square.apex());
        Ok(LeftWitness::UnitPullback { path, square: Arc::new(square), from_canonical })
    }
}

impl fmt::Debug for LeftWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeftWitness::UnitPullback { .. } => f.write_str("UnitPullback"),
            LeftWitness::FactorizationUnit(_) => f.write_str("FactorizationUnit"),
        }
    }
}

/// A commuting square
///
/// ```text
///   A --top--> B
///   |          |
/// left       right
///   v          v
///   X -bottom> Y
/// ```
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub left: Functor,
    pub right: NormalClovenFibration,
    pub top: Functor,
    pub bottom: Functor,
    pub witness: Option<LeftWitness>,
}

impl LiftingProblem {
    pub fn new(left: Functor, right: NormalClovenFibration, top: Functor, bottom: Functor) -> Result<Self> {
        if !same_groupoid(left.dom(), top.dom()) || !same_groupoid(left.cod(), bottom.dom()) {
            return Err(Error::DomainMismatch("left map does not match top and bottom".into()));
        }
        if !same_groupoid(top.cod(), right.total()) || !same_groupoid(bottom.cod(), right.base()) {
            return Err(Error::CodomainMismatch("right map does not match top and bottom".into()));
        }
        let rt = top.then_unchecked(right.functor());
        let bl = left.then_unchecked(&bottom);
        if rt.object_map() != bl.object_map() || rt.arrow_map() != bl.arrow_map() {
            return Err(Error::NotCommutative);
        }
        Ok(LiftingProblem { left, right, top, bottom, witness: None })
    }

    pub fn with_witness(mut self, witness: LeftWitness) -> Self {
        self.witness = Some(witness);
        self
    }

    /// `j ∘ left = top` and `right ∘ j = bottom`.
    pub fn is_filler(&self, j: &Functor) -> bool {
        if !same_groupoid(j.dom(), self.left.cod()) || !same_groupoid(j.cod(), self.right.total()) {
            return false;
        }
        let upper = self.left.then_unchecked(j);
        let lower = j.then_unchecked(self.right.functor());
        upper.object_map() == self.top.object_map()
            && upper.arrow_map() == self.top.arrow_map()
            && lower.object_map() == self.bottom.object_map()
            && lower.arrow_map() == self.bottom.arrow_map()
    }
}

/// A diagonal `j: X → B` of a lifting problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filler {
    pub j: Functor,
}

/// `f = ρ ∘ λ` with `λ` anodyne and `ρ` a fibration, through the mapping
/// path object of `f` over the path object of `Y → 𝟙`.
pub struct Factorization {
    f: Functor,
    path: Arc<PathObject>,
    map: PullbackSquare,
    lambda: Functor,
    rho: NormalClovenFibration,
    auxiliary: OnceLock<Auxiliary>,
    // Recently used right maps and the data shared by all their tops.
    lifters: Mutex<Vec<Arc<UnitLifter>>>,
}

const LIFTER_CACHE: usize = 8;

// Data depending only on `f`, needed to lift `λ` against any fibration.
struct Auxiliary {
    // filler of r_Y against ∂ of Path(∂⁰_Y)
    phi: Functor,
    // i: Map_{∂⁰_Y}(m) → Path(pm0), and Path(pm0) itself
    stability: Stability,
}

/// The mapping path object of `g` along `p`: the pullback of `g` along `∂⁰_p`.
pub fn mapping_path_object(path: &PathObject, g: &Functor) -> Result<PullbackSquare> {
    pullback(g, path.source())
}

/// Factors `f: X → Y` as `X --λ--> Map(f) --ρ--> Y`.
///
/// `ρ` lifts `β: b → b'` at `(x, (a, b, γ))` to `(1_x, (1_a, β))`.
pub fn factorize(f: &Functor) -> Result<Arc<Factorization>> {
    f.validate().map_err(Error::Functor)?;
    let (x_gpd, y_gpd) = (f.dom(), f.cod());
    let path = Arc::new(path_object(&NormalClovenFibration::terminal(y_gpd, &terminal()))?);
    let map = mapping_path_object(&path, f)?;
    let lambda = map.mediating_arrow(&Functor::identity(x_gpd), &f.then_unchecked(path.unit()))?;
    let rho_functor = map.proj1().then_unchecked(path.target());
    let rho = NormalClovenFibration::from_fn(rho_functor, |o, beta| {
        let x = map.proj0().functor().obj(o);
        let gamma = path.path_of(map.proj1().obj(o));
        let a = y_gpd.src(gamma);
        let moved = path.arrow_for(gamma, y_gpd.identity(a), beta).expect("every pair lifts over the point");
        map.pair_arrow(x_gpd.identity(x), moved).expect("(1_x, (1_a, β)) lies over f(1_x)")
    });
    Ok(Arc::new(Factorization { f: f.clone(), path, map, lambda, rho, auxiliary: OnceLock::new(), lifters: Mutex::new(Vec::new()) }))
}

impl Factorization {
    pub fn functor(&self) -> &Functor {
        &self.f
    }

    /// `λ = ⟨id_X, r_Y f⟩: X → Map(f)`.
    pub fn lambda(&self) -> &Functor {
        &self.lambda
    }

    /// `ρ = ∂¹_Y ∘ m: Map(f) → Y`.
    pub fn rho(&self) -> &NormalClovenFibration {
        &self.rho
    }

    /// `Map(f)` with its projections `p` to `X` and `m` to `Path(Y)`.
    pub fn mapping(&self) -> &PullbackSquare {
        &self.map
    }

    pub fn mid(&self) -> &Arc<crate::groupoid::Groupoid> {
        self.map.apex()
    }

    /// The path object of `Y → 𝟙`.
    pub fn path(&self) -> &Arc<PathObject> {
        &self.path
    }

    pub fn witness(self: &Arc<Self>) -> LeftWitness {
        LeftWitness::FactorizationUnit(self.clone())
    }

    /// `ρ ∘ λ = f` on the nose.
    pub fn is_exact(&self) -> bool {
        self.lambda.then_unchecked(self.rho.functor()) == self.f
    }

    fn auxiliary(&self) -> Result<&Auxiliary> {
        if let Some(aux) = self.auxiliary.get() {
            return Ok(aux);
        }
        let y_path = &self.path;
        let source_path = path_object(y_path.source())?;
        let r_y = y_path.unit();
        let top = r_y.then_unchecked(source_path.unit());
        let back = y_path.source().functor().then_unchecked(r_y);
        let bottom = source_path.square().mediating_arrow(&back, &Functor::identity(y_path.groupoid()))?;
        let square = pullback(r_y, &NormalClovenFibration::identity(y_path.groupoid()))?;
        let from_canonical = square.proj0().functor().clone();
        let problem = LiftingProblem::new(r_y.clone(), source_path.boundary().clone(), top, bottom)?.with_witness(
            LeftWitness::UnitPullback { path: y_path.clone(), square: Arc::new(square), from_canonical },
        );
        let phi = solve_lifting(&problem)?.j;
        let stability = stability_over(&source_path, self.map.clone())?;
        Ok(self.auxiliary.get_or_init(|| Auxiliary { phi, stability }))
    }
}

impl fmt::Debug for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Factorization")
            .field("f", &self.f)
            .field("mid", self.map.apex())
            .field("lambda", &self.lambda)
            .finish()
    }
}

/// Fills
///
/// ```text
///   C ----f----> E
///   |            |
/// proj1        qbar
///   v            v
///   B ===id===== B
/// ```
///
/// where `square` is `pullback(r_p, q)` for a fibration `q: B → Path(p)`.
/// Each `b` is first moved along `q⁻¹(1_a, α⁻¹)` onto the image of `r_p`,
/// where `f` is defined, and the answer is carried back along `qbar`.
pub fn fill_unit_square(
    path: &PathObject,
    square: &PullbackSquare,
    qbar: &NormalClovenFibration,
    f: &Functor,
) -> Result<Filler> {
    if !same_groupoid(qbar.base(), square.right().total()) {
        return Err(Error::PreconditionViolated("maps do not fit the unit square".into()));
    }
    let j = fill_unit_square_over(path, square, qbar, &Functor::identity(qbar.base()), f)?;
    Ok(Filler { j })
}

// As fill_unit_square with `qbar` the base change of `right` along `bottom`,
// lifting in `right` directly instead of building the pullback.
fn fill_unit_square_over(
    path: &PathObject,
    square: &PullbackSquare,
    right: &NormalClovenFibration,
    bottom: &Functor,
    f: &Functor,
) -> Result<Functor> {
    if square.left() != path.unit() {
        return Err(Error::PreconditionViolated("square is not a pullback of the path-object unit".into()));
    }
    let q = square.right();
    let (b_gpd, e_gpd) = (q.total(), right.total());
    if !same_groupoid(bottom.dom(), b_gpd)
        || !same_groupoid(bottom.cod(), right.base())
        || !same_groupoid(f.dom(), square.apex())
        || !same_groupoid(f.cod(), e_gpd)
    {
        return Err(Error::PreconditionViolated("maps do not fit the unit square".into()));
    }
    if f.then_unchecked(right.functor()).arrow_map() != square.proj1().then_unchecked(bottom).arrow_map() {
        return Err(Error::PreconditionViolated("unit square does not commute".into()));
    }
    let base = path.base().total();

    let n = b_gpd.object_count();
    let mut to_unit = Vec::with_capacity(n);
    let mut back = Vec::with_capacity(n);
    let mut objects = Vec::with_capacity(n);
    for b in b_gpd.objects() {
        let alpha = path.path_of(q.functor().obj(b));
        let a = base.src(alpha);
        let retract = path.arrow_for(alpha, base.identity(a), base.inverse(alpha)).expect("vertical arrows invert");
        let gamma = q.lift(b, retract);
        let c = square.pair_object(a, b_gpd.tgt(gamma)).expect("target lies over r_p(a)");
        let eta = right.lift(f.obj(c), bottom.arr(b_gpd.inverse(gamma)));
        to_unit.push(gamma);
        back.push(eta);
        objects.push(e_gpd.tgt(eta));
    }
    let arrows = b_gpd
        .arrows()
        .map(|beta| {
            let (s, t) = (b_gpd.src(beta).index(), b_gpd.tgt(beta).index());
            let (abar, _) = path.parts(q.functor().arr(beta));
            let moved = b_gpd.compose(b_gpd.compose(to_unit[t], beta), b_gpd.inverse(to_unit[s]));
            let c = square.pair_arrow(abar, moved).expect("moved arrow lies over r_p(ᾱ)");
            e_gpd.compose(e_gpd.compose(back[t], f.arr(c)), e_gpd.inverse(back[s]))
        })
        .collect();
    Ok(Functor::from_parts(b_gpd.clone(), e_gpd.clone(), objects, arrows))
}

/// A lifting problem with identity bottom, and the pullback that produced it.
#[derive(Clone, Debug)]
pub struct ReducedProblem {
    pub problem: LiftingProblem,
    /// `X ×_Y B`, pulled back along the original bottom.
    pub square: PullbackSquare,
}

impl ReducedProblem {
    /// Turns a filler of the reduced problem into one of the original.
    pub fn recompose(&self, filler: &Filler) -> Filler {
        Filler { j: filler.j.then_unchecked(self.square.proj1()) }
    }
}

/// Replaces `right` by its base change along `bottom`, so that the bottom
/// becomes an identity.
pub fn reduce_lifting_problem(prob: &LiftingProblem) -> Result<ReducedProblem> {
    let square = pullback(&prob.bottom, &prob.right)?;
    let top = square.mediating_arrow(&prob.left, &prob.top)?;
    let problem = LiftingProblem {
        left: prob.left.clone(),
        right: square.proj0().clone(),
        top,
        bottom: Functor::identity(prob.left.cod()),
        witness: prob.witness.clone(),
    };
    Ok(ReducedProblem { problem, square })
}

/// Solves a witnessed lifting problem constructively.
pub fn solve_lifting(prob: &LiftingProblem) -> Result<Filler> {
    let witness = prob.witness.as_ref().ok_or(Error::NoWitness)?;
    let filler = match witness {
        LeftWitness::UnitPullback { path, square, from_canonical } => {
            if !from_canonical.is_bijective() || from_canonical.then_unchecked(&prob.left) != *square.proj1() {
                return Err(Error::PreconditionViolated("left map is not the witnessed unit pullback".into()));
            }
            let f = from_canonical.then_unchecked(&prob.top);
            Filler { j: fill_unit_square_over(path, square, &prob.right, &prob.bottom, &f)? }
        }
        LeftWitness::FactorizationUnit(fact) => {
            if prob.left != fact.lambda {
                return Err(Error::PreconditionViolated("left map is not the witnessed factorization unit".into()));
            }
            if prob.bottom == Functor::identity(prob.left.cod()) {
                Filler { j: lift_factorization_unit(fact, &prob.right, &prob.top)? }
            } else {
                let reduced = reduce_lifting_problem(prob)?;
                let r = &reduced.problem;
                reduced.recompose(&Filler { j: lift_factorization_unit(fact, &r.right, &r.top)? })
            }
        }
    };
    if !prob.is_filler(&filler.j) {
        return Err(Error::PreconditionViolated("constructed diagonal does not fill the square".into()));
    }
    Ok(filler)
}

// Everything in the diagonal for λ against q that does not depend on the top.
struct UnitLifter {
    q: NormalClovenFibration,
    // Map_Y(ρ∘q) and the filler h of ⟨id, r_Y(ρ∘q)⟩ against q
    mt: PullbackSquare,
    h: Functor,
    // transport square over Path(pm0) and its filler
    transport_map: PullbackSquare,
    transport_filler: Functor,
}

impl Factorization {
    fn lifter(&self, q: &NormalClovenFibration) -> Result<Arc<UnitLifter>> {
        let mut cache = self.lifters.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(pos) = cache.iter().position(|l| l.q == *q) {
            let hit = cache.remove(pos);
            cache.push(hit.clone());
            return Ok(hit);
        }
        drop(cache);
        let lifter = Arc::new(UnitLifter::new(self, q)?);
        let mut cache = self.lifters.lock().unwrap_or_else(|e| e.into_inner());
        if cache.len() == LIFTER_CACHE {
            cache.remove(0);
        }
        cache.push(lifter.clone());
        Ok(lifter)
    }
}

impl UnitLifter {
    fn new(fact: &Factorization, q: &NormalClovenFibration) -> Result<Self> {
        let e_gpd = q.total();
        let y_path = &fact.path;
        let id_e = Functor::identity(e_gpd);

        let total = compose_fibrations(&fact.rho, q)?;
        let mt = mapping_path_object(y_path, total.functor())?;
        let pm1 = mt.proj1_fibration(&total)?;
        let l = mt.mediating_arrow(&id_e, &total.functor().then_unchecked(y_path.unit()))?;
        let c = pullback(y_path.unit(), &pm1)?;
        let from_canonical = c.proj1().then_unchecked(mt.proj0().functor());
        let bottom = mt.proj0().functor().then_unchecked(q.functor());
        let h_problem = LiftingProblem::new(l, q.clone(), id_e, bottom)?.with_witness(LeftWitness::UnitPullback {
            path: y_path.clone(),
            square: Arc::new(c),
            from_canonical,
        });
        let h = solve_lifting(&h_problem)?.j;

        let aux = fact.auxiliary()?;
        let ts = transport_square(&Arc::new(aux.stability.path.clone()), q)?;
        let transport_filler = solve_lifting(&ts.problem)?.j;
        Ok(UnitLifter { q: q.clone(), mt, h, transport_map: ts.mapping, transport_filler })
    }
}

// Diagonal for λ against q: E → Map(f) with top g and identity bottom.
fn lift_factorization_unit(fact: &Factorization, q: &NormalClovenFibration, g: &Functor) -> Result<Functor> {
    let lifter = fact.lifter(q)?;
    let (p, m) = (fact.map.proj0().functor(), fact.map.proj1());
    let k = lifter.mt.mediating_arrow(&p.then_unchecked(g), m)?.then_unchecked(&lifter.h);

    let aux = fact.auxiliary()?;
    let qk = k.then_unchecked(q.functor());
    let phi_m = m.then_unchecked(&aux.phi);
    let psi = aux.stability.mapping.mediating_arrow(&qk, &phi_m)?.then_unchecked(&aux.stability.iso);
    // transport of k along ψ
    Ok(lifter.transport_map.mediating_arrow(&k, &psi)?.then_unchecked(&lifter.transport_filler))
}

/// The square solved by [`transport`]:
///
/// ```text
///   E ========== E
///   |            |
/// ⟨id, r_p q⟩    q
///   v            v
/// Map_p(q) --∂¹pm1--> Y
/// ```
#[derive(Clone, Debug)]
pub struct TransportSquare {
    pub mapping: PullbackSquare,
    pub problem: LiftingProblem,
}

/// Builds the transport square for `p: Y → X` and a fibration `q: E → Y`,
/// witnessed as the pullback of `r_p` along `pm1`.
pub fn transport_square(path: &Arc<PathObject>, q: &NormalClovenFibration) -> Result<TransportSquare> {
    if !same_groupoid(q.base(), path.base().total()) {
        return Err(Error::PreconditionViolated("q does not land in the total space of p".into()));
    }
    let e_gpd = q.total();
    let mapping = mapping_path_object(path, q.functor())?;
    let pm1 = mapping.proj1_fibration(q)?;
    let id_e = Functor::identity(e_gpd);
    let left = mapping.mediating_arrow(&id_e, &q.functor().then_unchecked(path.unit()))?;
    let bottom = mapping.proj1().then_unchecked(path.target());
    let c = pullback(path.unit(), &pm1)?;
    let from_canonical = c.proj1().then_unchecked(mapping.proj0().functor());
    let problem = LiftingProblem::new(left, q.clone(), id_e, bottom)?.with_witness(LeftWitness::UnitPullback {
        path: path.clone(),
        square: Arc::new(c),
        from_canonical,
    });
    Ok(TransportSquare { mapping, problem })
}

/// Transport along a fixed path object and fibration `q`. The filler `j` of
/// the transport square is solved once and reused for every `(e, u)`.
#[derive(Clone, Debug)]
pub struct Transport {
    path: Arc<PathObject>,
    q: NormalClovenFibration,
    mapping: PullbackSquare,
    filler: Functor,
}

impl Transport {
    pub fn new(path: &PathObject, q: &NormalClovenFibration) -> Result<Self> {
        let path = Arc::new(path.clone());
        let ts = transport_square(&path, q)?;
        let filler = solve_lifting(&ts.problem)?.j;
        Ok(Transport { path, q: q.clone(), mapping: ts.mapping, filler })
    }

    /// `u_!e = j ∘ ⟨e, u⟩`.
    ///
    /// Satisfies `q ∘ u_!e = ∂¹_p ∘ u`, and agrees with `e` wherever `u`
    /// factors through `r_p`.
    pub fn apply(&self, e: &Functor, u: &Functor) -> Result<Functor> {
        if !same_groupoid(e.dom(), u.dom())
            || !same_groupoid(e.cod(), self.q.total())
            || !same_groupoid(u.cod(), self.path.groupoid())
        {
            return Err(Error::PreconditionViolated("e and u do not fit q and the path object".into()));
        }
        let qe = e.then_unchecked(self.q.functor());
        let su = u.then_unchecked(self.path.source().functor());
        if qe.arrow_map() != su.arrow_map() || qe.object_map() != su.object_map() {
            return Err(Error::PreconditionViolated("q ∘ e differs from the source of u".into()));
        }
        Ok(self.mapping.mediating_arrow(e, u)?.then_unchecked(&self.filler))
    }
}

/// One-shot [`Transport::apply`].
pub fn transport(path: &PathObject, q: &NormalClovenFibration, e: &Functor, u: &Functor) -> Result<Functor> {
    Transport::new(path, q)?.apply(e, u)
}
