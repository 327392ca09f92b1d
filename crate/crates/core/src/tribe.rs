//! The tribe of finite groupoids: normal cloven fibrations, chosen
//! pullbacks along them, base change and composition.
//!
//! Cleavages are explicit tables. Composites and base changes always derive
//! their cleavage from the cleavages of their inputs, so the stability laws
//!
//! * `(p∘q)⁻¹γ = q⁻¹(p⁻¹γ)`
//! * `(f*p)⁻¹γ = (γ, p⁻¹f(γ))`
//!
//! hold by construction rather than by search.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, FibrationViolation, Result};
use crate::functor::{same_groupoid, Functor};
use crate::groupoid::{Arr, Groupoid, Obj, RawGroupoid};
use crate::name::Name;

/// A functor `p: E → X` together with a normal cleavage: for every object
/// `e` of `E` and every arrow `γ` of `X` leaving `p(e)`, a chosen arrow
/// `p⁻¹γ` of `E` leaving `e` and lying over `γ`.
#[derive(Clone)]
pub struct NormalClovenFibration {
    functor: Functor,
    // lifts at `e` occupy `lift_offset[e]..` indexed by out-position of γ
    lift_offset: Vec<usize>,
    lifts: Vec<Arr>,
}

impl NormalClovenFibration {
    /// Builds the cleavage table by calling `lift(e, γ)` for every liftable
    /// pair. No laws are checked.
    pub(crate) fn from_fn(functor: Functor, mut lift: impl FnMut(Obj, Arr) -> Arr) -> Self {
        let (e_gpd, x_gpd) = (functor.dom().clone(), functor.cod().clone());
        let mut lift_offset = Vec::with_capacity(e_gpd.object_count());
        let mut lifts = Vec::new();
        for e in e_gpd.objects() {
            lift_offset.push(lifts.len());
            for gamma in x_gpd.out_arrows(functor.obj(e)) {
                lifts.push(lift(e, gamma));
            }
        }
        NormalClovenFibration { functor, lift_offset, lifts }
    }

    /// Identity functor with the identity cleavage.
    pub fn identity(g: &Arc<Groupoid>) -> Self {
        Self::from_fn(Functor::identity(g), |_, gamma| gamma)
    }

    /// The terminal arrow `G → 𝟙`; only identities need lifting.
    pub fn terminal(g: &Arc<Groupoid>, point: &Arc<Groupoid>) -> Self {
        let src = g.clone();
        Self::from_fn(Functor::to_point(g, point), move |e, _| src.identity(e))
    }

    /// Attaches a user-supplied cleavage given as `(object, arrow, lift)`
    /// name triples, and checks it.
    pub fn with_cleavage(functor: Functor, entries: &[(Name, Name, Name)]) -> Result<Self> {
        let (e_gpd, x_gpd) = (functor.dom().clone(), functor.cod().clone());
        let mut given: HashMap<(Obj, Arr), Arr> = HashMap::with_capacity(entries.len());
        for (e, gamma, lift) in entries {
            let e = e_gpd.object_named(e)?;
            let gamma = x_gpd.arrow_named(gamma)?;
            let lift = e_gpd.arrow_named(lift)?;
            given.insert((e, gamma), lift);
        }
        let mut violations = Vec::new();
        let mut lift_offset = Vec::with_capacity(e_gpd.object_count());
        let mut lifts = Vec::new();
        for e in e_gpd.objects() {
            lift_offset.push(lifts.len());
            for gamma in x_gpd.out_arrows(functor.obj(e)) {
                match given.get(&(e, gamma)) {
                    Some(&l) => lifts.push(l),
                    None => {
                        let exists = e_gpd.out_arrows(e).any(|l| functor.arr(l) == gamma);
                        let (object, arrow) = (e_gpd.obj_name(e).clone(), x_gpd.arr_name(gamma).clone());
                        violations.push(if exists {
                            FibrationViolation::MissingLift { object, arrow }
                        } else {
                            FibrationViolation::NotAFibration { object, arrow }
                        });
                        lifts.push(e_gpd.identity(e));
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::Fibration(violations));
        }
        let fib = NormalClovenFibration { functor, lift_offset, lifts };
        fib.validate().map_err(Error::Fibration)?;
        Ok(fib)
    }

    pub fn functor(&self) -> &Functor {
        &self.functor
    }

    /// Total groupoid `E`.
    pub fn total(&self) -> &Arc<Groupoid> {
        self.functor.dom()
    }

    /// Base groupoid `X`.
    pub fn base(&self) -> &Arc<Groupoid> {
        self.functor.cod()
    }

    /// The chosen lift of `gamma` at `e`. Panics unless `src(gamma) = p(e)`.
    pub fn lift(&self, e: Obj, gamma: Arr) -> Arr {
        assert_eq!(self.base().src(gamma), self.functor.obj(e), "arrow does not start at p(e)");
        self.lifts[self.lift_offset[e.index()] + self.base().out_position(gamma)]
    }

    /// Checks lift endpoints and normality for every `(e, γ)` pair.
    pub fn validate(&self) -> std::result::Result<(), Vec<FibrationViolation>> {
        let (e_gpd, x_gpd) = (self.total(), self.base());
        let mut violations = Vec::new();
        for e in e_gpd.objects() {
            for gamma in x_gpd.out_arrows(self.functor.obj(e)) {
                let l = self.lift(e, gamma);
                if e_gpd.src(l) != e || self.functor.arr(l) != gamma {
                    violations.push(FibrationViolation::BadLift {
                        object: e_gpd.obj_name(e).clone(),
                        arrow: x_gpd.arr_name(gamma).clone(),
                        lift: e_gpd.arr_name(l).clone(),
                    });
                } else if x_gpd.is_identity(gamma) && !e_gpd.is_identity(l) {
                    violations.push(FibrationViolation::NotNormal(e_gpd.obj_name(e).clone()));
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// The cleavage as `(object, arrow, lift)` name triples, in canonical order.
    pub fn cleavage_entries(&self) -> Vec<(Name, Name, Name)> {
        let (e_gpd, x_gpd) = (self.total(), self.base());
        let mut out = Vec::with_capacity(self.lifts.len());
        for e in e_gpd.objects() {
            for gamma in x_gpd.out_arrows(self.functor.obj(e)) {
                out.push((
                    e_gpd.obj_name(e).clone(),
                    x_gpd.arr_name(gamma).clone(),
                    e_gpd.arr_name(self.lift(e, gamma)).clone(),
                ));
            }
        }
        out
    }
}

impl PartialEq for NormalClovenFibration {
    fn eq(&self, other: &Self) -> bool {
        self.functor == other.functor && self.lifts == other.lifts
    }
}

impl Eq for NormalClovenFibration {}

impl fmt::Debug for NormalClovenFibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormalClovenFibration")
            .field("functor", &self.functor)
            .field("cleavage", &self.cleavage_entries())
            .finish()
    }
}

/// Checks a fibration's cleavage laws.
pub fn validate_fibration(q: &NormalClovenFibration) -> std::result::Result<(), Vec<FibrationViolation>> {
    q.validate()
}

/// Picks, for each `(e, γ)`, the first lift in canonical arrow order;
/// identities are always lifted to identities.
pub fn derive_canonical_cleavage(p: &Functor) -> Result<NormalClovenFibration> {
    let (e_gpd, x_gpd) = (p.dom(), p.cod());
    let mut violations = Vec::new();
    let mut first_over: HashMap<Arr, Arr> = HashMap::new();
    let mut cached_at: Option<Obj> = None;
    let fib = NormalClovenFibration::from_fn(p.clone(), |e, gamma| {
        if x_gpd.is_identity(gamma) {
            return e_gpd.identity(e);
        }
        if cached_at != Some(e) {
            cached_at = Some(e);
            first_over.clear();
            for l in e_gpd.out_arrows(e).rev() {
                first_over.insert(p.arr(l), l);
            }
        }
        match first_over.get(&gamma) {
            Some(&l) => l,
            None => {
                violations.push(FibrationViolation::NotAFibration {
                    object: e_gpd.obj_name(e).clone(),
                    arrow: x_gpd.arr_name(gamma).clone(),
                });
                e_gpd.identity(e)
            }
        }
    });
    if violations.is_empty() {
        Ok(fib)
    } else {
        Err(Error::Fibration(violations))
    }
}

/// `p ∘ q`, with cleavage `(p∘q)⁻¹γ = q⁻¹(p⁻¹γ)`: lift `γ` along `p` at
/// `q(e)`, then lift the result along `q` at `e`.
pub fn compose_fibrations(p: &NormalClovenFibration, q: &NormalClovenFibration) -> Result<NormalClovenFibration> {
    if !same_groupoid(q.base(), p.total()) {
        return Err(Error::DomainMismatch("base of the first fibration is not the total space of the second".into()));
    }
    let functor = q.functor.then_unchecked(&p.functor);
    Ok(NormalClovenFibration::from_fn(functor, |e, gamma| q.lift(e, p.lift(q.functor.obj(e), gamma))))
}

/// The chosen pullback `A ×_X B` of a cospan `f: A → X`, `p: B → X` with
/// `p` a fibration.
///
/// Objects are pairs `(a, b)` with `f(a) = p(b)`, arrows pairs `(α, β)` with
/// `f(α) = p(β)`; structure is componentwise. The first projection is the
/// base change `f*p` and carries the cleavage `(γ, p⁻¹f(γ))`.
#[derive(Clone)]
pub struct PullbackSquare {
    apex: Arc<Groupoid>,
    proj0: NormalClovenFibration,
    proj1: Functor,
    left: Functor,
    right: NormalClovenFibration,
    obj_pairs: HashMap<(Obj, Obj), Obj>,
    arr_pairs: HashMap<(Arr, Arr), Arr>,
}

/// Builds the canonical pullback of `p` along `f`.
pub fn pullback(f: &Functor, p: &NormalClovenFibration) -> Result<PullbackSquare> {
    if !same_groupoid(f.cod(), p.base()) {
        return Err(Error::CodomainMismatch("pullback legs have different codomains".into()));
    }
    let (a_gpd, b_gpd) = (f.dom().clone(), p.total().clone());
    let pf = p.functor();

    let mut b_objs_over: HashMap<Obj, Vec<Obj>> = HashMap::new();
    for b in b_gpd.objects() {
        b_objs_over.entry(pf.obj(b)).or_default().push(b);
    }
    let mut b_arrs_over: HashMap<Arr, Vec<Arr>> = HashMap::new();
    for beta in b_gpd.arrows() {
        b_arrs_over.entry(pf.arr(beta)).or_default().push(beta);
    }

    let mut raw = RawGroupoid::with_capacity(0, 0);
    let mut raw_obj: HashMap<(Obj, Obj), usize> = HashMap::new();
    let mut obj_parts: Vec<(Obj, Obj)> = Vec::new();
    for a in a_gpd.objects() {
        for &b in b_objs_over.get(&f.obj(a)).map(Vec::as_slice).unwrap_or(&[]) {
            raw_obj.insert((a, b), raw.objects.len());
            obj_parts.push((a, b));
            raw.objects.push(Name::pair(a_gpd.obj_name(a), b_gpd.obj_name(b)));
        }
    }
    let mut raw_arr: HashMap<(Arr, Arr), usize> = HashMap::new();
    let mut arr_parts: Vec<(Arr, Arr)> = Vec::new();
    for alpha in a_gpd.arrows() {
        for &beta in b_arrs_over.get(&f.arr(alpha)).map(Vec::as_slice).unwrap_or(&[]) {
            let s = raw_obj[&(a_gpd.src(alpha), b_gpd.src(beta))];
            let t = raw_obj[&(a_gpd.tgt(alpha), b_gpd.tgt(beta))];
            raw_arr.insert((alpha, beta), raw.arrows.len());
            arr_parts.push((alpha, beta));
            raw.arrows.push((Name::pair(a_gpd.arr_name(alpha), b_gpd.arr_name(beta)), s, t));
        }
    }
    for &(a, b) in &obj_parts {
        raw.identity.push(raw_arr[&(a_gpd.identity(a), b_gpd.identity(b))]);
    }
    for &(alpha, beta) in &arr_parts {
        raw.inverse.push(raw_arr[&(a_gpd.inverse(alpha), b_gpd.inverse(beta))]);
    }
    let built = raw.build(|x, y| {
        let (a1, b1) = arr_parts[x];
        let (a2, b2) = arr_parts[y];
        raw_arr[&(a_gpd.compose(a2, a1), b_gpd.compose(b2, b1))]
    });
    let apex = Arc::new(built.groupoid);

    let mut objects0 = vec![Obj::new(0); apex.object_count()];
    let mut objects1 = vec![Obj::new(0); apex.object_count()];
    let mut obj_pairs = HashMap::with_capacity(obj_parts.len());
    for (i, &(a, b)) in obj_parts.iter().enumerate() {
        let o = built.obj_map[i];
        objects0[o.index()] = a;
        objects1[o.index()] = b;
        obj_pairs.insert((a, b), o);
    }
    let mut arrows0 = vec![Arr::new(0); apex.arrow_count()];
    let mut arrows1 = vec![Arr::new(0); apex.arrow_count()];
    let mut arr_pairs = HashMap::with_capacity(arr_parts.len());
    for (i, &(alpha, beta)) in arr_parts.iter().enumerate() {
        let x = built.arr_map[i];
        arrows0[x.index()] = alpha;
        arrows1[x.index()] = beta;
        arr_pairs.insert((alpha, beta), x);
    }
    let proj0_functor = Functor::from_parts(apex.clone(), a_gpd.clone(), objects0, arrows0);
    let proj1 = Functor::from_parts(apex.clone(), b_gpd.clone(), objects1, arrows1);

    let proj0 = NormalClovenFibration::from_fn(proj0_functor, |o, gamma| {
        let b = proj1.obj(o);
        arr_pairs[&(gamma, p.lift(b, f.arr(gamma)))]
    });

    Ok(PullbackSquare { apex, proj0, proj1, left: f.clone(), right: p.clone(), obj_pairs, arr_pairs })
}

impl PullbackSquare {
    pub fn apex(&self) -> &Arc<Groupoid> {
        &self.apex
    }

    /// First projection `A ×_X B → A`, the base change of `p` along `f`.
    pub fn proj0(&self) -> &NormalClovenFibration {
        &self.proj0
    }

    /// Second projection `A ×_X B → B`.
    pub fn proj1(&self) -> &Functor {
        &self.proj1
    }

    pub fn left(&self) -> &Functor {
        &self.left
    }

    pub fn right(&self) -> &NormalClovenFibration {
        &self.right
    }

    pub fn pair_object(&self, a: Obj, b: Obj) -> Option<Obj> {
        self.obj_pairs.get(&(a, b)).copied()
    }

    pub fn pair_arrow(&self, alpha: Arr, beta: Arr) -> Option<Arr> {
        self.arr_pairs.get(&(alpha, beta)).copied()
    }

    /// The universal arrow `⟨u, v⟩` for a cone `f∘u = p∘v`.
    pub fn mediating_arrow(&self, u: &Functor, v: &Functor) -> Result<Functor> {
        if !same_groupoid(u.dom(), v.dom()) {
            return Err(Error::NotACone);
        }
        if !same_groupoid(u.cod(), self.left.dom()) || !same_groupoid(v.cod(), self.right.total()) {
            return Err(Error::NotACone);
        }
        let fu = u.then_unchecked(&self.left);
        let pv = v.then_unchecked(self.right.functor());
        if fu.object_map() != pv.object_map() || fu.arrow_map() != pv.arrow_map() {
            return Err(Error::NotACone);
        }
        let w = u.dom();
        let objects = w.objects().map(|o| self.obj_pairs[&(u.obj(o), v.obj(o))]).collect();
        let arrows = w.arrows().map(|a| self.arr_pairs[&(u.arr(a), v.arr(a))]).collect();
        Ok(Functor::from_parts(w.clone(), self.apex.clone(), objects, arrows))
    }

    /// The second projection as a fibration, given a cleavage on the left
    /// leg: `(f*)⁻¹ω` at `(a, b)` is `(f⁻¹p(ω), ω)`. This is the mirror image
    /// of the base-change cleavage on the first projection.
    pub fn proj1_fibration(&self, left: &NormalClovenFibration) -> Result<NormalClovenFibration> {
        if left.functor() != &self.left {
            return Err(Error::PreconditionViolated("cleavage given for a different left leg".into()));
        }
        let p = self.right.functor();
        Ok(NormalClovenFibration::from_fn(self.proj1.clone(), |o, omega| {
            let a = self.proj0.functor().obj(o);
            self.arr_pairs[&(left.lift(a, p.arr(omega)), omega)]
        }))
    }
}

impl fmt::Debug for PullbackSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PullbackSquare").field("apex", &self.apex).finish()
    }
}

/// Base change of `p` along `f`: the first projection of the chosen
/// pullback, with cleavage `(γ, p⁻¹f(γ))`.
pub fn base_change_fibration(f: &Functor, p: &NormalClovenFibration) -> Result<NormalClovenFibration> {
    Ok(pullback(f, p)?.proj0)
}

/// The product `A × B`, i.e. the pullback of `B → 𝟙` along `A → 𝟙`.
pub fn product(a: &Arc<Groupoid>, b: &Arc<Groupoid>, point: &Arc<Groupoid>) -> PullbackSquare {
    let to_point = Functor::to_point(a, point);
    pullback(&to_point, &NormalClovenFibration::terminal(b, point)).expect("both legs end in the point")
}
