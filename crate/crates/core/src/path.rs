//! Path objects of groupoid fibrations and their stability under base change.
//!
//! For a fibration `p: E → X` the path groupoid has one object `(a, b, α)`
//! for every arrow `α: a → b` of `E` lying over an identity, and one arrow
//! `(a, b, α) → (a', b', β̄αᾱ⁻¹)` for every pair `(ᾱ: a → a', β̄: b → b')` with
//! `p(ᾱ) = p(β̄)`. A pair alone does not fix its source, so arrows are named
//! by the triple `(ᾱ, β̄, α)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functor::{same_groupoid, Functor};
use crate::groupoid::{Arr, Groupoid, Obj, RawGroupoid};
use crate::name::Name;
use crate::tribe::{compose_fibrations, pullback, NormalClovenFibration, PullbackSquare};

/// `E → Path(p) → E ×_p E`, the chosen factorization of the diagonal.
#[derive(Clone)]
pub struct PathObject {
    base: NormalClovenFibration,
    groupoid: Arc<Groupoid>,
    square: PullbackSquare,
    unit: Functor,
    boundary: NormalClovenFibration,
    source: NormalClovenFibration,
    target: Functor,
    // α for each object (a, b, α)
    object_path: Vec<Arr>,
    // (ᾱ, β̄) for each arrow
    arrow_parts: Vec<(Arr, Arr)>,
    object_of_path: HashMap<Arr, Obj>,
    arrow_of_parts: HashMap<(Arr, Arr, Arr), Arr>,
}

/// Builds `Path(p)` with its unit `r_p` and boundary fibration `∂_p`.
pub fn path_object(p: &NormalClovenFibration) -> Result<PathObject> {
    p.validate().map_err(Error::Fibration)?;
    let e_gpd = p.total().clone();
    let x_gpd = p.base();
    let pf = p.functor();

    let mut raw = RawGroupoid::with_capacity(0, 0);
    let mut raw_obj: HashMap<Arr, usize> = HashMap::new();
    let mut raw_paths: Vec<Arr> = Vec::new();
    for alpha in e_gpd.arrows() {
        if x_gpd.is_identity(pf.arr(alpha)) {
            raw_obj.insert(alpha, raw.objects.len());
            raw_paths.push(alpha);
            let (a, b) = (e_gpd.src(alpha), e_gpd.tgt(alpha));
            raw.objects.push(Name::triple(e_gpd.obj_name(a), e_gpd.obj_name(b), e_gpd.arr_name(alpha)));
        }
    }

    // (source path, ᾱ, β̄) for each raw arrow
    let mut raw_parts: Vec<(Arr, Arr, Arr)> = Vec::new();
    let mut raw_arr: HashMap<(Arr, Arr, Arr), usize> = HashMap::new();
    for &alpha in &raw_paths {
        let (a, b) = (e_gpd.src(alpha), e_gpd.tgt(alpha));
        for abar in e_gpd.out_arrows(a) {
            let over = pf.arr(abar);
            for bbar in e_gpd.out_arrows(b).filter(|&x| pf.arr(x) == over) {
                let target = e_gpd.compose(e_gpd.compose(bbar, alpha), e_gpd.inverse(abar));
                let key = (alpha, abar, bbar);
                raw_arr.insert(key, raw.arrows.len());
                raw_parts.push(key);
                raw.arrows.push((
                    Name::triple(e_gpd.arr_name(abar), e_gpd.arr_name(bbar), e_gpd.arr_name(alpha)),
                    raw_obj[&alpha],
                    raw_obj[&target],
                ));
            }
        }
    }
    for &alpha in &raw_paths {
        let (a, b) = (e_gpd.src(alpha), e_gpd.tgt(alpha));
        raw.identity.push(raw_arr[&(alpha, e_gpd.identity(a), e_gpd.identity(b))]);
    }
    for &(alpha, abar, bbar) in &raw_parts {
        let target = e_gpd.compose(e_gpd.compose(bbar, alpha), e_gpd.inverse(abar));
        raw.inverse.push(raw_arr[&(target, e_gpd.inverse(abar), e_gpd.inverse(bbar))]);
    }
    let built = raw.build(|f, g| {
        let (alpha, a1, b1) = raw_parts[f];
        let (_, a2, b2) = raw_parts[g];
        raw_arr[&(alpha, e_gpd.compose(a2, a1), e_gpd.compose(b2, b1))]
    });
    let groupoid = Arc::new(built.groupoid);

    let mut object_path = vec![Arr::new(0); groupoid.object_count()];
    let mut object_of_path = HashMap::with_capacity(raw_paths.len());
    for (i, &alpha) in raw_paths.iter().enumerate() {
        let o = built.obj_map[i];
        object_path[o.index()] = alpha;
        object_of_path.insert(alpha, o);
    }
    let mut arrow_parts = vec![(Arr::new(0), Arr::new(0)); groupoid.arrow_count()];
    let mut arrow_of_parts = HashMap::with_capacity(raw_parts.len());
    for (i, &(alpha, abar, bbar)) in raw_parts.iter().enumerate() {
        let x = built.arr_map[i];
        arrow_parts[x.index()] = (abar, bbar);
        arrow_of_parts.insert((alpha, abar, bbar), x);
    }

    let square = pullback(pf, p)?;
    let unit = Functor::from_parts(
        e_gpd.clone(),
        groupoid.clone(),
        e_gpd.objects().map(|a| object_of_path[&e_gpd.identity(a)]).collect(),
        e_gpd.arrows().map(|x| arrow_of_parts[&(e_gpd.identity(e_gpd.src(x)), x, x)]).collect(),
    );
    let boundary_functor = Functor::from_parts(
        groupoid.clone(),
        square.apex().clone(),
        groupoid
            .objects()
            .map(|o| {
                let alpha = object_path[o.index()];
                square.pair_object(e_gpd.src(alpha), e_gpd.tgt(alpha)).expect("endpoints of a vertical arrow")
            })
            .collect(),
        arrow_parts.iter().map(|&(abar, bbar)| square.pair_arrow(abar, bbar).expect("arrow over a common image")).collect(),
    );
    let boundary = NormalClovenFibration::from_fn(boundary_functor, |o, omega| {
        let (abar, bbar) = (square.proj0().functor().arr(omega), square.proj1().arr(omega));
        arrow_of_parts[&(object_path[o.index()], abar, bbar)]
    });
    let source = compose_fibrations(square.proj0(), &boundary)?;
    let target = boundary.functor().then_unchecked(square.proj1());

    Ok(PathObject {
        base: p.clone(),
        groupoid,
        square,
        unit,
        boundary,
        source,
        target,
        object_path,
        arrow_parts,
        object_of_path,
        arrow_of_parts,
    })
}

impl PathObject {
    /// The fibration `p` this path object belongs to.
    pub fn base(&self) -> &NormalClovenFibration {
        &self.base
    }

    pub fn groupoid(&self) -> &Arc<Groupoid> {
        &self.groupoid
    }

    /// `E ×_p E`.
    pub fn square(&self) -> &PullbackSquare {
        &self.square
    }

    /// `r_p: E → Path(p)`.
    pub fn unit(&self) -> &Functor {
        &self.unit
    }

    /// `∂_p: Path(p) → E ×_p E`.
    pub fn boundary(&self) -> &NormalClovenFibration {
        &self.boundary
    }

    /// `∂⁰_p`, the source end, as a fibration.
    pub fn source(&self) -> &NormalClovenFibration {
        &self.source
    }

    /// `∂¹_p`, the target end.
    pub fn target(&self) -> &Functor {
        &self.target
    }

    /// `Δ_p = ⟨id_E, id_E⟩`.
    pub fn diagonal(&self) -> Functor {
        let id = Functor::identity(self.base.total());
        self.square.mediating_arrow(&id, &id).expect("the diagonal is a cone")
    }

    /// The vertical arrow `α` of an object `(a, b, α)`.
    pub fn path_of(&self, o: Obj) -> Arr {
        self.object_path[o.index()]
    }

    /// The object `(src α, tgt α, α)` for a vertical arrow `α`.
    pub fn object_for(&self, alpha: Arr) -> Option<Obj> {
        self.object_of_path.get(&alpha).copied()
    }

    /// The pair `(ᾱ, β̄)` of an arrow.
    pub fn parts(&self, x: Arr) -> (Arr, Arr) {
        self.arrow_parts[x.index()]
    }

    /// The arrow `(ᾱ, β̄)` leaving the object with path `alpha`.
    pub fn arrow_for(&self, alpha: Arr, abar: Arr, bbar: Arr) -> Option<Arr> {
        self.arrow_of_parts.get(&(alpha, abar, bbar)).copied()
    }
}

impl fmt::Debug for PathObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PathObject").field("groupoid", &self.groupoid).finish()
    }
}

/// `⟨id_E, id_E⟩: E → E ×_p E`.
pub fn diagonal(p: &NormalClovenFibration) -> Functor {
    let square = pullback(p.functor(), p).expect("a fibration pulls back along itself");
    let id = Functor::identity(p.total());
    square.mediating_arrow(&id, &id).expect("the diagonal is a cone")
}

/// The comparison `i: Map_p(p*f) → Path(f*p)` together with everything its
/// defining diagram refers to.
#[derive(Clone, Debug)]
pub struct Stability {
    /// `F = X ×_Y E`; its first projection is `f*p`, its second `p*f`.
    pub pullback: PullbackSquare,
    /// `Path(f*p)`.
    pub path: PathObject,
    /// `Map_p(p*f)`, the pullback of `p*f` along `∂⁰_p`.
    pub mapping: PullbackSquare,
    pub iso: Functor,
}

/// Builds `i` for `p` and `f: X → Y` directly from the tuple formulas
/// `((x,e),(e,e',ε)) ↦ ((x,e),(x,e'),(1_x,ε))`.
pub fn stability_iso(path: &PathObject, f: &Functor) -> Result<Stability> {
    if !same_groupoid(f.cod(), path.base().base()) {
        return Err(Error::CodomainMismatch("f does not land in the base of p".into()));
    }
    stability_over(path, pullback(f, path.base())?)
}

/// As [`stability_iso`], reusing an already built `F = pullback(f, p)`.
pub(crate) fn stability_over(path: &PathObject, pb: PullbackSquare) -> Result<Stability> {
    let fp = path_object(pb.proj0())?;
    let mapping = pullback(pb.proj1(), path.source())?;
    let (x_gpd, f_gpd) = (pb.left().dom().clone(), pb.apex().clone());
    let proj0 = pb.proj0().functor();
    let (m0, m1) = (mapping.proj0().functor(), mapping.proj1());
    let e_gpd = path.base().total();

    let objects = mapping
        .apex()
        .objects()
        .map(|o| {
            let xe = m0.obj(o);
            let eps = path.path_of(m1.obj(o));
            let x = proj0.obj(xe);
            let vertical = pb.pair_arrow(x_gpd.identity(x), eps).expect("vertical path over an identity");
            fp.object_for(vertical).expect("vertical arrow of F")
        })
        .collect();
    let arrows = mapping
        .apex()
        .arrows()
        .map(|w| {
            let zeta_eta = m0.arr(w);
            let pi = m1.arr(w);
            let (_, eta2) = path.parts(pi);
            let eps = path.path_of(path.groupoid().src(pi));
            let zeta = proj0.arr(zeta_eta);
            let x = x_gpd.src(zeta);
            let bbar = pb.pair_arrow(zeta, eta2).expect("both lie over f(ζ)");
            let source = pb.pair_arrow(x_gpd.identity(x), eps).expect("vertical path over an identity");
            debug_assert_eq!(e_gpd.src(eps), pb.proj1().obj(f_gpd.src(zeta_eta)));
            fp.arrow_for(source, zeta_eta, bbar).expect("arrow of Path(f*p)")
        })
        .collect();
    let iso = Functor::from_parts(mapping.apex().clone(), fp.groupoid().clone(), objects, arrows);
    Ok(Stability { pullback: pb, path: fp, mapping, iso })
}

impl Stability {
    /// `⟨id_F, r_p ∘ p*f⟩: F → Map_p(p*f)`; `path` must be the `Path(p)`
    /// this was built from.
    pub fn unit_side(&self, path: &PathObject) -> Result<Functor> {
        let id = Functor::identity(self.pullback.apex());
        let r = self.pullback.proj1().then_unchecked(path.unit());
        self.mapping.mediating_arrow(&id, &r)
    }

    /// `⟨pm0, ⟨(f*p)∘pm0, ∂¹_p∘pm1⟩⟩: Map_p(p*f) → F ×_{f*p} F`.
    pub fn boundary_side(&self, path: &PathObject) -> Result<Functor> {
        let pm0 = self.mapping.proj0().functor();
        let down = pm0.then_unchecked(self.pullback.proj0().functor());
        let across = self.mapping.proj1().then_unchecked(path.target());
        let inner = self.pullback.mediating_arrow(&down, &across)?;
        self.path.square().mediating_arrow(pm0, &inner)
    }

    /// Both squares of the defining diagram commute on the nose.
    pub fn diagram_commutes(&self, path: &PathObject) -> Result<bool> {
        let top = self.unit_side(path)?.then_unchecked(&self.iso) == *self.path.unit();
        let bottom = self.iso.then_unchecked(self.path.boundary().functor()) == self.boundary_side(path)?;
        Ok(top && bottom)
    }

    /// The inverse of `i`, read back off the tuples.
    pub fn inverse(&self) -> Option<Functor> {
        self.iso.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{discrete, interval, terminal, z2};

    fn terminal_fib(g: &Arc<Groupoid>) -> NormalClovenFibration {
        NormalClovenFibration::terminal(g, &terminal())
    }

    #[test]
    fn z2_over_point() {
        let path = path_object(&terminal_fib(&z2())).unwrap();
        assert_eq!(path.groupoid().object_count(), 2);
        assert_eq!(path.groupoid().arrow_count(), 8);
        assert!(path.groupoid().check_laws().is_empty());
        assert!(path.boundary().validate().is_ok());
        assert_eq!(path.unit().then_unchecked(path.boundary().functor()), path.diagonal());
    }

    #[test]
    fn interval_over_point_is_indiscrete_on_four_objects() {
        let path = path_object(&terminal_fib(&interval())).unwrap();
        let g = path.groupoid();
        assert_eq!((g.object_count(), g.arrow_count()), (4, 16));
        for a in g.objects() {
            for b in g.objects() {
                assert_eq!(g.hom(a, b).len(), 1);
            }
        }
    }

    #[test]
    fn path_of_identity_is_isomorphic_to_the_total_space() {
        for e in [z2(), interval(), discrete(2)] {
            let path = path_object(&NormalClovenFibration::identity(&e)).unwrap();
            assert!(path.unit().is_bijective());
        }
    }

    #[test]
    fn empty_base() {
        let path = path_object(&terminal_fib(&discrete(0))).unwrap();
        assert!(path.groupoid().is_empty());
    }

    #[test]
    fn boundary_cleavage_targets_conjugated_path() {
        let path = path_object(&terminal_fib(&z2())).unwrap();
        let e = z2();
        let s = e.find_arrow(&"s".into()).unwrap();
        let o = path.object_for(s).unwrap();
        let omega = path.square().pair_arrow(s, e.identity(e.src(s))).unwrap();
        let lifted = path.boundary().lift(o, omega);
        // 1 ∘ s ∘ s⁻¹ = 1
        assert_eq!(path.path_of(path.groupoid().tgt(lifted)), e.identity(e.src(s)));
    }

    #[test]
    fn stability_for_z2_over_point_along_identity() {
        let pt = terminal();
        let p = NormalClovenFibration::terminal(&z2(), &pt);
        let path = path_object(&p).unwrap();
        let stab = stability_iso(&path, &Functor::identity(&pt)).unwrap();
        assert_eq!(stab.mapping.apex().object_count(), 2);
        assert!(stab.iso.is_bijective());
        assert!(stab.diagram_commutes(&path).unwrap());
        assert!(stab.inverse().is_some());
    }

    #[test]
    fn stability_for_a_point_of_z2() {
        let (pt, e) = (terminal(), z2());
        let path = path_object(&NormalClovenFibration::identity(&e)).unwrap();
        let f = Functor::from_parts(pt.clone(), e.clone(), vec![e.objects().next().unwrap()], vec![e.arrows().next().unwrap()]);
        let stab = stability_iso(&path, &f).unwrap();
        assert_eq!(stab.path.groupoid().arrow_count(), 1);
        assert_eq!(stab.mapping.apex().arrow_count(), 1);
        assert!(stab.diagram_commutes(&path).unwrap());
    }
}
