//! Functors between finite groupoids, compared on the nose.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, FunctorViolation, Result};
use crate::groupoid::{Arr, Groupoid, Obj};
use crate::name::Name;

/// Two groupoid references denote the same groupoid when they are the same
/// allocation or structurally identical.
pub fn same_groupoid(a: &Arc<Groupoid>, b: &Arc<Groupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A map of groupoids given by its action on objects and arrows.
///
/// Constructors other than [`Functor::from_names`] do not check functoriality;
/// derived constructions are functorial by construction and
/// [`Functor::validate`] is available to confirm it.
#[derive(Clone)]
pub struct Functor {
    dom: Arc<Groupoid>,
    cod: Arc<Groupoid>,
    objects: Vec<Obj>,
    arrows: Vec<Arr>,
}

impl Functor {
    pub(crate) fn from_parts(dom: Arc<Groupoid>, cod: Arc<Groupoid>, objects: Vec<Obj>, arrows: Vec<Arr>) -> Self {
        debug_assert_eq!(objects.len(), dom.object_count());
        debug_assert_eq!(arrows.len(), dom.arrow_count());
        Functor { dom, cod, objects, arrows }
    }

    /// Builds and validates a functor from name-level maps.
    pub fn from_names(
        dom: Arc<Groupoid>,
        cod: Arc<Groupoid>,
        objects: &[(Name, Name)],
        arrows: &[(Name, Name)],
    ) -> Result<Self> {
        let mut obj_map: Vec<Option<Obj>> = vec![None; dom.object_count()];
        for (x, y) in objects {
            obj_map[dom.object_named(x)?.index()] = Some(cod.object_named(y)?);
        }
        let mut arr_map: Vec<Option<Arr>> = vec![None; dom.arrow_count()];
        for (x, y) in arrows {
            arr_map[dom.arrow_named(x)?.index()] = Some(cod.arrow_named(y)?);
        }
        let mut missing = Vec::new();
        for o in dom.objects() {
            if obj_map[o.index()].is_none() {
                missing.push(FunctorViolation::Unmapped(dom.obj_name(o).clone()));
            }
        }
        for a in dom.arrows() {
            if arr_map[a.index()].is_none() {
                missing.push(FunctorViolation::Unmapped(dom.arr_name(a).clone()));
            }
        }
        if !missing.is_empty() {
            return Err(Error::Functor(missing));
        }
        let f = Functor {
            objects: obj_map.into_iter().map(Option::unwrap).collect(),
            arrows: arr_map.into_iter().map(Option::unwrap).collect(),
            dom,
            cod,
        };
        f.validate().map_err(Error::Functor)?;
        Ok(f)
    }

    pub fn identity(g: &Arc<Groupoid>) -> Self {
        Functor {
            dom: g.clone(),
            cod: g.clone(),
            objects: g.objects().collect(),
            arrows: g.arrows().collect(),
        }
    }

    /// The unique functor into a one-object, one-arrow groupoid.
    pub fn to_point(dom: &Arc<Groupoid>, point: &Arc<Groupoid>) -> Self {
        assert!(point.object_count() == 1 && point.arrow_count() == 1, "target is not terminal");
        let o = point.objects().next().unwrap();
        let a = point.identity(o);
        Functor {
            dom: dom.clone(),
            cod: point.clone(),
            objects: vec![o; dom.object_count()],
            arrows: vec![a; dom.arrow_count()],
        }
    }

    pub fn dom(&self) -> &Arc<Groupoid> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Groupoid> {
        &self.cod
    }

    pub fn obj(&self, o: Obj) -> Obj {
        self.objects[o.index()]
    }

    pub fn arr(&self, a: Arr) -> Arr {
        self.arrows[a.index()]
    }

    pub fn object_map(&self) -> &[Obj] {
        &self.objects
    }

    pub fn arrow_map(&self) -> &[Arr] {
        &self.arrows
    }

    /// Checks endpoint preservation, identities and every composable pair.
    pub fn validate(&self) -> std::result::Result<(), Vec<FunctorViolation>> {
        let (d, c) = (&*self.dom, &*self.cod);
        let mut violations = Vec::new();
        for a in d.arrows() {
            let fa = self.arr(a);
            if c.src(fa) != self.obj(d.src(a)) || c.tgt(fa) != self.obj(d.tgt(a)) {
                violations.push(FunctorViolation::BadEndpointImage(d.arr_name(a).clone()));
            }
        }
        if !violations.is_empty() {
            return Err(violations);
        }
        for o in d.objects() {
            if !c.is_identity(self.arr(d.identity(o))) {
                violations.push(FunctorViolation::IdentityNotPreserved(d.obj_name(o).clone()));
            }
        }
        for f in d.arrows() {
            for g in d.out_arrows(d.tgt(f)) {
                if self.arr(d.compose(g, f)) != c.compose(self.arr(g), self.arr(f)) {
                    violations.push(FunctorViolation::CompositionNotPreserved {
                        first: d.arr_name(f).clone(),
                        second: d.arr_name(g).clone(),
                    });
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// `other ∘ self`, without re-checking the middle groupoid.
    pub(crate) fn then_unchecked(&self, other: &Functor) -> Functor {
        Functor {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            objects: self.objects.iter().map(|&o| other.obj(o)).collect(),
            arrows: self.arrows.iter().map(|&a| other.arr(a)).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Functor) -> Result<Functor> {
        compose_functors(other, self)
    }

    pub fn is_bijective(&self) -> bool {
        fn injective(v: impl Iterator<Item = usize>, n: usize) -> bool {
            let mut seen = vec![false; n];
            v.into_iter().all(|i| !std::mem::replace(&mut seen[i], true))
        }
        self.objects.len() == self.cod.object_count()
            && self.arrows.len() == self.cod.arrow_count()
            && injective(self.objects.iter().map(|o| o.index()), self.cod.object_count())
            && injective(self.arrows.iter().map(|a| a.index()), self.cod.arrow_count())
    }

    /// Inverse of a bijective functor.
    pub fn inverse(&self) -> Option<Functor> {
        if !self.is_bijective() {
            return None;
        }
        let mut objects = vec![Obj::new(0); self.objects.len()];
        for (i, o) in self.objects.iter().enumerate() {
            objects[o.index()] = Obj::new(i);
        }
        let mut arrows = vec![Arr::new(0); self.arrows.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            arrows[a.index()] = Arr::new(i);
        }
        Some(Functor { dom: self.cod.clone(), cod: self.dom.clone(), objects, arrows })
    }

    /// Name-level maps, in canonical domain order.
    pub fn object_pairs(&self) -> Vec<(Name, Name)> {
        self.dom
            .objects()
            .map(|o| (self.dom.obj_name(o).clone(), self.cod.obj_name(self.obj(o)).clone()))
            .collect()
    }

    pub fn arrow_pairs(&self) -> Vec<(Name, Name)> {
        self.dom
            .arrows()
            .map(|a| (self.dom.arr_name(a).clone(), self.cod.arr_name(self.arr(a)).clone()))
            .collect()
    }
}

/// `g ∘ f`.
pub fn compose_functors(g: &Functor, f: &Functor) -> Result<Functor> {
    if !same_groupoid(&f.cod, &g.dom) {
        return Err(Error::DomainMismatch("codomain of the first functor is not the domain of the second".into()));
    }
    Ok(f.then_unchecked(g))
}

/// On-the-nose equality: same domain and codomain, identical maps.
pub fn functor_equal(f: &Functor, g: &Functor) -> bool {
    f.objects == g.objects && f.arrows == g.arrows && same_groupoid(&f.dom, &g.dom) && same_groupoid(&f.cod, &g.cod)
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        functor_equal(self, other)
    }
}

impl Eq for Functor {}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, y) in self.object_pairs() {
            m.entry(&x, &y);
        }
        for (x, y) in self.arrow_pairs() {
            m.entry(&x, &y);
        }
        m.finish()
    }
}
