//! Finite groupoids stored as full composition tables.
//!
//! Objects and arrows are kept in canonical order: objects sorted by name,
//! arrows sorted by `(source, target, name)`. Dense handles ([`Obj`], [`Arr`])
//! index into that order, so "the first arrow" of any set is well defined.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;

use crate::error::{Error, GroupoidViolation, Result};
use crate::name::Name;

/// Dense handle for an object of a particular groupoid.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Obj(u32);

/// Dense handle for an arrow of a particular groupoid.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Arr(u32);

impl Obj {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn new(i: usize) -> Self {
        Obj(u32::try_from(i).expect("object count exceeds u32"))
    }
}

impl Arr {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn new(i: usize) -> Self {
        Arr(u32::try_from(i).expect("arrow count exceeds u32"))
    }
}

/// A validated finite groupoid.
#[derive(Clone)]
pub struct Groupoid {
    objects: Vec<Name>,
    arrow_names: Vec<Name>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    identity: Vec<Arr>,
    inverse: Vec<Arr>,
    // arrows out of object `o` occupy `out_start[o]..out_start[o + 1]`
    out_start: Vec<u32>,
    // `g ∘ f` lives at `comp[comp_offset[f] + (g - out_start[src g])]`
    comp_offset: Vec<usize>,
    comp: Vec<Arr>,
    obj_index: HashMap<Name, Obj>,
    arr_index: HashMap<Name, Arr>,
}

impl Groupoid {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrow_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = Obj> + DoubleEndedIterator + Clone {
        (0..self.objects.len()).map(Obj::new)
    }

    pub fn arrows(&self) -> impl ExactSizeIterator<Item = Arr> + DoubleEndedIterator + Clone {
        (0..self.arrow_names.len()).map(Arr::new)
    }

    pub fn obj_name(&self, o: Obj) -> &Name {
        &self.objects[o.index()]
    }

    pub fn arr_name(&self, a: Arr) -> &Name {
        &self.arrow_names[a.index()]
    }

    pub fn src(&self, a: Arr) -> Obj {
        self.src[a.index()]
    }

    pub fn tgt(&self, a: Arr) -> Obj {
        self.tgt[a.index()]
    }

    pub fn identity(&self, o: Obj) -> Arr {
        self.identity[o.index()]
    }

    pub fn inverse(&self, a: Arr) -> Arr {
        self.inverse[a.index()]
    }

    pub fn is_identity(&self, a: Arr) -> bool {
        self.identity[self.src(a).index()] == a
    }

    fn out_range(&self, o: Obj) -> Range<usize> {
        self.out_start[o.index()] as usize..self.out_start[o.index() + 1] as usize
    }

    /// Arrows with source `o`, in canonical order.
    pub fn out_arrows(&self, o: Obj) -> impl ExactSizeIterator<Item = Arr> + DoubleEndedIterator + Clone {
        self.out_range(o).map(Arr::new)
    }

    pub fn out_degree(&self, o: Obj) -> usize {
        self.out_range(o).len()
    }

    /// Position of `a` among the arrows leaving its source.
    pub fn out_position(&self, a: Arr) -> usize {
        a.index() - self.out_start[self.src(a).index()] as usize
    }

    /// The hom-set `hom(a, b)`, in canonical order.
    pub fn hom(&self, a: Obj, b: Obj) -> impl ExactSizeIterator<Item = Arr> + DoubleEndedIterator + Clone {
        let range = self.out_range(a);
        let tgts = &self.tgt[range.clone()];
        let lo = tgts.partition_point(|t| *t < b);
        let hi = tgts.partition_point(|t| *t <= b);
        (range.start + lo..range.start + hi).map(Arr::new)
    }

    /// `g ∘ f`. Panics unless `tgt(f) = src(g)`.
    pub fn compose(&self, g: Arr, f: Arr) -> Arr {
        self.try_compose(g, f)
            .unwrap_or_else(|| panic!("arrows {} and {} are not composable", self.arr_name(f), self.arr_name(g)))
    }

    pub fn try_compose(&self, g: Arr, f: Arr) -> Option<Arr> {
        if self.tgt(f) != self.src(g) {
            return None;
        }
        Some(self.comp[self.comp_offset[f.index()] + self.out_position(g)])
    }

    pub fn find_object(&self, name: &Name) -> Option<Obj> {
        self.obj_index.get(name).copied()
    }

    pub fn find_arrow(&self, name: &Name) -> Option<Arr> {
        self.arr_index.get(name).copied()
    }

    pub fn object_named(&self, name: &Name) -> Result<Obj> {
        self.find_object(name).ok_or_else(|| Error::UnknownObject(name.clone()))
    }

    pub fn arrow_named(&self, name: &Name) -> Result<Arr> {
        self.find_arrow(name).ok_or_else(|| Error::UnknownArrow(name.clone()))
    }

    /// Number of pairs `(f, g)` with `tgt(f) = src(g)`.
    pub fn composable_pair_count(&self) -> usize {
        self.comp.len()
    }

    /// Connected components, each listed in canonical object order.
    pub fn components(&self) -> Vec<Vec<Obj>> {
        let mut seen = vec![false; self.object_count()];
        let mut out = Vec::new();
        for root in self.objects() {
            if seen[root.index()] {
                continue;
            }
            // in a groupoid every object of the component is reachable in one step
            let mut comp: Vec<Obj> = self.out_arrows(root).map(|a| self.tgt(a)).collect();
            comp.dedup();
            for o in &comp {
                seen[o.index()] = true;
            }
            out.push(comp);
        }
        out
    }

    /// Re-checks the identity, inverse and associativity laws on the stored
    /// tables. Associativity is checked over every composable triple.
    pub fn check_laws(&self) -> Vec<GroupoidViolation> {
        let mut violations = Vec::new();
        for o in self.objects() {
            let id = self.identity(o);
            if self.src(id) != o || self.tgt(id) != o {
                violations.push(GroupoidViolation::BadEndpoints {
                    element: self.arr_name(id).clone(),
                    detail: format!("identity of {} is not a loop at it", self.obj_name(o)),
                });
            }
        }
        if !violations.is_empty() {
            return violations;
        }
        for f in self.arrows() {
            let (a, b) = (self.src(f), self.tgt(f));
            if self.compose(f, self.identity(a)) != f || self.compose(self.identity(b), f) != f {
                violations.push(GroupoidViolation::IdentityLaw(self.arr_name(f).clone()));
            }
            let inv = self.inverse(f);
            if self.src(inv) != b || self.tgt(inv) != a {
                violations.push(GroupoidViolation::BadEndpoints {
                    element: self.arr_name(inv).clone(),
                    detail: format!("stored inverse of {} has the wrong endpoints", self.arr_name(f)),
                });
                continue;
            }
            if self.compose(inv, f) != self.identity(a) || self.compose(f, inv) != self.identity(b) {
                violations.push(GroupoidViolation::InverseLaw {
                    arrow: self.arr_name(f).clone(),
                    inverse: self.arr_name(inv).clone(),
                });
            }
        }
        for f in self.arrows() {
            for g in self.out_arrows(self.tgt(f)) {
                let gf = self.compose(g, f);
                for h in self.out_arrows(self.tgt(g)) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        violations.push(GroupoidViolation::NonAssociative {
                            f: self.arr_name(f).clone(),
                            g: self.arr_name(g).clone(),
                            h: self.arr_name(h).clone(),
                        });
                    }
                }
            }
        }
        violations
    }

    /// The name-level tables of this groupoid, in canonical order.
    pub fn to_spec(&self) -> GroupoidSpec {
        let mut compose = Vec::with_capacity(self.comp.len());
        for f in self.arrows() {
            for g in self.out_arrows(self.tgt(f)) {
                compose.push((
                    self.arr_name(f).clone(),
                    self.arr_name(g).clone(),
                    self.arr_name(self.compose(g, f)).clone(),
                ));
            }
        }
        GroupoidSpec {
            objects: self.objects.clone(),
            arrows: self
                .arrows()
                .map(|a| {
                    (
                        self.arr_name(a).clone(),
                        self.obj_name(self.src(a)).clone(),
                        self.obj_name(self.tgt(a)).clone(),
                    )
                })
                .collect(),
            identities: self
                .objects()
                .map(|o| (self.obj_name(o).clone(), self.arr_name(self.identity(o)).clone()))
                .collect(),
            compose,
            inverses: self
                .arrows()
                .map(|a| (self.arr_name(a).clone(), self.arr_name(self.inverse(a)).clone()))
                .collect(),
        }
    }
}

impl PartialEq for Groupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.arrow_names == other.arrow_names
            && self.src == other.src
            && self.tgt == other.tgt
            && self.identity == other.identity
            && self.inverse == other.inverse
            && self.comp == other.comp
    }
}

impl Eq for Groupoid {}

impl fmt::Debug for Groupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Groupoid")
            .field("objects", &self.objects)
            .field("arrows", &self.arrow_names)
            .finish()
    }
}

/// Unsorted construction data for derived groupoids.
///
/// Indices are positions in `objects` / `arrows`; [`RawGroupoid::build`]
/// sorts everything into canonical order and reports where each raw element
/// ended up.
pub(crate) struct RawGroupoid {
    pub objects: Vec<Name>,
    pub arrows: Vec<(Name, usize, usize)>,
    pub identity: Vec<usize>,
    pub inverse: Vec<usize>,
}

pub(crate) struct Built {
    pub groupoid: Groupoid,
    pub obj_map: Vec<Obj>,
    pub arr_map: Vec<Arr>,
}

impl RawGroupoid {
    pub fn with_capacity(objects: usize, arrows: usize) -> Self {
        RawGroupoid {
            objects: Vec::with_capacity(objects),
            arrows: Vec::with_capacity(arrows),
            identity: Vec::with_capacity(objects),
            inverse: Vec::with_capacity(arrows),
        }
    }

    /// `compose(f, g)` must return the raw index of `g ∘ f`.
    pub fn build(self, mut compose: impl FnMut(usize, usize) -> usize) -> Built {
        let RawGroupoid { objects, arrows, identity, inverse } = self;
        let n_obj = objects.len();
        let n_arr = arrows.len();

        let mut obj_order: Vec<usize> = (0..n_obj).collect();
        obj_order.sort_by(|&x, &y| objects[x].cmp(&objects[y]));
        let mut obj_map = vec![Obj(0); n_obj];
        for (pos, &raw) in obj_order.iter().enumerate() {
            obj_map[raw] = Obj::new(pos);
        }

        let mut arr_order: Vec<usize> = (0..n_arr).collect();
        arr_order.sort_by(|&x, &y| {
            let (nx, sx, tx) = &arrows[x];
            let (ny, sy, ty) = &arrows[y];
            (obj_map[*sx], obj_map[*tx], nx).cmp(&(obj_map[*sy], obj_map[*ty], ny))
        });
        let mut arr_map = vec![Arr(0); n_arr];
        for (pos, &raw) in arr_order.iter().enumerate() {
            arr_map[raw] = Arr::new(pos);
        }

        let src: Vec<Obj> = arr_order.iter().map(|&r| obj_map[arrows[r].1]).collect();
        let tgt: Vec<Obj> = arr_order.iter().map(|&r| obj_map[arrows[r].2]).collect();
        let mut out_start = vec![0u32; n_obj + 1];
        for s in &src {
            out_start[s.index() + 1] += 1;
        }
        for i in 0..n_obj {
            out_start[i + 1] += out_start[i];
        }

        let mut comp_offset = Vec::with_capacity(n_arr);
        let mut total = 0usize;
        for t in &tgt {
            comp_offset.push(total);
            total += (out_start[t.index() + 1] - out_start[t.index()]) as usize;
        }
        let mut comp = Vec::with_capacity(total);
        for (pos, &raw_f) in arr_order.iter().enumerate() {
            let t = tgt[pos].index();
            for g in out_start[t] as usize..out_start[t + 1] as usize {
                comp.push(arr_map[compose(raw_f, arr_order[g])]);
            }
        }

        let mut identity_sorted = vec![Arr(0); n_obj];
        for (raw, &id) in identity.iter().enumerate() {
            identity_sorted[obj_map[raw].index()] = arr_map[id];
        }
        let mut inverse_sorted = vec![Arr(0); n_arr];
        for (raw, &inv) in inverse.iter().enumerate() {
            inverse_sorted[arr_map[raw].index()] = arr_map[inv];
        }

        let objects_sorted: Vec<Name> = obj_order.iter().map(|&r| objects[r].clone()).collect();
        let arrow_names: Vec<Name> = arr_order.iter().map(|&r| arrows[r].0.clone()).collect();
        let obj_index: HashMap<Name, Obj> =
            objects_sorted.iter().enumerate().map(|(i, n)| (n.clone(), Obj::new(i))).collect();
        let arr_index: HashMap<Name, Arr> =
            arrow_names.iter().enumerate().map(|(i, n)| (n.clone(), Arr::new(i))).collect();
        debug_assert_eq!(obj_index.len(), n_obj, "duplicate object names in derived groupoid");
        debug_assert_eq!(arr_index.len(), n_arr, "duplicate arrow names in derived groupoid");

        Built {
            groupoid: Groupoid {
                objects: objects_sorted,
                arrow_names,
                src,
                tgt,
                identity: identity_sorted,
                inverse: inverse_sorted,
                out_start,
                comp_offset,
                comp,
                obj_index,
                arr_index,
            },
            obj_map,
            arr_map,
        }
    }
}

/// Name-level description of a groupoid, as read from a document.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupoidSpec {
    pub objects: Vec<Name>,
    /// `(arrow, source, target)`
    pub arrows: Vec<(Name, Name, Name)>,
    /// `(object, identity arrow)`
    pub identities: Vec<(Name, Name)>,
    /// `(f, g, g ∘ f)`
    pub compose: Vec<(Name, Name, Name)>,
    /// `(arrow, inverse)`
    pub inverses: Vec<(Name, Name)>,
}

/// Checks a name-level description and, if every law holds, returns the
/// groupoid. Otherwise every violation found is reported.
pub fn validate_groupoid(spec: &GroupoidSpec) -> std::result::Result<Groupoid, Vec<GroupoidViolation>> {
    let mut violations = Vec::new();

    let mut obj_ix: HashMap<&Name, usize> = HashMap::new();
    for (i, o) in spec.objects.iter().enumerate() {
        if obj_ix.insert(o, i).is_some() {
            violations.push(GroupoidViolation::DuplicateObject(o.clone()));
        }
    }

    let mut arr_ix: HashMap<&Name, usize> = HashMap::new();
    let mut ends: Vec<Option<(usize, usize)>> = Vec::with_capacity(spec.arrows.len());
    for (i, (a, s, t)) in spec.arrows.iter().enumerate() {
        if arr_ix.insert(a, i).is_some() {
            violations.push(GroupoidViolation::DuplicateArrow(a.clone()));
        }
        match (obj_ix.get(s), obj_ix.get(t)) {
            (Some(&s), Some(&t)) => ends.push(Some((s, t))),
            _ => {
                violations.push(GroupoidViolation::BadEndpoints {
                    element: a.clone(),
                    detail: format!("unknown endpoint among {s}, {t}"),
                });
                ends.push(None);
            }
        }
    }
    let arrow_of = |n: &Name, violations: &mut Vec<GroupoidViolation>| -> Option<usize> {
        let found = arr_ix.get(n).copied();
        if found.is_none() {
            violations.push(GroupoidViolation::BadEndpoints {
                element: n.clone(),
                detail: "not a declared arrow".into(),
            });
        }
        found
    };

    let mut identity: Vec<Option<usize>> = vec![None; spec.objects.len()];
    for (o, a) in &spec.identities {
        let Some(&oi) = obj_ix.get(o) else {
            violations.push(GroupoidViolation::BadEndpoints {
                element: o.clone(),
                detail: "identity given for an undeclared object".into(),
            });
            continue;
        };
        let Some(ai) = arrow_of(a, &mut violations) else { continue };
        if ends[ai] != Some((oi, oi)) {
            violations.push(GroupoidViolation::BadEndpoints {
                element: a.clone(),
                detail: format!("identity of {o} must be a loop at {o}"),
            });
            continue;
        }
        match identity[oi] {
            Some(prev) if prev != ai => violations.push(GroupoidViolation::Conflicting(o.clone())),
            _ => identity[oi] = Some(ai),
        }
    }
    for (i, id) in identity.iter().enumerate() {
        if id.is_none() {
            violations.push(GroupoidViolation::MissingIdentity(spec.objects[i].clone()));
        }
    }

    let mut inverse: Vec<Option<usize>> = vec![None; spec.arrows.len()];
    for (a, b) in &spec.inverses {
        let (Some(ai), Some(bi)) = (arrow_of(a, &mut violations), arrow_of(b, &mut violations)) else {
            continue;
        };
        match (ends[ai], ends[bi]) {
            (Some((s, t)), Some((s2, t2))) if s == t2 && t == s2 => {}
            _ => {
                violations.push(GroupoidViolation::BadEndpoints {
                    element: b.clone(),
                    detail: format!("cannot be the inverse of {a}"),
                });
                continue;
            }
        }
        match inverse[ai] {
            Some(prev) if prev != bi => violations.push(GroupoidViolation::Conflicting(a.clone())),
            _ => inverse[ai] = Some(bi),
        }
    }
    for (i, inv) in inverse.iter().enumerate() {
        if inv.is_none() {
            violations.push(GroupoidViolation::MissingInverse(spec.arrows[i].0.clone()));
        }
    }

    let mut table: HashMap<(usize, usize), usize> = HashMap::with_capacity(spec.compose.len());
    for (f, g, h) in &spec.compose {
        let (Some(fi), Some(gi), Some(hi)) = (
            arrow_of(f, &mut violations),
            arrow_of(g, &mut violations),
            arrow_of(h, &mut violations),
        ) else {
            continue;
        };
        let (Some((fs, ft)), Some((gs, gt)), Some((hs, ht))) = (ends[fi], ends[gi], ends[hi]) else {
            continue;
        };
        if ft != gs {
            violations.push(GroupoidViolation::BadEndpoints {
                element: Name::pair(f, g),
                detail: "composite given for a non-composable pair".into(),
            });
            continue;
        }
        if hs != fs || ht != gt {
            violations.push(GroupoidViolation::BadEndpoints {
                element: h.clone(),
                detail: format!("wrong endpoints for the composite of {g} after {f}"),
            });
            continue;
        }
        match table.insert((fi, gi), hi) {
            Some(prev) if prev != hi => violations.push(GroupoidViolation::Conflicting(Name::pair(f, g))),
            _ => {}
        }
    }
    let mut by_src: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, e) in ends.iter().enumerate() {
        if let Some((s, _)) = e {
            by_src.entry(*s).or_default().push(i);
        }
    }
    for (fi, e) in ends.iter().enumerate() {
        let Some((_, ft)) = e else { continue };
        for &gi in by_src.get(ft).map(Vec::as_slice).unwrap_or(&[]) {
            if !table.contains_key(&(fi, gi)) {
                violations.push(GroupoidViolation::MissingComposite {
                    first: spec.arrows[fi].0.clone(),
                    second: spec.arrows[gi].0.clone(),
                });
            }
        }
    }

    if !violations.is_empty() {
        return Err(violations);
    }

    let raw = RawGroupoid {
        objects: spec.objects.clone(),
        arrows: spec
            .arrows
            .iter()
            .zip(&ends)
            .map(|((a, _, _), e)| {
                let (s, t) = e.expect("endpoints checked");
                (a.clone(), s, t)
            })
            .collect(),
        identity: identity.into_iter().map(|i| i.expect("identities checked")).collect(),
        inverse: inverse.into_iter().map(|i| i.expect("inverses checked")).collect(),
    };
    let groupoid = raw.build(|f, g| table[&(f, g)]).groupoid;
    let laws = groupoid.check_laws();
    if laws.is_empty() {
        Ok(groupoid)
    } else {
        Err(laws)
    }
}

impl TryFrom<&GroupoidSpec> for Groupoid {
    type Error = Error;

    fn try_from(spec: &GroupoidSpec) -> Result<Self> {
        validate_groupoid(spec).map_err(Error::Groupoid)
    }
}

/// Checks that `hom(a, b)` is in bijection with `hom(a, a)` for every pair of
/// connected objects, by precomposition with a fixed arrow `a → b`.
pub fn hom_sets_are_torsors(g: &Groupoid) -> bool {
    let mut total = 0;
    for a in g.objects() {
        for b in g.objects() {
            let hom: Vec<Arr> = g.hom(a, b).collect();
            total += hom.len();
            let Some(&fixed) = hom.first() else { continue };
            let image: HashSet<Arr> = g.hom(a, a).map(|e| g.compose(fixed, e)).collect();
            if image.len() != hom.len() || !hom.iter().all(|h| image.contains(h)) {
                return false;
            }
        }
    }
    total == g.arrow_count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_spec() -> GroupoidSpec {
        let n = |s: &str| Name::atom(s);
        GroupoidSpec {
            objects: vec![n("•")],
            arrows: vec![(n("1"), n("•"), n("•")), (n("s"), n("•"), n("•"))],
            identities: vec![(n("•"), n("1"))],
            compose: vec![
                (n("1"), n("1"), n("1")),
                (n("1"), n("s"), n("s")),
                (n("s"), n("1"), n("s")),
                (n("s"), n("s"), n("1")),
            ],
            inverses: vec![(n("1"), n("1")), (n("s"), n("s"))],
        }
    }

    #[test]
    fn z2_is_valid() {
        let g = validate_groupoid(&z2_spec()).unwrap();
        assert_eq!(g.object_count(), 1);
        assert_eq!(g.arrow_count(), 2);
        let s = g.find_arrow(&"s".into()).unwrap();
        assert_eq!(g.compose(s, s), g.identity(g.src(s)));
        assert!(hom_sets_are_torsors(&g));
    }

    #[test]
    fn missing_inverse_is_named() {
        let mut spec = z2_spec();
        spec.inverses.retain(|(a, _)| a.as_atom() != Some("s"));
        let err = validate_groupoid(&spec).unwrap_err();
        assert_eq!(err, vec![GroupoidViolation::MissingInverse("s".into())]);
    }

    #[test]
    fn missing_identity_and_composite() {
        let mut spec = z2_spec();
        spec.identities.clear();
        spec.compose.pop();
        let err = validate_groupoid(&spec).unwrap_err();
        assert!(err.contains(&GroupoidViolation::MissingIdentity("•".into())));
        assert!(err.contains(&GroupoidViolation::MissingComposite { first: "s".into(), second: "s".into() }));
    }

    #[test]
    fn wrong_table_is_caught_by_laws() {
        let mut spec = z2_spec();
        // s ∘ s = s makes s an idempotent non-identity: inverse law fails
        spec.compose[3].2 = "s".into();
        let err = validate_groupoid(&spec).unwrap_err();
        assert!(err.iter().any(|v| matches!(v, GroupoidViolation::InverseLaw { .. })));
    }

    #[test]
    fn non_associative_table_is_reported() {
        let n = |s: &str| Name::atom(s);
        let els = ["e", "a", "b"];
        let mut compose = Vec::new();
        for (i, f) in els.iter().enumerate() {
            for (j, g) in els.iter().enumerate() {
                compose.push((n(f), n(g), n(els[(i + j) % 3])));
            }
        }
        // b∘b := e keeps the identity and inverse laws intact
        compose[8].2 = n("e");
        let spec = GroupoidSpec {
            objects: vec![n("*")],
            arrows: els.iter().map(|e| (n(e), n("*"), n("*"))).collect(),
            identities: vec![(n("*"), n("e"))],
            compose,
            inverses: vec![(n("e"), n("e")), (n("a"), n("b")), (n("b"), n("a"))],
        };
        let err = validate_groupoid(&spec).unwrap_err();
        assert!(err.iter().any(|v| matches!(v, GroupoidViolation::NonAssociative { .. })));
    }

    #[test]
    fn bad_endpoints() {
        let mut spec = z2_spec();
        spec.arrows.push(("t".into(), "•".into(), "nowhere".into()));
        let err = validate_groupoid(&spec).unwrap_err();
        assert!(matches!(&err[0], GroupoidViolation::BadEndpoints { element, .. } if element.as_atom() == Some("t")));
    }

    #[test]
    fn spec_round_trip() {
        let g = validate_groupoid(&z2_spec()).unwrap();
        let again = validate_groupoid(&g.to_spec()).unwrap();
        assert_eq!(g, again);
    }
}
