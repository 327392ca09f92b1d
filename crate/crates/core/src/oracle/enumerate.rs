//! Exhaustive functor enumeration.
//!
//! On a connected component with root `r`, a functor is fixed by the image
//! `b` of `r`, the images of one chosen arrow `t_x: r → x` per object, and a
//! homomorphism from the vertex group at `r` into `hom(b, b)`. The search
//! backtracks over exactly these choices; every other arrow image is derived
//! as `F(t_y) ∘ φ(t_y⁻¹ α t_x) ∘ F(t_x)⁻¹`.

use std::ops::ControlFlow;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::functor::Functor;
use crate::groupoid::{Arr, Groupoid, Obj};

/// Hard limits on an exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_candidates: u64,
    pub max_time: Duration,
}

impl SearchBudget {
    pub fn new(max_candidates: u64, max_time: Duration) -> Result<Self> {
        if max_candidates == 0 || max_time.is_zero() {
            return Err(Error::PreconditionViolated("search budget must be positive".into()));
        }
        Ok(SearchBudget { max_candidates, max_time })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_candidates: 1_000_000, max_time: Duration::from_secs(60) }
    }
}

/// Counts search nodes against a budget.
pub(crate) struct Meter {
    budget: SearchBudget,
    start: Instant,
    used: u64,
}

impl Meter {
    pub fn new(budget: SearchBudget) -> Self {
        Meter { budget, start: Instant::now(), used: 0 }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.budget.max_candidates {
            return Err(Error::BudgetExceeded(format!("more than {} candidates", self.budget.max_candidates)));
        }
        if self.used % 1024 == 0 && self.start.elapsed() > self.budget.max_time {
            return Err(Error::BudgetExceeded(format!(
                "more than {:.1}s after {} candidates",
                self.budget.max_time.as_secs_f64(),
                self.used
            )));
        }
        Ok(())
    }
}

/// Restrictions on the image of each object and arrow.
pub(crate) struct Constraints<'a> {
    pub object: &'a dyn Fn(Obj, Obj) -> bool,
    pub arrow: &'a dyn Fn(Arr, Arr) -> bool,
}

impl Constraints<'static> {
    pub fn none() -> Self {
        Constraints { object: &|_, _| true, arrow: &|_, _| true }
    }
}

struct ComponentPlan {
    root: Obj,
    // (x, t_x) for every object other than the root
    tree: Vec<(Obj, Arr)>,
    // t_x for every object, indexed by object index (only component entries are meaningful)
    tree_arrow: Vec<Option<Arr>>,
    group: Vec<Arr>,
    // group index of `t_y⁻¹ α t_x` for each arrow of the component
    arrows: Vec<(Arr, usize)>,
    // arrows with the given object as an endpoint, with their group index
    incident: Vec<Vec<(Arr, usize)>>,
    by_group: Vec<Vec<Arr>>,
    mult: Vec<Vec<usize>>,
    identity: usize,
}

fn plan_component(x: &Groupoid, objects: &[Obj], c: &Constraints, b: &Groupoid) -> ComponentPlan {
    let root = *objects
        .iter()
        .min_by_key(|&&o| b.objects().filter(|&t| (c.object)(o, t)).count())
        .expect("components are non-empty");
    let mut tree_arrow = vec![None; x.object_count()];
    let mut tree = Vec::new();
    for &o in objects {
        let t = x.hom(root, o).next().expect("connected component");
        tree_arrow[o.index()] = Some(t);
        if o != root {
            tree.push((o, t));
        }
    }
    let group: Vec<Arr> = x.hom(root, root).collect();
    let index_of = |g: Arr| group.iter().position(|&h| h == g).expect("vertex group element");
    let mult = group.iter().map(|&g| group.iter().map(|&h| index_of(x.compose(g, h))).collect()).collect();
    let mut by_group = vec![Vec::new(); group.len()];
    let mut arrows = Vec::new();
    let mut incident = vec![Vec::new(); x.object_count()];
    for &o in objects {
        for alpha in x.out_arrows(o) {
            let tx = tree_arrow[o.index()].unwrap();
            let ty = tree_arrow[x.tgt(alpha).index()].unwrap();
            let g = index_of(x.compose(x.inverse(ty), x.compose(alpha, tx)));
            arrows.push((alpha, g));
            by_group[g].push(alpha);
            incident[o.index()].push((alpha, g));
            if x.tgt(alpha) != o {
                incident[x.tgt(alpha).index()].push((alpha, g));
            }
        }
    }
    let identity = index_of(x.identity(root));
    ComponentPlan { root, tree, tree_arrow, group, arrows, incident, by_group, mult, identity }
}

/// Size of a greedy generating set of the vertex group.
fn generator_count(plan: &ComponentPlan) -> usize {
    let n = plan.group.len();
    let mut reached = vec![false; n];
    reached[plan.identity] = true;
    let mut count = 0;
    for g in 0..n {
        if reached[g] {
            continue;
        }
        count += 1;
        let mut frontier = vec![g];
        reached[g] = true;
        // close under multiplication with everything reached so far
        while let Some(h) = frontier.pop() {
            for k in 0..n {
                if reached[k] {
                    for prod in [plan.mult[h][k], plan.mult[k][h]] {
                        if !reached[prod] {
                            reached[prod] = true;
                            frontier.push(prod);
                        }
                    }
                }
            }
        }
    }
    count
}

// One component's assignment: images of its objects and arrows.
#[derive(Clone)]
struct Partial {
    objects: Vec<(Obj, Obj)>,
    arrows: Vec<(Arr, Arr)>,
}

struct ComponentSearch<'a> {
    x: &'a Groupoid,
    b: &'a Groupoid,
    c: &'a Constraints<'a>,
    plan: &'a ComponentPlan,
    // images of tree arrows, indexed by object index; None until assigned
    image_tree: Vec<Option<Arr>>,
    phi: Vec<Option<Arr>>,
    trail: Vec<usize>,
}

impl ComponentSearch<'_> {
    fn image(&self, alpha: Arr, g: usize) -> Arr {
        let (x, b) = (self.x, self.b);
        let fx = self.image_tree[x.src(alpha).index()].unwrap();
        let fy = self.image_tree[x.tgt(alpha).index()].unwrap();
        b.compose(fy, b.compose(self.phi[g].unwrap(), b.inverse(fx)))
    }

    fn assigned(&self, alpha: Arr) -> bool {
        self.image_tree[self.x.src(alpha).index()].is_some() && self.image_tree[self.x.tgt(alpha).index()].is_some()
    }

    // Checks the arrows of class `g` whose endpoints are both placed.
    fn arrows_allowed(&self, g: usize) -> bool {
        self.plan.by_group[g]
            .iter()
            .all(|&alpha| !self.assigned(alpha) || (self.c.arrow)(alpha, self.image(alpha, g)))
    }

    // Checks the arrows at a freshly placed object against the other placed ones.
    fn incident_allowed(&self, o: Obj) -> bool {
        self.plan.incident[o.index()]
            .iter()
            .all(|&(alpha, g)| !self.assigned(alpha) || (self.c.arrow)(alpha, self.image(alpha, g)))
    }

    // Assigns φ(g) = h and closes under products; false on conflict.
    fn assign(&mut self, g: usize, h: Arr) -> bool {
        let mut queue = vec![(g, h)];
        while let Some((g, h)) = queue.pop() {
            match self.phi[g] {
                Some(old) if old != h => return false,
                Some(_) => continue,
                None => {}
            }
            self.phi[g] = Some(h);
            self.trail.push(g);
            if !self.arrows_allowed(g) {
                return false;
            }
            for k in 0..self.plan.group.len() {
                if let Some(hk) = self.phi[k] {
                    queue.push((self.plan.mult[g][k], self.b.compose(h, hk)));
                    queue.push((self.plan.mult[k][g], self.b.compose(hk, h)));
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let g = self.trail.pop().unwrap();
            self.phi[g] = None;
        }
    }

    // φ is fixed first so that every placed object prunes the arrows at it.
    fn group_step(&mut self, b0: Obj, meter: &mut Meter, out: &mut Vec<Partial>) -> Result<()> {
        let Some(g) = self.phi.iter().position(Option::is_none) else {
            return self.tree_step(0, b0, meter, out);
        };
        for h in self.b.hom(b0, b0) {
            meter.tick()?;
            let mark = self.trail.len();
            if self.assign(g, h) {
                self.group_step(b0, meter, out)?;
            }
            self.undo(mark);
        }
        Ok(())
    }

    fn tree_step(&mut self, i: usize, b0: Obj, meter: &mut Meter, out: &mut Vec<Partial>) -> Result<()> {
        if i == self.plan.tree.len() {
            out.push(self.emit());
            return Ok(());
        }
        let (o, t) = self.plan.tree[i];
        for cand in self.b.out_arrows(b0) {
            if !(self.c.object)(o, self.b.tgt(cand)) || !(self.c.arrow)(t, cand) {
                continue;
            }
            meter.tick()?;
            self.image_tree[o.index()] = Some(cand);
            if self.incident_allowed(o) {
                self.tree_step(i + 1, b0, meter, out)?;
            }
        }
        self.image_tree[o.index()] = None;
        Ok(())
    }

    fn emit(&self) -> Partial {
        let objects = self
            .plan
            .tree_arrow
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_some())
            .map(|(i, _)| (Obj::new(i), self.b.tgt(self.image_tree[i].unwrap())))
            .collect();
        let arrows = self.plan.arrows.iter().map(|&(alpha, g)| (alpha, self.image(alpha, g))).collect();
        Partial { objects, arrows }
    }
}

fn component_solutions(
    x: &Groupoid,
    b: &Groupoid,
    c: &Constraints,
    plan: &ComponentPlan,
    meter: &mut Meter,
) -> Result<Vec<Partial>> {
    let mut out = Vec::new();
    let mut search = ComponentSearch {
        x,
        b,
        c,
        plan,
        image_tree: vec![None; x.object_count()],
        phi: vec![None; plan.group.len()],
        trail: Vec::new(),
    };
    let root = plan.root;
    for b0 in b.objects() {
        if !(c.object)(root, b0) {
            continue;
        }
        meter.tick()?;
        search.image_tree[root.index()] = Some(b.identity(b0));
        let mark = search.trail.len();
        if search.assign(plan.identity, b.identity(b0)) {
            search.group_step(b0, meter, &mut out)?;
        }
        search.undo(mark);
    }
    Ok(out)
}

/// Visits every functor `X → B` meeting the constraints. Stops early when
/// `visit` breaks.
pub(crate) fn search_functors(
    x: &Arc<Groupoid>,
    b: &Arc<Groupoid>,
    c: &Constraints,
    meter: &mut Meter,
    visit: &mut dyn FnMut(Functor) -> ControlFlow<()>,
) -> Result<()> {
    let mut per_component = Vec::new();
    for comp in x.components() {
        let plan = plan_component(x, &comp, c, b);
        let sols = component_solutions(x, b, c, &plan, meter)?;
        if sols.is_empty() {
            return Ok(());
        }
        per_component.push(sols);
    }
    let mut objects = vec![Obj::new(0); x.object_count()];
    let mut arrows = vec![Arr::new(0); x.arrow_count()];
    let mut choice = vec![0usize; per_component.len()];
    loop {
        meter.tick()?;
        for (k, &i) in choice.iter().enumerate() {
            let part = &per_component[k][i];
            for &(o, t) in &part.objects {
                objects[o.index()] = t;
            }
            for &(a, t) in &part.arrows {
                arrows[a.index()] = t;
            }
        }
        let f = Functor::from_parts(x.clone(), b.clone(), objects.clone(), arrows.clone());
        if visit(f).is_break() {
            return Ok(());
        }
        // odometer over component choices
        let mut k = choice.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < per_component[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Collects and canonically sorts every functor meeting the constraints.
pub(crate) fn collect_functors(
    x: &Arc<Groupoid>,
    b: &Arc<Groupoid>,
    c: &Constraints,
    budget: SearchBudget,
) -> Result<Vec<Functor>> {
    let mut meter = Meter::new(budget);
    let mut out = Vec::new();
    search_functors(x, b, c, &mut meter, &mut |f| {
        out.push(f);
        ControlFlow::Continue(())
    })?;
    sort_canonically(&mut out);
    Ok(out)
}

pub(crate) fn sort_canonically(fs: &mut [Functor]) {
    fs.sort_by(|f, g| (f.object_map(), f.arrow_map()).cmp(&(g.object_map(), g.arrow_map())));
}

/// Number of candidate assignments (root image, tree-arrow images and
/// images of a generating set of each vertex group) the search may visit.
pub(crate) fn search_space(x: &Groupoid, b: &Groupoid, c: &Constraints) -> f64 {
    let mut total = 1.0f64;
    for comp in x.components() {
        let plan = plan_component(x, &comp, c, b);
        let gens = generator_count(&plan) as i32;
        let mut sum = 0.0;
        for b0 in b.objects().filter(|&b0| (c.object)(plan.root, b0)) {
            let mut prod = (b.hom(b0, b0).len() as f64).powi(gens);
            for &(o, t) in &plan.tree {
                prod *= b
                    .out_arrows(b0)
                    .filter(|&cand| (c.object)(o, b.tgt(cand)) && (c.arrow)(t, cand))
                    .count() as f64;
            }
            sum += prod;
        }
        total *= sum;
    }
    total
}

/// Every functor `X → B`, in canonical order.
pub fn enumerate_functors(x: &Arc<Groupoid>, b: &Arc<Groupoid>, budget: SearchBudget) -> Result<Vec<Functor>> {
    collect_functors(x, b, &Constraints::none(), budget)
}

/// Every functor `X → B` by plain backtracking over all object and arrow
/// images. Only for cross-checking at tiny sizes.
pub fn enumerate_functors_naive(x: &Arc<Groupoid>, b: &Arc<Groupoid>, budget: SearchBudget) -> Result<Vec<Functor>> {
    let mut meter = Meter::new(budget);
    let mut out = Vec::new();
    let mut objects = vec![Obj::new(0); x.object_count()];
    naive_objects(x, b, 0, &mut objects, &mut meter, &mut out)?;
    sort_canonically(&mut out);
    Ok(out)
}

fn naive_objects(
    x: &Arc<Groupoid>,
    b: &Arc<Groupoid>,
    i: usize,
    objects: &mut Vec<Obj>,
    meter: &mut Meter,
    out: &mut Vec<Functor>,
) -> Result<()> {
    if i == objects.len() {
        let mut arrows = vec![Arr::new(0); x.arrow_count()];
        return naive_arrows(x, b, 0, objects, &mut arrows, meter, out);
    }
    for t in b.objects() {
        meter.tick()?;
        objects[i] = t;
        naive_objects(x, b, i + 1, objects, meter, out)?;
    }
    Ok(())
}

fn naive_arrows(
    x: &Arc<Groupoid>,
    b: &Arc<Groupoid>,
    i: usize,
    objects: &[Obj],
    arrows: &mut Vec<Arr>,
    meter: &mut Meter,
    out: &mut Vec<Functor>,
) -> Result<()> {
    if i == arrows.len() {
        let f = Functor::from_parts(x.clone(), b.clone(), objects.to_vec(), arrows.clone());
        if f.validate().is_ok() {
            out.push(f);
        }
        return Ok(());
    }
    let a = Arr::new(i);
    for t in b.hom(objects[x.src(a).index()], objects[x.tgt(a).index()]) {
        meter.tick()?;
        arrows[i] = t;
        naive_arrows(x, b, i + 1, objects, arrows, meter, out)?;
    }
    Ok(())
}

/// A random functor `X → B`: random root and tree-arrow images, then a
/// vertex-group homomorphism found by randomized backtracking. The trivial
/// homomorphism always exists, so this never fails on non-empty `B`.
pub fn random_functor<R: Rng + ?Sized>(x: &Arc<Groupoid>, b: &Arc<Groupoid>, rng: &mut R) -> Option<Functor> {
    if b.is_empty() && !x.is_empty() {
        return None;
    }
    let c = Constraints::none();
    let mut objects = vec![Obj::new(0); x.object_count()];
    let mut arrows = vec![Arr::new(0); x.arrow_count()];
    for comp in x.components() {
        let plan = plan_component(x, &comp, &c, b);
        let mut search = ComponentSearch {
            x,
            b,
            c: &c,
            plan: &plan,
            image_tree: vec![None; x.object_count()],
            phi: vec![None; plan.group.len()],
            trail: Vec::new(),
        };
        let b0 = Obj::new(rng.gen_range(0..b.object_count()));
        search.image_tree[plan.root.index()] = Some(b.identity(b0));
        for &(o, _) in &plan.tree {
            let out: Vec<Arr> = b.out_arrows(b0).collect();
            search.image_tree[o.index()] = out.choose(rng).copied();
        }
        let ok = search.assign(plan.identity, b.identity(b0)) && search.random_group(b0, rng);
        debug_assert!(ok, "the trivial homomorphism is always available");
        let part = search.emit();
        for (o, t) in part.objects {
            objects[o.index()] = t;
        }
        for (a, t) in part.arrows {
            arrows[a.index()] = t;
        }
    }
    Some(Functor::from_parts(x.clone(), b.clone(), objects, arrows))
}

impl ComponentSearch<'_> {
    fn random_group<R: Rng + ?Sized>(&mut self, b0: Obj, rng: &mut R) -> bool {
        let Some(g) = self.phi.iter().position(Option::is_none) else { return true };
        let mut candidates: Vec<Arr> = self.b.hom(b0, b0).collect();
        candidates.shuffle(rng);
        for h in candidates {
            let mark = self.trail.len();
            if self.assign(g, h) && self.random_group(b0, rng) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{cyclic, discrete, from_components, interval, terminal, z2, Component};

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn hand_counts() {
        assert_eq!(enumerate_functors(&terminal(), &z2(), budget()).unwrap().len(), 1);
        assert_eq!(enumerate_functors(&z2(), &z2(), budget()).unwrap().len(), 2);
        assert_eq!(enumerate_functors(&discrete(2), &interval(), budget()).unwrap().len(), 4);
    }

    #[test]
    fn agrees_with_naive_enumeration() {
        let small = [
            terminal(),
            z2(),
            interval(),
            discrete(2),
            cyclic(3, "c"),
            from_components(&[Component { objects: vec!["a".into(), "b".into()], order: 2 }]),
            from_components(&[
                Component { objects: vec!["a".into()], order: 3 },
                Component { objects: vec!["b".into(), "c".into()], order: 1 },
            ]),
        ];
        for x in &small {
            for b in &small {
                let fast = enumerate_functors(x, b, budget()).unwrap();
                let slow = enumerate_functors_naive(x, b, budget()).unwrap();
                assert_eq!(fast, slow, "{x:?} -> {b:?}");
            }
        }
    }

    #[test]
    fn z3_into_z2_is_trivial_only() {
        assert_eq!(enumerate_functors(&cyclic(3, "c"), &z2(), budget()).unwrap().len(), 1);
    }

    #[test]
    fn budget_is_a_hard_error() {
        let tight = SearchBudget::new(3, Duration::from_secs(10)).unwrap();
        let err = enumerate_functors(&discrete(2), &interval(), tight).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)));
        assert!(SearchBudget::new(0, Duration::from_secs(1)).is_err());
    }

    #[test]
    fn generator_counts() {
        let c = Constraints::none();
        let z3 = cyclic(3, "c");
        let plan = plan_component(&z3, &[Obj::new(0)], &c, &z3);
        assert_eq!(generator_count(&plan), 1);
        let pt = terminal();
        let plan = plan_component(&pt, &[Obj::new(0)], &c, &pt);
        assert_eq!(generator_count(&plan), 0);
        assert_eq!(search_space(&z2(), &z2(), &c), 2.0);
    }
}
