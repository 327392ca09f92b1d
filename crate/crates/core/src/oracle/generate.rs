//! Seeded random instances: groupoids built from indiscrete components with
//! small cyclic vertex groups, functors between them, and fibrations built
//! only from constructions that carry a cleavage.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::functor::Functor;
use crate::groupoid::Groupoid;
use crate::path::path_object;
use crate::standard::{discrete, from_components, interval, terminal, z2, Component};
use crate::tribe::{compose_fibrations, product, pullback, NormalClovenFibration};

pub use crate::oracle::enumerate::random_functor;

/// Size limits for generated groupoids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SizeBounds {
    pub max_objects: usize,
    pub max_arrows: usize,
}

impl Default for SizeBounds {
    fn default() -> Self {
        SizeBounds { max_objects: 4, max_arrows: 12 }
    }
}

const VERTEX_GROUP_ORDERS: [usize; 3] = [1, 2, 3];

/// A disjoint union of one or two components, each an indiscrete groupoid
/// times a cyclic group of order 1, 2 or 3.
pub fn random_groupoid<R: Rng + ?Sized>(rng: &mut R, bounds: SizeBounds) -> Arc<Groupoid> {
    let wanted = rng.gen_range(1..=2);
    let mut components: Vec<Component> = Vec::new();
    let (mut objects, mut arrows) = (0usize, 0usize);
    while components.len() < wanted {
        let mut shapes = Vec::new();
        for n in 1..=bounds.max_objects.saturating_sub(objects) {
            for &k in &VERTEX_GROUP_ORDERS {
                if arrows + n * n * k <= bounds.max_arrows {
                    shapes.push((n, k));
                }
            }
        }
        let Some(&(n, k)) = shapes.choose(rng) else { break };
        let names = (objects..objects + n).map(object_name).collect();
        components.push(Component { objects: names, order: k });
        objects += n;
        arrows += n * n * k;
    }
    from_components(&components)
}

fn object_name(i: usize) -> String {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    if i < LETTERS.len() {
        (LETTERS[i] as char).to_string()
    } else {
        format!("o{i}")
    }
}

/// The ways a fibration into a given groupoid is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FibrationKind {
    Identity,
    /// First projection `B × 𝟚 → B`.
    ProductDiscrete,
    /// First projection `B × Z2 → B`.
    ProductZ2,
    /// Source end of the path object of a fibration out of `B`.
    PathSource,
    /// Base change of `Z2 × Z2 → Z2` or `Path(𝕀) → 𝕀` along a random functor.
    BaseChange,
    /// `B × 𝟚 × Z2 → B × 𝟚 → B`.
    Composite,
}

impl FibrationKind {
    pub const ALL: [FibrationKind; 6] = [
        FibrationKind::Identity,
        FibrationKind::ProductDiscrete,
        FibrationKind::ProductZ2,
        FibrationKind::PathSource,
        FibrationKind::BaseChange,
        FibrationKind::Composite,
    ];
}

/// A fibration with total space over `b` of the requested kind. For
/// `PathSource`, `out_of_b` is the fibration whose path object is used.
pub fn fibration_into<R: Rng + ?Sized>(
    rng: &mut R,
    b: &Arc<Groupoid>,
    kind: FibrationKind,
    out_of_b: &NormalClovenFibration,
) -> NormalClovenFibration {
    let pt = terminal();
    match kind {
        FibrationKind::Identity => NormalClovenFibration::identity(b),
        FibrationKind::ProductDiscrete => product(b, &discrete(2), &pt).proj0().clone(),
        FibrationKind::ProductZ2 => product(b, &z2(), &pt).proj0().clone(),
        FibrationKind::PathSource => {
            path_object(out_of_b).expect("generated fibrations are valid").source().clone()
        }
        FibrationKind::BaseChange => {
            let over = if rng.gen_bool(0.5) {
                let g = z2();
                product(&g, &g, &pt).proj0().clone()
            } else {
                let i = interval();
                path_object(&NormalClovenFibration::terminal(&i, &pt)).expect("valid").source().clone()
            };
            let h = random_functor(b, over.base(), rng).expect("target is non-empty");
            pullback(&h, &over).expect("legs share a codomain").proj0().clone()
        }
        FibrationKind::Composite => {
            let first = product(b, &discrete(2), &pt).proj0().clone();
            let second = product(first.total(), &z2(), &pt).proj0().clone();
            compose_fibrations(&first, &second).expect("composable")
        }
    }
}

/// A random functor between two freshly generated groupoids.
pub fn random_arrow<R: Rng + ?Sized>(rng: &mut R, bounds: SizeBounds) -> Functor {
    let x = random_groupoid(rng, bounds);
    let y = random_groupoid(rng, bounds);
    random_functor(&x, &y, rng).expect("generated groupoids are non-empty")
}
