//! Small named groupoids used throughout the tests, the generator and the CLI.

use std::sync::Arc;

use crate::groupoid::{Groupoid, RawGroupoid};
use crate::name::Name;

/// Reserved object name of the terminal groupoid.
pub const POINT: &str = "*";
/// Reserved arrow name of the terminal groupoid.
pub const POINT_ID: &str = "1_*";

/// The terminal groupoid 𝟙.
pub fn terminal() -> Arc<Groupoid> {
    let raw = RawGroupoid {
        objects: vec![Name::atom(POINT)],
        arrows: vec![(Name::atom(POINT_ID), 0, 0)],
        identity: vec![0],
        inverse: vec![0],
    };
    Arc::new(raw.build(|_, _| 0).groupoid)
}

/// The group Z/n as a one-object groupoid; arrow `k` is named `g^k`, with
/// the identity named `1`.
pub fn cyclic(n: usize, object: &str) -> Arc<Groupoid> {
    assert!(n > 0);
    let name = |k: usize| if k == 0 { Name::atom("1") } else { Name::atom(format!("g^{k}")) };
    let raw = RawGroupoid {
        objects: vec![Name::atom(object)],
        arrows: (0..n).map(|k| (name(k), 0, 0)).collect(),
        identity: vec![0],
        inverse: (0..n).map(|k| (n - k) % n).collect(),
    };
    Arc::new(raw.build(|f, g| (f + g) % n).groupoid)
}

/// Z2 with object `•` and arrows `1`, `s`.
pub fn z2() -> Arc<Groupoid> {
    let raw = RawGroupoid {
        objects: vec![Name::atom("•")],
        arrows: vec![(Name::atom("1"), 0, 0), (Name::atom("s"), 0, 0)],
        identity: vec![0],
        inverse: vec![0, 1],
    };
    Arc::new(raw.build(|f, g| f ^ g).groupoid)
}

/// The walking isomorphism 𝕀: objects `0`, `1`, arrows `1_0`, `1_1`,
/// `u: 0 → 1` and `u^-1`.
pub fn interval() -> Arc<Groupoid> {
    // raw arrow i = (src, tgt) with index 2*src + tgt
    let names = ["1_0", "u", "u^-1", "1_1"];
    let raw = RawGroupoid {
        objects: vec![Name::atom("0"), Name::atom("1")],
        arrows: (0..4).map(|i| (Name::atom(names[i]), i / 2, i % 2)).collect(),
        identity: vec![0, 3],
        inverse: vec![0, 2, 1, 3],
    };
    Arc::new(raw.build(|f, g| 2 * (f / 2) + g % 2).groupoid)
}

/// The discrete groupoid on objects `0..n` (𝟚 for `n = 2`).
pub fn discrete(n: usize) -> Arc<Groupoid> {
    let raw = RawGroupoid {
        objects: (0..n).map(|i| Name::atom(i.to_string())).collect(),
        arrows: (0..n).map(|i| (Name::atom(format!("1_{i}")), i, i)).collect(),
        identity: (0..n).collect(),
        inverse: (0..n).collect(),
    };
    Arc::new(raw.build(|f, _| f).groupoid)
}

/// A connected component: the indiscrete groupoid on `objects` times the
/// cyclic group of the given order.
#[derive(Debug, Clone)]
pub struct Component {
    pub objects: Vec<String>,
    pub order: usize,
}

/// Disjoint union of components. The arrow from `x` to `y` carrying group
/// element `k` is named `x>y` when the group is trivial and `x>y:k`
/// otherwise; identities are named `1_x`.
pub fn from_components(components: &[Component]) -> Arc<Groupoid> {
    let mut raw = RawGroupoid::with_capacity(0, 0);
    // raw arrow index of (component-local src, tgt, k)
    let mut bases = Vec::new();
    for c in components {
        assert!(c.order > 0);
        let obj_base = raw.objects.len();
        let arr_base = raw.arrows.len();
        bases.push((obj_base, arr_base));
        let n = c.objects.len();
        raw.objects.extend(c.objects.iter().map(Name::atom));
        for i in 0..n {
            for j in 0..n {
                for k in 0..c.order {
                    let name = if i == j && k == 0 {
                        format!("1_{}", c.objects[i])
                    } else if c.order == 1 {
                        format!("{}>{}", c.objects[i], c.objects[j])
                    } else {
                        format!("{}>{}:{}", c.objects[i], c.objects[j], k)
                    };
                    raw.arrows.push((Name::atom(name), obj_base + i, obj_base + j));
                }
            }
        }
        let order = c.order;
        let index = |i: usize, j: usize, k: usize| arr_base + (i * n + j) * order + k;
        for i in 0..n {
            raw.identity.push(index(i, i, 0));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..order {
                    raw.inverse.push(index(j, i, (order - k) % order));
                }
            }
        }
    }
    let decode = |raw_ix: usize| -> (usize, usize, usize, usize, usize) {
        // (component, n, i, j, k)
        let ci = bases.iter().rposition(|&(_, ab)| ab <= raw_ix).unwrap();
        let c = &components[ci];
        let n = c.objects.len();
        let local = raw_ix - bases[ci].1;
        let k = local % c.order;
        let ij = local / c.order;
        (ci, n, ij / n, ij % n, k)
    };
    let built = raw.build(|f, g| {
        let (ci, n, i, _, k1) = decode(f);
        let (_, _, _, l, k2) = decode(g);
        let order = components[ci].order;
        bases[ci].1 + (i * n + l) * order + (k1 + k2) % order
    });
    Arc::new(built.groupoid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groupoids_satisfy_the_laws() {
        for g in [terminal(), z2(), interval(), discrete(2), cyclic(3, "*"), cyclic(1, "x")] {
            assert!(g.check_laws().is_empty(), "{g:?}");
        }
        let g = from_components(&[
            Component { objects: vec!["a".into(), "b".into()], order: 3 },
            Component { objects: vec!["c".into()], order: 2 },
            Component { objects: vec!["d".into(), "e".into()], order: 1 },
        ]);
        assert!(g.check_laws().is_empty());
        assert_eq!(g.arrow_count(), 12 + 2 + 4);
        assert_eq!(g.components().len(), 3);
    }

    #[test]
    fn interval_shape() {
        let i = interval();
        let u = i.find_arrow(&"u".into()).unwrap();
        let v = i.find_arrow(&"u^-1".into()).unwrap();
        assert_eq!(i.inverse(u), v);
        assert_eq!(i.obj_name(i.src(u)).as_atom(), Some("0"));
        assert_eq!(i.compose(v, u), i.identity(i.src(u)));
    }
}
