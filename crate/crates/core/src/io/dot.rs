//! Graphviz export.

use std::fmt::Write;

use crate::functor::Functor;
use crate::groupoid::Groupoid;
use crate::name::Name;

fn quote(name: &Name) -> String {
    let mut out = String::from("\"");
    for c in name.to_string().chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn body(out: &mut String, g: &Groupoid, prefix: &str) {
    for o in g.objects() {
        let name = g.obj_name(o);
        writeln!(out, "  {} [label={}];", quote(&Name::atom(format!("{prefix}{name}"))), quote(name)).unwrap();
    }
    for a in g.arrows() {
        let (s, t) = (g.obj_name(g.src(a)), g.obj_name(g.tgt(a)));
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&Name::atom(format!("{prefix}{s}"))),
            quote(&Name::atom(format!("{prefix}{t}"))),
            quote(g.arr_name(a))
        )
        .unwrap();
    }
}

/// One node per object, one labeled edge per arrow.
pub fn groupoid_to_dot(g: &Groupoid) -> String {
    let mut out = String::from("digraph groupoid {\n");
    body(&mut out, g, "");
    out.push_str("}\n");
    out
}

/// Domain and codomain as clusters, with dashed edges for the object map.
pub fn functor_to_dot(f: &Functor) -> String {
    let mut out = String::from("digraph functor {\n  subgraph cluster_dom {\n  label=\"dom\";\n");
    body(&mut out, f.dom(), "dom:");
    out.push_str("  }\n  subgraph cluster_cod {\n  label=\"cod\";\n");
    body(&mut out, f.cod(), "cod:");
    out.push_str("  }\n");
    for o in f.dom().objects() {
        let s = Name::atom(format!("dom:{}", f.dom().obj_name(o)));
        let t = Name::atom(format!("cod:{}", f.cod().obj_name(f.obj(o))));
        writeln!(out, "  {} -> {} [style=dashed];", quote(&s), quote(&t)).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{interval, z2};

    #[test]
    fn z2_has_one_node_and_two_loops() {
        let dot = groupoid_to_dot(&z2());
        assert_eq!(dot.matches("[label=").count(), 3);
        assert_eq!(dot.matches(" -> ").count(), 2);
    }

    #[test]
    fn names_are_escaped() {
        let dot = groupoid_to_dot(&interval());
        assert!(dot.starts_with("digraph groupoid {\n"));
        assert_eq!(quote(&Name::atom("a\"b")), "\"a\\\"b\"");
    }

    #[test]
    fn functor_clusters() {
        let g = z2();
        let dot = functor_to_dot(&Functor::identity(&g));
        assert_eq!(dot.matches("style=dashed").count(), 1);
    }
}
