//! Symbolic identifiers for objects and arrows.
//!
//! User-supplied groupoids use plain atoms. Every derived construction
//! (pullbacks, path objects, mapping path objects) names its elements by
//! tuples of the names it was built from, so two runs over the same input
//! produce identical structures.

use std::fmt;
use std::sync::Arc;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An opaque identifier, unique within one groupoid.
///
/// Serialized as a JSON string (atom) or a JSON array of names (tuple).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Name {
    Atom(Arc<str>),
    Tuple(Arc<[Name]>),
}

impl Name {
    pub fn atom(s: impl AsRef<str>) -> Self {
        Name::Atom(Arc::from(s.as_ref()))
    }

    pub fn tuple(parts: impl IntoIterator<Item = Name>) -> Self {
        Name::Tuple(parts.into_iter().collect())
    }

    pub fn pair(a: &Name, b: &Name) -> Self {
        Name::Tuple(Arc::from([a.clone(), b.clone()]))
    }

    pub fn triple(a: &Name, b: &Name, c: &Name) -> Self {
        Name::Tuple(Arc::from([a.clone(), b.clone(), c.clone()]))
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Name::Atom(s) => Some(s),
            Name::Tuple(_) => None,
        }
    }

    pub fn parts(&self) -> Option<&[Name]> {
        match self {
            Name::Atom(_) => None,
            Name::Tuple(parts) => Some(parts),
        }
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::atom(s)
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name::Atom(Arc::from(s))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::Atom(s) => f.write_str(s),
            Name::Tuple(parts) => {
                f.write_str("(")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{part}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Name::Atom(s) => serializer.serialize_str(s),
            Name::Tuple(parts) => {
                let mut seq = serializer.serialize_seq(Some(parts.len()))?;
                for part in parts.iter() {
                    seq.serialize_element(part)?;
                }
                seq.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Name {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct NameVisitor;

        impl<'de> Visitor<'de> for NameVisitor {
            type Value = Name;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a string or an array of names")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Name, E> {
                Ok(Name::atom(v))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Name, A::Error> {
                let mut parts = Vec::new();
                while let Some(part) = seq.next_element::<Name>()? {
                    parts.push(part);
                }
                if parts.is_empty() {
                    return Err(de::Error::invalid_length(0, &"a non-empty tuple"));
                }
                Ok(Name::tuple(parts))
            }
        }

        deserializer.deserialize_any(NameVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_nests_tuples() {
        let n = Name::pair(&Name::atom("a"), &Name::triple(&"x".into(), &"y".into(), &"z".into()));
        assert_eq!(n.to_string(), "(a,(x,y,z))");
    }

    #[test]
    fn json_shape() {
        let n = Name::pair(&Name::atom("a"), &Name::atom("b"));
        assert_eq!(serde_json::to_string(&n).unwrap(), r#"["a","b"]"#);
        let back: Name = serde_json::from_str(r#"["a",["b","c"]]"#).unwrap();
        assert_eq!(back.to_string(), "(a,(b,c))");
        assert!(serde_json::from_str::<Name>("[]").is_err());
        assert!(serde_json::from_str::<Name>("3").is_err());
    }

    #[test]
    fn atoms_sort_before_tuples() {
        let mut v = vec![Name::pair(&"a".into(), &"a".into()), Name::atom("z"), Name::atom("a")];
        v.sort();
        assert_eq!(v[0], Name::atom("a"));
        assert_eq!(v[1], Name::atom("z"));
    }
}
