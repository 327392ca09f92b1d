//! Reading and writing documents.

mod document;
mod dot;

pub use document::*;
pub use dot::{functor_to_dot, groupoid_to_dot};
