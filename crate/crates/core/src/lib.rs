//! Finite groupoids as a tribe, with path objects, the (anodyne, fibration)
//! weak factorization system, and an exhaustive oracle for checking it.

pub mod error;
pub mod functor;
pub mod groupoid;
pub mod io;
pub mod name;
pub mod oracle;
pub mod path;
pub mod standard;
pub mod tribe;
pub mod wfs;

pub use error::{Error, FibrationViolation, FunctorViolation, GroupoidViolation, Result};
pub use functor::{compose_functors, functor_equal, Functor};
pub use groupoid::{validate_groupoid, Arr, Groupoid, GroupoidSpec, Obj};
pub use name::Name;
pub use oracle::{
    decide_llp, enumerate_functors, find_fillers, has_llp, verify_wfs, LlpVerdict, SearchBudget, SizeBounds,
    VerificationReport,
};
pub use tribe::{
    base_change_fibration, compose_fibrations, derive_canonical_cleavage, pullback, validate_fibration,
    NormalClovenFibration, PullbackSquare,
};
pub use path::{diagonal, path_object, stability_iso, PathObject, Stability};
pub use wfs::{
    factorize, fill_unit_square, mapping_path_object, reduce_lifting_problem, solve_lifting, transport, Factorization,
    Filler, LeftWitness, LiftingProblem, Transport,
};
