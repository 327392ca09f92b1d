//! Brute-force ground truth for everything the constructive side claims.

mod enumerate;
mod fillers;
pub mod generate;
mod verify;

pub use enumerate::{enumerate_functors, enumerate_functors_naive, SearchBudget};
pub use fillers::{
    decide_llp, decide_llp_direct, filler_search_space, find_fillers, first_filler, functors_agreeing, has_llp,
    lifts_over, lifts_search_space, LlpVerdict,
};
pub use generate::{FibrationKind, SizeBounds};
pub use verify::{verify_wfs, Counterexample, LawTally, VerificationReport, DEFAULT_SEED};
