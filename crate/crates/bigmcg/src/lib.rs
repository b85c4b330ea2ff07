#![forbid(unsafe_code)]

//! Exact "shadow" computations for mapping class groups of surfaces with
//! finitely many ends, all accumulated by genus.
//!
//! A group element is a [`words::Word`] over Dehn twists about an indexed
//! curve atlas, adjacent handle shifts, a rotation, and four involutions.
//! Words are never represented faithfully; instead they are evaluated in
//! several exact finite shadows that are strong enough to machine-check the
//! identity chains used in topological-generation arguments:
//!
//! * the induced permutation of the ends ([`flux::end_permutation`]),
//! * the genus-flux vector across each separating class ([`flux::flux_vector`]),
//! * the symplectic action on first homology of a truncation ([`homology`]),
//! * curve-by-curve rewriting in the atlas ([`words::curve_image`]).
//!
//! Equality verdicts ([`words::equal_up_to`]) are layered semi-decisions over
//! those shadows. The crate also classifies symbolic end spaces
//! ([`endspace`]) and reproduces the permutation-topology metric experiments
//! on automorphism groups of countable graphs ([`polish`]).

pub mod atlas;
pub mod endspace;
pub mod flux;
pub mod homology;
pub mod polish;
pub mod suites;
pub mod surface;
pub mod words;

pub use atlas::{Atlas, CurveId, Family};
pub use words::{Generator, Verdict, Word};
