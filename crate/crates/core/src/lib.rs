//! Exact invariants and enumeration of oriented rational links.
//!
//! A rational link is given by a fraction `p/q` or, equivalently, by its odd
//! continued fraction vector. From the vector the crate builds the 4-plat in
//! preferred standard form, reads off crossing signs, derives the Seifert
//! circle chain and its reductions, and from those the genus, braid index
//! and deficiency. [`census`] enumerates every link with a given crossing
//! number; [`formulas`] gives the matching closed forms.

pub mod census;
pub mod error;
pub mod formulas;
pub mod numtheory;
pub mod plat;
pub mod seifert;

pub use error::{Error, Result};
pub use numtheory::{Fraction, OddCf};
pub use plat::{OrientationChoice, PlatDiagram, SignedVector};
pub use seifert::{InvariantRecord, RType};
