//! Rosen continued fractions over the real cyclotomic fields `Q(λ_m)`,
//! `λ_m = 2cos(π/m)`, computed exactly.
//!
//! The crate is organised bottom-up:
//!
//! - [`cycfield`]: exact field arithmetic with certified sign and floor.
//! - [`rosen`]: the Rosen map, expansions, evaluation and the natural extension.
//! - [`convergents`]: convergent matrices, the mirror formula, approximation
//!   and growth bounds.
//! - [`heights`]: naive and Weil heights, conjugate domination, heights of
//!   convergents and of ultimately periodic expansions.
//! - [`hecke`]: Hecke group elements, trace domination and the column split
//!   into `ℤ[λ²]` and `λℤ[λ²]`.
//! - [`words`]: fractional powers, repetitions, Sturmian words and the two
//!   stammering/growth criteria.
//! - [`suites`]: deterministic randomized and exhaustive verification runs.

pub mod convergents;
pub mod cycfield;
pub mod error;
pub mod hecke;
pub mod heights;
pub mod interval;
pub mod linalg;
pub mod literal;
pub mod poly;
pub mod rosen;
pub mod suites;
pub mod words;

pub use cycfield::{field_new, Field, FieldDescriptor, FieldElement};
pub use error::{Error, Result};
pub use interval::Interval;
pub use rosen::{ExpansionResult, ExpansionStatus, PartialQuotient, Word};


/// Version tag carried by every JSON document the crate emits.
pub const SCHEMA: &str = "rosen-lab/v1";
