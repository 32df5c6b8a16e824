//! Exact ramification filtrations of radical extensions
//! `L = F(zeta_{p^r}, a_1^{1/p^{s_1}}, ..., a_n^{1/p^{s_n}})` of an unramified
//! `p`-adic field `F`.
//!
//! * [`model`]: domain types and validation.
//! * [`base`]: closed forms for one radical.
//! * [`engine`]: general jumps by closed forms and by a memoized lattice evaluator.
//! * [`filtration`]: tower walks, jump families, filtration levels, tame scaling.
//! * [`herbrand`]: Herbrand functions and different valuations.
//! * [`oracle`]: grid-quantified cross-checks.

mod arith;
pub mod base;
pub mod engine;
pub mod error;
pub mod filtration;
pub mod herbrand;
pub mod model;
pub mod mutation;
pub mod oracle;

pub use error::{Error, Result};
pub use model::{FieldLabel, JumpValue, Prime, RadicalSpec, TameFactor, VClass};
