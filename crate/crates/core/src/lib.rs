//! Exact computation of cohomology jump loci.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] holds the exact substrate: rationals, cyclotomic fields,
//!   sparse Laurent polynomials, integer normal forms and generic ranks.
//! * [`cdga`] models finite connected CDGAs, their Aomoto complexes and
//!   resonance varieties.
//! * [`twisted`] evaluates twisted chain complexes over Laurent polynomial
//!   rings at rank-one characters and certifies translated subtori inside
//!   characteristic varieties.
//! * [`torus`] implements subtorus arithmetic and the exponential image of
//!   rational affine subspaces.
//! * [`hodge`] models 1-Hodge structures and checks that subtori are cut
//!   out by sub 1-Hodge structures.
//!
//! With the default `parallel` feature, sweeps over evaluation points run on
//! the rayon thread pool; without it every sweep runs sequentially and
//! produces identical results.

pub mod arith;
pub mod cdga;
pub mod error;
pub mod hodge;
pub mod par;
pub mod torus;
pub mod twisted;

pub use error::{Error, Result};
