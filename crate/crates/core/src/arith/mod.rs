//! Exact arithmetic substrate.

pub mod cyclotomic;
pub mod field;
pub mod lattice;
pub mod matrix;
pub mod numeric;
pub mod poly;
pub mod rank;

pub use cyclotomic::{cyclotomic_eval, cyclotomic_poly, Cyclotomic};
pub use field::{Field, Rational};
pub use lattice::{hermite_normal_form, integer_kernel, saturate_lattice, smith_normal_form, IntMatrix, Snf};
pub use matrix::Matrix;
pub use poly::{Monomial, Poly, Vars};
pub use rank::rank_over_fraction_field;
