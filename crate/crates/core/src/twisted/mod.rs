//! Twisted chain complexes over Laurent polynomial rings and their
//! characteristic varieties `Σ^i_k`.
//!
//! Complexes are chain complexes `C_top → … → C_0` of free modules over
//! `Q[t_1^{±1}, …, t_n^{±1}]`; `twisted_betti` returns homology dimensions
//! of the complex evaluated at a character. Cohomology with coefficients in
//! `L_ρ` has the same dimensions as homology at `ρ^{-1}`; see
//! [`Character::inverse`].

mod character;
mod charvar;
mod compare;
mod complex;
mod fox;

pub use character::Character;
pub use charvar::{
    charvar_membership, random_torsion_character, sweep, torsion_sweep_set, twisted_betti, verify_torus_in_charvar, TorusCertificate,
    TorusVerdict, TwistedBetti,
};
pub use compare::{compare_exp, ComparisonReport, ComparisonSample};
pub use complex::{validate_complex, ComplexDefect, ComplexReport, LaurentComplex};
pub use fox::{fox_derivative, presentation_to_complex, Letter, Presentation, Word};
