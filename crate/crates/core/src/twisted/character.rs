use num_complex::Complex64;
use num_traits::Zero;

use crate::arith::cyclotomic::torsion_exponents;
use crate::arith::field::{frac, rational_to_f64, Rational};
use crate::torus::unit_circle;

/// A rank-one character `ρ ∈ (C*)^n`.
#[derive(Clone, Debug, PartialEq)]
pub enum Character {
    /// `ρ_j = e^{2πi q_j}` with `q_j ∈ [0, 1)`.
    Torsion(Vec<Rational>),
    /// Double-precision values; never certified.
    Numeric(Vec<Complex64>),
}

impl Character {
    /// Reduces each coordinate into `[0, 1)`.
    pub fn torsion(q: Vec<Rational>) -> Self {
        Character::Torsion(q.iter().map(frac).collect())
    }

    pub fn numeric(z: Vec<Complex64>) -> Self {
        Character::Numeric(z)
    }

    pub fn trivial(n: usize) -> Self {
        Character::Torsion(vec![Rational::zero(); n])
    }

    pub fn len(&self) -> usize {
        match self {
            Character::Torsion(q) => q.len(),
            Character::Numeric(z) => z.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_torsion(&self) -> bool {
        matches!(self, Character::Torsion(_))
    }

    /// Exact for torsion characters, within `1e-12` otherwise.
    pub fn is_trivial(&self) -> bool {
        match self {
            Character::Torsion(q) => q.iter().all(Zero::is_zero),
            Character::Numeric(z) => z.iter().all(|x| (x - 1.0).norm() < 1e-12),
        }
    }

    /// Order of a torsion character.
    pub fn order(&self) -> Option<u64> {
        match self {
            Character::Torsion(q) => Some(torsion_exponents(q).0),
            Character::Numeric(_) => None,
        }
    }

    /// `ρ^{-1}`: the character whose homology carries the cohomology of `ρ`.
    pub fn inverse(&self) -> Self {
        match self {
            Character::Torsion(q) => Character::torsion(q.iter().map(|x| -x).collect()),
            Character::Numeric(z) => Character::Numeric(z.iter().map(|x| 1.0 / x).collect()),
        }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        match self {
            Character::Torsion(_) => self.inverse(),
            Character::Numeric(z) => Character::Numeric(z.iter().map(|x| x.conj()).collect()),
        }
    }

    pub fn complex_values(&self) -> Vec<Complex64> {
        match self {
            Character::Torsion(q) => q.iter().map(|x| unit_circle(rational_to_f64(x))).collect(),
            Character::Numeric(z) => z.clone(),
        }
    }

    /// The same point as a numeric character.
    pub fn to_numeric(&self) -> Self {
        Character::Numeric(self.complex_values())
    }
}
