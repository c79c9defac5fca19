use crate::arith::field::Rational;
use crate::arith::matrix::Matrix;
use crate::arith::poly::{Poly, Vars};
use crate::arith::rank::poly_mat_mul;
use crate::error::{Error, Result};

/// `C_top → … → C_1 → C_0` over `Q[t^{±1}]`, with `∂_i : C_i → C_{i−1}`
/// acting on column vectors (shape `ranks[i−1] × ranks[i]`).
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentComplex {
    vars: Vars,
    ranks: Vec<usize>,
    boundaries: Vec<Matrix<Poly<Rational>>>,
}

impl LaurentComplex {
    /// `boundaries[i − 1]` is `∂_i`.
    pub fn new(vars: Vars, ranks: Vec<usize>, boundaries: Vec<Matrix<Poly<Rational>>>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Input("a complex needs at least C_0".into()));
        }
        if boundaries.len() + 1 != ranks.len() {
            return Err(Error::Input(format!("{} ranks need {} boundary matrices, got {}", ranks.len(), ranks.len() - 1, boundaries.len())));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.shape() != (ranks[i], ranks[i + 1]) {
                return Err(Error::Input(format!(
                    "boundary ∂_{} has shape {}x{}, expected {}x{}",
                    i + 1,
                    b.rows(),
                    b.cols(),
                    ranks[i],
                    ranks[i + 1]
                )));
            }
            if let Some(p) = b.iter().find(|p| p.vars() != &vars) {
                return Err(Error::VariableMismatch(vars.to_vec(), p.vars().to_vec()));
            }
        }
        Ok(LaurentComplex { vars, ranks, boundaries })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Number of character-torus coordinates.
    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `∂_i` for `1 ≤ i ≤ top`.
    pub fn boundary(&self, i: usize) -> &Matrix<Poly<Rational>> {
        &self.boundaries[i - 1]
    }

    pub fn boundaries(&self) -> &[Matrix<Poly<Rational>>] {
        &self.boundaries
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().enumerate().map(|(i, &r)| if i % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
    }
}

/// Nonzero entry `(row, col)` of `∂_degree ∘ ∂_{degree+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexDefect {
    pub degree: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexReport {
    pub defects: Vec<ComplexDefect>,
}

impl ComplexReport {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks `∂_i ∘ ∂_{i+1} = 0` symbolically.
pub fn validate_complex(c: &LaurentComplex) -> ComplexReport {
    let mut defects = Vec::new();
    for i in 1..c.top() {
        let prod = poly_mat_mul(c.boundary(i), c.boundary(i + 1), &c.vars);
        for r in 0..prod.rows() {
            for col in 0..prod.cols() {
                if !prod[(r, col)].is_zero() {
                    defects.push(ComplexDefect { degree: i, row: r, col });
                }
            }
        }
    }
    ComplexReport { defects }
}
