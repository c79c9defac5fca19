use crate::arith::field::Rational;
use crate::arith::matrix::Matrix;
use crate::arith::poly::{indexed_vars, Poly, Vars};
use crate::arith::rank::poly_mat_mul;

use super::algebra::GradedAlgebra;

/// Basis of the flat connections `F(A) = ker(d¹) ⊂ A¹`, in the coordinates
/// `x1, …, xm` used throughout resonance computations.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatConnectionBasis {
    pub vectors: Vec<Vec<Rational>>,
    pub vars: Vars,
}

impl FlatConnectionBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// The flat connection `Σ_j point_j · v_j` as a vector in `A¹`.
    pub fn combine(&self, point: &[Rational], dim_a1: usize) -> Vec<Rational> {
        let mut out = vec![Rational::default(); dim_a1];
        for (c, v) in point.iter().zip(&self.vectors) {
            for (o, x) in out.iter_mut().zip(v) {
                *o = &*o + c * x;
            }
        }
        out
    }
}

pub fn flat_connections(a: &GradedAlgebra) -> FlatConnectionBasis {
    let vectors = if a.dim(1) == 0 { Vec::new() } else { a.diff(1).nullspace() };
    let vars = indexed_vars("x", vectors.len());
    FlatConnectionBasis { vectors, vars }
}

/// The universal Aomoto complex: `M^i = d^i + Σ_j x_j·L_j^i` where `L_j^i`
/// is the matrix of a multiplication operator attached to the `j`-th
/// flat connection. Entries are polynomials of total degree ≤ 1.
#[derive(Clone, Debug)]
pub struct AomotoComplex {
    vars: Vars,
    dims: Vec<usize>,
    matrices: Vec<Matrix<Poly<Rational>>>,
}

impl AomotoComplex {
    /// Assembles `M^i = d^i + Σ_j x_j·ops[j][i]`; `d[i]` and `ops[j][i]`
    /// are `dims[i+1] × dims[i]`.
    pub fn from_operators(vars: Vars, dims: Vec<usize>, d: &[Matrix<Rational>], ops: &[Vec<Matrix<Rational>>]) -> Self {
        let top = dims.len().saturating_sub(1);
        let matrices = (0..top)
            .map(|i| {
                Matrix::from_fn(dims[i + 1], dims[i], |r, c| {
                    let mut p = Poly::constant(vars.clone(), d[i][(r, c)].clone());
                    for (j, op) in ops.iter().enumerate() {
                        let coef = &op[i][(r, c)];
                        if coef != &Rational::default() {
                            p = &p + &Poly::var(vars.clone(), j).scale(coef);
                        }
                    }
                    p
                })
            })
            .collect();
        AomotoComplex { vars, dims, matrices }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims.get(i).copied().unwrap_or(0)
    }

    /// `M^i : A^i → A^{i+1}`; an empty-shaped zero matrix out of range.
    pub fn matrix(&self, i: usize) -> Matrix<Poly<Rational>> {
        match self.matrices.get(i) {
            Some(m) => m.clone(),
            None => Matrix::from_fn(self.dim(i + 1), self.dim(i), |_, _| Poly::zero(self.vars.clone())),
        }
    }

    pub fn matrices(&self) -> &[Matrix<Poly<Rational>>] {
        &self.matrices
    }

    /// Degree `i` incoming map `M^{i-1}`, if `i > 0`.
    pub fn incoming(&self, i: usize) -> Option<Matrix<Poly<Rational>>> {
        (i > 0).then(|| self.matrix(i - 1))
    }

    /// Positions `(i, row, col)` where `M^{i+1}·M^i` is not identically zero.
    pub fn flatness_defects(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.matrices.len().saturating_sub(1) {
            let prod = poly_mat_mul(&self.matrices[i + 1], &self.matrices[i], &self.vars);
            for r in 0..prod.rows() {
                for c in 0..prod.cols() {
                    if !prod[(r, c)].is_zero() {
                        out.push((i, r, c));
                    }
                }
            }
        }
        out
    }
}

pub fn aomoto(a: &GradedAlgebra) -> AomotoComplex {
    let flat = flat_connections(a);
    let top = a.top_degree();
    let d: Vec<Matrix<Rational>> = (0..top).map(|i| a.diff(i)).collect();
    let ops: Vec<Vec<Matrix<Rational>>> = flat.vectors.iter().map(|v| (0..top).map(|i| a.left_mult(1, v, i)).collect()).collect();
    AomotoComplex::from_operators(flat.vars.clone(), a.dims(), &d, &ops)
}
