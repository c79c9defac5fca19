//! Generic rank of polynomial matrices by fraction-free elimination.

use super::field::Field;
use super::matrix::Matrix;
use super::poly::{Monomial, Poly};
use crate::error::{Error, Result};

/// Rank of `m` over the field of rational functions in its variables.
///
/// Laurent rows are first multiplied by monomials (units) to clear negative
/// exponents, then Bareiss elimination runs with full pivoting, choosing at
/// each step a nonzero pivot of minimal total degree (fewest terms on ties).
/// Every division performed is exact.
pub fn rank_over_fraction_field<F: Field>(m: &Matrix<Poly<F>>) -> Result<usize> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(0);
    }
    let vars = m[(0, 0)].vars().clone();
    for p in m.iter() {
        if p.vars() != &vars {
            return Err(Error::VariableMismatch(vars.to_vec(), p.vars().to_vec()));
        }
    }
    let mut a = m.clone();
    // clear negative exponents row by row
    for i in 0..rows {
        let mins: Vec<Monomial> = (0..cols).filter_map(|j| a[(i, j)].min_exponents()).collect();
        if mins.is_empty() {
            continue;
        }
        let n = vars.len();
        let shift = Monomial((0..n).map(|v| -mins.iter().map(|m| m.0[v]).min().unwrap().min(0)).collect());
        if shift.0.iter().any(|&e| e != 0) {
            for j in 0..cols {
                a[(i, j)] = a[(i, j)].shift(&shift);
            }
        }
    }
    Ok(bareiss_rank(a))
}

fn pivot_key<F: Field>(p: &Poly<F>) -> (i64, usize) {
    (p.total_degree().unwrap_or(i64::MAX), p.num_terms())
}

fn bareiss_rank<F: Field>(mut a: Matrix<Poly<F>>) -> usize {
    let (rows, cols) = a.shape();
    let vars = a[(0, 0)].vars().clone();
    let mut prev = Poly::one(vars);
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best: Option<((i64, usize), usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let p = &a[(i, j)];
                if p.is_zero() {
                    continue;
                }
                let key = pivot_key(p);
                if best.as_ref().is_none_or(|(b, _, _)| key < *b) {
                    best = Some((key, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);
        rank += 1;
        let pivot = a[(k, k)].clone();
        for i in k + 1..rows {
            let lead = a[(i, k)].clone();
            for j in k + 1..cols {
                let t = &(&pivot * &a[(i, j)]) - &(&lead * &a[(k, j)]);
                a[(i, j)] = t.exact_div(&prev).expect("Bareiss step must divide exactly");
            }
            a[(i, k)] = Poly::zero(pivot.vars().clone());
        }
        prev = pivot;
    }
    rank
}

/// Evaluates every entry of a polynomial matrix at a point of `G^n`.
pub fn evaluate_matrix<F: Field, G: Field>(m: &Matrix<Poly<F>>, coeff: impl Fn(&F) -> G + Copy, point: &[G]) -> Matrix<G> {
    m.map(|p| p.eval_with(coeff, point))
}

/// Symbolic product of polynomial matrices over a shared variable list.
pub fn poly_mat_mul<F: Field>(a: &Matrix<Poly<F>>, b: &Matrix<Poly<F>>, vars: &super::poly::Vars) -> Matrix<Poly<F>> {
    assert_eq!(a.cols(), b.rows(), "shape mismatch in product");
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = Poly::zero(vars.clone());
        for l in 0..a.cols() {
            if a[(i, l)].is_zero() || b[(l, j)].is_zero() {
                continue;
            }
            acc = &acc + &(&a[(i, l)] * &b[(l, j)]);
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{int, Rational};
    use crate::arith::poly::{vars, Vars};

    fn xy() -> Vars {
        vars(&["x", "y"])
    }

    fn x() -> Poly<Rational> {
        Poly::var(xy(), 0)
    }

    fn y() -> Poly<Rational> {
        Poly::var(xy(), 1)
    }

    fn zero() -> Poly<Rational> {
        Poly::zero(xy())
    }

    fn mat(rows: Vec<Vec<Poly<Rational>>>) -> Matrix<Poly<Rational>> {
        let c = rows[0].len();
        Matrix::from_rows(c, rows)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(rank_over_fraction_field(&mat(vec![vec![x(), zero()], vec![zero(), x()]])).unwrap(), 2);
        assert_eq!(rank_over_fraction_field(&mat(vec![vec![x(), y()], vec![x(), y()]])).unwrap(), 1);
        // det = x^2 - y^2, expanded independently
        let det = &(&x() * &x()) - &(&y() * &y());
        assert!(!det.is_zero());
        assert_eq!(rank_over_fraction_field(&mat(vec![vec![x(), y()], vec![y(), x()]])).unwrap(), 2);
    }

    #[test]
    fn mismatched_variables_rejected() {
        let other = Poly::<Rational>::var(vars(&["u", "v"]), 0);
        let m = mat(vec![vec![x(), other]]);
        assert!(matches!(rank_over_fraction_field(&m), Err(Error::VariableMismatch(..))));
    }

    #[test]
    fn laurent_rows_and_constants() {
        // (t - 1, t^-1 - 1) has generic rank 1; the 2x2 with a dependent row too
        let v = vars(&["t"]);
        let t = Poly::<Rational>::from_int_terms(v.clone(), &[(&[1], 1), (&[0], -1)]);
        let ti = Poly::<Rational>::from_int_terms(v.clone(), &[(&[-1], 1), (&[0], -1)]);
        let m = Matrix::from_rows(2, vec![vec![t.clone(), ti.clone()], vec![t.scale(&int(2)), ti.scale(&int(2))]]);
        assert_eq!(rank_over_fraction_field(&m).unwrap(), 1);
        let c = Matrix::from_rows(2, vec![vec![Poly::<Rational>::one(v.clone()), Poly::zero(v.clone())]]);
        assert_eq!(rank_over_fraction_field(&c).unwrap(), 1);
    }

    #[test]
    fn three_by_three_singular() {
        // rows r1, r2, r1*x + r2*y
        let r1 = vec![x(), y(), Poly::one(xy())];
        let r2 = vec![y(), zero(), x()];
        let r3: Vec<_> = r1.iter().zip(&r2).map(|(a, b)| &(a * &x()) + &(b * &y())).collect();
        assert_eq!(rank_over_fraction_field(&mat(vec![r1, r2, r3])).unwrap(), 2);
    }
}
