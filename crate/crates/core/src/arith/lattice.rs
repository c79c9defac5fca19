//! Integer matrices: Smith and Hermite normal forms, saturation, kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::Rational;
use super::matrix::Matrix;

pub type IntMatrix = Matrix<BigInt>;

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    let cols = rows.first().map_or(0, |r| r.len());
    Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

pub fn to_rational(m: &IntMatrix) -> Matrix<Rational> {
    m.map(|x| Rational::from_integer(x.clone()))
}

pub fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    super::matrix::mat_mul(a, b)
}

/// Smith normal form `U·A·V = D` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// `V⁻¹`, tracked alongside `V`.
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Snf {
    /// The nonzero diagonal entries `d_1 | d_2 | … | d_rank`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn row_axpy(m: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    // row_target -= q * row_src
    for j in 0..m.cols() {
        if !m[(src, j)].is_zero() {
            let v = &m[(target, j)] - q * &m[(src, j)];
            m[(target, j)] = v;
        }
    }
}

fn col_axpy(m: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    // col_target -= q * col_src
    for i in 0..m.rows() {
        if !m[(i, src)].is_zero() {
            let v = &m[(i, target)] - q * &m[(i, src)];
            m[(i, target)] = v;
        }
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for j in 0..m.cols() {
        let v = -m[(i, j)].clone();
        m[(i, j)] = v;
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (rows, cols) = a.shape();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);
    let mut t = 0;
    'pivots: while t < rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[(i, j)].is_zero() && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'pivots };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&d[(i, t)], &d[(t, t)]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&d[(t, j)], &d[(t, t)]);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                // V' = V·E with E = I - q·e_t e_jᵀ, so V'⁻¹ = (I + q·e_t e_jᵀ)·V⁻¹
                row_axpy(&mut v_inv, t, j, &(-&q));
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match bad {
                Some(i) => {
                    row_axpy(&mut d, t, i, &BigInt::from(-1));
                    row_axpy(&mut u, t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    Snf { u, d, v, v_inv, rank: t }
}

/// `q` with `|a - q·p| ≤ |p|/2`.
fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (two.clone() * a + p.abs()).div_floor(&(two * p.abs())) * p.signum()
}

/// Row-style Hermite normal form of the row lattice of `a`, zero rows
/// removed: echelon, positive pivots, entries above a pivot reduced into
/// `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let (rows, cols) = a.shape();
    let mut h = a.clone();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows).filter(|&i| !h[(i, c)].is_zero()).min_by_key(|&i| h[(i, c)].abs());
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                row_axpy(&mut h, i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                row_axpy(&mut h, i, r, &q);
            }
        }
        r += 1;
    }
    h.select_rows(0..r)
}

/// Pivot column of each HNF row.
pub fn hnf_pivots(h: &IntMatrix) -> Vec<usize> {
    (0..h.rows()).map(|i| (0..h.cols()).find(|&j| !h[(i, j)].is_zero()).expect("HNF rows are nonzero")).collect()
}

/// HNF basis of the saturation `{v ∈ Z^n : m·v ∈ rowspan_Z(B)}`, computed
/// from the Smith form: `rowspan(B) = rowspan(D·V⁻¹)`, so the first `rank`
/// rows of `V⁻¹` span the saturation.
pub fn saturate_lattice(b: &IntMatrix) -> IntMatrix {
    if b.rows() == 0 {
        return IntMatrix::zeros(0, b.cols());
    }
    let snf = smith_normal_form(b);
    hermite_normal_form(&snf.v_inv.select_rows(0..snf.rank))
}

pub fn is_saturated(b: &IntMatrix) -> bool {
    hermite_normal_form(b) == saturate_lattice(b)
}

/// Basis (as rows) of the integer right kernel `{x ∈ Z^n : A·x = 0}`,
/// in Hermite normal form.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    if a.rows() == 0 {
        return IntMatrix::identity(n);
    }
    let snf = smith_normal_form(a);
    let basis: Vec<Vec<BigInt>> = (snf.rank..n).map(|j| (0..n).map(|i| snf.v[(i, j)].clone()).collect()).collect();
    hermite_normal_form(&Matrix::from_rows(n, basis))
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn int_det(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    assert_eq!(n, a.cols(), "determinant of a non-square matrix");
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap_rows(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}

/// Rational rank of an integer matrix.
pub fn int_rank(a: &IntMatrix) -> usize {
    to_rational(a).rank()
}

/// Extends a basis of a saturated lattice (rows of `b`) to a unimodular
/// `n×n` matrix whose first rows are exactly `b`.
pub fn complete_to_unimodular(b: &IntMatrix) -> IntMatrix {
    let n = b.cols();
    if b.rows() == 0 {
        return IntMatrix::identity(n);
    }
    let snf = smith_normal_form(b);
    debug_assert!(snf.invariant_factors().iter().all(One::is_one), "lattice must be saturated");
    b.stack(&snf.v_inv.select_rows(snf.rank..n))
}
