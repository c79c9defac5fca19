//! Elements of cyclotomic fields `Q(ζ_N)` in canonical power-basis form.
//!
//! An element of order `N` is stored by its coordinates on
//! `1, ζ, …, ζ^{φ(N)-1}`, reduced modulo the cyclotomic polynomial `Φ_N`
//! after every operation. Zero testing is therefore coefficientwise.
//! Elements of different orders are combined by rewriting both into
//! `Q(ζ_L)` with `L = lcm` of the orders.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{frac, lcm_of_denominators, rational_to_f64, Field, Rational};
use super::matrix::Matrix;

thread_local! {
    static PHI_CACHE: RefCell<HashMap<u64, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

fn moebius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial,
/// via `Φ_n = Π_{d | n} (x^d − 1)^{μ(n/d)}`.
pub fn cyclotomic_poly(n: u64) -> Rc<Vec<i64>> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    if let Some(p) = PHI_CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    // numerator: product of (x^d - 1) with μ = +1; then divide by those with μ = -1
    let mut poly: Vec<i128> = vec![1];
    let mul_binomial = |p: &mut Vec<i128>, d: usize| {
        // p * (x^d - 1)
        let mut out = vec![0i128; p.len() + d];
        for (i, &c) in p.iter().enumerate() {
            out[i + d] += c;
            out[i] -= c;
        }
        *p = out;
    };
    let div_binomial = |p: &mut Vec<i128>, d: usize| {
        // exact division by (x^d - 1): q_i = q_{i-d} - p_i, solved from low degree
        let qlen = p.len() - d;
        let mut q = vec![0i128; qlen];
        for i in 0..qlen {
            let prev = if i >= d { q[i - d] } else { 0 };
            q[i] = prev - p[i];
        }
        *p = q;
    };
    for &d in &divisors {
        if moebius(n / d) == 1 {
            mul_binomial(&mut poly, d as usize);
        }
    }
    for &d in &divisors {
        if moebius(n / d) == -1 {
            div_binomial(&mut poly, d as usize);
        }
    }
    let poly: Rc<Vec<i64>> = Rc::new(poly.into_iter().map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow")).collect());
    PHI_CACHE.with(|c| c.borrow_mut().insert(n, poly.clone()));
    poly
}

/// Euler's totient, equal to `deg Φ_n`.
pub fn totient(n: u64) -> usize {
    cyclotomic_poly(n).len() - 1
}

fn reduce(order: u64, mut coeffs: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_poly(order);
    let deg = phi.len() - 1;
    if coeffs.len() > deg {
        for k in (deg..coeffs.len()).rev() {
            if coeffs[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut coeffs[k], Rational::zero());
            for (j, &p) in phi.iter().enumerate().take(deg) {
                if p != 0 {
                    let idx = k - deg + j;
                    coeffs[idx] = &coeffs[idx] - &c * Rational::from_integer(BigInt::from(p));
                }
            }
        }
    }
    coeffs.resize(deg, Rational::zero());
    coeffs
}

#[derive(Clone)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn from_rational_in(order: u64, q: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); totient(order)];
        coeffs[0] = q;
        Cyclotomic { order, coeffs }
    }

    /// Element with the given power-basis coordinates (any length; reduced).
    pub fn from_coeffs(order: u64, coeffs: Vec<Rational>) -> Self {
        assert!(order > 0);
        Cyclotomic { order, coeffs: reduce(order, coeffs) }
    }

    /// `ζ_order^exponent`.
    pub fn zeta_pow(order: u64, exponent: i64) -> Self {
        let e = exponent.rem_euclid(order as i64) as usize;
        let mut coeffs = vec![Rational::zero(); e + 1];
        coeffs[e] = Rational::one();
        Self::from_coeffs(order, coeffs)
    }

    pub fn zeta(order: u64) -> Self {
        Self::zeta_pow(order, 1)
    }

    /// The imaginary unit as an element of `Q(ζ_4)`.
    pub fn i() -> Self {
        Self::zeta(4)
    }

    /// `re + im·i` in `Q(ζ_4)`.
    pub fn gaussian(re: Rational, im: Rational) -> Self {
        Self::from_coeffs(4, vec![re, im])
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coordinates after embedding into `Q(ζ_target)`; `target` must be a
    /// multiple of the current order.
    pub fn lift_coeffs(&self, target: u64) -> Vec<Rational> {
        assert!(target % self.order == 0, "cannot embed Q(ζ_{}) into Q(ζ_{})", self.order, target);
        if target == self.order {
            return self.coeffs.clone();
        }
        let step = (target / self.order) as usize;
        let mut out = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[j * step] = c.clone();
            }
        }
        reduce(target, out)
    }

    pub fn lift(&self, target: u64) -> Self {
        Cyclotomic { order: target, coeffs: self.lift_coeffs(target) }
    }

    fn common(&self, other: &Self) -> (u64, Vec<Rational>, Vec<Rational>) {
        let l = self.order.lcm(&other.order);
        (l, self.lift_coeffs(l), other.lift_coeffs(l))
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut out = vec![Rational::zero(); n.max(1)];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let k = (n - j) % n;
                out[k] = &out[k] + c;
            }
        }
        Self::from_coeffs(self.order, out)
    }

    /// The element as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    fn mul_coeffs(order: u64, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + x * y;
                }
            }
        }
        reduce(order, out)
    }

    fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in Q(ζ_{})", self.order);
        if let Some(q) = self.as_rational() {
            return Cyclotomic::from_rational_in(self.order, q.recip());
        }
        // solve (multiplication-by-self) · b = 1
        let d = self.coeffs.len();
        let cols: Vec<Vec<Rational>> = (0..d)
            .map(|j| {
                let mut basis = vec![Rational::zero(); j + 1];
                basis[j] = Rational::one();
                Self::mul_coeffs(self.order, &self.coeffs, &basis)
            })
            .collect();
        let m = Matrix::from_fn(d, d, |i, j| cols[j][i].clone());
        let mut rhs = vec![Rational::zero(); d];
        rhs[0] = Rational::one();
        let b = m.solve(&rhs).expect("nonzero element of a field is invertible");
        Cyclotomic { order: self.order, coeffs: b }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl Eq for Cyclotomic {}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic { order: 1, coeffs: vec![Rational::zero()] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic { order: 1, coeffs: vec![Rational::one()] }
    }
}

impl<'a> Add<&'a Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        let (l, a, b) = self.common(rhs);
        Cyclotomic { order: l, coeffs: a.iter().zip(&b).map(|(x, y)| x + y).collect() }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        self + &rhs
    }
}

impl<'a> Sub<&'a Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        let (l, a, b) = self.common(rhs);
        Cyclotomic { order: l, coeffs: a.iter().zip(&b).map(|(x, y)| x - y).collect() }
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        self - &rhs
    }
}

impl<'a> Mul<&'a Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        if let Some(q) = rhs.as_rational() {
            return Cyclotomic { order: self.order.lcm(&rhs.order), coeffs: self.lift_coeffs(self.order.lcm(&rhs.order)).into_iter().map(|c| c * &q).collect() };
        }
        let (l, a, b) = self.common(rhs);
        Cyclotomic { order: l, coeffs: Self::mul_coeffs(l, &a, &b) }
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        self * &rhs
    }
}

impl<'a> Div<&'a Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self * &rhs.inverse()
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Field for Cyclotomic {
    fn from_rational(q: &Rational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![q.clone()] }
    }

    fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| Complex64::from_polar(rational_to_f64(c), std::f64::consts::TAU * j as f64 / n))
            .sum()
    }

    fn inv(&self) -> Self {
        self.inverse()
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "z{}", self.order)?;
                    if j > 1 {
                        write!(f, "^{j}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

/// Reduces `q` into `[0,1)^n` and returns `(N, e)` where `N` is the lcm of
/// the reduced denominators and `e_j = N·q_j`.
pub fn torsion_exponents(q: &[Rational]) -> (u64, Vec<BigInt>) {
    let reduced: Vec<Rational> = q.iter().map(frac).collect();
    let n = lcm_of_denominators(&reduced);
    let nq = Rational::from_integer(n.clone());
    let exps = reduced.iter().map(|x| (x * &nq).to_integer()).collect();
    (n.to_u64().expect("torsion order exceeds u64"), exps)
}

/// Value of the character `exp(q) = (e^{2πi q_j})_j` on the monomial `z^a`,
/// i.e. `ζ_N^{N(a·q)}` with `N` the lcm of the denominators of `q`.
pub fn cyclotomic_eval(q: &[Rational], a: &[i64]) -> Cyclotomic {
    assert_eq!(q.len(), a.len(), "character and monomial lengths differ");
    let (n, exps) = torsion_exponents(q);
    let nb = BigInt::from(n);
    let e: BigInt = exps.iter().zip(a).map(|(x, &ai)| x * BigInt::from(ai)).sum();
    let e = e.mod_floor(&nb).to_i64().expect("exponent fits");
    Cyclotomic::zeta_pow(n, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{int, rat};

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        // first cyclotomic polynomial with a coefficient of absolute value 2
        assert!(cyclotomic_poly(105).iter().any(|&c| c == -2));
        assert_eq!(totient(60), 16);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(cyclotomic_eval(&[rat(1, 2)], &[2]), Cyclotomic::one());
        assert_eq!(cyclotomic_eval(&[rat(1, 3)], &[1]), Cyclotomic::zeta(3));
        let v = cyclotomic_eval(&[rat(1, 4), rat(1, 2)], &[1, 1]);
        assert_eq!(v, -Cyclotomic::zeta(4));
        let z = v.to_complex();
        let expect = Complex64::from_polar(1.0, std::f64::consts::TAU * 0.75);
        assert!((z - expect).norm() < 1e-12);
    }

    #[test]
    fn mixed_orders_embed() {
        // ζ_4^2 = -1 = ζ_2
        assert_eq!(Cyclotomic::zeta_pow(4, 2), Cyclotomic::zeta(2));
        // ζ_6 = -ζ_3^2
        assert_eq!(Cyclotomic::zeta(6), -Cyclotomic::zeta_pow(3, 2));
        let s = Cyclotomic::zeta(3) + &Cyclotomic::i();
        assert_eq!(s.order(), 12);
        let back = s - &Cyclotomic::i();
        assert_eq!(back, Cyclotomic::zeta(3));
    }

    #[test]
    fn zeta_has_exact_order() {
        for n in [1u64, 2, 3, 5, 8, 9, 12, 15] {
            let z = Cyclotomic::zeta(n);
            let mut p = Cyclotomic::one();
            for k in 1..=n {
                p = p * &z;
                assert_eq!(p.is_one(), k == n, "order {n}, power {k}");
            }
        }
    }

    #[test]
    fn inverse_and_sum_of_roots() {
        let a = Cyclotomic::from_coeffs(5, vec![int(1), int(2), int(0), rat(-1, 3)]);
        let b = a.inv();
        assert!((a.clone() * &b).is_one());
        // 1 + ζ + ... + ζ^{p-1} = 0 for prime p
        let mut s = Cyclotomic::zero();
        for k in 0..7 {
            s = s + &Cyclotomic::zeta_pow(7, k);
        }
        assert!(s.is_zero());
    }

    #[test]
    fn gaussian_conjugation() {
        let z = Cyclotomic::gaussian(int(2), int(3));
        assert_eq!(z.conj(), Cyclotomic::gaussian(int(2), int(-3)));
        assert_eq!((z.clone() * &z.conj()).as_rational(), Some(int(13)));
    }

    #[test]
    fn display() {
        let z = Cyclotomic::from_coeffs(3, vec![rat(1, 2), int(-1)]);
        assert_eq!(z.to_string(), "1/2 - z3");
        assert_eq!(Cyclotomic::zero().to_string(), "0");
    }
}
