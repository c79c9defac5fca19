//! Sparse multivariate Laurent polynomials.
//!
//! A [`Poly`] with only non-negative exponents is an ordinary polynomial;
//! the same type serves both roles. Terms are kept in graded
//! lexicographic order and zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::field::{Field, Rational};
use crate::error::{Error, Result};

pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

/// Variables `prefix1, …, prefixN`.
pub fn indexed_vars(prefix: &str, n: usize) -> Vars {
    (1..=n).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().into()
}

/// Exponent vector, ordered by total degree then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// Parses `1` or a `*`-separated product of `name` / `name^e` factors.
    pub fn parse(vars: &[String], s: &str) -> Result<Monomial> {
        let mut exps = vec![0i64; vars.len()];
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial(exps));
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.trim().parse().map_err(|_| Error::Input(format!("bad exponent in {factor:?}")))?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            let idx = vars.iter().position(|v| v == name).ok_or_else(|| Error::Input(format!("unknown variable {name:?}")))?;
            exps[idx] += e;
        }
        Ok(Monomial(exps))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq)]
pub struct Poly<F> {
    vars: Vars,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Poly<F> {
    pub fn zero(vars: Vars) -> Self {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vars, c: F) -> Self {
        let n = vars.len();
        Self::term(vars, Monomial::one(n), c)
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, F::one())
    }

    pub fn term(vars: Vars, m: Monomial, c: F) -> Self {
        assert_eq!(m.0.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { vars, terms }
    }

    /// The `i`-th variable.
    pub fn var(vars: Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::term(vars, Monomial(e), F::one())
    }

    pub fn from_terms(vars: Vars, terms: impl IntoIterator<Item = (Vec<i64>, F)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    /// Largest total degree of a term (`None` for the zero polynomial).
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        assert_eq!(m.0.len(), self.vars.len(), "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, x)| (m.clone(), x.clone() * c)).collect() }
    }

    /// Product with the monomial `z^m`.
    pub fn shift(&self, m: &Monomial) -> Self {
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(k, x)| (k.mul(m), x.clone())).collect() }
    }

    /// Componentwise minimum of the exponent vectors.
    pub fn min_exponents(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| Monomial(acc.0.iter().zip(&m.0).map(|(a, b)| *a.min(b)).collect())))
    }

    fn check_vars(&self, other: &Self) {
        assert!(self.vars == other.vars, "polynomials over different variables: {:?} vs {:?}", self.vars, other.vars);
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`
    /// in the polynomial ring. Both operands must be polynomials.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        self.check_vars(d);
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        if d.terms.len() == 1 {
            let (m, c) = d.leading_term().unwrap();
            let inv = c.inv();
            let mut out = BTreeMap::new();
            for (k, x) in &self.terms {
                let q = k.div(m);
                if !q.is_polynomial() && self.is_polynomial() {
                    return None;
                }
                out.insert(q, x.clone() * &inv);
            }
            return Some(Poly { vars: self.vars.clone(), terms: out });
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.inv())).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.vars.clone());
        while let Some((m, c)) = rem.leading_term() {
            if !dm.divides(m) {
                return None;
            }
            let qm = m.div(&dm);
            let qc = c.clone() * &dc;
            rem = &rem - &d.shift(&qm).scale(&qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Evaluates at `point`, mapping coefficients with `coeff`. Negative
    /// exponents use field inverses.
    pub fn eval_with<G: Field>(&self, coeff: impl Fn(&F) -> G, point: &[G]) -> G {
        assert_eq!(point.len(), self.nvars());
        let mut acc = G::zero();
        for (m, c) in &self.terms {
            let mut v = coeff(c);
            for (x, &e) in point.iter().zip(&m.0) {
                if e != 0 {
                    let base = if e < 0 { x.inv() } else { x.clone() };
                    v = v * &pow(&base, e.unsigned_abs());
                }
            }
            acc = acc + &v;
        }
        acc
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        let mut p = Poly::zero(self.vars.clone());
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    /// Applies a monomial map: each term `c·z^m` becomes `g(m)·c'·s^{e(m)}`
    /// where `(c', e) = f(m, c)`, over the new variable list.
    pub fn map_monomials<G: Field>(&self, new_vars: Vars, f: impl Fn(&Monomial, &F) -> (G, Monomial)) -> Poly<G> {
        let mut p = Poly::zero(new_vars);
        for (m, c) in &self.terms {
            let (nc, nm) = f(m, c);
            p.add_term(nm, nc);
        }
        p
    }

    /// Substitutes polynomial `images[j]` for variable `j`; requires
    /// non-negative exponents.
    pub fn substitute(&self, images: &[Poly<F>]) -> Result<Poly<F>> {
        crate::error::check_dim(self.nvars(), images.len())?;
        let target = images.first().map(|p| p.vars.clone()).unwrap_or_else(|| Arc::from(Vec::<String>::new()));
        let mut out = Poly::zero(target.clone());
        for (m, c) in &self.terms {
            if !m.is_polynomial() {
                return Err(Error::Input("substitution into a Laurent monomial with negative exponent".into()));
            }
            let mut t = Poly::constant(target.clone(), c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                for _ in 0..e {
                    t = &t * img;
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }
}

impl Poly<Rational> {
    /// Laurent polynomial in `z` from monomial terms with integer coefficients.
    pub fn from_int_terms(vars: Vars, terms: &[(&[i64], i64)]) -> Self {
        Self::from_terms(vars, terms.iter().map(|(e, c)| (e.to_vec(), super::field::int(*c))))
    }
}

pub fn pow<G: Field>(x: &G, mut e: u64) -> G {
    let mut base = x.clone();
    let mut acc = G::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * &base;
        }
        base = base.clone() * &base;
        e >>= 1;
    }
    acc
}

impl<'a, F: Field> Add<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &'a Poly<F>) -> Poly<F> {
        self.check_vars(rhs);
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a, F: Field> Sub<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &'a Poly<F>) -> Poly<F> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, F: Field> Mul<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &'a Poly<F>) -> Poly<F> {
        self.check_vars(rhs);
        let mut out = Poly::zero(self.vars.clone());
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x.clone() * y);
            }
        }
        out
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

fn fmt_monomial(vars: &[String], m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (v, &e) in vars.iter().zip(&m.0) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

impl<F: Field + fmt::Display> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let is_const = m.0.iter().all(|&e| e == 0);
            if is_const {
                write!(f, "{c}")?;
            } else if c.is_one() {
                fmt_monomial(&self.vars, m, f)?;
            } else {
                write!(f, "({c})*")?;
                fmt_monomial(&self.vars, m, f)?;
            }
        }
        Ok(())
    }
}

impl<F: Field + fmt::Display> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::int;
    use num_traits::Zero;

    fn xy() -> Vars {
        vars(&["x", "y"])
    }

    fn p(terms: &[(&[i64], i64)]) -> Poly<Rational> {
        Poly::from_int_terms(xy(), terms)
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let a = p(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = p(&[(&[1, 0], 1), (&[0, 1], -1)]);
        let prod = &a * &b;
        assert_eq!(prod, p(&[(&[2, 0], 1), (&[0, 2], -1)]));
        assert!((&a - &a).is_zero());
        assert_eq!(prod.to_string(), "x^2 + (-1)*y^2");
    }

    #[test]
    fn exact_division() {
        let a = p(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = p(&[(&[1, 0], 1), (&[0, 1], -1), (&[0, 0], 3)]);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        let x = p(&[(&[1, 0], 1)]);
        assert!(a.exact_div(&b).is_none());
        assert!(p(&[(&[0, 1], 1)]).exact_div(&x).is_none());
    }

    #[test]
    fn laurent_eval() {
        let f = p(&[(&[1, -1], 1), (&[0, 0], -1)]);
        assert!(f.eval_with(|c| c.clone(), &[int(3), int(3)]).is_zero());
        assert_eq!(f.eval_with(|c| c.clone(), &[int(4), int(2)]), int(1));
    }

    #[test]
    fn parse_monomial() {
        let v: Vec<String> = vec!["t1".into(), "t2".into()];
        assert_eq!(Monomial::parse(&v, "t1^2*t2^-1").unwrap(), Monomial(vec![2, -1]));
        assert_eq!(Monomial::parse(&v, "1").unwrap(), Monomial(vec![0, 0]));
        assert!(Monomial::parse(&v, "t3").is_err());
    }

    #[test]
    fn substitution() {
        // f(x, y) = x*y evaluated at x = y + 1, y = y
        let f = p(&[(&[1, 1], 1)]);
        let y = Poly::var(xy(), 1);
        let img = vec![&y + &Poly::one(xy()), y.clone()];
        let g = f.substitute(&img).unwrap();
        assert_eq!(g, p(&[(&[0, 2], 1), (&[0, 1], 1)]));
    }

    #[test]
    fn grlex_order() {
        let mut ms = vec![Monomial(vec![0, 2]), Monomial(vec![1, 0]), Monomial(vec![2, 0]), Monomial(vec![0, 0])];
        ms.sort();
        assert_eq!(ms, vec![Monomial(vec![0, 0]), Monomial(vec![1, 0]), Monomial(vec![0, 2]), Monomial(vec![2, 0])]);
    }
}
