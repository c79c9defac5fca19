//! Subtori and translated subtori of `(C*)^n`, exponential images of
//! rational affine subspaces, and exact vanishing of Laurent polynomials on
//! them.
//!
//! A subtorus is stored through its cocharacter lattice `L ⊂ Z^n`: the
//! torus is `exp(L ⊗ C)`, so `t = exp(2πi x)` lies on it iff
//! `x ∈ L_C + Z^n`. A torsion translate `v₀ ∈ (Q/Z)^n` stands for the point
//! `exp(2πi v₀)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::cyclotomic::{cyclotomic_eval, Cyclotomic};
use crate::arith::field::{frac, lcm_of_denominators, primitive_integer_vector, rational_to_f64, Rational};
use crate::arith::lattice::{
    hermite_normal_form, hnf_pivots, int_rank, integer_kernel, is_saturated, saturate_lattice, smith_normal_form, to_rational,
    IntMatrix,
};
use crate::arith::matrix::Matrix;
use crate::arith::poly::{Monomial, Poly};
use crate::error::{check_dim, Error, Result};

/// Tolerance used by numeric-only membership tests.
pub const NUMERIC_TOL: f64 = 1e-8;

/// `e^{2πi x}`.
pub fn unit_circle(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
}

/// An algebraic subgroup `exp(L ⊗ C) ⊂ (C*)^n` for a saturated lattice `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subtorus {
    n: usize,
    lattice: IntMatrix,
}

impl Subtorus {
    /// Requires the rows to span a saturated lattice; stores its HNF basis.
    pub fn new(n: usize, lattice: IntMatrix) -> Result<Self> {
        check_dim(n, lattice.cols())?;
        if !is_saturated(&lattice) {
            return Err(Error::Input("subtorus lattice is not saturated".into()));
        }
        Ok(Subtorus { n, lattice: hermite_normal_form(&lattice) })
    }

    /// The subtorus generated by the given cocharacters (saturating them).
    pub fn from_generators(n: usize, gens: &IntMatrix) -> Result<Self> {
        check_dim(n, gens.cols())?;
        Ok(Subtorus { n, lattice: saturate_lattice(gens) })
    }

    /// The subtorus `{z : z^k = 1 for every row k}`'s identity component.
    pub fn from_equations(n: usize, equations: &IntMatrix) -> Result<Self> {
        check_dim(n, equations.cols())?;
        Ok(Subtorus { n, lattice: integer_kernel(equations) })
    }

    pub fn full(n: usize) -> Self {
        Subtorus { n, lattice: IntMatrix::identity(n) }
    }

    pub fn trivial(n: usize) -> Self {
        Subtorus { n, lattice: IntMatrix::zeros(0, n) }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.lattice.rows()
    }

    pub fn lattice(&self) -> &IntMatrix {
        &self.lattice
    }

    pub fn lattice_rows_i64(&self) -> Vec<Vec<i64>> {
        self.lattice.row_vecs().into_iter().map(|r| r.iter().map(|x| x.to_i64().expect("lattice entry fits i64")).collect()).collect()
    }

    /// Integer basis of the annihilator of the lattice: the torus is the
    /// identity component of `{z : z^k = 1}` over these rows `k`.
    pub fn equations(&self) -> IntMatrix {
        if self.dim() == 0 {
            return IntMatrix::identity(self.n);
        }
        integer_kernel(&self.lattice)
    }

    /// `other ⊆ self` as subgroups.
    pub fn contains_torus(&self, other: &Subtorus) -> bool {
        self.n == other.n && int_rank(&self.lattice.stack(&other.lattice)) == self.dim()
    }
}

/// The translate of a subtorus.
#[derive(Clone, Debug, PartialEq)]
pub enum Translate {
    /// `v₀ ∈ [0,1)^n`, canonical modulo `L_Q + Z^n`.
    Torsion(Vec<Rational>),
    /// A non-certified complex point of `(C*)^n`.
    Numeric(Vec<Complex64>),
}

/// A coset `t₀·T` of a subtorus `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslatedSubtorus {
    torus: Subtorus,
    translate: Translate,
}

/// Result of a membership-type test, flagged by whether it is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decision {
    pub value: bool,
    pub exact: bool,
}

impl TranslatedSubtorus {
    pub fn torsion(torus: Subtorus, translate: Vec<Rational>) -> Result<Self> {
        check_dim(torus.n, translate.len())?;
        let v = canonical_translate(&torus, &translate);
        Ok(TranslatedSubtorus { torus, translate: Translate::Torsion(v) })
    }

    pub fn numeric(torus: Subtorus, translate: Vec<Complex64>) -> Result<Self> {
        check_dim(torus.n, translate.len())?;
        if translate.iter().any(|z| z.norm() == 0.0 || !z.is_finite()) {
            return Err(Error::Input("numeric translate must lie in (C*)^n".into()));
        }
        Ok(TranslatedSubtorus { torus, translate: Translate::Numeric(translate) })
    }

    /// The subtorus itself, translated by the identity.
    pub fn untranslated(torus: Subtorus) -> Self {
        let n = torus.n;
        TranslatedSubtorus { torus, translate: Translate::Torsion(vec![Rational::zero(); n]) }
    }

    pub fn torus(&self) -> &Subtorus {
        &self.torus
    }

    pub fn translate(&self) -> &Translate {
        &self.translate
    }

    pub fn torsion_translate(&self) -> Option<&[Rational]> {
        match &self.translate {
            Translate::Torsion(v) => Some(v),
            Translate::Numeric(_) => None,
        }
    }

    pub fn ambient(&self) -> usize {
        self.torus.n
    }

    pub fn dim(&self) -> usize {
        self.torus.dim()
    }

    /// The torsion point `v₀ + Σ p_k c_k mod 1` of a torsion-translated
    /// subtorus, for lattice basis rows `c_k`.
    pub fn torsion_point(&self, params: &[Rational]) -> Option<Vec<Rational>> {
        let v0 = self.torsion_translate()?;
        assert_eq!(params.len(), self.dim());
        let l = to_rational(&self.torus.lattice);
        Some(
            (0..self.ambient())
                .map(|j| {
                    let mut x = v0[j].clone();
                    for (k, p) in params.iter().enumerate() {
                        x += p * &l[(k, j)];
                    }
                    frac(&x)
                })
                .collect(),
        )
    }

    /// The complex point `t₀ · Π s_k^{c_k}` with `s_k = e^{2πi θ_k}`.
    pub fn complex_point(&self, theta: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(theta.len(), self.dim());
        let rows = self.torus.lattice_rows_i64();
        let base = self.complex_translate();
        (0..self.ambient())
            .map(|j| {
                let mut phase = Complex64::zero();
                for (k, t) in theta.iter().enumerate() {
                    phase += t * rows[k][j] as f64;
                }
                base[j] * (phase * Complex64::new(0.0, 2.0 * std::f64::consts::PI)).exp()
            })
            .collect()
    }

    pub fn complex_translate(&self) -> Vec<Complex64> {
        match &self.translate {
            Translate::Torsion(v) => v.iter().map(|q| unit_circle(rational_to_f64(q))).collect(),
            Translate::Numeric(z) => z.clone(),
        }
    }

    /// Numeric test of `z ∈ t₀·T` through the equations `z^k = t₀^k`.
    pub fn contains_complex_point(&self, z: &[Complex64]) -> bool {
        let t0 = self.complex_translate();
        let eqs = self.torus.equations();
        (0..eqs.rows()).all(|r| {
            let mut acc = Complex64::one();
            for j in 0..self.ambient() {
                let e = eqs[(r, j)].to_i32().expect("equation exponent fits i32");
                acc *= (z[j] / t0[j]).powi(e);
            }
            (acc - Complex64::one()).norm() <= NUMERIC_TOL
        })
    }
}

/// Reduces `v` modulo `L_Q + Z^n` to its lexicographically smallest
/// representative in `[0,1)^n`.
///
/// Pivot coordinates of the HNF basis can always be cleared. The remaining
/// freedom is the finite group generated by `(e_k C_piv⁻¹ C) mod 1` on the
/// free coordinates; scaled to an integer lattice, its row HNF reduces one
/// coordinate at a time to the lexicographic minimum.
pub fn canonical_translate(torus: &Subtorus, v: &[Rational]) -> Vec<Rational> {
    let n = torus.n;
    let c = to_rational(&torus.lattice);
    let pivots = hnf_pivots(&torus.lattice);
    let mut w: Vec<Rational> = v.to_vec();
    for (k, &p) in pivots.iter().enumerate() {
        let a = &w[p] / &c[(k, p)];
        if !a.is_zero() {
            for j in 0..n {
                w[j] -= &a * &c[(k, j)];
            }
        }
    }
    let mut w: Vec<Rational> = w.iter().map(frac).collect();
    if pivots.is_empty() {
        return w;
    }
    let d = pivots.len();
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    if free.is_empty() {
        return w;
    }
    let cp = Matrix::from_fn(d, d, |i, j| c[(i, pivots[j])].clone());
    let cpt = cp.transpose();
    let gens: Vec<Vec<Rational>> = (0..d)
        .map(|k| {
            // a·C_piv = e_k
            let e: Vec<Rational> = (0..d).map(|j| if j == k { Rational::one() } else { Rational::zero() }).collect();
            let a = cpt.solve(&e).expect("pivot block is invertible");
            free.iter().map(|&j| frac(&(0..d).fold(Rational::zero(), |s, i| s + &a[i] * &c[(i, j)]))).collect()
        })
        .collect();
    let den = lcm_of_denominators(gens.iter().flatten());
    let m = free.len();
    let mut rows: Vec<Vec<BigInt>> = gens.iter().map(|g| g.iter().map(|x| (x * &den).to_integer()).collect()).collect();
    rows.extend((0..m).map(|i| (0..m).map(|j| if i == j { den.clone() } else { BigInt::zero() }).collect()));
    let h = hermite_normal_form(&Matrix::from_rows(m, rows));
    let dq = Rational::from_integer(den);
    let mut x: Vec<Rational> = free.iter().map(|&j| &w[j] * &dq).collect();
    for r in 0..h.rows() {
        let p = (0..m).find(|&j| !h[(r, j)].is_zero()).expect("HNF rows are nonzero");
        let q = (&x[p] / Rational::from_integer(h[(r, p)].clone())).floor();
        if !q.is_zero() {
            for j in p..m {
                x[j] -= &q * Rational::from_integer(h[(r, j)].clone());
            }
        }
    }
    for (&j, xj) in free.iter().zip(x) {
        w[j] = xj / &dq;
    }
    w
}

/// Exact test `w − v₀ ∈ L_Q + Z^n`, equivalently `K·(w − v₀) ∈ Z^{n−d}`
/// for the annihilator basis `K`.
pub fn membership(w: &[Rational], t: &TranslatedSubtorus) -> Result<Decision> {
    check_dim(t.ambient(), w.len())?;
    match &t.translate {
        Translate::Torsion(v0) => {
            let diff: Vec<Rational> = w.iter().zip(v0).map(|(a, b)| a - b).collect();
            Ok(Decision { value: in_lattice_plus_integers(&t.torus, &diff), exact: true })
        }
        Translate::Numeric(_) => {
            let z: Vec<Complex64> = w.iter().map(|q| unit_circle(rational_to_f64(q))).collect();
            Ok(Decision { value: t.contains_complex_point(&z), exact: false })
        }
    }
}

fn in_lattice_plus_integers(torus: &Subtorus, x: &[Rational]) -> bool {
    let k = to_rational(&torus.equations());
    k.mul_vec(x).iter().all(Rational::is_integer)
}

/// `S ⊆ T`: direction containment by ranks and translate membership.
pub fn containment(s: &TranslatedSubtorus, t: &TranslatedSubtorus) -> Result<Decision> {
    check_dim(t.ambient(), s.ambient())?;
    let lattice_ok = t.torus.contains_torus(&s.torus);
    match (&s.translate, &t.translate) {
        (Translate::Torsion(a), Translate::Torsion(_)) => {
            let m = membership(a, t)?;
            Ok(Decision { value: lattice_ok && m.value, exact: true })
        }
        _ => Ok(Decision { value: lattice_ok && t.contains_complex_point(&s.complex_translate()), exact: false }),
    }
}

/// Identity component of `S ∩ T` and the number of connected components.
///
/// The identity component has lattice `L_S ∩ L_T`; the component group is
/// the torsion of `Z^n / (L_S + L_T)`, whose order is the product of the
/// invariant factors of the stacked bases.
pub fn intersection(s: &Subtorus, t: &Subtorus) -> Result<(Subtorus, BigInt)> {
    check_dim(s.n, t.n)?;
    let n = s.n;
    let stacked = s.lattice.stack(&t.lattice);
    let count = if stacked.rows() == 0 {
        BigInt::one()
    } else {
        smith_normal_form(&stacked).invariant_factors().iter().fold(BigInt::one(), |a, b| a * b)
    };
    if s.dim() == 0 || t.dim() == 0 {
        return Ok((Subtorus::trivial(n), count));
    }
    let neg_t = t.lattice.map(|x| -x.clone());
    let m = s.lattice.stack(&neg_t);
    // (a, b) with a·C_S = b·C_T
    let rel = integer_kernel(&m.transpose());
    let ds = s.dim();
    let rows: Vec<Vec<BigInt>> = rel
        .row_vecs()
        .into_iter()
        .map(|r| (0..n).map(|j| (0..ds).fold(BigInt::zero(), |acc, k| acc + &r[k] * &s.lattice[(k, j)])).collect())
        .collect();
    let lat = Matrix::from_rows(n, rows);
    Ok((Subtorus { n, lattice: saturate_lattice(&lat) }, count))
}

/// `v₀ + span_Q(directions) ⊂ Q^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSubspaceQ {
    base: Vec<Rational>,
    directions: Vec<Vec<Rational>>,
}

impl AffineSubspaceQ {
    pub fn new(base: Vec<Rational>, directions: Vec<Vec<Rational>>) -> Result<Self> {
        let n = base.len();
        for d in &directions {
            check_dim(n, d.len())?;
        }
        if Matrix::from_rows(n, directions.clone()).rank() != directions.len() {
            return Err(Error::Input("affine subspace directions are linearly dependent".into()));
        }
        Ok(AffineSubspaceQ { base, directions })
    }

    pub fn ambient(&self) -> usize {
        self.base.len()
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn directions(&self) -> &[Vec<Rational>] {
        &self.directions
    }

    pub fn point(&self, t: &[Rational]) -> Vec<Rational> {
        assert_eq!(t.len(), self.dim());
        (0..self.ambient())
            .map(|j| {
                let mut x = self.base[j].clone();
                for (k, tk) in t.iter().enumerate() {
                    x += tk * &self.directions[k][j];
                }
                x
            })
            .collect()
    }

    /// `exp(2πi (v₀ + Σ t_k d_k))` at complex parameters.
    pub fn exp_point(&self, t: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(t.len(), self.dim());
        (0..self.ambient())
            .map(|j| {
                let mut x = Complex64::new(rational_to_f64(&self.base[j]), 0.0);
                for (k, tk) in t.iter().enumerate() {
                    x += tk * rational_to_f64(&self.directions[k][j]);
                }
                (x * Complex64::new(0.0, 2.0 * std::f64::consts::PI)).exp()
            })
            .collect()
    }
}

/// The closure of `exp(V)`: lattice saturated from the cleared directions,
/// translate `v₀ mod 1`.
pub fn exp_image(v: &AffineSubspaceQ) -> TranslatedSubtorus {
    let n = v.ambient();
    let rows: Vec<Vec<BigInt>> = v.directions.iter().map(|d| primitive_integer_vector(d)).collect();
    let torus = Subtorus { n, lattice: saturate_lattice(&Matrix::from_rows(n, rows)) };
    TranslatedSubtorus::torsion(torus, v.base.clone()).expect("lengths agree")
}

/// Zero set of a list of Laurent polynomials in `(C*)^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentZeroSet {
    pub generators: Vec<Poly<Rational>>,
}

/// Terms of `f` on the parametrized torus sharing one character `s^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentGroup {
    pub exponent: Vec<i64>,
    pub coefficient: Cyclotomic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VanishingCertificate {
    pub vanishes: bool,
    /// All exponent groups in increasing exponent order.
    pub groups: Vec<ExponentGroup>,
    /// The first group with a nonzero coefficient sum, if any.
    pub witness: Option<ExponentGroup>,
}

/// Exact test that `f` vanishes on a torsion-translated subtorus.
///
/// Under `z_j = e^{2πi v₀_j} Π_k s_k^{(c_k)_j}` the monomial `z^a` becomes
/// `ζ_N^{N(a·v₀)} s^{(a·c_k)_k}`; distinct characters of `s` are linearly
/// independent, so `f` vanishes iff every exponent group sums to zero.
pub fn vanishes_on_torus(f: &Poly<Rational>, t: &TranslatedSubtorus) -> Result<VanishingCertificate> {
    check_dim(t.ambient(), f.nvars())?;
    let v0 = t
        .torsion_translate()
        .ok_or_else(|| Error::Input("exact vanishing test needs a torsion translate".into()))?;
    let rows = t.torus.lattice_rows_i64();
    let mut groups: BTreeMap<Vec<i64>, Cyclotomic> = BTreeMap::new();
    for (m, c) in f.terms() {
        let e: Vec<i64> = rows.iter().map(|r| r.iter().zip(&m.0).map(|(x, y)| x * y).sum()).collect();
        let val = cyclotomic_eval(v0, &m.0) * &Cyclotomic::from_rational_in(1, c.clone());
        let slot = groups.entry(e).or_insert_with(Cyclotomic::zero);
        *slot = slot.clone() + &val;
    }
    let groups: Vec<ExponentGroup> = groups.into_iter().map(|(exponent, coefficient)| ExponentGroup { exponent, coefficient }).collect();
    let witness = groups.iter().find(|g| !g.coefficient.is_zero()).cloned();
    Ok(VanishingCertificate { vanishes: witness.is_none(), groups, witness })
}

/// Exact test of `exp(V) ⊆ {f = 0}`.
pub fn vanishes_on_exp_image(f: &Poly<Rational>, v: &AffineSubspaceQ) -> Result<VanishingCertificate> {
    vanishes_on_torus(f, &exp_image(v))
}

/// Numeric value of a rational Laurent polynomial at a complex point.
pub fn eval_complex(f: &Poly<Rational>, z: &[Complex64]) -> Complex64 {
    f.terms().fold(Complex64::zero(), |acc, (m, c)| acc + monomial_value(m, z) * rational_to_f64(c))
}

fn monomial_value(m: &Monomial, z: &[Complex64]) -> Complex64 {
    z.iter().zip(&m.0).fold(Complex64::one(), |acc, (x, &e)| acc * x.powi(e as i32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxLindemannReport {
    /// `exp(V) ⊆ W`, checked exactly generator by generator.
    pub exp_in_zero_set: bool,
    pub generator_checks: Vec<VanishingCertificate>,
    pub failing_generator: Option<usize>,
    pub dim_v: usize,
    pub claimed_dim_w: usize,
    pub dims_match: bool,
    /// `exp_image(V)`, emitted when the inclusion holds and the dimensions
    /// match.
    pub predicted: Option<TranslatedSubtorus>,
    /// Every generator vanishes on the predicted translated subtorus.
    pub predicted_verified: bool,
    pub machine_checked: Vec<&'static str>,
    pub assumed: Vec<&'static str>,
}

/// Checks the hypotheses that can be checked exactly and predicts the
/// translated subtorus `W = exp(V)`-closure. Irreducibility of `W` and its
/// dimension are taken from the caller.
pub fn ax_lindemann_report(v: &AffineSubspaceQ, w: &LaurentZeroSet, claimed_dim_w: usize) -> Result<AxLindemannReport> {
    let checks: Vec<VanishingCertificate> = w.generators.iter().map(|f| vanishes_on_exp_image(f, v)).collect::<Result<_>>()?;
    let failing_generator = checks.iter().position(|c| !c.vanishes);
    let exp_in_zero_set = failing_generator.is_none();
    let dims_match = v.dim() == claimed_dim_w;
    let mut machine_checked = vec!["V is rational", "exp(V) is contained in W"];
    let (predicted, predicted_verified) = if exp_in_zero_set && dims_match {
        let t = exp_image(v);
        let ok = w.generators.iter().map(|f| vanishes_on_torus(f, &t).map(|c| c.vanishes)).collect::<Result<Vec<_>>>()?;
        machine_checked.push("W vanishes on the predicted translated subtorus");
        (Some(t), ok.into_iter().all(|b| b))
    } else {
        (None, false)
    };
    Ok(AxLindemannReport {
        exp_in_zero_set,
        generator_checks: checks,
        failing_generator,
        dim_v: v.dim(),
        claimed_dim_w,
        dims_match,
        predicted,
        predicted_verified,
        machine_checked,
        assumed: vec!["W is irreducible", "dim W equals the claimed dimension"],
    })
}
