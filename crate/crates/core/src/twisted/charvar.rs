use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::cyclotomic::{torsion_exponents, Cyclotomic};
use crate::arith::field::{rat, rational_to_f64, Rational};
use crate::arith::matrix::Matrix;
use crate::arith::numeric::numeric_rank;
use crate::arith::poly::{indexed_vars, Monomial, Poly};
use crate::arith::rank::rank_over_fraction_field;
use crate::error::{check_dim, Result};
use crate::par::{self, Exec};
use crate::torus::{Translate, TranslatedSubtorus};

use super::character::Character;
use super::complex::LaurentComplex;

/// Homology dimensions of an evaluated complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedBetti {
    pub dims: Vec<usize>,
    /// `true` for cyclotomic evaluation, `false` for the SVD fallback.
    pub exact: bool,
}

fn betti_from_ranks(ranks: &[usize], boundary_ranks: &[usize]) -> Vec<usize> {
    (0..ranks.len())
        .map(|i| {
            let out = if i > 0 { boundary_ranks[i - 1] } else { 0 };
            let inc = boundary_ranks.get(i).copied().unwrap_or(0);
            ranks[i] - out - inc
        })
        .collect()
}

/// Evaluates a rational Laurent matrix at the torsion point `q`, inside
/// `Q(ζ_N)` for `N` the order of `q`.
fn eval_torsion(m: &Matrix<Poly<Rational>>, q: &[Rational]) -> Matrix<Cyclotomic> {
    let (n, exps) = torsion_exponents(q);
    let nb = BigInt::from(n);
    m.map(|p| {
        let mut coeffs = vec![Rational::zero(); n as usize];
        for (mono, c) in p.terms() {
            let e: BigInt = exps.iter().zip(&mono.0).map(|(x, &a)| x * BigInt::from(a)).sum();
            let e = e.mod_floor(&nb).to_usize().expect("exponent below order");
            coeffs[e] += c;
        }
        Cyclotomic::from_coeffs(n, coeffs)
    })
}

fn eval_numeric(m: &Matrix<Poly<Rational>>, z: &[Complex64]) -> Matrix<Complex64> {
    m.map(|p| {
        p.terms().fold(Complex64::zero(), |acc, (mono, c)| {
            let v = z.iter().zip(&mono.0).fold(Complex64::new(1.0, 0.0), |a, (x, &e)| a * x.powi(e as i32));
            acc + v * rational_to_f64(c)
        })
    })
}

/// Homology dimensions of `C ⊗ C_ρ`: exact over `Q(ζ_N)` for torsion `ρ`,
/// singular-value rank for numeric `ρ`.
pub fn twisted_betti(c: &LaurentComplex, rho: &Character) -> Result<TwistedBetti> {
    check_dim(c.n(), rho.len())?;
    let (boundary_ranks, exact) = match rho {
        Character::Torsion(q) => (c.boundaries().iter().map(|b| eval_torsion(b, q).rank()).collect::<Vec<_>>(), true),
        Character::Numeric(z) => (c.boundaries().iter().map(|b| numeric_rank(&eval_numeric(b, z))).collect(), false),
    };
    Ok(TwistedBetti { dims: betti_from_ranks(c.ranks(), &boundary_ranks), exact })
}

/// `ρ ∈ Σ^i_k`, i.e. `dim H_i(C ⊗ C_ρ) ≥ k`.
pub fn charvar_membership(c: &LaurentComplex, i: usize, k: usize, rho: &Character) -> Result<bool> {
    Ok(twisted_betti(c, rho)?.dims.get(i).copied().unwrap_or(0) >= k)
}

/// Twisted Betti numbers at every character, in input order.
pub fn sweep(c: &LaurentComplex, chars: &[Character], exec: Exec) -> Result<Vec<TwistedBetti>> {
    exec.map(chars, |rho| twisted_betti(c, rho)).into_iter().collect()
}

/// A torsion character whose coordinates have denominators dividing a
/// random order in `1..=max_order`.
pub fn random_torsion_character(rng: &mut impl Rng, n: usize, max_order: i64) -> Character {
    let order = rng.gen_range(1..=max_order);
    Character::torsion((0..n).map(|_| rat(rng.gen_range(0..order), order)).collect())
}

/// Every character of order dividing 12 when `n ≤ 3`, otherwise `count`
/// random characters of order at most 60.
pub fn torsion_sweep_set(n: usize, count: usize, seed: u64) -> Vec<Character> {
    if n <= 3 {
        let total = 12usize.pow(n as u32);
        return (0..total)
            .map(|mut code| {
                let q = (0..n)
                    .map(|_| {
                        let a = (code % 12) as i64;
                        code /= 12;
                        rat(a, 12)
                    })
                    .collect();
                Character::torsion(q)
            })
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_torsion_character(&mut rng, n, 60)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusCertificate {
    pub degree: usize,
    pub k: usize,
    pub generic_betti: usize,
    /// Generic ranks of `∂_i` and `∂_{i+1}` on the translated subtorus.
    pub generic_ranks: (usize, usize),
    /// Order `N` of the translate; ranks were taken over `Q(ζ_N)(s)`.
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TorusVerdict {
    /// The whole translated subtorus lies in `Σ^i_k`.
    Certified(TorusCertificate),
    /// A torsion character on the translated subtorus outside `Σ^i_k`.
    Refuted { character: Vec<Rational>, betti: usize, generic_betti: usize },
    /// Numeric translate: membership sampled, never certified.
    NumericOnly { samples: usize, all_members: bool, witness: Option<Vec<Complex64>> },
}

impl TorusVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, TorusVerdict::Certified(_))
    }
}

/// Restricts a Laurent matrix to `t_j = ζ_N^{N v₀_j} Π_k s_k^{(c_k)_j}`.
fn restrict_to_torus(m: &Matrix<Poly<Rational>>, t: &TranslatedSubtorus, v0: &[Rational]) -> Matrix<Poly<Cyclotomic>> {
    let rows = t.torus().lattice_rows_i64();
    let svars = indexed_vars("s", t.dim());
    let (order, exps) = torsion_exponents(v0);
    let nb = BigInt::from(order);
    m.map(|p| {
        p.map_monomials(svars.clone(), |mono, c| {
            let e: BigInt = exps.iter().zip(&mono.0).map(|(x, &a)| x * BigInt::from(a)).sum();
            let e = e.mod_floor(&nb).to_i64().expect("exponent below order");
            let coeff = Cyclotomic::zeta_pow(order, e) * &Cyclotomic::from_rational_in(order, c.clone());
            let s = Monomial(rows.iter().map(|r| r.iter().zip(&mono.0).map(|(x, y)| x * y).sum()).collect());
            (coeff, s)
        })
    })
}

/// Certifies `T ⊆ Σ^i_k` by generic ranks over `Q(ζ_N)(s_1, …, s_d)`;
/// semicontinuity of rank carries the generic bound to every point of `T`.
/// On failure, returns a torsion character of `T` outside `Σ^i_k`.
pub fn verify_torus_in_charvar(c: &LaurentComplex, t: &TranslatedSubtorus, i: usize, k: usize, seed: u64) -> Result<TorusVerdict> {
    check_dim(c.n(), t.ambient())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v0 = match t.translate() {
        Translate::Torsion(v0) => v0.clone(),
        Translate::Numeric(_) => return Ok(numeric_torus_check(c, t, i, k, &mut rng)),
    };
    let rank_of = |deg: usize| -> Result<usize> {
        if deg == 0 || deg > c.top() {
            return Ok(0);
        }
        rank_over_fraction_field(&restrict_to_torus(c.boundary(deg), t, &v0))
    };
    let out = rank_of(i)?;
    let inc = rank_of(i + 1)?;
    let generic_betti = c.ranks().get(i).copied().unwrap_or(0) - out - inc;
    if generic_betti >= k {
        let order = torsion_exponents(&v0).0;
        return Ok(TorusVerdict::Certified(TorusCertificate { degree: i, k, generic_betti, generic_ranks: (out, inc), order }));
    }
    // a generic torsion point attains the generic ranks; search in batches
    let d = t.dim();
    for round in 0..64u64 {
        let max_den = 5 + 2 * round as i64;
        let batch: Vec<Vec<Rational>> = (0..32)
            .map(|_| {
                let den = rng.gen_range(2..=max_den);
                let params: Vec<Rational> = (0..d).map(|_| rat(rng.gen_range(0..den), den)).collect();
                t.torsion_point(&params).expect("torsion translate")
            })
            .collect();
        let dims = par::map(&batch, |q| twisted_betti(c, &Character::Torsion(q.clone())).map(|b| b.dims.get(i).copied().unwrap_or(0)));
        for (q, b) in batch.into_iter().zip(dims) {
            let b = b?;
            if b < k {
                return Ok(TorusVerdict::Refuted { character: q, betti: b, generic_betti });
            }
        }
    }
    Err(crate::Error::Invalid("no sampled torsion point attains the generic rank".into()))
}

fn numeric_torus_check(c: &LaurentComplex, t: &TranslatedSubtorus, i: usize, k: usize, rng: &mut ChaCha8Rng) -> TorusVerdict {
    let samples = 64;
    for _ in 0..samples {
        let theta: Vec<Complex64> = (0..t.dim()).map(|_| Complex64::new(rng.gen_range(0.0..1.0), 0.0)).collect();
        let z = t.complex_point(&theta);
        let member = charvar_membership(c, i, k, &Character::Numeric(z.clone())).unwrap_or(false);
        if !member {
            return TorusVerdict::NumericOnly { samples, all_members: false, witness: Some(z) };
        }
    }
    TorusVerdict::NumericOnly { samples, all_members: true, witness: None }
}

#[cfg(test)]
mod tests {
    use super::super::fox::{presentation_to_complex, Presentation};
    use super::*;
    use crate::arith::field::int;
    use crate::arith::lattice::int_matrix;
    use crate::torus::Subtorus;

    fn wedge() -> LaurentComplex {
        presentation_to_complex(&Presentation::free(2)).unwrap()
    }

    fn presented(gens: &[&str], rels: &[&str]) -> LaurentComplex {
        let g: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
        let r = rels.iter().map(|w| Presentation::parse_word(&g, w).unwrap()).collect();
        presentation_to_complex(&Presentation::new(g, r).unwrap()).unwrap()
    }

    fn torus2() -> LaurentComplex {
        presented(&["a", "b"], &["a b a^-1 b^-1"])
    }

    fn pencil() -> LaurentComplex {
        presented(&["a", "b", "c"], &["[a,bc]", "[b,ca]"])
    }

    fn ch(xs: &[(i64, i64)]) -> Character {
        Character::torsion(xs.iter().map(|&(a, b)| rat(a, b)).collect())
    }

    #[test]
    fn betti_examples() {
        let w = wedge();
        assert_eq!(twisted_betti(&w, &Character::trivial(2)).unwrap().dims, vec![1, 2]);
        assert_eq!(twisted_betti(&w, &ch(&[(1, 3), (0, 1)])).unwrap().dims, vec![0, 1]);
        let t = torus2();
        assert_eq!(twisted_betti(&t, &Character::trivial(2)).unwrap().dims, vec![1, 2, 1]);
        for rho in [ch(&[(1, 2), (0, 1)]), ch(&[(1, 3), (2, 5)]), ch(&[(0, 1), (3, 4)])] {
            assert_eq!(twisted_betti(&t, &rho).unwrap().dims, vec![0, 0, 0]);
        }
        let z = Character::numeric(vec![Complex64::new(2.0, 1.0), Complex64::new(0.5, 0.0)]);
        let b = twisted_betti(&t, &z).unwrap();
        assert!(!b.exact);
        assert_eq!(b.dims, vec![0, 0, 0]);
    }

    #[test]
    fn membership_examples() {
        let w = wedge();
        assert!(charvar_membership(&w, 1, 2, &Character::trivial(2)).unwrap());
        for rho in torsion_sweep_set(2, 0, 0) {
            assert_eq!(charvar_membership(&w, 1, 2, &rho).unwrap(), rho.is_trivial());
            assert!(charvar_membership(&w, 1, 1, &rho).unwrap());
            assert!(charvar_membership(&w, 1, 0, &rho).unwrap());
        }
    }

    #[test]
    fn torus_certificates() {
        let full = TranslatedSubtorus::untranslated(Subtorus::full(2));
        assert!(verify_torus_in_charvar(&wedge(), &full, 1, 1, 1).unwrap().is_certified());
        match verify_torus_in_charvar(&wedge(), &full, 1, 2, 1).unwrap() {
            TorusVerdict::Refuted { character, betti, .. } => {
                assert!(character.iter().any(|x| !x.is_zero()));
                assert_eq!(betti, 1);
            }
            v => panic!("expected refutation, got {v:?}"),
        }
        assert!(matches!(verify_torus_in_charvar(&torus2(), &full, 1, 1, 1).unwrap(), TorusVerdict::Refuted { .. }));
        let t111 = TranslatedSubtorus::untranslated(Subtorus::from_equations(3, &int_matrix(&[&[1, 1, 1]])).unwrap());
        assert!(verify_torus_in_charvar(&pencil(), &t111, 1, 1, 1).unwrap().is_certified());
        assert!(!verify_torus_in_charvar(&pencil(), &t111, 1, 2, 1).unwrap().is_certified());
        let point = TranslatedSubtorus::untranslated(Subtorus::trivial(3));
        assert!(verify_torus_in_charvar(&pencil(), &point, 1, 2, 1).unwrap().is_certified());
    }

    #[test]
    fn pencil_off_torus_is_refuted() {
        let c = pencil();
        for rho in torsion_sweep_set(3, 0, 0).into_iter().step_by(7) {
            let Character::Torsion(q) = &rho else { unreachable!() };
            let on = (q.iter().fold(Rational::zero(), |a, b| a + b)).is_integer();
            assert_eq!(charvar_membership(&c, 1, 1, &rho).unwrap(), on, "{q:?}");
        }
    }

    #[test]
    fn translated_certificate() {
        // the pencil torus translated off the identity leaves Σ¹₁
        let torus = Subtorus::from_equations(3, &int_matrix(&[&[1, 1, 1]])).unwrap();
        let t = TranslatedSubtorus::torsion(torus, vec![rat(1, 2), int(0), int(0)]).unwrap();
        assert!(matches!(verify_torus_in_charvar(&pencil(), &t, 1, 1, 3).unwrap(), TorusVerdict::Refuted { .. }));
        let num = TranslatedSubtorus::numeric(Subtorus::full(2), vec![Complex64::new(1.0, 0.0); 2]).unwrap();
        assert!(matches!(
            verify_torus_in_charvar(&wedge(), &num, 1, 1, 3).unwrap(),
            TorusVerdict::NumericOnly { all_members: true, .. }
        ));
    }

    #[test]
    fn parallel_sweep_matches_sequential() {
        let chars = torsion_sweep_set(3, 0, 0);
        let c = pencil();
        assert_eq!(sweep(&c, &chars[..200], Exec::Sequential).unwrap(), sweep(&c, &chars[..200], Exec::Parallel).unwrap());
        assert_eq!(torsion_sweep_set(4, 10, 5).len(), 10);
    }
}
