#![allow(dead_code)]

use jumploci::arith::field::{int, rat, Rational};
use jumploci::arith::lattice::IntMatrix;
use jumploci::arith::matrix::Matrix;
use jumploci::arith::Cyclotomic;
use jumploci::cdga::{AlgebraBuilder, GradedAlgebra};
use jumploci::hodge::OneHodgeStructure;
use jumploci::twisted::{presentation_to_complex, Character, LaurentComplex, Presentation};
use jumploci::torus::{exp_image, membership, AffineSubspaceQ, Subtorus, TranslatedSubtorus};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;

pub fn torus_model() -> GradedAlgebra {
    GradedAlgebra::exterior(&["a", "b"], &[])
}

pub fn heisenberg() -> GradedAlgebra {
    GradedAlgebra::exterior(&["a", "b", "c"], &[(2, vec![((0, 1), int(1))])])
}

pub fn pencil_os() -> GradedAlgebra {
    AlgebraBuilder::new()
        .basis(1, &["e1", "e2", "e3"])
        .basis(2, &["e12", "e13"])
        .product("e1", "e2", &[("e12", int(1))])
        .product("e1", "e3", &[("e13", int(1))])
        .product("e2", "e3", &[("e12", int(-1)), ("e13", int(1))])
        .build()
        .unwrap()
}

/// `Λ(g1..g4)`, `dg3 = λ g1g2`, `dg4 = α g1g2 + β g1g3 + γ g2g3`.
pub fn random_cdga(rng: &mut impl Rng) -> GradedAlgebra {
    let mut c = || int(rng.gen_range(-2..=2));
    let (l, a, b, g) = (c(), c(), c(), c());
    GradedAlgebra::exterior(&["g1", "g2", "g3", "g4"], &[(2, vec![((0, 1), l)]), (3, vec![((0, 1), a), ((0, 2), b), ((1, 2), g)])])
}

pub fn presented(gens: &[&str], rels: &[&str]) -> LaurentComplex {
    let g: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
    let r = rels.iter().map(|w| Presentation::parse_word(&g, w).unwrap()).collect();
    presentation_to_complex(&Presentation::new(g, r).unwrap()).unwrap()
}

pub fn wedge() -> LaurentComplex {
    presentation_to_complex(&Presentation::free(2)).unwrap()
}

pub fn torus_complex() -> LaurentComplex {
    presented(&["a", "b"], &["a b a^-1 b^-1"])
}

pub fn pencil_complex() -> LaurentComplex {
    presented(&["a", "b", "c"], &["[a,bc]", "[b,ca]"])
}

/// Surface group of genus 2.
pub fn genus2_complex() -> LaurentComplex {
    presented(&["a1", "b1", "a2", "b2"], &["[a1,b1][a2,b2]"])
}

pub fn example_complexes() -> Vec<(&'static str, LaurentComplex)> {
    vec![
        ("wedge", wedge()),
        ("torus", torus_complex()),
        ("pencil", pencil_complex()),
        ("genus2", genus2_complex()),
        ("free3", presentation_to_complex(&Presentation::free(3)).unwrap()),
    ]
}

pub fn random_rational(rng: &mut impl Rng, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn random_torsion(rng: &mut impl Rng, n: usize, max_order: i64) -> Character {
    let order = rng.gen_range(1..=max_order);
    Character::torsion((0..n).map(|_| rat(rng.gen_range(0..order), order)).collect())
}

/// Product of random elementary matrices: unimodular by construction.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> IntMatrix {
    let mut g = IntMatrix::identity(n);
    if n < 2 {
        return g;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = BigInt::from(rng.gen_range(-2..=2));
        for k in 0..n {
            let v = &g[(i, k)] + &c * &g[(j, k)];
            g[(i, k)] = v;
        }
        if rng.gen_bool(0.3) {
            g.swap_rows(i, j);
        }
    }
    g
}

/// Elliptic blocks `F = (1, τ)`, `Im τ ≠ 0`, and (1,1) blocks, in a random
/// basis of `Λ`.
pub fn random_hodge(rng: &mut impl Rng, elliptic: usize, pure: usize) -> OneHodgeStructure {
    random_hodge_with_subs(rng, elliptic, pure).0
}

/// As [`random_hodge`], together with sublattices known to carry sub
/// 1-Hodge structures: sums of elliptic blocks and a saturated piece of the
/// (1,1) part.
pub fn random_hodge_with_subs(rng: &mut impl Rng, elliptic: usize, pure: usize) -> (OneHodgeStructure, Vec<IntMatrix>) {
    let mut h: Option<OneHodgeStructure> = None;
    for _ in 0..elliptic {
        let mut im = random_rational(rng, 5, 4);
        if im == int(0) {
            im = int(1);
        }
        let tau = Cyclotomic::gaussian(random_rational(rng, 5, 4), im);
        let e = OneHodgeStructure::elliptic(tau).unwrap();
        h = Some(match h {
            None => e,
            Some(x) => x.direct_sum(&e),
        });
    }
    if pure > 0 {
        let p = OneHodgeStructure::pure_11(pure);
        h = Some(match h {
            None => p,
            Some(x) => x.direct_sum(&p),
        });
    }
    let h = h.expect("at least one block");
    let r = h.rank();
    let g = random_unimodular(rng, r, 3 * r);
    let mut subs = Vec::new();
    for _ in 0..3 {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for b in 0..elliptic {
            if rng.gen_bool(0.5) {
                rows.push(g.row(2 * b).to_vec());
                rows.push(g.row(2 * b + 1).to_vec());
            }
        }
        if pure > 0 {
            // a primitive vector of the (1,1) block, extended to a random rank
            let k = rng.gen_range(0..=pure);
            let basis = random_unimodular(rng, pure, 2 * pure);
            for i in 0..k {
                let mut v = vec![BigInt::from(0); r];
                for j in 0..pure {
                    for (t, x) in v.iter_mut().enumerate() {
                        *x += &basis[(i, j)] * &g[(2 * elliptic + j, t)];
                    }
                }
                rows.push(v);
            }
        }
        subs.push(Matrix::from_rows(r, rows));
    }
    (h.base_change(&g).unwrap(), subs)
}

pub fn int_matrix_from(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

pub fn random_affine(rng: &mut impl Rng, n: usize, d: usize, den: i64) -> AffineSubspaceQ {
    loop {
        let base: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-den..=den), rng.gen_range(1..=den))).collect();
        let dirs: Vec<Vec<Rational>> =
            (0..d).map(|_| (0..n).map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=den))).collect()).collect();
        if let Ok(v) = AffineSubspaceQ::new(base, dirs) {
            return v;
        }
    }
}

/// The same affine subspace with another base point and direction basis.
pub fn represent(rng: &mut impl Rng, v: &AffineSubspaceQ) -> AffineSubspaceQ {
    let d = v.dim();
    let shift: Vec<Rational> = (0..d).map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=7))).collect();
    let base = v.point(&shift);
    let mut dirs = v.directions().to_vec();
    for _ in 0..3 * d {
        if d < 2 {
            break;
        }
        let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
        if i != j {
            let c = rat(rng.gen_range(-3..=3), rng.gen_range(1..=4));
            let add: Vec<Rational> = dirs[j].iter().map(|x| x * &c).collect();
            for (x, y) in dirs[i].iter_mut().zip(add) {
                *x += y;
            }
        }
    }
    for dir in dirs.iter_mut() {
        let s = rat(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=5));
        for x in dir.iter_mut() {
            *x *= &s;
        }
    }
    AffineSubspaceQ::new(base, dirs).unwrap()
}

pub fn random_subtorus(rng: &mut impl Rng, n: usize, dims: std::ops::RangeInclusive<usize>) -> Subtorus {
    let d = rng.gen_range(dims);
    let gens: Vec<Vec<i64>> = (0..d).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    Subtorus::from_generators(n, &int_matrix_from(&gens, n)).unwrap()
}

/// Rows of integer annihilators `a` of `V` with `a·v₀ ∈ Z`.
pub fn vanishing_exponents(v: &AffineSubspaceQ) -> Vec<Vec<i64>> {
    let img = exp_image(v);
    let k = img.torus().equations();
    k.row_vecs()
        .into_iter()
        .map(|row| {
            let dot: Rational = row.iter().zip(v.base()).map(|(a, b)| Rational::from_integer(a.clone()) * b).sum();
            let m = dot.denom().clone();
            row.iter().map(|a| (a * &m).to_i64().unwrap()).collect()
        })
        .collect()
}

/// `m`-torsion points of `s` lying in `t`.
pub fn brute_force_common(s: &Subtorus, t: &Subtorus, m: i64) -> u64 {
    let rows = s.lattice_rows_i64();
    let d = s.dim();
    let target = TranslatedSubtorus::untranslated(t.clone());
    let total = (m as u64).pow(d as u32);
    let mut hits = 0;
    for code in 0..total {
        let mut c = code;
        let params: Vec<i64> = (0..d)
            .map(|_| {
                let x = (c % m as u64) as i64;
                c /= m as u64;
                x
            })
            .collect();
        let x: Vec<Rational> = (0..s.ambient()).map(|j| rat(params.iter().zip(&rows).map(|(p, r)| p * r[j]).sum(), m)).collect();
        if membership(&x, &target).unwrap().value {
            hits += 1;
        }
    }
    hits
}
