mod common;

use jumploci::arith::field::{rat, Rational};
use jumploci::arith::lattice::int_matrix;
use jumploci::par::Exec;
use jumploci::torus::{Subtorus, TranslatedSubtorus};
use jumploci::twisted::{
    charvar_membership, compare_exp, sweep, torsion_sweep_set, twisted_betti, validate_complex, verify_torus_in_charvar, Character,
    LaurentComplex, TorusVerdict,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn euler(dims: &[usize]) -> i64 {
    dims.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

fn random_numeric(rng: &mut impl Rng, n: usize) -> Character {
    Character::numeric((0..n).map(|_| Complex64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(0.0..std::f64::consts::TAU))).collect())
}

fn complex_index() -> impl Strategy<Value = usize> {
    0..common::example_complexes().len()
}

#[test]
fn example_complexes_are_complexes() {
    for (name, c) in common::example_complexes() {
        assert!(validate_complex(&c).is_valid(), "{name}");
    }
}

#[test]
fn sequential_and_parallel_sweeps_agree() {
    for (_, c) in common::example_complexes() {
        let chars = torsion_sweep_set(c.n(), 80, 3);
        let a = sweep(&c, &chars, Exec::Sequential).unwrap();
        let b = sweep(&c, &chars, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn torus_containment_and_refutation() {
    let c = common::pencil_complex();
    let t = TranslatedSubtorus::untranslated(Subtorus::from_generators(3, &int_matrix(&[&[1, -1, 0], &[0, 1, -1]])).unwrap());
    assert!(verify_torus_in_charvar(&c, &t, 1, 1, 0).unwrap().is_certified());
    let line = TranslatedSubtorus::untranslated(Subtorus::from_generators(3, &int_matrix(&[&[1, 0, 0]])).unwrap());
    match verify_torus_in_charvar(&c, &line, 1, 1, 0).unwrap() {
        TorusVerdict::Refuted { character, .. } => {
            assert!(!charvar_membership(&c, 1, 1, &Character::torsion(character)).unwrap());
        }
        v => panic!("expected refutation, got {v:?}"),
    }
}

#[test]
fn compare_exp_agrees_on_examples() {
    let r = compare_exp(&common::torus_model(), &common::torus_complex(), 1, 1, 30, 6, 2).unwrap();
    assert_eq!(r.disagreements, 0);
    let r = compare_exp(&common::pencil_os(), &common::pencil_complex(), 1, 1, 30, 6, 2).unwrap();
    assert_eq!(r.disagreements, 0);
    assert!(r.samples[0].omega.iter().all(|x| x == &Rational::default()) && r.samples[0].agree);
}

fn complex_at(idx: usize) -> LaurentComplex {
    common::example_complexes().swap_remove(idx).1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_constancy(idx in complex_index(), seed in any::<u64>()) {
        let c = complex_at(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for rho in [common::random_torsion(&mut rng, c.n(), 30), random_numeric(&mut rng, c.n())] {
            let b = twisted_betti(&c, &rho).unwrap();
            prop_assert_eq!(euler(&b.dims), c.euler_characteristic());
        }
    }

    #[test]
    fn nesting_and_h0_law(idx in complex_index(), seed in any::<u64>()) {
        let c = complex_at(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = if seed % 5 == 0 { Character::trivial(c.n()) } else { common::random_torsion(&mut rng, c.n(), 12) };
        let b = twisted_betti(&c, &rho).unwrap();
        prop_assert_eq!(b.dims[0] == 1, rho.is_trivial());
        prop_assert!(b.dims[0] <= 1);
        for i in 0..b.dims.len() {
            for k in 0..4 {
                if charvar_membership(&c, i, k + 1, &rho).unwrap() {
                    prop_assert!(charvar_membership(&c, i, k, &rho).unwrap());
                }
            }
        }
    }

    #[test]
    fn conjugation_symmetry(idx in complex_index(), seed in any::<u64>()) {
        let c = complex_at(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = common::random_torsion(&mut rng, c.n(), 24);
        prop_assert_eq!(twisted_betti(&c, &rho).unwrap().dims, twisted_betti(&c, &rho.conj()).unwrap().dims);
        let z = random_numeric(&mut rng, c.n());
        prop_assert_eq!(twisted_betti(&c, &z).unwrap().dims, twisted_betti(&c, &z.conj()).unwrap().dims);
    }

    #[test]
    fn torsion_matches_numeric(idx in complex_index(), seed in any::<u64>()) {
        let c = complex_at(idx);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = common::random_torsion(&mut rng, c.n(), 24);
        let exact = twisted_betti(&c, &rho).unwrap();
        let numeric = twisted_betti(&c, &rho.to_numeric()).unwrap();
        prop_assert!(exact.exact && !numeric.exact);
        prop_assert_eq!(exact.dims, numeric.dims);
    }

    #[test]
    fn certificate_soundness(idx in complex_index(), seed in any::<u64>()) {
        let c = complex_at(idx);
        let n = c.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(0..=n.min(2));
        let gens: Vec<Vec<i64>> = (0..d).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let torus = Subtorus::from_generators(n, &common::int_matrix_from(&gens, n)).unwrap();
        let translate: Vec<Rational> = (0..n).map(|_| if rng.gen_bool(0.5) { rat(0, 1) } else { rat(rng.gen_range(0..6), 6) }).collect();
        let t = TranslatedSubtorus::torsion(torus, translate).unwrap();
        for (i, k) in [(1, 1), (1, 2), (2, 1)] {
            if i > c.top() {
                continue;
            }
            let v = verify_torus_in_charvar(&c, &t, i, k, seed).unwrap();
            if v.is_certified() {
                for _ in 0..30 {
                    let den = rng.gen_range(1..=20);
                    let params: Vec<Rational> = (0..t.dim()).map(|_| rat(rng.gen_range(0..den), den)).collect();
                    let q = t.torsion_point(&params).unwrap();
                    prop_assert!(charvar_membership(&c, i, k, &Character::torsion(q)).unwrap());
                }
            }
        }
    }
}
