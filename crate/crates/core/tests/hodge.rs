mod common;

use jumploci::arith::field::{int, rat, Rational};
use jumploci::arith::lattice::{int_rank, is_saturated};
use jumploci::arith::Cyclotomic;
use jumploci::hodge::{
    hodge_numbers, lambda_zero, quotient_hs, ses_bookkeeping, sub_hs, validate_1hs, verify_bdr_certificate, BdrCertificate, BdrPiece,
    OneHodgeStructure, SubHsOutcome,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn shape(seed: u64) -> (ChaCha8Rng, usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = rng.gen_range(0..=2);
    let p = rng.gen_range(if e == 0 { 1 } else { 0 }..=2);
    (rng, e, p)
}

#[test]
fn blocks_and_ses_examples() {
    let e = OneHodgeStructure::elliptic(Cyclotomic::i()).unwrap();
    let s = ses_bookkeeping(&e).unwrap();
    assert!(s.is_exact() && s.rank == 2 && s.dim_w == 2 && s.h11 == 0);
    let p = OneHodgeStructure::pure_11(1);
    let s = ses_bookkeeping(&p).unwrap();
    assert!(s.is_exact() && s.dim_w == 0 && s.h11 == 1);
    let m = e.direct_sum(&p);
    let s = ses_bookkeeping(&m).unwrap();
    assert!(s.is_exact() && s.dim_w == 2 && s.h11 == 1);
    let real = OneHodgeStructure::elliptic(Cyclotomic::gaussian(rat(1, 2), int(0))).unwrap();
    assert!(!validate_1hs(&real).is_valid());
    assert!(hodge_numbers(&real).is_err());
}

#[test]
fn torsion_quotient_refused() {
    let h = OneHodgeStructure::pure_11(2);
    let l = jumploci::hodge::lattice_from_rows(&[vec![2, 0]], 2);
    assert!(matches!(sub_hs(&h, &l).unwrap(), SubHsOutcome::Refused(_)));
    let cert = BdrCertificate { pieces: vec![BdrPiece { lattice: l, translate: vec![int(0), int(0)], witness: None }] };
    let rep = verify_bdr_certificate(&h, &cert).unwrap();
    assert!(!rep.all_certified());
    assert_eq!(rep.pieces[0].reason.as_deref(), Some("torsion quotient"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_structures_are_valid(seed in any::<u64>()) {
        let (mut rng, e, p) = shape(seed);
        let h = common::random_hodge(&mut rng, e, p);
        prop_assert!(validate_1hs(&h).is_valid());
        let n = hodge_numbers(&h).unwrap();
        prop_assert_eq!(n.h10, n.h01);
        prop_assert_eq!((n.h10, n.h11), (e, p));
        prop_assert_eq!(n.h10 + n.h01, h.dim_w());
        prop_assert!(ses_bookkeeping(&h).unwrap().is_exact());
    }

    #[test]
    fn lambda_zero_rank_and_saturation(seed in any::<u64>()) {
        let (mut rng, e, p) = shape(seed);
        let h = common::random_hodge(&mut rng, e, p);
        let l0 = lambda_zero(&h);
        prop_assert_eq!(int_rank(&l0), h.dim_w());
        prop_assert!(is_saturated(&l0));
    }

    #[test]
    fn additivity_and_round_trip(seed in any::<u64>()) {
        let (mut rng, e, p) = shape(seed);
        let (h, subs) = common::random_hodge_with_subs(&mut rng, e, p);
        let total = hodge_numbers(&h).unwrap();
        for l in subs {
            let w = match sub_hs(&h, &l).unwrap() {
                SubHsOutcome::Witness(w) => w,
                SubHsOutcome::Refused(why) => return Err(TestCaseError::fail(format!("block sublattice refused: {why}"))),
            };
            let q = quotient_hs(&h, &w).unwrap();
            let a = hodge_numbers(&w.structure).unwrap();
            let b = hodge_numbers(&q).unwrap();
            prop_assert_eq!((a.h10 + b.h10, a.h01 + b.h01, a.h11 + b.h11), (total.h10, total.h01, total.h11));
            let translate: Vec<Rational> = (0..h.rank()).map(|_| rat(rng.gen_range(0..5), 5)).collect();
            let cert = BdrCertificate { pieces: vec![BdrPiece { lattice: w.sublattice.clone(), translate, witness: Some(w) }] };
            prop_assert!(verify_bdr_certificate(&h, &cert).unwrap().all_certified());
        }
    }

    #[test]
    fn perturbations_never_crash(seed in any::<u64>()) {
        let (mut rng, e, p) = shape(seed);
        let h = common::random_hodge(&mut rng, e, p);
        let mut f = h.f_basis().to_vec();
        let i = rng.gen_range(0..f.len());
        let j = rng.gen_range(0..h.rank());
        f[i][j] = f[i][j].clone() + &Cyclotomic::gaussian(common::random_rational(&mut rng, 7, 5), common::random_rational(&mut rng, 7, 5));
        if let Ok(g) = OneHodgeStructure::new(h.rank(), h.w_basis().to_vec(), f) {
            let rep = validate_1hs(&g);
            prop_assert_eq!(rep.is_valid(), rep.failures.is_empty());
            prop_assert_eq!(hodge_numbers(&g).is_ok(), rep.is_valid());
        }
    }
}
