use preproj_core::catalog::{b2_algebra, type_a_algebra};
use preproj_core::linalg::{Mat, Rational};
use preproj_core::pimod::{is_crystal, iso_test, rng, Morphism, ModuleRep};
use preproj_core::selftest::random_iterated_extension;
use preproj_core::symred::{tilde_lift, verify_symmetrizer_compat, SymPair};
use preproj_core::Error;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn non_symmetric_or_scaled_data_are_refused() {
    assert!(matches!(SymPair::new(&b2_algebra(), 2), Err(Error::Unsupported(_))));
    let a2 = type_a_algebra(2);
    let pair = SymPair::new(&a2, 2).unwrap();
    assert!(matches!(SymPair::new(&pair.lifted, 2), Err(Error::Unsupported(_))));
    let e = ModuleRep::generalized_simple(&b2_algebra(), 0);
    assert!(tilde_lift(&e, 2).is_err());
    assert!(matches!(pair.reduce(&ModuleRep::simple(&a2, 0)), Err(Error::AlgebraMismatch)));
}

#[test]
fn lifted_simple_is_the_generalized_simple() {
    let a3 = type_a_algebra(3);
    for n in [2, 3] {
        let pair = SymPair::new(&a3, n).unwrap();
        for i in 0..3 {
            let lifted = pair.lift(&ModuleRep::simple(&a3, i)).unwrap();
            let e = ModuleRep::generalized_simple(&pair.lifted, i);
            assert!(iso_test(&lifted, &e, 8, 0).unwrap());
        }
    }
}

#[test]
fn products_of_simples_commute_with_reduction() {
    for size in [2, 3] {
        let alg = type_a_algebra(size);
        for n in [2, 3] {
            let pair = SymPair::new(&alg, n).unwrap();
            for i in 0..size {
                for j in 0..size {
                    let (a, b) = (ModuleRep::simple(&alg, i), ModuleRep::simple(&alg, j));
                    let report = verify_symmetrizer_compat(&pair, &a, &b, 8, 0).unwrap();
                    assert!(report.isomorphic, "A{size} n={n} S{}*S{}", i + 1, j + 1);
                    assert_eq!(report.lifted_rank, report.direct_rank);
                }
            }
        }
    }
}

#[test]
fn reduced_identity_is_identity() {
    let alg = type_a_algebra(2);
    let pair = SymPair::new(&alg, 3).unwrap();
    let mut r = rng(3);
    let m = pair.lift(&random_iterated_extension(&alg, 3, &mut r).unwrap()).unwrap();
    let id = Morphism::identity(&m);
    let red = pair.reduce_morphism(&m, &m, &id).unwrap();
    let rm = pair.reduce(&m).unwrap();
    assert_eq!(red.blocks, Morphism::identity(&rm).blocks);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduce_after_lift_is_identity(seed in any::<u64>(), size in 2usize..=3, n in 2usize..=3) {
        let alg = type_a_algebra(size);
        let pair = SymPair::new(&alg, n).unwrap();
        let mut r = rng(seed);
        let m = random_iterated_extension(&alg, 4, &mut r).unwrap();
        let lifted = pair.lift(&m).unwrap();
        prop_assert_eq!(lifted.require_rank().unwrap(), m.require_rank().unwrap());
        prop_assert!(iso_test(&pair.reduce(&lifted).unwrap(), &m, 8, seed).unwrap());
        if is_crystal(&m).unwrap() {
            prop_assert!(is_crystal(&lifted).unwrap());
        }
    }

    #[test]
    fn reduction_ignores_the_choice_of_basis(seed in any::<u64>()) {
        let alg = type_a_algebra(3);
        let pair = SymPair::new(&alg, 2).unwrap();
        let mut r = rng(seed);
        let lifted = pair.lift(&random_iterated_extension(&alg, 3, &mut r).unwrap()).unwrap();
        let p: Vec<Mat> = lifted.dims().iter().map(|&d| loop {
            let m = Mat::from_vec(d, d, (0..d * d).map(|_| Rational::from_int(r.gen_range(-2..=2))).collect());
            if m.is_invertible() { break m; }
        }).collect();
        let moved = lifted.transport(&p).unwrap();
        prop_assert!(iso_test(&pair.reduce(&moved).unwrap(), &pair.reduce(&lifted).unwrap(), 8, seed).unwrap());
    }
}
