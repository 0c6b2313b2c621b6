use preproj_core::catalog::{a2_suite, b2_algebra, leclerc_algebra, leclerc_module, type_a_algebra};
use preproj_core::linalg::Rational;
use preproj_core::pimod::{decompose, ext1_dim, hom_dim, iso_test, rng, ModuleRep};
use preproj_core::selftest::random_iterated_extension;
use preproj_core::starop::{generic_cokernel, generic_extension, generic_kernel, FLAG_HEURISTIC};
use preproj_core::Error;
use proptest::prelude::*;

#[test]
fn a2_products_of_simples() {
    let a2 = a2_suite();
    let s12 = generic_extension(&a2.s1, &a2.s2, 8, 0).unwrap();
    let s21 = generic_extension(&a2.s2, &a2.s1, 8, 0).unwrap();
    for s in [&s12, &s21] {
        assert!(s.certified && s.rigid && s.flags.is_empty());
        assert_eq!(s.module().require_rank().unwrap(), vec![1, 1]);
        assert_eq!(decompose(s.module(), 0).unwrap().len(), 1);
    }
    assert!(!iso_test(s12.module(), s21.module(), 8, 0).unwrap());
    // S1 is the top of S1*S2: it is a quotient, S2 is not
    assert_eq!(hom_dim(s12.module(), &a2.s1).unwrap(), 1);
    assert_eq!(hom_dim(s12.module(), &a2.s2).unwrap(), 0);
}

#[test]
fn extension_maps_form_a_short_exact_sequence() {
    let a2 = a2_suite();
    let s = generic_extension(&a2.s1, &a2.s2, 8, 0).unwrap();
    let e = &s.extension;
    assert!(e.inject.is_intertwiner(&a2.s2, &e.module));
    assert!(e.project.is_intertwiner(&e.module, &a2.s1));
    assert!(e.inject.is_injective() && e.project.is_surjective());
    assert!(e.project.compose(&e.inject).is_zero());
}

#[test]
fn products_of_non_rigid_factors_are_flagged() {
    let alg = leclerc_algebra();
    let one = Rational::one();
    let a = leclerc_module(&alg, &one, &Rational::zero()).unwrap();
    let b = leclerc_module(&alg, &Rational::zero(), &one).unwrap();
    let s = generic_extension(&a, &b, 8, 0).unwrap();
    assert!(!s.certified);
    assert!(s.flags.iter().any(|f| f == FLAG_HEURISTIC));
}

#[test]
fn product_output_is_reproducible() {
    let alg = b2_algebra();
    let e1 = ModuleRep::generalized_simple(&alg, 0);
    let e2 = ModuleRep::generalized_simple(&alg, 1);
    let x = generic_extension(&e1, &e2, 8, 7).unwrap().to_json();
    let y = generic_extension(&e1, &e2, 8, 7).unwrap().to_json();
    assert_eq!(serde_json::to_string(&x).unwrap(), serde_json::to_string(&y).unwrap());
    assert_eq!(x["seed"], 7);
    assert_eq!(x["trials"], 8);
}

#[test]
fn division_without_embedding_or_surjection_is_undefined() {
    let alg = b2_algebra();
    let e1 = ModuleRep::generalized_simple(&alg, 0);
    let e2 = ModuleRep::generalized_simple(&alg, 1);
    assert!(matches!(generic_cokernel(&e1, &e2, 8, 0), Err(Error::DivisionUndefined(_))));
    assert!(matches!(generic_kernel(&e2, &e1, 8, 0), Err(Error::DivisionUndefined(_))));
    // 2/1/1 has socle 1, so E2 fits dimensionwise but does not embed
    let m4 = generic_extension(&e2, &e1, 8, 0).unwrap().extension.module;
    assert!(matches!(generic_cokernel(&m4, &e2, 8, 0), Err(Error::DivisionUndefined(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn products_add_ranks_and_split_without_extensions(seed in any::<u64>(), b2 in any::<bool>()) {
        let alg = if b2 { b2_algebra() } else { type_a_algebra(2) };
        let mut r = rng(seed);
        let m = random_iterated_extension(&alg, 3, &mut r).unwrap();
        let n = random_iterated_extension(&alg, 3, &mut r).unwrap();
        let s = generic_extension(&m, &n, 4, seed).unwrap();
        let rank: Vec<i64> = m.require_rank().unwrap().iter().zip(n.require_rank().unwrap()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(s.module().require_rank().unwrap(), rank);
        prop_assert!(ext1_dim(s.module(), s.module()).unwrap() == s.ext1_self);
        if ext1_dim(&m, &n).unwrap() == 0 {
            prop_assert!(iso_test(s.module(), &n.direct_sum(&m).unwrap(), 8, seed).unwrap());
        }
    }
}
