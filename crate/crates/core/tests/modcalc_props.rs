mod common;

use std::sync::Arc;

use proptest::prelude::*;
use semidual_core::constructions::dualizing_module;
use semidual_core::modcalc::{
    hom_dim, hom_module, is_homomorphism, matlis_dual, regular_module, residue_field_module, tensor_module,
};
use semidual_core::{Engine, FiniteLocalAlgebra, FiniteModule, IsoOutcome, PrimeField};

fn algebra(shape: &[usize], p: u64) -> Arc<FiniteLocalAlgebra<PrimeField>> {
    let f = common::gf(p);
    match shape {
        [a] => common::trivial_ext(*a, f),
        [a, b] => common::tensor2(*a, *b, f),
        _ => unreachable!(),
    }
}

fn zoo(alg: &Arc<FiniteLocalAlgebra<PrimeField>>, seed: u64) -> Vec<FiniteModule<PrimeField>> {
    let r = regular_module(alg);
    let k = residue_field_module(alg);
    let d = dualizing_module(alg);
    let kr = k.direct_sum(&r).unwrap();
    let sd = common::scramble(&d, seed);
    vec![r, k, d, kr, sd]
}

fn shapes() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![
        (1usize..=3).prop_map(|a| vec![a]),
        ((1usize..=2), (1usize..=2)).prop_map(|(a, b)| vec![a, b]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hom_dim_matches_oracle(shape in shapes(), seed in any::<u64>(), i in 0usize..5, j in 0usize..5) {
        let p = 32003;
        let alg = algebra(&shape, p);
        let z = zoo(&alg, seed);
        prop_assert_eq!(hom_dim(&z[i], &z[j]).unwrap(), common::hom_dim_oracle(&z[i], &z[j], p));
        let h = hom_module(&z[i], &z[j]).unwrap();
        prop_assert_eq!(h.module().dim(), h.dim());
        for map in h.maps() {
            prop_assert!(is_homomorphism(map, &z[i], &z[j]));
        }
    }

    #[test]
    fn matlis_dual_is_an_involution(shape in shapes(), seed in any::<u64>(), i in 0usize..5) {
        let alg = algebra(&shape, 101);
        let m = &zoo(&alg, seed)[i];
        let dd = matlis_dual(&matlis_dual(m));
        prop_assert_eq!(dd.actions(), m.actions());
        prop_assert_eq!(dd.degrees(), m.degrees());
    }

    #[test]
    fn unit_laws(shape in shapes(), seed in any::<u64>(), i in 0usize..5) {
        let alg = algebra(&shape, 32003);
        let m = &zoo(&alg, seed)[i];
        let r = regular_module(&alg);
        let e = Engine::new(seed);
        let h = hom_module(&r, m).unwrap().into_module();
        prop_assert!(e.is_isomorphic(&h, m).unwrap().is_isomorphic());
        let t = tensor_module(&r, m).unwrap();
        prop_assert!(e.is_isomorphic(&t, m).unwrap().is_isomorphic());
        let t2 = tensor_module(m, &r).unwrap();
        prop_assert_eq!(t2.dim(), m.dim());
    }

    #[test]
    fn resolutions_are_exact_minimal_and_basis_free(shape in shapes(), seed in any::<u64>(), i in 0usize..4) {
        let alg = algebra(&shape, 32003);
        let m = &zoo(&alg, seed)[i];
        let s = common::scramble(m, seed ^ 1);
        let e = Engine::new(0);
        let rs = e.resolution(&s, 3);
        prop_assert!(rs.verify().is_ok(), "{:?}", rs.verify());
        prop_assert_eq!(rs.betti().to_vec(), e.betti(m, 3));
        let rm = e.resolution(m, 3);
        prop_assert!(rm.verify().is_ok());
    }

    #[test]
    fn tor_is_symmetric_and_ext_dualizes(shape in shapes(), seed in any::<u64>(), i in 0usize..5, j in 0usize..5) {
        let alg = algebra(&shape, 32003);
        let z = zoo(&alg, seed);
        let e = Engine::new(0);
        let (m, n) = (&z[i], &z[j]);
        prop_assert_eq!(e.tor_dims_direct(m, n, 2).unwrap(), e.tor_dims_direct(n, m, 2).unwrap());
        let lhs = e.ext_dims_direct(m, n, 2).unwrap();
        let rhs = e.ext_dims_direct(&matlis_dual(n), &matlis_dual(m), 2).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs[0], hom_dim(m, n).unwrap());
        prop_assert_eq!(e.tor_dims_direct(m, n, 0).unwrap()[0], tensor_module(m, n).unwrap().dim());
    }

    #[test]
    fn scrambled_modules_are_isomorphic(shape in shapes(), seed in any::<u64>(), i in 0usize..5) {
        let alg = algebra(&shape, 32003);
        let m = &zoo(&alg, seed)[i];
        let s = common::scramble(m, seed.wrapping_add(7));
        let out = Engine::new(seed).is_isomorphic(m, &s).unwrap();
        match out {
            IsoOutcome::Isomorphic(x) => prop_assert!(is_homomorphism(&x, m, &s) && x.rank() == m.dim()),
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn iso_search_is_reproducible(shape in shapes(), seed in any::<u64>()) {
        let alg = algebra(&shape, 32003);
        let d = dualizing_module(&alg);
        let s = common::scramble(&d, seed);
        let a = Engine::new(seed).is_isomorphic(&d, &s).unwrap();
        let b = Engine::new(seed).is_isomorphic(&d, &s).unwrap();
        match (a, b) {
            (IsoOutcome::Isomorphic(x), IsoOutcome::Isomorphic(y)) => prop_assert_eq!(x, y),
            other => prop_assert!(false, "{other:?}"),
        }
    }
}

#[test]
fn algebra_validation_on_tensor_products() {
    for a in 1..=3 {
        for b in 1..=3 {
            let alg = common::tensor2(a, b, PrimeField::default());
            assert!(alg.validate().is_ok());
            assert_eq!(alg.dim(), (a + 1) * (b + 1));
            assert_eq!(alg.nilpotency_index(), 3);
            assert_eq!(alg.type_of(), a * b);
        }
    }
}
