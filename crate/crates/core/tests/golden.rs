mod common;

use std::fs;
use std::sync::Arc;

use num_bigint::BigInt;
use semidual_core::bundle::{verify_bundle, write_bundle};
use semidual_core::chains::{
    chain_from_tor_independent, dagger_iterate, derive_b_family, is_sd_n_full, is_suitable, strongly_tor_independent,
    verify_prop_p1,
};
use semidual_core::constructions::{build_instance, dualizing_module, external_tensor_over};
use semidual_core::modcalc::{hom_dim, regular_module, residue_field_module};
use semidual_core::series::{bass_series, poincare_series, verify_t1};
use semidual_core::{
    build_example, BassMethod, Chain, DaggerWord, Engine, ExampleSpec, FieldSpec, FiniteLocalAlgebra, PrimeField,
    Rationals, Status, TruncatedSeries,
};

fn ints(s: &TruncatedSeries) -> Vec<i128> {
    s.coeffs().iter().map(|c| i128::try_from(c.clone()).unwrap()).collect()
}

fn spec(a: &[usize], bound: usize) -> ExampleSpec {
    let mut s = ExampleSpec::with_defaults(a.to_vec(), FieldSpec::Prime(32003)).unwrap();
    s.bound = bound;
    s
}

#[test]
fn poincare_examples() {
    let f = PrimeField::default();
    let a = common::trivial_ext(2, f);
    let e = Engine::new(0);
    let k = residue_field_module(&a);
    assert_eq!(ints(&poincare_series(&e, &k, 8)), common::expand(&[], &[2], 8));
    let free = semidual_core::FiniteModule::free(&a, 3);
    assert_eq!(ints(&poincare_series(&e, &free, 4)), vec![3, 0, 0, 0, 0]);
    let ab = common::tensor2(2, 3, f);
    let kab = residue_field_module(&ab);
    assert_eq!(ints(&poincare_series(&e, &kab, 5)), common::expand(&[], &[2, 3], 5));
}

#[test]
fn bass_examples() {
    let f = PrimeField::default();
    let e = Engine::new(0);
    let a = common::trivial_ext(2, f);
    assert_eq!(ints(&bass_series(&e, &regular_module(&a), 4).unwrap()), vec![2, 3, 6, 12, 24]);
    assert_eq!(ints(&bass_series(&e, &dualizing_module(&a), 4).unwrap()), vec![1, 0, 0, 0, 0]);
    let ab = common::tensor2(2, 3, f);
    let r = regular_module(&ab);
    assert_eq!(ints(&bass_series(&e, &r, 3).unwrap()), common::expand(&[2, 3], &[2, 3], 3));
    assert_eq!(
        e.bass_numbers(&r, 3, BassMethod::ExtDirect),
        e.bass_numbers(&r, 3, BassMethod::Matlis)
    );
}

#[test]
fn b_family_and_daggers_on_2_3() {
    let inst = build_instance(&spec(&[2, 3], 6), PrimeField::default()).unwrap();
    let e = Engine::new(0);
    let fam = &inst.family;
    assert_eq!(e.betti(fam.b(1), 0)[0], 2);
    assert_eq!(e.betti(fam.b(2), 0)[0], 3);
    assert!(e.is_isomorphic(fam.subset(0b11), inst.chain.module(2)).unwrap().is_isomorphic());
    let w = DaggerWord::new(vec![1, 2], 2).unwrap();
    let c12 = dagger_iterate(&inst.chain, &w).unwrap();
    assert_eq!(e.betti(&c12, 0)[0], 3);
    assert!(e.is_isomorphic(&c12, fam.b(2)).unwrap().is_isomorphic());
    let w = DaggerWord::new(vec![2], 2).unwrap();
    assert!(e.is_isomorphic(&dagger_iterate(&inst.chain, &w).unwrap(), inst.chain.module(2)).unwrap().is_isomorphic());
    assert!(dagger_iterate(&inst.chain, &DaggerWord::new(vec![3], 3).unwrap()).is_err());
}

#[test]
fn tor_independence_and_fullness_on_2_3() {
    let inst = build_instance(&spec(&[2, 3], 8), PrimeField::default()).unwrap();
    let e = Engine::new(0);
    let bs = inst.family.singles();
    assert!(strongly_tor_independent(&e, bs, 8).holds());
    assert!(is_sd_n_full(&e, &inst.algebra, bs, 8).holds());
    let rebuilt = chain_from_tor_independent(&e, &inst.algebra, bs, 6).unwrap();
    for i in 0..=2 {
        assert!(e.is_isomorphic(rebuilt.module(i), inst.chain.module(i)).unwrap().is_isomorphic());
    }
    // Too few factors for m^3 = 0 to be m^{n+1}.
    assert!(!is_sd_n_full(&e, &inst.algebra, &bs[..1], 4).holds());
}

#[test]
fn prop_p1_on_2_3() {
    let inst = build_instance(&spec(&[2, 3], 6), PrimeField::default()).unwrap();
    let e = Engine::new(0);
    let chain = Chain::new(&e, inst.chain.modules().to_vec(), 6).unwrap();
    let fam = derive_b_family(&chain);
    let p1 = verify_prop_p1(&e, &chain, &fam);
    assert_eq!(p1.status(), Status::Pass, "{p1:?}");
    assert_eq!(p1.class_count, 4);
    assert_eq!(p1.beta0_fingerprint, vec![1, 2, 3, 6]);
    assert_eq!(p1.nested_pairs, 9);
    let s = is_suitable(&e, &chain);
    assert!(s.verdict.holds());
    assert_eq!(s.entries.len(), 6);
}

#[test]
fn hom_of_external_tensors_factors() {
    let f = PrimeField::default();
    let a = common::trivial_ext(2, f);
    let b = common::trivial_ext(3, f);
    let ab = Arc::new(FiniteLocalAlgebra::tensor_algebra(&a, &b).unwrap());
    let pick = |x: &Arc<FiniteLocalAlgebra<PrimeField>>| vec![regular_module(x), dualizing_module(x), residue_field_module(x)];
    let (ma, mb) = (pick(&a), pick(&b));
    for m1 in &ma {
        for m2 in &mb {
            let m = external_tensor_over(m1, m2, &ab).unwrap();
            for n1 in &ma {
                for n2 in &mb {
                    let n = external_tensor_over(n1, n2, &ab).unwrap();
                    assert_eq!(hom_dim(&m, &n).unwrap(), hom_dim(m1, n1).unwrap() * hom_dim(m2, n2).unwrap());
                }
            }
        }
    }
}

#[test]
fn t1_small_cases() {
    let f = PrimeField::default();
    let e = Engine::new(0);
    let k = Arc::new(FiniteLocalAlgebra::base_field(f));
    let chain = Chain::new(&e, vec![regular_module(&k)], 8).unwrap();
    let r = verify_t1(&e, &chain, 4);
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.poincare_k.unwrap().coeffs(), &[BigInt::from(1), 0.into(), 0.into(), 0.into(), 0.into()]);
    let a = common::trivial_ext(2, f);
    let chain = Chain::new(&e, vec![regular_module(&a), dualizing_module(&a)], 8).unwrap();
    let r = verify_t1(&e, &chain, 8);
    assert_eq!((r.status, r.roots), (Status::Pass, Some(vec![2])));
}

#[test]
fn single_factor_example_passes_everywhere() {
    let (inst, report) = build_example(&spec(&[2], 8), PrimeField::default(), 0).unwrap();
    assert_eq!(inst.algebra.dim(), 3);
    assert_eq!(report.status, Status::Pass, "{}", report.to_text());
    let (_, q) = build_example(&spec(&[2], 4).clone().with_field(FieldSpec::Rationals), Rationals, 0).unwrap();
    assert_ne!(q.status, Status::Fail, "{}", q.to_text());
}

trait WithField {
    fn with_field(self, f: FieldSpec) -> Self;
}

impl WithField for ExampleSpec {
    fn with_field(mut self, f: FieldSpec) -> Self {
        self.field = f;
        self
    }
}

#[test]
fn bundles_are_deterministic_and_reverify() {
    let s = spec(&[2, 2], 3);
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let (inst, report) = build_example(&s, PrimeField::default(), 5).unwrap();
        assert_eq!(report.status, Status::Pass, "{}", report.to_text());
        write_bundle(d.path(), &s, &inst, &report).unwrap();
    }
    let mut names: Vec<_> = ["algebra.json", "chain.json", "report.json"].map(String::from).to_vec();
    for e in fs::read_dir(dirs[0].path().join("modules")).unwrap() {
        names.push(format!("modules/{}", e.unwrap().file_name().to_string_lossy()));
    }
    assert!(names.len() >= 3 + 2 + 3 + 2);
    for n in &names {
        assert_eq!(fs::read(dirs[0].path().join(n)).unwrap(), fs::read(dirs[1].path().join(n)).unwrap(), "{n}");
    }
    let again = verify_bundle(dirs[0].path(), PrimeField::default(), &s, 5).unwrap();
    assert_eq!(again.status, Status::Pass);

    let mut weak = s.clone();
    weak.bound = 1;
    let r1 = verify_bundle(dirs[0].path(), PrimeField::default(), &weak, 5).unwrap();
    assert_eq!((r1.status, r1.bound), (Status::Pass, 1));

    let p = dirs[1].path().join("algebra.json");
    let mut a: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    a["mult"][1][1][3] = serde_json::json!("1");
    fs::write(&p, a.to_string()).unwrap();
    let bad = verify_bundle(dirs[1].path(), PrimeField::default(), &s, 5).unwrap();
    assert_eq!(bad.status, Status::Fail);
    assert_eq!(bad.claims[0].claim_id, "bundle.valid");
}
