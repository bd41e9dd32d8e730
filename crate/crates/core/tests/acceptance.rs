//! Acceptance criteria. Run with `cargo test --test acceptance`; prints one
//! line per criterion and exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use semidual_core::chains::{
    chain_from_tor_independent, derive_b_family, is_sd_n_full, is_suitable, verify_prop_p1,
};
use semidual_core::constructions::{build_instance, dualizing_module, external_tensor_over};
use semidual_core::modcalc::{hom_dim, matlis_dual, regular_module, residue_field_module, tensor_module};
use semidual_core::series::{bass_series, infer_denominator, poincare_series, verify_growth, verify_t1};
use semidual_core::{
    BassMethod, Chain, Engine, ExampleInstance, ExampleSpec, FieldSpec, FiniteLocalAlgebra, FiniteModule, IsoOutcome,
    PrimeField, TruncatedSeries,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ints(s: &TruncatedSeries) -> Vec<i128> {
    s.coeffs().iter().map(|c| i128::try_from(c.clone()).unwrap()).collect()
}

fn counts(v: &[usize]) -> Vec<i128> {
    v.iter().map(|&x| x as i128).collect()
}

fn instance(a: &[usize], bound: usize) -> ExampleInstance<PrimeField> {
    let mut s = ExampleSpec::with_defaults(a.to_vec(), FieldSpec::Prime(32003)).unwrap();
    s.bound = bound;
    build_instance(&s, PrimeField::default()).unwrap()
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    if e < limit {
        Ok(())
    } else {
        Err(format!("took {e:.2?}, limit {limit:?}"))
    }
}

fn betti_growth() -> Outcome {
    let t = Instant::now();
    let a = common::trivial_ext(2, PrimeField::default());
    let b = Engine::new(0).betti(&residue_field_module(&a), 8);
    within(t, Duration::from_secs(1))?;
    let want: Vec<usize> = (0..=8).map(|i| 1 << i).collect();
    ensure!(b == want, "betti {b:?}");
    Ok(format!("betti {b:?}"))
}

fn bass_closed_form() -> Outcome {
    let a = common::trivial_ext(2, PrimeField::default());
    let e = Engine::new(0);
    let r = regular_module(&a);
    let direct = e.bass_numbers(&r, 8, BassMethod::ExtDirect);
    let matlis = e.bass_numbers(&r, 8, BassMethod::Matlis);
    let want = [2, 3, 6, 12, 24, 48, 96, 192, 384];
    ensure!(direct == matlis, "routes disagree: {direct:?} vs {matlis:?}");
    ensure!(direct == want, "mu {direct:?}");
    ensure!(counts(&direct) == common::expand(&[2], &[2], 8), "oracle disagrees");
    Ok(format!("mu {direct:?}"))
}

fn t1_on_2_3() -> Outcome {
    let t = Instant::now();
    let inst = instance(&[2, 3], 6);
    let e = Engine::new(0);
    ensure!(inst.algebra.nilpotency_index() == 3, "nilpotency {}", inst.algebra.nilpotency_index());
    let pk = poincare_series(&e, &residue_field_module(&inst.algebra), 6);
    ensure!(ints(&pk) == [1, 5, 19, 65, 211, 665, 2059], "P_k {pk}");
    ensure!(ints(&pk) == common::expand(&[], &[2, 3], 6), "oracle disagrees");
    let d = infer_denominator(&pk, 2).map_err(|e| e.to_string())?;
    ensure!(d.factor() == Some(vec![2, 3]), "denominator {d}");
    let rep = verify_t1(&e, &inst.chain, 6);
    ensure!(rep.status.and(semidual_core::Status::Pass) == semidual_core::Status::Pass, "t1 {:?}", rep.details);
    within(t, Duration::from_secs(60))?;
    Ok(format!("P_k {pk}, denominator {d}"))
}

fn bass_prop_on_2_3() -> Outcome {
    let inst = instance(&[2, 3], 6);
    let e = Engine::new(0);
    let b0: Vec<i128> = inst.family.singles().iter().map(|b| e.betti(b, 0)[0] as i128).collect();
    ensure!(b0 == [2, 3], "beta0 {b0:?}");
    let ir = ints(&bass_series(&e, &regular_module(&inst.algebra), 3).map_err(|e| e.to_string())?);
    ensure!(ir == [6, 25, 90, 300], "I_R {ir:?}");
    ensure!(ir == common::expand(&b0, &b0, 3), "I_R differs from the product form");
    let c2 = ints(&bass_series(&e, inst.chain.module(2), 3).map_err(|e| e.to_string())?);
    ensure!(c2 == [1, 0, 0, 0], "I_C2 {c2:?}");
    let c1 = ints(&bass_series(&e, inst.chain.module(1), 3).map_err(|e| e.to_string())?);
    ensure!(c1 == [3, 8, 24, 72], "I_C1 {c1:?}");
    Ok(format!("I_R {ir:?}, I_C1 {c1:?}, I_C2 {c2:?}"))
}

fn p1_on_2_3() -> Outcome {
    let inst = instance(&[2, 3], 6);
    let e = Engine::new(0);
    let p1 = verify_prop_p1(&e, &inst.chain, &inst.family);
    ensure!(p1.class_count == 4, "classes {}", p1.class_count);
    ensure!(p1.beta0_fingerprint == [1, 2, 3, 6], "fingerprint {:?}", p1.beta0_fingerprint);
    ensure!(p1.nested_pairs == 9, "nested pairs {}", p1.nested_pairs);
    ensure!(p1.contraction.holds(), "contraction {:?}", p1.contraction.details);
    Ok(format!("4 classes, fingerprint {:?}, 9 contractions", p1.beta0_fingerprint))
}

fn t2_on_2_3() -> Outcome {
    let inst = instance(&[2, 3], 6);
    let e = Engine::new(0);
    let chain = Chain::new(&e, inst.chain.modules().to_vec(), 6).map_err(|e| e.to_string())?;
    let s = is_suitable(&e, &chain);
    ensure!(s.verdict.holds(), "suitability {:?}", s.verdict.details);
    let fam = derive_b_family(&chain);
    let full = is_sd_n_full(&e, &inst.algebra, fam.singles(), 6);
    ensure!(full.holds(), "SD(2)-full {:?}", full.details);
    let rebuilt = chain_from_tor_independent(&e, &inst.algebra, fam.singles(), 6).map_err(|e| e.to_string())?;
    for i in 0..=2 {
        let iso = e.is_isomorphic(rebuilt.module(i), chain.module(i)).map_err(|e| e.to_string())?;
        ensure!(iso.is_isomorphic(), "level {i} not isomorphic");
    }
    Ok(format!("{} reflexivity pairs, rebuilt chain isomorphic", s.entries.len()))
}

fn strict_increase() -> Outcome {
    let e = Engine::new(0);
    let mut lines = Vec::new();
    for a in [vec![2], vec![2, 3]] {
        let inst = instance(&a, 6);
        let r = regular_module(&inst.algebra);
        let mu = e.bass_numbers(&r, 6, BassMethod::Matlis);
        let low = e.bass_numbers(&r, 3, BassMethod::ExtDirect);
        ensure!(mu[..=3] == low[..], "routes disagree on {a:?}");
        let g = verify_growth(&TruncatedSeries::from_counts(&mu), None);
        ensure!(g.strictly_increasing, "mu(R) on {a:?} stalls at {:?}: {mu:?}", g.first_stall);
        let n = a.len();
        let all = (1 << n) - 1;
        for (i, &ai) in a.iter().enumerate() {
            let b = inst.family.subset(all & !(1 << i));
            let mu_b = e.bass_numbers(b, 6, BassMethod::Matlis);
            let g = verify_growth(&TruncatedSeries::from_counts(&mu_b), Some(ai as u64));
            ensure!(g.dominates == Some(true), "mu(B) on {a:?}, i={}: {mu_b:?}", i + 1);
        }
        lines.push(format!("{a:?} {mu:?}"));
    }
    Ok(lines.join("; "))
}

fn scale_2_2_2() -> Outcome {
    let t = Instant::now();
    let inst = instance(&[2, 2, 2], 4);
    let e = Engine::new(0);
    ensure!(inst.algebra.dim() == 27, "dim {}", inst.algebra.dim());
    ensure!(inst.algebra.nilpotency_index() == 4, "nilpotency {}", inst.algebra.nilpotency_index());
    let chain = Chain::new(&e, inst.chain.modules().to_vec(), 4).map_err(|e| e.to_string())?;
    ensure!(chain.length() == 3, "length {}", chain.length());
    let s = is_suitable(&e, &chain);
    ensure!(s.verdict.holds(), "suitability {:?}", s.verdict.details);
    let fam = derive_b_family(&chain);
    let p1 = verify_prop_p1(&e, &chain, &fam);
    ensure!(p1.class_count == 8, "classes {}", p1.class_count);
    let pk = poincare_series(&e, &residue_field_module(&inst.algebra), 5);
    ensure!(ints(&pk) == common::expand(&[], &[2, 2, 2], 5), "P_k {pk}");
    within(t, Duration::from_secs(600))?;
    Ok(format!("8 classes, P_k {pk}, {:.1?}", t.elapsed()))
}

fn kunneth() -> Outcome {
    let f = PrimeField::default();
    let e = Engine::new(0);
    let a = common::trivial_ext(2, f);
    let b = common::trivial_ext(3, f);
    let ab = common::tensor2(2, 3, f);
    let pa = ints(&poincare_series(&e, &residue_field_module(&a), 6));
    let pb = ints(&poincare_series(&e, &residue_field_module(&b), 6));
    let pab = ints(&poincare_series(&e, &residue_field_module(&ab), 6));
    ensure!(pab == common::cauchy(&pa, &pb), "{pab:?} vs {pa:?} * {pb:?}");
    Ok(format!("P_k(A⊗B) {pab:?}"))
}

fn zoo(alg: &Arc<FiniteLocalAlgebra<PrimeField>>, inst: Option<&ExampleInstance<PrimeField>>) -> Vec<FiniteModule<PrimeField>> {
    let mut v = vec![regular_module(alg), residue_field_module(alg), dualizing_module(alg)];
    if let Some(i) = inst {
        v.extend(i.chain.modules().iter().cloned());
        v.extend(i.family.singles().iter().cloned());
    }
    v
}

fn invariants() -> Outcome {
    let f = PrimeField::default();
    let e = Engine::new(0);
    let i1 = instance(&[2], 4);
    let i2 = instance(&[2, 3], 4);
    let ab = Arc::new(FiniteLocalAlgebra::tensor_algebra(&i1.algebra, &common::trivial_ext(3, f)).unwrap());
    let mut checked = 0;
    for inst in [&i1, &i2] {
        let alg = &inst.algebra;
        alg.validate().map_err(|e| format!("algebra: {e}"))?;
        let mods = zoo(alg, Some(inst));
        let (r, k) = (&mods[0], &mods[1]);
        for m in &mods {
            m.validate().map_err(|e| format!("module: {e}"))?;
            e.resolution(m, 3).verify().map_err(|e| format!("resolution: {e}"))?;
            ensure!(matlis_dual(&matlis_dual(m)).actions() == m.actions(), "Matlis involution");
            let rm = tensor_module(r, m).map_err(|e| e.to_string())?;
            ensure!(e.is_isomorphic(&rm, m).map_err(|e| e.to_string())?.is_isomorphic(), "R ⊗ M");
            ensure!(hom_dim(r, m).map_err(|e| e.to_string())? == m.dim(), "Hom(R, M)");
            ensure!(e.tor_dims_direct(m, k, 2) == e.tor_dims_direct(k, m, 2), "Tor symmetry");
            checked += 1;
        }
        for m in &mods[2..4] {
            let s = common::scramble(m, 11);
            let run = |seed| match Engine::new(seed).is_isomorphic(m, &s) {
                Ok(IsoOutcome::Isomorphic(x)) => Some(x),
                _ => None,
            };
            let (x, y) = (run(7), run(7));
            ensure!(x.is_some() && x == y, "iso search not reproducible");
        }
    }
    let m = external_tensor_over(&regular_module(&i1.algebra), &residue_field_module(&common::trivial_ext(3, f)), &ab)
        .map_err(|e| e.to_string())?;
    m.validate().map_err(|e| e.to_string())?;
    Ok(format!("{checked} modules on 2 golden rings"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("betti numbers of k over F⋉F² are 2^i", betti_growth),
        ("Bass numbers of F⋉F² agree across routes", bass_closed_form),
        ("Poincaré series and denominator on (2,3)", t1_on_2_3),
        ("Bass series of R, C1, C2 on (2,3)", bass_prop_on_2_3),
        ("class count and contractions on (2,3)", p1_on_2_3),
        ("suitability and round trip on (2,3)", t2_on_2_3),
        ("strict increase of Bass numbers", strict_increase),
        ("(2,2,2) at scale", scale_2_2_2),
        ("Künneth product for P_k", kunneth),
        ("module invariants on golden instances", invariants),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let el = t.elapsed();
        match out {
            Ok(w) => println!("PASS {:>2} {name} ({el:.2?}): {w}", i + 1),
            Err(w) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({el:.2?}): {w}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
