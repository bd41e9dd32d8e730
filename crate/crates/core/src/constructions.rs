//! The tensor-of-trivial-extensions family and its chain of semidualizing
//! modules `C_j = D_1 ⊠ ... ⊠ D_j ⊠ S_{j+1} ⊠ ... ⊠ S_n`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, FiniteLocalAlgebra};
use serde_json::json;

use crate::chains::{
    all_dagger_iterates, derive_b_family, is_suitable, t2_round_trip, verify_fact_f1, verify_prop_p1, BFamily, Chain,
    DaggerWord,
};
use crate::exactlin::{Field, FieldSpec};
use crate::modcalc::{matlis_dual, regular_module, Engine, FiniteModule, IsoOutcome, ModuleError, Status};
use crate::report::{ClaimRecord, Report};
use crate::series::{bass_series, binomial_lower_bound, verify_growth, verify_series_identities, verify_t1};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("at least one exponent is required")]
    NoExponents,
    #[error("exponent 1 yields Gorenstein factor (position {0}); every exponent must be at least 2")]
    GorensteinFactor(usize),
    #[error("exponent 0 at position {0} is not allowed")]
    ZeroExponent(usize),
    #[error("bound and order must be positive")]
    NonPositive,
    #[error("{0}")]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Module(#[from] ModuleError),
}

/// Default homological bound.
pub const DEFAULT_BOUND: usize = 8;

/// Default truncation order for the Poincaré series of `k`.
pub fn default_order(n: usize) -> usize {
    match n {
        0 | 1 => 8,
        _ => 6,
    }
}

/// Default truncation order for the Bass and module series identities.
pub fn default_identity_order(n: usize) -> usize {
    match n {
        0 | 1 => 8,
        2 => 5,
        _ => 4,
    }
}

/// Exponents `a_1..a_n` (each at least 2) plus the run parameters. `order`
/// truncates the Poincaré series of `k`; `identity_order` truncates the
/// remaining series identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleSpec {
    pub exponents: Vec<usize>,
    pub field: FieldSpec,
    pub bound: usize,
    pub order: usize,
    pub identity_order: usize,
}

impl ExampleSpec {
    /// `identity_order` becomes `min(order, default_identity_order(n))`.
    pub fn new(exponents: Vec<usize>, field: FieldSpec, bound: usize, order: usize) -> Result<Self, ConstructionError> {
        let identity_order = order.min(default_identity_order(exponents.len()));
        let s = ExampleSpec {
            exponents,
            field,
            bound,
            order,
            identity_order,
        };
        s.validate()?;
        Ok(s)
    }

    /// Default bound and orders for the number of factors.
    pub fn with_defaults(exponents: Vec<usize>, field: FieldSpec) -> Result<Self, ConstructionError> {
        let n = exponents.len();
        let mut s = Self::new(exponents, field, DEFAULT_BOUND, default_order(n))?;
        s.identity_order = default_identity_order(n);
        Ok(s)
    }

    pub fn with_identity_order(mut self, order: usize) -> Result<Self, ConstructionError> {
        self.identity_order = order;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        if self.exponents.is_empty() {
            return Err(ConstructionError::NoExponents);
        }
        for (i, &a) in self.exponents.iter().enumerate() {
            match a {
                0 => return Err(ConstructionError::ZeroExponent(i + 1)),
                1 => return Err(ConstructionError::GorensteinFactor(i + 1)),
                _ => {}
            }
        }
        if self.bound == 0 || self.order == 0 || self.identity_order == 0 {
            return Err(ConstructionError::NonPositive);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }
}

/// `Hom_F(A, F)`, the dualizing module of a finite local algebra.
pub fn dualizing_module<K: Field>(algebra: &Arc<FiniteLocalAlgebra<K>>) -> FiniteModule<K> {
    matlis_dual(&regular_module(algebra)).with_label("D")
}

/// `M ⊠ N` over `target = A ⊗ B`, acting by Kronecker products.
pub fn external_tensor_over<K: Field>(
    m: &FiniteModule<K>,
    n: &FiniteModule<K>,
    target: &Arc<FiniteLocalAlgebra<K>>,
) -> Result<FiniteModule<K>, ConstructionError> {
    let (a, b) = (m.algebra(), n.algebra());
    if a.field() != b.field() {
        return Err(AlgebraError::FieldMismatch(a.field().spec(), b.field().spec()).into());
    }
    if target.dim() != a.dim() * b.dim() || target.field() != a.field() {
        return Err(ModuleError::AlgebraMismatch.into());
    }
    let mut action = Vec::with_capacity(target.dim());
    for i in 0..a.dim() {
        for j in 0..b.dim() {
            action.push(m.action(i).kron(n.action(j)));
        }
    }
    let degrees = match (m.degrees(), n.degrees(), target.is_graded()) {
        (Some(x), Some(y), true) => Some(x.iter().flat_map(|p| y.iter().map(move |q| p + q)).collect()),
        _ => None,
    };
    let label = format!("{}#{}", m.label().unwrap_or("M"), n.label().unwrap_or("N"));
    Ok(FiniteModule::from_parts(target.clone(), m.dim() * n.dim(), action, degrees, Some(label))?)
}

/// `M ⊠ N` over a freshly built `A ⊗ B`.
pub fn external_tensor<K: Field>(m: &FiniteModule<K>, n: &FiniteModule<K>) -> Result<FiniteModule<K>, ConstructionError> {
    let ab = Arc::new(FiniteLocalAlgebra::tensor_algebra(m.algebra(), n.algebra())?);
    external_tensor_over(m, n, &ab)
}

/// Constructed objects for one exponent vector.
pub struct ExampleInstance<K: Field> {
    pub factors: Vec<Arc<FiniteLocalAlgebra<K>>>,
    pub algebra: Arc<FiniteLocalAlgebra<K>>,
    pub chain: Chain<K>,
    pub family: BFamily<K>,
    /// `B_j` predicted as `S_1 ⊠ ... ⊠ D_j ⊠ ... ⊠ S_n`.
    pub predicted_b: Vec<FiniteModule<K>>,
    partials: Vec<Arc<FiniteLocalAlgebra<K>>>,
    s_modules: Vec<FiniteModule<K>>,
    d_modules: Vec<FiniteModule<K>>,
}

impl<K: Field> ExampleInstance<K> {
    /// Factor `k` of `C_𝐮` is `D_k` when an odd number of indices of `𝐮`
    /// are at least `k`, and `S_k` otherwise.
    pub fn predicted_iterate(&self, mask: usize) -> FiniteModule<K> {
        let n = self.factors.len();
        let parts: Vec<FiniteModule<K>> = (0..n)
            .map(|k| {
                if (mask >> k).count_ones() % 2 == 1 {
                    self.d_modules[k].clone()
                } else {
                    self.s_modules[k].clone()
                }
            })
            .collect();
        external_tensor_all(&parts, &self.partials).expect("factors share the field")
    }

    /// Replaces the chain modules, e.g. with ones loaded from disk, and
    /// rederives the B-family.
    pub fn with_chain(mut self, chain: Chain<K>) -> Self {
        self.family = derive_b_family(&chain);
        self.chain = chain;
        self
    }
}

/// Left-associated external tensor of one module per factor, with every
/// intermediate attached to the matching partial tensor algebra.
pub fn external_tensor_all<K: Field>(
    mods: &[FiniteModule<K>],
    partials: &[Arc<FiniteLocalAlgebra<K>>],
) -> Result<FiniteModule<K>, ConstructionError> {
    let mut acc = mods[0].clone();
    for (k, m) in mods.iter().enumerate().skip(1) {
        acc = external_tensor_over(&acc, m, &partials[k])?;
    }
    Ok(acc)
}

/// Builds `S = S_1 ⊗ ... ⊗ S_n` with `S_i = F ⋉ F^{a_i}`, the chain
/// `C_0 = S, C_j = D_1 ⊠ .. ⊠ D_j ⊠ S_{j+1} ⊠ .. ⊠ S_n`, and its B-family.
/// The chain is assembled without running its invariant checks; the
/// verification pipeline does that.
pub fn build_instance<K: Field>(spec: &ExampleSpec, field: K) -> Result<ExampleInstance<K>, ConstructionError> {
    spec.validate()?;
    let n = spec.n();
    let factors: Vec<Arc<FiniteLocalAlgebra<K>>> = spec
        .exponents
        .iter()
        .map(|&a| FiniteLocalAlgebra::trivial_extension(a, field.clone()).map(Arc::new))
        .collect::<Result<_, _>>()?;
    let mut partials = vec![factors[0].clone()];
    for k in 1..n {
        let next = FiniteLocalAlgebra::tensor_algebra(&partials[k - 1], &factors[k])?;
        partials.push(Arc::new(next));
    }
    let algebra = partials[n - 1].clone();
    let s_mods: Vec<FiniteModule<K>> = factors
        .iter()
        .enumerate()
        .map(|(i, a)| regular_module(a).with_label(format!("S{}", i + 1)))
        .collect();
    let d_mods: Vec<FiniteModule<K>> = factors
        .iter()
        .enumerate()
        .map(|(i, a)| dualizing_module(a).with_label(format!("D{}", i + 1)))
        .collect();
    let mut chain_mods = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let parts: Vec<FiniteModule<K>> = (0..n)
            .map(|i| if i < j { d_mods[i].clone() } else { s_mods[i].clone() })
            .collect();
        let c = external_tensor_all(&parts, &partials)?;
        chain_mods.push(c.with_label(format!("C{j}")));
    }
    let predicted_b = (1..=n)
        .map(|j| {
            let parts: Vec<FiniteModule<K>> = (0..n)
                .map(|i| if i + 1 == j { d_mods[i].clone() } else { s_mods[i].clone() })
                .collect();
            external_tensor_all(&parts, &partials).map(|b| b.with_label(format!("B{j}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let chain = Chain::new_unchecked(algebra.clone(), chain_mods, spec.bound);
    let family = derive_b_family(&chain);
    Ok(ExampleInstance {
        factors,
        algebra,
        chain,
        family,
        predicted_b,
        partials,
        s_modules: s_mods,
        d_modules: d_mods,
    })
}


fn iso_claim<K: Field>(
    engine: &Engine<K>,
    pairs: &[(String, &FiniteModule<K>, &FiniteModule<K>)],
) -> (Status, Vec<serde_json::Value>) {
    let mut status = Status::Pass;
    let mut rows = Vec::new();
    for (name, a, b) in pairs {
        let (st, what) = match engine.is_isomorphic(a, b) {
            Ok(IsoOutcome::Isomorphic(_)) => (Status::Pass, "isomorphic".to_string()),
            Ok(IsoOutcome::NotIsomorphic(r)) => (Status::Fail, format!("{r:?}")),
            Ok(IsoOutcome::Inconclusive(s)) => (Status::Inconclusive, s),
            Err(e) => (Status::Fail, e.to_string()),
        };
        status = status.and(st);
        rows.push(json!({ "pair": name, "status": st, "result": what }));
    }
    (status, rows)
}

/// Runs every check on a constructed instance and collects one record per
/// claim.
pub fn verify_instance<K: Field>(engine: &Engine<K>, inst: &ExampleInstance<K>, spec: &ExampleSpec) -> Report {
    let chain = &inst.chain;
    let family = &inst.family;
    let n = chain.length();
    let b = chain.bound();
    let full = (1usize << n) - 1;
    let mut report = Report {
        exponents: spec.exponents.clone(),
        field: spec.field,
        dim: inst.algebra.dim(),
        n,
        nilpotency_index: inst.algebra.nilpotency_index(),
        bound: b,
        order: spec.order,
        identity_order: spec.identity_order,
        seed: engine.seed(),
        status: Status::Pass,
        claims: Vec::new(),
    };
    report.push(ClaimRecord::new(
        "algebra.valid",
        "finite local algebra axioms",
        Status::Pass,
        b,
        json!({ "dim": inst.algebra.dim(), "type": inst.algebra.type_of(), "hash": inst.algebra.content_hash() }),
    ));

    let inv = chain.invariants(engine);
    report.push(ClaimRecord::from_verdict("chain.invariants", "semidualizing chain with C0 = R, strict steps", &inv));

    let suit = is_suitable(engine, chain);
    let table: Vec<serde_json::Value> = suit
        .entries
        .iter()
        .map(|e| json!({ "word": e.word.to_string(), "target": e.target, "status": e.status }))
        .collect();
    report.push(ClaimRecord::new(
        "chain.suitable",
        "suitable chain: C_i totally C_t-reflexive for max(i) <= t <= n",
        suit.verdict.status,
        b,
        json!({ "pairs": table, "details": suit.verdict.details, "cost_warning": suit.cost_warning }),
    ));

    let pairs: Vec<(String, &FiniteModule<K>, &FiniteModule<K>)> = (1..=n)
        .map(|j| (format!("B{j}"), family.b(j), &inst.predicted_b[j - 1]))
        .collect();
    let (st, rows) = iso_claim(engine, &pairs);
    report.push(ClaimRecord::new(
        "b_family.predicted",
        "B_j = S_1 # .. # D_j # .. # S_n",
        st,
        b,
        json!({ "beta0": (1..=n).map(|j| engine.betti(family.b(j), 0)[0]).collect::<Vec<_>>(), "pairs": rows }),
    ));

    let f1 = verify_fact_f1(engine, chain, family);
    report.push(ClaimRecord::from_verdict("b_family.c_is_product", "C_i = B_1 (x) .. (x) B_i", &f1));

    let iterates = all_dagger_iterates(chain);
    let predicted: Vec<FiniteModule<K>> = (0..=full).map(|m| inst.predicted_iterate(m)).collect();
    let pairs: Vec<(String, &FiniteModule<K>, &FiniteModule<K>)> = (0..=full)
        .map(|m| (format!("C{}", DaggerWord::from_mask(m)), &iterates[m], &predicted[m]))
        .collect();
    let (st, rows) = iso_claim(engine, &pairs);
    report.push(ClaimRecord::new(
        "constructions.parity",
        "dagger iterates alternate D and S factors by parity",
        st,
        b,
        json!({ "pairs": rows }),
    ));

    let p1 = verify_prop_p1(engine, chain, family);
    report.push(ClaimRecord::from_verdict("p1.semidualizing", "every B_i is semidualizing", &p1.semidualizing));
    let mut c = ClaimRecord::from_verdict("p1.contraction", "Hom(B_s, B_i) = B_(i minus s)", &p1.contraction);
    c.witness["nested_pairs"] = json!(p1.nested_pairs);
    report.push(c);
    let expected = 1usize << n;
    let mut distinct = p1.distinct.clone();
    if p1.class_count != expected && distinct.status == Status::Pass {
        distinct.status = Status::Fail;
    }
    let mut c = ClaimRecord::from_verdict("p1.class_count", "exactly 2^n classes among the C_i", &distinct);
    c.witness["class_count"] = json!(p1.class_count);
    c.witness["expected"] = json!(expected);
    c.witness["beta0_fingerprint"] = json!(p1.beta0_fingerprint);
    report.push(c);
    report.push(ClaimRecord::from_verdict("p1.class_sets_agree", "{[B_u]} = {[C_i]}", &p1.classes_match));

    let rt = t2_round_trip(engine, chain, family);
    report.push(ClaimRecord::from_verdict("t2.forward", "B-family of a suitable chain is SD(n)-full", &rt.forward));
    report.push(ClaimRecord::from_verdict("t2.backward", "SD(n)-full family rebuilds the chain", &rt.backward));

    let t1 = verify_t1(engine, chain, spec.order);
    report.push(ClaimRecord::new(
        "t1.rational_form",
        "m^n != 0 and P_k = 1 / prod(1 - d_i t)",
        t1.status,
        b,
        serde_json::to_value(&t1).expect("report serializes"),
    ));

    match verify_series_identities(engine, chain, family, spec.identity_order) {
        Ok(checks) => {
            for c in checks {
                report.push(ClaimRecord::new(
                    format!("series.{}", c.id),
                    "product forms of Poincare and Bass series",
                    c.status,
                    b,
                    json!({ "form": c.form, "series": c.series }),
                ));
            }
        }
        Err(e) => report.push(ClaimRecord::new(
            "series.identities",
            "product forms of Poincare and Bass series",
            Status::Fail,
            b,
            json!({ "error": e.to_string() }),
        )),
    }

    let r = regular_module(&inst.algebra);
    match bass_series(engine, &r, spec.identity_order) {
        Ok(s) => {
            let g = verify_growth(&s, None);
            let poly = binomial_lower_bound(&s, n);
            report.push(ClaimRecord::new(
                "growth.bass_ring",
                "Bass numbers of R strictly increase, above a degree n-1 polynomial",
                Status::from_bool(n == 0 || (g.holds() && poly)),
                b,
                json!({ "series": s, "growth": g, "binomial_bound": poly }),
            ));
        }
        Err(e) => report.push(ClaimRecord::new(
            "growth.bass_ring",
            "Bass numbers of R strictly increase",
            Status::Fail,
            b,
            json!({ "error": e.to_string() }),
        )),
    }
    for i in 1..=n {
        let comp = family.subset(full & !(1 << (i - 1)));
        let alpha = spec.exponents[i - 1] as u64;
        let (st, w) = match bass_series(engine, comp, spec.identity_order) {
            Ok(s) => {
                let g = verify_growth(&s, Some(alpha));
                (Status::from_bool(g.holds()), json!({ "series": s, "growth": g }))
            }
            Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
        };
        report.push(ClaimRecord::new(
            format!("growth.bass_complement.{i}"),
            "mu^j of B_(all but i) is at least a_i^j",
            st,
            b,
            w,
        ));
    }
    report
}

/// Constructs the instance for `spec` and runs the full verification.
pub fn build_example<K: Field>(spec: &ExampleSpec, field: K, seed: u64) -> Result<(ExampleInstance<K>, Report), ConstructionError> {
    if field.spec() != spec.field {
        return Err(AlgebraError::FieldMismatch(spec.field, field.spec()).into());
    }
    let inst = build_instance(spec, field)?;
    let engine = Engine::new(seed);
    let report = verify_instance(&engine, &inst, spec);
    Ok((inst, report))
}
