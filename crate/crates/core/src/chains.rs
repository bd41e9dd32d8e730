//! Chains `C_n ◁ ... ◁ C_1 ◁ C_0 = R` of semidualizing modules, their
//! dagger iterates, the B-family, and SD(n)-fullness.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::FiniteLocalAlgebra;
use crate::exactlin::Field;
use crate::modcalc::{
    hom_module, regular_module, tensor_module, Engine, FiniteModule, IsoOutcome, ModuleError, Status, Verdict,
};
use crate::par::par_map;

/// Number of (word, target) pairs above which suitability checks warn.
pub const SUITABILITY_BUDGET: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("a chain needs at least C0")]
    Empty,
    #[error("chain modules live over different algebras")]
    AlgebraMismatch,
    #[error("chain invariants fail: {}", .0.join("; "))]
    Invariants(Vec<String>),
    #[error("chain invariants undecided: {}", .0.join("; "))]
    Undecided(Vec<String>),
    #[error("modules are not SD(n)-full: {}", .0.join("; "))]
    NotFull(Vec<String>),
    #[error("rebuilt chain is not suitable: {}", .0.join("; "))]
    NotSuitable(Vec<String>),
    #[error("word {0:?} is not strictly increasing inside 1..={1}")]
    BadWord(Vec<usize>, usize),
    #[error("{0}")]
    Module(#[from] ModuleError),
}

/// `[C_0, ..., C_n]` together with the homological bound used for every
/// verdict about it.
#[derive(Clone, Debug)]
pub struct Chain<K: Field> {
    algebra: Arc<FiniteLocalAlgebra<K>>,
    modules: Vec<FiniteModule<K>>,
    bound: usize,
}

fn iso_status<K: Field>(o: &IsoOutcome<K>) -> Status {
    match o {
        IsoOutcome::Isomorphic(_) => Status::Pass,
        IsoOutcome::NotIsomorphic(_) => Status::Fail,
        IsoOutcome::Inconclusive(_) => Status::Inconclusive,
    }
}

fn iso_detail<K: Field>(o: &IsoOutcome<K>) -> String {
    match o {
        IsoOutcome::Isomorphic(_) => "isomorphic".into(),
        IsoOutcome::NotIsomorphic(r) => format!("not isomorphic ({r:?})"),
        IsoOutcome::Inconclusive(s) => format!("undecided ({s})"),
    }
}

impl<K: Field> Chain<K> {
    /// Assembles a chain and checks its invariants at `bound`.
    pub fn new(engine: &Engine<K>, modules: Vec<FiniteModule<K>>, bound: usize) -> Result<Self, ChainError> {
        let first = modules.first().ok_or(ChainError::Empty)?;
        let chain = Chain {
            algebra: first.algebra().clone(),
            modules,
            bound,
        };
        let v = chain.invariants(engine);
        match v.status {
            Status::Pass => Ok(chain),
            Status::Fail => Err(ChainError::Invariants(v.details)),
            Status::Inconclusive => Err(ChainError::Undecided(v.details)),
        }
    }

    /// Assembles a chain without checking anything beyond shape.
    pub fn new_unchecked(algebra: Arc<FiniteLocalAlgebra<K>>, modules: Vec<FiniteModule<K>>, bound: usize) -> Self {
        assert!(!modules.is_empty(), "a chain needs at least C0");
        Chain {
            algebra,
            modules,
            bound,
        }
    }

    /// `C_0 ≅ R`, every `C_i` semidualizing, and `C_{i-1}` totally
    /// `C_i`-reflexive but not isomorphic to `C_i`.
    pub fn invariants(&self, engine: &Engine<K>) -> Verdict {
        let b = self.bound;
        let mut v = Verdict::pass(b);
        if self.modules.iter().any(|m| !crate::modcalc::same_algebra_arc(m.algebra(), &self.algebra)) {
            v.fail("chain modules live over different algebras");
            return v;
        }
        let r = regular_module(&self.algebra);
        match engine.is_isomorphic(&self.modules[0], &r) {
            Ok(o) => {
                let s = iso_status(&o);
                if s != Status::Pass {
                    v.absorb(
                        Verdict {
                            status: s,
                            bound: b,
                            details: vec![iso_detail(&o)],
                        },
                        "C0 vs R",
                    );
                }
            }
            Err(e) => v.fail(e.to_string()),
        }
        let idx: Vec<usize> = (0..self.modules.len()).collect();
        let sd = par_map(&idx, |&i| engine.is_semidualizing(&self.modules[i], b));
        for (i, s) in sd.into_iter().enumerate() {
            v.absorb(s, &format!("C{i} semidualizing"));
        }
        let steps: Vec<usize> = (1..self.modules.len()).collect();
        let links = par_map(&steps, |&i| {
            let (prev, cur) = (&self.modules[i - 1], &self.modules[i]);
            let refl = engine.is_totally_reflexive(prev, cur, b);
            let iso = engine.is_isomorphic(prev, cur);
            (refl, iso)
        });
        for (i, (refl, iso)) in links.into_iter().enumerate() {
            let i = i + 1;
            match refl {
                Ok(r) => v.absorb(r, &format!("C{} totally C{i}-reflexive", i - 1)),
                Err(e) => v.fail(e.to_string()),
            }
            match iso {
                Ok(IsoOutcome::Isomorphic(_)) => v.fail(format!("C{} ≅ C{i}, the chain is not strict", i - 1)),
                Ok(IsoOutcome::Inconclusive(s)) => {
                    v.absorb(
                        Verdict {
                            status: Status::Inconclusive,
                            bound: b,
                            details: vec![s],
                        },
                        &format!("C{} vs C{i}", i - 1),
                    );
                }
                Ok(IsoOutcome::NotIsomorphic(_)) => {}
                Err(e) => v.fail(e.to_string()),
            }
        }
        v
    }

    pub fn algebra(&self) -> &Arc<FiniteLocalAlgebra<K>> {
        &self.algebra
    }

    /// The `n` in `C_0, ..., C_n`.
    pub fn length(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    pub fn module(&self, i: usize) -> &FiniteModule<K> {
        &self.modules[i]
    }

    pub fn modules(&self) -> &[FiniteModule<K>] {
        &self.modules
    }
}

/// Strictly increasing indices `i_1 < ... < i_j` inside `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DaggerWord {
    indices: Vec<usize>,
}

impl DaggerWord {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self, ChainError> {
        let ok = indices.windows(2).all(|w| w[0] < w[1]) && indices.iter().all(|&i| (1..=n).contains(&i));
        if !ok {
            return Err(ChainError::BadWord(indices, n));
        }
        Ok(DaggerWord { indices })
    }

    pub fn empty() -> Self {
        DaggerWord { indices: Vec::new() }
    }

    /// Bit `i - 1` of `mask` selects index `i`.
    pub fn from_mask(mask: usize) -> Self {
        let indices = (0..usize::BITS as usize).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
        DaggerWord { indices }
    }

    pub fn mask(&self) -> usize {
        self.indices.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn last(&self) -> Option<usize> {
        self.indices.last().copied()
    }
}

impl std::fmt::Display for DaggerWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `C_0^{†C_{i_1} ... †C_{i_j}}`, daggers applied left to right.
pub fn dagger_iterate<K: Field>(chain: &Chain<K>, word: &DaggerWord) -> Result<FiniteModule<K>, ChainError> {
    if word.indices.iter().any(|&i| i == 0 || i > chain.length()) {
        return Err(ChainError::BadWord(word.indices.clone(), chain.length()));
    }
    let mut cur = chain.module(0).clone();
    for &i in &word.indices {
        cur = hom_module(&cur, chain.module(i))?.into_module();
    }
    Ok(cur.with_label(format!("C{word}")))
}

/// Every `C_𝐢`, indexed by the mask of `𝐢`. Each iterate extends the one
/// for its longest proper prefix.
pub fn all_dagger_iterates<K: Field>(chain: &Chain<K>) -> Vec<FiniteModule<K>> {
    let n = chain.length();
    let mut out: Vec<FiniteModule<K>> = Vec::with_capacity(1 << n);
    out.push(chain.module(0).clone().with_label("C{}"));
    for mask in 1usize..1 << n {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let prev = &out[mask & !(1 << top)];
        let m = hom_module(prev, chain.module(top + 1)).expect("chain modules share the algebra");
        out.push(m.into_module().with_label(format!("C{}", DaggerWord::from_mask(mask))));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SuitabilityEntry {
    pub word: DaggerWord,
    pub target: usize,
    pub status: Status,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuitabilityReport {
    pub verdict: Verdict,
    pub entries: Vec<SuitabilityEntry>,
    pub cost_warning: Option<String>,
}

/// The (word, target) pairs checked for suitability: every `𝐢` with every
/// `t` in `max(𝐢)..=n`. The empty word is paired with `t` in `1..=n`.
pub fn suitability_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for mask in 0usize..1 << n {
        let lo = DaggerWord::from_mask(mask).last().unwrap_or(1);
        for t in lo..=n {
            out.push((mask, t));
        }
    }
    out
}

/// `C_𝐢` totally `C_t`-reflexive for all `𝐢` and `max(𝐢) <= t <= n`.
pub fn is_suitable<K: Field>(engine: &Engine<K>, chain: &Chain<K>) -> SuitabilityReport {
    let n = chain.length();
    let b = chain.bound();
    let cost_warning = (n << n > SUITABILITY_BUDGET)
        .then(|| format!("{} dagger words times {n} targets exceeds the budget of {SUITABILITY_BUDGET}", 1usize << n));
    let iterates = all_dagger_iterates(chain);
    let pairs = suitability_pairs(n);
    let results = par_map(&pairs, |&(mask, t)| engine.is_totally_reflexive(&iterates[mask], chain.module(t), b));
    let mut verdict = Verdict::pass(b);
    let mut entries = Vec::with_capacity(pairs.len());
    for ((mask, t), r) in pairs.into_iter().zip(results) {
        let word = DaggerWord::from_mask(mask);
        let r = r.unwrap_or_else(|e| Verdict {
            status: Status::Fail,
            bound: b,
            details: vec![e.to_string()],
        });
        verdict.absorb(r.clone(), &format!("C{word} vs C{t}"));
        entries.push(SuitabilityEntry {
            word,
            target: t,
            status: r.status,
            details: r.details,
        });
    }
    if let Some(w) = &cost_warning {
        verdict.note(w.clone());
    }
    SuitabilityReport {
        verdict,
        entries,
        cost_warning,
    }
}

/// Left-associated tensor products over `R` of the modules selected by each
/// mask; mask 0 gives `base`.
fn subset_products<K: Field>(base: &FiniteModule<K>, mods: &[FiniteModule<K>]) -> Result<Vec<FiniteModule<K>>, ModuleError> {
    let n = mods.len();
    let mut out: Vec<FiniteModule<K>> = Vec::with_capacity(1 << n);
    out.push(base.clone());
    for mask in 1usize..1 << n {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        let m = if rest == 0 {
            mods[top].clone()
        } else {
            tensor_module(&out[rest], &mods[top])?
        };
        out.push(m);
    }
    Ok(out)
}

/// `B_i = Hom(C_{i-1}, C_i)` and the products `B_𝐢`.
#[derive(Clone, Debug)]
pub struct BFamily<K: Field> {
    singles: Vec<FiniteModule<K>>,
    subsets: Vec<FiniteModule<K>>,
}

impl<K: Field> BFamily<K> {
    pub fn n(&self) -> usize {
        self.singles.len()
    }

    /// `B_i` for `i` in `1..=n`.
    pub fn b(&self, i: usize) -> &FiniteModule<K> {
        &self.singles[i - 1]
    }

    pub fn singles(&self) -> &[FiniteModule<K>] {
        &self.singles
    }

    /// `B_𝐢` for the subset with the given mask; mask 0 gives `C_0`.
    pub fn subset(&self, mask: usize) -> &FiniteModule<K> {
        &self.subsets[mask]
    }

    pub fn subsets(&self) -> &[FiniteModule<K>] {
        &self.subsets
    }
}

pub fn derive_b_family<K: Field>(chain: &Chain<K>) -> BFamily<K> {
    let singles: Vec<FiniteModule<K>> = (1..=chain.length())
        .map(|i| {
            hom_module(chain.module(i - 1), chain.module(i))
                .expect("chain modules share the algebra")
                .into_module()
                .with_label(format!("B{i}"))
        })
        .collect();
    let subsets = subset_products(chain.module(0), &singles)
        .expect("chain modules share the algebra")
        .into_iter()
        .enumerate()
        .map(|(mask, m)| m.with_label(format!("B{}", DaggerWord::from_mask(mask))))
        .collect();
    BFamily { singles, subsets }
}

/// The four parts of the B-family proposition, each with its own verdict.
#[derive(Clone, Debug, Serialize)]
pub struct P1Report {
    pub semidualizing: Verdict,
    pub contraction: Verdict,
    pub nested_pairs: usize,
    pub distinct: Verdict,
    pub class_count: usize,
    pub beta0_fingerprint: Vec<usize>,
    pub classes_match: Verdict,
}

impl P1Report {
    pub fn status(&self) -> Status {
        self.semidualizing
            .status
            .and(self.contraction.status)
            .and(self.distinct.status)
            .and(self.classes_match.status)
    }
}

fn find_root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Checks, at the chain's bound: every `B_𝐢` semidualizing; for `𝐬 ⊆ 𝐢`,
/// `Hom(B_𝐬, B_𝐢) ≅ B_{𝐢∖𝐬}` with `B_𝐬` totally `B_𝐢`-reflexive; the `C_𝐢`
/// pairwise non-isomorphic; and `{[B_𝐮]} = {[C_𝐢]}`.
pub fn verify_prop_p1<K: Field>(engine: &Engine<K>, chain: &Chain<K>, family: &BFamily<K>) -> P1Report {
    let b = chain.bound();
    let n = chain.length();
    let full = (1usize << n) - 1;
    let masks: Vec<usize> = (0..=full).collect();

    let mut semidualizing = Verdict::pass(b);
    let sd = par_map(&masks, |&u| engine.is_semidualizing(family.subset(u), b));
    for (u, v) in sd.into_iter().enumerate() {
        semidualizing.absorb(v, &format!("B{}", DaggerWord::from_mask(u)));
    }

    let nested: Vec<(usize, usize)> = masks
        .iter()
        .flat_map(|&i| masks.iter().filter(move |&&s| s & !i == 0).map(move |&s| (s, i)))
        .collect();
    let mut contraction = Verdict::pass(b);
    let res = par_map(&nested, |&(s, i)| {
        let (bs, bi) = (family.subset(s), family.subset(i));
        let h = hom_module(bs, bi).map(|h| h.into_module());
        let iso = h.and_then(|h| engine.is_isomorphic(&h, family.subset(i & !s)));
        let refl = engine.is_totally_reflexive(bs, bi, b);
        (iso, refl)
    });
    for ((s, i), (iso, refl)) in nested.iter().zip(res) {
        let ctx = format!("s={} i={}", DaggerWord::from_mask(*s), DaggerWord::from_mask(*i));
        match iso {
            Ok(o) => {
                let st = iso_status(&o);
                if st != Status::Pass {
                    contraction.absorb(
                        Verdict {
                            status: st,
                            bound: b,
                            details: vec![format!("Hom(B_s, B_i) vs B_(i-s): {}", iso_detail(&o))],
                        },
                        &ctx,
                    );
                }
            }
            Err(e) => contraction.fail(format!("{ctx}: {e}")),
        }
        match refl {
            Ok(v) => contraction.absorb(v, &format!("{ctx} reflexivity")),
            Err(e) => contraction.fail(format!("{ctx}: {e}")),
        }
    }

    let iterates = all_dagger_iterates(chain);
    let beta0: Vec<usize> = par_map(&masks, |&u| engine.betti(&iterates[u], 0)[0]);
    let mut beta0_fingerprint = beta0.clone();
    beta0_fingerprint.sort_unstable();
    let pairs: Vec<(usize, usize)> = masks
        .iter()
        .flat_map(|&x| masks.iter().filter(move |&&y| y > x).map(move |&y| (x, y)))
        .filter(|&(x, y)| beta0[x] == beta0[y] && iterates[x].dim() == iterates[y].dim())
        .collect();
    let outcomes = par_map(&pairs, |&(x, y)| engine.is_isomorphic(&iterates[x], &iterates[y]));
    let mut distinct = Verdict::pass(b);
    let mut parent: Vec<usize> = masks.clone();
    for (&(x, y), o) in pairs.iter().zip(outcomes) {
        let ctx = format!("C{} vs C{}", DaggerWord::from_mask(x), DaggerWord::from_mask(y));
        match o {
            Ok(IsoOutcome::Isomorphic(_)) => {
                distinct.fail(format!("{ctx}: isomorphic"));
                let (rx, ry) = (find_root(&mut parent, x), find_root(&mut parent, y));
                parent[rx] = ry;
            }
            Ok(IsoOutcome::NotIsomorphic(_)) => {}
            Ok(IsoOutcome::Inconclusive(s)) => distinct.absorb(
                Verdict {
                    status: Status::Inconclusive,
                    bound: b,
                    details: vec![s],
                },
                &ctx,
            ),
            Err(e) => distinct.fail(format!("{ctx}: {e}")),
        }
    }
    let class_count = (0..masks.len()).filter(|&x| find_root(&mut parent, x) == x).count();
    distinct.note(format!("{class_count} classes among {} iterates", masks.len()));

    // Every B_u matches some C_i and vice versa.
    let cross: Vec<(usize, usize)> = masks
        .iter()
        .flat_map(|&u| masks.iter().map(move |&i| (u, i)))
        .filter(|&(u, i)| family.subset(u).dim() == iterates[i].dim())
        .collect();
    let cross_out = par_map(&cross, |&(u, i)| engine.is_isomorphic(family.subset(u), &iterates[i]));
    let mut b_matched = vec![Status::Fail; masks.len()];
    let mut c_matched = vec![Status::Fail; masks.len()];
    let better = |cur: Status, new: Status| match (cur, new) {
        (Status::Pass, _) | (_, Status::Pass) => Status::Pass,
        (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
        _ => Status::Fail,
    };
    for (&(u, i), o) in cross.iter().zip(cross_out) {
        let st = match o {
            Ok(o) => iso_status(&o),
            Err(_) => Status::Fail,
        };
        b_matched[u] = better(b_matched[u], st);
        c_matched[i] = better(c_matched[i], st);
    }
    let mut classes_match = Verdict::pass(b);
    for u in 0..masks.len() {
        let w = DaggerWord::from_mask(u);
        for (which, st) in [("B", b_matched[u]), ("C", c_matched[u])] {
            if st != Status::Pass {
                classes_match.absorb(
                    Verdict {
                        status: st,
                        bound: b,
                        details: vec!["no isomorphic partner on the other side".into()],
                    },
                    &format!("{which}{w}"),
                );
            }
        }
    }

    P1Report {
        semidualizing,
        contraction,
        nested_pairs: nested.len(),
        distinct,
        class_count,
        beta0_fingerprint,
        classes_match,
    }
}

/// `C_i ≅ B_1 ⊗ ... ⊗ B_i` for every `i`.
pub fn verify_fact_f1<K: Field>(engine: &Engine<K>, chain: &Chain<K>, family: &BFamily<K>) -> Verdict {
    let b = chain.bound();
    let idx: Vec<usize> = (0..=chain.length()).collect();
    let out = par_map(&idx, |&i| engine.is_isomorphic(chain.module(i), family.subset((1 << i) - 1)));
    let mut v = Verdict::pass(b);
    for (i, o) in out.into_iter().enumerate() {
        match o {
            Ok(o) if o.is_isomorphic() => {}
            Ok(o) => v.absorb(
                Verdict {
                    status: iso_status(&o),
                    bound: b,
                    details: vec![iso_detail(&o)],
                },
                &format!("C{i} vs B1..B{i}"),
            ),
            Err(e) => v.fail(e.to_string()),
        }
    }
    v
}

/// Every nonempty subset product has vanishing higher Tor at each stage of
/// its left-associated tensor: `Tor_i(T_m, K_next) = 0` for `1 <= i <= bound`.
pub fn strongly_tor_independent<K: Field>(engine: &Engine<K>, mods: &[FiniteModule<K>], bound: usize) -> Verdict {
    let mut v = Verdict::pass(bound);
    let Some(first) = mods.first() else {
        return v;
    };
    if mods.iter().any(|m| !m.same_algebra(first)) {
        v.fail("modules live over different algebras");
        return v;
    }
    for (i, m) in mods.iter().enumerate() {
        if engine.is_free(m) {
            v.fail(format!("K{} is free", i + 1));
        }
    }
    if !v.holds() {
        return v;
    }
    let products = match subset_products(&regular_module(first.algebra()), mods) {
        Ok(p) => p,
        Err(e) => {
            v.fail(e.to_string());
            return v;
        }
    };
    let stages: Vec<usize> = (1usize..1 << mods.len()).filter(|m| m.count_ones() >= 2).collect();
    let out = par_map(&stages, |&mask| {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        engine.tor_dims(&products[mask & !(1 << top)], &mods[top], bound)
    });
    for (mask, dims) in stages.into_iter().zip(out) {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let ctx = format!("{} then K{}", DaggerWord::from_mask(mask & !(1 << top)), top + 1);
        match dims {
            Ok(d) => {
                if let Some((i, x)) = d.iter().enumerate().skip(1).find(|(_, &x)| x != 0) {
                    v.fail(format!("{ctx}: dim Tor_{i} = {x}"));
                }
            }
            Err(e) => v.fail(format!("{ctx}: {e}")),
        }
    }
    v
}

/// `m^{n+1} = 0`, each `K_i` non-free, strong Tor-independence, and every
/// subset product semidualizing.
pub fn is_sd_n_full<K: Field>(
    engine: &Engine<K>,
    algebra: &Arc<FiniteLocalAlgebra<K>>,
    mods: &[FiniteModule<K>],
    bound: usize,
) -> Verdict {
    let n = mods.len();
    let mut v = Verdict::pass(bound);
    if mods.iter().any(|m| !crate::modcalc::same_algebra_arc(m.algebra(), algebra)) {
        v.fail("modules live over a different algebra");
        return v;
    }
    let l = algebra.nilpotency_index();
    if l > n + 1 {
        v.fail(format!("nilpotency index {l} exceeds n+1 = {}", n + 1));
    }
    v.absorb(strongly_tor_independent(engine, mods, bound), "strong Tor-independence");
    if !v.holds() {
        return v;
    }
    let products = match subset_products(&regular_module(algebra), mods) {
        Ok(p) => p,
        Err(e) => {
            v.fail(e.to_string());
            return v;
        }
    };
    let masks: Vec<usize> = (1usize..1 << n).collect();
    let out = par_map(&masks, |&m| engine.is_semidualizing(&products[m], bound));
    for (mask, s) in masks.into_iter().zip(out) {
        v.absorb(s, &format!("product over {}", DaggerWord::from_mask(mask)));
    }
    v
}

/// Builds `C_0 = R`, `C_j = K_1 ⊗ ... ⊗ K_j` and checks that the result is a
/// suitable chain. Any failure here is reported as an error.
pub fn chain_from_tor_independent<K: Field>(
    engine: &Engine<K>,
    algebra: &Arc<FiniteLocalAlgebra<K>>,
    mods: &[FiniteModule<K>],
    bound: usize,
) -> Result<Chain<K>, ChainError> {
    let full = is_sd_n_full(engine, algebra, mods, bound);
    if !full.holds() {
        return Err(ChainError::NotFull(full.details));
    }
    let mut cs = vec![regular_module(algebra).with_label("C0")];
    for (j, m) in mods.iter().enumerate() {
        let next = if j == 0 {
            m.clone()
        } else {
            tensor_module(&cs[j], m)?
        };
        cs.push(next.with_label(format!("C{}", j + 1)));
    }
    let chain = Chain::new(engine, cs, bound)?;
    let s = is_suitable(engine, &chain);
    if !s.verdict.holds() {
        return Err(ChainError::NotSuitable(s.verdict.details));
    }
    Ok(chain)
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundTrip {
    /// The B-family is SD(n)-full.
    pub forward: Verdict,
    /// The rebuilt chain exists and is levelwise isomorphic to the original.
    pub backward: Verdict,
}

impl RoundTrip {
    pub fn status(&self) -> Status {
        self.forward.status.and(self.backward.status)
    }
}

/// Suitable chain to SD(n)-full family and back again.
pub fn t2_round_trip<K: Field>(engine: &Engine<K>, chain: &Chain<K>, family: &BFamily<K>) -> RoundTrip {
    let b = chain.bound();
    let forward = is_sd_n_full(engine, chain.algebra(), family.singles(), b);
    let mut backward = Verdict::pass(b);
    match chain_from_tor_independent(engine, chain.algebra(), family.singles(), b) {
        Ok(rebuilt) => {
            for i in 0..=chain.length() {
                match engine.is_isomorphic(rebuilt.module(i), chain.module(i)) {
                    Ok(o) if o.is_isomorphic() => {}
                    Ok(o) => backward.absorb(
                        Verdict {
                            status: iso_status(&o),
                            bound: b,
                            details: vec![iso_detail(&o)],
                        },
                        &format!("level {i}"),
                    ),
                    Err(e) => backward.fail(e.to_string()),
                }
            }
        }
        Err(ChainError::Undecided(d)) => backward.absorb(
            Verdict {
                status: Status::Inconclusive,
                bound: b,
                details: d,
            },
            "rebuild",
        ),
        Err(e) => backward.fail(format!("rebuild: {e}")),
    }
    RoundTrip { forward, backward }
}
