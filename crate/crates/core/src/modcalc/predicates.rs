use serde::{Deserialize, Serialize};

use crate::exactlin::{Echelon, Field};

use super::hom::{hom_dim, hom_module};
use super::homology::Engine;
use super::module::{FiniteModule, ModuleError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    /// Fail dominates Inconclusive, which dominates Pass.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        }
    }

    pub fn from_bool(b: bool) -> Status {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Outcome of a bounded check. Ext and Tor vanishing is only certified in
/// degrees `1..=bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub bound: usize,
    pub details: Vec<String>,
}

impl Verdict {
    pub fn pass(bound: usize) -> Self {
        Verdict {
            status: Status::Pass,
            bound,
            details: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Pass
    }

    pub(crate) fn fail(&mut self, why: impl Into<String>) {
        self.status = Status::Fail;
        self.details.push(why.into());
    }

    pub(crate) fn note(&mut self, what: impl Into<String>) {
        self.details.push(what.into());
    }

    pub(crate) fn absorb(&mut self, other: Verdict, context: &str) {
        self.status = self.status.and(other.status);
        for d in other.details {
            self.details.push(format!("{context}: {d}"));
        }
    }
}

fn first_nonzero(dims: &[usize]) -> Option<(usize, usize)> {
    dims.iter().enumerate().skip(1).find(|(_, &d)| d != 0).map(|(i, &d)| (i, d))
}

impl<K: Field> Engine<K> {
    /// Homothety `R -> Hom(C, C)` bijective and `Ext^i(C, C) = 0` for
    /// `1 <= i <= bound`.
    pub fn is_semidualizing(&self, c: &FiniteModule<K>, bound: usize) -> Verdict {
        assert!(bound >= 1, "bound must be positive");
        let mut v = Verdict::pass(bound);
        let alg = c.algebra();
        let f = alg.field();
        let n = c.dim();
        let mut ech = Echelon::new(f.clone(), n * n);
        for a in c.actions() {
            ech.insert(a.data().to_vec());
        }
        if ech.rank() != alg.dim() {
            v.fail(format!("homothety has kernel of dimension {}", alg.dim() - ech.rank()));
        }
        let end = hom_dim(c, c).expect("same algebra");
        if end != alg.dim() {
            v.fail(format!("dim Hom(C, C) = {end}, expected {}", alg.dim()));
        }
        if !v.holds() {
            return v;
        }
        let ext = self.ext_dims(c, c, bound).expect("same algebra");
        if let Some((i, d)) = first_nonzero(&ext) {
            v.fail(format!("dim Ext^{i}(C, C) = {d}"));
        }
        v
    }

    /// Biduality `M -> Hom(Hom(M, C), C)` bijective and both
    /// `Ext^i(M, C)` and `Ext^i(Hom(M, C), C)` vanish for `1 <= i <= bound`.
    pub fn is_totally_reflexive(&self, m: &FiniteModule<K>, c: &FiniteModule<K>, bound: usize) -> Result<Verdict, ModuleError> {
        assert!(bound >= 1, "bound must be positive");
        let mut v = Verdict::pass(bound);
        let f = m.field();
        let h = hom_module(m, c)?;
        // delta(x) = 0 iff every basis map kills x.
        let mut ech = Echelon::new(f.clone(), m.dim());
        for map in h.maps() {
            for r in 0..map.rows() {
                ech.insert(map.row(r).to_vec());
            }
        }
        if ech.rank() != m.dim() {
            v.fail(format!("biduality map has kernel of dimension {}", m.dim() - ech.rank()));
        }
        let hh = hom_dim(h.module(), c)?;
        if hh != m.dim() {
            v.fail(format!("dim Hom(Hom(M, C), C) = {hh}, expected {}", m.dim()));
        }
        if !v.holds() {
            return Ok(v);
        }
        let e1 = self.ext_dims(m, c, bound)?;
        if let Some((i, d)) = first_nonzero(&e1) {
            v.fail(format!("dim Ext^{i}(M, C) = {d}"));
            return Ok(v);
        }
        let e2 = self.ext_dims(h.module(), c, bound)?;
        if let Some((i, d)) = first_nonzero(&e2) {
            v.fail(format!("dim Ext^{i}(Hom(M, C), C) = {d}"));
        }
        Ok(v)
    }
}

pub fn is_semidualizing<K: Field>(c: &FiniteModule<K>, bound: usize) -> Verdict {
    Engine::default().is_semidualizing(c, bound)
}

pub fn is_totally_reflexive<K: Field>(m: &FiniteModule<K>, c: &FiniteModule<K>, bound: usize) -> Result<Verdict, ModuleError> {
    Engine::default().is_totally_reflexive(m, c, bound)
}
