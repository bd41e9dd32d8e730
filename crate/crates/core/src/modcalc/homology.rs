use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::exactlin::{Echelon, Field};

use super::blocks::Blocks;
use super::module::{matlis_dual, residue_field_module, FiniteModule, ModuleError};
use super::resolution::{FreeResolutionPrefix, Resolver};

/// How Bass numbers are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BassMethod {
    /// `dim Ext^i(k, M)` from a resolution of `k`.
    ExtDirect,
    /// `beta_i(M^v)`, using exactness of Matlis duality.
    Matlis,
}

type Shared<K> = Arc<Mutex<Resolver<K>>>;

/// Shared context for homological computations: caches resolutions by module
/// and carries the seed used by randomized procedures.
pub struct Engine<K: Field> {
    seed: u64,
    cache: Mutex<HashMap<u64, Vec<Shared<K>>>>,
}

impl<K: Field> Default for Engine<K> {
    fn default() -> Self {
        Self::new(0)
    }
}

fn sparse_cols<K: Field>(m: &FiniteModule<K>) -> Vec<Vec<Vec<(usize, K::Elem)>>> {
    let f = m.field();
    m.actions()
        .iter()
        .map(|a| {
            (0..a.cols())
                .map(|c| {
                    (0..a.rows())
                        .filter(|&r| !f.is_zero(a.get(r, c)))
                        .map(|r| (r, a.get(r, c).clone()))
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn module_degrees<K: Field>(m: &FiniteModule<K>, graded: bool) -> Vec<i32> {
    if graded {
        m.degrees().unwrap().to_vec()
    } else {
        vec![0; m.dim()]
    }
}

fn probe_key(b: &[usize], dim: usize) -> (usize, usize, usize, usize) {
    (b[2], b[1], b[0], dim)
}

impl<K: Field> Engine<K> {
    pub fn new(seed: u64) -> Self {
        Engine {
            seed,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn resolver(&self, m: &FiniteModule<K>) -> Shared<K> {
        let key = m.fingerprint();
        let mut cache = self.cache.lock().unwrap();
        let bucket = cache.entry(key).or_default();
        for r in bucket.iter() {
            if r.lock().unwrap().module() == m {
                return r.clone();
            }
        }
        let r = Arc::new(Mutex::new(Resolver::new(m)));
        bucket.push(r.clone());
        r
    }

    /// Length-`len` prefix of the minimal resolution of `m`, cached.
    pub fn resolution(&self, m: &FiniteModule<K>, len: usize) -> FreeResolutionPrefix<K> {
        let r = self.resolver(m);
        let mut guard = r.lock().unwrap();
        guard.prefix(len)
    }

    pub fn betti(&self, m: &FiniteModule<K>, len: usize) -> Vec<usize> {
        self.resolution(m, len).betti().to_vec()
    }

    /// `M` is free iff its minimal cover is injective.
    pub fn is_free(&self, m: &FiniteModule<K>) -> bool {
        self.betti(m, 0)[0] * m.algebra().dim() == m.dim()
    }

    // rank of delta^i : Hom(F_{i-1}, N) -> Hom(F_i, N), i >= 1.
    fn hom_differential_rank(&self, res: &FreeResolutionPrefix<K>, i: usize, n: &FiniteModule<K>) -> usize {
        let alg = res.algebra();
        let f = alg.field();
        let rdim = alg.dim();
        let graded = res.is_graded() && n.is_graded();
        let dn = module_degrees(n, graded);
        let d = res.differential(i);
        if d.source_rank == 0 || d.target_rank == 0 || n.dim() == 0 {
            return 0;
        }
        let src_deg: Vec<i32> = if graded { res.gen_degrees(i - 1).to_vec() } else { vec![0; d.target_rank] };
        let tgt_deg: Vec<i32> = if graded { res.gen_degrees(i).to_vec() } else { vec![0; d.source_rank] };
        let ndim = n.dim();
        let dom = Blocks::new((0..d.target_rank * ndim).map(|g| dn[g % ndim] - src_deg[g / ndim]));
        let cod = Blocks::new((0..d.source_rank * ndim).map(|g| dn[g % ndim] - tgt_deg[g / ndim]));
        let mut by_target: Vec<Vec<(usize, usize, K::Elem)>> = vec![Vec::new(); d.target_rank];
        for (j, row) in d.rows.iter().enumerate() {
            for (g, c) in row {
                by_target[g / rdim].push((j, g % rdim, c.clone()));
            }
        }
        let cols = sparse_cols(n);
        let mut rank = 0;
        for s in dom.degrees() {
            let cb = cod.block(s);
            if cb.is_empty() {
                continue;
            }
            let mut ech = Echelon::new(f.clone(), cb.len());
            let cap = cb.len().min(dom.block(s).len());
            for &g in dom.block(s) {
                let (jp, a) = (g / ndim, g % ndim);
                let mut v = vec![f.zero(); cb.len()];
                for (j, r, c) in &by_target[jp] {
                    for (b, x) in &cols[*r][a] {
                        let l = cod.local_index(j * ndim + b);
                        v[l] = f.add(&v[l], &f.mul(c, x));
                    }
                }
                ech.insert(v);
                if ech.rank() == cap {
                    break;
                }
            }
            rank += ech.rank();
        }
        rank
    }

    // rank of d_i (x) L : F_i (x) L -> F_{i-1} (x) L, i >= 1.
    fn tensor_differential_rank(&self, res: &FreeResolutionPrefix<K>, i: usize, l: &FiniteModule<K>) -> usize {
        let alg = res.algebra();
        let f = alg.field();
        let rdim = alg.dim();
        let graded = res.is_graded() && l.is_graded();
        let dl = module_degrees(l, graded);
        let d = res.differential(i);
        if d.source_rank == 0 || d.target_rank == 0 || l.dim() == 0 {
            return 0;
        }
        let src_deg: Vec<i32> = if graded { res.gen_degrees(i).to_vec() } else { vec![0; d.source_rank] };
        let tgt_deg: Vec<i32> = if graded { res.gen_degrees(i - 1).to_vec() } else { vec![0; d.target_rank] };
        let ldim = l.dim();
        let dom = Blocks::new((0..d.source_rank * ldim).map(|g| src_deg[g / ldim] + dl[g % ldim]));
        let cod = Blocks::new((0..d.target_rank * ldim).map(|g| tgt_deg[g / ldim] + dl[g % ldim]));
        let cols = sparse_cols(l);
        let mut rank = 0;
        for s in dom.degrees() {
            let cb = cod.block(s);
            if cb.is_empty() {
                continue;
            }
            let mut ech = Echelon::new(f.clone(), cb.len());
            let cap = cb.len().min(dom.block(s).len());
            for &g in dom.block(s) {
                let (j, a) = (g / ldim, g % ldim);
                let mut v = vec![f.zero(); cb.len()];
                for (t, c) in &d.rows[j] {
                    let (jp, r) = (t / rdim, t % rdim);
                    for (b, x) in &cols[r][a] {
                        let p = cod.local_index(jp * ldim + b);
                        v[p] = f.add(&v[p], &f.mul(c, x));
                    }
                }
                ech.insert(v);
                if ech.rank() == cap {
                    break;
                }
            }
            rank += ech.rank();
        }
        rank
    }

    /// `dim Ext^i(M, N)` for `i = 0..=max`, straight from a resolution of `M`.
    pub fn ext_dims_direct(&self, m: &FiniteModule<K>, n: &FiniteModule<K>, max: usize) -> Result<Vec<usize>, ModuleError> {
        if !m.same_algebra(n) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let res = self.resolution(m, max + 1);
        let ranks: Vec<usize> = (1..=max + 1).map(|i| self.hom_differential_rank(&res, i, n)).collect();
        Ok((0..=max)
            .map(|i| {
                let before = if i == 0 { 0 } else { ranks[i - 1] };
                res.betti()[i] * n.dim() - ranks[i] - before
            })
            .collect())
    }

    /// `dim Tor_i(M, N)` for `i = 0..=max`, straight from a resolution of `M`.
    pub fn tor_dims_direct(&self, m: &FiniteModule<K>, n: &FiniteModule<K>, max: usize) -> Result<Vec<usize>, ModuleError> {
        if !m.same_algebra(n) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let res = self.resolution(m, max + 1);
        let ranks: Vec<usize> = (1..=max + 1).map(|i| self.tensor_differential_rank(&res, i, n)).collect();
        Ok((0..=max)
            .map(|i| {
                let before = if i == 0 { 0 } else { ranks[i - 1] };
                res.betti()[i] * n.dim() - ranks[i] - before
            })
            .collect())
    }

    fn cheaper(&self, a: &FiniteModule<K>, b: &FiniteModule<K>) -> bool {
        let ka = probe_key(&self.betti(a, 2), a.dim());
        let kb = probe_key(&self.betti(b, 2), b.dim());
        kb < ka
    }

    /// `dim Ext^i(M, N)` for `i = 0..=max`. Resolves whichever of `M` and
    /// `N^v` looks cheaper, using `Ext^i(M, N) = Ext^i(N^v, M^v)`.
    pub fn ext_dims(&self, m: &FiniteModule<K>, n: &FiniteModule<K>, max: usize) -> Result<Vec<usize>, ModuleError> {
        if !m.same_algebra(n) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let nd = matlis_dual(n);
        if self.cheaper(m, &nd) {
            self.ext_dims_direct(&nd, &matlis_dual(m), max)
        } else {
            self.ext_dims_direct(m, n, max)
        }
    }

    pub fn ext(&self, m: &FiniteModule<K>, n: &FiniteModule<K>, i: usize) -> Result<usize, ModuleError> {
        Ok(self.ext_dims(m, n, i)?[i])
    }

    /// `dim Tor_i(M, N)` for `i = 0..=max`, resolving the cheaper argument.
    pub fn tor_dims(&self, m: &FiniteModule<K>, n: &FiniteModule<K>, max: usize) -> Result<Vec<usize>, ModuleError> {
        if !m.same_algebra(n) {
            return Err(ModuleError::AlgebraMismatch);
        }
        if self.cheaper(m, n) {
            self.tor_dims_direct(n, m, max)
        } else {
            self.tor_dims_direct(m, n, max)
        }
    }

    pub fn tor(&self, m: &FiniteModule<K>, n: &FiniteModule<K>, i: usize) -> Result<usize, ModuleError> {
        Ok(self.tor_dims(m, n, i)?[i])
    }

    /// `mu^0 .. mu^n` of `M`.
    pub fn bass_numbers(&self, m: &FiniteModule<K>, n: usize, method: BassMethod) -> Vec<usize> {
        match method {
            BassMethod::Matlis => self.betti(&matlis_dual(m), n),
            BassMethod::ExtDirect => {
                let k = residue_field_module(m.algebra());
                self.ext_dims_direct(&k, m, n).expect("same algebra")
            }
        }
    }
}

/// `dim Ext^i_R(M, N)` with a throwaway engine.
pub fn ext<K: Field>(m: &FiniteModule<K>, n: &FiniteModule<K>, i: usize) -> Result<usize, ModuleError> {
    Engine::default().ext(m, n, i)
}

/// `dim Tor^R_i(M, N)` with a throwaway engine.
pub fn tor<K: Field>(m: &FiniteModule<K>, n: &FiniteModule<K>, i: usize) -> Result<usize, ModuleError> {
    Engine::default().tor(m, n, i)
}

/// `mu^0 .. mu^n` of `M` with a throwaway engine.
pub fn bass_numbers<K: Field>(m: &FiniteModule<K>, n: usize, method: BassMethod) -> Vec<usize> {
    Engine::default().bass_numbers(m, n, method)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteLocalAlgebra;
    use crate::exactlin::{PrimeField, Rationals};
    use crate::modcalc::module::regular_module;

    fn te(a: usize) -> Arc<FiniteLocalAlgebra<PrimeField>> {
        Arc::new(FiniteLocalAlgebra::trivial_extension(a, PrimeField::default()).unwrap())
    }

    #[test]
    fn ext_and_tor_on_trivial_extension() {
        let a = te(2);
        let e = Engine::new(1);
        let r = regular_module(&a);
        let k = residue_field_module(&a);
        let d = matlis_dual(&r);
        assert_eq!(e.ext(&k, &k, 1).unwrap(), 2);
        assert_eq!(e.tor(&k, &k, 1).unwrap(), 2);
        assert_eq!(e.ext_dims(&r, &k, 3).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(e.tor_dims(&r, &d, 3).unwrap(), vec![3, 0, 0, 0]);
        assert_eq!(e.ext_dims(&d, &d, 6).unwrap(), vec![3, 0, 0, 0, 0, 0, 0]);
        assert_ne!(e.ext(&d, &r, 1).unwrap(), 0);
        // Hom(k, R) is the socle.
        assert_eq!(e.ext(&k, &r, 0).unwrap(), 2);
    }

    #[test]
    fn bass_methods_agree() {
        let a = te(2);
        let e = Engine::new(0);
        let r = regular_module(&a);
        let direct = e.bass_numbers(&r, 6, BassMethod::ExtDirect);
        let matlis = e.bass_numbers(&r, 6, BassMethod::Matlis);
        assert_eq!(direct, vec![2, 3, 6, 12, 24, 48, 96]);
        assert_eq!(direct, matlis);
        let d = matlis_dual(&r);
        assert_eq!(e.bass_numbers(&d, 4, BassMethod::ExtDirect), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn rationals_agree_with_prime_field() {
        let q = Arc::new(FiniteLocalAlgebra::trivial_extension(2, Rationals).unwrap());
        let r = regular_module(&q);
        assert_eq!(bass_numbers(&r, 4, BassMethod::ExtDirect), vec![2, 3, 6, 12, 24]);
    }
}
