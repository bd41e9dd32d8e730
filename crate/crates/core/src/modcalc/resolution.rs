use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::FiniteLocalAlgebra;
use crate::exactlin::{Echelon, Field, Matrix};

use super::blocks::Blocks;
use super::module::FiniteModule;

/// Differential `d_i : F_i -> F_{i-1}`: row `j` is the image of the `j`-th
/// generator of `F_i`, sparse in the coordinates `j' * dim R + r` of `F_{i-1}`.
#[derive(Clone, Debug)]
pub struct Differential<K: Field> {
    pub source_rank: usize,
    pub target_rank: usize,
    pub rows: Vec<Vec<(usize, K::Elem)>>,
}

/// A prefix `F_N -> ... -> F_0 -> M` of a minimal free resolution.
#[derive(Clone, Debug)]
pub struct FreeResolutionPrefix<K: Field> {
    module: FiniteModule<K>,
    graded: bool,
    betti: Vec<usize>,
    gen_degrees: Vec<Vec<i32>>,
    cover: Arc<Vec<Vec<K::Elem>>>,
    differentials: Vec<Arc<Differential<K>>>,
}

impl<K: Field> FreeResolutionPrefix<K> {
    pub fn module(&self) -> &FiniteModule<K> {
        &self.module
    }
    pub fn algebra(&self) -> &Arc<FiniteLocalAlgebra<K>> {
        self.module.algebra()
    }
    pub fn length(&self) -> usize {
        self.betti.len() - 1
    }
    pub fn betti(&self) -> &[usize] {
        &self.betti
    }
    pub fn is_graded(&self) -> bool {
        self.graded
    }
    /// Degrees of the generators of `F_i`.
    pub fn gen_degrees(&self, i: usize) -> &[i32] {
        &self.gen_degrees[i]
    }
    /// Images in `M` of the generators of `F_0`.
    pub fn cover(&self) -> &[Vec<K::Elem>] {
        &self.cover
    }
    /// `d_i` for `1 <= i <= length`.
    pub fn differential(&self, i: usize) -> &Differential<K> {
        &self.differentials[i - 1]
    }

    fn free_linear_map(&self, i: usize) -> Matrix<K> {
        let alg = self.algebra();
        let f = alg.field();
        let n = alg.dim();
        let d = self.differential(i);
        let mut out = Matrix::zeros(f, d.target_rank * n, d.source_rank * n);
        for (j, row) in d.rows.iter().enumerate() {
            for r in 0..n {
                for (g, x) in row {
                    let (jj, rr) = (g / n, g % n);
                    for (k, c) in alg.product_terms(r, rr) {
                        let t = jj * n + k;
                        let v = f.add(out.get(t, j * n + r), &f.mul(x, c));
                        out.set(t, j * n + r, v);
                    }
                }
            }
        }
        out
    }

    fn cover_linear_map(&self) -> Matrix<K> {
        let alg = self.algebra();
        let f = alg.field();
        let n = alg.dim();
        let m = &self.module;
        let mut out = Matrix::zeros(f, m.dim(), self.betti[0] * n);
        for (j, g) in self.cover.iter().enumerate() {
            for r in 0..n {
                let img = m.action(r).mul_vec(g);
                for (t, x) in img.into_iter().enumerate() {
                    out.set(t, j * n + r, x);
                }
            }
        }
        out
    }

    /// Checks `d d = 0`, minimality, and exactness on the whole prefix using
    /// dense F-linear matrices. Meant for small instances.
    pub fn verify(&self) -> Result<(), String> {
        let alg = self.algebra();
        let f = alg.field();
        let n = alg.dim();
        let mut maps = vec![self.cover_linear_map()];
        for i in 1..=self.length() {
            maps.push(self.free_linear_map(i));
        }
        if maps[0].rank() != self.module.dim() {
            return Err("cover is not surjective".into());
        }
        for i in 1..=self.length() {
            let d = self.differential(i);
            for row in &d.rows {
                if row.iter().any(|(g, x)| g % n == 0 && !f.is_zero(x)) {
                    return Err(format!("d_{i} has a unit entry"));
                }
            }
            if !maps[i - 1].mul(&maps[i]).is_zero() {
                return Err(format!("d_{} d_{i} is not zero", i - 1));
            }
            let kernel = maps[i - 1].cols() - maps[i - 1].rank();
            if maps[i].rank() != kernel {
                return Err(format!("not exact at F_{}", i - 1));
            }
        }
        let mm = {
            let mut e = Echelon::new(f.clone(), self.module.dim());
            for &g in alg.generators() {
                let a = self.module.action(g);
                for c in 0..a.cols() {
                    e.insert(a.col(c));
                }
            }
            e.rank()
        };
        if self.betti[0] != self.module.dim() - mm {
            return Err("F_0 is not a minimal cover".into());
        }
        Ok(())
    }
}

/// Where the current syzygy lives: the module itself or the previous free module.
enum Ambient {
    Module,
    Free,
}

/// A subspace with a basis that restricts to the identity on `coord_cols`.
#[derive(Clone, Debug)]
struct Subspace<E> {
    rows: Vec<Vec<E>>,
    coord_cols: Vec<usize>,
}

/// Incrementally extendable minimal resolution of one module.
pub struct Resolver<K: Field> {
    module: FiniteModule<K>,
    graded: bool,
    ambient: Ambient,
    blocks: Blocks,
    omega: BTreeMap<i32, Subspace<K::Elem>>,
    gens: Vec<(i32, Vec<K::Elem>)>,
    betti: Vec<usize>,
    gen_degrees: Vec<Vec<i32>>,
    cover: Arc<Vec<Vec<K::Elem>>>,
    differentials: Vec<Arc<Differential<K>>>,
}

impl<K: Field> Resolver<K> {
    pub fn new(module: &FiniteModule<K>) -> Self {
        let graded = module.is_graded();
        let blocks = module.blocks();
        let f = module.field();
        let omega = blocks
            .degrees()
            .map(|d| {
                let n = blocks.block(d).len();
                let rows = (0..n)
                    .map(|i| {
                        let mut v = vec![f.zero(); n];
                        v[i] = f.one();
                        v
                    })
                    .collect();
                (
                    d,
                    Subspace {
                        rows,
                        coord_cols: (0..n).collect(),
                    },
                )
            })
            .collect();
        let mut r = Resolver {
            module: module.clone(),
            graded,
            ambient: Ambient::Module,
            blocks,
            omega,
            gens: Vec::new(),
            betti: Vec::new(),
            gen_degrees: Vec::new(),
            cover: Arc::new(Vec::new()),
            differentials: Vec::new(),
        };
        r.select_generators();
        r
    }

    pub fn module(&self) -> &FiniteModule<K> {
        &self.module
    }

    pub fn length(&self) -> usize {
        self.betti.len() - 1
    }

    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    fn alg_degree(&self, s: usize) -> i32 {
        if self.graded {
            self.module.algebra().degree(s) as i32
        } else {
            0
        }
    }

    // e_s . v for v in ambient block d; returns the target degree and vector.
    fn act(&self, s: usize, d: i32, v: &[K::Elem]) -> (i32, Vec<K::Elem>) {
        let alg = self.module.algebra();
        let f = alg.field();
        let n = alg.dim();
        let target = d + self.alg_degree(s);
        let tb = self.blocks.block(target);
        let mut out = vec![f.zero(); tb.len()];
        if tb.is_empty() {
            return (target, out);
        }
        let src = self.blocks.block(d);
        match self.ambient {
            Ambient::Module => {
                let a = self.module.action(s);
                for (p, x) in v.iter().enumerate() {
                    if f.is_zero(x) {
                        continue;
                    }
                    let g = src[p];
                    for &t in tb {
                        let c = a.get(t, g);
                        if !f.is_zero(c) {
                            let l = self.blocks.local_index(t);
                            out[l] = f.add(&out[l], &f.mul(c, x));
                        }
                    }
                }
            }
            Ambient::Free => {
                for (p, x) in v.iter().enumerate() {
                    if f.is_zero(x) {
                        continue;
                    }
                    let g = src[p];
                    let (j, r) = (g / n, g % n);
                    for (k, c) in alg.product_terms(s, r) {
                        let l = self.blocks.local_index(j * n + k);
                        out[l] = f.add(&out[l], &f.mul(c, x));
                    }
                }
            }
        }
        (target, out)
    }

    // Picks basis elements of each omega block outside m * omega, lowest
    // degree first and in basis order within a degree.
    fn select_generators(&mut self) {
        let f = self.module.field().clone();
        let alg = self.module.algebra().clone();
        let mut gens = Vec::new();
        for (&d, sub) in &self.omega {
            let dim = sub.rows.len();
            if dim == 0 {
                continue;
            }
            let mut ech = Echelon::new(f.clone(), dim);
            'cands: for &s in alg.generators() {
                let src = d - self.alg_degree(s);
                let Some(src_sub) = self.omega.get(&src) else {
                    continue;
                };
                for u in &src_sub.rows {
                    let (t, w) = self.act(s, src, u);
                    debug_assert_eq!(t, d);
                    let local: Vec<K::Elem> = sub.coord_cols.iter().map(|&c| w[c].clone()).collect();
                    ech.insert(local);
                    if ech.rank() == dim {
                        break 'cands;
                    }
                }
            }
            for (l, row) in sub.rows.iter().enumerate() {
                if ech.rank() == dim {
                    break;
                }
                let mut unit = vec![f.zero(); dim];
                unit[l] = f.one();
                if ech.insert(unit) {
                    gens.push((d, row.clone()));
                }
            }
        }
        match self.ambient {
            Ambient::Module => {
                let cover = gens
                    .iter()
                    .map(|(d, v)| {
                        let mut g = vec![f.zero(); self.module.dim()];
                        for (p, x) in v.iter().enumerate() {
                            g[self.blocks.block(*d)[p]] = x.clone();
                        }
                        g
                    })
                    .collect();
                self.cover = Arc::new(cover);
            }
            Ambient::Free => {
                let rows = gens
                    .iter()
                    .map(|(d, v)| {
                        let blk = self.blocks.block(*d);
                        v.iter()
                            .enumerate()
                            .filter(|(_, x)| !f.is_zero(x))
                            .map(|(p, x)| (blk[p], x.clone()))
                            .collect()
                    })
                    .collect();
                let target_rank = *self.betti.last().unwrap();
                self.differentials.push(Arc::new(Differential {
                    source_rank: gens.len(),
                    target_rank,
                    rows,
                }));
            }
        }
        self.betti.push(gens.len());
        self.gen_degrees.push(gens.iter().map(|(d, _)| *d).collect());
        self.gens = gens;
    }

    // Replaces omega by the kernel of the free cover of the current generators.
    fn advance(&mut self) {
        let alg = self.module.algebra().clone();
        let f = alg.field().clone();
        let n = alg.dim();
        let gdeg: Vec<i32> = self.gens.iter().map(|(d, _)| *d).collect();
        let new_blocks = Blocks::new(
            (0..gdeg.len() * n).map(|g| gdeg[g / n] + self.alg_degree(g % n)),
        );
        let mut new_omega = BTreeMap::new();
        for d in new_blocks.degrees() {
            let cols = new_blocks.block(d);
            let width = cols.len();
            let (rows, coord_cols) = match self.omega.get(&d) {
                Some(sub) if !sub.rows.is_empty() => {
                    let h = sub.rows.len();
                    let mut mx = Matrix::zeros(&f, h, width);
                    for (c, &g) in cols.iter().enumerate() {
                        let (j, r) = (g / n, g % n);
                        let (gd, gv) = &self.gens[j];
                        let (t, w) = self.act(r, *gd, gv);
                        debug_assert_eq!(t, d);
                        for (l, &cc) in sub.coord_cols.iter().enumerate() {
                            mx.set(l, c, w[cc].clone());
                        }
                    }
                    mx.kernel_with_free_cols()
                }
                _ => {
                    let rows = (0..width)
                        .map(|i| {
                            let mut v = vec![f.zero(); width];
                            v[i] = f.one();
                            v
                        })
                        .collect();
                    (rows, (0..width).collect())
                }
            };
            if !rows.is_empty() {
                new_omega.insert(d, Subspace { rows, coord_cols });
            }
        }
        self.ambient = Ambient::Free;
        self.blocks = new_blocks;
        self.omega = new_omega;
    }

    /// Extends the resolution until `F_len` is known.
    pub fn extend_to(&mut self, len: usize) {
        while self.length() < len {
            if self.gens.is_empty() {
                // Omega vanished: the resolution is finite.
                self.betti.push(0);
                self.gen_degrees.push(Vec::new());
                self.differentials.push(Arc::new(Differential {
                    source_rank: 0,
                    target_rank: *self.betti.iter().rev().nth(1).unwrap(),
                    rows: Vec::new(),
                }));
                continue;
            }
            self.advance();
            self.select_generators();
        }
    }

    /// Snapshot of the first `len + 1` free modules.
    pub fn prefix(&mut self, len: usize) -> FreeResolutionPrefix<K> {
        self.extend_to(len);
        FreeResolutionPrefix {
            module: self.module.clone(),
            graded: self.graded,
            betti: self.betti[..=len].to_vec(),
            gen_degrees: self.gen_degrees[..=len].to_vec(),
            cover: self.cover.clone(),
            differentials: self.differentials[..len].to_vec(),
        }
    }
}

/// A length-`n` prefix of the minimal free resolution of `m`.
pub fn minimal_free_resolution<K: Field>(m: &FiniteModule<K>, n: usize) -> FreeResolutionPrefix<K> {
    Resolver::new(m).prefix(n)
}

/// `beta_0 .. beta_n` of `m`.
pub fn betti_numbers<K: Field>(m: &FiniteModule<K>, n: usize) -> Vec<usize> {
    minimal_free_resolution(m, n).betti().to_vec()
}
