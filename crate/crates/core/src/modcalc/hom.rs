use std::collections::BTreeMap;

use crate::exactlin::{Echelon, Field, Matrix};

use super::module::{FiniteModule, ModuleError};

/// `Hom_R(M, N)` as a module, together with an explicit basis of R-linear maps.
#[derive(Clone, Debug)]
pub struct HomModule<K: Field> {
    module: FiniteModule<K>,
    maps: Vec<Matrix<K>>,
    coord_pos: Vec<(usize, usize)>,
}

impl<K: Field> HomModule<K> {
    pub fn module(&self) -> &FiniteModule<K> {
        &self.module
    }

    pub fn into_module(self) -> FiniteModule<K> {
        self.module
    }

    /// Basis maps as `dim N x dim M` matrices.
    pub fn maps(&self) -> &[Matrix<K>] {
        &self.maps
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    /// Coordinates of an R-linear map in the stored basis. Each basis map is
    /// one at its own coordinate entry and zero at everyone else's, so reading
    /// those entries suffices.
    pub fn coords_of(&self, f: &Matrix<K>) -> Vec<K::Elem> {
        self.coord_pos.iter().map(|&(a, b)| f.get(a, b).clone()).collect()
    }

    pub fn map_from_coords(&self, c: &[K::Elem]) -> Matrix<K> {
        let field = self.module.field();
        let (rows, cols) = self
            .maps
            .first()
            .map_or((0, 0), |m| (m.rows(), m.cols()));
        let mut out = Matrix::zeros(field, rows, cols);
        for (x, m) in c.iter().zip(&self.maps) {
            if !field.is_zero(x) {
                out = out.add(&m.scale(x));
            }
        }
        out
    }
}

struct HomBasis<K: Field> {
    maps: Vec<Matrix<K>>,
    pos: Vec<(usize, usize)>,
    degrees: Vec<i32>,
}

fn sparse_cols<K: Field>(m: &Matrix<K>) -> Vec<Vec<(usize, K::Elem)>> {
    let f = m.field();
    (0..m.cols())
        .map(|c| {
            (0..m.rows())
                .filter(|&r| !f.is_zero(m.get(r, c)))
                .map(|r| (r, m.get(r, c).clone()))
                .collect()
        })
        .collect()
}

fn sparse_rows<K: Field>(m: &Matrix<K>) -> Vec<Vec<(usize, K::Elem)>> {
    let f = m.field();
    (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .enumerate()
                .filter(|(_, x)| !f.is_zero(x))
                .map(|(c, x)| (c, x.clone()))
                .collect()
        })
        .collect()
}

// Solves X A_g = B_g X over the algebra generators g, one homogeneous
// degree at a time when both modules are graded.
fn hom_basis<K: Field>(m: &FiniteModule<K>, n: &FiniteModule<K>) -> HomBasis<K> {
    let alg = m.algebra();
    let f = alg.field();
    let graded = m.is_graded() && n.is_graded();
    let dm: Vec<i32> = if graded { m.degrees().unwrap().to_vec() } else { vec![0; m.dim()] };
    let dn: Vec<i32> = if graded { n.degrees().unwrap().to_vec() } else { vec![0; n.dim()] };
    let gdeg = |g: usize| if graded { alg.degree(g) as i32 } else { 0 };
    let (mdim, ndim) = (m.dim(), n.dim());

    let mut classes: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
    let mut local = vec![0usize; mdim * ndim];
    for a in 0..ndim {
        for b in 0..mdim {
            let v = classes.entry(dn[a] - dm[b]).or_default();
            local[a * mdim + b] = v.len();
            v.push((a, b));
        }
    }
    let gens = alg.generators();
    let a_cols: Vec<_> = gens.iter().map(|&g| sparse_cols(m.action(g))).collect();
    let b_rows: Vec<_> = gens.iter().map(|&g| sparse_rows(n.action(g))).collect();

    let mut out = HomBasis {
        maps: Vec::new(),
        pos: Vec::new(),
        degrees: Vec::new(),
    };
    for (&delta, vars) in &classes {
        let width = vars.len();
        let mut ech = Echelon::new(f.clone(), width);
        'eqs: for (gi, &g) in gens.iter().enumerate() {
            let dg = gdeg(g);
            for a in 0..ndim {
                for b in 0..mdim {
                    if dn[a] - dm[b] - dg != delta {
                        continue;
                    }
                    let mut row = vec![f.zero(); width];
                    let mut nonzero = false;
                    for (c, x) in &a_cols[gi][b] {
                        let i = local[a * mdim + c];
                        row[i] = f.add(&row[i], x);
                        nonzero = true;
                    }
                    for (c, x) in &b_rows[gi][a] {
                        let i = local[c * mdim + b];
                        row[i] = f.sub(&row[i], x);
                        nonzero = true;
                    }
                    if nonzero {
                        ech.insert(row);
                        if ech.rank() == width {
                            break 'eqs;
                        }
                    }
                }
            }
        }
        let pivots = ech.into_reduced();
        let mut is_pivot = vec![false; width];
        for p in &pivots {
            is_pivot[p.col] = true;
        }
        for free in (0..width).filter(|&c| !is_pivot[c]) {
            let mut x = Matrix::zeros(f, ndim, mdim);
            let (fa, fb) = vars[free];
            x.set(fa, fb, f.one());
            for p in &pivots {
                if p.col < free && free < p.end && !f.is_zero(&p.row[free]) {
                    let (pa, pb) = vars[p.col];
                    x.set(pa, pb, f.neg(&p.row[free]));
                }
            }
            out.maps.push(x);
            out.pos.push((fa, fb));
            out.degrees.push(delta);
        }
    }
    out
}

/// Dimension of `Hom_R(M, N)` over the base field.
pub fn hom_dim<K: Field>(m: &FiniteModule<K>, n: &FiniteModule<K>) -> Result<usize, ModuleError> {
    if !m.same_algebra(n) {
        return Err(ModuleError::AlgebraMismatch);
    }
    Ok(hom_basis(m, n).maps.len())
}

/// `Hom_R(M, N)` with `(r f)(x) = r f(x)`.
pub fn hom_module<K: Field>(m: &FiniteModule<K>, n: &FiniteModule<K>) -> Result<HomModule<K>, ModuleError> {
    if !m.same_algebra(n) {
        return Err(ModuleError::AlgebraMismatch);
    }
    let alg = m.algebra();
    let f = alg.field();
    let basis = hom_basis(m, n);
    let d = basis.maps.len();
    let graded = m.is_graded() && n.is_graded();
    let action = (0..alg.dim())
        .map(|i| {
            let bi = n.action(i);
            let mut act = Matrix::zeros(f, d, d);
            for (l, fl) in basis.maps.iter().enumerate() {
                for (k, &(a, b)) in basis.pos.iter().enumerate() {
                    let mut acc = f.zero();
                    for c in 0..n.dim() {
                        let x = bi.get(a, c);
                        if !f.is_zero(x) {
                            acc = f.add(&acc, &f.mul(x, fl.get(c, b)));
                        }
                    }
                    act.set(k, l, acc);
                }
            }
            act
        })
        .collect();
    let label = format!("Hom({},{})", m.label().unwrap_or("M"), n.label().unwrap_or("N"));
    let degrees = graded.then(|| basis.degrees.clone());
    let module = FiniteModule::from_parts_unchecked(alg.clone(), d, action, degrees, Some(label));
    Ok(HomModule {
        module,
        maps: basis.maps,
        coord_pos: basis.pos,
    })
}

/// Checks that `f` commutes with every action matrix.
pub fn is_homomorphism<K: Field>(f: &Matrix<K>, m: &FiniteModule<K>, n: &FiniteModule<K>) -> bool {
    (0..m.algebra().dim()).all(|i| f.mul(m.action(i)) == n.action(i).mul(f))
}
