use std::collections::BTreeMap;

use crate::exactlin::{Echelon, Field, Matrix, Pivot};

use super::blocks::Blocks;
use super::module::{FiniteModule, ModuleError};

/// `M ⊗_R N` as the quotient of `M ⊗_F N` (coordinate `a * dim N + b`) by the
/// relations `(g x) ⊗ y - x ⊗ (g y)` over algebra generators `g`. The basis is
/// the set of non-pivot coordinates of the relation space.
pub fn tensor_module<K: Field>(m: &FiniteModule<K>, n: &FiniteModule<K>) -> Result<FiniteModule<K>, ModuleError> {
    if !m.same_algebra(n) {
        return Err(ModuleError::AlgebraMismatch);
    }
    let alg = m.algebra();
    let f = alg.field();
    let graded = m.is_graded() && n.is_graded();
    let (mdim, ndim) = (m.dim(), n.dim());
    let deg = |a: usize, b: usize| -> i32 {
        if graded {
            m.degrees().unwrap()[a] + n.degrees().unwrap()[b]
        } else {
            0
        }
    };
    let blocks = Blocks::new((0..mdim * ndim).map(|g| deg(g / ndim, g % ndim)));
    let gdeg = |g: usize| if graded { alg.degree(g) as i32 } else { 0 };

    // Relations are homogeneous; collect each in the block of its degree.
    let mut echelons: BTreeMap<i32, Echelon<K>> = blocks
        .degrees()
        .map(|d| (d, Echelon::new(f.clone(), blocks.block(d).len())))
        .collect();
    for &g in alg.generators() {
        let am = m.action(g);
        let an = n.action(g);
        for a in 0..mdim {
            for b in 0..ndim {
                let d = deg(a, b) + gdeg(g);
                let Some(ech) = echelons.get_mut(&d) else {
                    continue;
                };
                let mut row = vec![f.zero(); ech.width()];
                let mut nonzero = false;
                for c in 0..mdim {
                    let x = am.get(c, a);
                    if !f.is_zero(x) {
                        let i = blocks.local_index(c * ndim + b);
                        row[i] = f.add(&row[i], x);
                        nonzero = true;
                    }
                }
                for c in 0..ndim {
                    let x = an.get(c, b);
                    if !f.is_zero(x) {
                        let i = blocks.local_index(a * ndim + c);
                        row[i] = f.sub(&row[i], x);
                        nonzero = true;
                    }
                }
                if nonzero && ech.rank() < ech.width() {
                    ech.insert(row);
                }
            }
        }
    }
    let reduced: BTreeMap<i32, Vec<Pivot<K::Elem>>> =
        echelons.into_iter().map(|(d, e)| (d, e.into_reduced())).collect();

    let mut is_pivot = vec![false; mdim * ndim];
    for (d, piv) in &reduced {
        for p in piv {
            is_pivot[blocks.block(*d)[p.col]] = true;
        }
    }
    let basis: Vec<usize> = (0..mdim * ndim).filter(|&g| !is_pivot[g]).collect();
    let mut quotient_index = vec![usize::MAX; mdim * ndim];
    for (q, &g) in basis.iter().enumerate() {
        quotient_index[g] = q;
    }
    let dim = basis.len();

    let action = (0..alg.dim())
        .map(|i| {
            let am = m.action(i);
            let mut act = Matrix::zeros(f, dim, dim);
            for (q, &g) in basis.iter().enumerate() {
                let (a, b) = (g / ndim, g % ndim);
                let target = deg(a, b) + if graded { alg.degree(i) as i32 } else { 0 };
                let blk = blocks.block(target);
                if blk.is_empty() {
                    continue;
                }
                let mut v = vec![f.zero(); blk.len()];
                let mut nonzero = false;
                for c in 0..mdim {
                    let x = am.get(c, a);
                    if !f.is_zero(x) {
                        v[blocks.local_index(c * ndim + b)] = x.clone();
                        nonzero = true;
                    }
                }
                if !nonzero {
                    continue;
                }
                f.reduce(&mut v, &reduced[&target]);
                for (l, x) in v.into_iter().enumerate() {
                    if !f.is_zero(&x) {
                        act.set(quotient_index[blk[l]], q, x);
                    }
                }
            }
            act
        })
        .collect();
    let degrees = graded.then(|| basis.iter().map(|&g| blocks.degree_of(g)).collect());
    let label = format!("{}(x){}", m.label().unwrap_or("M"), n.label().unwrap_or("N"));
    Ok(FiniteModule::from_parts_unchecked(alg.clone(), dim, action, degrees, Some(label)))
}
