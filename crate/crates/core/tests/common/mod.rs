// Independent oracles for the integration tests. Nothing here calls into the
// crate's linear algebra.
#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semidual_core::{FiniteLocalAlgebra, FiniteModule, Matrix, PrimeField};

/// Power series of `∏(a - t) / ∏(1 - d t)` through `order`, in plain i128.
pub fn expand(num: &[i128], den: &[i128], order: usize) -> Vec<i128> {
    let mut s = vec![0i128; order + 1];
    s[0] = 1;
    for &a in num {
        let mut next = vec![0i128; order + 1];
        for i in 0..=order {
            next[i] += a * s[i];
            if i + 1 <= order {
                next[i + 1] -= s[i];
            }
        }
        s = next;
    }
    for &d in den {
        for i in 1..=order {
            s[i] += d * s[i - 1];
        }
    }
    s
}

/// Coefficientwise Cauchy product, truncated to the shorter input.
pub fn cauchy(a: &[i128], b: &[i128]) -> Vec<i128> {
    let n = a.len().min(b.len());
    (0..n).map(|m| (0..=m).map(|i| a[i] * b[m - i]).sum()).collect()
}

/// Rank over GF(p) by textbook elimination on a copy.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..cols {
                    m[r][k] = (m[r][k] + p - f * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `dim Hom_R(M, N)` as the nullity of the stacked commutation equations
/// `N_i X - X M_i = 0`, assembled entry by entry.
pub fn hom_dim_oracle(m: &FiniteModule<PrimeField>, n: &FiniteModule<PrimeField>, p: u64) -> usize {
    let (dm, dn) = (m.dim(), n.dim());
    let unknowns = dn * dm;
    let mut eqs: Vec<Vec<u64>> = Vec::new();
    for g in 0..m.algebra().dim() {
        let (am, an) = (m.action(g), n.action(g));
        for r in 0..dn {
            for c in 0..dm {
                let mut row = vec![0u64; unknowns];
                for k in 0..dn {
                    row[k * dm + c] = (row[k * dm + c] + *an.get(r, k) as u64) % p;
                }
                for k in 0..dm {
                    row[r * dm + k] = (row[r * dm + k] + p - *am.get(k, c) as u64 % p) % p;
                }
                eqs.push(row);
            }
        }
    }
    unknowns - rank_mod_p(&eqs, p)
}

pub fn random_invertible(f: &PrimeField, n: usize, seed: u64) -> (Matrix<PrimeField>, Matrix<PrimeField>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = f.characteristic();
    loop {
        let data: Vec<u32> = (0..n * n).map(|_| rng.gen_range(0..p) as u32).collect();
        let m = Matrix::from_vec(f, n, n, data);
        if m.rank() == n {
            let inv = m.solve(&Matrix::identity(f, n)).unwrap();
            return (m, inv);
        }
    }
}

/// The same module written in a random basis; grading is dropped.
pub fn scramble(m: &FiniteModule<PrimeField>, seed: u64) -> FiniteModule<PrimeField> {
    let (p, pinv) = random_invertible(m.field(), m.dim(), seed);
    let action = m.actions().iter().map(|a| pinv.mul(a).mul(&p)).collect();
    FiniteModule::from_parts(m.algebra().clone(), m.dim(), action, None, Some("scrambled".into())).unwrap()
}

pub fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn trivial_ext(a: usize, f: PrimeField) -> Arc<FiniteLocalAlgebra<PrimeField>> {
    Arc::new(FiniteLocalAlgebra::trivial_extension(a, f).unwrap())
}

pub fn tensor2(a: usize, b: usize, f: PrimeField) -> Arc<FiniteLocalAlgebra<PrimeField>> {
    let x = FiniteLocalAlgebra::trivial_extension(a, f).unwrap();
    let y = FiniteLocalAlgebra::trivial_extension(b, f).unwrap();
    Arc::new(FiniteLocalAlgebra::tensor_algebra(&x, &y).unwrap())
}
