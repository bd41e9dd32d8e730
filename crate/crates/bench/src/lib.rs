//! Fixtures shared by the benches.

use std::sync::Arc;

use semidual_core::{Field, FiniteLocalAlgebra, Matrix, PrimeField};

/// Tensor product of the trivial extensions `F ⋉ F^a` for each exponent.
pub fn tensor_ring(exponents: &[usize]) -> Arc<FiniteLocalAlgebra<PrimeField>> {
    let f = PrimeField::default();
    let mut it = exponents.iter();
    let first = FiniteLocalAlgebra::trivial_extension(*it.next().expect("at least one exponent"), f).unwrap();
    let alg = it.fold(first, |acc, &a| {
        FiniteLocalAlgebra::tensor_algebra(&acc, &FiniteLocalAlgebra::trivial_extension(a, f).unwrap()).unwrap()
    });
    Arc::new(alg)
}

/// Deterministic dense matrix with a rank deficit of `rows / 4`.
pub fn dense_matrix(rows: usize, cols: usize) -> Matrix<PrimeField> {
    let f = PrimeField::default();
    let mut state = 0x2545_f491_u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        f.from_i64((state % 32003) as i64)
    };
    let mut data: Vec<Vec<_>> = (0..rows).map(|_| (0..cols).map(|_| next()).collect()).collect();
    for r in (rows - rows / 4)..rows {
        data[r] = data[r - rows / 2].clone();
    }
    Matrix::from_rows(&f, cols, data)
}
